#include "reslab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "reslab/disk.hpp"
#include "reslab/errors.hpp"
#include "reslab/geometry.hpp"
#include "reslab/halfline.hpp"
#include "reslab/parallel.hpp"
#include "reslab/potential.hpp"
#include "reslab/report.hpp"
#include "reslab/resonance.hpp"

namespace reslab::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Options {
  std::string out_dir;
  std::string format = "json";
  std::size_t jobs = 1;
  std::uint64_t seed = 1;
  std::string config;

  std::string potential;
  std::string curve = R"({"kind":"circle","radius":1})";
  double alpha_max = 100.0;
  double tol = 1e-8;
  std::size_t samples = 256;
  double c_omega = 0.25;
  std::vector<double> eps;
  double length = 1.0;
  std::size_t k_eig = 1;
  std::size_t layer_cells = 400;
  std::size_t outer_cells = 4000;
  double delta = 0.1;
  std::vector<int> ms;
  double beta = -10.0;
  std::size_t k_pairs = 3;
  std::string limit = "robin";
  double gamma = 0.5;
  std::size_t n = 8000;
  std::size_t trials = 20;
};

struct Output {
  json result;
  Table table;
  std::optional<std::uint64_t> potential_hash;
  json tolerances = json::object();
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json_arg(const std::string& s, const char* what) {
  if (s.empty()) throw DomainError(std::string(what) + " is required");
  const std::string text = s.front() == '{' ? s : read_file(s);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(std::string(what) + ": malformed JSON: " + e.what());
  }
}

Potential load_potential(const Options& o) { return Potential::from_json(parse_json_arg(o.potential, "--potential")); }

void require_sorted_positive(const std::vector<double>& v, const char* name) {
  if (v.empty()) throw DomainError(std::string(name) + " must not be empty");
  bool up = true, down = true;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0) || !std::isfinite(v[i])) throw DomainError(std::string(name) + " entries must be positive");
    if (i > 0) {
      up = up && v[i] > v[i - 1];
      down = down && v[i] < v[i - 1];
    }
  }
  if (!up && !down) throw DomainError(std::string(name) + " must be strictly sorted");
}

void require(bool ok, const std::string& message) {
  if (!ok) throw DomainError(message);
}

std::string hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------- commands

Output resonance_scan(const Options& o) {
  const auto v = load_potential(o);
  require(o.alpha_max > 0.0, "--alpha-max must be positive");
  Output r;
  r.potential_hash = v.spec_hash();
  const auto roots = resonant_couplings(v, o.alpha_max);
  r.result = {{"couplings", roots}};
  r.table.columns = {"n", "alpha", "residual"};
  for (std::size_t i = 0; i < roots.size(); ++i) {
    r.table.add_row({static_cast<double>(i), roots[i], resonance_residual(v.scaled(roots[i]))});
  }
  r.tolerances = {{"coupling_rel_tol", 1e-10}, {"richardson_tol", 1e-7}};
  return r;
}

Output resonance_check(const Options& o) {
  const auto v = load_potential(o);
  require(o.tol > 0.0, "--tol must be positive");
  Output r;
  r.potential_hash = v.spec_hash();
  const auto h = check_hypothesis(v, o.tol);
  const auto s = shoot(v);
  r.result = {{"resonant", h.resonant},
              {"residual", h.residual},
              {"nodes", s.nodes},
              {"negative_count", h.negative_count},
              {"mu", h.mu ? json(*h.mu) : json(nullptr)},
              {"hypothesis_holds", h.holds()}};
  r.table.columns = {"resonant", "residual", "nodes", "negative_count", "mu"};
  r.table.add_row({h.resonant ? 1.0 : 0.0, h.residual, static_cast<double>(s.nodes),
                   static_cast<double>(h.negative_count), h.mu ? *h.mu : std::nan("")});
  r.tolerances = {{"resonance_tol", o.tol}, {"richardson_tol", 1e-7}, {"bound_state_rel_tol", 1e-6}};
  return r;
}

Output resonance_solution(const Options& o) {
  const auto v = load_potential(o);
  require(o.samples >= 2, "--samples must be at least 2");
  Output r;
  r.potential_hash = v.spec_hash();
  const auto c = canonical_solution(v, o.tol);
  r.result = {{"resonant", c.resonant()},
              {"tail", c.resonant() ? "constant" : "unit_slope"},
              {"sup_norm", c.sup_norm()},
              {"sup_norm_derivative", c.sup_norm_derivative()},
              {"sup_norm_minus_one", c.sup_norm_minus_one()},
              {"endpoint_residual", c.endpoint_residual()}};
  r.table.columns = {"t", "psi0", "dpsi0"};
  for (std::size_t i = 0; i <= o.samples; ++i) {
    const double t = v.support() * static_cast<double>(i) / static_cast<double>(o.samples);
    r.table.add_row({t, c.value(t), c.derivative(t)});
  }
  r.tolerances = {{"resonance_tol", o.tol}, {"richardson_tol", 1e-7}};
  return r;
}

Output potential_classify(const Options& o) {
  const auto v = load_potential(o);
  Output r;
  r.potential_hash = v.spec_hash();
  const auto h = classify_hardy(v, o.c_omega);
  r.result = {{"admissible", h.admissible},
              {"margin", h.margin},
              {"hardy_ratio", h.hardy_ratio},
              {"c_omega", o.c_omega},
              {"sup_norm", v.sup_norm()},
              {"nonpositive", v.nonpositive()},
              {"resonant", is_resonant(v)}};
  r.table.columns = {"hardy_ratio", "c_omega", "margin", "admissible", "sup_norm"};
  r.table.add_row({h.hardy_ratio, o.c_omega, h.margin, h.admissible ? 1.0 : 0.0, v.sup_norm()});
  return r;
}

Output halfline_seba(const Options& o) {
  const auto v = load_potential(o);
  require_sorted_positive(o.eps, "--eps");
  require(o.eps.size() == 1 || o.eps[1] < o.eps[0], "--eps must be strictly decreasing");
  require(o.k_eig >= 1, "--k must be at least 1");
  for (double e : o.eps) validate({v, e, o.length, o.layer_cells, o.outer_cells});
  Output r;
  r.potential_hash = v.spec_hash();
  const auto rep = seba_convergence_study(v, o.eps, o.length, o.k_eig, {o.layer_cells, o.outer_cells, o.jobs});
  r.table = rep.to_table();
  r.result = {{"limit", to_string(rep.kind)},
              {"resonant", rep.resonant},
              {"resonance_residual", rep.residual},
              {"length", rep.length},
              {"layer_cells", o.layer_cells},
              {"outer_cells", o.outer_cells}};
  r.table.metadata = json::object();
  r.tolerances = {{"extrapolation", "three-level step halving"}};
  return r;
}

Output geometry_curve(const Options& o) {
  const auto c = BoundaryCurve::from_json(parse_json_arg(o.curve, "--curve"));
  require(o.samples >= 1, "--samples must be positive");
  require(o.delta > 0.0, "--delta must be positive");
  Output r;
  const auto tube = rho_and_max_width(c, o.delta);
  r.result = {{"curve", c.to_json()},
              {"delta", o.delta},
              {"rho", tube.rho},
              {"delta_max", tube.delta_max},
              {"total_turning", c.total_turning()},
              {"max_curvature", c.max_curvature()}};
  r.table.columns = {"theta", "kappa", "robin_coefficient"};
  for (std::size_t i = 0; i < o.samples; ++i) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(o.samples);
    r.table.add_row({t, c.curvature(t), c.robin_coefficient(t)});
  }
  r.table.metadata = {{"rho", tube.rho}, {"delta_max", tube.delta_max}};
  return r;
}

Output disk_lambda1_map(const Options& o) {
  const auto v = load_potential(o);
  require_sorted_positive(o.eps, "--eps");
  require(!o.ms.empty(), "--m must not be empty");
  Output r;
  r.potential_hash = v.spec_hash();
  const auto map = lambda1_map(v, o.ms, o.eps, o.jobs);
  r.table = map.to_table();
  r.result = {{"ms", map.ms}, {"epsilons", map.epsilons}, {"values", map.values}, {"max_jump", map.max_jump}};
  r.tolerances = {{"lambda1_rel_tol", Lambda1Config{}.rel_tol}};
  return r;
}

Output disk_counterexample(const Options& o) {
  const auto v = load_potential(o);
  require(o.beta < 0.0, "--beta must be negative");
  require(o.k_pairs >= 1, "--k must be at least 1");
  Output r;
  r.potential_hash = v.spec_hash();
  const auto rec = counterexample_search(v, o.beta, o.k_pairs);
  r.result = rec.to_json();
  r.result["certified"] = rec.certified();
  r.table.columns = {"m", "epsilon", "lambda1", "residual"};
  for (const auto& p : rec.pairs) r.table.add_row({static_cast<double>(p.m), p.epsilon, p.lambda, p.residual});
  r.tolerances = {{"residual_rel_tol", CounterexampleConfig{}.residual_tol},
                  {"lambda1_rel_tol", Lambda1Config{}.rel_tol},
                  {"eps_floor", CounterexampleConfig{}.eps_floor}};
  return r;
}

FibreBoundary limit_of(const Options& o) {
  if (o.limit == "robin") return FibreBoundary::robin(o.gamma);
  if (o.limit == "dirichlet") return FibreBoundary::dirichlet();
  throw DomainError("--limit must be robin or dirichlet");
}

Output disk_converge(const Options& o) {
  const auto v = load_potential(o);
  require_sorted_positive(o.eps, "--eps");
  const FibreBoundary limit = limit_of(o);
  const std::vector<int> ms = o.ms.empty() ? std::vector<int>{0, 1} : o.ms;
  Output r;
  r.potential_hash = v.spec_hash();
  const auto f = [](double x) { return 1.0 - x * x; };
  std::vector<std::vector<double>> gaps(o.eps.size(), std::vector<double>(ms.size()));
  parallel_for(o.eps.size() * ms.size(), o.jobs, [&](std::size_t idx) {
    const std::size_t e = idx / ms.size(), j = idx % ms.size();
    gaps[e][j] = fibre_resolvent_gap(v, ms[j], o.eps[e], f, limit);
  });
  r.table.columns = {"epsilon"};
  for (int m : ms) r.table.columns.push_back("gap_m" + std::to_string(m));
  for (std::size_t e = 0; e < o.eps.size(); ++e) {
    std::vector<double> row{o.eps[e]};
    row.insert(row.end(), gaps[e].begin(), gaps[e].end());
    r.table.add_row(std::move(row));
  }
  r.result = {{"limit", to_string(limit)}, {"ms", ms}, {"test_function", "1 - r^2"}, {"gaps", gaps}};
  return r;
}

Output disk_hardy(const Options& o) {
  require(o.n >= 10, "--n must be at least 10");
  Output r;
  const double value = hardy_constant_disk(o.n);
  const double refined = hardy_constant_disk(2 * o.n);
  r.result = {{"n", o.n},
              {"value", value},
              {"refined_n", 2 * o.n},
              {"refined_value", refined},
              {"non_increasing", refined <= value + 1e-4}};
  r.table.columns = {"n", "value"};
  r.table.add_row({static_cast<double>(o.n), value});
  r.table.add_row({static_cast<double>(2 * o.n), refined});
  return r;
}

Output disk_identify(const Options& o) {
  const auto v = load_potential(o);
  require_sorted_positive(o.eps, "--eps");
  Output r;
  r.potential_hash = v.spec_hash();
  r.table.columns = {"epsilon", "trial", "lhs", "rhs", "holds"};
  std::mt19937_64 gen(o.seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  // Trial 0 is u = 1; the others are random cosine series.
  std::vector<std::vector<double>> coeffs(o.trials + 1);
  for (std::size_t t = 1; t <= o.trials; ++t) {
    coeffs[t].resize(6);
    for (auto& c : coeffs[t]) c = nd(gen);
  }
  bool all = true;
  for (double e : o.eps) {
    for (std::size_t t = 0; t <= o.trials; ++t) {
      const auto& c = coeffs[t];
      auto u = [&c](double x) {
        if (c.empty()) return 1.0;
        double s = 0.0;
        for (std::size_t k = 0; k < c.size(); ++k) s += c[k] * std::cos(std::numbers::pi * static_cast<double>(k) * x);
        return s;
      };
      const auto g = identification_gap(u, v, e);
      const bool holds = g.lhs <= g.rhs * (1.0 + 1e-6);
      all = all && holds;
      r.table.add_row({e, static_cast<double>(t), g.lhs, g.rhs, holds ? 1.0 : 0.0});
    }
  }
  r.result = {{"all_hold", all}, {"trials", o.trials}, {"seed", o.seed}};
  r.tolerances = {{"inequality_slack", 1e-6}};
  return r;
}

// ---------------------------------------------------------------- plumbing

std::vector<std::string> merge_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] == "--config") path = args[i + 1];
  }
  for (const auto& a : args) {
    if (a.rfind("--config=", 0) == 0) path = a.substr(9);
  }
  if (path.empty()) return args;
  const json cfg = parse_json_arg(path, "--config");
  if (!cfg.is_object()) throw DomainError("--config: expected a JSON object");
  std::set<std::string> given;
  bool has_command = false;
  for (const auto& a : args) {
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
    else if (a == "resonance" || a == "potential" || a == "halfline" || a == "geometry" || a == "disk") has_command = true;
  }
  std::vector<std::string> merged = args;
  if (cfg.contains("command") && !has_command) {
    for (const auto& c : cfg.at("command")) merged.push_back(c.get<std::string>());
  }
  auto scalar = [](const json& x) {
    if (x.is_string()) return x.get<std::string>();
    if (x.is_object()) return x.dump();
    if (x.is_number_float()) return format_number(x.get<double>());
    return x.dump();
  };
  for (const auto& [key, value] : cfg.items()) {
    if (key == "command" || given.count(key)) continue;
    merged.push_back("--" + key);
    if (value.is_array()) {
      for (const auto& x : value) merged.push_back(scalar(x));
    } else if (!value.is_boolean()) {
      merged.push_back(scalar(value));
    }
  }
  return merged;
}

std::string plain_columns(const Table& t) {
  std::ostringstream os;
  os << "#";
  for (const auto& c : t.columns) os << ' ' << c;
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? " " : "") << format_number(row[i]);
    os << '\n';
  }
  return os.str();
}

void check_writable(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path probe = fs::path(dir) / ".reslab_write_probe";
  std::ofstream f(probe);
  if (!f) throw DomainError("output directory '" + dir + "' is not writable");
  f.close();
  fs::remove(probe, ec);
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw DomainError("cannot write '" + p.string() + "'");
  f << content;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Boundary-layer resonance and spectral convergence studies", "reslab"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--out", o.out_dir, "Output directory (default: $RESLAB_OUTPUT_DIR)");
  app.add_option("--format", o.format, "json, csv or both")->check(CLI::IsMember({"json", "csv", "both"}));
  app.add_option("--jobs", o.jobs, "Worker threads for parameter sweeps")->check(CLI::Range(1, 1024));
  app.add_option("--seed", o.seed, "Seed for randomized inputs");
  app.add_option("--config", o.config, "JSON file whose keys mirror the flags");

  auto potential_opt = [&](CLI::App* s) {
    s->add_option("--potential", o.potential, "Potential JSON file or inline JSON")->required();
  };

  std::map<CLI::App*, std::function<Output(const Options&)>> handlers;
  std::map<CLI::App*, std::string> names;
  auto leaf = [&](CLI::App* group, const std::string& name, const std::string& help,
                  std::function<Output(const Options&)> fn) {
    auto* s = group->add_subcommand(name, help);
    handlers[s] = std::move(fn);
    names[s] = group->get_name() + " " + name;
    return s;
  };

  auto* res = app.add_subcommand("resonance", "Zero-energy resonance tools")->require_subcommand(1);
  auto* scan = leaf(res, "scan", "Resonant couplings alpha in (0, alpha_max]", resonance_scan);
  potential_opt(scan);
  scan->add_option("--alpha-max", o.alpha_max, "Upper end of the coupling scan");
  auto* check = leaf(res, "check", "Resonance and negative bound states", resonance_check);
  potential_opt(check);
  check->add_option("--tol", o.tol, "Resonance tolerance");
  auto* sol = leaf(res, "solution", "Normalized zero-energy solution", resonance_solution);
  potential_opt(sol);
  sol->add_option("--samples", o.samples, "Uniform sample intervals on [0, a]");
  sol->add_option("--tol", o.tol, "Resonance tolerance");

  auto* pot = app.add_subcommand("potential", "Potential utilities")->require_subcommand(1);
  auto* cls = leaf(pot, "classify", "Small-negative-part classification", potential_classify);
  potential_opt(cls);
  cls->add_option("--c-omega", o.c_omega, "Hardy constant of the domain, in (0, 1/4]");

  auto* half = app.add_subcommand("halfline", "Half-line model")->require_subcommand(1);
  auto* seba = leaf(half, "seba", "Eigenvalue convergence toward the limit operator", halfline_seba);
  potential_opt(seba);
  seba->add_option("--eps", o.eps, "Strictly decreasing epsilons")->required();
  seba->add_option("--length", o.length, "Truncation length L");
  seba->add_option("--k", o.k_eig, "Number of eigenvalues");
  seba->add_option("--layer-cells", o.layer_cells, "Cells across the boundary layer");
  seba->add_option("--outer-cells", o.outer_cells, "Cells outside the layer");

  auto* geo = app.add_subcommand("geometry", "Boundary curves")->require_subcommand(1);
  auto* curve = leaf(geo, "curve", "Curvature, Robin coefficient and tube constants", geometry_curve);
  curve->add_option("--curve", o.curve, "Curve JSON file or inline JSON (default unit circle)");
  curve->add_option("--delta", o.delta, "Tube width");
  curve->add_option("--samples", o.samples, "Parameter samples");

  auto* disk = app.add_subcommand("disk", "Unit-disk fibres")->require_subcommand(1);
  auto* map = leaf(disk, "lambda1-map", "Lowest fibre eigenvalues over (m, eps)", disk_lambda1_map);
  potential_opt(map);
  map->add_option("--m", o.ms, "Angular indices")->required();
  map->add_option("--eps", o.eps, "Sorted epsilons")->required();
  auto* ce = leaf(disk, "counterexample", "Pairs (m_k, eps_k) with lambda1 = beta", disk_counterexample);
  potential_opt(ce);
  ce->add_option("--beta", o.beta, "Target eigenvalue (negative)");
  ce->add_option("--k", o.k_pairs, "Number of pairs");
  auto* conv = leaf(disk, "converge", "Fibre resolvent gaps against a limit", disk_converge);
  potential_opt(conv);
  conv->add_option("--eps", o.eps, "Sorted epsilons")->required();
  conv->add_option("--m", o.ms, "Angular indices (default 0 1)");
  conv->add_option("--limit", o.limit, "robin or dirichlet");
  conv->add_option("--gamma", o.gamma, "Robin coefficient");
  auto* hardy = leaf(disk, "hardy", "Discrete Hardy constant of the disk", disk_hardy);
  hardy->add_option("--n", o.n, "Radial cells");
  auto* ident = leaf(disk, "identify", "Identification-operator inequality", disk_identify);
  potential_opt(ident);
  ident->add_option("--eps", o.eps, "Sorted epsilons")->required();
  ident->add_option("--trials", o.trials, "Random test functions per epsilon");

  std::vector<std::string> args;
  try {
    args = merge_config(raw_args);
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  std::vector<char*> argv;
  std::string prog = "reslab";
  argv.push_back(prog.data());
  for (auto& a : args) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }

  CLI::App* chosen = nullptr;
  for (auto& [sub, fn] : handlers) {
    if (sub->parsed()) chosen = sub;
  }
  if (!chosen) {
    err << "error: no command given\n";
    return 1;
  }

  try {
    if (o.out_dir.empty()) {
      if (const char* env = std::getenv(kOutputDirEnv)) o.out_dir = env;
    }
    if (!o.out_dir.empty()) check_writable(o.out_dir);

    Output res = handlers[chosen](o);

    json meta;
    meta["tool"] = "reslab";
    meta["version"] = kVersion;
    meta["command"] = names[chosen];
    meta["arguments"] = args;
    meta["seed"] = o.seed;
    meta["tolerances"] = res.tolerances;
    if (res.potential_hash) meta["potential_hash"] = hex(*res.potential_hash);
    for (const auto& [key, value] : meta.items()) res.table.metadata[key] = value;

    json payload;
    payload["metadata"] = meta;
    payload["result"] = res.result;
    const json tj = res.table.to_json();
    payload["table"] = {{"columns", tj["columns"]}, {"rows", tj["rows"]}};

    const std::string json_text = payload.dump(2) + "\n";
    const std::string csv_text = res.table.to_csv();
    if (o.format == "csv") out << csv_text;
    else out << json_text;

    if (!o.out_dir.empty()) {
      std::string base = names[chosen];
      std::replace(base.begin(), base.end(), ' ', '_');
      std::replace(base.begin(), base.end(), '-', '_');
      const fs::path dir(o.out_dir);
      if (o.format != "csv") write_file(dir / (base + ".json"), json_text);
      if (o.format != "json") write_file(dir / (base + ".csv"), csv_text);
      write_file(dir / (base + ".dat"), plain_columns(res.table));
    }
    return 0;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const AccuracyError& e) {
    err << "accuracy error: " << e.what() << '\n';
    return 3;
  } catch (const SingularityError& e) {
    err << "numerical error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace reslab::cli
