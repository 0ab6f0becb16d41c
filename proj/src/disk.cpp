#include "reslab/disk.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>

#include "reslab/errors.hpp"
#include "reslab/parallel.hpp"
#include "reslab/resonance.hpp"

namespace reslab {

std::string to_string(const FibreBoundary& b) {
  switch (b.kind) {
    case FibreBoundary::Kind::scaled: return "scaled";
    case FibreBoundary::Kind::robin: return "robin(" + format_number(b.gamma) + ")";
    case FibreBoundary::Kind::dirichlet: return "dirichlet";
  }
  return "unknown";
}

namespace {

std::size_t default_cells_per_unit(double eps) {
  return std::max<std::size_t>(4000, static_cast<std::size_t>(std::ceil(50.0 / eps)));
}

// Zone boundaries 0 = z_0 < ... < z_k = 1 in r.
std::vector<double> zone_edges(const Potential& v, double eps) {
  std::vector<double> z{0.0, 1.0};
  for (double b : v.piece_edges()) {
    const double r = 1.0 - eps * b;
    if (r > 1e-12 && r < 1.0 - 1e-12) z.push_back(r);
  }
  std::sort(z.begin(), z.end());
  z.erase(std::unique(z.begin(), z.end(), [](double x, double y) { return y - x < 1e-12; }), z.end());
  return z;
}

std::vector<std::size_t> zone_cells(const std::vector<double>& z, std::size_t per_unit, std::size_t min_cells) {
  std::vector<std::size_t> n(z.size() - 1);
  for (std::size_t j = 0; j + 1 < z.size(); ++j) {
    const auto want = static_cast<std::size_t>(std::ceil((z[j + 1] - z[j]) * static_cast<double>(per_unit) - 1e-9));
    n[j] = std::max(min_cells, want);
  }
  return n;
}

std::vector<double> faces_from_zones(const std::vector<double>& z, const std::vector<std::size_t>& cells, int level) {
  const std::size_t f = std::size_t{1} << level;
  std::vector<double> faces{0.0};
  for (std::size_t j = 0; j + 1 < z.size(); ++j) {
    const std::size_t n = cells[j] * f;
    for (std::size_t i = 1; i <= n; ++i) {
      faces.push_back(i == n ? z[j + 1] : z[j] + (z[j + 1] - z[j]) * static_cast<double>(i) / static_cast<double>(n));
    }
  }
  return faces;
}

void check_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("fibre: epsilon must be positive");
}

// Fibre operator on explicit faces.
TridiagonalOperator assemble_on_faces(const Potential& v, int m, double eps, const std::vector<double>& r,
                                      FibreBoundary boundary) {
  const std::size_t n = r.size() - 1;
  if (n < 2) throw DomainError("fibre: need at least two cells");
  std::vector<double> d(n, 0.0), e(n - 1, 0.0), w(n);
  const auto c = cell_centres(r);
  const double m2 = static_cast<double>(m) * static_cast<double>(m);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 * (r[i + 1] * r[i + 1] - r[i] * r[i]);
    d[i] = m2 * w[i] / (c[i] * c[i]);
    if (boundary.kind == FibreBoundary::Kind::scaled) {
      // Integral of eps^{-2} V((1 - r)/eps) r dr over the cell, with s = (1 - r)/eps.
      const double s_lo = (1.0 - r[i + 1]) / eps, s_hi = (1.0 - r[i]) / eps;
      d[i] += (v.integrate(s_lo, s_hi) - eps * v.first_moment(s_lo, s_hi)) / eps;
    }
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double k = r[i + 1] / (c[i + 1] - c[i]);
    d[i] += k;
    d[i + 1] += k;
    e[i] = -k;
  }
  const double half = 1.0 - c[n - 1];
  if (boundary.kind == FibreBoundary::Kind::robin) {
    d[n - 1] += boundary.gamma / (1.0 + boundary.gamma * half);
  } else {
    d[n - 1] += 1.0 / half;
  }
  return TridiagonalOperator(std::move(d), std::move(e), std::move(w));
}

struct Frozen {
  std::vector<std::size_t> cells;
  std::size_t zones = 0;
};

// Faces for eps, reusing frozen zone counts when the zone structure matches.
std::vector<double> faces_for(const Potential& v, double eps, std::size_t per_unit, std::size_t min_cells,
                              const Frozen* frozen, int level) {
  const auto z = zone_edges(v, eps);
  if (frozen && frozen->zones == z.size()) return faces_from_zones(z, frozen->cells, level);
  return faces_from_zones(z, zone_cells(z, per_unit ? per_unit : default_cells_per_unit(eps), min_cells), level);
}

double lowest(const TridiagonalOperator& op) { return smallest_eigenvalue_values(op, 1)[0]; }

struct Extrapolated {
  double r1 = 0.0, r2 = 0.0;
  std::size_t cells = 0;
};

Extrapolated extrapolate_at(const Potential& v, int m, double eps, FibreBoundary b, const Lambda1Config& cfg,
                            const Frozen* frozen, int base, std::map<int, double>* cache) {
  double lv[3];
  std::size_t cells = 0;
  for (int j = 0; j < 3; ++j) {
    const int level = base + j;
    if (cache && cache->count(level)) {
      lv[j] = cache->at(level);
      continue;
    }
    const auto faces = faces_for(v, eps, cfg.cells_per_unit, cfg.min_zone_cells, frozen, level);
    cells = faces.size() - 1;
    if (cells > cfg.max_cells) throw AccuracyError("lambda1: grid would exceed the cell cap");
    lv[j] = lowest(assemble_on_faces(v, m, eps, faces, b));
    if (cache) (*cache)[level] = lv[j];
  }
  Extrapolated x;
  x.r1 = (4.0 * lv[1] - lv[0]) / 3.0;
  x.r2 = (4.0 * lv[2] - lv[1]) / 3.0;
  x.cells = cells;
  return x;
}

}  // namespace

std::vector<double> cell_centres(const std::vector<double>& faces) {
  std::vector<double> c(faces.size() - 1);
  for (std::size_t i = 0; i + 1 < faces.size(); ++i) c[i] = 0.5 * (faces[i] + faces[i + 1]);
  return c;
}

std::vector<double> fibre_faces(const Potential& v, const FibreGrid& g, int level) {
  check_eps(g.epsilon);
  if (level < 0 || level > 20) throw DomainError("fibre: level out of range");
  return faces_for(v, g.epsilon, g.cells_per_unit, g.min_zone_cells, nullptr, level);
}

TridiagonalOperator assemble_fibre(const Potential& v, const FibreGrid& g, FibreBoundary boundary, int level) {
  return assemble_on_faces(v, g.m, g.epsilon, fibre_faces(v, g, level), boundary);
}

Lambda1Result lambda1_certified(const Potential& v, int m, double eps, FibreBoundary boundary,
                                const Lambda1Config& cfg) {
  check_eps(eps);
  std::map<int, double> cache;
  for (int base = 0; base <= cfg.max_doublings; ++base) {
    const auto x = extrapolate_at(v, m, eps, boundary, cfg, nullptr, base, &cache);
    const double gap = std::abs(x.r2 - x.r1) / std::max(1.0, std::abs(x.r2));
    if (gap <= cfg.rel_tol) {
      Lambda1Result r;
      r.value = x.r2;
      r.extrapolation_gap = gap;
      r.base_level = base;
      r.cells = fibre_faces(v, {m, eps, cfg.cells_per_unit, cfg.min_zone_cells}, base + 2).size() - 1;
      return r;
    }
  }
  throw AccuracyError("lambda1: step-halving extrapolation did not settle (m = " + std::to_string(m) +
                      ", eps = " + format_number(eps) + ")");
}

double lambda1(const Potential& v, int m, double eps, const Lambda1Config& cfg) {
  return lambda1_certified(v, m, eps, FibreBoundary::scaled(), cfg).value;
}

Table Lambda1Map::to_table() const {
  Table t;
  t.columns.push_back("m");
  for (double e : epsilons) t.columns.push_back("eps=" + format_number(e));
  t.columns.push_back("max_jump");
  for (std::size_t i = 0; i < ms.size(); ++i) {
    std::vector<double> row{static_cast<double>(ms[i])};
    row.insert(row.end(), values[i].begin(), values[i].end());
    row.push_back(max_jump[i]);
    t.add_row(std::move(row));
  }
  return t;
}

Lambda1Map lambda1_map(const Potential& v, const std::vector<int>& ms, const std::vector<double>& eps,
                       std::size_t jobs, const Lambda1Config& cfg) {
  for (double e : eps) check_eps(e);
  Lambda1Map map;
  map.ms = ms;
  map.epsilons = eps;
  map.values.assign(ms.size(), std::vector<double>(eps.size()));
  parallel_for(ms.size() * eps.size(), jobs, [&](std::size_t idx) {
    const std::size_t i = idx / eps.size(), j = idx % eps.size();
    map.values[i][j] = lambda1(v, ms[i], eps[j], cfg);
  });
  map.max_jump.assign(ms.size(), 0.0);
  for (std::size_t i = 0; i < ms.size(); ++i) {
    for (std::size_t j = 1; j < eps.size(); ++j) {
      map.max_jump[i] = std::max(map.max_jump[i], std::abs(map.values[i][j] - map.values[i][j - 1]));
    }
  }
  return map;
}

nlohmann::json CounterexampleRecord::to_json() const {
  nlohmann::json j;
  j["beta"] = beta;
  j["sup_norm"] = sup_norm;
  j["pairs"] = nlohmann::json::array();
  for (const auto& p : pairs) {
    j["pairs"].push_back({{"m", p.m},
                          {"epsilon", p.epsilon},
                          {"lambda1", p.lambda},
                          {"residual", p.residual},
                          {"extrapolation_gap", p.extrapolation_gap}});
  }
  j["certificate"] = {{"eps_decreasing", eps_decreasing},
                      {"m_increasing", m_increasing},
                      {"below_positivity_threshold", below_positivity_threshold},
                      {"residuals_ok", residuals_ok}};
  return j;
}

namespace {

void certify(CounterexampleRecord& rec, double tol) {
  rec.eps_decreasing = rec.m_increasing = rec.below_positivity_threshold = rec.residuals_ok = true;
  for (std::size_t i = 0; i < rec.pairs.size(); ++i) {
    const auto& p = rec.pairs[i];
    if (i > 0) {
      rec.eps_decreasing = rec.eps_decreasing && p.epsilon < rec.pairs[i - 1].epsilon;
      rec.m_increasing = rec.m_increasing && p.m > rec.pairs[i - 1].m;
    }
    rec.below_positivity_threshold =
        rec.below_positivity_threshold && p.epsilon < std::sqrt(rec.sup_norm) / static_cast<double>(p.m);
    rec.residuals_ok = rec.residuals_ok && p.residual <= tol * std::max(1.0, std::abs(rec.beta));
  }
}

}  // namespace

CounterexampleRecord counterexample_search(const Potential& v, double beta, std::size_t k,
                                           const CounterexampleConfig& cfg) {
  if (!(beta < 0.0)) throw DomainError("counterexample: beta must be negative");
  if (k == 0) throw DomainError("counterexample: k must be at least 1");
  if (!(cfg.scan_factor > 0.0 && cfg.scan_factor < 1.0)) throw DomainError("counterexample: scan factor must lie in (0, 1)");
  if (!check_hypothesis(v).holds()) {
    throw PreconditionError("counterexample: potential must be resonant with a negative half-line bound state");
  }
  CounterexampleRecord rec;
  rec.beta = beta;
  rec.sup_norm = v.sup_norm();
  const double target_tol = cfg.residual_tol * std::max(1.0, std::abs(beta));
  const Lambda1Config& lc = cfg.lambda;

  auto fail = [&](const std::string& why) {
    certify(rec, cfg.residual_tol);
    throw SearchDepthError(why + "; partial record: " + rec.to_json().dump());
  };

  double eps_prev = std::numeric_limits<double>::infinity();
  int m = 0;
  for (std::size_t step = 0; step < k; ++step) {
    if (step == 0) {
      m = 1;
    } else {
      ++m;
      while (lambda1(v, m, eps_prev, lc) < 0.0) {
        if (m > 100000) fail("no angular index with a non-negative eigenvalue");
        ++m;
      }
    }
    const double top = std::min(eps_prev, std::sqrt(rec.sup_norm) / static_cast<double>(m));
    double hi = top, lo = top;
    Lambda1Result at_lo;
    for (;;) {
      lo = hi * cfg.scan_factor;
      if (lo < cfg.eps_floor) fail("epsilon fell below the search floor");
      at_lo = lambda1_certified(v, m, lo, FibreBoundary::scaled(), lc);
      if (at_lo.value < beta) break;
      hi = lo;
    }
    // Bisection in log(eps) on a grid frozen at the lower end.
    const auto z = zone_edges(v, lo);
    Frozen frozen{zone_cells(z, lc.cells_per_unit ? lc.cells_per_unit : default_cells_per_unit(lo), lc.min_zone_cells),
                  z.size()};
    const int base = at_lo.base_level;
    auto g = [&](double e) {
      return extrapolate_at(v, m, e, FibreBoundary::scaled(), lc, &frozen, base, nullptr);
    };
    CounterexamplePair best;
    best.residual = std::numeric_limits<double>::infinity();
    double a = lo, b = hi;
    for (int it = 0; it < 200; ++it) {
      const double mid = std::sqrt(a * b);
      const auto x = g(mid);
      const double res = std::abs(x.r2 - beta);
      if (res < best.residual) {
        best = {m, mid, x.r2, res, std::abs(x.r2 - x.r1) / std::max(1.0, std::abs(x.r2))};
      }
      if (res <= target_tol) break;
      if (x.r2 < beta) a = mid;
      else b = mid;
      if (b / a - 1.0 < 1e-15) break;
    }
    rec.pairs.push_back(best);
    eps_prev = best.epsilon;
  }
  certify(rec, cfg.residual_tol);
  return rec;
}

double fibre_resolvent_gap(const Potential& v, int m, double eps, const std::function<double(double)>& f,
                           FibreBoundary limit, const GapConfig& cfg) {
  check_eps(eps);
  if (limit.kind == FibreBoundary::Kind::scaled) throw DomainError("resolvent gap: the limit must be robin or dirichlet");
  const FibreGrid grid{m, eps, cfg.cells_per_unit, cfg.min_zone_cells};
  double gaps[2];
  for (int level = 0; level < 2; ++level) {
    const auto faces = fibre_faces(v, grid, level);
    const auto c = cell_centres(faces);
    std::vector<std::complex<double>> rhs(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) rhs[i] = f(c[i]);
    const auto a = assemble_on_faces(v, m, eps, faces, FibreBoundary::scaled());
    const auto b = assemble_on_faces(v, m, eps, faces, limit);
    auto ua = solve_shifted(a, {0.0, 1.0}, rhs);
    const auto ub = solve_shifted(b, {0.0, 1.0}, rhs);
    for (std::size_t i = 0; i < ua.size(); ++i) ua[i] -= ub[i];
    gaps[level] = weighted_norm(a, std::span<const std::complex<double>>(ua));
  }
  return std::max(0.0, (4.0 * gaps[1] - gaps[0]) / 3.0);
}

IdentificationGap identification_gap(const std::function<double(double)>& u, const Potential& v, double eps,
                                     std::size_t cells) {
  check_eps(eps);
  if (cells < 100) throw DomainError("identification_gap: need at least 100 cells");
  const auto psi = canonical_solution(v);
  if (!psi.resonant()) throw PreconditionError("identification_gap: potential must be resonant");
  const double a = v.support();
  std::vector<double> z{0.0, 1.0};
  if (a * eps < 1.0) z.insert(z.begin() + 1, 1.0 - a * eps);
  const auto faces = faces_from_zones(z, zone_cells(z, cells, 40), 0);
  const auto c = cell_centres(faces);
  const double sup = psi.sup_norm_minus_one();
  double lhs = 0.0, annulus = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double w = 0.5 * (faces[i + 1] * faces[i + 1] - faces[i] * faces[i]);
    const double uu = u(c[i]);
    const double t = (1.0 - c[i]) / eps;
    const double d = psi.value(t) - 1.0;
    lhs += w * d * d * uu * uu;
    if (t < a) annulus += w * uu * uu;
  }
  return {std::sqrt(lhs), sup * std::sqrt(annulus)};
}

double hardy_constant_disk(std::size_t n, bool unit_weight) {
  if (n < 10) throw DomainError("hardy_constant_disk: need at least 10 cells");
  std::vector<double> faces(n + 1);
  for (std::size_t i = 0; i <= n; ++i) faces[i] = static_cast<double>(i) / static_cast<double>(n);
  const auto op = assemble_on_faces(Potential::zero(), 0, 1.0, faces, FibreBoundary::dirichlet());
  const auto c = cell_centres(faces);
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = op.weight_at(i);
    if (!unit_weight) w[i] /= (1.0 - c[i]) * (1.0 - c[i]);
  }
  const TridiagonalOperator pencil(op.diag(), op.offdiag(), std::move(w));
  return smallest_eigenvalue_values(pencil, 1)[0];
}

}  // namespace reslab
