#include "reslab/halfline.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "reslab/errors.hpp"
#include "reslab/parallel.hpp"
#include "reslab/resonance.hpp"

namespace reslab {

std::string to_string(LimitKind k) { return k == LimitKind::neumann ? "neumann" : "dirichlet"; }

void validate(const HalflineModel& m) {
  if (!(m.epsilon > 0.0)) throw DomainError("halfline: epsilon must be positive");
  if (!(m.length > 0.0)) throw DomainError("halfline: length must be positive");
  if (!(m.v.support() * m.epsilon < 0.25 * m.length)) {
    throw DomainError("halfline: the layer a*eps must be shorter than L/4");
  }
  if (m.layer_cells < 40) throw DomainError("halfline: at least 40 cells are needed across the layer");
  if (m.outer_cells < 2000) throw DomainError("halfline: at least 2000 outer cells are needed");
}

LineMesh halfline_mesh(const HalflineModel& m, int level) {
  validate(m);
  const std::size_t f = std::size_t{1} << level;
  return two_zone_mesh(m.v.support() * m.epsilon, m.length, m.layer_cells * f, m.outer_cells * f);
}

TridiagonalOperator assemble_halfline(const HalflineModel& m, int level) {
  const LineMesh mesh = halfline_mesh(m, level);
  const double eps = m.epsilon;
  return assemble_line_operator(
      mesh, [&](double lo, double hi) { return m.v.integrate(lo / eps, hi / eps) / eps; },
      LeftBoundary::dirichlet);
}

TridiagonalOperator assemble_halfline_limit(LimitKind kind, const LineMesh& mesh) {
  return assemble_line_operator(
      mesh, [](double, double) { return 0.0; },
      kind == LimitKind::neumann ? LeftBoundary::neumann : LeftBoundary::dirichlet);
}

std::vector<double> limit_spectrum(LimitKind kind, double length, std::size_t k) {
  if (!(length > 0.0) || k == 0) throw DomainError("limit_spectrum: need L > 0 and k >= 1");
  std::vector<double> out(k);
  for (std::size_t j = 1; j <= k; ++j) {
    const double n = kind == LimitKind::neumann ? static_cast<double>(j) - 0.5 : static_cast<double>(j);
    out[j - 1] = std::pow(n * std::numbers::pi / length, 2);
  }
  return out;
}

HalflineSpectrum halfline_eigenvalues(const HalflineModel& m, std::size_t k) {
  if (k == 0) throw DomainError("halfline_eigenvalues: k must be at least 1");
  std::vector<std::vector<double>> lv(3);
  for (int level = 0; level < 3; ++level) lv[level] = smallest_eigenvalue_values(assemble_halfline(m, level), k);
  HalflineSpectrum s;
  s.values.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    const double r1 = (4.0 * lv[1][j] - lv[0][j]) / 3.0;
    const double r2 = (4.0 * lv[2][j] - lv[1][j]) / 3.0;
    s.values[j] = r2;
    s.extrapolation_gap = std::max(s.extrapolation_gap, std::abs(r2 - r1) / std::max(1.0, std::abs(r2)));
  }
  return s;
}

namespace {

// Difference of the two resolvent applications on every node of the mesh.
std::vector<std::complex<double>> resolvent_difference(const HalflineModel& m,
                                                       const std::function<double(double)>& v,
                                                       LimitKind kind, int level) {
  const LineMesh mesh = halfline_mesh(m, level);
  const std::size_t nodes = mesh.nodes.size();
  const std::complex<double> z{0.0, 1.0};
  auto solve = [&](const TridiagonalOperator& op, std::size_t first) {
    std::vector<std::complex<double>> rhs(op.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = v(mesh.nodes[first + i]);
    const auto u = solve_shifted(op, z, rhs);
    std::vector<std::complex<double>> full(nodes, 0.0);
    std::copy(u.begin(), u.end(), full.begin() + static_cast<std::ptrdiff_t>(first));
    return full;
  };
  auto a = solve(assemble_halfline(m, level), 1);
  const auto b = solve(assemble_halfline_limit(kind, mesh), kind == LimitKind::neumann ? 0 : 1);
  for (std::size_t i = 0; i < nodes; ++i) a[i] -= b[i];
  return a;
}

}  // namespace

double halfline_resolvent_gap(const HalflineModel& m, const std::function<double(double)>& v,
                              LimitKind kind, int level) {
  const auto coarse = resolvent_difference(m, v, kind, level);
  const auto fine = resolvent_difference(m, v, kind, level + 1);
  const LineMesh mesh = halfline_mesh(m, level);
  double sum = 0.0;
  std::vector<double> d2(coarse.size());
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    d2[i] = std::norm((4.0 * fine[2 * i] - coarse[i]) / 3.0);
  }
  for (std::size_t i = 1; i < d2.size(); ++i) {
    sum += 0.5 * (mesh.nodes[i] - mesh.nodes[i - 1]) * (d2[i] + d2[i - 1]);
  }
  return std::sqrt(sum);
}

Table ConvergenceReport::to_table() const {
  Table t;
  const std::size_t k = limits.size();
  t.columns.push_back("epsilon");
  for (std::size_t j = 1; j <= k; ++j) t.columns.push_back("eigenvalue_" + std::to_string(j));
  for (std::size_t j = 1; j <= k; ++j) t.columns.push_back("limit_" + std::to_string(j));
  for (std::size_t j = 1; j <= k; ++j) t.columns.push_back("abs_error_" + std::to_string(j));
  t.columns.push_back("resolvent_gap");
  for (std::size_t e = 0; e < epsilons.size(); ++e) {
    std::vector<double> row{epsilons[e]};
    row.insert(row.end(), eigenvalues[e].begin(), eigenvalues[e].end());
    row.insert(row.end(), limits.begin(), limits.end());
    row.insert(row.end(), errors[e].begin(), errors[e].end());
    row.push_back(resolvent_gaps[e]);
    t.add_row(std::move(row));
  }
  t.metadata["limit"] = to_string(kind);
  t.metadata["resonant"] = resonant;
  t.metadata["resonance_residual"] = residual;
  t.metadata["length"] = length;
  return t;
}

ConvergenceReport seba_convergence_study(const Potential& v, const std::vector<double>& eps_list,
                                         double length, std::size_t k, const StudyOptions& opts) {
  if (eps_list.empty()) throw DomainError("seba study: empty epsilon list");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw DomainError("seba study: epsilons must be positive");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1])) throw DomainError("seba study: epsilons must be strictly decreasing");
  }
  std::vector<HalflineModel> models;
  for (double eps : eps_list) {
    HalflineModel m{v, eps, length, opts.layer_cells, opts.outer_cells};
    validate(m);
    models.push_back(std::move(m));
  }

  ConvergenceReport r;
  r.resonant = is_resonant(v);
  r.residual = resonance_residual(v);
  r.kind = r.resonant ? LimitKind::neumann : LimitKind::dirichlet;
  r.length = length;
  r.epsilons = eps_list;
  r.limits = limit_spectrum(r.kind, length, k);
  const std::size_t n = eps_list.size();
  r.eigenvalues.resize(n);
  r.errors.resize(n);
  r.resolvent_gaps.resize(n);
  const auto test_vector = [length](double t) { return std::sin(std::numbers::pi * t / length); };
  parallel_for(n, opts.jobs, [&](std::size_t e) {
    r.eigenvalues[e] = halfline_eigenvalues(models[e], k).values;
    r.errors[e].resize(k);
    for (std::size_t j = 0; j < k; ++j) r.errors[e][j] = std::abs(r.eigenvalues[e][j] - r.limits[j]);
    r.resolvent_gaps[e] = halfline_resolvent_gap(models[e], test_vector, r.kind);
  });
  return r;
}

}  // namespace reslab
