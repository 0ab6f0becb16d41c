#include "reslab/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "reslab/errors.hpp"
#include "reslab/line_operator.hpp"
#include "reslab/tridiag.hpp"

namespace reslab {

namespace {

constexpr int kRescaleExponent = 400;
constexpr double kRescaleThreshold = 0x1p400;

struct Trajectory {
  std::vector<double> t, psi, dpsi;
};

struct Endpoint {
  double psi = 0.0;
  double dpsi = 0.0;
  int exponent = 0;
  std::size_t nodes = 0;
};

// Classical RK4 on (psi, psi') piece by piece, so breakpoints of V are step nodes.
Endpoint integrate(const Potential& v, double energy, std::size_t steps, Trajectory* store) {
  const auto& edges = v.piece_edges();
  const double a = v.support();
  const double h_target = a / static_cast<double>(steps);
  Endpoint s;
  double psi = 0.0, dpsi = 1.0;
  int last_sign = 0;
  if (store) {
    store->t = {0.0};
    store->psi = {0.0};
    store->dpsi = {1.0};
  }
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double lo = edges[p], hi = edges[p + 1];
    const auto n = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil((hi - lo) / h_target - 1e-9)));
    const double h = (hi - lo) / static_cast<double>(n);
    auto q = [&](double t) { return v.evaluate_on_piece(p, t) - energy; };
    for (std::size_t i = 0; i < n; ++i) {
      const double t = lo + h * static_cast<double>(i);
      const double q0 = q(t), qm = q(t + 0.5 * h), q1 = q(i + 1 == n ? hi : t + h);
      const double k1p = dpsi, k1d = q0 * psi;
      const double k2p = dpsi + 0.5 * h * k1d, k2d = qm * (psi + 0.5 * h * k1p);
      const double k3p = dpsi + 0.5 * h * k2d, k3d = qm * (psi + 0.5 * h * k2p);
      const double k4p = dpsi + h * k3d, k4d = q1 * (psi + h * k3p);
      psi += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
      dpsi += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
      if (std::abs(psi) + std::abs(dpsi) > kRescaleThreshold) {
        psi = std::ldexp(psi, -kRescaleExponent);
        dpsi = std::ldexp(dpsi, -kRescaleExponent);
        s.exponent += kRescaleExponent;
        if (store) {
          for (auto& x : store->psi) x = std::ldexp(x, -kRescaleExponent);
          for (auto& x : store->dpsi) x = std::ldexp(x, -kRescaleExponent);
        }
      }
      const bool at_end = p + 2 == edges.size() && i + 1 == n;
      if (!at_end && psi != 0.0) {
        const int sign = psi > 0.0 ? 1 : -1;
        if (last_sign != 0 && sign != last_sign) ++s.nodes;
        last_sign = sign;
      }
      if (at_end && psi != 0.0 && last_sign != 0 && (psi > 0.0 ? 1 : -1) != last_sign) ++s.nodes;
      if (store) {
        store->t.push_back(i + 1 == n ? hi : t + h);
        store->psi.push_back(psi);
        store->dpsi.push_back(dpsi);
      }
    }
  }
  s.psi = psi;
  s.dpsi = dpsi;
  return s;
}

double endpoint_gap(const Endpoint& coarse, const Endpoint& fine) {
  const int shift = coarse.exponent - fine.exponent;
  const double cp = std::ldexp(coarse.psi, shift), cd = std::ldexp(coarse.dpsi, shift);
  const double scale = std::max(std::abs(fine.psi), std::abs(fine.dpsi));
  return std::max(std::abs(cp - fine.psi), std::abs(cd - fine.dpsi)) / scale;
}

// Richardson-certified shot; returns the fine endpoint and the step count used.
std::pair<Endpoint, std::size_t> certified(const Potential& v, double energy,
                                           const ShootingConfig& cfg, int* refinements) {
  std::size_t steps = cfg.base_steps;
  Endpoint coarse = integrate(v, energy, steps, nullptr);
  for (int r = 0; r <= cfg.max_refinements; ++r) {
    Endpoint fine = integrate(v, energy, 2 * steps, nullptr);
    if (endpoint_gap(coarse, fine) <= cfg.richardson_tol) {
      if (refinements) *refinements = r;
      return {fine, 2 * steps};
    }
    coarse = fine;
    steps *= 2;
  }
  throw AccuracyError("shoot: step-halving check did not converge");
}

double normalized_slope(const Endpoint& e) { return e.dpsi / std::hypot(e.psi, e.dpsi); }

bool resonant_endpoint(const Endpoint& e, double tol) {
  // The "1" in the bound refers to the unscaled solution.
  const double one = e.exponent == 0 ? 1.0 : std::ldexp(1.0, -e.exponent);
  return std::abs(e.dpsi) <= tol * std::max({std::abs(e.psi), std::abs(e.dpsi), one});
}

}  // namespace

ShootingResult shoot(const Potential& v, double energy, const ShootingConfig& cfg) {
  if (cfg.base_steps == 0) throw DomainError("shoot: base_steps must be positive");
  int refinements = 0;
  const auto [e, steps] = certified(v, energy, cfg, &refinements);
  (void)steps;
  ShootingResult r;
  r.value_at_a = e.psi;
  r.derivative_at_a = e.dpsi;
  r.log2_scale = e.exponent;
  r.nodes = e.nodes;
  r.energy = energy;
  r.refinements = refinements;
  return r;
}

bool is_resonant(const Potential& v, double tol) {
  const auto [e, steps] = certified(v, 0.0, ShootingConfig{}, nullptr);
  return resonant_endpoint(e, tol);
}

double resonance_residual(const Potential& v) {
  return std::abs(normalized_slope(certified(v, 0.0, ShootingConfig{}, nullptr).first));
}

std::size_t zero_energy_zero_count(const Potential& v) {
  const auto e = certified(v, 0.0, ShootingConfig{}, nullptr).first;
  return e.nodes + (e.psi * e.dpsi < 0.0 ? 1 : 0);
}

std::vector<double> resonant_couplings(const Potential& v, double alpha_max, double rel_tol) {
  if (!(alpha_max > 0.0)) throw DomainError("resonant_couplings: alpha_max must be positive");
  if (!v.nonpositive()) throw DomainError("resonant_couplings: potential must be non-positive");
  if (v.identically_zero()) throw DomainError("resonant_couplings: potential is identically zero");

  // The deepest coupling fixes a resolution that is then used for the whole scan.
  const std::size_t steps = certified(v.scaled(alpha_max), 0.0, ShootingConfig{}, nullptr).second;
  auto f = [&](double alpha) { return normalized_slope(integrate(v.scaled(alpha), 0.0, steps, nullptr)); };

  std::size_t m = 64;
  std::vector<double> grid, values;
  auto sample = [&](std::size_t n) {
    grid.assign(n + 1, 0.0);
    values.assign(n + 1, 0.0);
    values[0] = 1.0;  // alpha = 0: psi = t
    for (std::size_t j = 1; j <= n; ++j) {
      grid[j] = alpha_max * static_cast<double>(j) / static_cast<double>(n);
      values[j] = f(grid[j]);
    }
  };
  auto roots_in = [&]() {
    std::size_t c = 0;
    for (std::size_t j = 1; j < values.size(); ++j) {
      if (values[j] == 0.0 || (values[j - 1] > 0.0) != (values[j] > 0.0)) ++c;
    }
    return c;
  };
  sample(m);
  std::size_t count = roots_in();
  int stable = 0;
  while (stable < 2) {
    if (m >= (std::size_t{1} << 20)) throw AccuracyError("resonant_couplings: root count did not stabilize");
    m *= 2;
    sample(m);
    const std::size_t next = roots_in();
    stable = next == count ? stable + 1 : 0;
    count = next;
  }

  std::vector<double> roots;
  for (std::size_t j = 1; j < values.size(); ++j) {
    if (values[j] == 0.0) {
      roots.push_back(grid[j]);
      continue;
    }
    if (values[j - 1] == 0.0 || (values[j - 1] > 0.0) == (values[j] > 0.0)) continue;
    double lo = grid[j - 1], hi = grid[j];
    double flo = values[j - 1];
    for (int it = 0; it < 200 && hi - lo > 1e-3 * rel_tol * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double fm = f(mid);
      if (fm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((fm > 0.0) == (flo > 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    roots.push_back(0.5 * (lo + hi));
  }
  return roots;
}

double CanonicalSolution::value(double t) const {
  if (t < 0.0) throw DomainError("psi_0: t must be non-negative");
  if (t >= a_) return resonant_ ? 1.0 : psi_.back() + (t - a_);
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - t_.begin()) - 1;
  const double h = t_[i + 1] - t_[i];
  const double s = (t - t_[i]) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  return h00 * psi_[i] + h10 * h * dpsi_[i] + h01 * psi_[i + 1] + h11 * h * dpsi_[i + 1];
}

double CanonicalSolution::derivative(double t) const {
  if (t < 0.0) throw DomainError("psi_0: t must be non-negative");
  if (t >= a_) return resonant_ ? 0.0 : 1.0;
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - t_.begin()) - 1;
  const double h = t_[i + 1] - t_[i];
  const double s = (t - t_[i]) / h;
  const double d00 = 6 * s * (s - 1) / h, d10 = (1 - s) * (1 - 3 * s);
  const double d01 = -d00, d11 = s * (3 * s - 2);
  return d00 * psi_[i] + d10 * dpsi_[i] + d01 * psi_[i + 1] + d11 * dpsi_[i + 1];
}

CanonicalSolution canonical_solution(const Potential& v, double tol) {
  const auto [end, steps] = certified(v, 0.0, ShootingConfig{}, nullptr);
  Trajectory tr;
  const Endpoint e = integrate(v, 0.0, steps, &tr);
  CanonicalSolution c;
  c.a_ = v.support();
  c.resonant_ = resonant_endpoint(end, tol);
  c.residual_ = std::abs(e.dpsi) / std::max(std::abs(e.psi), std::abs(e.dpsi));
  const double scale = std::max(std::abs(e.psi), std::abs(e.dpsi));
  double divisor = c.resonant_ ? e.psi : e.dpsi;
  if (std::abs(divisor) < 1e-12 * scale) throw AccuracyError("canonical_solution: degenerate normalization");
  for (auto& x : tr.psi) x /= divisor;
  for (auto& x : tr.dpsi) x /= divisor;
  tr.psi.front() = 0.0;
  if (c.resonant_) tr.psi.back() = 1.0;
  else tr.dpsi.back() = 1.0;
  for (std::size_t i = 0; i < tr.t.size(); ++i) {
    c.sup_psi_ = std::max(c.sup_psi_, std::abs(tr.psi[i]));
    c.sup_dpsi_ = std::max(c.sup_dpsi_, std::abs(tr.dpsi[i]));
    c.sup_psi_minus_one_ = std::max(c.sup_psi_minus_one_, std::abs(tr.psi[i] - 1.0));
  }
  c.t_ = std::move(tr.t);
  c.psi_ = std::move(tr.psi);
  c.dpsi_ = std::move(tr.dpsi);
  return c;
}

namespace {

struct HalflineLevel {
  LineMesh mesh;
  TridiagonalOperator op;
};

HalflineLevel halfline_level(const Potential& v, double length, double h) {
  LineMesh mesh = two_zone_mesh(v.support(), length, h);
  auto op = assemble_line_operator(
      mesh, [&](double lo, double hi) { return v.integrate(lo, hi); }, LeftBoundary::dirichlet);
  return {std::move(mesh), std::move(op)};
}

struct BoundStateRun {
  std::size_t count = 0;
  std::vector<BoundState> states;
};

BoundStateRun bound_states(const Potential& v, std::size_t k, const BoundStateConfig& cfg) {
  const double a = v.support();
  const double h0 = std::min(a / 2048.0, 1.0 / 512.0);
  BoundStateRun run;

  const auto first = halfline_level(v, a + cfg.initial_length, h0);
  const std::size_t first_count = count_below(first.op, 0.0);
  if (first_count == 0) return run;
  const auto estimate = smallest_eigenvalue_values(first.op, std::min(k, first_count));
  const double top = std::min(estimate.back(), -1e-300);
  const double length = a + std::min(cfg.max_length, cfg.decay_lengths / std::sqrt(-top));

  double h = h0;
  for (int attempt = 0; attempt <= cfg.max_refinements; ++attempt, h *= 0.5) {
    const auto base = halfline_level(v, length, h);
    run.count = count_below(base.op, 0.0);
    if (run.count == 0) return run;
    const std::size_t want = std::min(k, run.count);
    const auto pairs = smallest_eigenvalues(base.op, want);
    const auto half = smallest_eigenvalue_values(halfline_level(v, length, 0.5 * h).op, want);
    const auto quarter = smallest_eigenvalue_values(halfline_level(v, length, 0.25 * h).op, want);
    bool certified_all = true;
    std::vector<double> energies(want);
    for (std::size_t j = 0; j < want; ++j) {
      const double r1 = (4.0 * half[j] - pairs[j].value) / 3.0;
      const double r2 = (4.0 * quarter[j] - half[j]) / 3.0;
      energies[j] = r2;
      if (std::abs(r2 - r1) > cfg.richardson_tol * std::abs(r2)) certified_all = false;
    }
    if (!certified_all) continue;
    for (std::size_t j = 0; j < want; ++j) {
      BoundState s;
      s.energy = energies[j];
      s.grid = base.mesh.nodes;
      s.values.assign(s.grid.size(), 0.0);
      std::copy(pairs[j].vector.begin(), pairs[j].vector.end(), s.values.begin() + 1);
      run.states.push_back(std::move(s));
    }
    return run;
  }
  throw AccuracyError("halfline_bound_states: step-halving extrapolation did not converge");
}

}  // namespace

std::vector<BoundState> halfline_bound_states(const Potential& v, std::size_t k,
                                              const BoundStateConfig& cfg) {
  if (k == 0) throw DomainError("halfline_bound_states: k must be at least 1");
  return bound_states(v, k, cfg).states;
}

std::size_t halfline_negative_count(const Potential& v, const BoundStateConfig& cfg) {
  return bound_states(v, 1, cfg).count;
}

HypothesisCheck check_hypothesis(const Potential& v, double tol) {
  HypothesisCheck h;
  const auto e = certified(v, 0.0, ShootingConfig{}, nullptr).first;
  h.resonant = resonant_endpoint(e, tol);
  h.residual = std::abs(normalized_slope(e));
  const auto run = bound_states(v, 1, BoundStateConfig{});
  h.negative_count = run.count;
  if (!run.states.empty()) h.mu = run.states.front().energy;
  return h;
}

}  // namespace reslab
