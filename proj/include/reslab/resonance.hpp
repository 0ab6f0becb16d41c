#pragma once

// Zero-energy shooting for -psi'' + V psi = E psi, psi(0) = 0, psi'(0) = 1,
// resonance detection and resonant couplings, the normalized zero-energy
// solution psi_0, and negative Dirichlet bound states on the half-line.

#include <cstddef>
#include <optional>
#include <vector>

#include "reslab/potential.hpp"

namespace reslab {

struct ShootingConfig {
  /// Base step is a / base_steps, aligned to the pieces of V.
  std::size_t base_steps = 8192;
  double richardson_tol = 1e-7;
  int max_refinements = 4;
};

/// Endpoint data of the shot.  The solution is stored as (value, derivative) *
/// 2^log2_scale so that deep wells cannot overflow; ratios are exact.
struct ShootingResult {
  double value_at_a = 0.0;
  double derivative_at_a = 0.0;
  int log2_scale = 0;
  /// Sign changes of psi on (0, a).
  std::size_t nodes = 0;
  double energy = 0.0;
  /// Number of step-halvings needed for the Richardson check.
  int refinements = 0;
};

ShootingResult shoot(const Potential& v, double energy = 0.0,
                     const ShootingConfig& cfg = ShootingConfig{});

/// |psi'(a)| <= tol * max(|psi(a)|, |psi'(a)|, 1) for the zero-energy shot.
bool is_resonant(const Potential& v, double tol = 1e-8);

/// |psi'(a)| / hypot(psi(a), psi'(a)) for the zero-energy shot.
double resonance_residual(const Potential& v);

/// Zeros of the zero-energy solution on (0, inf): nodes in (0, a) plus the
/// zero of the affine tail when psi(a) psi'(a) < 0.  Equals the number of
/// negative half-line Dirichlet eigenvalues.
std::size_t zero_energy_zero_count(const Potential& v);

/// All alpha in (0, alpha_max] for which alpha * v is resonant, ascending.
/// v must be non-positive and not identically zero.
std::vector<double> resonant_couplings(const Potential& v, double alpha_max,
                                       double rel_tol = 1e-10);

class CanonicalSolution {
 public:
  bool resonant() const { return resonant_; }
  double support() const { return a_; }
  /// psi_0 and psi_0' at any t >= 0 (cubic Hermite inside the support, the
  /// exact tail beyond it).
  double value(double t) const;
  double derivative(double t) const;

  const std::vector<double>& grid() const { return t_; }
  const std::vector<double>& values() const { return psi_; }
  const std::vector<double>& derivatives() const { return dpsi_; }

  double sup_norm() const { return sup_psi_; }
  double sup_norm_derivative() const { return sup_dpsi_; }
  /// sup over [0, a] of |psi_0 - 1|.
  double sup_norm_minus_one() const { return sup_psi_minus_one_; }
  /// Relative endpoint residual |psi'(a)| / max(|psi(a)|, |psi'(a)|) before normalization.
  double endpoint_residual() const { return residual_; }

 private:
  friend CanonicalSolution canonical_solution(const Potential&, double);
  bool resonant_ = false;
  double a_ = 1.0;
  std::vector<double> t_, psi_, dpsi_;
  double sup_psi_ = 0.0, sup_dpsi_ = 0.0, sup_psi_minus_one_ = 0.0, residual_ = 0.0;
};

/// Resonant: psi_0 = 1 beyond a.  Otherwise psi_0' = 1 beyond a.
CanonicalSolution canonical_solution(const Potential& v, double tol = 1e-8);

struct BoundState {
  double energy = 0.0;
  /// Mesh nodes on [0, L] and the eigenfunction, zero at both ends, unit L^2 norm.
  std::vector<double> grid;
  std::vector<double> values;
};

struct BoundStateConfig {
  double richardson_tol = 1e-6;
  double initial_length = 80.0;  ///< L = a + initial_length before refinement
  double decay_lengths = 40.0;   ///< L = a + decay_lengths / sqrt(-mu)
  double max_length = 400.0;
  int max_refinements = 2;
};

/// The min(k, count) lowest negative eigenvalues of -d^2/dt^2 + V on (0, inf)
/// with psi(0) = 0.  Empty when there are none.
std::vector<BoundState> halfline_bound_states(const Potential& v, std::size_t k,
                                              const BoundStateConfig& cfg = BoundStateConfig{});

/// Number of negative half-line eigenvalues (discrete count on the truncated domain).
std::size_t halfline_negative_count(const Potential& v,
                                    const BoundStateConfig& cfg = BoundStateConfig{});

struct HypothesisCheck {
  bool resonant = false;
  std::size_t negative_count = 0;
  std::optional<double> mu;
  double residual = 0.0;
  /// Resonant with at least one negative bound state.
  bool holds() const { return resonant && negative_count >= 1; }
};

HypothesisCheck check_hypothesis(const Potential& v, double tol = 1e-8);

}  // namespace reslab
