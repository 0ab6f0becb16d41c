#pragma once

// Radial fibres of the unit-disk operator -Laplace + eps^{-2} V(dist / eps):
// A^(m) f = -(1/r)(r f')' + (m^2 / r^2) f + eps^{-2} V((1 - r) / eps) f in
// L^2((0, 1); r dr), discretized by cell-centred finite volumes.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "reslab/potential.hpp"
#include "reslab/report.hpp"
#include "reslab/tridiag.hpp"

namespace reslab {

/// Boundary condition at r = 1 and whether the scaled potential is present.
struct FibreBoundary {
  enum class Kind { scaled, robin, dirichlet };
  Kind kind = Kind::scaled;
  double gamma = 0.5;  ///< Robin coefficient: f'(1) + gamma f(1) = 0

  static FibreBoundary scaled() { return {Kind::scaled, 0.0}; }
  static FibreBoundary robin(double g = 0.5) { return {Kind::robin, g}; }
  static FibreBoundary dirichlet() { return {Kind::dirichlet, 0.0}; }
};

std::string to_string(const FibreBoundary& b);

/// Radial grid: the images r = 1 - eps * b_j of the piece edges of V that
/// fall inside (0, 1) split [0, 1] into zones, each divided uniformly.  A zone
/// of length l gets max(min_zone_cells, ceil(l * cells_per_unit)) cells, and
/// `level` halves every cell `level` times.
struct FibreGrid {
  int m = 0;
  double epsilon = 1.0;
  /// 0 selects max(4000, ceil(50 / eps)).
  std::size_t cells_per_unit = 0;
  std::size_t min_zone_cells = 40;
};

std::vector<double> fibre_faces(const Potential& v, const FibreGrid& g, int level = 0);

/// Cell centres of a face vector.
std::vector<double> cell_centres(const std::vector<double>& faces);

/// Weighted tridiagonal operator (weight = integral of r dr over each cell).
/// Fluxes r_face (u_{i+1} - u_i) / (c_{i+1} - c_i); the centre face r = 0
/// carries no flux.  At r = 1 the Dirichlet condition is imposed through the
/// half cell, the Robin condition through u(1) = u_N / (1 + gamma h / 2).
TridiagonalOperator assemble_fibre(const Potential& v, const FibreGrid& g, FibreBoundary boundary,
                                   int level = 0);

struct Lambda1Config {
  double rel_tol = 1e-5;       ///< |R2 - R1| <= rel_tol * max(1, |R2|)
  int max_doublings = 4;
  std::size_t max_cells = 1'000'000;
  std::size_t cells_per_unit = 0;
  std::size_t min_zone_cells = 40;
};

struct Lambda1Result {
  double value = 0.0;            ///< extrapolated from levels L+1, L+2
  double extrapolation_gap = 0.0;
  int base_level = 0;            ///< L
  std::size_t cells = 0;         ///< cells of the finest grid used
};

/// Lowest eigenvalue of the fibre with the given boundary (scaled by default),
/// from step-halving extrapolation over three nested grids; the base grid is
/// refined until two successive extrapolations agree.
Lambda1Result lambda1_certified(const Potential& v, int m, double eps,
                                FibreBoundary boundary = FibreBoundary::scaled(),
                                const Lambda1Config& cfg = Lambda1Config{});
double lambda1(const Potential& v, int m, double eps, const Lambda1Config& cfg = Lambda1Config{});

struct Lambda1Map {
  std::vector<int> ms;
  std::vector<double> epsilons;
  std::vector<std::vector<double>> values;  ///< [m][eps]
  std::vector<double> max_jump;             ///< per m: largest |difference| between adjacent eps
  /// Rows m, columns eps (headers "eps=<value>"), plus max_jump.
  Table to_table() const;
};

Lambda1Map lambda1_map(const Potential& v, const std::vector<int>& ms, const std::vector<double>& eps,
                       std::size_t jobs = 1, const Lambda1Config& cfg = Lambda1Config{});

struct CounterexamplePair {
  int m = 0;
  double epsilon = 0.0;
  double lambda = 0.0;
  double residual = 0.0;  ///< |lambda - beta|
  double extrapolation_gap = 0.0;
};

struct CounterexampleRecord {
  double beta = 0.0;
  double sup_norm = 0.0;  ///< ||V||_inf
  std::vector<CounterexamplePair> pairs;
  bool eps_decreasing = false;
  bool m_increasing = false;
  bool below_positivity_threshold = false;  ///< eps_k < sqrt(||V||) / m_k for all k
  bool residuals_ok = false;                ///< |lambda - beta| <= 1e-6 max(1, |beta|)

  bool certified() const { return eps_decreasing && m_increasing && below_positivity_threshold && residuals_ok; }
  nlohmann::json to_json() const;
};

struct CounterexampleConfig {
  double scan_factor = 0.9;
  double eps_floor = 1e-4;
  double residual_tol = 1e-6;  ///< relative to max(1, |beta|)
  Lambda1Config lambda;
};

/// Pairs (m_k, eps_k) with lambda_1^(m_k)(eps_k) = beta, m increasing and eps
/// decreasing.  V must be resonant with a negative half-line bound state
/// (PreconditionError otherwise); beta < 0.  Throws SearchDepthError, whose
/// message carries the pairs found so far, when eps drops below the floor.
CounterexampleRecord counterexample_search(const Potential& v, double beta, std::size_t k,
                                           const CounterexampleConfig& cfg = CounterexampleConfig{});

struct GapConfig {
  std::size_t cells_per_unit = 4000;
  std::size_t min_zone_cells = 400;
};

/// Weighted L^2(r dr) norm of (A_eps - i)^{-1} v - (A_lim - i)^{-1} v on the
/// fibre grid of eps, extrapolated over one step halving.
double fibre_resolvent_gap(const Potential& v, int m, double eps, const std::function<double(double)>& f,
                           FibreBoundary limit, const GapConfig& cfg = GapConfig{});

struct IdentificationGap {
  double lhs = 0.0;  ///< || (psi_0((1 - r) / eps) - 1) u ||
  double rhs = 0.0;  ///< ||psi_0 - 1||_inf * || u ||_{annulus 1 - a eps < r < 1}
};

/// Cell-centre quadrature on a grid with `cells` cells and the annulus edge on a face.
/// V must be resonant (PreconditionError otherwise).
IdentificationGap identification_gap(const std::function<double(double)>& u, const Potential& v, double eps,
                                     std::size_t cells = 20000);

/// Lowest generalized eigenvalue of the m = 0 stiffness against the mass with
/// weight (1 - r)^{-2} (evaluated at cell centres), N uniform cells, Dirichlet
/// at r = 1.  unit_weight drops the (1 - r)^{-2} factor.
double hardy_constant_disk(std::size_t n, bool unit_weight = false);

}  // namespace reslab
