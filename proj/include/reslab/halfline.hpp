#pragma once

// H_eps = -d^2/dt^2 + eps^{-2} V(t / eps) on [0, L] with Dirichlet ends, and
// its limits as eps -> 0: Neumann at 0 for resonant V, Dirichlet otherwise.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "reslab/line_operator.hpp"
#include "reslab/potential.hpp"
#include "reslab/report.hpp"
#include "reslab/tridiag.hpp"

namespace reslab {

enum class LimitKind { neumann, dirichlet };

std::string to_string(LimitKind k);

struct HalflineModel {
  Potential v = Potential::zero();
  double epsilon = 0.1;
  double length = 1.0;
  /// Cells across the boundary layer [0, a eps] (at least 40).
  std::size_t layer_cells = 400;
  /// Cells on [a eps, L] (at least 2000).
  std::size_t outer_cells = 4000;
};

/// Throws DomainError unless eps > 0, a eps < L/4 and the cell counts are large enough.
void validate(const HalflineModel& m);

/// Two-zone mesh with the layer edge a eps on a node; `level` halves both steps `level` times.
LineMesh halfline_mesh(const HalflineModel& m, int level = 0);

/// Lumped linear elements on halfline_mesh; the potential enters through its
/// exact integral over each dual cell.  Weighted by the lumped mass.
TridiagonalOperator assemble_halfline(const HalflineModel& m, int level = 0);

/// Free operator on `mesh`: Neumann or Dirichlet at 0, Dirichlet at L.
TridiagonalOperator assemble_halfline_limit(LimitKind kind, const LineMesh& mesh);

/// ((j - 1/2) pi / L)^2 or (j pi / L)^2 for j = 1..k.
std::vector<double> limit_spectrum(LimitKind kind, double length, std::size_t k);

struct HalflineSpectrum {
  /// Step-halving extrapolation over three meshes.
  std::vector<double> values;
  /// max_j |R2 - R1| / max(1, |R2|) between the two extrapolations.
  double extrapolation_gap = 0.0;
};

HalflineSpectrum halfline_eigenvalues(const HalflineModel& m, std::size_t k);

/// L^2(0, L) norm (trapezoid) of (H_eps - i)^{-1} v - (H_lim - i)^{-1} v,
/// extrapolated from meshes `level` and `level + 1`.
double halfline_resolvent_gap(const HalflineModel& m, const std::function<double(double)>& v,
                              LimitKind kind, int level = 0);

struct StudyOptions {
  std::size_t layer_cells = 400;
  std::size_t outer_cells = 4000;
  std::size_t jobs = 1;
};

struct ConvergenceReport {
  LimitKind kind = LimitKind::dirichlet;
  bool resonant = false;
  double residual = 0.0;  ///< normalized |psi'(a)| of the zero-energy shot
  double length = 1.0;
  std::vector<double> epsilons;
  std::vector<std::vector<double>> eigenvalues;  ///< [eps][j]
  std::vector<double> limits;                    ///< [j]
  std::vector<std::vector<double>> errors;       ///< [eps][j]
  std::vector<double> resolvent_gaps;            ///< [eps], test vector sin(pi t / L)

  /// Columns epsilon, eigenvalue_j, limit_j, abs_error_j, resolvent_gap.
  Table to_table() const;
};

/// eps_list must be strictly decreasing.  The limit is chosen by is_resonant(V).
ConvergenceReport seba_convergence_study(const Potential& v, const std::vector<double>& eps_list,
                                         double length, std::size_t k,
                                         const StudyOptions& opts = StudyOptions{});

}  // namespace reslab
