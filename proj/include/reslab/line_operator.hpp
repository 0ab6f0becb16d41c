#pragma once

// -u'' + q u on a one-dimensional node mesh: linear elements with a lumped
// (diagonal) mass matrix, so the result is a weighted symmetric tridiagonal
// operator.  Dirichlet at the right end; Dirichlet or Neumann at the left end.

#include <cstddef>
#include <functional>
#include <vector>

#include "reslab/tridiag.hpp"

namespace reslab {

struct LineMesh {
  /// 0 = t_0 < t_1 < ... < t_M = L.
  std::vector<double> nodes;

  double length() const { return nodes.back(); }
  double max_step() const;
};

/// Uniform cells on [0, edge] and on [edge, length], both no wider than h_max,
/// so that `edge` is a mesh node.
LineMesh two_zone_mesh(double edge, double length, double h_max);
/// `inner_cells` equal cells on [0, edge] and `outer_cells` on [edge, length].
LineMesh two_zone_mesh(double edge, double length, std::size_t inner_cells, std::size_t outer_cells);

enum class LeftBoundary { dirichlet, neumann };

/// Integral of the potential over [lo, hi]; the lumped potential at node i is
/// its integral over the dual cell around t_i.
using PotentialIntegral = std::function<double(double lo, double hi)>;

TridiagonalOperator assemble_line_operator(const LineMesh& mesh, const PotentialIntegral& q,
                                           LeftBoundary left);

/// Positions of the unknowns assembled for `left` (node 0 only for Neumann).
std::vector<double> line_unknowns(const LineMesh& mesh, LeftBoundary left);

}  // namespace reslab
