#include "reslab/line_operator.hpp"

#include <algorithm>
#include <cmath>

#include "reslab/errors.hpp"

namespace reslab {

double LineMesh::max_step() const {
  double h = 0.0;
  for (std::size_t i = 1; i < nodes.size(); ++i) h = std::max(h, nodes[i] - nodes[i - 1]);
  return h;
}

LineMesh two_zone_mesh(double edge, double length, std::size_t inner, std::size_t outer) {
  if (!(edge > 0.0 && edge < length)) throw DomainError("mesh: edge must lie inside (0, length)");
  if (inner == 0 || outer == 0) throw DomainError("mesh: each zone needs at least one cell");
  LineMesh m;
  m.nodes.reserve(inner + outer + 1);
  for (std::size_t i = 0; i <= inner; ++i) {
    m.nodes.push_back(edge * static_cast<double>(i) / static_cast<double>(inner));
  }
  for (std::size_t i = 1; i <= outer; ++i) {
    m.nodes.push_back(edge + (length - edge) * static_cast<double>(i) / static_cast<double>(outer));
  }
  m.nodes.back() = length;
  return m;
}

LineMesh two_zone_mesh(double edge, double length, double h_max) {
  if (!(h_max > 0.0) || !(length > 0.0)) throw DomainError("mesh: length and step must be positive");
  if (!(edge > 0.0 && edge < length)) throw DomainError("mesh: edge must lie inside (0, length)");
  const auto inner = static_cast<std::size_t>(std::ceil(edge / h_max - 1e-9));
  const auto outer = static_cast<std::size_t>(std::ceil((length - edge) / h_max - 1e-9));
  return two_zone_mesh(edge, length, inner, outer);
}

std::vector<double> line_unknowns(const LineMesh& mesh, LeftBoundary left) {
  const std::size_t first = left == LeftBoundary::neumann ? 0 : 1;
  return {mesh.nodes.begin() + static_cast<std::ptrdiff_t>(first), mesh.nodes.end() - 1};
}

TridiagonalOperator assemble_line_operator(const LineMesh& mesh, const PotentialIntegral& q,
                                           LeftBoundary left) {
  const auto& t = mesh.nodes;
  if (t.size() < 3) throw DomainError("mesh needs at least two cells");
  const std::size_t first = left == LeftBoundary::neumann ? 0 : 1;
  const std::size_t last = t.size() - 2;
  const std::size_t n = last - first + 1;
  std::vector<double> d(n), e(n - 1), w(n);
  for (std::size_t i = first; i <= last; ++i) {
    const double h_right = t[i + 1] - t[i];
    const double lo = i == 0 ? 0.0 : 0.5 * (t[i - 1] + t[i]);
    const double hi = 0.5 * (t[i] + t[i + 1]);
    double stiff = 1.0 / h_right;
    double mass = 0.5 * h_right;
    if (i > 0) {
      const double h_left = t[i] - t[i - 1];
      stiff += 1.0 / h_left;
      mass += 0.5 * h_left;
    }
    const std::size_t k = i - first;
    d[k] = stiff + q(lo, hi);
    w[k] = mass;
    if (i < last) e[k] = -1.0 / h_right;
  }
  return TridiagonalOperator(std::move(d), std::move(e), std::move(w));
}

}  // namespace reslab
