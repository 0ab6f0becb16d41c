#pragma once

// Closed counterclockwise plane curves: curvature with the convention that
// convex curves have kappa >= 0, the Robin coefficient kappa/2, the tubular
// volume factor 1 - kappa t and the tube constants rho and delta_max.

#include <cstddef>
#include <vector>

#include "json.hpp"

namespace reslab {

struct CurvePoint {
  double x = 0.0, y = 0.0;
};

class BoundaryCurve {
 public:
  static BoundaryCurve circle(double radius);
  static BoundaryCurve ellipse(double a, double b);
  /// Closed sampled curve at uniform parameters theta_i = 2 pi i / n,
  /// i = 0..n (the last sample repeats the first), interpolated by its
  /// trigonometric (Fourier) interpolant.  Must be simple and counterclockwise.
  static BoundaryCurve sampled(std::vector<double> x, std::vector<double> y);

  /// {"kind": "circle", "radius"} | {"kind": "ellipse", "a", "b"} |
  /// {"kind": "samples", "x": [...], "y": [...]} (optionally "theta", which must be uniform).
  static BoundaryCurve from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  CurvePoint point(double theta) const;
  CurvePoint first_derivative(double theta) const;
  CurvePoint second_derivative(double theta) const;

  double curvature(double theta) const;
  double robin_coefficient(double theta) const { return 0.5 * curvature(theta); }
  /// 1 - kappa(theta) t; t must be non-negative.
  double volume_factor(double theta, double t) const;

  /// Trapezoid approximation of the integral of kappa ds on `nodes` parameters.
  double total_turning(std::size_t nodes = 4096) const;
  /// Largest curvature over `nodes` equally spaced parameters.
  double max_curvature(std::size_t nodes = 4096) const;

 private:
  enum class Kind { circle, ellipse, samples };
  BoundaryCurve() = default;
  void check_regular() const;

  Kind kind_ = Kind::circle;
  double a_ = 1.0, b_ = 1.0;
  std::vector<double> x_, y_;
  // Fourier coefficients: x(theta) = sum_k cx_[k] cos(k theta) + sx_[k] sin(k theta).
  std::vector<double> cx_, sx_, cy_, sy_;
};

struct TubeConstants {
  double rho = 1.0;        ///< min of 1 - kappa t over the curve and t in [0, delta]
  double delta_max = 0.0;  ///< widest admissible tube
};

/// Throws TubeTooWideError when rho <= 0.
TubeConstants rho_and_max_width(const BoundaryCurve& c, double delta);

/// True when the closed polygon (last vertex joined to the first) has two
/// non-adjacent crossing edges.
bool polygon_self_intersects(const std::vector<CurvePoint>& p);

}  // namespace reslab
