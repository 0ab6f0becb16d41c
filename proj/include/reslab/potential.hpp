#pragma once

// Compactly supported boundary-profile potentials V on [0, a] and their
// boundary-layer scalings V_eps(d) = eps^{-2} V(d / eps).

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace reslab {

enum class PotentialKind { piecewise_constant, sampled_smooth };

class Potential {
 public:
  /// Profile equal to values[j] on [breakpoints[j], breakpoints[j+1]); the last
  /// breakpoint is the support bound a.  Right-continuous at every breakpoint.
  static Potential piecewise_constant(std::vector<double> breakpoints, std::vector<double> values,
                                      double alpha = 1.0);
  /// Uniform samples on [0, a] (both ends included), interpolated by a cubic
  /// spline that is natural at 0 and has zero slope at a.
  static Potential sampled(std::vector<double> samples, double a, double alpha = 1.0);
  /// Named profiles: "zero", "box" (indicator of [0, a)), "bump" (smooth C-infinity bump).
  static Potential preset(std::string_view name, double a = 1.0, double alpha = 1.0);

  /// alpha * indicator of [0, a).  box(-1) is -chi_(0,1).
  static Potential box(double alpha, double a = 1.0) { return preset("box", a, alpha); }
  static Potential zero(double a = 1.0) { return preset("zero", a, 0.0); }

  static Potential from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  /// FNV-1a of the canonical JSON form; stamped into output metadata.
  std::uint64_t spec_hash() const;

  PotentialKind kind() const { return kind_; }
  double support() const { return a_; }
  double alpha() const { return alpha_; }
  const std::string& preset_name() const { return preset_; }

  /// The same profile with coupling alpha * c.
  Potential scaled(double c) const;

  double evaluate(double t) const;
  double scaled_evaluate(double eps, double distance) const;

  /// Value of the smooth piece `piece` at t, extended by continuity to its
  /// closed interval.  Integrators use this so stage evaluations sitting on a
  /// breakpoint see the correct one-sided value.
  double evaluate_on_piece(std::size_t piece, double t) const;
  /// Edges 0 = b_0 < ... < b_k = a of the pieces on which V is smooth.
  const std::vector<double>& piece_edges() const { return edges_; }

  /// Exact integrals over [t0, t1] of V(t) and t V(t) (V = 0 beyond a).
  double integrate(double t0, double t1) const;
  double first_moment(double t0, double t1) const;

  /// ||V||_inf; sampled profiles use a 4096-point refinement of the interpolant.
  double sup_norm() const;
  /// C_V = sup_t (-t^2 V(t)) over a 4096-point refinement of [0, a]; 0 when V >= 0.
  double hardy_ratio() const;

  bool nonpositive() const;
  bool nonnegative() const;
  bool identically_zero() const;

 private:
  Potential() = default;
  double profile(double t) const;
  double spline_segment(std::size_t seg, double t) const;
  template <typename F>
  double integrate_weighted(double t0, double t1, F weight) const;

  PotentialKind kind_ = PotentialKind::piecewise_constant;
  double a_ = 1.0;
  double alpha_ = 1.0;
  std::string preset_;
  std::vector<double> edges_;
  // piecewise constant
  std::vector<double> values_;
  // sampled: node values and spline second derivatives
  std::vector<double> samples_;
  std::vector<double> second_;
};

/// Outcome of the small-negative-part test max_t(-t^2 V) < C_Omega.
struct HardyClassification {
  bool admissible = false;
  double margin = 0.0;  ///< C_Omega - C_V
  double hardy_ratio = 0.0;
};

/// c_omega must lie in (0, 1/4].
HardyClassification classify_hardy(const Potential& v, double c_omega);

}  // namespace reslab
