#include "reslab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "reslab/errors.hpp"

namespace reslab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kQuadratureNodes = 4096;
constexpr std::size_t kOffsetSamples = 512;

double cross(CurvePoint o, CurvePoint a, CurvePoint b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool segments_cross(CurvePoint p1, CurvePoint p2, CurvePoint q1, CurvePoint q2) {
  const double d1 = cross(q1, q2, p1), d2 = cross(q1, q2, p2);
  const double d3 = cross(p1, p2, q1), d4 = cross(p1, p2, q2);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

double signed_area(const std::vector<CurvePoint>& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& a = p[i];
    const auto& b = p[(i + 1) % p.size()];
    s += a.x * b.y - b.x * a.y;
  }
  return 0.5 * s;
}

}  // namespace

bool polygon_self_intersects(const std::vector<CurvePoint>& p) {
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_cross(p[i], p[(i + 1) % n], p[j], p[(j + 1) % n])) return true;
    }
  }
  return false;
}

BoundaryCurve BoundaryCurve::circle(double radius) {
  if (!(radius > 0.0)) throw DomainError("circle: radius must be positive");
  BoundaryCurve c;
  c.kind_ = Kind::circle;
  c.a_ = c.b_ = radius;
  return c;
}

BoundaryCurve BoundaryCurve::ellipse(double a, double b) {
  if (!(a > 0.0 && b > 0.0)) throw DomainError("ellipse: semi-axes must be positive");
  BoundaryCurve c;
  c.kind_ = Kind::ellipse;
  c.a_ = a;
  c.b_ = b;
  return c;
}

BoundaryCurve BoundaryCurve::sampled(std::vector<double> x, std::vector<double> y) {
  if (x.size() != y.size()) throw DomainError("sampled curve: x and y differ in length");
  if (x.size() < 9) throw DomainError("sampled curve: at least 8 distinct samples are needed");
  const double scale = std::max(*std::max_element(x.begin(), x.end()) - *std::min_element(x.begin(), x.end()),
                                *std::max_element(y.begin(), y.end()) - *std::min_element(y.begin(), y.end()));
  if (std::hypot(x.front() - x.back(), y.front() - y.back()) > 1e-12 * std::max(1.0, scale)) {
    throw DomainError("sampled curve: first and last samples must coincide");
  }
  BoundaryCurve c;
  c.kind_ = Kind::samples;
  c.x_ = std::move(x);
  c.y_ = std::move(y);
  const std::size_t n = c.x_.size() - 1;

  std::vector<CurvePoint> poly(n);
  for (std::size_t i = 0; i < n; ++i) poly[i] = {c.x_[i], c.y_[i]};
  if (polygon_self_intersects(poly)) throw DomainError("sampled curve: not simple");
  if (!(signed_area(poly) > 0.0)) throw DomainError("sampled curve: must be counterclockwise");

  // Real DFT; the Nyquist term (even n) uses the cosine part only, halved.
  const std::size_t kmax = n / 2;
  c.cx_.assign(kmax + 1, 0.0);
  c.sx_.assign(kmax + 1, 0.0);
  c.cy_.assign(kmax + 1, 0.0);
  c.sy_.assign(kmax + 1, 0.0);
  for (std::size_t k = 0; k <= kmax; ++k) {
    double ax = 0, bx = 0, ay = 0, by = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double th = kTwoPi * static_cast<double>((k * i) % n) / static_cast<double>(n);
      const double co = std::cos(th), si = std::sin(th);
      ax += c.x_[i] * co;
      bx += c.x_[i] * si;
      ay += c.y_[i] * co;
      by += c.y_[i] * si;
    }
    double f = 2.0 / static_cast<double>(n);
    if (k == 0 || (n % 2 == 0 && k == kmax)) f = 1.0 / static_cast<double>(n);
    c.cx_[k] = f * ax;
    c.sx_[k] = f * bx;
    c.cy_[k] = f * ay;
    c.sy_[k] = f * by;
    if (n % 2 == 0 && k == kmax) c.sx_[k] = c.sy_[k] = 0.0;
  }
  c.check_regular();
  return c;
}

BoundaryCurve BoundaryCurve::from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "circle") return circle(j.value("radius", 1.0));
    if (kind == "ellipse") return ellipse(j.at("a").get<double>(), j.at("b").get<double>());
    if (kind == "samples") {
      auto x = j.at("x").get<std::vector<double>>();
      auto y = j.at("y").get<std::vector<double>>();
      if (j.contains("theta")) {
        const auto th = j.at("theta").get<std::vector<double>>();
        if (th.size() != x.size()) throw DomainError("sampled curve: theta has the wrong length");
        const double n = static_cast<double>(th.size() - 1);
        for (std::size_t i = 0; i < th.size(); ++i) {
          if (std::abs(th[i] - kTwoPi * static_cast<double>(i) / n) > 1e-9) {
            throw DomainError("sampled curve: theta must be uniform on [0, 2 pi]");
          }
        }
      }
      return sampled(std::move(x), std::move(y));
    }
    throw DomainError("curve: unknown kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("curve: malformed JSON: ") + e.what());
  }
}

nlohmann::json BoundaryCurve::to_json() const {
  switch (kind_) {
    case Kind::circle: return {{"kind", "circle"}, {"radius", a_}};
    case Kind::ellipse: return {{"kind", "ellipse"}, {"a", a_}, {"b", b_}};
    case Kind::samples: break;
  }
  return {{"kind", "samples"}, {"x", x_}, {"y", y_}};
}

namespace {

// d-th derivative of sum_k c_k cos(k t) + s_k sin(k t).
double fourier(const std::vector<double>& c, const std::vector<double>& s, double t, int d) {
  double sum = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double kk = static_cast<double>(k);
    const double co = std::cos(kk * t), si = std::sin(kk * t);
    const double p = std::pow(kk, d);
    switch (d % 4) {
      case 0: sum += p * (c[k] * co + s[k] * si); break;
      case 1: sum += p * (-c[k] * si + s[k] * co); break;
      case 2: sum += p * (-c[k] * co - s[k] * si); break;
      default: sum += p * (c[k] * si - s[k] * co); break;
    }
  }
  return sum;
}

}  // namespace

CurvePoint BoundaryCurve::point(double t) const {
  if (kind_ == Kind::samples) return {fourier(cx_, sx_, t, 0), fourier(cy_, sy_, t, 0)};
  return {a_ * std::cos(t), b_ * std::sin(t)};
}

CurvePoint BoundaryCurve::first_derivative(double t) const {
  if (kind_ == Kind::samples) return {fourier(cx_, sx_, t, 1), fourier(cy_, sy_, t, 1)};
  return {-a_ * std::sin(t), b_ * std::cos(t)};
}

CurvePoint BoundaryCurve::second_derivative(double t) const {
  if (kind_ == Kind::samples) return {fourier(cx_, sx_, t, 2), fourier(cy_, sy_, t, 2)};
  return {-a_ * std::cos(t), -b_ * std::sin(t)};
}

void BoundaryCurve::check_regular() const {
  for (std::size_t j = 0; j < kQuadratureNodes; ++j) {
    const auto d = first_derivative(kTwoPi * static_cast<double>(j) / kQuadratureNodes);
    if (std::hypot(d.x, d.y) < 1e-6) throw DomainError("curve: not regular");
  }
}

double BoundaryCurve::curvature(double t) const {
  if (kind_ == Kind::circle) return 1.0 / a_;
  if (kind_ == Kind::ellipse) {
    const double s = std::sin(t), c = std::cos(t);
    return a_ * b_ / std::pow(a_ * a_ * s * s + b_ * b_ * c * c, 1.5);
  }
  const auto d1 = first_derivative(t), d2 = second_derivative(t);
  const double speed = std::hypot(d1.x, d1.y);
  if (speed < 1e-6) throw DomainError("curvature: irregular point");
  return (d1.x * d2.y - d1.y * d2.x) / (speed * speed * speed);
}

double BoundaryCurve::volume_factor(double t, double dist) const {
  if (dist < 0.0) throw DomainError("volume_factor: t must be non-negative");
  return 1.0 - curvature(t) * dist;
}

double BoundaryCurve::total_turning(std::size_t nodes) const {
  if (nodes == 0) throw DomainError("total_turning: need at least one node");
  double sum = 0.0;
  for (std::size_t j = 0; j < nodes; ++j) {
    const double t = kTwoPi * static_cast<double>(j) / static_cast<double>(nodes);
    const auto d = first_derivative(t);
    sum += curvature(t) * std::hypot(d.x, d.y);
  }
  return sum * kTwoPi / static_cast<double>(nodes);
}

double BoundaryCurve::max_curvature(std::size_t nodes) const {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < nodes; ++j) m = std::max(m, curvature(kTwoPi * static_cast<double>(j) / static_cast<double>(nodes)));
  return m;
}

TubeConstants rho_and_max_width(const BoundaryCurve& c, double delta) {
  if (!(delta > 0.0)) throw DomainError("rho: delta must be positive");
  const double kmax = c.max_curvature(kQuadratureNodes);
  TubeConstants out;
  // phi is affine in t, so its minimum over [0, delta] sits at an end.
  out.rho = std::min(1.0, 1.0 - kmax * delta);
  if (out.rho <= 0.0) throw TubeTooWideError("rho: the tube is too wide for the boundary curvature");

  double width;
  if (kmax > 0.0) {
    width = (1.0 - 1e-3) / kmax;
  } else {
    double diam = 0.0;
    for (std::size_t j = 0; j < kOffsetSamples; ++j) {
      const auto p = c.point(kTwoPi * static_cast<double>(j) / kOffsetSamples);
      diam = std::max(diam, std::hypot(p.x, p.y));
    }
    width = diam;
  }
  auto inner_offset = [&](double w) {
    std::vector<CurvePoint> poly(kOffsetSamples);
    for (std::size_t j = 0; j < kOffsetSamples; ++j) {
      const double t = kTwoPi * static_cast<double>(j) / kOffsetSamples;
      const auto p = c.point(t);
      const auto d = c.first_derivative(t);
      const double s = std::hypot(d.x, d.y);
      // Outward normal of a counterclockwise curve is (y', -x') / |gamma'|.
      poly[j] = {p.x - w * d.y / s, p.y + w * d.x / s};
    }
    return poly;
  };
  for (int it = 0; it < 200; ++it) {
    const auto poly = inner_offset(width);
    if (!polygon_self_intersects(poly) && signed_area(poly) > 0.0) break;
    width *= 0.9;
  }
  out.delta_max = width;
  return out;
}

}  // namespace reslab
