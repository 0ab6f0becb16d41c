#include "reslab/potential.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "reslab/errors.hpp"

namespace reslab {

namespace {

constexpr std::size_t kRefinement = 4096;

// Three-point Gauss-Legendre on [-1, 1]; exact through degree 5.
constexpr std::array<double, 3> kGaussX{-0.7745966692414834, 0.0, 0.7745966692414834};
constexpr std::array<double, 3> kGaussW{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

// Natural at the left end, zero slope at the right end, uniform spacing h.
std::vector<double> spline_second_derivatives(const std::vector<double>& y, double h) {
  const std::size_t n = y.size() - 1;
  std::vector<double> sub(n + 1, 0.0), diag(n + 1, 0.0), sup(n + 1, 0.0), rhs(n + 1, 0.0);
  diag[0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    sub[i] = 1.0;
    diag[i] = 4.0;
    sup[i] = 1.0;
    rhs[i] = 6.0 * (y[i + 1] - 2.0 * y[i] + y[i - 1]) / (h * h);
  }
  sub[n] = 1.0;
  diag[n] = 2.0;
  rhs[n] = -6.0 * (y[n] - y[n - 1]) / (h * h);
  // Thomas algorithm; the system is diagonally dominant.
  for (std::size_t i = 1; i <= n; ++i) {
    const double f = sub[i] / diag[i - 1];
    diag[i] -= f * sup[i - 1];
    rhs[i] -= f * rhs[i - 1];
  }
  std::vector<double> m(n + 1);
  m[n] = rhs[n] / diag[n];
  for (std::size_t i = n; i-- > 0;) m[i] = (rhs[i] - sup[i] * m[i + 1]) / diag[i];
  return m;
}

double bump(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  const double x = 2.0 * s - 1.0;
  return std::exp(1.0 - 1.0 / (1.0 - x * x));
}

std::vector<double> parse_doubles(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw DomainError(std::string("potential file: missing array '") + key + "'");
  }
  std::vector<double> out;
  for (const auto& x : j[key]) {
    if (!x.is_number()) throw DomainError(std::string("potential file: non-numeric entry in '") + key + "'");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

Potential Potential::piecewise_constant(std::vector<double> breakpoints, std::vector<double> values,
                                        double alpha) {
  if (breakpoints.size() < 2 || values.size() + 1 != breakpoints.size()) {
    throw DomainError("piecewise-constant potential needs k+1 breakpoints for k values");
  }
  if (breakpoints.front() != 0.0) throw DomainError("first breakpoint must be 0");
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    if (!(breakpoints[i] > breakpoints[i - 1])) throw DomainError("breakpoints must increase strictly");
  }
  if (!std::isfinite(alpha)) throw DomainError("coupling must be finite");
  Potential p;
  p.kind_ = PotentialKind::piecewise_constant;
  p.a_ = breakpoints.back();
  p.alpha_ = alpha;
  p.edges_ = std::move(breakpoints);
  p.values_ = std::move(values);
  return p;
}

Potential Potential::sampled(std::vector<double> samples, double a, double alpha) {
  if (samples.size() < 16) throw DomainError("sampled potential needs at least 16 samples");
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("support bound a must be positive");
  if (!std::isfinite(alpha)) throw DomainError("coupling must be finite");
  Potential p;
  p.kind_ = PotentialKind::sampled_smooth;
  p.a_ = a;
  p.alpha_ = alpha;
  p.edges_ = {0.0, a};
  p.second_ = spline_second_derivatives(samples, a / static_cast<double>(samples.size() - 1));
  p.samples_ = std::move(samples);
  return p;
}

Potential Potential::preset(std::string_view name, double a, double alpha) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("support bound a must be positive");
  Potential p;
  if (name == "zero") {
    p = piecewise_constant({0.0, a}, {0.0}, alpha);
  } else if (name == "box") {
    p = piecewise_constant({0.0, a}, {1.0}, alpha);
  } else if (name == "bump") {
    std::vector<double> s(257);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = bump(static_cast<double>(i) / 256.0);
    p = sampled(std::move(s), a, alpha);
  } else {
    throw DomainError("unknown potential preset '" + std::string(name) + "'");
  }
  p.preset_ = std::string(name);
  return p;
}

Potential Potential::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw DomainError("potential file: expected an object with a string 'kind'");
  }
  const std::string kind = j["kind"];
  const double alpha = j.value("alpha", 1.0);
  if (kind == "preset") {
    if (!j.contains("name") || !j["name"].is_string()) throw DomainError("preset potential needs 'name'");
    return preset(j["name"].get<std::string>(), j.value("a", 1.0), alpha);
  }
  if (kind == "piecewise_constant") {
    auto bp = parse_doubles(j, "breakpoints");
    auto vals = parse_doubles(j, "values");
    if (j.contains("a") && (bp.empty() || j["a"].get<double>() != bp.back())) {
      throw DomainError("potential file: 'a' must equal the last breakpoint");
    }
    return piecewise_constant(std::move(bp), std::move(vals), alpha);
  }
  if (kind == "sampled") {
    if (!j.contains("a")) throw DomainError("sampled potential needs 'a'");
    return sampled(parse_doubles(j, "samples"), j["a"].get<double>(), alpha);
  }
  throw DomainError("potential file: unknown kind '" + kind + "'");
}

nlohmann::json Potential::to_json() const {
  nlohmann::json j;
  if (!preset_.empty()) {
    j["kind"] = "preset";
    j["name"] = preset_;
  } else if (kind_ == PotentialKind::piecewise_constant) {
    j["kind"] = "piecewise_constant";
    j["breakpoints"] = edges_;
    j["values"] = values_;
  } else {
    j["kind"] = "sampled";
    j["samples"] = samples_;
  }
  j["a"] = a_;
  j["alpha"] = alpha_;
  return j;
}

std::uint64_t Potential::spec_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_json().dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Potential Potential::scaled(double c) const {
  Potential p = *this;
  p.alpha_ *= c;
  return p;
}

double Potential::spline_segment(std::size_t seg, double t) const {
  const double h = a_ / static_cast<double>(samples_.size() - 1);
  const double x0 = static_cast<double>(seg) * h;
  const double u = t - x0;
  const double v = h - u;
  const double m0 = second_[seg];
  const double m1 = second_[seg + 1];
  return m0 * v * v * v / (6.0 * h) + m1 * u * u * u / (6.0 * h) +
         (samples_[seg] - m0 * h * h / 6.0) * v / h + (samples_[seg + 1] - m1 * h * h / 6.0) * u / h;
}

double Potential::profile(double t) const {
  if (kind_ == PotentialKind::piecewise_constant) {
    const auto it = std::upper_bound(edges_.begin(), edges_.end(), t);
    const auto j = static_cast<std::size_t>(it - edges_.begin());
    return values_[j - 1];
  }
  const std::size_t segs = samples_.size() - 1;
  const double h = a_ / static_cast<double>(segs);
  const auto seg = std::min(static_cast<std::size_t>(t / h), segs - 1);
  return spline_segment(seg, t);
}

double Potential::evaluate(double t) const {
  if (!(t >= 0.0)) throw DomainError("potential evaluated at negative distance");
  if (kind_ == PotentialKind::piecewise_constant) {
    if (t >= a_) return 0.0;
  } else if (t > a_) {
    return 0.0;
  }
  return alpha_ * profile(t);
}

double Potential::scaled_evaluate(double eps, double distance) const {
  if (!(eps > 0.0)) throw DomainError("scale eps must be positive");
  return evaluate(distance / eps) / (eps * eps);
}

double Potential::evaluate_on_piece(std::size_t piece, double t) const {
  if (piece + 1 >= edges_.size()) return 0.0;
  if (kind_ == PotentialKind::piecewise_constant) return alpha_ * values_[piece];
  return alpha_ * profile(std::clamp(t, 0.0, a_));
}

template <typename F>
double Potential::integrate_weighted(double t0, double t1, F weight) const {
  t0 = std::max(t0, 0.0);
  t1 = std::min(t1, a_);
  if (!(t1 > t0)) return 0.0;
  double total = 0.0;
  if (kind_ == PotentialKind::piecewise_constant) {
    for (std::size_t j = 0; j + 1 < edges_.size(); ++j) {
      const double lo = std::max(t0, edges_[j]);
      const double hi = std::min(t1, edges_[j + 1]);
      if (hi > lo) total += values_[j] * weight(lo, hi);
    }
    return alpha_ * total;
  }
  const std::size_t segs = samples_.size() - 1;
  const double h = a_ / static_cast<double>(segs);
  const auto first = std::min(static_cast<std::size_t>(t0 / h), segs - 1);
  for (std::size_t s = first; s < segs; ++s) {
    const double lo = std::max(t0, static_cast<double>(s) * h);
    const double hi = std::min(t1, static_cast<double>(s + 1) * h);
    if (lo >= t1) break;
    if (hi <= lo) continue;
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    for (std::size_t g = 0; g < 3; ++g) {
      const double x = mid + half * kGaussX[g];
      total += half * kGaussW[g] * spline_segment(s, x) * weight.density(x);
    }
  }
  return alpha_ * total;
}

namespace {

struct UnitWeight {
  double operator()(double lo, double hi) const { return hi - lo; }
  double density(double) const { return 1.0; }
};

struct LinearWeight {
  double operator()(double lo, double hi) const { return 0.5 * (hi * hi - lo * lo); }
  double density(double x) const { return x; }
};

}  // namespace

double Potential::integrate(double t0, double t1) const {
  return integrate_weighted(t0, t1, UnitWeight{});
}

double Potential::first_moment(double t0, double t1) const {
  return integrate_weighted(t0, t1, LinearWeight{});
}

double Potential::sup_norm() const {
  if (kind_ == PotentialKind::piecewise_constant) {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return std::abs(alpha_) * m;
  }
  double m = 0.0;
  for (std::size_t i = 0; i <= kRefinement; ++i) {
    m = std::max(m, std::abs(evaluate(a_ * static_cast<double>(i) / kRefinement)));
  }
  for (double s : samples_) m = std::max(m, std::abs(alpha_ * s));
  return m;
}

double Potential::hardy_ratio() const {
  double m = 0.0;
  for (std::size_t i = 0; i <= kRefinement; ++i) {
    const double t = a_ * static_cast<double>(i) / kRefinement;
    m = std::max(m, -t * t * evaluate(t));
  }
  return m;
}

bool Potential::nonpositive() const {
  if (kind_ == PotentialKind::piecewise_constant) {
    return std::all_of(values_.begin(), values_.end(), [this](double v) { return alpha_ * v <= 0.0; });
  }
  for (std::size_t i = 0; i <= kRefinement; ++i) {
    if (evaluate(a_ * static_cast<double>(i) / kRefinement) > 0.0) return false;
  }
  return true;
}

bool Potential::nonnegative() const {
  if (kind_ == PotentialKind::piecewise_constant) {
    return std::all_of(values_.begin(), values_.end(), [this](double v) { return alpha_ * v >= 0.0; });
  }
  for (std::size_t i = 0; i <= kRefinement; ++i) {
    if (evaluate(a_ * static_cast<double>(i) / kRefinement) < 0.0) return false;
  }
  return true;
}

bool Potential::identically_zero() const { return sup_norm() == 0.0; }

HardyClassification classify_hardy(const Potential& v, double c_omega) {
  if (!(c_omega > 0.0 && c_omega <= 0.25)) {
    throw DomainError("Hardy constant must lie in (0, 1/4]");
  }
  const double cv = v.hardy_ratio();
  return HardyClassification{cv < c_omega, c_omega - cv, cv};
}

}  // namespace reslab
