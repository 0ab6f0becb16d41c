#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "reslab/errors.hpp"
#include "reslab/geometry.hpp"

using namespace reslab;
using std::numbers::pi;

namespace {

BoundaryCurve sampled_ellipse(double a, double b, std::size_t n, double phase = 0.0) {
  std::vector<double> x(n + 1), y(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = 2.0 * pi * static_cast<double>(i % n) / static_cast<double>(n) + phase;
    x[i] = a * std::cos(t);
    y[i] = b * std::sin(t);
  }
  return BoundaryCurve::sampled(x, y);
}

// Smooth star-shaped, non-convex curve r(t) = 1 + 0.3 cos(3t).
BoundaryCurve flower(std::size_t n) {
  std::vector<double> x(n + 1), y(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = 2.0 * pi * static_cast<double>(i % n) / static_cast<double>(n);
    const double r = 1.0 + 0.3 * std::cos(3.0 * t);
    x[i] = r * std::cos(t);
    y[i] = r * std::sin(t);
  }
  return BoundaryCurve::sampled(x, y);
}

double ellipse_kappa(double a, double b, double t) {
  return a * b / std::pow(a * a * std::sin(t) * std::sin(t) + b * b * std::cos(t) * std::cos(t), 1.5);
}

}  // namespace

TEST_CASE("curvature") {
  for (double t : {0.0, 1.0, 4.0}) {
    CHECK(BoundaryCurve::circle(2.5).curvature(t) == doctest::Approx(0.4).epsilon(1e-12));
  }
  const auto e = BoundaryCurve::ellipse(2.0, 1.0);
  CHECK(e.curvature(0.0) == doctest::Approx(2.0));
  CHECK(e.curvature(pi / 2.0) == doctest::Approx(0.25));
  const auto s = sampled_ellipse(1.0, 1.0, 256);
  for (int j = 0; j < 50; ++j) CHECK(std::abs(s.curvature(0.1257 * j) - 1.0) <= 1e-6);
}

TEST_CASE("robin coefficient and volume factor") {
  CHECK(BoundaryCurve::circle(1.0).robin_coefficient(0.3) == 0.5);
  CHECK(BoundaryCurve::circle(2.0).robin_coefficient(0.3) == 0.25);
  CHECK(BoundaryCurve::ellipse(2.0, 1.0).robin_coefficient(0.0) == doctest::Approx(1.0));
  const auto c = BoundaryCurve::circle(1.0);
  CHECK(c.volume_factor(0.2, 0.25) == 0.75);
  CHECK(c.volume_factor(0.2, 1.0) == 0.0);
  CHECK(flower(128).volume_factor(1.3, 0.0) == 1.0);
  CHECK_THROWS_AS(c.volume_factor(0.0, -0.1), DomainError);
}

TEST_CASE("rho and maximal width") {
  const auto c = BoundaryCurve::circle(1.0);
  const auto r = rho_and_max_width(c, 0.5);
  CHECK(r.rho == 0.5);
  CHECK(r.delta_max == doctest::Approx(0.999));
  CHECK_THROWS_AS(rho_and_max_width(c, 1.1), TubeTooWideError);
  CHECK_THROWS_AS(rho_and_max_width(c, 1.1), DomainError);
  CHECK_THROWS_AS(rho_and_max_width(c, 0.0), DomainError);
  CHECK(rho_and_max_width(BoundaryCurve::ellipse(2.0, 1.0), 0.1).rho == doctest::Approx(0.8).epsilon(1e-12));
  // Non-convex curve: the negative-curvature lobes do not bound the width, the
  // offset check keeps the inner tube free of self-crossings.
  const auto f = flower(256);
  const auto tf = rho_and_max_width(f, 0.05);
  CHECK(tf.delta_max > 0.0);
  CHECK(tf.delta_max <= 0.999 / f.max_curvature());
}

TEST_CASE("curve validation and json") {
  CHECK_THROWS_AS(BoundaryCurve::circle(0.0), DomainError);
  CHECK_THROWS_AS(BoundaryCurve::ellipse(1.0, -1.0), DomainError);
  // Not closed.
  CHECK_THROWS_AS(BoundaryCurve::sampled({1, 0, -1, 0, 1, 0, -1, 0, 0.5}, {0, 1, 0, -1, 0, 1, 0, -1, 0}),
                  DomainError);
  // Clockwise.
  std::vector<double> x(17), y(17);
  for (int i = 0; i <= 16; ++i) {
    x[i] = std::cos(-2.0 * pi * (i % 16) / 16.0);
    y[i] = std::sin(-2.0 * pi * (i % 16) / 16.0);
  }
  CHECK_THROWS_AS(BoundaryCurve::sampled(x, y), DomainError);
  // Figure eight is not simple.
  for (int i = 0; i <= 16; ++i) {
    const double t = 2.0 * pi * (i % 16) / 16.0;
    x[i] = std::sin(t);
    y[i] = std::sin(2.0 * t);
  }
  CHECK_THROWS_AS(BoundaryCurve::sampled(x, y), DomainError);

  const auto e = BoundaryCurve::from_json(nlohmann::json::parse(R"({"kind":"ellipse","a":3,"b":2})"));
  CHECK(e.curvature(0.0) == doctest::Approx(3.0 / 4.0));
  CHECK(BoundaryCurve::from_json(e.to_json()).to_json() == e.to_json());
  const auto s = flower(64);
  CHECK(BoundaryCurve::from_json(s.to_json()).curvature(0.7) == doctest::Approx(s.curvature(0.7)).epsilon(1e-13));
  CHECK_THROWS_AS(BoundaryCurve::from_json(nlohmann::json::parse(R"({"kind":"square"})")), DomainError);
  CHECK_THROWS_AS(BoundaryCurve::from_json(nlohmann::json::parse(R"({"kind":"ellipse","a":1})")), DomainError);
}

TEST_CASE("property: sampled curves reproduce the closed forms") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> u(0.0, 2.0 * pi);
  const auto s = sampled_ellipse(2.0, 1.0, 256);
  for (int i = 0; i < 100; ++i) {
    const double t = u(gen);
    CHECK(s.curvature(t) == doctest::Approx(ellipse_kappa(2.0, 1.0, t)).epsilon(1e-5));
  }
}

TEST_CASE("property: convexity sign and total turning") {
  const BoundaryCurve curves[] = {BoundaryCurve::circle(0.7), BoundaryCurve::ellipse(3.0, 1.0),
                                  sampled_ellipse(1.5, 1.0, 256), flower(256)};
  for (const auto& c : curves) CHECK(std::abs(c.total_turning() - 2.0 * pi) <= 1e-6);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 256; ++j) CHECK(curves[i].curvature(2.0 * pi * j / 256.0) >= 0.0);
  }
  bool negative = false;
  for (int j = 0; j < 256; ++j) negative = negative || curves[3].curvature(2.0 * pi * j / 256.0) < 0.0;
  CHECK(negative);
}

TEST_CASE("property: resampling does not move the curvature") {
  const auto coarse = flower(256);
  const auto fine = flower(512);
  for (int j = 0; j < 64; ++j) {
    const double t = 2.0 * pi * j / 64.0;
    CHECK(std::abs(coarse.curvature(t) - fine.curvature(t)) <= 1e-6);
  }
  for (int j = 0; j < 64; ++j) CHECK(coarse.volume_factor(0.1 * j, 0.0) == 1.0);
}
