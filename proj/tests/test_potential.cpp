#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "reslab/errors.hpp"
#include "reslab/potential.hpp"

using namespace reslab;
using std::numbers::pi;

TEST_CASE("evaluate") {
  const auto v = Potential::box(-1.0);
  CHECK(v.evaluate(0.5) == -1.0);
  CHECK(v.evaluate(2.0) == 0.0);
  CHECK(v.evaluate(0.0) == -1.0);
  CHECK(v.evaluate(1.0) == 0.0);  // right-continuous at the support edge
  CHECK_THROWS_AS(v.evaluate(-0.1), DomainError);

  SUBCASE("right-continuity at interior breakpoints") {
    const auto w = Potential::piecewise_constant({0.0, 0.5, 1.0}, {2.0, -3.0});
    CHECK(w.evaluate(0.5) == -3.0);
    CHECK(w.evaluate(std::nextafter(0.5, 0.0)) == 2.0);
  }
  SUBCASE("sampled interpolant reproduces its nodes") {
    std::vector<double> s(33);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double t = static_cast<double>(i) / 32.0;
      s[i] = std::exp(-20.0 * (t - 0.5) * (t - 0.5));
    }
    const auto g = Potential::sampled(s, 1.0, -2.0);
    CHECK(g.evaluate(0.5) == doctest::Approx(-2.0).epsilon(1e-6));
    CHECK(g.evaluate(17.0 / 32.0) == doctest::Approx(-2.0 * s[17]).epsilon(1e-12));
    CHECK(g.evaluate(1.0 + 1e-12) == 0.0);
  }
}

TEST_CASE("sup_norm") {
  CHECK(Potential::box(-1.0).sup_norm() == 1.0);
  CHECK(Potential::box(-9.0 * pi * pi / 4.0).sup_norm() == doctest::Approx(22.2066099));
  CHECK(Potential::zero().sup_norm() == 0.0);
  CHECK(Potential::preset("bump", 1.0, -3.0).sup_norm() == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("scaled_evaluate") {
  const auto v = Potential::box(-1.0);
  CHECK(v.scaled_evaluate(0.1, 0.05) == doctest::Approx(-100.0));
  CHECK(v.scaled_evaluate(0.1, 0.11) == 0.0);
  CHECK(v.scaled_evaluate(1.0, 0.3) == v.evaluate(0.3));
  CHECK_THROWS_AS(v.scaled_evaluate(0.0, 0.1), DomainError);
  CHECK_THROWS_AS(v.scaled_evaluate(-1.0, 0.1), DomainError);
}

TEST_CASE("hardy_ratio and classification") {
  const double cv = Potential::box(-1.0).hardy_ratio();
  CHECK(cv >= 1.0 - 1e-3);
  CHECK(cv <= 1.0);
  CHECK(Potential::box(2.0).hardy_ratio() == 0.0);
  CHECK(Potential::box(-0.1).hardy_ratio() == doctest::Approx(0.1).epsilon(1e-3));

  const auto c = classify_hardy(Potential::box(-0.1), 0.25);
  CHECK(c.admissible);
  CHECK(c.margin == doctest::Approx(0.15).epsilon(1e-2));
  CHECK_FALSE(classify_hardy(Potential::box(-1.0), 0.25).admissible);
  CHECK(classify_hardy(Potential::box(5.0), 0.01).admissible);
  CHECK_THROWS_AS(classify_hardy(Potential::box(-1.0), 0.3), DomainError);
  CHECK_THROWS_AS(classify_hardy(Potential::box(-1.0), 0.0), DomainError);
}

TEST_CASE("integrals are exact on pieces") {
  const auto w = Potential::piecewise_constant({0.0, 0.5, 1.0}, {2.0, -3.0}, 2.0);
  CHECK(w.integrate(0.0, 1.0) == doctest::Approx(2.0 * (1.0 - 1.5)));
  CHECK(w.integrate(0.25, 0.75) == doctest::Approx(2.0 * (0.5 - 0.75)));
  CHECK(w.integrate(0.9, 4.0) == doctest::Approx(2.0 * -0.3));
  CHECK(w.first_moment(0.0, 0.5) == doctest::Approx(2.0 * 2.0 * 0.125));

  // Spline integral against a fine midpoint rule.
  const auto b = Potential::preset("bump", 2.0, 1.5);
  double ref = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double t = 0.3 + (1.7 - 0.3) * (i + 0.5) / n;
    ref += b.evaluate(t) * t * (1.4 / n);
  }
  CHECK(b.first_moment(0.3, 1.7) == doctest::Approx(ref).epsilon(1e-8));
}

TEST_CASE("json round trip and validation") {
  const auto v = Potential::piecewise_constant({0.0, 0.3, 1.2}, {1.0, -4.0}, -0.5);
  const auto back = Potential::from_json(v.to_json());
  CHECK(back.to_json() == v.to_json());
  CHECK(back.spec_hash() == v.spec_hash());
  CHECK(Potential::from_json(nlohmann::json::parse(R"({"kind":"preset","name":"box","alpha":-2})"))
            .evaluate(0.5) == -2.0);
  CHECK_THROWS_AS(Potential::from_json(nlohmann::json::parse(R"({"kind":"nope"})")), DomainError);
  CHECK_THROWS_AS(Potential::from_json(nlohmann::json::parse(R"({"kind":"sampled","a":1,"samples":[1,2,3]})")),
                  DomainError);
  CHECK_THROWS_AS(Potential::piecewise_constant({0.0, 0.0}, {1.0}), DomainError);
  CHECK_THROWS_AS(Potential::preset("box", -1.0), DomainError);
}

TEST_CASE("property: scaling covariance, homogeneity and compact support") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto v = Potential::piecewise_constant({0.0, 0.2, 0.7, 1.3}, {-2.0, 0.5, -1.0});
  const auto s = Potential::preset("bump", 1.3, -4.0);
  for (int i = 0; i < 200; ++i) {
    const double eps = 1e-3 + u(gen);
    const double d = 2.0 * u(gen);
    CHECK(v.scaled_evaluate(eps, d) == v.evaluate(d / eps) / (eps * eps));
    const double t = 1.3 + 1e-9 + 10.0 * u(gen);
    CHECK(v.evaluate(t) == 0.0);
    CHECK(s.evaluate(t) == 0.0);
  }
  for (double alpha : {0.1, 2.0, 7.5}) {
    CHECK(v.scaled(alpha).sup_norm() == doctest::Approx(alpha * v.sup_norm()));
    CHECK(v.scaled(-alpha).sup_norm() == doctest::Approx(alpha * v.sup_norm()));
    CHECK(s.scaled(alpha).hardy_ratio() == doctest::Approx(alpha * s.hardy_ratio()));
  }
}
