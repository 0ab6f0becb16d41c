#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "reslab/errors.hpp"
#include "reslab/tridiag.hpp"

using namespace reslab;
using cd = std::complex<double>;

namespace {

TridiagonalOperator dirichlet_laplacian(std::size_t n) {
  const double h = 1.0 / static_cast<double>(n + 1);
  return TridiagonalOperator(std::vector<double>(n, 2.0 / (h * h)),
                             std::vector<double>(n - 1, -1.0 / (h * h)));
}

double laplacian_eigenvalue(std::size_t n, std::size_t k) {
  const double h = 1.0 / static_cast<double>(n + 1);
  const double s = std::sin(static_cast<double>(k) * std::numbers::pi / (2.0 * (n + 1)));
  return 4.0 / (h * h) * s * s;
}

TridiagonalOperator random_operator(std::mt19937_64& gen, std::size_t n, bool weighted) {
  std::uniform_real_distribution<double> u(-3.0, 3.0), pos(0.2, 4.0);
  std::vector<double> d(n), e(n - 1), w(n);
  for (auto& x : d) x = u(gen);
  for (auto& x : e) x = u(gen);
  for (auto& x : w) x = pos(gen);
  if (weighted) return TridiagonalOperator(d, e, w);
  return TridiagonalOperator(d, e);
}

}  // namespace

TEST_CASE("construction validates shapes and weights") {
  CHECK_THROWS_AS(TridiagonalOperator({}, {}), DomainError);
  CHECK_THROWS_AS(TridiagonalOperator({1.0, 2.0}, {}), DomainError);
  CHECK_THROWS_AS(TridiagonalOperator({1.0, 2.0}, {0.5}, std::vector<double>{1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(TridiagonalOperator({1.0, 2.0}, {0.5}, std::vector<double>{1.0, -2.0}), DomainError);
}

TEST_CASE("weighted_to_standard") {
  SUBCASE("identity weight returns the same entries") {
    TridiagonalOperator t({2.0, 3.0, 4.0}, {-1.0, 0.5}, std::vector<double>{1.0, 1.0, 1.0});
    const auto s = weighted_to_standard(t);
    CHECK(s.diag() == t.diag());
    CHECK(s.offdiag() == t.offdiag());
    CHECK_FALSE(s.weighted());
  }
  SUBCASE("scalar") {
    TridiagonalOperator t({4.0}, {}, std::vector<double>{4.0});
    CHECK(weighted_to_standard(t).diag()[0] == doctest::Approx(1.0));
  }
  SUBCASE("2x2 pencil against the quadratic formula") {
    // det([2-l, -1; -1, 2-4l]) = 4l^2 - 10l + 3
    const double disc = std::sqrt(100.0 - 48.0);
    const double l1 = (10.0 - disc) / 8.0;
    const double l2 = (10.0 + disc) / 8.0;
    TridiagonalOperator t({2.0, 2.0}, {-1.0}, std::vector<double>{1.0, 4.0});
    const auto vals = smallest_eigenvalue_values(weighted_to_standard(t), 2);
    CHECK(vals[0] == doctest::Approx(l1).epsilon(1e-13));
    CHECK(vals[1] == doctest::Approx(l2).epsilon(1e-13));
    const auto direct = smallest_eigenvalue_values(t, 2);
    CHECK(direct[0] == doctest::Approx(l1).epsilon(1e-13));
  }
  SUBCASE("no weight is an error") {
    CHECK_THROWS_AS(weighted_to_standard(TridiagonalOperator({1.0}, {})), DomainError);
  }
}

TEST_CASE("count_below on the discrete Dirichlet Laplacian") {
  const std::size_t n = 100;
  const auto t = dirichlet_laplacian(n);
  const double h = 1.0 / 101.0;
  CHECK(count_below(t, 0.0) == 0);
  CHECK(count_below(t, 4.0 / (h * h) * 1.0001) == 100);
  const double l3 = laplacian_eigenvalue(n, 3);
  CHECK(count_below(t, l3 * (1.0 + 1e-9)) == 3);
  CHECK(count_below(t, l3 * (1.0 - 1e-9)) == 2);
}

TEST_CASE("count_below survives an exactly zero pivot") {
  // First pivot is exactly zero at lambda = 1.
  TridiagonalOperator t({1.0, 1.0, 1.0}, {1.0, 1.0});
  // eigenvalues 1 - sqrt2, 1, 1 + sqrt2
  CHECK(count_below(t, 1.0 + 1e-12) == 2);
  CHECK(count_below(t, 1.0 - 1e-12) == 1);
  const std::size_t c = count_below(t, 1.0);
  CHECK((c == 1 || c == 2));
}

TEST_CASE("smallest_eigenvalues") {
  SUBCASE("Laplacian ground state matches the closed form") {
    const auto t = dirichlet_laplacian(200);
    const auto p = smallest_eigenvalues(t, 3);
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(p[k].value == doctest::Approx(laplacian_eigenvalue(200, k + 1)).epsilon(1e-12));
      CHECK(p[k].index == k + 1);
      CHECK(weighted_norm(t, p[k].vector) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("diagonal operator") {
    TridiagonalOperator t({3.0, 1.0, 2.0}, {0.0, 0.0});
    const auto p = smallest_eigenvalues(t, 2);
    CHECK(p[0].value == doctest::Approx(1.0));
    CHECK(p[1].value == doctest::Approx(2.0));
  }
  SUBCASE("clustered pair gets orthogonal vectors") {
    TridiagonalOperator t({1.0, 1.0}, {1e-12});
    const auto p = smallest_eigenvalues(t, 2);
    CHECK(std::abs(p[0].value - 1.0) <= 2e-12);
    CHECK(std::abs(p[1].value - 1.0) <= 2e-12);
    const double overlap = p[0].vector[0] * p[1].vector[0] + p[0].vector[1] * p[1].vector[1];
    CHECK(std::abs(overlap) < 1e-8);
  }
  SUBCASE("exactly degenerate eigenvalue") {
    TridiagonalOperator t({2.0, 2.0, 5.0}, {0.0, 0.0});
    const auto p = smallest_eigenvalues(t, 2);
    const double overlap = p[0].vector[0] * p[1].vector[0] + p[0].vector[1] * p[1].vector[1] +
                           p[0].vector[2] * p[1].vector[2];
    CHECK(std::abs(overlap) < 1e-10);
  }
  SUBCASE("k out of range") {
    TridiagonalOperator t({1.0, 2.0}, {0.1});
    CHECK_THROWS_AS(smallest_eigenvalues(t, 3), DomainError);
    CHECK_THROWS_AS(smallest_eigenvalues(t, 0), DomainError);
  }
  SUBCASE("weighted eigenvectors satisfy the pencil residual and weighted normalization") {
    std::mt19937_64 gen(11);
    const auto t = random_operator(gen, 30, true);
    for (const auto& p : smallest_eigenvalues(t, 5)) {
      CHECK(eigen_residual(t, p.value, p.vector) <= 1e-8 * (1.0 + std::abs(p.value)));
      CHECK(weighted_norm(t, p.vector) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("solve_shifted") {
  SUBCASE("identity at z = i") {
    TridiagonalOperator t({1.0, 1.0, 1.0}, {0.0, 0.0});
    std::vector<cd> rhs{1.0, 0.0, 0.0};
    const auto u = solve_shifted(t, cd(0.0, 1.0), rhs);
    const cd expected = 1.0 / cd(1.0, -1.0);
    CHECK(std::abs(u[0] - expected) < 1e-15);
    CHECK(std::abs(u[1]) < 1e-15);
  }
  SUBCASE("defining identity (T - zW)u = W rhs") {
    std::mt19937_64 gen(5);
    const auto t = random_operator(gen, 50, true);
    std::vector<cd> rhs(50);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& r : rhs) r = cd(u(gen), u(gen));
    const cd z(0.3, 1.0);
    const auto sol = solve_shifted(t, z, rhs);
    const auto tu = t.apply<cd>(sol);
    double res = 0.0, ref = 0.0;
    for (std::size_t i = 0; i < 50; ++i) {
      res = std::max(res, std::abs(tu[i] - z * t.weight_at(i) * sol[i] - t.weight_at(i) * rhs[i]));
      ref = std::max(ref, std::abs(t.weight_at(i) * rhs[i]));
    }
    CHECK(res <= 1e-10 * ref);
  }
  SUBCASE("real shift on an eigenvalue is singular") {
    TridiagonalOperator t({1.0, 2.0}, {0.0});
    std::vector<cd> rhs{1.0, 1.0};
    CHECK_THROWS_AS(solve_shifted(t, cd(1.0, 0.0), rhs), SingularityError);
  }
  SUBCASE("length mismatch") {
    TridiagonalOperator t({1.0, 2.0}, {0.0});
    std::vector<cd> rhs{1.0};
    CHECK_THROWS_AS(solve_shifted(t, cd(0.0, 1.0), rhs), DomainError);
  }
}

TEST_CASE("property: inertia consistency with the full spectrum") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> pick(-6.0, 6.0);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 15);
    const auto t = random_operator(gen, n, trial % 2 == 0);
    const auto all = smallest_eigenvalue_values(t, n);
    for (int probe = 0; probe < 10; ++probe) {
      const double lambda = pick(gen);
      std::size_t below = 0;
      for (double v : all) below += v < lambda ? 1 : 0;
      CHECK(count_below(t, lambda) == below);
    }
  }
}

TEST_CASE("property: congruence invariance under (cT, cW)") {
  std::mt19937_64 gen(99);
  for (int trial = 0; trial < 20; ++trial) {
    const auto t = random_operator(gen, 12, true);
    const double c = std::pow(10.0, static_cast<double>(trial % 7) - 3.0);
    std::vector<double> d(t.diag()), e(t.offdiag()), w(*t.weight());
    for (auto& x : d) x *= c;
    for (auto& x : e) x *= c;
    for (auto& x : w) x *= c;
    const auto a = smallest_eigenvalue_values(t, 12);
    const auto b = smallest_eigenvalue_values(TridiagonalOperator(d, e, w), 12);
    for (std::size_t i = 0; i < 12; ++i) {
      CHECK(std::abs(a[i] - b[i]) <= 1e-9 * std::max(1.0, std::abs(a[i])));
    }
  }
}

TEST_CASE("property: resolvent at i is non-expansive in the weighted norm") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const auto t = random_operator(gen, 40, true);
    std::vector<cd> v(40);
    for (auto& x : v) x = cd(u(gen), u(gen));
    const auto r = solve_shifted(t, cd(0.0, 1.0), v);
    CHECK(weighted_norm(t, std::span<const cd>(r)) <=
          (1.0 + 1e-8) * weighted_norm(t, std::span<const cd>(v)));
  }
}

TEST_CASE("oracle: dense characteristic polynomial and dense complex solve") {
  std::mt19937_64 gen(31337);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 8);
    const auto t = random_operator(gen, n, false);
    const auto ref = oracle::dense_eigenvalues(oracle::dense_tridiag(t.diag(), t.offdiag()));
    const auto got = smallest_eigenvalue_values(t, n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(got[i] - ref[i]) <= 1e-9);
  }
  for (int trial = 0; trial < 20; ++trial) {
    const auto t = random_operator(gen, 3, false);
    std::vector<std::vector<cd>> a(3, std::vector<cd>(3, 0.0));
    for (std::size_t i = 0; i < 3; ++i) {
      a[i][i] = t.diag()[i] - cd(0.0, 1.0);
      if (i + 1 < 3) a[i][i + 1] = a[i + 1][i] = t.offdiag()[i];
    }
    std::vector<cd> rhs{cd(1.0, 0.5), cd(-0.2, 0.0), cd(0.0, 2.0)};
    const auto ref = oracle::dense_solve(a, rhs);
    const auto got = solve_shifted(t, cd(0.0, 1.0), rhs);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(got[i] - ref[i]) <= 1e-10);
  }
}
