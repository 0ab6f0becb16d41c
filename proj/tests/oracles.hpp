#pragma once

// Test-only reference computations.  Nothing here calls into the library, so
// agreement with the library is evidence rather than tautology.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace oracle {

using Dense = std::vector<std::vector<double>>;

inline Dense dense_tridiag(const std::vector<double>& d, const std::vector<double>& e) {
  const std::size_t n = d.size();
  Dense a(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    a[i][i] = d[i];
    if (i + 1 < n) a[i][i + 1] = a[i + 1][i] = e[i];
  }
  return a;
}

/// det(A - lambda I) by dense Gaussian elimination with partial pivoting.
inline double char_poly(Dense a, double lambda) {
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) a[i][i] -= lambda;
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    }
    if (a[p][c] == 0.0) return 0.0;
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

inline double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                          int iterations = 200) {
  double flo = f(lo);
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// All eigenvalues of a small dense symmetric matrix: sign changes of the
/// characteristic polynomial on a fine grid, then bisection.
inline std::vector<double> dense_eigenvalues(const Dense& a, std::size_t grid = 200000) {
  const std::size_t n = a.size();
  double r = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += std::abs(a[i][j]);
    r = std::max(r, row);
  }
  r = r * 1.01 + 1e-9;
  auto f = [&](double x) { return char_poly(a, x); };
  std::vector<double> roots;
  double x0 = -r;
  double f0 = f(x0);
  for (std::size_t k = 1; k <= grid; ++k) {
    const double x1 = -r + 2.0 * r * static_cast<double>(k) / static_cast<double>(grid);
    const double f1 = f(x1);
    if (f1 == 0.0) {
      roots.push_back(x1);
    } else if ((f0 < 0.0) != (f1 < 0.0) && f0 != 0.0) {
      roots.push_back(bisect_root(f, x0, x1));
    }
    x0 = x1;
    f0 = f1;
  }
  if (roots.size() != n) throw std::runtime_error("char-poly oracle: root count mismatch");
  return roots;
}

/// Dense complex Gaussian elimination with partial pivoting.
inline std::vector<std::complex<double>> dense_solve(
    std::vector<std::vector<std::complex<double>>> a, std::vector<std::complex<double>> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    }
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const auto f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<std::complex<double>> x(n);
  for (std::size_t i = n; i-- > 0;) {
    std::complex<double> s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

/// Bessel J_n by its power series; accurate for the moderate arguments used here (x < 12).
inline double bessel_j(int n, double x) {
  const double half = 0.5 * x;
  double term = 1.0;
  for (int k = 1; k <= n; ++k) term *= half / k;
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= -half * half / (static_cast<double>(k) * (k + n));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

/// First positive zero of J_n above lo, located by scanning then bisecting.
inline double bessel_zero(int n, double lo = 0.5, double step = 0.01) {
  double x0 = lo;
  double f0 = bessel_j(n, x0);
  for (double x1 = lo + step; x1 < 30.0; x1 += step) {
    const double f1 = bessel_j(n, x1);
    if ((f0 < 0.0) != (f1 < 0.0)) {
      return bisect_root([n](double x) { return bessel_j(n, x); }, x0, x1);
    }
    x0 = x1;
    f0 = f1;
  }
  throw std::runtime_error("bessel_zero: no sign change");
}

/// Lowest lambda with sqrt(l) J0'(sqrt(l)) + gamma J0(sqrt(l)) = 0 (Robin disk, m = 0).
inline double robin_disk_m0(double gamma) {
  auto f = [gamma](double x) { return -x * bessel_j(1, x) + gamma * bessel_j(0, x); };
  double x0 = 1e-3;
  double f0 = f(x0);
  for (double x1 = 0.01; x1 < 10.0; x1 += 0.01) {
    const double f1 = f(x1);
    if ((f0 < 0.0) != (f1 < 0.0)) {
      const double x = bisect_root(f, x0, x1);
      return x * x;
    }
    x0 = x1;
    f0 = f1;
  }
  throw std::runtime_error("robin_disk_m0: no sign change");
}

}  // namespace oracle
