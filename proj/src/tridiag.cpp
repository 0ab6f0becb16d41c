#include "reslab/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "reslab/errors.hpp"

namespace reslab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// LU factorization with partial pivoting of a general tridiagonal matrix,
// following the LAPACK gttrf/gtts2 layout (second superdiagonal du2 from pivoting).
template <typename S>
class TridiagLU {
 public:
  TridiagLU(std::vector<S> sub, std::vector<S> diag, std::vector<S> sup)
      : dl_(std::move(sub)), d_(std::move(diag)), du_(std::move(sup)) {
    const std::size_t n = d_.size();
    du2_.assign(n > 2 ? n - 2 : 0, S{});
    pivoted_.assign(n > 1 ? n - 1 : 0, false);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (std::abs(d_[i]) >= std::abs(dl_[i])) {
        if (d_[i] != S{}) {
          const S fact = dl_[i] / d_[i];
          dl_[i] = fact;
          d_[i + 1] -= fact * du_[i];
        }
      } else {
        const S fact = d_[i] / dl_[i];
        d_[i] = dl_[i];
        dl_[i] = fact;
        const S temp = du_[i];
        du_[i] = d_[i + 1];
        d_[i + 1] = temp - fact * d_[i + 1];
        if (i + 2 < n) {
          du2_[i] = du_[i + 1];
          du_[i + 1] = -fact * du_[i + 1];
        }
        pivoted_[i] = true;
      }
    }
  }

  /// Smallest |U_ii| relative to scale; used to detect singularity.
  double min_pivot() const {
    double m = std::numeric_limits<double>::infinity();
    for (const S& v : d_) m = std::min(m, static_cast<double>(std::abs(v)));
    return m;
  }

  void replace_zero_pivots(double floor) {
    for (S& v : d_) {
      if (std::abs(v) < floor) v = S{floor};
    }
  }

  void solve_in_place(std::vector<S>& b) const {
    const std::size_t n = d_.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (!pivoted_[i]) {
        b[i + 1] -= dl_[i] * b[i];
      } else {
        const S temp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = temp - dl_[i] * b[i];
      }
    }
    b[n - 1] /= d_[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - du_[n - 2] * b[n - 1]) / d_[n - 2];
    for (std::size_t k = n; k-- > 2;) {
      const std::size_t i = k - 2;
      b[i] = (b[i] - du_[i] * b[i + 1] - du2_[i] * b[i + 2]) / d_[i];
    }
  }

 private:
  std::vector<S> dl_, d_, du_, du2_;
  std::vector<bool> pivoted_;
};

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// Uniform [-1, 1) from raw 64-bit draws; independent of the library's distributions.
std::vector<double> start_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<double> v(n);
  for (double& x : v) {
    x = 2.0 * static_cast<double>(gen() >> 11) * 0x1.0p-53 - 1.0;
  }
  return v;
}

double standard_residual(const TridiagonalOperator& a, double lambda, std::span<const double> v) {
  std::vector<double> r = a.apply<double>(v);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= lambda * v[i];
  return norm2(r);
}

double bisect_eigenvalue(const TridiagonalOperator& a, std::size_t j, double lo, double hi,
                         double radius, const TridiagConfig& cfg) {
  // Invariant: count_below(lo) < j <= count_below(hi).
  const double floor = 1e-3 * kEps * std::max(radius, 1e-300);
  for (int it = 0; it < 2000; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (hi - lo <= std::max(cfg.bisection_rel_tol * std::max(std::abs(lo), std::abs(hi)), floor)) {
      break;
    }
    if (count_below(a, mid, cfg) >= j) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> standard_eigenvalues(const TridiagonalOperator& a, std::size_t k,
                                         const TridiagConfig& cfg) {
  const double radius = a.gershgorin_radius();
  const double pad = 1e-12 * std::max(1.0, radius) + 1e-300;
  std::vector<double> values;
  values.reserve(k);
  double lo = -radius - pad;
  for (std::size_t j = 1; j <= k; ++j) {
    const double hi = radius + pad;
    // Previous eigenvalue is a valid lower bracket: count_below(prev) <= j - 1.
    const double lo_j = std::min(lo, hi);
    const double v = bisect_eigenvalue(a, j, lo_j, hi, radius, cfg);
    values.push_back(v);
    // Reusable as the next lower bracket only if it lies below eigenvalue j + 1.
    if (count_below(a, v, cfg) <= j) lo = v;
  }
  return values;
}

}  // namespace

TridiagonalOperator::TridiagonalOperator(std::vector<double> diag, std::vector<double> offdiag,
                                         std::optional<std::vector<double>> weight)
    : diag_(std::move(diag)), offdiag_(std::move(offdiag)), weight_(std::move(weight)) {
  if (diag_.empty()) throw DomainError("tridiagonal operator needs N >= 1");
  if (offdiag_.size() + 1 != diag_.size()) {
    throw DomainError("offdiag must have N-1 = " + std::to_string(diag_.size() - 1) +
                      " entries, got " + std::to_string(offdiag_.size()));
  }
  if (weight_) {
    if (weight_->size() != diag_.size()) throw DomainError("weight must have N entries");
    for (double w : *weight_) {
      if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("weight entries must be positive");
    }
  }
}

double TridiagonalOperator::gershgorin_radius() const {
  double r = 0.0;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(diag_[i]);
    if (i > 0) row += std::abs(offdiag_[i - 1]);
    if (i + 1 < n) row += std::abs(offdiag_[i]);
    r = std::max(r, row);
  }
  return r;
}

TridiagonalOperator weighted_to_standard(const TridiagonalOperator& t) {
  if (!t.weighted()) throw DomainError("weighted_to_standard: operator carries no weight");
  const auto& w = *t.weight();
  const std::size_t n = t.size();
  std::vector<double> d(n), e(n - 1);
  for (std::size_t i = 0; i < n; ++i) d[i] = t.diag()[i] / w[i];
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = t.offdiag()[i] / std::sqrt(w[i] * w[i + 1]);
  return TridiagonalOperator(std::move(d), std::move(e));
}

std::size_t count_below(const TridiagonalOperator& t, double lambda, const TridiagConfig& cfg) {
  const auto& d = t.diag();
  const auto& e = t.offdiag();
  const std::size_t n = t.size();
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double shift = lambda * t.weight_at(i);
    q = (i == 0) ? d[0] - shift : d[i] - shift - e[i - 1] * (e[i - 1] / q);
    if (std::abs(q) < cfg.pivot_floor) q = std::signbit(q) ? -cfg.pivot_floor : cfg.pivot_floor;
    if (q < 0.0) ++count;
  }
  return count;
}

std::vector<double> smallest_eigenvalue_values(const TridiagonalOperator& t, std::size_t k,
                                               const TridiagConfig& cfg) {
  if (k < 1 || k > t.size()) {
    throw DomainError("requested " + std::to_string(k) + " eigenvalues of an operator of size " +
                      std::to_string(t.size()));
  }
  if (t.weighted()) return standard_eigenvalues(weighted_to_standard(t), k, cfg);
  return standard_eigenvalues(t, k, cfg);
}

std::vector<EigenPair> smallest_eigenvalues(const TridiagonalOperator& t, std::size_t k,
                                            const TridiagConfig& cfg) {
  if (k < 1 || k > t.size()) {
    throw DomainError("requested " + std::to_string(k) + " eigenvalues of an operator of size " +
                      std::to_string(t.size()));
  }
  const TridiagonalOperator a = t.weighted() ? weighted_to_standard(t) : t;
  const std::vector<double> values = standard_eigenvalues(a, k, cfg);
  const std::size_t n = a.size();
  const double radius = a.gershgorin_radius();
  const double cluster = cfg.cluster_tol * std::max(1.0, radius);

  std::vector<EigenPair> pairs;
  pairs.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    const double lambda = values[j];
    const double tol = cfg.residual_tol * (1.0 + std::abs(lambda)) + 64.0 * kEps * radius;

    // Earlier members of the same cluster; the new vector must be orthogonal to them.
    std::vector<std::size_t> cluster_members;
    for (std::size_t i = j; i-- > 0;) {
      if (std::abs(values[i] - lambda) > cluster) break;
      cluster_members.push_back(i);
    }

    std::vector<double> sub(a.offdiag()), sup(a.offdiag()), diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a.diag()[i] - lambda;
    TridiagLU<double> lu(std::move(sub), std::move(diag), std::move(sup));
    lu.replace_zero_pivots(kEps * std::max(radius, 1e-300));

    std::vector<double> x = start_vector(n, cfg.seed + j);
    double residual = std::numeric_limits<double>::infinity();
    bool converged = false;
    for (int it = 0; it < cfg.max_inverse_iterations; ++it) {
      lu.solve_in_place(x);
      for (std::size_t c : cluster_members) {
        const double proj = dot(x, pairs[c].vector);  // pairs hold standard vectors until the end
        for (std::size_t i = 0; i < n; ++i) x[i] -= proj * pairs[c].vector[i];
      }
      const double nrm = norm2(x);
      if (!(nrm > 0.0) || !std::isfinite(nrm)) {
        x = start_vector(n, cfg.seed + 7919 * (j + 1) + static_cast<std::uint64_t>(it));
        continue;
      }
      for (double& v : x) v /= nrm;
      residual = standard_residual(a, lambda, x);
      if (residual <= tol) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw AccuracyError("inverse iteration stalled for eigenvalue " + std::to_string(j + 1) +
                          " (residual " + std::to_string(residual) + ")");
    }
    // Fix the sign: first component of largest magnitude is positive.
    const auto big = std::max_element(x.begin(), x.end(),
                                      [](double p, double q) { return std::abs(p) < std::abs(q); });
    if (*big < 0.0) {
      for (double& v : x) v = -v;
    }
    pairs.push_back(EigenPair{lambda, std::move(x), j + 1});
  }

  if (t.weighted()) {
    const auto& w = *t.weight();
    for (EigenPair& p : pairs) {
      for (std::size_t i = 0; i < n; ++i) p.vector[i] /= std::sqrt(w[i]);
    }
  }
  return pairs;
}

std::vector<std::complex<double>> solve_shifted(const TridiagonalOperator& t,
                                                std::complex<double> z,
                                                std::span<const std::complex<double>> rhs) {
  using C = std::complex<double>;
  const std::size_t n = t.size();
  if (rhs.size() != n) throw DomainError("solve_shifted: rhs length does not match operator");
  std::vector<C> sub(t.offdiag().begin(), t.offdiag().end());
  std::vector<C> sup(sub);
  std::vector<C> diag(n);
  std::vector<C> b(n);
  for (std::size_t i = 0; i < n; ++i) {
    diag[i] = t.diag()[i] - z * t.weight_at(i);
    b[i] = t.weight_at(i) * rhs[i];
  }
  TridiagLU<C> lu(std::move(sub), std::move(diag), std::move(sup));
  const double scale = std::max(t.gershgorin_radius(), std::abs(z)) + 1e-300;
  if (lu.min_pivot() <= 16.0 * kEps * scale) {
    throw SingularityError("solve_shifted: shift lies on the spectrum to working precision");
  }
  lu.solve_in_place(b);
  return b;
}

double weighted_norm(const TridiagonalOperator& t, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += t.weight_at(i) * v[i] * v[i];
  return std::sqrt(s);
}

double weighted_norm(const TridiagonalOperator& t, std::span<const std::complex<double>> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += t.weight_at(i) * std::norm(v[i]);
  return std::sqrt(s);
}

double eigen_residual(const TridiagonalOperator& t, double lambda, std::span<const double> v) {
  std::vector<double> r = t.apply<double>(v);
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double w = t.weight_at(i);
    const double ri = r[i] - lambda * w * v[i];
    s += ri * ri / w;
  }
  return std::sqrt(s);
}

}  // namespace reslab
