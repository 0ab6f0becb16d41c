#pragma once

// Symmetric tridiagonal linear algebra in an optional diagonal inner product.
//
// An operator T with diagonal d, off-diagonal e and weight w represents the
// pencil (T, W), W = diag(w).  Its eigenvalues are the generalized eigenvalues
// T v = lambda W v and its resolvent at z maps f to (T - z W)^{-1} W f, i.e. the
// resolvent of the operator W^{-1} T acting in the space with <u,v>_w.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace reslab {

/// Tolerances and knobs shared by every routine in this header.
struct TridiagConfig {
  /// Bisection stops once the bracket is below rel_tol * max(1, |lambda|)
  /// or below the resolution of the arithmetic.
  double bisection_rel_tol = 1e-15;
  /// Zero pivots in the Sturm recurrence are replaced by +-pivot_floor.
  double pivot_floor = 1e-300;
  int max_inverse_iterations = 50;
  /// Eigen-residual bound: residual_tol * (1 + |lambda|) plus a rounding floor
  /// proportional to eps * ||T||.
  double residual_tol = 1e-8;
  /// Eigenvalues closer than cluster_tol * max(1, ||T||) are orthogonalized.
  double cluster_tol = 1e-10;
  std::uint64_t seed = 0x5eed'1234'abcdULL;
};

inline constexpr TridiagConfig kDefaultTridiagConfig{};

class TridiagonalOperator {
 public:
  TridiagonalOperator(std::vector<double> diag, std::vector<double> offdiag,
                      std::optional<std::vector<double>> weight = std::nullopt);

  std::size_t size() const { return diag_.size(); }
  const std::vector<double>& diag() const { return diag_; }
  const std::vector<double>& offdiag() const { return offdiag_; }
  const std::optional<std::vector<double>>& weight() const { return weight_; }
  bool weighted() const { return weight_.has_value(); }

  /// Weight entry i, 1 when unweighted.
  double weight_at(std::size_t i) const { return weight_ ? (*weight_)[i] : 1.0; }

  /// Gershgorin bound on the spectral radius of the (standard) matrix.
  double gershgorin_radius() const;

  /// y = T x (matrix product; the weight is not applied).
  template <typename S>
  std::vector<S> apply(std::span<const S> x) const;

  friend bool operator==(const TridiagonalOperator&, const TridiagonalOperator&) = default;

 private:
  std::vector<double> diag_;
  std::vector<double> offdiag_;
  std::optional<std::vector<double>> weight_;
};

struct EigenPair {
  double value = 0.0;
  /// Normalized to one in the operator's inner product.
  std::vector<double> vector;
  /// 1 = lowest.
  std::size_t index = 0;
};

/// W^{-1/2} T W^{-1/2}: an unweighted operator with the same eigenvalues.
TridiagonalOperator weighted_to_standard(const TridiagonalOperator& t);

/// Number of eigenvalues strictly below lambda (LDL^T inertia).
std::size_t count_below(const TridiagonalOperator& t, double lambda,
                        const TridiagConfig& cfg = kDefaultTridiagConfig);

/// The k lowest eigenpairs, ascending.  Eigenvalues by Sturm bisection,
/// eigenvectors by inverse iteration.  Weighted operators are reduced with
/// weighted_to_standard and the vectors mapped back.
std::vector<EigenPair> smallest_eigenvalues(const TridiagonalOperator& t, std::size_t k,
                                            const TridiagConfig& cfg = kDefaultTridiagConfig);

/// The k lowest eigenvalues only (no vectors).
std::vector<double> smallest_eigenvalue_values(const TridiagonalOperator& t, std::size_t k,
                                               const TridiagConfig& cfg = kDefaultTridiagConfig);

/// Solves (T - z W) u = W rhs by tridiagonal LU with partial pivoting.
std::vector<std::complex<double>> solve_shifted(const TridiagonalOperator& t,
                                                std::complex<double> z,
                                                std::span<const std::complex<double>> rhs);

/// Norm induced by <u,v>_w.
double weighted_norm(const TridiagonalOperator& t, std::span<const double> v);
double weighted_norm(const TridiagonalOperator& t, std::span<const std::complex<double>> v);

/// ||T v - lambda W v||_{W^{-1}}: the residual of the operator W^{-1}T measured in <.,.>_w.
double eigen_residual(const TridiagonalOperator& t, double lambda, std::span<const double> v);

// ---------------------------------------------------------------------------

template <typename S>
std::vector<S> TridiagonalOperator::apply(std::span<const S> x) const {
  const std::size_t n = size();
  std::vector<S> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    S acc = diag_[i] * x[i];
    if (i > 0) acc += offdiag_[i - 1] * x[i - 1];
    if (i + 1 < n) acc += offdiag_[i] * x[i + 1];
    y[i] = acc;
  }
  return y;
}

}  // namespace reslab
