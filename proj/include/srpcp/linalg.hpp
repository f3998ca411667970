#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace srpcp {

using DenseMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

namespace linalg {

/// Raised when an SVD routine fails to converge. Never silently ignored.
class SvdError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool all_finite(const DenseMatrix& a);

/// Throws std::invalid_argument naming `what` if `a` holds NaN or Inf.
void require_finite(const DenseMatrix& a, std::string_view what);

/// Thin SVD: A = U * Diag(singular_values) * V^T with p = min(rows, cols).
struct SvdResult {
  DenseMatrix U;
  Vector singular_values;  // nonincreasing, >= 0
  DenseMatrix V;
};

/// Top-k singular triplets. `converged` is false when the iteration budget
/// ran out before every requested residual met the tolerance.
struct PartialSvd {
  DenseMatrix U;
  Vector singular_values;
  DenseMatrix V;
  bool converged = false;
  int restarts = 0;
  int matvecs = 0;
};

struct PartialSvdOptions {
  // Residual ||A^T u - sigma v|| of each requested triplet must fall below
  // tolerance * sigma_1.
  double tolerance = 1e-10;
  int max_restarts = 300;
  // Krylov subspace dimension; 0 picks a default from k.
  Index work_dim = 0;
  std::uint64_t seed = 0x5eedf00dULL;
};

/// Full thin SVD (LAPACK divide-and-conquer on a copy of A). Deterministic.
SvdResult svd_full(const DenseMatrix& a);

/// Truncated SVD by thick-restarted Golub-Kahan-Lanczos bidiagonalization
/// with full reorthogonalization. Requires 1 <= k <= min(rows, cols).
PartialSvd svd_partial(const DenseMatrix& a, Index k,
                       const PartialSvdOptions& options = {});

double norm_nuclear(const DenseMatrix& a);
double norm_fro(const DenseMatrix& a);
double norm_l1(const DenseMatrix& a);
double norm_spectral(const DenseMatrix& a);
double norm_linf(const DenseMatrix& a);

/// B = [L; S], the variable pair of the decomposition stacked vertically.
class StackedPair {
 public:
  StackedPair(DenseMatrix low_rank, DenseMatrix sparse);

  const DenseMatrix& low_rank() const { return low_rank_; }
  const DenseMatrix& sparse() const { return sparse_; }

  /// <[L_B; S_B], [L_C; S_C]> = <L_B, L_C> + <S_B, S_C>.
  double inner(const StackedPair& other) const;

 private:
  DenseMatrix low_rank_;
  DenseMatrix sparse_;
};

/// ||L||_* + lambda * ||S||_1
double norm_diamond(const StackedPair& b, double lambda);
/// max(||L||, ||S||_inf / lambda), the dual of norm_diamond.
double norm_diamond_dual(const StackedPair& b, double lambda);

}  // namespace linalg
}  // namespace srpcp
