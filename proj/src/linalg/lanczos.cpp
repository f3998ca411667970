// Thick-restarted Golub-Kahan-Lanczos bidiagonalization for the leading
// singular triplets of a dense matrix.
//
// After j steps the recurrences maintain
//   A V_j = U_j B_j,   A^T U_j = V_j B_j^T + r_j e_j^T,
// with U_j, V_j orthonormal and B_j upper triangular (bidiagonal except for
// the arrow column left behind by a restart). Both Krylov bases are fully
// reorthogonalized. If B_j = X S Y^T then (U_j x_i, s_i, V_j y_i) has residual
// ||A^T U_j x_i - s_i V_j y_i|| = ||r_j|| |X(j-1, i)|, which drives both the
// convergence test and the restart.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "srpcp/linalg.hpp"

namespace srpcp::linalg {
namespace {

// Uniform in [-1, 1) from the 53 high bits; mt19937_64 is fully specified by
// the standard so the start vectors are reproducible across platforms.
Vector random_unit_vector(Index n, std::mt19937_64& gen) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    v(i) = 2.0 * u - 1.0;
  }
  return v / v.norm();
}

// Two passes of classical Gram-Schmidt against the first `count` columns of
// `basis`. Returns the accumulated projection coefficients.
Vector orthogonalize(Vector& x, const DenseMatrix& basis, Index count) {
  if (count == 0) return Vector();
  const auto q = basis.leftCols(count);
  Vector coeffs = q.transpose() * x;
  x.noalias() -= q * coeffs;
  const Vector again = q.transpose() * x;
  x.noalias() -= q * again;
  coeffs += again;
  return coeffs;
}

// A fresh direction orthogonal to the first `count` columns, used after an
// exact breakdown (invariant subspace found).
Vector fresh_direction(Index n, const DenseMatrix& basis, Index count,
                       std::mt19937_64& gen) {
  for (int attempt = 0; attempt < 8; ++attempt) {
    Vector v = random_unit_vector(n, gen);
    orthogonalize(v, basis, count);
    const double nv = v.norm();
    if (nv > 1e-8) return v / nv;
  }
  throw SvdError("svd_partial: could not extend the Krylov basis");
}

PartialSvd truncate_full(const DenseMatrix& a, Index k) {
  SvdResult full = svd_full(a);
  PartialSvd out;
  out.U = full.U.leftCols(k);
  out.singular_values = full.singular_values.head(k);
  out.V = full.V.leftCols(k);
  out.converged = true;
  return out;
}

}  // namespace

PartialSvd svd_partial(const DenseMatrix& a, Index k,
                       const PartialSvdOptions& options) {
  const Index m = a.rows();
  const Index n = a.cols();
  const Index p = std::min(m, n);
  if (k < 1 || k > p) {
    throw std::invalid_argument("svd_partial: k must lie in [1, min(rows, cols)]");
  }
  require_finite(a, "svd_partial input");

  Index work = options.work_dim > 0 ? options.work_dim
                                    : std::max<Index>(2 * k + 8, k + 24);
  work = std::max(work, k + 2);
  if (work >= p) return truncate_full(a, k);

  std::mt19937_64 gen(options.seed);
  const double eps = std::numeric_limits<double>::epsilon();

  DenseMatrix U(m, work);
  DenseMatrix V(n, work);
  DenseMatrix B = DenseMatrix::Zero(work, work);
  V.col(0) = random_unit_vector(n, gen);

  PartialSvd out;
  Index start = 0;
  double anorm = 0.0;  // running estimate of sigma_1 for breakdown tests

  for (int restart = 0;; ++restart) {
    Vector r;
    double beta = 0.0;
    for (Index j = start; j < work; ++j) {
      Vector u = a * V.col(j);
      ++out.matvecs;
      const Vector h = orthogonalize(u, U, j);
      if (j > 0) B.col(j).head(j) = h;
      double alpha = u.norm();
      anorm = std::max(anorm, alpha);
      if (alpha <= eps * std::max(anorm, 1e-300) * 16) {
        u = fresh_direction(m, U, j, gen);
        alpha = 0.0;
      } else {
        u /= alpha;
      }
      B(j, j) = alpha;
      U.col(j) = u;

      r = a.transpose() * U.col(j);
      ++out.matvecs;
      orthogonalize(r, V, j + 1);
      beta = r.norm();
      anorm = std::max(anorm, std::hypot(alpha, beta));
      if (j + 1 < work) {
        if (beta <= eps * std::max(anorm, 1e-300) * 16) {
          V.col(j + 1) = fresh_direction(n, V, j + 1, gen);
        } else {
          V.col(j + 1) = r / beta;
        }
      }
    }

    Eigen::JacobiSVD<DenseMatrix> small(B, Eigen::ComputeFullU |
                                               Eigen::ComputeFullV);
    const Vector& s = small.singularValues();
    const DenseMatrix& X = small.matrixU();
    const DenseMatrix& Y = small.matrixV();
    anorm = std::max(anorm, s(0));

    const double threshold = options.tolerance * s(0);
    bool converged = true;
    for (Index i = 0; i < k; ++i) {
      if (beta * std::abs(X(work - 1, i)) > threshold) {
        converged = false;
        break;
      }
    }

    if (converged || restart >= options.max_restarts) {
      out.converged = converged;
      out.restarts = restart;
      out.singular_values = s.head(k);
      out.U = U * X.leftCols(k);
      out.V = V * Y.leftCols(k);
      return out;
    }

    // Keep the leading Ritz pairs plus a buffer of the next ones.
    const Index keep = std::min(k + (work - k) / 2, work - 1);
    const DenseMatrix u_keep = U * X.leftCols(keep);
    const DenseMatrix v_keep = V * Y.leftCols(keep);
    U.leftCols(keep) = u_keep;
    V.leftCols(keep) = v_keep;
    B.setZero();
    B.topLeftCorner(keep, keep) = s.head(keep).asDiagonal();
    if (beta <= eps * anorm * 16) {
      V.col(keep) = fresh_direction(n, V, keep, gen);
    } else {
      V.col(keep) = r / beta;
    }
    start = keep;
  }
}

}  // namespace srpcp::linalg
