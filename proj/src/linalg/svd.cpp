#include <algorithm>

#include <Eigen/SVD>

#include "srpcp/linalg.hpp"

namespace srpcp::linalg {

SvdResult svd_full(const DenseMatrix& a) {
  require_finite(a, "svd_full input");
  const Index p = std::min(a.rows(), a.cols());
  SvdResult out;
  if (p == 0) {
    out.U.resize(a.rows(), 0);
    out.V.resize(a.cols(), 0);
    return out;
  }
  // Bidiagonalization followed by divide and conquer; Eigen switches to
  // Jacobi below its block size.
  Eigen::BDCSVD<DenseMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw SvdError("svd_full: SVD did not converge");
  out.U = svd.matrixU();
  out.singular_values = svd.singularValues();
  out.V = svd.matrixV();
  return out;
}

}  // namespace srpcp::linalg
