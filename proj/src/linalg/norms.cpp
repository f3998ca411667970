#include <algorithm>

#include "srpcp/linalg.hpp"

namespace srpcp::linalg {

double norm_nuclear(const DenseMatrix& a) {
  if (a.size() == 0) return 0.0;
  return svd_full(a).singular_values.sum();
}

double norm_fro(const DenseMatrix& a) { return a.norm(); }

double norm_l1(const DenseMatrix& a) { return a.cwiseAbs().sum(); }

double norm_spectral(const DenseMatrix& a) {
  if (a.size() == 0) return 0.0;
  return svd_full(a).singular_values(0);
}

double norm_linf(const DenseMatrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

double norm_diamond(const StackedPair& b, double lambda) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("norm_diamond: lambda must be positive");
  }
  return norm_nuclear(b.low_rank()) + lambda * norm_l1(b.sparse());
}

double norm_diamond_dual(const StackedPair& b, double lambda) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("norm_diamond_dual: lambda must be positive");
  }
  return std::max(norm_spectral(b.low_rank()), norm_linf(b.sparse()) / lambda);
}

}  // namespace srpcp::linalg
