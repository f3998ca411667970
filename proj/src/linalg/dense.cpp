#include "srpcp/linalg.hpp"

#include <string>

namespace srpcp::linalg {

bool all_finite(const DenseMatrix& a) { return a.allFinite(); }

void require_finite(const DenseMatrix& a, std::string_view what) {
  if (!a.allFinite()) {
    throw std::invalid_argument(std::string(what) +
                                " contains non-finite entries");
  }
}

StackedPair::StackedPair(DenseMatrix low_rank, DenseMatrix sparse)
    : low_rank_(std::move(low_rank)), sparse_(std::move(sparse)) {
  if (low_rank_.rows() != sparse_.rows() ||
      low_rank_.cols() != sparse_.cols()) {
    throw std::invalid_argument(
        "StackedPair: L and S must have identical dimensions");
  }
}

double StackedPair::inner(const StackedPair& other) const {
  if (other.low_rank_.rows() != low_rank_.rows() ||
      other.low_rank_.cols() != low_rank_.cols()) {
    throw std::invalid_argument("StackedPair::inner: dimension mismatch");
  }
  return low_rank_.cwiseProduct(other.low_rank_).sum() +
         sparse_.cwiseProduct(other.sparse_).sum();
}

}  // namespace srpcp::linalg
