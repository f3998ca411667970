#pragma once

#include <cstdint>

#include "srpcp/linalg.hpp"

namespace srpcp::data {

/// D = L0 + S0 + Z0 with L0 = X Y^T (X, Y entries N(0, 1/n)), S0 having
/// exactly s entries equal to +-1 at uniformly random cells and Z0 entries
/// N(0, sigma^2).
struct SyntheticInstance {
  DenseMatrix L0;
  DenseMatrix S0;
  DenseMatrix Z0;
  DenseMatrix D;
  Index n = 0;
  Index r = 0;
  Index s = 0;
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// Draw order: X column-major, Y column-major, the s support cells by a
/// partial Fisher-Yates shuffle of the n^2 column-major cell indices (one
/// sign per cell right after its index), then Z0 column-major. Z0 consumes
/// no draws when sigma = 0.
SyntheticInstance gen_synthetic(Index n, Index r, Index s, double sigma,
                                std::uint64_t seed);

struct RecoveryErrors {
  double eta_L = 0.0;  // ||L_hat - L0||_F / (1 + ||L0||_F)
  double eta_S = 0.0;  // ||S_hat - S0||_F / (1 + ||S0||_F)
};

RecoveryErrors recovery_errors(const DenseMatrix& L_hat, const DenseMatrix& S_hat,
                               const SyntheticInstance& instance);

}  // namespace srpcp::data
