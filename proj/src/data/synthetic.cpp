#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "srpcp/rng.hpp"
#include "srpcp/synthetic.hpp"

namespace srpcp::data {

SyntheticInstance gen_synthetic(Index n, Index r, Index s, double sigma,
                                std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_synthetic: n must be >= 1");
  if (r < 1 || r > n) throw std::invalid_argument("gen_synthetic: need 0 < r <= n");
  if (s < 0 || s > n * n) throw std::invalid_argument("gen_synthetic: need 0 <= s <= n^2");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("gen_synthetic: sigma must be >= 0");
  }

  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  DenseMatrix x(n, r);
  DenseMatrix y(n, r);
  for (Index i = 0; i < x.size(); ++i) x.data()[i] = rng.normal() * scale;
  for (Index i = 0; i < y.size(); ++i) y.data()[i] = rng.normal() * scale;

  SyntheticInstance inst;
  inst.n = n;
  inst.r = r;
  inst.s = s;
  inst.sigma = sigma;
  inst.seed = seed;
  inst.L0 = x * y.transpose();

  inst.S0 = DenseMatrix::Zero(n, n);
  const auto cells = static_cast<std::uint64_t>(n * n);
  std::vector<std::uint64_t> order(cells);
  std::iota(order.begin(), order.end(), std::uint64_t{0});
  for (Index i = 0; i < s; ++i) {
    const auto pos = static_cast<std::uint64_t>(i);
    const std::uint64_t pick = pos + rng.below(cells - pos);
    std::swap(order[pos], order[pick]);
    inst.S0.data()[order[pos]] = rng.sign();
  }

  inst.Z0 = DenseMatrix::Zero(n, n);
  if (sigma > 0.0) {
    for (Index i = 0; i < inst.Z0.size(); ++i) inst.Z0.data()[i] = sigma * rng.normal();
  }
  inst.D = (inst.L0 + inst.S0) + inst.Z0;
  return inst;
}

RecoveryErrors recovery_errors(const DenseMatrix& L_hat, const DenseMatrix& S_hat,
                               const SyntheticInstance& instance) {
  if (L_hat.rows() != instance.L0.rows() || L_hat.cols() != instance.L0.cols() ||
      S_hat.rows() != instance.S0.rows() || S_hat.cols() != instance.S0.cols()) {
    throw std::invalid_argument("recovery_errors: shape mismatch");
  }
  RecoveryErrors out;
  out.eta_L = (L_hat - instance.L0).norm() / (1.0 + instance.L0.norm());
  out.eta_S = (S_hat - instance.S0).norm() / (1.0 + instance.S0.norm());
  return out;
}

}  // namespace srpcp::data
