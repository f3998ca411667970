#include <stdexcept>

#include "srpcp/prox.hpp"
#include "srpcp/spectral.hpp"

namespace srpcp::spectral {

ShrinkResult d_rho(const Vector& sigma, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("d_rho: rho must be positive");
  ShrinkResult out;
  if (sigma.size() == 0 || sigma(0) == 0.0) {
    for (Index i = 0; i < sigma.size(); ++i) {
      if (sigma(i) != 0.0) {
        throw std::invalid_argument("d_rho: sigma must be nonincreasing");
      }
    }
    out.values = Vector::Zero(sigma.size());
    return out;
  }
  out.values = prox::solve_canonical(sigma, rho);
  out.active_rank = (out.values.array() > 0.0).count();
  return out;
}

double rho_from_mu(double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  return 1.0 / mu;
}

LUpdate update_L_full(const DenseMatrix& a, double rho) {
  if (!(rho > 0.0)) {
    throw std::invalid_argument("update_L_full: rho must be positive");
  }
  linalg::require_finite(a, "update_L_full input");
  LUpdate out;
  linalg::SvdResult svd = linalg::svd_full(a);
  ShrinkResult shrink = d_rho(svd.singular_values, rho);
  out.rank = shrink.active_rank;
  const Index r = out.rank;
  out.L = svd.U.leftCols(r) * shrink.values.head(r).asDiagonal() *
          svd.V.leftCols(r).transpose();
  out.singular_values = std::move(svd.singular_values);
  out.shrunk = std::move(shrink.values);
  return out;
}

}  // namespace srpcp::spectral
