#include <cmath>
#include <stdexcept>

#include "srpcp/bm.hpp"
#include "srpcp/spectral.hpp"

namespace srpcp::bm {
namespace {

AccUpdate full_update(const DenseMatrix& a, double rho, Index k, int trials) {
  spectral::LUpdate full = spectral::update_L_full(a, rho);
  AccUpdate out;
  out.L = std::move(full.L);
  out.rank = full.rank;
  out.k = k;
  out.trials = trials;
  out.full_svd = true;
  double tail = 0.0;
  for (Index i = full.singular_values.size() - 1; i >= out.rank; --i) {
    tail += full.singular_values(i) * full.singular_values(i);
  }
  out.tail_energy = std::sqrt(tail);
  out.singular_values = std::move(full.singular_values);
  out.shrunk = std::move(full.shrunk);
  return out;
}

}  // namespace

AccUpdate acc_update_L(const DenseMatrix& a, double rho, Index k0,
                       Index delta_k, const AccOptions& options) {
  if (!(rho > 0.0)) throw std::invalid_argument("acc_update_L: rho must be positive");
  if (k0 < 0) throw std::invalid_argument("acc_update_L: k0 must be >= 0");
  if (delta_k < 1) throw std::invalid_argument("acc_update_L: delta_k must be >= 1");
  if (options.full_svd_divisor < 1) {
    throw std::invalid_argument("acc_update_L: full_svd_divisor must be >= 1");
  }
  linalg::require_finite(a, "acc_update_L input");

  const Index p = std::min(a.rows(), a.cols());
  if (p == 0 || a.isZero(0.0)) {
    AccUpdate out;
    out.L = DenseMatrix::Zero(a.rows(), a.cols());
    out.k = k0;
    return out;
  }

  Index k = k0;
  Index step = delta_k;
  for (int trials = 1;; ++trials) {
    k += step;
    // Repeated failures mean the warm start was far off; widen the step so
    // the number of partial SVDs stays logarithmic in the rank gap.
    if (trials > 1) step *= 2;
    if (k + 1 > std::max<Index>(p / options.full_svd_divisor, 1)) {
      return full_update(a, rho, std::min(k, p), trials);
    }

    linalg::PartialSvd svd = linalg::svd_partial(a, k + 1, options.svd);
    if (!svd.converged) return full_update(a, rho, k, trials);

    const Vector w = svd.singular_values.head(k);
    const double sigma_next = svd.singular_values(k);
    // Tail energy measured directly: ||A||^2 - ||w||^2 loses all relative
    // accuracy when A is close to rank k.
    const auto h = svd.U.leftCols(k);
    const double c = (a - h * (h.transpose() * a)).norm();

    const Vector d = solve_uv(w, c, rho);
    Index ell = 0;
    while (ell < k && w(ell) > 0.0) ++ell;
    const double next = ell < k ? w(ell) : sigma_next;
    if (!rank_certificate(std::max<Index>(ell, 1), next, c, rho).ok) continue;

    AccUpdate out;
    Index rank = 0;
    while (rank < k && d(rank) > 0.0) ++rank;
    const Factors f = lift_to_factors(svd.U.leftCols(rank), svd.V.leftCols(rank),
                                      d.head(rank));
    out.L = f.U * f.V.transpose();
    out.rank = rank;
    out.k = k;
    out.singular_values = std::move(svd.singular_values);
    out.shrunk = d;
    out.tail_energy = c;
    out.trials = trials;
    return out;
  }
}

}  // namespace srpcp::bm
