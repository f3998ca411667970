#include <cmath>
#include <limits>
#include <stdexcept>

#include "srpcp/solver.hpp"

namespace srpcp::solver {

Problem Problem::make(DenseMatrix data, double lambda, double mu) {
  if (data.size() == 0) throw std::invalid_argument("Problem: empty data matrix");
  linalg::require_finite(data, "data matrix");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("Problem: lambda must be positive");
  }
  if (!(mu > 0.0) || !std::isfinite(mu)) {
    throw std::invalid_argument("Problem: mu must be positive");
  }
  return Problem(std::move(data), lambda, mu);
}

Problem Problem::with_defaults(DenseMatrix data) {
  const Index rows = data.rows();
  const Index cols = data.cols();
  if (rows == 0 || cols == 0) throw std::invalid_argument("Problem: empty data matrix");
  return make(std::move(data), default_lambda(rows), default_mu(cols));
}

double Problem::default_lambda(Index rows) {
  return 1.0 / std::sqrt(static_cast<double>(rows));
}

double Problem::default_mu(Index cols) {
  return std::sqrt(static_cast<double>(cols) / 2.0);
}

std::string to_string(Mode mode) {
  return mode == Mode::Plain ? "plain" : "acc";
}

std::string to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::Tolerance: return "tolerance";
    case TerminationReason::MaxIter: return "max_iter";
    case TerminationReason::TimeOut: return "timeout";
    case TerminationReason::Overfit: return "overfit";
  }
  return "unknown";
}

Mode parse_mode(const std::string& text) {
  if (text == "plain") return Mode::Plain;
  if (text == "acc" || text == "accelerated") return Mode::Accelerated;
  throw std::invalid_argument("unknown mode '" + text + "' (expected plain or acc)");
}

void SolverConfig::validate() const {
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
  if (residual_check_period < 1) {
    throw std::invalid_argument("residual_check_period must be >= 1");
  }
  if (initial_rank < 0) throw std::invalid_argument("initial_rank must be >= 0");
  if (delta_k < 1) throw std::invalid_argument("delta_k must be >= 1");
  if (max_wall_time && !(max_wall_time->count() > 0.0)) {
    throw std::invalid_argument("max_wall_time must be positive");
  }
}

double objective(const DenseMatrix& L, const DenseMatrix& S,
                 const Problem& problem) {
  const DenseMatrix& d = problem.data();
  if (L.rows() != d.rows() || L.cols() != d.cols() || S.rows() != d.rows() ||
      S.cols() != d.cols()) {
    throw std::invalid_argument("objective: shape mismatch");
  }
  return linalg::norm_nuclear(L) + problem.lambda() * linalg::norm_l1(S) +
         problem.mu() * (L + S - d).norm();
}

DenseMatrix prox_nuclear_unit(const DenseMatrix& z) {
  if (z.size() == 0) return z;
  const linalg::SvdResult svd = linalg::svd_full(z);
  const Vector shrunk = (svd.singular_values.array() - 1.0).max(0.0).matrix();
  return svd.U * shrunk.asDiagonal() * svd.V.transpose();
}

DenseMatrix prox_l1(const DenseMatrix& z, double lambda) {
  linalg::require_finite(z, "prox_l1 input");
  return z.unaryExpr([lambda](double x) {
    const double mag = std::abs(x) - lambda;
    return mag > 0.0 ? std::copysign(mag, x) : 0.0;
  });
}

KktResidual kkt_residual(const DenseMatrix& L, const DenseMatrix& S,
                         const Problem& problem) {
  const DenseMatrix& d = problem.data();
  if (L.rows() != d.rows() || L.cols() != d.cols() || S.rows() != d.rows() ||
      S.cols() != d.cols()) {
    throw std::invalid_argument("kkt_residual: shape mismatch");
  }
  const DenseMatrix fit = L + S - d;
  const double fit_norm = fit.norm();
  KktResidual out;
  if (fit_norm <= kOverfitRatio * d.norm()) {
    out.overfit = true;
    out.eta = out.delta_low_rank = out.delta_sparse =
        std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const DenseMatrix step = (problem.mu() / fit_norm) * fit;
  out.delta_low_rank = (L - prox_nuclear_unit(L - step)).norm();
  out.delta_sparse = (S - prox_l1(S - step, problem.lambda())).norm();
  out.eta = (out.delta_low_rank + out.delta_sparse) / (1.0 + L.norm() + S.norm());
  return out;
}

}  // namespace srpcp::solver
