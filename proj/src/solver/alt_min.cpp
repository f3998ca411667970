#include <cmath>
#include <limits>
#include <stdexcept>

#include "srpcp/bm.hpp"
#include "srpcp/prox.hpp"
#include "srpcp/solver.hpp"
#include "srpcp/spectral.hpp"

namespace srpcp::solver {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Result of one L-step expressed in the singular basis of A = D - S.
struct LowRankStep {
  DenseMatrix L;
  Index rank = 0;
  Vector sigma;   // leading singular values of A (at least shrunk.size())
  Vector shrunk;  // singular values of L in the same basis
  Index spectrum_size = 0;
  bool full_svd = true;
};

// ||L - prox_nuclear_unit(L - mu G)||_F with G = (L - A) / r. Because L
// shares A's singular vectors, L - mu G = U Diag(d + mu (sigma - d) / r) V^T
// and the prox acts on the diagonal alone. Directions beyond the computed
// ones have d = 0 and sigma <= sigma_next, so they are bounded by the first
// uncomputed value; the rank certificate makes that bound zero.
double low_rank_delta(const LowRankStep& step, double mu, double r) {
  double sum = 0.0;
  const Index m = step.shrunk.size();
  for (Index i = 0; i < m; ++i) {
    const double d = step.shrunk(i);
    const double moved = d + mu * (step.sigma(i) - d) / r;
    const double diff = d - std::max(moved - 1.0, 0.0);
    sum += diff * diff;
  }
  if (step.spectrum_size > m && step.sigma.size() > m) {
    const double excess = std::max(mu * step.sigma(m) / r - 1.0, 0.0);
    sum += static_cast<double>(step.spectrum_size - m) * excess * excess;
  }
  return std::sqrt(sum);
}

double sparse_delta(const DenseMatrix& S, const DenseMatrix& fit, double mu,
                    double r, double lambda) {
  const double scale = mu / r;
  double sum = 0.0;
  for (Index j = 0; j < S.cols(); ++j) {
    for (Index i = 0; i < S.rows(); ++i) {
      const double z = S(i, j) - scale * fit(i, j);
      const double mag = std::abs(z) - lambda;
      const double p = mag > 0.0 ? std::copysign(mag, z) : 0.0;
      const double diff = S(i, j) - p;
      sum += diff * diff;
    }
  }
  return std::sqrt(sum);
}

Index numerical_rank(const DenseMatrix& m) {
  if (m.isZero(0.0)) return 0;
  const Vector s = linalg::svd_full(m).singular_values;
  const double cut = s(0) * 1e-12 * static_cast<double>(std::max(m.rows(), m.cols()));
  return (s.array() > cut).count();
}

SolveResult run(const Problem& problem, const SolverConfig& config, Mode mode) {
  config.validate();
  using clock = std::chrono::steady_clock;
  const auto started = clock::now();
  const DenseMatrix& data = problem.data();
  const double lambda = problem.lambda();
  const double mu = problem.mu();
  const double rho = spectral::rho_from_mu(mu);
  const double data_norm = data.norm();
  const Index p = std::min(data.rows(), data.cols());

  SolveResult result;
  DenseMatrix& L = result.L_hat;
  DenseMatrix& S = result.S_hat;
  L = config.initial_L.value_or(DenseMatrix::Zero(data.rows(), data.cols()));
  S = config.initial_S.value_or(DenseMatrix::Zero(data.rows(), data.cols()));
  if (L.rows() != data.rows() || L.cols() != data.cols() ||
      S.rows() != data.rows() || S.cols() != data.cols()) {
    throw std::invalid_argument("initial point shape does not match the data");
  }

  double nuclear = config.initial_L ? linalg::norm_nuclear(L) : 0.0;
  result.objective_history.push_back(nuclear + lambda * S.cwiseAbs().sum() +
                                     mu * (L + S - data).norm());
  result.residual_history.push_back(kNaN);
  result.rank_history.push_back(config.initial_L ? numerical_rank(L) : 0);

  bm::AccOptions acc_options;
  acc_options.svd = config.partial_svd;
  Index rank_guess = config.initial_rank;
  result.termination_reason = TerminationReason::MaxIter;
  result.final_residual = kNaN;

  for (int it = 1; it <= config.max_iterations; ++it) {
    S = prox::update_S(L, data, lambda, mu);
    const double l1 = S.cwiseAbs().sum();
    const double objective_after_S =
        nuclear + lambda * l1 + mu * (L + S - data).norm();

    LowRankStep step;
    const DenseMatrix target = data - S;
    if (mode == Mode::Plain) {
      spectral::LUpdate upd = spectral::update_L_full(target, rho);
      step.L = std::move(upd.L);
      step.rank = upd.rank;
      step.sigma = std::move(upd.singular_values);
      step.shrunk = std::move(upd.shrunk);
    } else {
      bm::AccUpdate upd = bm::acc_update_L(target, rho, rank_guess, config.delta_k,
                                           acc_options);
      step.L = std::move(upd.L);
      step.rank = upd.rank;
      step.sigma = std::move(upd.singular_values);
      step.shrunk = std::move(upd.shrunk);
      step.full_svd = upd.full_svd;
      rank_guess = upd.rank;
    }
    step.spectrum_size = p;
    L = std::move(step.L);
    nuclear = step.shrunk.sum();

    const DenseMatrix fit = L + S - data;
    const double r = fit.norm();
    const double obj = nuclear + lambda * l1 + mu * r;

    IterationInfo info;
    info.iteration = it;
    info.L = &L;
    info.S = &S;
    info.objective_after_S = objective_after_S;
    info.objective = obj;
    info.rank = step.rank;
    info.residual = info.delta_low_rank = info.delta_sparse = kNaN;
    info.full_svd = step.full_svd;

    std::optional<TerminationReason> stop;
    if (data_norm == 0.0 ? r == 0.0 : r <= kOverfitRatio * data_norm) {
      if (data_norm == 0.0) {
        info.residual = info.delta_low_rank = info.delta_sparse = 0.0;
        stop = TerminationReason::Tolerance;
      } else {
        stop = TerminationReason::Overfit;
      }
    } else if (it % config.residual_check_period == 0) {
      info.delta_low_rank = low_rank_delta(step, mu, r);
      info.delta_sparse = sparse_delta(S, fit, mu, r, lambda);
      info.residual = (info.delta_low_rank + info.delta_sparse) /
                      (1.0 + L.norm() + S.norm());
      if (info.residual < config.tolerance) stop = TerminationReason::Tolerance;
    }

    result.iterations = it;
    result.objective_history.push_back(obj);
    result.residual_history.push_back(info.residual);
    result.rank_history.push_back(step.rank);
    if (!std::isnan(info.residual)) result.final_residual = info.residual;
    if (config.on_iteration) config.on_iteration(info);

    if (!stop && config.max_wall_time) {
      const std::chrono::duration<double> elapsed = clock::now() - started;
      if (elapsed >= *config.max_wall_time) stop = TerminationReason::TimeOut;
    }
    if (stop) {
      result.termination_reason = *stop;
      break;
    }
  }
  result.wall_seconds =
      std::chrono::duration<double>(clock::now() - started).count();
  return result;
}

}  // namespace

SolveResult alt_min(const Problem& problem, const SolverConfig& config) {
  return run(problem, config, Mode::Plain);
}

SolveResult acc_alt_min(const Problem& problem, const SolverConfig& config) {
  return run(problem, config, Mode::Accelerated);
}

SolveResult solve(const Problem& problem, const SolverConfig& config) {
  return run(problem, config, config.mode);
}

}  // namespace srpcp::solver
