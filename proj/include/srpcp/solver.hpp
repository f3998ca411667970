#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "srpcp/bm.hpp"
#include "srpcp/linalg.hpp"

/// Alternating minimization for
///   min_{L,S} ||L||_* + lambda ||S||_1 + mu ||L + S - D||_F.
namespace srpcp::solver {

/// Data matrix plus penalty weights. Construct through make() or
/// with_defaults(), which validate.
class Problem {
 public:
  static Problem make(DenseMatrix data, double lambda, double mu);
  /// lambda = 1/sqrt(rows), mu = sqrt(cols/2).
  static Problem with_defaults(DenseMatrix data);
  static double default_lambda(Index rows);
  static double default_mu(Index cols);

  const DenseMatrix& data() const { return data_; }
  double lambda() const { return lambda_; }
  double mu() const { return mu_; }

 private:
  Problem(DenseMatrix data, double lambda, double mu)
      : data_(std::move(data)), lambda_(lambda), mu_(mu) {}
  DenseMatrix data_;
  double lambda_;
  double mu_;
};

enum class Mode { Plain, Accelerated };
enum class TerminationReason { Tolerance, MaxIter, TimeOut, Overfit };

std::string to_string(Mode mode);
std::string to_string(TerminationReason reason);
Mode parse_mode(const std::string& text);

/// Snapshot handed to the progress callback after every iteration.
struct IterationInfo {
  int iteration = 0;
  const DenseMatrix* L = nullptr;
  const DenseMatrix* S = nullptr;
  double objective_after_S = 0.0;  // f(L^{i-1}, S^i)
  double objective = 0.0;          // f(L^i, S^i)
  Index rank = 0;
  double residual = 0.0;           // eta, NaN when not evaluated
  double delta_low_rank = 0.0;     // NaN when not evaluated
  double delta_sparse = 0.0;       // NaN when not evaluated
  bool full_svd = true;            // L-step used a full SVD
};

using ProgressCallback = std::function<void(const IterationInfo&)>;

struct SolverConfig {
  double tolerance = 1e-6;
  int max_iterations = 5000;
  std::optional<std::chrono::duration<double>> max_wall_time;
  Mode mode = Mode::Plain;
  Index initial_rank = 10;
  Index delta_k = 1;
  int residual_check_period = 1;
  std::optional<DenseMatrix> initial_L;
  std::optional<DenseMatrix> initial_S;
  linalg::PartialSvdOptions partial_svd;
  ProgressCallback on_iteration;

  void validate() const;
};

/// Histories have iterations + 1 entries; index 0 is the starting point.
struct SolveResult {
  DenseMatrix L_hat;
  DenseMatrix S_hat;
  int iterations = 0;
  std::vector<double> objective_history;
  std::vector<double> residual_history;
  std::vector<Index> rank_history;
  TerminationReason termination_reason = TerminationReason::MaxIter;
  double final_residual = 0.0;
  double wall_seconds = 0.0;
};

double objective(const DenseMatrix& L, const DenseMatrix& S,
                 const Problem& problem);

/// U Diag(max(sigma - 1, 0)) V^T.
DenseMatrix prox_nuclear_unit(const DenseMatrix& z);
/// Entrywise soft threshold at lambda.
DenseMatrix prox_l1(const DenseMatrix& z, double lambda);

struct KktResidual {
  double eta = 0.0;
  double delta_low_rank = 0.0;
  double delta_sparse = 0.0;
  bool overfit = false;  // L + S = D numerically; eta is NaN
};

/// eta = (D1 + D2) / (1 + ||L||_F + ||S||_F) with
///   D1 = ||L - prox_nuclear_unit(L - mu G)||_F,
///   D2 = ||S - prox_l1(S - mu G, lambda)||_F,
///   G  = (L + S - D) / ||L + S - D||_F.
KktResidual kkt_residual(const DenseMatrix& L, const DenseMatrix& S,
                         const Problem& problem);

/// Fit residual ||L+S-D||_F below this fraction of ||D||_F counts as overfit.
inline constexpr double kOverfitRatio = 1e-13;

SolveResult alt_min(const Problem& problem, const SolverConfig& config);
SolveResult acc_alt_min(const Problem& problem, const SolverConfig& config);
/// Dispatches on config.mode.
SolveResult solve(const Problem& problem, const SolverConfig& config);

}  // namespace srpcp::solver
