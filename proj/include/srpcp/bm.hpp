#pragma once

#include "srpcp/linalg.hpp"

/// Burer-Monteiro form of the L-step. With A's top-k singular triplets
/// (H, w, W) and tail energy c, the factorized problem
///   min_{U,V} ||U V^T - A||_F + (rho/2)(||U||_F^2 + ||V||_F^2)
/// reduces to the vector problem
///   min_{d >= 0} sqrt(||d - w||^2 + c^2) + rho * sum(d)
/// whose solution lifts back through U = H Diag(sqrt d), V = W Diag(sqrt d).
namespace srpcp::bm {

/// Validated input of the reduced problem. Trailing zeros of w are kept in
/// `w` but excluded from `ell`.
class ReducedProblem {
 public:
  ReducedProblem(Vector w, double c, double rho);

  const Vector& w() const { return w_; }
  double c() const { return c_; }
  double rho() const { return rho_; }
  Index ell() const { return ell_; }

  /// ||w||_inf / sqrt(||w||^2 + c^2): at or above this rho the answer is 0.
  double zero_threshold() const;
  /// w_ell / sqrt(ell w_ell^2 + c^2): at or below this rho every active
  /// entry is shifted by the same amount.
  double uniform_threshold() const;

 private:
  Vector w_;
  double c_;
  double rho_;
  Index ell_ = 0;
};

enum class UvBranch { Zero, Middle, Uniform };

/// Which closed-form branch solve_uv takes.
UvBranch classify_uv(const ReducedProblem& problem);

Vector solve_uv(const ReducedProblem& problem);
Vector solve_uv(const Vector& w, double c, double rho);

/// Number of i in 1..ell-1 with w_{i+1} <= t_i < w_i. Exactly one when the
/// middle branch applies.
Index count_uv_indices(const ReducedProblem& problem);

/// Objective of the reduced problem, for oracles.
double uv_objective(const Vector& w, double c, double rho, const Vector& d);

struct RankCertificate {
  Index ell = 0;
  double sigma_next = 0.0;
  double threshold = 0.0;
  bool ok = false;
};

/// Whether the rank-k reduced solution, padded with zeros, is optimal for
/// the full spectrum: ok iff rho >= sigma_next / sqrt(ell sigma_next^2 + c^2).
RankCertificate rank_certificate(Index ell, double sigma_next, double c,
                                 double rho);

struct Factors {
  DenseMatrix U;
  DenseMatrix V;
};

Factors lift_to_factors(const DenseMatrix& h, const DenseMatrix& w,
                        const Vector& d);

struct AccUpdate {
  DenseMatrix L;
  Index rank = 0;
  Index k = 0;              // rank guess that passed the certificate
  Vector singular_values;   // leading singular values of A that were computed
  Vector shrunk;            // reduced solution, length k (or full spectrum)
  double tail_energy = 0.0; // c for the accepted k
  int trials = 0;
  bool full_svd = false;    // the accepted trial used the full SVD
};

struct AccOptions {
  linalg::PartialSvdOptions svd;
  /// Use the full SVD once k + 1 exceeds min(rows, cols) / full_svd_divisor;
  /// past that point a dense SVD is cheaper than the Krylov iteration
  /// (measured crossover near p/10 for p between 500 and 2000). Set to 1 to
  /// allow the partial SVD for every k < min(rows, cols).
  Index full_svd_divisor = 10;
};

/// Growth loop: k <- k + step, partial SVD with k+1 triplets, reduced
/// solve, certificate; repeat until the certificate holds. The step starts
/// at delta_k and doubles after every failed trial past the second. Falls
/// back to the full SVD when k+1 is a large share of min(rows, cols) or the
/// partial SVD stalls.
AccUpdate acc_update_L(const DenseMatrix& a, double rho, Index k0,
                       Index delta_k, const AccOptions& options = {});

}  // namespace srpcp::bm
