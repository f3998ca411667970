#pragma once

#include <cstdint>
#include <vector>

#include "srpcp/linalg.hpp"

/// Closed-form minimizer of h(s) = ||s - a||_2 + tau * ||s||_1.
///
/// Every solution has the signs of `a` and is ordered like |a|, so the work
/// happens on the canonical form: |a| sorted nonincreasing. There the optimum
/// is one of
///   Zero      tau >= ||a||_inf / ||a||_2                 s = 0
///   Identity  tau <= 1 / sqrt(||a||_0)                   s = a
///   Shrink    otherwise                                  s = max(a - t_k, 0)
/// where k is the unique index in 1..kbar (kbar the largest integer strictly
/// below 1/tau^2) with a_{k+1} <= t_k < a_k and
///   t_k = sqrt((a_{k+1}^2 + ... + a_n^2) / (1/tau^2 - k)).
namespace srpcp::prox {

struct CanonicalForm {
  Vector sorted_abs;                 // |a| sorted nonincreasing
  std::vector<std::int8_t> signs;    // sign(a_i) in original order
  std::vector<Index> permutation;    // original index -> sorted position
};

enum class ProxCaseTag { Zero, Identity, Shrink };

struct ProxCase {
  ProxCaseTag tag = ProxCaseTag::Zero;
  Index k = 0;             // active count (Shrink only)
  double threshold = 0.0;  // t_k (Shrink only)
};

/// Stable: equal magnitudes keep their original relative order.
CanonicalForm canonicalize(const Vector& a);

/// Inverse of canonicalize applied to a solution of the canonical problem.
Vector decanonicalize(const CanonicalForm& form, const Vector& sorted_solution);

/// Largest integer strictly less than 1/tau^2, guarded against 1/tau^2
/// landing on an integer after rounding.
Index max_active_count(double tau);

/// Case dispatch on a canonical vector (nonnegative, nonincreasing, nonzero).
ProxCase classify(const Vector& sorted_abs, double tau);

/// Number of k in 1..kbar with a_{k+1} <= t_k < a_k. The theory says exactly
/// one whenever classify() returns Shrink.
Index count_shrink_indices(const Vector& sorted_abs, double tau);

/// Optimal solution for a canonical vector. Throws std::invalid_argument on
/// unsorted, negative, or all-zero input.
Vector solve_canonical(const Vector& a, double tau);

/// Optimal solution for arbitrary finite `a`; returns 0 for a = 0.
Vector prox_sqrt_l1(const Vector& a, double tau);

/// h(s) = ||s - a||_2 + tau * ||s||_1.
double sqrt_l1_objective(const Vector& a, const Vector& s, double tau);

/// argmin_S lambda * ||S||_1 + mu * ||L + S - D||_F.
DenseMatrix update_S(const DenseMatrix& low_rank, const DenseMatrix& data,
                     double lambda, double mu);

}  // namespace srpcp::prox
