#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include "srpcp/prox.hpp"

namespace srpcp::prox {
namespace {

void require_tau(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw std::invalid_argument("tau must be positive and finite");
  }
}

void require_canonical(const Vector& a) {
  if (a.size() == 0) throw std::invalid_argument("empty vector");
  for (Index i = 0; i < a.size(); ++i) {
    if (!(a(i) >= 0.0) || !std::isfinite(a(i))) {
      throw std::invalid_argument("canonical vector must be finite and >= 0 (index " +
                                  std::to_string(i) + ")");
    }
    if (i > 0 && a(i) > a(i - 1)) {
      throw std::invalid_argument("canonical vector must be nonincreasing (index " +
                                  std::to_string(i) + ")");
    }
  }
  if (a(0) == 0.0) throw std::invalid_argument("canonical vector must be nonzero");
}

// tail[i] = a_i^2 + ... + a_{n-1}^2 accumulated from the end; tail[n] = 0.
std::vector<double> tail_squares(const Vector& a) {
  const Index n = a.size();
  std::vector<double> tail(static_cast<std::size_t>(n) + 1, 0.0);
  for (Index i = n - 1; i >= 0; --i) tail[i] = tail[i + 1] + a(i) * a(i);
  return tail;
}

Index count_nonzero_sorted(const Vector& a) {
  // a is nonincreasing, so the positives form a prefix.
  Index lo = 0;
  Index hi = a.size();
  while (lo < hi) {
    const Index mid = lo + (hi - lo) / 2;
    if (a(mid) > 0.0) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return lo;
}

ProxCase classify_unchecked(const Vector& a, double tau) {
  const std::vector<double> tail = tail_squares(a);
  const double norm2 = std::sqrt(tail[0]);
  if (tau >= a(0) / norm2) return {ProxCaseTag::Zero, 0, 0.0};
  const Index nnz = count_nonzero_sorted(a);
  if (tau <= 1.0 / std::sqrt(static_cast<double>(nnz))) {
    return {ProxCaseTag::Identity, 0, 0.0};
  }

  const Index kbar = std::min(max_active_count(tau), nnz - 1);
  const double inv_tau_sq = 1.0 / (tau * tau);
  double t = 0.0;
  for (Index k = 1; k <= kbar; ++k) {
    t = std::sqrt(tail[k] / (inv_tau_sq - static_cast<double>(k)));
    if (a(k) <= t) return {ProxCaseTag::Shrink, k, t};
  }
  // Unreachable in exact arithmetic: a_{kbar+1} <= t_kbar always holds.
  return {ProxCaseTag::Shrink, kbar, t};
}

}  // namespace

CanonicalForm canonicalize(const Vector& a) {
  const Index n = a.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&a](Index lhs, Index rhs) {
    return std::abs(a(lhs)) > std::abs(a(rhs));
  });

  CanonicalForm form;
  form.sorted_abs.resize(n);
  form.signs.resize(static_cast<std::size_t>(n));
  form.permutation.resize(static_cast<std::size_t>(n));
  for (Index pos = 0; pos < n; ++pos) {
    const Index orig = order[pos];
    form.sorted_abs(pos) = std::abs(a(orig));
    form.permutation[orig] = pos;
  }
  for (Index i = 0; i < n; ++i) {
    form.signs[i] = a(i) > 0.0 ? 1 : (a(i) < 0.0 ? -1 : 0);
  }
  return form;
}

Vector decanonicalize(const CanonicalForm& form, const Vector& sorted_solution) {
  const Index n = form.sorted_abs.size();
  if (sorted_solution.size() != n) {
    throw std::invalid_argument("decanonicalize: length mismatch");
  }
  Vector out(n);
  for (Index i = 0; i < n; ++i) {
    out(i) = form.signs[i] * sorted_solution(form.permutation[i]);
  }
  return out;
}

Index max_active_count(double tau) {
  require_tau(tau);
  const double inv = 1.0 / (tau * tau);
  const double m = std::floor(inv);
  if (m * tau * tau >= 1.0 - 1e-12) return static_cast<Index>(m) - 1;
  return static_cast<Index>(m);
}

ProxCase classify(const Vector& sorted_abs, double tau) {
  require_tau(tau);
  require_canonical(sorted_abs);
  return classify_unchecked(sorted_abs, tau);
}

Index count_shrink_indices(const Vector& sorted_abs, double tau) {
  require_tau(tau);
  require_canonical(sorted_abs);
  const std::vector<double> tail = tail_squares(sorted_abs);
  const Index nnz = count_nonzero_sorted(sorted_abs);
  const Index kbar = std::min(max_active_count(tau), nnz - 1);
  const double inv_tau_sq = 1.0 / (tau * tau);
  Index count = 0;
  for (Index k = 1; k <= kbar; ++k) {
    const double t = std::sqrt(tail[k] / (inv_tau_sq - static_cast<double>(k)));
    if (sorted_abs(k) <= t && t < sorted_abs(k - 1)) ++count;
  }
  return count;
}

Vector solve_canonical(const Vector& a, double tau) {
  require_tau(tau);
  require_canonical(a);
  const ProxCase c = classify_unchecked(a, tau);
  switch (c.tag) {
    case ProxCaseTag::Zero:
      return Vector::Zero(a.size());
    case ProxCaseTag::Identity:
      return a;
    case ProxCaseTag::Shrink:
      break;
  }
  Vector s = Vector::Zero(a.size());
  s.head(c.k) = a.head(c.k).array() - c.threshold;
  return s;
}

Vector prox_sqrt_l1(const Vector& a, double tau) {
  require_tau(tau);
  if (!a.allFinite()) throw std::invalid_argument("prox_sqrt_l1: non-finite input");
  Vector sorted = a.cwiseAbs();
  std::sort(sorted.data(), sorted.data() + sorted.size(), std::greater<>());
  if (sorted.size() == 0 || sorted(0) == 0.0) return Vector::Zero(a.size());

  // Applying the canonical solution entrywise: the active set of the sorted
  // problem is exactly {i : |a_i| > t_k} because a_{k+1} <= t_k < a_k.
  const ProxCase c = classify_unchecked(sorted, tau);
  switch (c.tag) {
    case ProxCaseTag::Zero:
      return Vector::Zero(a.size());
    case ProxCaseTag::Identity:
      return a;
    case ProxCaseTag::Shrink:
      break;
  }
  const double t = c.threshold;
  Vector s(a.size());
  for (Index i = 0; i < a.size(); ++i) {
    const double mag = std::abs(a(i)) - t;
    s(i) = mag > 0.0 ? std::copysign(mag, a(i)) : 0.0;
  }
  return s;
}

double sqrt_l1_objective(const Vector& a, const Vector& s, double tau) {
  return (s - a).norm() + tau * s.lpNorm<1>();
}

DenseMatrix update_S(const DenseMatrix& low_rank, const DenseMatrix& data,
                     double lambda, double mu) {
  if (low_rank.rows() != data.rows() || low_rank.cols() != data.cols()) {
    throw std::invalid_argument("update_S: L and D must have the same shape");
  }
  if (!(lambda > 0.0) || !(mu > 0.0)) {
    throw std::invalid_argument("update_S: lambda and mu must be positive");
  }
  const DenseMatrix diff = data - low_rank;
  const Vector s = prox_sqrt_l1(diff.reshaped(), lambda / mu);
  return s.reshaped(data.rows(), data.cols());
}

}  // namespace srpcp::prox
