#include <cmath>
#include <stdexcept>
#include <vector>

#include "srpcp/bm.hpp"

namespace srpcp::bm {
namespace {

Index leading_nonzeros(const Vector& w) {
  Index ell = 0;
  while (ell < w.size() && w(ell) > 0.0) ++ell;
  return ell;
}

// tail[i] = w_i^2 + ... + w_{ell-1}^2, accumulated from the end.
std::vector<double> tail_squares(const Vector& w, Index ell) {
  std::vector<double> tail(static_cast<std::size_t>(ell) + 1, 0.0);
  for (Index i = ell - 1; i >= 0; --i) tail[i] = tail[i + 1] + w(i) * w(i);
  return tail;
}

}  // namespace

ReducedProblem::ReducedProblem(Vector w, double c, double rho)
    : w_(std::move(w)), c_(c), rho_(rho) {
  if (!(rho_ > 0.0) || !std::isfinite(rho_)) {
    throw std::invalid_argument("ReducedProblem: rho must be positive");
  }
  if (!(c_ >= 0.0) || !std::isfinite(c_)) {
    throw std::invalid_argument("ReducedProblem: c must be >= 0");
  }
  for (Index i = 0; i < w_.size(); ++i) {
    if (!(w_(i) >= 0.0) || !std::isfinite(w_(i))) {
      throw std::invalid_argument("ReducedProblem: w must be finite and >= 0");
    }
    if (i > 0 && w_(i) > w_(i - 1)) {
      throw std::invalid_argument("ReducedProblem: w must be nonincreasing");
    }
  }
  ell_ = leading_nonzeros(w_);
  if (ell_ == 0) throw std::invalid_argument("ReducedProblem: w must be nonzero");
  // Holds for every sorted w; a violation means the input was corrupted.
  if (uniform_threshold() > zero_threshold() * (1.0 + 1e-12)) {
    throw std::logic_error("ReducedProblem: branch thresholds out of order");
  }
}

double ReducedProblem::zero_threshold() const {
  return w_(0) / std::sqrt(w_.squaredNorm() + c_ * c_);
}

double ReducedProblem::uniform_threshold() const {
  const double wl = w_(ell_ - 1);
  return wl / std::sqrt(static_cast<double>(ell_) * wl * wl + c_ * c_);
}

UvBranch classify_uv(const ReducedProblem& problem) {
  if (problem.rho() >= problem.zero_threshold()) return UvBranch::Zero;
  if (problem.rho() <= problem.uniform_threshold()) return UvBranch::Uniform;
  return UvBranch::Middle;
}

Vector solve_uv(const ReducedProblem& problem) {
  const Vector& w = problem.w();
  const double c = problem.c();
  const double rho = problem.rho();
  const Index ell = problem.ell();
  Vector d = Vector::Zero(w.size());

  const UvBranch branch = classify_uv(problem);
  if (branch == UvBranch::Zero) return d;

  if (branch == UvBranch::Uniform) {
    double shift = 0.0;
    if (c > 0.0) {
      shift = rho * std::sqrt(c * c / (1.0 - static_cast<double>(ell) * rho * rho));
    }
    for (Index i = 0; i < ell; ++i) d(i) = std::max(w(i) - shift, 0.0);
    return d;
  }

  const std::vector<double> tail = tail_squares(w, ell);
  const double inv_rho_sq = 1.0 / (rho * rho);
  double t = 0.0;
  Index active = ell - 1;
  for (Index i = 1; i < ell; ++i) {
    const double denom = inv_rho_sq - static_cast<double>(i);
    if (denom <= 0.0) break;
    t = std::sqrt((tail[i] + c * c) / denom);
    if (w(i) <= t) {
      active = i;
      break;
    }
  }
  for (Index i = 0; i < active; ++i) d(i) = std::max(w(i) - t, 0.0);
  return d;
}

Vector solve_uv(const Vector& w, double c, double rho) {
  if (w.size() > 0 && w(0) == 0.0) {
    ReducedProblem check(Vector::Ones(1), c, rho);  // validates c and rho
    for (Index i = 0; i < w.size(); ++i) {
      if (w(i) != 0.0) throw std::invalid_argument("solve_uv: w must be nonincreasing");
    }
    return Vector::Zero(w.size());
  }
  return solve_uv(ReducedProblem(w, c, rho));
}

Index count_uv_indices(const ReducedProblem& problem) {
  const Vector& w = problem.w();
  const double c = problem.c();
  const Index ell = problem.ell();
  const std::vector<double> tail = tail_squares(w, ell);
  const double inv_rho_sq = 1.0 / (problem.rho() * problem.rho());
  Index count = 0;
  for (Index i = 1; i < ell; ++i) {
    const double denom = inv_rho_sq - static_cast<double>(i);
    if (denom <= 0.0) break;
    const double t = std::sqrt((tail[i] + c * c) / denom);
    if (w(i) <= t && t < w(i - 1)) ++count;
  }
  return count;
}

double uv_objective(const Vector& w, double c, double rho, const Vector& d) {
  return std::sqrt((d - w).squaredNorm() + c * c) + rho * d.sum();
}

RankCertificate rank_certificate(Index ell, double sigma_next, double c,
                                 double rho) {
  if (ell < 1) throw std::invalid_argument("rank_certificate: ell must be >= 1");
  if (!(sigma_next >= 0.0) || !(c >= 0.0) || !(rho > 0.0)) {
    throw std::invalid_argument("rank_certificate: invalid arguments");
  }
  RankCertificate cert;
  cert.ell = ell;
  cert.sigma_next = sigma_next;
  if (sigma_next > 0.0) {
    cert.threshold = sigma_next / std::sqrt(static_cast<double>(ell) *
                                                sigma_next * sigma_next + c * c);
  }
  cert.ok = rho >= cert.threshold;
  return cert;
}

Factors lift_to_factors(const DenseMatrix& h, const DenseMatrix& w,
                        const Vector& d) {
  if (h.cols() != d.size() || w.cols() != d.size()) {
    throw std::invalid_argument("lift_to_factors: factor widths must match d");
  }
  if ((d.array() < 0.0).any()) {
    throw std::invalid_argument("lift_to_factors: d must be nonnegative");
  }
  const Vector root = d.cwiseSqrt();
  return {h * root.asDiagonal(), w * root.asDiagonal()};
}

}  // namespace srpcp::bm
