#pragma once

#include "srpcp/linalg.hpp"

/// Exact solver for min_L ||L - A||_F + rho * ||L||_* through one full SVD.
namespace srpcp::spectral {

struct ShrinkResult {
  Vector values;          // shrunk singular values, nonincreasing
  Index active_rank = 0;  // number of strictly positive entries
};

/// Singular-value shrinkage: the sqrt-l1 prox applied to a spectrum.
/// sigma must be nonnegative and nonincreasing; sigma = 0 maps to 0.
ShrinkResult d_rho(const Vector& sigma, double rho);

/// The L-step of the outer loop uses rho = 1 / mu. Everything that needs
/// this change of parameters goes through here.
double rho_from_mu(double mu);

struct LUpdate {
  DenseMatrix L;
  Index rank = 0;
  Vector singular_values;  // full spectrum of A
  Vector shrunk;           // d_rho(singular_values)
};

LUpdate update_L_full(const DenseMatrix& a, double rho);

}  // namespace srpcp::spectral
