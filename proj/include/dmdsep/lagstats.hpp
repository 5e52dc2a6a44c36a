#pragma once

// Lag covariances of latent signals and closed-form cosine sums.

#include "dmdsep/linalg.hpp"

namespace dmdsep::lagstats {

/// Circular lag-tau cross covariance of the columns of an n x k matrix S:
///   L[i][j] = sum_l S(l, i) * S((l + tau) mod n, j)
/// `delta_l` is the smallest gap between distinct diagonal entries
/// (infinity when k == 1).
struct LagCov {
  Matrix L;
  Index tau = 0;
  double delta_l = 0.0;
};

LagCov lag_cov(const Matrix& s, Index tau);

/// Non-circular variant: sum over l = 0..n-tau-1 only.
Matrix lag_cov_truncated(const Matrix& s, Index tau);

/// min_{i != j} |L(i,i) - L(j,j)|.
double diagonal_separation(const Matrix& l);

/// sum_{t=1}^n cos^2(omega t + phi).
double cosine_sq_sum(double omega, double phi, Index n);

/// sum_{t=1}^n cos(omega t + phi) cos(omega (t + tau) + phi).
double cosine_lag_sum(double omega, double phi, Index n, Index tau);

/// Normalized lag-tau autocorrelation of a raw cosine: lag sum over square sum.
double cosine_lag_theory(double omega, double phi, Index n, Index tau);

/// sum_{t=1}^n cos(omega1 t + phi1) cos(omega2 t + phi2) for omega1 != omega2.
double cosine_cross_theory(double omega1, double phi1, double omega2, double phi2, Index n);

/// Sample autocorrelation rho(0..max_lag), non-circular, mean removed.
Vector empirical_acf(const Vector& x, Index max_lag);

}  // namespace dmdsep::lagstats
