#include "dmdsep/lagstats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace dmdsep::lagstats {
namespace {

void require_open_frequency(double omega, const char* what) {
  if (!(omega > 0.0 && omega < std::numbers::pi)) {
    throw ValidationError(std::string(what) + ": omega must lie strictly between 0 and pi");
  }
}

}  // namespace

LagCov lag_cov(const Matrix& s, Index tau) {
  const Index n = s.rows();
  if (tau < 0 || tau >= n) throw ValidationError("lag_cov: tau must satisfy 0 <= tau < n");
  LagCov out;
  out.tau = tau;
  // Row l pairs with row l + tau; the last tau rows wrap to the top.
  out.L = s.topRows(n - tau).transpose() * s.bottomRows(n - tau);
  if (tau > 0) out.L += s.bottomRows(tau).transpose() * s.topRows(tau);
  out.delta_l = diagonal_separation(out.L);
  return out;
}

Matrix lag_cov_truncated(const Matrix& s, Index tau) {
  const Index n = s.rows();
  if (tau < 0 || tau >= n) throw ValidationError("lag_cov_truncated: tau must satisfy 0 <= tau < n");
  return s.topRows(n - tau).transpose() * s.bottomRows(n - tau);
}

double diagonal_separation(const Matrix& l) {
  double best = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < l.rows(); ++i)
    for (Index j = i + 1; j < l.rows(); ++j) best = std::min(best, std::abs(l(i, i) - l(j, j)));
  return best;
}

double cosine_sq_sum(double omega, double phi, Index n) {
  require_open_frequency(omega, "cosine_sq_sum");
  const double nn = static_cast<double>(n);
  return nn / 2.0 + std::sin(omega * nn) / (2.0 * std::sin(omega)) * std::cos(omega * (nn + 1.0) + 2.0 * phi);
}

double cosine_lag_sum(double omega, double phi, Index n, Index tau) {
  require_open_frequency(omega, "cosine_lag_sum");
  const double nn = static_cast<double>(n);
  const double tt = static_cast<double>(tau);
  return nn / 2.0 * std::cos(tt * omega) +
         std::sin(omega * nn) / (2.0 * std::sin(omega)) * std::cos(omega * (nn + tt + 1.0) + 2.0 * phi);
}

double cosine_lag_theory(double omega, double phi, Index n, Index tau) {
  if (n < 1 || tau < 0) throw ValidationError("cosine_lag_theory: need n >= 1 and tau >= 0");
  if (tau == 0) {
    require_open_frequency(omega, "cosine_lag_theory");
    return 1.0;
  }
  return cosine_lag_sum(omega, phi, n, tau) / cosine_sq_sum(omega, phi, n);
}

double cosine_cross_theory(double omega1, double phi1, double omega2, double phi2, Index n) {
  const double gap = std::cos(omega1) - std::cos(omega2);
  if (omega1 == omega2 || gap == 0.0) {
    throw ValidationError("cosine_cross_theory: frequencies must differ");
  }
  const double nn = static_cast<double>(n);
  const double value = std::cos(omega1 * (nn + 1.0) + phi1) * std::cos(omega2 * nn + phi2) -
                       std::cos(omega2 * (nn + 1.0) + phi2) * std::cos(omega1 * nn + phi1) -
                       std::cos(phi2) * std::cos(omega1 + phi1) +
                       std::cos(phi1) * std::cos(omega2 + phi2);
  return value / (2.0 * gap);
}

Vector empirical_acf(const Vector& x, Index max_lag) {
  const Index n = x.size();
  if (max_lag < 0 || 2 * max_lag >= n) throw ValidationError("empirical_acf: need max_lag < n/2");
  const Vector centered = x.array() - x.mean();
  const double denom = centered.squaredNorm();
  if (!(denom > 0.0)) throw ValidationError("empirical_acf: series has zero variance");
  Vector rho(max_lag + 1);
  for (Index tau = 0; tau <= max_lag; ++tau) {
    rho(tau) = centered.head(n - tau).dot(centered.tail(n - tau)) / denom;
  }
  return rho;
}

}  // namespace dmdsep::lagstats
