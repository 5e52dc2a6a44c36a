#pragma once

// Second-order comparison methods: AMUSE (whitening plus the eigenvectors of
// a symmetrized single-lag covariance) and PCA unmixing.

#include <string>

#include "dmdsep/linalg.hpp"

namespace dmdsep::baselines {

struct UnmixResult {
  Matrix q_hat;  // p x k, unit-norm columns
  Matrix s_hat;  // n x k, unit-norm columns
  std::string method;
};

/// Internals of an AMUSE fit, exposed for inspection.
struct AmuseDetails {
  Matrix whitener;  // k x p, Y = whitener * (X - mean)
  Matrix y;         // k x n whitened data
  Matrix gamma;     // k x k orthonormal rotation
  Vector lag_eigenvalues;  // descending
  bool ties = false;       // two lag eigenvalues coincide
};

/// Channels are de-meaned over time before whitening.
UnmixResult amuse(const Matrix& x, Index tau, Index k, AmuseDetails* details = nullptr);

/// Q_hat = leading left singular vectors of X with each channel's time mean
/// removed; S_hat = the matching right singular vectors.
UnmixResult pca_unmix(const Matrix& x, Index k);

}  // namespace dmdsep::baselines
