#pragma once

// Synthetic data models: cosine mixtures, AR/ARMA realizations, the
// changepoint composite, random mixing matrices, assembly of X = Q D S^T and
// Bernoulli masking.

#include <cstdint>
#include <vector>

#include "dmdsep/linalg.hpp"

namespace dmdsep::signals {

struct CosineSpec {
  std::vector<double> omegas;  // each in (0, pi), pairwise distinct
  std::vector<double> phases;  // empty means all zero
};

struct ArmaSpec {
  std::vector<double> ar;  // x_t = sum_j ar[j] x_{t-1-j} + e_t + sum_j ma[j] e_{t-1-j}
  std::vector<double> ma;
  double innovation_std = 1.0;
};

struct MaskSpec {
  double q = 1.0;  // observation probability in (0, 1]
  std::uint64_t seed = 0;
};

/// Ground truth X = Q diag(d) S^T with unit-norm Q and S columns, zero-mean
/// S columns and d sorted descending.
struct SourceModel {
  Matrix Q;
  Vector d;
  Matrix S;
  Matrix X;
  /// order[i] is the input column that became column i.
  std::vector<Index> order;

  Index p() const { return Q.rows(); }
  Index n() const { return S.rows(); }
  Index k() const { return Q.cols(); }
};

/// n x k matrix with column i equal to cos(omega_i t + phi_i), t = 1..n.
Matrix gen_cosines(const CosineSpec& spec, Index n);

/// Moduli of the roots of 1 - a_1 z - ... - a_q z^q (ascending).
std::vector<double> ar_root_moduli(const std::vector<double>& ar);

/// Burn-in length for a given ARMA specification: max(100, 10 * order).
Index arma_burn_in(const ArmaSpec& spec);

/// One realization of length n with standard-normal innovations scaled by
/// innovation_std. The first arma_burn_in(spec) samples are discarded.
Vector gen_arma(const ArmaSpec& spec, Index n, std::uint64_t seed);

/// Theoretical autocorrelations rho(0..max_lag) of a stationary AR process
/// (Yule-Walker recursion).
Vector ar_autocorrelation(const std::vector<double>& ar, Index max_lag);

/// Four-column changepoint composite split at n/2:
///   0: AR(2)(0.2, 0.7) then zeros      1: zeros then AR(2)(0.3, 0.5)
///   2: cos(2t) then zeros              3: zeros then cos(t/2)
Matrix gen_changepoint_suite(Index n, std::uint64_t seed);

/// Two-column stand-in for a siren/music mixture sampled at 8 kHz: a
/// frequency-modulated tone and a decaying three-note chord, each de-meaned
/// and scaled to [-1, 1].
Matrix gen_audio_standin(Index n);

/// p x k matrix of independent uniform directions on the unit sphere.
/// Draws are repeated until the condition number is at most 1e6.
Matrix random_unit_columns(Index p, Index k, std::uint64_t seed);

/// De-means and normalizes the columns of c_raw into S, normalizes the
/// columns of q, and sorts all factors so d is descending.
SourceModel assemble(const Matrix& q, const Vector& d, const Matrix& c_raw);

/// As assemble, with d_i = ||b_i|| * ||c_i - mean(c_i)|| taken from the data.
SourceModel assemble_natural(const Matrix& b, const Matrix& c_raw);

/// Entry-wise Bernoulli(q) mask with zero fill. Entries are visited in
/// column-major order (sample by sample), one uniform draw each, and kept
/// when the draw is below q.
Matrix apply_mask(const Matrix& x, const MaskSpec& spec);

}  // namespace dmdsep::signals
