#pragma once

// Dynamic mode decomposition estimators: lag pairs, tau-DMD, tSVD-DMD for
// zero-filled data, latent signal recovery and the dynamic mode
// factorization X = Q_hat C_hat^T.

#include <optional>
#include <string>
#include <vector>

#include "dmdsep/linalg.hpp"

namespace dmdsep::dmd {

/// X0 holds samples 1..n-tau, X1 holds samples 1+tau..n.
struct LagPair {
  Matrix x0;
  Matrix x1;
  Index tau = 0;
};

struct DmdOptions {
  /// The p x p operator is formed explicitly only for p at or below this
  /// size; larger problems are solved in the SVD basis of X0.
  Index materialize_limit = 2000;
  bool keep_operator = false;
  double pinv_tol = linalg::kDefaultPinvTol;
};

struct DmdResult {
  linalg::ComplexEig eig;  // leading k eigenpairs of A_tau
  Index tau = 0;
  Index rank = 0;           // k
  Index detected_rank = 0;  // numerical rank of X0
  std::optional<Matrix> a_hat;
  std::vector<std::string> warnings;

  const CMatrix& modes() const { return eig.vectors; }
  const CVector& eigenvalues() const { return eig.values; }
};

struct RecoveredSignals {
  Matrix s_hat;  // n x k, unit-norm columns
  /// Per column: norm of the imaginary part after phase alignment relative
  /// to the column norm.
  Vector imag_residue;
  std::vector<std::string> warnings;
};

struct DmfResult {
  CMatrix q_hat;  // p x k, unit-norm columns
  CMatrix c_hat;  // n x k
  Vector mu_hat;  // p
  CVector eigvals;
  /// ||mu - Q Q^+ mu||: the part of the mean outside span(Q_hat), which the
  /// factorization cannot represent.
  double dropped_mean_norm = 0.0;
  std::vector<std::string> warnings;

  CMatrix reconstruct() const { return q_hat * c_hat.transpose(); }
};

LagPair make_lag_pair(const Matrix& x, Index tau);

/// A_tau = X1 X0^+, then the k eigenpairs of largest modulus.
DmdResult dmd_fit(const Matrix& x, Index tau, Index k, const DmdOptions& options = {});

/// Rank-k truncated SVD of the zero-filled matrix followed by dmd_fit on the
/// reconstruction. A fully observed input (q == 1) skips the truncation.
/// When low_rank is given it receives the matrix the fit was computed on.
DmdResult tsvd_dmd_fit(const Matrix& x_masked, double q, Index tau, Index k,
                       const DmdOptions& options = {}, Matrix* low_rank = nullptr);

/// Rows of the pseudoinverse of the mode matrix.
CMatrix left_vectors(const CMatrix& modes);

/// S_hat from the normalized columns of (W X)^T, W = left_vectors.
RecoveredSignals recover_signals(const Matrix& x, const CMatrix& left);

/// Mean removal, tau-DMD on the centered data, and
/// C_hat^T = Q^+ mu 1^T + Q^+ (X - mu 1^T).
DmfResult dmf(const Matrix& x, Index tau, Index k, const DmdOptions& options = {});

/// Real part of a complex matrix whose imaginary part is at most
/// rel_tol times its norm; throws NumericalError otherwise.
Matrix real_part_checked(const CMatrix& m, double rel_tol = 1e-6);

}  // namespace dmdsep::dmd
