#pragma once

// Dense kernels shared by every estimator: SVD, truncated SVD, pseudoinverse,
// symmetric and nonsymmetric eigendecompositions, inverse square root.
//
// Matrices follow the time-series convention used throughout the library:
// a p x n data matrix has one row per channel and one column per sample.

#include <complex>
#include <string_view>

#include <Eigen/Dense>

#include "dmdsep/error.hpp"

namespace dmdsep {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

namespace linalg {

/// Thin singular value decomposition A = U diag(sigma) V^T.
///
/// `sigma` holds min(rows, cols) values in descending order. `rank` is the
/// numerical rank under the default pseudoinverse cutoff (see pinv).
struct Svd {
  Matrix U;
  Vector sigma;
  Matrix V;
  Index rank = 0;

  /// U_k diag(sigma_k) V_k^T using the leading k triplets.
  Matrix reconstruct(Index k) const;
  Matrix reconstruct() const { return reconstruct(sigma.size()); }
};

/// Eigenpairs of a real square matrix, possibly complex.
///
/// Ordered by modulus descending, ties broken by real part then imaginary
/// part (both descending). Each eigenvector has unit 2-norm and is rotated
/// so that its largest-modulus entry is real and positive.
struct ComplexEig {
  CVector values;
  CMatrix vectors;

  Index size() const { return values.size(); }
  ComplexEig leading(Index k) const;
};

struct SymmetricEig {
  Vector values;   // descending
  Matrix vectors;  // orthonormal columns
};

inline constexpr double kDefaultPinvTol = 1e-12;

/// Throws ValidationError naming `what` if any entry is NaN or infinite.
void require_finite(const Matrix& a, std::string_view what);

Svd svd(const Matrix& a);

/// Leading k singular triplets; 1 <= k <= min(rows, cols).
Svd truncated_svd(const Matrix& a, Index k);

/// Number of singular values strictly above rel_tol * sigma_1 * max(rows, cols).
Index numerical_rank(const Vector& sigma, Index rows, Index cols,
                     double rel_tol = kDefaultPinvTol);

/// Moore-Penrose pseudoinverse. Singular values at or below
/// rel_tol * sigma_1 * max(rows, cols) are treated as zero.
Matrix pinv(const Matrix& a, double rel_tol = kDefaultPinvTol);
CMatrix pinv(const CMatrix& a, double rel_tol = kDefaultPinvTol);

/// Hessenberg reduction followed by Francis double-shift QR; eigenvectors
/// from the real Schur form by back-substitution.
ComplexEig eig_nonsymmetric(const Matrix& a);

SymmetricEig eig_symmetric(const Matrix& a);

/// B with B A B = I for symmetric positive definite A.
Matrix inv_sqrt_spd(const Matrix& a);

/// Rotates v in place so its largest-modulus entry is real positive.
void normalize_phase(Eigen::Ref<CVector> v);

}  // namespace linalg
}  // namespace dmdsep
