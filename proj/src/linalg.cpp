#include "dmdsep/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace dmdsep::linalg {
namespace {

// Shape at which a QR step before the bidiagonal SVD pays for itself.
bool prefer_qr_first(Index rows, Index cols) { return rows > 2 * cols && cols > 0; }

// Thin SVD of a tall (rows >= cols) matrix, keeping `keep` left vectors.
Svd svd_tall(const Matrix& a, Index keep) {
  const Index m = a.rows();
  const Index n = a.cols();
  Svd out;
  if (prefer_qr_first(m, n)) {
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    Eigen::BDCSVD<Matrix> inner(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
    out.sigma = inner.singularValues();
    out.V = inner.matrixV();
    out.U = Matrix::Zero(m, keep);
    out.U.topRows(n) = inner.matrixU().leftCols(keep);
    out.U.applyOnTheLeft(qr.householderQ());
  } else {
    Eigen::BDCSVD<Matrix> full(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.sigma = full.singularValues();
    out.U = full.matrixU().leftCols(keep);
    out.V = full.matrixV();
  }
  return out;
}

Svd svd_impl(const Matrix& a, Index keep) {
  require_finite(a, "svd input");
  const Index m = a.rows();
  const Index n = a.cols();
  Svd out;
  if (m == 0 || n == 0) {
    out.U = Matrix::Zero(m, 0);
    out.V = Matrix::Zero(n, 0);
    out.sigma = Vector::Zero(0);
    return out;
  }
  if (m >= n) {
    out = svd_tall(a, keep);
    out.V = out.V.leftCols(keep).eval();
  } else {
    // Work on the transpose so the QR shortcut applies to wide matrices too.
    Svd t = svd_tall(a.transpose(), keep);
    out.sigma = t.sigma;
    out.U = t.V.leftCols(keep);
    out.V = std::move(t.U);
  }
  out.rank = numerical_rank(out.sigma, m, n);
  out.sigma.conservativeResize(keep);
  return out;
}

template <typename MatrixT>
MatrixT pinv_from_svd(const MatrixT& u, const Vector& sigma, const MatrixT& v,
                      Index rows, Index cols, double rel_tol) {
  const Index r = numerical_rank(sigma, rows, cols, rel_tol);
  if (r == 0) return MatrixT::Zero(cols, rows);
  const Vector inv = sigma.head(r).cwiseInverse();
  return v.leftCols(r) * inv.asDiagonal() * u.leftCols(r).adjoint();
}

}  // namespace

Matrix Svd::reconstruct(Index k) const {
  if (k < 0 || k > sigma.size()) throw ValidationError("reconstruct: k out of range");
  return U.leftCols(k) * sigma.head(k).asDiagonal() * V.leftCols(k).transpose();
}

ComplexEig ComplexEig::leading(Index k) const {
  if (k < 0 || k > values.size()) throw ValidationError("leading: k out of range");
  return ComplexEig{values.head(k), vectors.leftCols(k)};
}

void require_finite(const Matrix& a, std::string_view what) {
  if (!a.allFinite()) {
    std::ostringstream msg;
    msg << what << ": matrix contains non-finite entries";
    throw ValidationError(msg.str());
  }
}

Svd svd(const Matrix& a) { return svd_impl(a, std::min(a.rows(), a.cols())); }

Svd truncated_svd(const Matrix& a, Index k) {
  if (k < 1 || k > std::min(a.rows(), a.cols())) {
    std::ostringstream msg;
    msg << "truncated_svd: k = " << k << " outside [1, " << std::min(a.rows(), a.cols()) << "]";
    throw ValidationError(msg.str());
  }
  return svd_impl(a, k);
}

Index numerical_rank(const Vector& sigma, Index rows, Index cols, double rel_tol) {
  if (sigma.size() == 0 || sigma(0) <= 0.0) return 0;
  const double cutoff = rel_tol * sigma(0) * static_cast<double>(std::max(rows, cols));
  Index r = 0;
  while (r < sigma.size() && sigma(r) > cutoff) ++r;
  return r;
}

Matrix pinv(const Matrix& a, double rel_tol) {
  if (rel_tol < 0) throw ValidationError("pinv: rel_tol must be nonnegative");
  require_finite(a, "pinv input");
  if (a.size() == 0) return Matrix::Zero(a.cols(), a.rows());
  const Svd s = svd(a);
  return pinv_from_svd<Matrix>(s.U, s.sigma, s.V, a.rows(), a.cols(), rel_tol);
}

CMatrix pinv(const CMatrix& a, double rel_tol) {
  if (rel_tol < 0) throw ValidationError("pinv: rel_tol must be nonnegative");
  if (!a.allFinite()) throw ValidationError("pinv input: matrix contains non-finite entries");
  if (a.size() == 0) return CMatrix::Zero(a.cols(), a.rows());
  Eigen::BDCSVD<CMatrix> s(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return pinv_from_svd<CMatrix>(s.matrixU(), s.singularValues(), s.matrixV(), a.rows(),
                                a.cols(), rel_tol);
}

void normalize_phase(Eigen::Ref<CVector> v) {
  Index best = 0;
  double best_abs = -1.0;
  for (Index i = 0; i < v.size(); ++i) {
    const double m = std::abs(v(i));
    if (m > best_abs) {
      best_abs = m;
      best = i;
    }
  }
  if (best_abs <= 0.0) return;
  const Complex rot = std::conj(v(best)) / best_abs;
  v *= rot;
  v(best) = Complex(std::abs(v(best)), 0.0);
}

ComplexEig eig_nonsymmetric(const Matrix& a) {
  if (a.rows() != a.cols()) throw ValidationError("eig_nonsymmetric: matrix must be square");
  require_finite(a, "eig_nonsymmetric input");
  const Index n = a.rows();
  ComplexEig out;
  if (n == 0) return out;

  Eigen::EigenSolver<Matrix> solver(a, true);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eig_nonsymmetric: QR iteration did not converge within the sweep budget");
  }
  const CVector values = solver.eigenvalues();
  CMatrix vectors = solver.eigenvectors();

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) {
    const double mi = std::abs(values(i));
    const double mj = std::abs(values(j));
    if (mi != mj) return mi > mj;
    if (values(i).real() != values(j).real()) return values(i).real() > values(j).real();
    return values(i).imag() > values(j).imag();
  });

  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Index c = 0; c < n; ++c) {
    const Index src = order[static_cast<std::size_t>(c)];
    out.values(c) = values(src);
    CVector v = vectors.col(src);
    const double norm = v.norm();
    if (norm > 0.0) v /= norm;
    normalize_phase(v);
    out.vectors.col(c) = v;
  }
  return out;
}

SymmetricEig eig_symmetric(const Matrix& a) {
  if (a.rows() != a.cols()) throw ValidationError("eig_symmetric: matrix must be square");
  require_finite(a, "eig_symmetric input");
  const double scale = a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
  const double asym = a.size() == 0 ? 0.0 : (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * (1.0 + scale)) {
    std::ostringstream msg;
    msg << "eig_symmetric: input is not symmetric (max |A - A^T| = " << asym << ")";
    throw ValidationError(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eig_symmetric: tridiagonal QR did not converge");
  }
  const Index n = a.rows();
  SymmetricEig out{solver.eigenvalues().reverse(), solver.eigenvectors().rowwise().reverse()};
  // Sign convention: largest-magnitude entry of each vector is positive.
  for (Index c = 0; c < n; ++c) {
    Index arg = 0;
    out.vectors.col(c).cwiseAbs().maxCoeff(&arg);
    if (out.vectors(arg, c) < 0) out.vectors.col(c) *= -1.0;
  }
  return out;
}

Matrix inv_sqrt_spd(const Matrix& a) {
  const SymmetricEig e = eig_symmetric(a);
  if (e.values.size() == 0) return Matrix::Zero(0, 0);
  const double smallest = e.values(e.values.size() - 1);
  if (!(smallest > 0.0)) {
    std::ostringstream msg;
    msg << "inv_sqrt_spd: matrix is not positive definite (smallest eigenvalue " << smallest << ")";
    throw ValidationError(msg.str());
  }
  const Vector scale = e.values.cwiseSqrt().cwiseInverse();
  return e.vectors * scale.asDiagonal() * e.vectors.transpose();
}

}  // namespace dmdsep::linalg
