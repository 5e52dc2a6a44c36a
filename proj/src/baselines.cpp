#include "dmdsep/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dmdsep::baselines {
namespace {

void normalize_columns(Matrix& m, const char* what) {
  for (Index c = 0; c < m.cols(); ++c) {
    const double norm = m.col(c).norm();
    if (!(norm > 0.0)) {
      std::ostringstream msg;
      msg << what << ": column " << c << " is zero";
      throw NumericalError(msg.str());
    }
    m.col(c) /= norm;
  }
}

}  // namespace

UnmixResult amuse(const Matrix& x, Index tau, Index k, AmuseDetails* details) {
  linalg::require_finite(x, "amuse input");
  const Index p = x.rows();
  const Index n = x.cols();
  if (k < 1 || k > p) throw ValidationError("amuse: k must satisfy 1 <= k <= p");
  if (tau < 1 || tau >= n - 1) throw ValidationError("amuse: tau must satisfy 1 <= tau < n - 1");

  const Matrix centered = x.colwise() - x.rowwise().mean();
  const Matrix cov = (centered * centered.transpose()) / static_cast<double>(n);
  const linalg::SymmetricEig ce = linalg::eig_symmetric(cov);
  const double top = ce.values(0);
  const double floor = 1e-12 * std::max(top, 1e-300) * static_cast<double>(p);
  if (!(top > 0.0) || !(ce.values(k - 1) > floor)) {
    std::ostringstream msg;
    msg << "amuse: covariance is degenerate on its top-" << k << " eigenspace (eigenvalue "
        << ce.values(k - 1) << ")";
    throw ValidationError(msg.str());
  }

  const Matrix e = ce.vectors.leftCols(k);
  const Vector lam = ce.values.head(k);
  const Matrix whitener = lam.cwiseSqrt().cwiseInverse().asDiagonal() * e.transpose();
  const Matrix y = whitener * centered;

  const Index m = n - tau;
  const Matrix b = (y.leftCols(m) * y.rightCols(m).transpose()) / static_cast<double>(m);
  const Matrix sym = 0.5 * (b + b.transpose());
  const linalg::SymmetricEig le = linalg::eig_symmetric(sym);

  UnmixResult out;
  out.method = "amuse";
  out.q_hat = e * lam.cwiseSqrt().asDiagonal() * le.vectors;
  normalize_columns(out.q_hat, "amuse mixing estimate");
  out.s_hat = (le.vectors.transpose() * y).transpose();
  normalize_columns(out.s_hat, "amuse source estimate");

  if (details != nullptr) {
    details->whitener = whitener;
    details->y = y;
    details->gamma = le.vectors;
    details->lag_eigenvalues = le.values;
    details->ties = false;
    const double scale = std::max(1.0, le.values.cwiseAbs().maxCoeff());
    for (Index i = 0; i + 1 < k; ++i) {
      if (le.values(i) - le.values(i + 1) <= 1e-12 * scale) details->ties = true;
    }
  }
  return out;
}

UnmixResult pca_unmix(const Matrix& x, Index k) {
  linalg::require_finite(x, "pca_unmix input");
  if (k < 1 || k > std::min(x.rows(), x.cols())) {
    throw ValidationError("pca_unmix: k must satisfy 1 <= k <= min(p, n)");
  }
  const Matrix centered = x.colwise() - x.rowwise().mean();
  const linalg::Svd s = linalg::truncated_svd(centered, k);
  UnmixResult out;
  out.method = "pca";
  out.q_hat = s.U.leftCols(k);
  out.s_hat = s.V.leftCols(k);
  return out;
}

}  // namespace dmdsep::baselines
