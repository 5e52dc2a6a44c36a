#include "dmdsep/dmd.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dmdsep::dmd {
namespace {

void check_rank(DmdResult& result, Index k) {
  if (result.detected_rank < k) {
    std::ostringstream msg;
    msg << "X0 has numerical rank " << result.detected_rank << ", below the requested k = " << k
        << "; trailing eigenpairs belong to the null space";
    result.warnings.push_back(msg.str());
  }
}

void require_finite_operator(const Matrix& m) {
  if (!m.allFinite()) {
    throw NumericalError("DMD operator has non-finite entries; the data scale overflows double precision");
  }
}

// Eigenpairs of A = B U_r^T computed from the r x r matrix U_r^T B.
// Modes with nonzero eigenvalue are lifted exactly as B y / lambda; null
// directions fall back to left singular vectors of X0.
linalg::ComplexEig projected_eig(const Matrix& b, const linalg::Svd& s, Index r, Index k) {
  const Matrix u_r = s.U.leftCols(r);
  const Matrix reduced = u_r.transpose() * b;
  const linalg::ComplexEig small = linalg::eig_nonsymmetric(reduced);

  const Index p = b.rows();
  linalg::ComplexEig out;
  out.values = CVector::Zero(k);
  out.vectors = CMatrix::Zero(p, k);
  const Index lifted = std::min(k, r);
  const double scale = small.size() > 0 ? std::abs(small.values(0)) : 0.0;
  for (Index i = 0; i < lifted; ++i) {
    const Complex lambda = small.values(i);
    CVector v;
    if (std::abs(lambda) > 1e-14 * std::max(1.0, scale)) {
      v = (b.cast<Complex>() * small.vectors.col(i)) / lambda;
    } else {
      v = u_r.cast<Complex>() * small.vectors.col(i);
    }
    const double norm = v.norm();
    if (norm > 0.0) v /= norm;
    linalg::normalize_phase(v);
    out.values(i) = lambda;
    out.vectors.col(i) = v;
  }
  for (Index i = lifted; i < k; ++i) {
    CVector v = s.U.col(i).cast<Complex>();
    linalg::normalize_phase(v);
    out.vectors.col(i) = v;
  }
  return out;
}

// left * x without materializing a complex copy of x.
CMatrix apply_left(const CMatrix& left, const Matrix& x) {
  CMatrix out(left.rows(), x.cols());
  out.real() = left.real() * x;
  out.imag() = left.imag() * x;
  return out;
}

}  // namespace

LagPair make_lag_pair(const Matrix& x, Index tau) {
  const Index n = x.cols();
  if (tau < 1 || tau > n - 2) {
    std::ostringstream msg;
    msg << "make_lag_pair: tau = " << tau << " outside [1, " << n - 2 << "] for n = " << n;
    throw ValidationError(msg.str());
  }
  return LagPair{x.leftCols(n - tau), x.rightCols(n - tau), tau};
}

DmdResult dmd_fit(const Matrix& x, Index tau, Index k, const DmdOptions& options) {
  linalg::require_finite(x, "dmd_fit input");
  const LagPair pair = make_lag_pair(x, tau);
  const Index p = x.rows();
  const Index m = pair.x0.cols();
  if (k < 1 || k > std::min(p, m)) {
    std::ostringstream msg;
    msg << "dmd_fit: k = " << k << " outside [1, min(p, n - tau)] = [1, " << std::min(p, m) << "]";
    throw ValidationError(msg.str());
  }

  DmdResult result;
  result.tau = tau;
  result.rank = k;

  const linalg::Svd s = linalg::svd(pair.x0);
  const Index r = linalg::numerical_rank(s.sigma, p, m, options.pinv_tol);
  result.detected_rank = r;
  check_rank(result, k);

  // B = X1 V_r diag(1/sigma_r), so that A_tau = X1 X0^+ = B U_r^T.
  const Vector inv_sigma = s.sigma.head(r).cwiseInverse();
  const Matrix b = (pair.x1 * s.V.leftCols(r)) * inv_sigma.asDiagonal();
  require_finite_operator(b);

  if (p <= options.materialize_limit) {
    Matrix a = b * s.U.leftCols(r).transpose();
    result.eig = linalg::eig_nonsymmetric(a).leading(k);
    if (options.keep_operator) result.a_hat = std::move(a);
  } else {
    result.eig = projected_eig(b, s, r, k);
  }
  return result;
}

DmdResult tsvd_dmd_fit(const Matrix& x_masked, double q, Index tau, Index k,
                       const DmdOptions& options, Matrix* low_rank) {
  if (!(q > 0.0 && q <= 1.0)) throw ValidationError("tsvd_dmd_fit: q must lie in (0, 1]");
  if (q == 1.0) {
    if (low_rank != nullptr) *low_rank = x_masked;
    return dmd_fit(x_masked, tau, k, options);
  }
  const linalg::Svd top = linalg::truncated_svd(x_masked, k);
  if (low_rank != nullptr) *low_rank = top.reconstruct(k);

  // X_k = U_k M with M = diag(sigma_k) V_k^T, so A_tau = U_k (M1 M0^+) U_k^T
  // and its nonzero eigenpairs come from the k x k core.
  const Matrix u = top.U.leftCols(k);
  const Matrix m = top.sigma.head(k).asDiagonal() * top.V.leftCols(k).transpose();
  const LagPair pair = make_lag_pair(m, tau);
  const Index p = x_masked.rows();
  if (k > std::min(p, pair.x0.cols())) {
    throw ValidationError("tsvd_dmd_fit: k exceeds min(p, n - tau)");
  }

  DmdResult result;
  result.tau = tau;
  result.rank = k;
  const linalg::Svd s0 = linalg::svd(pair.x0);
  result.detected_rank = linalg::numerical_rank(s0.sigma, p, pair.x0.cols(), options.pinv_tol);
  check_rank(result, k);
  const Matrix core = pair.x1 * linalg::pinv(pair.x0, options.pinv_tol);
  require_finite_operator(core);
  const linalg::ComplexEig small = linalg::eig_nonsymmetric(core);
  result.eig.values = small.values;
  result.eig.vectors = u.cast<Complex>() * small.vectors;
  for (Index i = 0; i < k; ++i) {
    auto col = result.eig.vectors.col(i);
    col /= col.norm();
    linalg::normalize_phase(col);
  }
  if (options.keep_operator && p <= options.materialize_limit) result.a_hat = u * core * u.transpose();
  return result;
}

CMatrix left_vectors(const CMatrix& modes) { return linalg::pinv(modes); }

RecoveredSignals recover_signals(const Matrix& x, const CMatrix& left) {
  if (left.cols() != x.rows()) {
    throw ValidationError("recover_signals: left vectors must have one entry per channel");
  }
  const Index k = left.rows();
  const Index n = x.cols();
  const CMatrix z = apply_left(left, x).transpose();

  RecoveredSignals out;
  out.s_hat = Matrix::Zero(n, k);
  out.imag_residue = Vector::Zero(k);

  constexpr double kImagTol = 1e-6;
  std::vector<bool> done(static_cast<std::size_t>(k), false);
  for (Index i = 0; i < k; ++i) {
    if (done[static_cast<std::size_t>(i)]) continue;
    CVector col = z.col(i);
    const double norm = col.norm();
    if (!(norm > 0.0)) {
      out.warnings.push_back("recovered signal " + std::to_string(i) + " is identically zero");
      continue;
    }
    // Rotate so the column is as close to real as possible.
    const Complex sq = (col.array() * col.array()).sum();
    const double theta = 0.5 * std::arg(sq);
    col *= std::polar(1.0, -theta);
    const double residue = col.imag().norm() / norm;
    out.imag_residue(i) = residue;
    if (residue <= kImagTol) {
      out.s_hat.col(i) = col.real() / col.real().norm();
      continue;
    }

    // A genuinely complex mode. Look for its conjugate partner.
    Index partner = -1;
    for (Index j = i + 1; j < k; ++j) {
      if (done[static_cast<std::size_t>(j)]) continue;
      const double gap = (left.row(j) - left.row(i).conjugate()).norm();
      if (gap <= 1e-8 * left.row(i).norm()) {
        partner = j;
        break;
      }
    }
    if (partner >= 0) {
      const CVector raw = z.col(i);
      out.s_hat.col(i) = raw.real() / raw.real().norm();
      out.s_hat.col(partner) = raw.imag() / raw.imag().norm();
      out.imag_residue(partner) = residue;
      done[static_cast<std::size_t>(partner)] = true;
      std::ostringstream msg;
      msg << "signals " << i << " and " << partner
          << " come from a complex-conjugate mode pair; emitted as its real and imaginary parts";
      out.warnings.push_back(msg.str());
    } else {
      out.s_hat.col(i) = col.real() / col.real().norm();
      std::ostringstream msg;
      msg << "signal " << i << " is complex (imaginary residue " << residue
          << "); real part after phase alignment emitted";
      out.warnings.push_back(msg.str());
    }
  }
  return out;
}

DmfResult dmf(const Matrix& x, Index tau, Index k, const DmdOptions& options) {
  linalg::require_finite(x, "dmf input");
  const Index p = x.rows();
  const Index n = x.cols();
  if (k < 1 || k > std::min(p, n - tau - 1)) {
    std::ostringstream msg;
    msg << "dmf: k = " << k << " outside [1, min(p, n - tau - 1)]";
    throw ValidationError(msg.str());
  }

  DmfResult out;
  out.mu_hat = x.rowwise().mean();
  const Matrix centered = x.colwise() - out.mu_hat;
  DmdResult fit = dmd_fit(centered, tau, k, options);
  out.warnings = std::move(fit.warnings);
  out.q_hat = fit.eig.vectors;
  out.eigvals = fit.eig.values;

  const CMatrix left = left_vectors(out.q_hat);
  const CVector mean_coords = left * out.mu_hat.cast<Complex>();
  const CMatrix coords = apply_left(left, centered);
  out.c_hat = (coords.colwise() + mean_coords).transpose();

  out.dropped_mean_norm = (out.mu_hat.cast<Complex>() - out.q_hat * mean_coords).norm();
  if (out.dropped_mean_norm > 1e-8 * (1.0 + out.mu_hat.norm())) {
    std::ostringstream msg;
    msg << "mean component of norm " << out.dropped_mean_norm
        << " lies outside the span of the estimated modes and is dropped";
    out.warnings.push_back(msg.str());
  }
  return out;
}

Matrix real_part_checked(const CMatrix& m, double rel_tol) {
  const double total = m.norm();
  const double imag = m.imag().norm();
  if (imag > rel_tol * std::max(total, 1e-300)) {
    std::ostringstream msg;
    msg << "matrix has a non-negligible imaginary part (" << imag << " of " << total << ")";
    throw NumericalError(msg.str());
  }
  return m.real();
}

}  // namespace dmdsep::dmd
