#include "dmdsep/metrics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace dmdsep::metrics {
namespace {

constexpr double kUnitTol = 1e-8;

void require_unit_columns(const CMatrix& m, const char* what) {
  for (Index c = 0; c < m.cols(); ++c) {
    const double norm = m.col(c).norm();
    if (std::abs(norm - 1.0) > kUnitTol) {
      std::ostringstream msg;
      msg << what << ": column " << c << " has norm " << norm << ", expected 1";
      throw ValidationError(msg.str());
    }
  }
}

// |<est_j, truth_i>| indexed (truth i, est j).
Matrix overlap(const CMatrix& est, const Matrix& truth) {
  return (truth.cast<Complex>().adjoint() * est).cwiseAbs();
}

Alignment finish(const CMatrix& est, const Matrix& truth, std::vector<Index> perm) {
  Alignment a;
  a.perm = std::move(perm);
  const Index k = truth.cols();
  a.phases.resize(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) {
    const auto col = est.col(a.perm[static_cast<std::size_t>(i)]);
    const Complex inner = col.dot(truth.col(i).cast<Complex>());  // conj(est) . truth
    const double mag = std::abs(inner);
    a.phases[static_cast<std::size_t>(i)] = mag > 0.0 ? inner / mag : Complex(1.0, 0.0);
    if (col.imag().norm() > 1e-6) a.degenerate = true;
  }
  a.total_sq_error = aligned_sq_error(est, truth, a);
  return a;
}

void check_shapes(const CMatrix& est, const Matrix& truth) {
  if (est.rows() != truth.rows()) throw ValidationError("align_columns: row counts differ");
  if (est.cols() < truth.cols()) {
    throw ValidationError("align_columns: fewer estimated columns than truth columns");
  }
  require_unit_columns(est, "align_columns estimate");
  require_unit_columns(truth.cast<Complex>(), "align_columns truth");
}

}  // namespace

std::vector<Index> solve_assignment(const Matrix& cost) {
  // Shortest augmenting path with row/column potentials, 1-based internally.
  const Index rows = cost.rows();
  const Index cols = cost.cols();
  if (rows > cols) throw ValidationError("solve_assignment: need rows <= cols");
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(rows + 1), 0.0);
  std::vector<double> v(static_cast<std::size_t>(cols + 1), 0.0);
  std::vector<Index> match(static_cast<std::size_t>(cols + 1), 0);  // column -> row
  std::vector<Index> way(static_cast<std::size_t>(cols + 1), 0);
  for (Index i = 1; i <= rows; ++i) {
    match[0] = i;
    Index j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(cols + 1), inf);
    std::vector<bool> used(static_cast<std::size_t>(cols + 1), false);
    do {
      used[static_cast<std::size_t>(j0)] = true;
      const Index i0 = match[static_cast<std::size_t>(j0)];
      double delta = inf;
      Index j1 = 0;
      for (Index j = 1; j <= cols; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (Index j = 0; j <= cols; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (match[static_cast<std::size_t>(j0)] != 0);
    do {
      const Index j1 = way[static_cast<std::size_t>(j0)];
      match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<Index> row_to_col(static_cast<std::size_t>(rows), -1);
  for (Index j = 1; j <= cols; ++j) {
    const Index i = match[static_cast<std::size_t>(j)];
    if (i > 0) row_to_col[static_cast<std::size_t>(i - 1)] = j - 1;
  }
  return row_to_col;
}

double aligned_sq_error(const CMatrix& est, const Matrix& truth, const Alignment& a) {
  double total = 0.0;
  for (Index i = 0; i < truth.cols(); ++i) {
    const CVector diff = a.phases[static_cast<std::size_t>(i)] * est.col(a.perm[static_cast<std::size_t>(i)]) -
                         truth.col(i).cast<Complex>();
    total += diff.squaredNorm();
  }
  return total;
}

Alignment align_columns(const CMatrix& est, const Matrix& truth) {
  check_shapes(est, truth);
  const Matrix score = overlap(est, truth);
  return finish(est, truth, solve_assignment(-score));
}

Alignment align_columns(const Matrix& est, const Matrix& truth) {
  return align_columns(CMatrix(est.cast<Complex>()), truth);
}

Alignment align_columns_greedy(const CMatrix& est, const Matrix& truth) {
  check_shapes(est, truth);
  Matrix score = overlap(est, truth);
  const Index k = truth.cols();
  std::vector<Index> perm(static_cast<std::size_t>(k), -1);
  for (Index step = 0; step < k; ++step) {
    Index bi = 0;
    Index bj = 0;
    score.maxCoeff(&bi, &bj);
    perm[static_cast<std::size_t>(bi)] = bj;
    score.row(bi).setConstant(-1.0);
    score.col(bj).setConstant(-1.0);
  }
  return finish(est, truth, std::move(perm));
}

Vector eig_error(const CVector& est, const Vector& truth, const std::vector<Index>& perm) {
  if (static_cast<Index>(perm.size()) != truth.size()) {
    throw ValidationError("eig_error: permutation length must match the truth");
  }
  Vector out(truth.size());
  for (Index i = 0; i < truth.size(); ++i) {
    const Index j = perm[static_cast<std::size_t>(i)];
    if (j < 0 || j >= est.size()) throw ValidationError("eig_error: permutation entry out of range");
    out(i) = std::norm(est(j) - truth(i));
  }
  return out;
}

double s_error(const Matrix& est, const Matrix& truth) {
  return align_columns(est, truth).total_sq_error;
}

RateFit rate_fit(const std::vector<double>& ns, const std::vector<double>& errors) {
  if (ns.size() != errors.size()) throw ValidationError("rate_fit: ns and errors differ in length");
  if (ns.size() < 4) throw ValidationError("rate_fit: need at least 4 grid points");
  const auto m = static_cast<Index>(ns.size());
  Vector x(m);
  Vector y(m);
  for (Index i = 0; i < m; ++i) {
    const double n = ns[static_cast<std::size_t>(i)];
    const double e = errors[static_cast<std::size_t>(i)];
    if (!(n > 0.0)) throw ValidationError("rate_fit: grid values must be positive");
    if (!(e > 0.0) || !std::isfinite(e)) throw ValidationError("rate_fit: errors must be positive and finite");
    x(i) = std::log(n);
    y(i) = std::log(e);
  }
  const double mx = x.mean();
  const double my = y.mean();
  const Vector dx = x.array() - mx;
  const Vector dy = y.array() - my;
  const double sxx = dx.squaredNorm();
  if (!(sxx > 0.0)) throw ValidationError("rate_fit: grid values must not all coincide");
  RateFit fit;
  fit.slope = dx.dot(dy) / sxx;
  fit.intercept = my - fit.slope * mx;
  const double ss_tot = dy.squaredNorm();
  const double ss_res = (dy - fit.slope * dx).squaredNorm();
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace dmdsep::metrics
