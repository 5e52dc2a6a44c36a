#pragma once

// Error functionals that respect the inherent ambiguity of source separation:
// estimated columns match the truth only up to order and sign (or phase).

#include <vector>

#include "dmdsep/linalg.hpp"

namespace dmdsep::metrics {

/// est column perm[i] is matched to truth column i after multiplication by
/// phases[i]; total_sq_error = sum_i ||phases[i] * est[perm[i]] - truth[i]||^2.
struct Alignment {
  std::vector<Index> perm;
  std::vector<Complex> phases;
  double total_sq_error = 0.0;
  /// Set when an estimated column that is complex (a conjugate-pair mode)
  /// was matched to a real truth column.
  bool degenerate = false;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Minimizing assignment for a rows x cols cost matrix (rows <= cols).
/// Returns the column assigned to each row.
std::vector<Index> solve_assignment(const Matrix& cost);

/// Optimal alignment via linear assignment on |<est_j, truth_i>|.
Alignment align_columns(const CMatrix& est, const Matrix& truth);
Alignment align_columns(const Matrix& est, const Matrix& truth);

/// Greedy alignment (repeatedly take the largest remaining |<est_j, truth_i>|).
Alignment align_columns_greedy(const CMatrix& est, const Matrix& truth);

/// Per-mode |est[perm[i]] - truth[i]|^2.
Vector eig_error(const CVector& est, const Vector& truth, const std::vector<Index>& perm);

/// Aligned squared error between unit-norm signal matrices.
double s_error(const Matrix& est, const Matrix& truth);

/// Least squares line through (log ns, log errors).
RateFit rate_fit(const std::vector<double>& ns, const std::vector<double>& errors);

/// Squared error of `est` after the alignment recorded in `a`.
double aligned_sq_error(const CMatrix& est, const Matrix& truth, const Alignment& a);

}  // namespace dmdsep::metrics
