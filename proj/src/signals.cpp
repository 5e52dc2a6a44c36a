#include "dmdsep/signals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "dmdsep/rng.hpp"

namespace dmdsep::signals {
namespace {

void normalize_columns_or_throw(Matrix& m, const char* what) {
  for (Index c = 0; c < m.cols(); ++c) {
    const double norm = m.col(c).norm();
    if (!(norm > 0.0)) {
      std::ostringstream msg;
      msg << what << ": column " << c << " is zero";
      throw ValidationError(msg.str());
    }
    m.col(c) /= norm;
  }
}

SourceModel finish(Matrix q, Vector d, Matrix s) {
  const Index k = q.cols();
  std::vector<Index> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return d(a) > d(b); });

  SourceModel out;
  out.Q.resize(q.rows(), k);
  out.S.resize(s.rows(), k);
  out.d.resize(k);
  for (Index i = 0; i < k; ++i) {
    const Index src = order[static_cast<std::size_t>(i)];
    out.Q.col(i) = q.col(src);
    out.S.col(i) = s.col(src);
    out.d(i) = d(src);
  }
  out.order = std::move(order);
  out.X = out.Q * out.d.asDiagonal() * out.S.transpose();
  return out;
}

Matrix centered(const Matrix& c_raw) {
  Matrix c = c_raw;
  for (Index j = 0; j < c.cols(); ++j) c.col(j).array() -= c.col(j).mean();
  return c;
}

}  // namespace

Matrix gen_cosines(const CosineSpec& spec, Index n) {
  const auto k = static_cast<Index>(spec.omegas.size());
  if (k == 0) throw ValidationError("gen_cosines: no frequencies given");
  if (!spec.phases.empty() && static_cast<Index>(spec.phases.size()) != k) {
    throw ValidationError("gen_cosines: phases must be empty or match omegas in length");
  }
  if (n < 2 * k) throw ValidationError("gen_cosines: need n >= 2k samples");
  for (Index i = 0; i < k; ++i) {
    const double w = spec.omegas[static_cast<std::size_t>(i)];
    if (!(w > 0.0 && w < std::numbers::pi)) {
      throw ValidationError("gen_cosines: every omega must lie in (0, pi)");
    }
    for (Index j = 0; j < i; ++j) {
      if (spec.omegas[static_cast<std::size_t>(j)] == w) {
        throw ValidationError("gen_cosines: duplicate frequency");
      }
    }
  }
  Matrix c(n, k);
  for (Index i = 0; i < k; ++i) {
    const double w = spec.omegas[static_cast<std::size_t>(i)];
    const double phi = spec.phases.empty() ? 0.0 : spec.phases[static_cast<std::size_t>(i)];
    for (Index t = 0; t < n; ++t) c(t, i) = std::cos(w * static_cast<double>(t + 1) + phi);
  }
  return c;
}

std::vector<double> ar_root_moduli(const std::vector<double>& ar) {
  // Roots z of 1 - a_1 z - ... - a_q z^q are reciprocals of the eigenvalues
  // of the companion matrix of mu^q - a_1 mu^{q-1} - ... - a_q.
  auto q = static_cast<Index>(ar.size());
  while (q > 0 && ar[static_cast<std::size_t>(q - 1)] == 0.0) --q;
  std::vector<double> moduli;
  if (q == 0) return moduli;
  Matrix companion = Matrix::Zero(q, q);
  for (Index j = 0; j < q; ++j) companion(0, j) = ar[static_cast<std::size_t>(j)];
  for (Index i = 1; i < q; ++i) companion(i, i - 1) = 1.0;
  const linalg::ComplexEig e = linalg::eig_nonsymmetric(companion);
  for (Index i = 0; i < e.size(); ++i) {
    const double m = std::abs(e.values(i));
    moduli.push_back(m > 0.0 ? 1.0 / m : std::numeric_limits<double>::infinity());
  }
  std::sort(moduli.begin(), moduli.end());
  return moduli;
}

Index arma_burn_in(const ArmaSpec& spec) {
  const auto order = static_cast<Index>(std::max(spec.ar.size(), spec.ma.size()));
  return std::max<Index>(100, 10 * order);
}

Vector gen_arma(const ArmaSpec& spec, Index n, std::uint64_t seed) {
  if (n < 1) throw ValidationError("gen_arma: n must be positive");
  if (!(spec.innovation_std > 0.0)) throw ValidationError("gen_arma: innovation_std must be positive");
  const std::vector<double> moduli = ar_root_moduli(spec.ar);
  if (!moduli.empty() && !(moduli.front() > 1.0)) {
    std::ostringstream msg;
    msg << "gen_arma: AR polynomial is not stationary; root moduli:";
    for (double m : moduli) msg << ' ' << m;
    throw ValidationError(msg.str());
  }

  const Index burn = arma_burn_in(spec);
  const Index total = burn + n;
  CounterRng rng(seed);
  std::vector<double> e(static_cast<std::size_t>(total));
  std::vector<double> x(static_cast<std::size_t>(total));
  for (auto& v : e) v = spec.innovation_std * rng.normal();
  for (Index t = 0; t < total; ++t) {
    double v = e[static_cast<std::size_t>(t)];
    for (std::size_t j = 0; j < spec.ar.size(); ++j) {
      const Index lag = t - 1 - static_cast<Index>(j);
      if (lag >= 0) v += spec.ar[j] * x[static_cast<std::size_t>(lag)];
    }
    for (std::size_t j = 0; j < spec.ma.size(); ++j) {
      const Index lag = t - 1 - static_cast<Index>(j);
      if (lag >= 0) v += spec.ma[j] * e[static_cast<std::size_t>(lag)];
    }
    x[static_cast<std::size_t>(t)] = v;
  }
  return Eigen::Map<const Vector>(x.data() + burn, n);
}

Vector ar_autocorrelation(const std::vector<double>& ar, Index max_lag) {
  const auto q = static_cast<Index>(ar.size());
  Vector rho = Vector::Zero(max_lag + 1);
  rho(0) = 1.0;
  if (q == 0) return rho;
  // rho(h) = sum_j a_j rho(|h - j|), h = 1..q, with rho(0) = 1.
  Matrix lhs = Matrix::Identity(q, q);
  Vector rhs = Vector::Zero(q);
  for (Index h = 1; h <= q; ++h) {
    for (Index j = 1; j <= q; ++j) {
      const double a = ar[static_cast<std::size_t>(j - 1)];
      const Index lag = std::abs(h - j);
      if (lag == 0) rhs(h - 1) += a;
      else lhs(h - 1, lag - 1) -= a;
    }
  }
  const Vector head = lhs.fullPivLu().solve(rhs);
  Vector full = Vector::Zero(std::max(max_lag, q) + 1);
  full(0) = 1.0;
  full.segment(1, q) = head;
  for (Index h = q + 1; h <= max_lag; ++h) {
    double v = 0.0;
    for (Index j = 1; j <= q; ++j) v += ar[static_cast<std::size_t>(j - 1)] * full(h - j);
    full(h) = v;
  }
  return full.head(max_lag + 1);
}

Matrix gen_changepoint_suite(Index n, std::uint64_t seed) {
  if (n < 8 || n % 2 != 0) throw ValidationError("gen_changepoint_suite: n must be even and at least 8");
  const Index half = n / 2;
  Matrix c = Matrix::Zero(n, 4);
  const ArmaSpec first{{0.2, 0.7}, {}, 1.0};
  const ArmaSpec second{{0.3, 0.5}, {}, 1.0};
  c.col(0).head(half) = gen_arma(first, half, derive_seed(seed, "changepoint/ar-first", 0));
  c.col(1).tail(half) = gen_arma(second, half, derive_seed(seed, "changepoint/ar-second", 0));
  for (Index t = 0; t < half; ++t) c(t, 2) = std::cos(2.0 * static_cast<double>(t + 1));
  for (Index t = half; t < n; ++t) c(t, 3) = std::cos(static_cast<double>(t + 1) / 2.0);
  return c;
}

Matrix gen_audio_standin(Index n) {
  if (n < 2) throw ValidationError("gen_audio_standin: n must be at least 2");
  constexpr double fs = 8000.0;
  constexpr double two_pi = 2.0 * std::numbers::pi;
  Matrix c(n, 2);
  for (Index t = 0; t < n; ++t) {
    const double sec = static_cast<double>(t) / fs;
    // Siren: 700 Hz carrier swept by +-300 Hz at 0.8 Hz.
    c(t, 0) = std::sin(two_pi * 700.0 * sec - (300.0 / 0.8) * std::cos(two_pi * 0.8 * sec));
    const double beat = std::fmod(sec, 0.5);
    const double env = std::exp(-4.0 * beat);
    c(t, 1) = env * (std::sin(two_pi * 261.63 * sec) + 0.8 * std::sin(two_pi * 329.63 * sec) +
                     0.6 * std::sin(two_pi * 392.0 * sec));
  }
  for (Index j = 0; j < 2; ++j) {
    c.col(j).array() -= c.col(j).mean();
    const double peak = c.col(j).cwiseAbs().maxCoeff();
    c.col(j) /= peak;
  }
  return c;
}

Matrix random_unit_columns(Index p, Index k, std::uint64_t seed) {
  if (k < 1 || p < 1) throw ValidationError("random_unit_columns: p and k must be positive");
  if (k > p) throw ValidationError("random_unit_columns: k must not exceed p");
  CounterRng rng(seed);
  Matrix q(p, k);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    for (Index j = 0; j < k; ++j)
      for (Index i = 0; i < p; ++i) q(i, j) = rng.normal();
    bool ok = true;
    for (Index j = 0; j < k; ++j) {
      const double norm = q.col(j).norm();
      if (!(norm > 0.0)) ok = false;
      else q.col(j) /= norm;
    }
    if (!ok) continue;
    const linalg::Svd s = linalg::svd(q);
    const double smallest = s.sigma(s.sigma.size() - 1);
    if (smallest > 0.0 && s.sigma(0) / smallest <= 1e6) return q;
  }
  throw NumericalError("random_unit_columns: could not draw a well-conditioned matrix");
}

SourceModel assemble(const Matrix& q, const Vector& d, const Matrix& c_raw) {
  const Index k = q.cols();
  if (d.size() != k || c_raw.cols() != k) {
    throw ValidationError("assemble: Q, d and C must agree on the number of sources");
  }
  if (k < 1) throw ValidationError("assemble: need at least one source");
  for (Index i = 0; i < k; ++i) {
    if (!(d(i) > 0.0)) throw ValidationError("assemble: every d_i must be positive");
  }
  linalg::require_finite(q, "assemble Q");
  linalg::require_finite(c_raw, "assemble C");
  Matrix qn = q;
  normalize_columns_or_throw(qn, "assemble Q");
  Matrix s = centered(c_raw);
  normalize_columns_or_throw(s, "assemble C (after de-meaning)");
  return finish(std::move(qn), d, std::move(s));
}

SourceModel assemble_natural(const Matrix& b, const Matrix& c_raw) {
  if (b.cols() != c_raw.cols()) {
    throw ValidationError("assemble_natural: B and C must agree on the number of sources");
  }
  const Matrix c = centered(c_raw);
  Vector d(b.cols());
  for (Index i = 0; i < b.cols(); ++i) d(i) = b.col(i).norm() * c.col(i).norm();
  for (Index i = 0; i < b.cols(); ++i) {
    if (!(d(i) > 0.0)) throw ValidationError("assemble_natural: zero column in B or C");
  }
  return assemble(b, d, c_raw);
}

Matrix apply_mask(const Matrix& x, const MaskSpec& spec) {
  if (!(spec.q > 0.0 && spec.q <= 1.0)) throw ValidationError("apply_mask: q must lie in (0, 1]");
  CounterRng rng(spec.seed);
  Matrix out = x;
  for (Index j = 0; j < x.cols(); ++j) {
    for (Index i = 0; i < x.rows(); ++i) {
      if (!(rng.uniform() < spec.q)) out(i, j) = 0.0;
    }
  }
  return out;
}

}  // namespace dmdsep::signals
