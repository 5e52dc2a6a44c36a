#include <cmath>
#include <numeric>
#include <set>

#include "doctest.h"
#include "dmdsep/metrics.hpp"
#include "dmdsep/rng.hpp"
#include "oracles.hpp"

using namespace dmdsep;

namespace {

CMatrix random_unit_complex(Index p, Index k, unsigned long long seed) {
  const Matrix re = oracle::lcg_matrix(p, k, seed);
  const Matrix im = oracle::lcg_matrix(p, k, seed + 1000);
  CMatrix m(p, k);
  m.real() = re;
  m.imag() = im;
  for (Index j = 0; j < k; ++j) m.col(j).normalize();
  return m;
}

}  // namespace

TEST_CASE("identity and signed permutations align exactly") {
  const Matrix truth = oracle::unit_columns(oracle::lcg_matrix(5, 3, 1));
  const metrics::Alignment same = metrics::align_columns(truth, truth);
  CHECK(same.total_sq_error <= 1e-28);
  CHECK(same.perm == std::vector<Index>{0, 1, 2});
  CHECK_FALSE(same.degenerate);

  Matrix swapped(5, 3);
  swapped.col(0) = truth.col(1);
  swapped.col(1) = -truth.col(0);
  swapped.col(2) = truth.col(2);
  const metrics::Alignment a = metrics::align_columns(swapped, truth);
  CHECK(a.total_sq_error <= 1e-28);
  CHECK(a.perm == std::vector<Index>{1, 0, 2});
  CHECK(a.phases[0] == Complex(-1.0, 0.0));
}

TEST_CASE("alignment matches exhaustive enumeration") {
  const Matrix t3 = oracle::unit_columns(oracle::lcg_matrix(3, 2, 5));
  const Matrix e3 = oracle::unit_columns(oracle::lcg_matrix(3, 2, 6));
  CHECK(metrics::align_columns(e3, t3).total_sq_error == doctest::Approx(oracle::exhaustive_signs(e3, t3)).epsilon(1e-12));

  int disagreements = 0;
  for (int draw = 0; draw < 1000; ++draw) {
    const Index k = 1 + draw % 4;
    const Index p = k + draw % 3;
    const Matrix truth = oracle::unit_columns(oracle::lcg_matrix(p, k, 2 * draw + 11));
    const Matrix est = oracle::unit_columns(oracle::lcg_matrix(p, k, 2 * draw + 12));
    const double fast = metrics::align_columns(est, truth).total_sq_error;
    const double brute = oracle::exhaustive_signs(est, truth);
    if (std::abs(fast - brute) > 1e-10) ++disagreements;
    CHECK(fast >= 0.0);
    CHECK(fast <= 2.0 * static_cast<double>(k) + 1e-12);

    const CMatrix cest = random_unit_complex(p, k, 3 * draw + 7);
    const double cfast = metrics::align_columns(cest, truth).total_sq_error;
    const double cbrute = oracle::exhaustive_alignment(cest, truth);
    if (std::abs(cfast - cbrute) > 1e-10) ++disagreements;
  }
  CHECK(disagreements == 0);
}

TEST_CASE("greedy alignment agrees on near-aligned instances") {
  for (int draw = 0; draw < 200; ++draw) {
    const Index k = 1 + draw % 4;
    const Matrix truth = oracle::unit_columns(oracle::lcg_matrix(6, k, draw + 300));
    Matrix est = truth + 0.05 * oracle::lcg_matrix(6, k, draw + 600);
    est = oracle::unit_columns(est);
    std::vector<Index> order(static_cast<std::size_t>(k));
    std::iota(order.begin(), order.end(), Index{0});
    std::rotate(order.begin(), order.begin() + draw % k, order.end());
    Matrix shuffled(6, k);
    for (Index j = 0; j < k; ++j) shuffled.col(j) = ((j + draw) % 2 ? -1.0 : 1.0) * est.col(order[static_cast<std::size_t>(j)]);
    const metrics::Alignment h = metrics::align_columns(shuffled, truth);
    const metrics::Alignment g = metrics::align_columns_greedy(shuffled.cast<Complex>(), truth);
    CHECK(h.perm == g.perm);
    CHECK(h.total_sq_error == doctest::Approx(g.total_sq_error).epsilon(1e-12));
  }
}

TEST_CASE("alignment error is invariant under signed permutations of the estimate") {
  for (int draw = 0; draw < 50; ++draw) {
    const Matrix truth = oracle::unit_columns(oracle::lcg_matrix(5, 4, draw + 1));
    const Matrix est = oracle::unit_columns(oracle::lcg_matrix(5, 4, draw + 100));
    Matrix moved(5, 4);
    const std::vector<Index> perm = {2, 0, 3, 1};
    for (Index j = 0; j < 4; ++j) moved.col(j) = (j % 2 ? -1.0 : 1.0) * est.col(perm[static_cast<std::size_t>(j)]);
    CHECK(metrics::align_columns(moved, truth).total_sq_error ==
          doctest::Approx(metrics::align_columns(est, truth).total_sq_error).epsilon(1e-12));
  }
}

TEST_CASE("total_sq_error is recomputable from perm and phases") {
  const Matrix truth = oracle::unit_columns(oracle::lcg_matrix(7, 3, 42));
  const CMatrix est = random_unit_complex(7, 4, 43);
  const metrics::Alignment a = metrics::align_columns(est, truth);
  std::set<Index> used(a.perm.begin(), a.perm.end());
  CHECK(used.size() == 3);
  double total = 0.0;
  for (Index i = 0; i < 3; ++i) {
    const Complex ph = a.phases[static_cast<std::size_t>(i)];
    CHECK(std::abs(std::abs(ph) - 1.0) <= 1e-14);
    total += (ph * est.col(a.perm[static_cast<std::size_t>(i)]) - truth.col(i).cast<Complex>()).squaredNorm();
  }
  CHECK(a.total_sq_error == doctest::Approx(total).epsilon(1e-14));
  CHECK(a.degenerate);
}

TEST_CASE("alignment input validation") {
  const Matrix truth = oracle::unit_columns(oracle::lcg_matrix(4, 2, 1));
  CHECK_THROWS_AS(metrics::align_columns(Matrix(2.0 * truth), truth), ValidationError);
  CHECK_THROWS_AS(metrics::align_columns(Matrix(truth.leftCols(1)), truth), ValidationError);
  CHECK_THROWS_AS(metrics::align_columns(Matrix(truth.topRows(3)), truth), ValidationError);
}

TEST_CASE("orthogonal columns give the worst case error 2k") {
  const Matrix i4 = Matrix::Identity(4, 4);
  const Matrix est = i4.leftCols(2);
  const Matrix truth = i4.rightCols(2);
  CHECK(metrics::s_error(est, truth) == doctest::Approx(4.0));
  CHECK(metrics::s_error(truth, truth) == 0.0);
}

TEST_CASE("solve_assignment") {
  Matrix cost(3, 3);
  cost << 4, 1, 3, 2, 0, 5, 3, 2, 2;
  CHECK(metrics::solve_assignment(cost) == std::vector<Index>{1, 0, 2});
  Matrix wide(2, 4);
  wide << 9, 9, 1, 9, 9, 9, 0.5, 2;
  CHECK(metrics::solve_assignment(wide) == std::vector<Index>{2, 3});
  CHECK_THROWS_AS(metrics::solve_assignment(Matrix::Zero(3, 2)), ValidationError);
}

TEST_CASE("eig_error") {
  const Vector truth = Vector{{std::cos(0.25), std::cos(2.0)}};
  CHECK(metrics::eig_error(truth.cast<Complex>(), truth, {0, 1}).isZero(0.0));
  const double n = 1000.0;
  CVector est(2);
  est << truth(1), truth(0) + 1.0 / n;
  const Vector e = metrics::eig_error(est, truth, {1, 0});
  CHECK(e(0) == doctest::Approx(1.0 / (n * n)).epsilon(1e-6));
  CHECK(e(1) == 0.0);
  CVector c(1);
  c << Complex(0.0, 0.5);
  CHECK(metrics::eig_error(c, Vector::Zero(1), {0})(0) == doctest::Approx(0.25));
  CHECK_THROWS_AS(metrics::eig_error(est, truth, {0}), ValidationError);
  CHECK_THROWS_AS(metrics::eig_error(est, truth, {0, 2}), ValidationError);
}

TEST_CASE("rate_fit") {
  const std::vector<double> ns = {500, 1000, 2000, 4000, 8000};
  std::vector<double> errs;
  for (double n : ns) errs.push_back(7.0 / n);
  const metrics::RateFit f = metrics::rate_fit(ns, errs);
  CHECK(std::abs(f.slope + 1.0) <= 1e-10);
  CHECK(f.r2 >= 0.9999);
  CHECK(f.intercept == doctest::Approx(std::log(7.0)));

  const metrics::RateFit flat = metrics::rate_fit(ns, std::vector<double>(5, 0.3));
  CHECK(std::abs(flat.slope) <= 1e-12);

  std::vector<double> big;
  std::vector<double> loglog;
  for (double n = 1e3; n <= 1e6; n *= std::sqrt(10.0)) {
    big.push_back(n);
    loglog.push_back(std::log(std::log(n)) / n);
  }
  const double s = metrics::rate_fit(big, loglog).slope;
  CHECK(s > -1.05);
  CHECK(s < -0.85);

  std::vector<double> scaled = errs;
  for (double& e : scaled) e *= 123.0;
  CHECK(metrics::rate_fit(ns, scaled).slope == doctest::Approx(f.slope).epsilon(1e-12));

  CHECK_THROWS_AS(metrics::rate_fit({1, 2, 3}, {1, 2, 3}), ValidationError);
  CHECK_THROWS_AS(metrics::rate_fit({1, 2, 3, 4}, {1, 0, 3, 4}), ValidationError);
  CHECK_THROWS_AS(metrics::rate_fit({1, 2, 3, 4}, {1, -1, 3, 4}), ValidationError);
  CHECK_THROWS_AS(metrics::rate_fit({1, 2, 3, 4}, {1, 2, 3}), ValidationError);
}
