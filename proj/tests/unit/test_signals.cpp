#include <cmath>
#include <numbers>

#include "doctest.h"
#include "dmdsep/lagstats.hpp"
#include "dmdsep/rng.hpp"
#include "dmdsep/signals.hpp"
#include "oracles.hpp"

using namespace dmdsep;

TEST_CASE("gen_cosines examples") {
  const Matrix c = signals::gen_cosines({{std::numbers::pi / 2}, {0.0}}, 4);
  const double expected[] = {0, -1, 0, 1};
  for (int t = 0; t < 4; ++t) CHECK(c(t, 0) == doctest::Approx(expected[t]).epsilon(1e-15).scale(1.0));

  const Matrix ew = signals::gen_cosines({{2.0, 0.25}, {}}, 1000);
  CHECK(ew(0, 0) == std::cos(2.0));
  CHECK(ew(999, 1) == std::cos(0.25 * 1000));

  CHECK_THROWS_AS(signals::gen_cosines({{0.5, 0.5}, {}}, 10), ValidationError);
  CHECK_THROWS_AS(signals::gen_cosines({{0.5, 1.0}, {}}, 3), ValidationError);
  CHECK_THROWS_AS(signals::gen_cosines({{0.5}, {0.1, 0.2}}, 10), ValidationError);
  CHECK_THROWS_AS(signals::gen_cosines({{0.0}, {}}, 10), ValidationError);
}

TEST_CASE("gen_cosines column norms match the closed-form square sum") {
  CounterRng rng(5);
  for (int draw = 0; draw < 50; ++draw) {
    const double omega = 0.01 + rng.uniform() * (std::numbers::pi - 0.02);
    const double phi = rng.uniform() * 2.0 * std::numbers::pi;
    const Index n = 2 + static_cast<Index>(rng.uniform() * 3000);
    const Matrix c = signals::gen_cosines({{omega}, {phi}}, n);
    CHECK(c.col(0).squaredNorm() == doctest::Approx(lagstats::cosine_sq_sum(omega, phi, n)).epsilon(1e-9));
  }
}

TEST_CASE("gen_arma") {
  const Vector white = signals::gen_arma({{}, {}, 2.0}, 100000, 1);
  const double var = (white.array() - white.mean()).square().mean();
  CHECK(std::abs(var / 4.0 - 1.0) < 0.03);

  const Vector ar1 = signals::gen_arma({{0.7}, {}, 1.0}, 100000, 2);
  const Vector rho = lagstats::empirical_acf(ar1, 3);
  CHECK(rho(1) == doctest::Approx(0.7).epsilon(0.02 / 0.7));
  CHECK(std::abs(rho(2) - 0.49) < 0.03);

  const std::vector<double> yw = oracle::ar2_acf(0.3, 0.5, 4);
  const Vector ar2 = signals::gen_arma({{0.3, 0.5}, {}, 1.0}, 100000, 3);
  const Vector r2 = lagstats::empirical_acf(ar2, 4);
  for (Index t = 1; t <= 4; ++t) CHECK(std::abs(r2(t) - yw[static_cast<std::size_t>(t)]) < 0.03);

  CHECK(signals::gen_arma({{0.2, 0.7}, {}, 1.0}, 500, 9) == signals::gen_arma({{0.2, 0.7}, {}, 1.0}, 500, 9));
  CHECK(signals::arma_burn_in({{0.2, 0.7}, {}, 1.0}) == 100);
  CHECK(signals::arma_burn_in({std::vector<double>(12, 0.01), {}, 1.0}) == 120);

  const Vector ma = signals::gen_arma({{}, {0.5}, 1.0}, 100000, 4);
  CHECK(std::abs(lagstats::empirical_acf(ma, 2)(1) - 0.4) < 0.02);

  try {
    signals::gen_arma({{1.1}, {}, 1.0}, 100, 1);
    FAIL("non-stationary AR accepted");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("0.90") != std::string::npos);
  }
  CHECK_THROWS_AS(signals::gen_arma({{0.5}, {}, 0.0}, 100, 1), ValidationError);
}

TEST_CASE("ar_autocorrelation matches Yule-Walker") {
  const Vector rho = signals::ar_autocorrelation({0.2, 0.7}, 6);
  const std::vector<double> yw = oracle::ar2_acf(0.2, 0.7, 6);
  for (Index t = 0; t <= 6; ++t) CHECK(rho(t) == doctest::Approx(yw[static_cast<std::size_t>(t)]).epsilon(1e-12));
  const Vector one = signals::ar_autocorrelation({0.7}, 3);
  CHECK(one(3) == doctest::Approx(0.343));
  const std::vector<double> moduli = signals::ar_root_moduli({0.3, 0.5});
  for (double m : moduli) CHECK(m > 1.0);
}

TEST_CASE("gen_changepoint_suite structural zeros") {
  const Matrix c = signals::gen_changepoint_suite(1000, 11);
  CHECK(c.col(2).tail(500).cwiseAbs().maxCoeff() == 0.0);
  CHECK(c.col(0).tail(500).cwiseAbs().maxCoeff() == 0.0);
  CHECK(c.col(1).head(500).cwiseAbs().maxCoeff() == 0.0);
  CHECK(c.col(3).head(500).cwiseAbs().maxCoeff() == 0.0);
  CHECK(c(0, 2) == std::cos(2.0));
  CHECK(c(999, 3) == std::cos(500.0));
  const Matrix small = signals::gen_changepoint_suite(8, 1);
  CHECK(small.col(0).tail(4).isZero(0.0));
  CHECK(signals::gen_changepoint_suite(1000, 11) == c);
  CHECK_THROWS_AS(signals::gen_changepoint_suite(9, 1), ValidationError);
  CHECK_THROWS_AS(signals::gen_changepoint_suite(6, 1), ValidationError);
}

TEST_CASE("random_unit_columns") {
  const Matrix one = signals::random_unit_columns(3, 1, 1);
  CHECK(one.col(0).norm() == doctest::Approx(1.0).epsilon(1e-12));
  int small_overlap = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const Matrix q = signals::random_unit_columns(100, 2, s);
    if (std::abs(q.col(0).dot(q.col(1))) < 0.5) ++small_overlap;
  }
  CHECK(small_overlap == 1000);
  CHECK(signals::random_unit_columns(10, 3, 4) == signals::random_unit_columns(10, 3, 4));
  CHECK_THROWS_AS(signals::random_unit_columns(2, 3, 1), ValidationError);
}

TEST_CASE("assemble invariants") {
  const Matrix q = oracle::lcg_matrix(6, 3, 1);
  const Matrix c = oracle::lcg_matrix(50, 3, 2).array() + 3.0;
  Vector d(3);
  d << 1.0, 3.0, 2.0;
  const signals::SourceModel m = signals::assemble(q, d, c);
  CHECK(m.d(0) == 3.0);
  CHECK(m.d(1) == 2.0);
  CHECK(m.d(2) == 1.0);
  CHECK(m.order == std::vector<Index>{1, 2, 0});
  for (Index i = 0; i < 3; ++i) {
    CHECK(m.Q.col(i).norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.S.col(i).norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(m.S.col(i).sum()) <= 1e-10);
  }
  CHECK((m.X - m.Q * m.d.asDiagonal() * m.S.transpose()).norm() <= 1e-10);

  Matrix zero_col = c;
  zero_col.col(1).setConstant(2.0);
  CHECK_THROWS_AS(signals::assemble(q, d, zero_col), ValidationError);

  Matrix s2(4, 2);
  s2 << 1, 1, -1, 1, 1, -1, -1, -1;
  s2 /= 2.0;
  const signals::SourceModel id = signals::assemble(Matrix::Identity(2, 2), Vector::Ones(2), s2);
  CHECK((id.X - id.S.transpose()).norm() <= 1e-15);
}

TEST_CASE("assemble_natural takes scale from the data") {
  Matrix q(3, 2);
  q << 1.0 / 3, 2 / std::sqrt(5.0), 2.0 / 3, 1 / std::sqrt(5.0), 2.0 / 3, 0;
  const Matrix c = signals::gen_cosines({{2.0, 0.25}, {}}, 1000);
  const signals::SourceModel m = signals::assemble_natural(q, c);
  const Matrix raw = q * c.transpose();
  const Matrix centered = raw.colwise() - raw.rowwise().mean();
  CHECK((m.X - centered).norm() <= 1e-10 * centered.norm());
}

TEST_CASE("apply_mask") {
  const Matrix x = oracle::lcg_matrix(10, 10, 3);
  CHECK(signals::apply_mask(x, {1.0, 5}) == x);
  CHECK(signals::apply_mask(x, {1e-9, 5}).isZero(0.0));

  const Matrix big = Matrix::Constant(1000, 1000, 2.5);
  const Matrix m = signals::apply_mask(big, {0.5, 17});
  const double kept = static_cast<double>((m.array() != 0.0).count()) / 1e6;
  CHECK(std::abs(kept - 0.5) <= 0.01);
  CHECK(((m.array() == 0.0) || (m.array() == 2.5)).all());
  CHECK(signals::apply_mask(big, {0.5, 17}) == m);
  CHECK_THROWS_AS(signals::apply_mask(x, {0.0, 1}), ValidationError);
  CHECK_THROWS_AS(signals::apply_mask(x, {1.5, 1}), ValidationError);
}

TEST_CASE("audio stand-in is scaled to the unit range") {
  const Matrix c = signals::gen_audio_standin(8000);
  for (Index j = 0; j < 2; ++j) {
    CHECK(c.col(j).cwiseAbs().maxCoeff() == doctest::Approx(1.0));
    CHECK(std::abs(c.col(j).mean()) <= 1e-12);
  }
}
