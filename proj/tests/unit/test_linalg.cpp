#include <cmath>

#include "doctest.h"
#include "dmdsep/linalg.hpp"
#include "oracles.hpp"

using namespace dmdsep;

namespace {

Matrix mat(Index r, Index c, std::initializer_list<double> v) {
  Matrix m(r, c);
  auto it = v.begin();
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) m(i, j) = *it++;
  return m;
}

double max_eig_residual(const Matrix& a, const linalg::ComplexEig& e) {
  double worst = 0.0;
  const CMatrix ac = a.cast<Complex>();
  for (Index i = 0; i < e.size(); ++i) {
    worst = std::max(worst, (ac * e.vectors.col(i) - e.values(i) * e.vectors.col(i)).norm());
  }
  return worst;
}

}  // namespace

TEST_CASE("svd of small fixed matrices") {
  CHECK(linalg::svd(Matrix::Identity(2, 2)).sigma.isApprox(Vector::Ones(2)));
  const linalg::Svd z = linalg::svd(Matrix::Zero(2, 3));
  CHECK(z.sigma.size() == 2);
  CHECK(z.sigma.norm() == 0.0);
  CHECK(z.rank == 0);

  // A^T A = [[25, 20], [20, 25]] has eigenvalues 45 and 5.
  const Matrix a = mat(2, 2, {3, 0, 4, 5});
  const Matrix ata = a.transpose() * a;
  const auto roots = oracle::eig2x2(ata);
  const linalg::Svd s = linalg::svd(a);
  CHECK(s.sigma(0) == doctest::Approx(std::sqrt(roots[0].real())).epsilon(1e-14));
  CHECK(s.sigma(1) == doctest::Approx(std::sqrt(roots[1].real())).epsilon(1e-14));
  CHECK(s.sigma(0) == doctest::Approx(std::sqrt(45.0)));
  CHECK(s.sigma(1) == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("svd invariants on random shapes") {
  for (int trial = 0; trial < 40; ++trial) {
    const Index r = 1 + trial % 9 + (trial % 3) * 10;
    const Index c = 1 + (trial * 7) % 13 + (trial % 2) * 12;
    const Matrix a = oracle::lcg_matrix(r, c, 100 + trial);
    const linalg::Svd s = linalg::svd(a);
    const Index m = std::min(r, c);
    CHECK(s.sigma.size() == m);
    for (Index i = 1; i < m; ++i) CHECK(s.sigma(i) <= s.sigma(i - 1));
    CHECK((s.U.transpose() * s.U - Matrix::Identity(m, m)).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((s.V.transpose() * s.V - Matrix::Identity(m, m)).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((s.reconstruct() - a).norm() <= 1e-8 * (1.0 + a.norm()));
  }
}

TEST_CASE("svd on a very tall matrix uses the same contract") {
  const Matrix a = oracle::lcg_matrix(400, 7, 3);
  const linalg::Svd s = linalg::svd(a);
  CHECK((s.reconstruct() - a).norm() <= 1e-10 * a.norm());
  CHECK((s.U.transpose() * s.U - Matrix::Identity(7, 7)).cwiseAbs().maxCoeff() <= 1e-10);
  const linalg::Svd w = linalg::svd(a.transpose());
  CHECK((w.sigma - s.sigma).norm() <= 1e-10 * s.sigma(0));
}

TEST_CASE("svd rejects non-finite input") {
  Matrix a = Matrix::Ones(2, 2);
  a(1, 0) = std::nan("");
  CHECK_THROWS_AS(linalg::svd(a), ValidationError);
}

TEST_CASE("truncated_svd") {
  const linalg::Svd full = linalg::truncated_svd(Matrix::Identity(3, 3), 3);
  CHECK((full.reconstruct(3) - Matrix::Identity(3, 3)).norm() <= 1e-14);

  Vector u(4);
  u << 1, -2, 0.5, 3;
  Vector v(3);
  v << 0.3, 1, -1;
  const Matrix outer = u * v.transpose();
  CHECK((linalg::truncated_svd(outer, 1).reconstruct(1) - outer).norm() <= 1e-10);

  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 3, 2, 1;
  const linalg::Svd t = linalg::truncated_svd(d, 2);
  CHECK((d - t.reconstruct(2)).norm() == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(linalg::truncated_svd(d, 0), ValidationError);
  CHECK_THROWS_AS(linalg::truncated_svd(d, 4), ValidationError);
}

TEST_CASE("truncated_svd is the best rank-k approximation") {
  const Matrix a = oracle::lcg_matrix(12, 9, 17);
  const linalg::Svd s = linalg::svd(a);
  for (Index k = 1; k <= 9; ++k) {
    const double residual = (a - linalg::truncated_svd(a, k).reconstruct(k)).norm();
    CHECK(residual == doctest::Approx(s.sigma.tail(9 - k).norm()).epsilon(1e-10));
  }
}

TEST_CASE("pinv examples") {
  CHECK((linalg::pinv(Matrix(Matrix::Identity(4, 4))) - Matrix::Identity(4, 4)).norm() <= 1e-14);
  const Matrix z = linalg::pinv(Matrix(Matrix::Zero(2, 3)));
  CHECK(z.rows() == 3);
  CHECK(z.cols() == 2);
  CHECK(z.norm() == 0.0);

  const Matrix row = mat(1, 2, {1, 2});
  const Matrix expected = row.transpose() * (row * row.transpose()).inverse();
  const Matrix got = linalg::pinv(row);
  CHECK((got - expected).norm() <= 1e-14);
  CHECK(got(0, 0) == doctest::Approx(0.2));
  CHECK(got(1, 0) == doctest::Approx(0.4));
  CHECK_THROWS_AS(linalg::pinv(row, -1.0), ValidationError);
}

TEST_CASE("pinv satisfies the Moore-Penrose conditions") {
  for (int trial = 0; trial < 100; ++trial) {
    const Index r = 1 + (trial * 5) % 20;
    const Index c = 1 + (trial * 11) % 30;
    Matrix a = oracle::lcg_matrix(r, c, 500 + trial);
    if (trial % 4 == 0 && std::min(r, c) > 2) {
      // rank-deficient: product of thin factors
      a = oracle::lcg_matrix(r, 2, trial) * oracle::lcg_matrix(2, c, trial + 1);
    }
    CHECK(oracle::moore_penrose_violation(a, linalg::pinv(a)) <= 1e-8);
  }
  const CMatrix ca = oracle::lcg_matrix(5, 3, 1).cast<Complex>() + Complex(0, 1) * oracle::lcg_matrix(5, 3, 2).cast<Complex>();
  CHECK(oracle::moore_penrose_violation(ca, linalg::pinv(ca)) <= 1e-8);
}

TEST_CASE("eig_nonsymmetric examples") {
  Matrix d = Matrix::Zero(2, 2);
  d.diagonal() << 1, 2;
  const linalg::ComplexEig e = linalg::eig_nonsymmetric(d);
  CHECK(e.values(0).real() == doctest::Approx(2.0));
  CHECK(e.values(1).real() == doctest::Approx(1.0));
  CHECK(std::abs(e.vectors(1, 0) - Complex(1, 0)) <= 1e-14);
  CHECK(std::abs(e.vectors(0, 1) - Complex(1, 0)) <= 1e-14);

  const Matrix rot = mat(2, 2, {0, 1, -1, 0});
  const linalg::ComplexEig r = linalg::eig_nonsymmetric(rot);
  CHECK(std::abs(r.values(0) - Complex(0, 1)) <= 1e-12);
  CHECK(std::abs(r.values(1) - Complex(0, -1)) <= 1e-12);
  CHECK(max_eig_residual(rot, r) <= 1e-10);

  // Companion matrix of lambda^2 - lambda - 0.25.
  const Matrix comp = mat(2, 2, {1, 0.25, 1, 0});
  const linalg::ComplexEig c = linalg::eig_nonsymmetric(comp);
  CHECK(c.values(0).real() == doctest::Approx((1 + std::sqrt(2.0)) / 2).epsilon(1e-12));
  CHECK(c.values(1).real() == doctest::Approx((1 - std::sqrt(2.0)) / 2).epsilon(1e-12));
  const auto roots = oracle::eig2x2(comp);
  CHECK(std::abs(c.values(0) - roots[0]) <= 1e-10);
}

TEST_CASE("eig_nonsymmetric invariants on random matrices") {
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 1 + (trial * 7) % 50;
    const Matrix a = oracle::lcg_matrix(n, n, 900 + trial);
    const linalg::ComplexEig e = linalg::eig_nonsymmetric(a);
    CHECK(max_eig_residual(a, e) <= 1e-8 * (1.0 + a.norm()));
    for (Index i = 0; i < n; ++i) {
      const auto col = e.vectors.col(i);
      CHECK(col.norm() == doctest::Approx(1.0).epsilon(1e-12));
      Index arg = 0;
      col.cwiseAbs().maxCoeff(&arg);
      CHECK(col(arg).real() > 0.0);
      CHECK(std::abs(col(arg).imag()) <= 1e-12);
      if (i > 0) CHECK(std::abs(e.values(i)) <= std::abs(e.values(i - 1)) + 1e-12);
      // conjugate partners sit next to each other
      if (e.values(i).imag() > 1e-12) {
        REQUIRE(i + 1 < n);
        CHECK(std::abs(e.values(i + 1) - std::conj(e.values(i))) <= 1e-10 * (1 + std::abs(e.values(i))));
      }
    }
  }
}

TEST_CASE("eig_nonsymmetric is deterministic") {
  const Matrix a = oracle::lcg_matrix(25, 25, 4);
  const linalg::ComplexEig e1 = linalg::eig_nonsymmetric(a);
  const linalg::ComplexEig e2 = linalg::eig_nonsymmetric(a);
  CHECK(e1.values == e2.values);
  CHECK(e1.vectors == e2.vectors);
}

TEST_CASE("eig_symmetric") {
  CHECK(linalg::eig_symmetric(Matrix::Identity(2, 2)).values.isApprox(Vector::Ones(2)));
  const linalg::SymmetricEig e = linalg::eig_symmetric(mat(2, 2, {2, 1, 1, 2}));
  CHECK(e.values(0) == doctest::Approx(3.0));
  CHECK(e.values(1) == doctest::Approx(1.0));
  Matrix d = Matrix::Zero(2, 2);
  d.diagonal() << 5, -1;
  const linalg::SymmetricEig de = linalg::eig_symmetric(d);
  CHECK(de.values(0) == doctest::Approx(5.0));
  CHECK(de.values(1) == doctest::Approx(-1.0));

  const Matrix g = oracle::lcg_matrix(8, 8, 2);
  const Matrix s = g + g.transpose();
  const linalg::SymmetricEig se = linalg::eig_symmetric(s);
  CHECK((se.vectors * se.values.asDiagonal() * se.vectors.transpose() - s).norm() <= 1e-8);
  CHECK((se.vectors.transpose() * se.vectors - Matrix::Identity(8, 8)).norm() <= 1e-10);
  CHECK_THROWS_AS(linalg::eig_symmetric(mat(2, 2, {1, 2, 0, 1})), ValidationError);
}

TEST_CASE("inv_sqrt_spd") {
  CHECK((linalg::inv_sqrt_spd(Matrix::Identity(3, 3)) - Matrix::Identity(3, 3)).norm() <= 1e-14);
  Matrix d = Matrix::Zero(2, 2);
  d.diagonal() << 4, 9;
  const Matrix b = linalg::inv_sqrt_spd(d);
  CHECK(b(0, 0) == doctest::Approx(0.5));
  CHECK(b(1, 1) == doctest::Approx(1.0 / 3.0));
  CHECK(std::abs(b(0, 1)) <= 1e-15);

  const Matrix a = mat(2, 2, {2, 1, 1, 2});
  const Matrix ba = linalg::inv_sqrt_spd(a);
  CHECK((ba * a * ba - Matrix::Identity(2, 2)).norm() <= 1e-10);

  try {
    linalg::inv_sqrt_spd(mat(2, 2, {1, 2, 2, 1}));
    FAIL("indefinite matrix accepted");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("-1") != std::string::npos);
  }
}

TEST_CASE("numerical_rank cutoff") {
  Vector s(3);
  s << 1.0, 1e-3, 1e-14;
  CHECK(linalg::numerical_rank(s, 3, 3) == 2);
  CHECK(linalg::numerical_rank(s, 3, 3, 0.0) == 3);
  CHECK(linalg::numerical_rank(Vector::Zero(2), 2, 2) == 0);
}
