#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "gblab/errors.hpp"
#include "gblab/skew.hpp"

using gblab::skew::SkewMatrix;

namespace {

std::vector<double> random_skew(int dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> a(static_cast<std::size_t>(dim) * dim, 0.0);
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      double v = u(rng);
      a[i * dim + j] = v;
      a[j * dim + i] = -v;
    }
  return a;
}

Eigen::MatrixXd as_eigen(int dim, const std::vector<double>& a) {
  Eigen::MatrixXd m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = a[i * dim + j];
  return m;
}

std::vector<double> block_diagonal(const std::vector<double>& blocks) {
  const int dim = 2 * static_cast<int>(blocks.size());
  std::vector<double> a(static_cast<std::size_t>(dim) * dim, 0.0);
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    int i = static_cast<int>(2 * k);
    a[i * dim + i + 1] = blocks[k];
    a[(i + 1) * dim + i] = -blocks[k];
  }
  return a;
}

}  // namespace

TEST_CASE("two by two pfaffian is the upper corner entry") {
  SkewMatrix a(2, {0.0, 3.5, -3.5, 0.0});
  CHECK(gblab::skew::pfaffian(a) == doctest::Approx(3.5).epsilon(1e-14));
  CHECK(gblab::skew::pfaffian_definition_sum(a) == doctest::Approx(3.5).epsilon(1e-14));
}

TEST_CASE("zero matrix has zero pfaffian") {
  SkewMatrix a(4, std::vector<double>(16, 0.0));
  CHECK(gblab::skew::pfaffian(a) == 0.0);
}

TEST_CASE("block diagonal pfaffian is the product of the block entries") {
  CHECK(gblab::skew::pfaffian(SkewMatrix(4, block_diagonal({2.0, 3.0}))) ==
        doctest::Approx(6.0).epsilon(1e-13));
  CHECK(gblab::skew::pfaffian(SkewMatrix(6, block_diagonal({2.0, 3.0, 4.0}))) ==
        doctest::Approx(24.0).epsilon(1e-13));
  // exercises the recursive path, which handles every dimension above six
  CHECK(gblab::skew::pfaffian(SkewMatrix(10, block_diagonal({1.0, 2.0, 3.0, 4.0, 5.0}))) ==
        doctest::Approx(120.0).epsilon(1e-13));
  CHECK(gblab::skew::pfaffian(SkewMatrix(12, block_diagonal({1.0, 1.0, 1.0, 1.0, 1.0, 7.0}))) ==
        doctest::Approx(7.0).epsilon(1e-13));
}

TEST_CASE("definition sum and recursion agree through dimension six") {
  std::mt19937_64 rng(11);
  for (int dim : {2, 4, 6}) {
    for (int t = 0; t < 40; ++t) {
      SkewMatrix a(dim, random_skew(dim, rng));
      double d = gblab::skew::pfaffian_definition_sum(a);
      double r = gblab::skew::pfaffian_recursive(a);
      CHECK(std::abs(d - r) <= 1e-10);
    }
  }
}

TEST_CASE("pfaffian squared equals the determinant") {
  std::mt19937_64 rng(23);
  for (int dim : {2, 4, 6, 8, 10, 12}) {
    for (int t = 0; t < 25; ++t) {
      auto entries = random_skew(dim, rng);
      double pf = gblab::skew::pfaffian(SkewMatrix(dim, entries));
      double det = as_eigen(dim, entries).determinant();
      CHECK(std::abs(pf * pf - det) <= 1e-9 * std::max(1.0, std::abs(det)));
    }
  }
}

TEST_CASE("congruence scales the pfaffian by the determinant of the factor") {
  std::mt19937_64 rng(37);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int dim = 6;
  for (int t = 0; t < 10; ++t) {
    auto entries = random_skew(dim, rng);
    double pf = gblab::skew::pfaffian(SkewMatrix(dim, entries));
    Eigen::MatrixXd b(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) b(i, j) = gauss(rng);
    Eigen::MatrixXd c = b * as_eigen(dim, entries) * b.transpose();
    c = 0.5 * (c - c.transpose().eval());  // remove rounding asymmetry
    std::vector<double> conj(dim * dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) conj[i * dim + j] = c(i, j);
    double pfc = gblab::skew::pfaffian(SkewMatrix(dim, conj));
    double expected = b.determinant() * pf;
    CHECK(std::abs(pfc - expected) <= 1e-9 * std::max(1.0, std::abs(expected)));
  }
}

TEST_CASE("swapping one frame pair flips the sign") {
  std::mt19937_64 rng(41);
  auto entries = random_skew(4, rng);
  double pf = gblab::skew::pfaffian(SkewMatrix(4, entries));
  // conjugate by the transposition (0 1)
  std::vector<int> perm{1, 0, 2, 3};
  std::vector<double> swapped(16);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) swapped[i * 4 + j] = entries[perm[i] * 4 + perm[j]];
  CHECK(gblab::skew::pfaffian(SkewMatrix(4, swapped)) ==
        doctest::Approx(-pf).epsilon(1e-12));
}

TEST_CASE("construction rejects non-skew input instead of repairing it") {
  std::vector<double> bad{0.0, 1.0, -1.0 + 5e-12, 0.0};
  CHECK_THROWS_AS(SkewMatrix(2, bad), gblab::NotSkewError);

  std::vector<double> diag{1e-6, 1.0, -1.0, 0.0};
  CHECK_THROWS_AS(SkewMatrix(2, diag), gblab::NotSkewError);

  // asymmetry below the tolerance is accepted as given
  std::vector<double> close{0.0, 1.0, -1.0 + 5e-13, 0.0};
  CHECK_NOTHROW(SkewMatrix(2, close));
}

TEST_CASE("dimension guards") {
  CHECK_THROWS_AS(SkewMatrix(0, {}), gblab::DimensionError);
  CHECK_THROWS_AS(SkewMatrix(2, {0.0, 1.0, -1.0}), gblab::DimensionError);

  SkewMatrix odd(3, {0, 1, 2, -1, 0, 3, -2, -3, 0});
  CHECK_THROWS_AS(gblab::skew::pfaffian(odd), gblab::DimensionError);

  std::mt19937_64 rng(5);
  SkewMatrix eight(8, random_skew(8, rng));
  CHECK_THROWS_AS(gblab::skew::pfaffian_definition_sum(eight), gblab::DimensionError);

  SkewMatrix fourteen(14, random_skew(14, rng));
  CHECK_THROWS_AS(gblab::skew::pfaffian_recursive(fourteen), gblab::DimensionError);
}
