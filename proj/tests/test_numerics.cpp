#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "fsa/banded_kernel.hpp"
#include "fsa/dense_kernel.hpp"
#include "fsa/expression.hpp"
#include "test_helpers.hpp"

using namespace fsa;
using namespace fsa::testing;

namespace {

Eigen::MatrixXcd random_band_matrix(std::mt19937& rng, Index n, Index kl, Index ku) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = std::max<Index>(0, i - kl); j <= std::min(n - 1, i + ku); ++j)
      m(i, j) = Complex(dist(rng), dist(rng));
  return m;
}

}  // namespace

TEST_CASE("op_norm: flip block, DE block, zero matrix") {
  Eigen::MatrixXcd b(2, 2);
  b << 0.3, 1.0, 1.0, 0.3;
  REQUIRE(op_norm(b, PExponent::Two) == Catch::Approx(1.3).epsilon(1e-12));
  REQUIRE(op_norm(Eigen::MatrixXcd(mat_de()), PExponent::Two) ==
          Catch::Approx(norm_de()).epsilon(1e-12));
  REQUIRE(op_norm(Eigen::MatrixXcd::Zero(3, 3), PExponent::Two) == 0.0);
  // p = 1 and p = inf on an asymmetric window
  Eigen::MatrixXcd m(2, 2);
  m << 1.0, -2.0, 0.0, 3.0;
  REQUIRE(op_norm(m, PExponent::One) == 5.0);   // max column sum
  REQUIRE(op_norm(m, PExponent::Inf) == 3.0);   // max row sum
}

TEST_CASE("lower_norm: flip block, identity, nilpotent shift window") {
  Eigen::MatrixXcd b(2, 2);
  b << 0.3, 1.0, 1.0, 0.3;
  REQUIRE(lower_norm(b) == Catch::Approx(0.7).epsilon(1e-12));
  REQUIRE(lower_norm(Eigen::MatrixXcd::Identity(5, 5)) == Catch::Approx(1.0));
  Eigen::MatrixXcd s = window(shift_down(), 0, 2);
  REQUIRE(lower_norm(s) <= 1e-14);
  REQUIRE_THROWS_AS(lower_norm(b, PExponent::One), UnsupportedExponent);
  REQUIRE_THROWS_AS(lower_norm(Eigen::MatrixXcd::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("mu: even flip sections give 1 - mu") {
  FSExpression f = FSExpression::leaf(block_flip(0.3));
  for (Index n : {2, 4, 10}) {
    FiniteMatrix sec = finite_section(f, SectionIndex(n));
    REQUIRE(mu(sec) == Catch::Approx(0.7).epsilon(1e-12));
  }
}

TEST_CASE("mu vs dense-inverse oracle on random band windows") {
  std::mt19937 rng(777);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::MatrixXcd m = random_band_matrix(rng, 8, 2, 1);
    m += 2.0 * Eigen::MatrixXcd::Identity(8, 8);  // keep it well conditioned
    auto inv = dense_inverse(m);
    REQUIRE(inv.has_value());
    double oracle = 1.0 / op_norm(*inv, PExponent::Two);
    REQUIRE(std::abs(mu(m) - oracle) <= 1e-9 * (1.0 + op_norm(m, PExponent::Two)));
  }
}

TEST_CASE("mu on a random 5x5 window matches the explicit dense inverse") {
  std::mt19937 rng(42);
  Eigen::MatrixXcd m = random_band_matrix(rng, 5, 4, 4);
  m += 3.0 * Eigen::MatrixXcd::Identity(5, 5);
  auto inv = dense_inverse(m);
  REQUIRE(inv.has_value());
  REQUIRE(std::abs(mu(m) - 1.0 / op_norm(*inv, PExponent::Two)) <= 1e-9);
}

TEST_CASE("inv_norm: odd flip sections give max((1-mu)^-1, mu^-1)") {
  FSExpression f = FSExpression::leaf(block_flip(0.3));
  for (Index n : {3, 5, 9}) {
    FiniteMatrix sec = finite_section(f, SectionIndex(n));
    ExtReal v = inv_norm(sec, PExponent::Two);
    REQUIRE_FALSE(v.is_infinite());
    REQUIRE(v.value() == Catch::Approx(10.0 / 3.0).epsilon(1e-12));
  }
}

TEST_CASE("inv_norm: Example 4.9a even sections give N, shift sections infinity") {
  FSExpression expr = kappa_a_expression();
  FiniteMatrix even = finite_section(expr, SectionIndex(6));
  REQUIRE(inv_norm(even, PExponent::Two).value() ==
          Catch::Approx(norm_de()).epsilon(1e-12));
  FiniteMatrix shift_sec = finite_section(FSExpression::leaf(shift_down()),
                                          SectionIndex(4));
  REQUIRE(inv_norm(shift_sec, PExponent::Two).is_infinite());
  REQUIRE(inv_norm(shift_sec, PExponent::One).is_infinite());
  // singular matrix: mu = 0 and the inverse-norm flag is infinity, not a value
  REQUIRE(mu(shift_sec) <= 1e-14);
}

TEST_CASE("inv_norm at p in {1, inf} uses the explicit dense inverse") {
  Eigen::MatrixXcd m(2, 2);
  m << 2.0, 1.0, 0.0, 4.0;
  // inverse = (0.5, -0.125; 0, 0.25)
  REQUIRE(inv_norm(m, PExponent::One).value() == Catch::Approx(0.5).epsilon(1e-12));
  REQUIRE(inv_norm(m, PExponent::Inf).value() ==
          Catch::Approx(0.625).epsilon(1e-12));
}

TEST_CASE("kappa: flip table, Example 4.9a odd sections, identity") {
  FSExpression f = FSExpression::leaf(block_flip(0.3));
  REQUIRE(kappa(finite_section(f, SectionIndex(4)), PExponent::Two).value() ==
          Catch::Approx(1.3 / 0.7).epsilon(1e-11));
  FSExpression expr = kappa_a_expression();
  REQUIRE(kappa(finite_section(expr, SectionIndex(5)), PExponent::Two).value() ==
          Catch::Approx(16.0).epsilon(1e-11));
  REQUIRE(kappa(Eigen::MatrixXcd::Identity(4, 4), PExponent::Two).value() ==
          Catch::Approx(1.0));
  REQUIRE(kappa(window(shift_down(), -2, 2), PExponent::Two).is_infinite());
}

TEST_CASE("eigenvalues of flip sections cluster at {mu-1, 1, mu+1} (+ mu odd)") {
  FSExpression f = FSExpression::leaf(block_flip(0.3));
  auto evs_even = eigenvalues(finite_section(f, SectionIndex(6)));
  for (Complex ev : evs_even) {
    double d = std::min({std::abs(ev - Complex(-0.7)), std::abs(ev - Complex(1.0)),
                         std::abs(ev - Complex(1.3))});
    REQUIRE(d <= 1e-10);
  }
  auto evs_odd = eigenvalues(finite_section(f, SectionIndex(7)));
  bool has_mu = false;
  for (Complex ev : evs_odd) has_mu = has_mu || std::abs(ev - Complex(0.3)) <= 1e-10;
  REQUIRE(has_mu);
}

TEST_CASE("banded sigma_min matches dense SVD on random shifted band matrices") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> dist(-1.5, 1.5);
  for (int trial = 0; trial < 25; ++trial) {
    Index n = 5 + (trial % 4) * 12;
    Eigen::MatrixXcd m = random_band_matrix(rng, n, 2, 1);
    BandedSquare base(m);
    Complex lambda(dist(rng), dist(rng));
    double fast = sigma_min_shifted(base, lambda, 1e-10, 800);
    Eigen::MatrixXcd shifted =
        m - lambda * Eigen::MatrixXcd::Identity(n, n);
    double dense = lower_norm(shifted);
    REQUIRE(fast == Catch::Approx(dense).margin(1e-7));
  }
}

TEST_CASE("banded sigma_min detects exact singularity") {
  Eigen::MatrixXcd s = window(shift_down(), -3, 3);
  BandedSquare base(s);
  REQUIRE(sigma_min_shifted(base, Complex(0.0)) <= 1e-12);
}

TEST_CASE("tall-window sigma_min matches dense SVD under shifts") {
  std::mt19937 rng(5150);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    Index cols = 6 + (trial % 3) * 9;
    Index rows = cols + 3;
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(rows, cols);
    Index diag_offset = -1;  // diagonal of column c at window row c + 1
    for (Index r = 0; r < rows; ++r)
      for (Index c = 0; c < cols; ++c)
        if (std::abs(r - c + diag_offset) <= 2) t(r, c) = Complex(dist(rng), dist(rng));
    TallWindow win(t, diag_offset);
    Complex lambda(dist(rng), dist(rng));
    Eigen::MatrixXcd shifted = t;
    for (Index c = 0; c < cols; ++c) {
      Index r = c - diag_offset;
      if (r >= 0 && r < rows) shifted(r, c) -= lambda;
    }
    double fast = win.sigma_min_shifted(lambda, 1e-10, 800);
    double dense = lower_norm(shifted);
    REQUIRE(fast == Catch::Approx(dense).margin(2e-6));
  }
}

TEST_CASE("banded LU solves match dense solves") {
  std::mt19937 rng(99);
  Eigen::MatrixXcd m = random_band_matrix(rng, 17, 3, 2);
  m += 1.5 * Eigen::MatrixXcd::Identity(17, 17);
  BandedSquare base(m);
  BandedLU lu = base.factorize_shifted(Complex(0.2, -0.3));
  Eigen::MatrixXcd shifted = m - Complex(0.2, -0.3) * Eigen::MatrixXcd::Identity(17, 17);
  Eigen::VectorXcd b(17);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (Index i = 0; i < 17; ++i) b(i) = Complex(dist(rng), dist(rng));
  Eigen::VectorXcd x = b;
  lu.solve(x.data());
  REQUIRE((shifted * x - b).norm() <= 1e-10);
  Eigen::VectorXcd y = b;
  lu.solve_adjoint(y.data());
  REQUIRE((shifted.adjoint() * y - b).norm() <= 1e-10);
}
