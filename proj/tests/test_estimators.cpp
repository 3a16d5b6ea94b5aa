#include <catch2/catch_amalgamated.hpp>

#include "fsa/estimators.hpp"
#include "test_helpers.hpp"

using namespace fsa;
using namespace fsa::testing;

namespace {

const Indicator* member_of(const IndicatorSet& s, IndicatorKind kind, Index residue) {
  for (const auto& [r, idxs] : s.by_residue) {
    if (r != residue) continue;
    for (std::size_t i : idxs)
      if (s.members[i].kind == kind) return &s.members[i];
  }
  return nullptr;
}

}  // namespace

TEST_CASE("indicator_norm: free Jacobi center approaches 2 from below") {
  // L = S_1 + S_{-1}; the window norms 2 cos(pi/(m+2)) grow to sup |2 cos| = 2
  BandOperator l = laurent({{-1, 1.0}, {1, 1.0}});
  Indicator center{l, IndicatorKind::Center, std::nullopt, ""};
  NormEstimate est = indicator_norm(center, PExponent::Two, 1e-6, 200);
  REQUIRE(est.value < 2.0);
  REQUIRE(est.value == Catch::Approx(2.0).margin(1e-4));
  // monotone nondecreasing window norms
  for (std::size_t i = 1; i < est.history.size(); ++i)
    REQUIRE(est.history[i].second >= est.history[i - 1].second - 1e-12);
}

TEST_CASE("indicator_norm: block diagonal corner is exact at tiny windows") {
  IndicatorSet s = stab_pure(block_flip(0.3));
  const Indicator* c = member_of(s, IndicatorKind::MinusCorner, 0);
  REQUIRE(c);
  NormEstimate est = indicator_norm(*c, PExponent::Two, 1e-9, 64);
  REQUIRE(est.converged);
  REQUIRE(est.value == Catch::Approx(1.3).epsilon(1e-12));
  REQUIRE(est.window_size <= 8);
}

TEST_CASE("indicator_norm: zero operator and p in {1, inf} exact sums") {
  BandOperator zero(OperatorDomain::full(), PExponent::Two);
  NormEstimate z = indicator_norm(Indicator{zero, IndicatorKind::Center, {}, ""},
                                  PExponent::Two, 1e-9, 32);
  REQUIRE(z.value == 0.0);
  REQUIRE(z.converged);

  BandOperator l = laurent({{-1, 2.0}, {0, -1.0}, {1, 0.5}}, PExponent::Inf);
  NormEstimate inf_est = indicator_norm(Indicator{l, IndicatorKind::Center, {}, ""},
                                        PExponent::Inf, 1e-9, 32);
  REQUIRE(inf_est.kind == EstimateKind::Exact);
  REQUIRE(inf_est.value == Catch::Approx(3.5).epsilon(1e-12));

  BandOperator l1 = laurent({{-1, 2.0}, {0, -1.0}, {1, 0.5}}, PExponent::One);
  NormEstimate one_est = indicator_norm(Indicator{l1, IndicatorKind::Center, {}, ""},
                                        PExponent::One, 1e-9, 32);
  REQUIRE(one_est.value == Catch::Approx(3.5).epsilon(1e-12));

  // one-sided compression: corner rows have smaller sums than the far tail
  BandOperator half = compress(laurent({{-1, 2.0}, {1, 0.5}}, PExponent::Inf),
                               OperatorDomain::geq(0));
  NormEstimate half_est = indicator_norm(Indicator{half, IndicatorKind::MinusCorner,
                                                   {}, ""},
                                         PExponent::Inf, 1e-9, 32);
  REQUIRE(half_est.value == Catch::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("indicator_inv_norm: H of Example 4.9 gives 4") {
  IndicatorSet s = stab_composed(kappa_a_expression());
  const Indicator* h = member_of(s, IndicatorKind::MinusCorner, 1);
  REQUIRE(h);
  NormEstimate est = indicator_inv_norm(*h, 1e-9, 64);
  REQUIRE(est.converged);
  REQUIRE_FALSE(est.infinite);
  REQUIRE(est.value == Catch::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("indicator_inv_norm: one-sided shift corners flag infinity") {
  IndicatorSet s = stab_pure(shift_down());
  const Indicator* t = member_of(s, IndicatorKind::MinusCorner, 0);
  REQUIRE(t);
  // oracle: the adjoint window kills e_0, so nu_m of the adjoint is 0 at any m
  BandOperator adj = adjoint(t->op);
  auto [rows, cols] = tall_window_ranges(adj.domain(), 6, adj.bandwidth());
  Eigen::MatrixXcd w = materialize(adj, rows, cols).values;
  REQUIRE(w.col(0).norm() == 0.0);
  NormEstimate est = indicator_inv_norm(*t, 1e-9, 64);
  REQUIRE(est.infinite);
  const Indicator* tt = member_of(s, IndicatorKind::PlusCorner, 0);
  REQUIRE(indicator_inv_norm(*tt, 1e-9, 64).infinite);
}

TEST_CASE("indicator_inv_norm: center identity gives 1") {
  Indicator id{identity_on(OperatorDomain::full()), IndicatorKind::Center, {}, ""};
  NormEstimate est = indicator_inv_norm(id, 1e-9, 32);
  REQUIRE(est.converged);
  REQUIRE(est.value == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rectangular nu_m is nonincreasing in m") {
  std::vector<BandOperator> ops{block_flip(0.3),
                                laurent({{-1, 1.0}, {0, 0.3}, {1, 1.0}}),
                                compress(laurent({{-1, 2.0}, {1, 0.5}}),
                                         OperatorDomain::geq(0))};
  for (const auto& op : ops) {
    double prev = std::numeric_limits<double>::infinity();
    for (Index m : {2, 3, 4, 6, 9, 14, 21}) {
      double v = rectangular_lower_norm(op, m);
      REQUIRE(v <= prev + 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("window norms are nondecreasing and bounded by the norm estimate") {
  BandOperator f = block_flip(0.3);
  NormEstimate full = indicator_norm(Indicator{f, IndicatorKind::Center, {}, ""},
                                     PExponent::Two, 1e-10, 128);
  double prev = 0.0;
  for (Index m : {1, 2, 3, 5, 8, 13}) {
    Interval win = anchored_square_window(f.domain(), m);
    double v = op_norm(materialize(f, win, win), PExponent::Two);
    REQUIRE(v >= prev - 1e-12);
    REQUIRE(v <= full.value + 1e-10);
    prev = v;
  }
}

TEST_CASE("mu_hat of a shifted indicator matches the dense rectangular windows") {
  IndicatorSet s = stab_pure(block_flip(0.3));
  for (const auto& ind : s.members) {
    ShiftedMuEstimator est(ind.op, 12);
    for (Complex lambda : {Complex(0.3), Complex(1.0, 0.2), Complex(-0.7, -0.1)}) {
      auto [rows, cols] = tall_window_ranges(ind.op.domain(), 12, ind.op.bandwidth());
      Eigen::MatrixXcd w = materialize(ind.op, rows, cols).values;
      for (Index c = 0; c < cols.size(); ++c) {
        Index r = (cols.lo + c) - rows.lo;
        w(r, c) -= lambda;
      }
      BandOperator adj = adjoint(ind.op);
      auto [arows, acols] = tall_window_ranges(adj.domain(), 12, adj.bandwidth());
      Eigen::MatrixXcd aw = materialize(adj, arows, acols).values;
      for (Index c = 0; c < acols.size(); ++c) {
        Index r = (acols.lo + c) - arows.lo;
        aw(r, c) -= std::conj(lambda);
      }
      double dense = std::min(lower_norm(w), lower_norm(aw));
      REQUIRE(est.mu_hat(lambda) == Catch::Approx(dense).margin(1e-7));
    }
  }
}

TEST_CASE("mu_hat is an upper bound for mu on block-diagonal indicators") {
  // exact mu of C - lambda: min over block singular values
  IndicatorSet s = stab_pure(block_flip(0.3));
  const Indicator* c = member_of(s, IndicatorKind::MinusCorner, 0);
  Eigen::Matrix2cd b;
  b << 0.3, 1.0, 1.0, 0.3;
  for (Complex lambda : {Complex(0.0), Complex(1.0), Complex(0.5, 0.3)}) {
    Eigen::Matrix2cd shifted = b - lambda * Eigen::Matrix2cd::Identity();
    double exact = lower_norm(Eigen::MatrixXcd(shifted));
    double sampled = mu_hat(*c, lambda, 8);
    REQUIRE(sampled >= exact - 1e-9);
    REQUIRE(sampled == Catch::Approx(exact).margin(1e-7));
  }
}
