#pragma once

#include <utility>
#include <vector>

#include "fsa/banded_kernel.hpp"
#include "fsa/dense_kernel.hpp"
#include "fsa/indicators.hpp"

namespace fsa {

enum class EstimateKind { Exact, LowerBound, UpperBound };

inline std::string to_string(EstimateKind k) {
  switch (k) {
    case EstimateKind::Exact: return "exact";
    case EstimateKind::LowerBound: return "lower-bound";
    case EstimateKind::UpperBound: return "upper-bound";
  }
  return "?";
}

struct NormEstimate {
  double value = 0.0;
  bool infinite = false;
  EstimateKind kind = EstimateKind::LowerBound;
  Index window_size = 0;
  bool converged = false;
  double tolerance_used = 0.0;
  std::vector<std::pair<Index, double>> history;  // (window m, sampled value)

  ExtReal as_ext() const {
    return infinite ? ExtReal::infinity() : ExtReal::finite(value);
  }
};

/// Square window of size m anchored at the operator's corner (centered on Z).
inline Interval anchored_square_window(const OperatorDomain& d, Index m) {
  switch (d.kind) {
    case OperatorDomain::Kind::FullLine: return Interval(-m, m);
    case OperatorDomain::Kind::HalfLinePlus: return Interval(d.bound, d.bound + m - 1);
    case OperatorDomain::Kind::HalfLineMinus: return Interval(d.bound - m + 1, d.bound);
  }
  return Interval(-m, m);
}

/// Rectangular window: columns are the first m indices from the corner (all of
/// -m..m for Z), rows extended by the bandwidth w on each open side.
inline std::pair<Interval, Interval> tall_window_ranges(const OperatorDomain& d,
                                                        Index m, Index w) {
  switch (d.kind) {
    case OperatorDomain::Kind::FullLine:
      return {Interval(-m - w, m + w), Interval(-m, m)};
    case OperatorDomain::Kind::HalfLinePlus:
      return {Interval(d.bound, d.bound + m - 1 + w),
              Interval(d.bound, d.bound + m - 1)};
    case OperatorDomain::Kind::HalfLineMinus:
      return {Interval(d.bound - m + 1 - w, d.bound),
              Interval(d.bound - m + 1, d.bound)};
  }
  return {Interval(-m - w, m + w), Interval(-m, m)};
}

namespace detail {

inline std::vector<Index> window_schedule(Index m_max) {
  std::vector<Index> ms;
  for (Index m = 2; m < m_max; m *= 2) ms.push_back(m);
  if (ms.empty() || ms.back() != m_max) ms.push_back(m_max);
  return ms;
}

/// Exact sup of row sums (p=inf) or column sums (p=1) of an eventually
/// periodic band operator: the sums are themselves eventually periodic, so one
/// period beyond the center decides the sup.
inline double exact_sum_norm(const BandOperator& op, PExponent p) {
  if (op.diagonals().empty()) return 0.0;
  Index cs = 0, ce = 0, lper = 1, rper = 1;
  bool first = true;
  for (const auto& [k, seq] : op.diagonals()) {
    Index c0 = seq.center_start() - std::abs(k), c1 = seq.center_end() + std::abs(k);
    if (first) {
      cs = c0;
      ce = c1;
      first = false;
    } else {
      cs = std::min(cs, c0);
      ce = std::max(ce, c1);
    }
    lper = lcm_index(lper, seq.lp());
    rper = lcm_index(rper, seq.rp());
  }
  Index lo = cs - lper, hi = ce + rper;
  if (op.domain().kind == OperatorDomain::Kind::HalfLinePlus) {
    lo = op.domain().bound;
    hi = std::max(ce, lo) + rper;
  } else if (op.domain().kind == OperatorDomain::Kind::HalfLineMinus) {
    hi = op.domain().bound;
    lo = std::min(cs, hi) - lper;
  }
  double best = 0.0;
  for (Index i = lo; i <= hi; ++i) {
    double s = 0.0;
    for (const auto& [k, seq] : op.diagonals()) {
      // row sum at i uses entry(i, i+k); column sum at i uses entry(i-k, i).
      s += std::abs(p == PExponent::Inf ? op.entry(i, i + k) : op.entry(i - k, i));
    }
    best = std::max(best, s);
  }
  return best;
}

}  // namespace detail

/// Norm of an indicator operator.  For p in {1, inf} the sup of row/column
/// sums is exact.  For p = 2 the nondecreasing window norms ||P_m A P_m|| are
/// grown until two refinements agree to the tolerance.
inline NormEstimate indicator_norm(const BandOperator& op, PExponent p, double tol,
                                   Index m_max) {
  NormEstimate est;
  est.tolerance_used = tol;
  if (op.diagonals().empty()) {
    est.kind = EstimateKind::Exact;
    est.converged = true;
    return est;
  }
  if (p != PExponent::Two) {
    est.value = detail::exact_sum_norm(op, p);
    est.kind = EstimateKind::Exact;
    est.converged = true;
    return est;
  }
  double prev = -1.0;
  for (Index m : detail::window_schedule(m_max)) {
    Interval win = anchored_square_window(op.domain(), m);
    double v = op_norm(materialize(op, win, win), PExponent::Two);
    est.history.emplace_back(m, v);
    est.value = std::max(est.value, v);
    est.window_size = m;
    if (prev >= 0.0 && std::abs(v - prev) <= tol * std::max(1.0, v)) {
      est.converged = true;
      break;
    }
    prev = v;
  }
  est.kind = est.converged ? EstimateKind::Exact : EstimateKind::LowerBound;
  return est;
}

inline NormEstimate indicator_norm(const Indicator& ind, PExponent p, double tol,
                                   Index m_max) {
  return indicator_norm(ind.op, p, tol, m_max);
}

/// nu_m of the rectangular window at size m (p=2): exact smallest singular
/// value of A restricted to columns in the window, hence nonincreasing in m
/// and >= nu(A).
inline double rectangular_lower_norm(const BandOperator& op, Index m) {
  auto [rows, cols] = tall_window_ranges(op.domain(), m, op.bandwidth());
  return lower_norm(materialize(op, rows, cols));
}

/// Monotone lower bound for ||op^{-1}|| = 1/mu(op) through the rectangular
/// window estimators of nu(op) and nu(op*); values above the cap are reported
/// as infinity ("effectively not invertible").
inline NormEstimate indicator_inv_norm(const BandOperator& op, double tol,
                                       Index m_max) {
  if (op.p_exponent() != PExponent::Two)
    throw UnsupportedExponent("indicator_inv_norm: supported only at p=2");
  NormEstimate est;
  est.kind = EstimateKind::LowerBound;
  est.tolerance_used = tol;
  if (op.diagonals().empty()) {
    est.infinite = true;
    est.converged = true;
    return est;
  }
  BandOperator adj = adjoint(op);
  double prev = -1.0;
  for (Index m : detail::window_schedule(m_max)) {
    double mu_hat = std::min(rectangular_lower_norm(op, m),
                             rectangular_lower_norm(adj, m));
    est.history.emplace_back(m, mu_hat);
    est.window_size = m;
    if (mu_hat < 1.0 / inv_norm_cap) {
      est.infinite = true;
      est.converged = true;
      break;
    }
    est.value = 1.0 / mu_hat;
    if (prev >= 0.0 && std::abs(mu_hat - prev) <= tol * std::max(mu_hat, tol)) {
      est.converged = true;
      break;
    }
    prev = mu_hat;
  }
  return est;
}

inline NormEstimate indicator_inv_norm(const Indicator& ind, double tol,
                                       Index m_max) {
  return indicator_inv_norm(ind.op, tol, m_max);
}

/// Fixed-window rectangular estimators of mu(op - lambda I), cached for
/// repeated shifts (pseudospectrum grids, pollution attribution).  The sampled
/// value mu_hat is >= mu, so sublevel sets are inner approximations.
class ShiftedMuEstimator {
 public:
  ShiftedMuEstimator(const BandOperator& op, Index m)
      : fwd_(make_window(op, m)), adj_(make_window(adjoint(op), m)) {}

  double mu_hat(Complex lambda) const {
    return std::min(fwd_.sigma_min_shifted(lambda),
                    adj_.sigma_min_shifted(std::conj(lambda)));
  }

 private:
  static TallWindow make_window(const BandOperator& op, Index m) {
    auto [rows, cols] = tall_window_ranges(op.domain(), m, op.bandwidth());
    FiniteMatrix w = materialize(op, rows, cols);
    return TallWindow(w.values, rows.lo - cols.lo);
  }

  TallWindow fwd_, adj_;
};

inline double mu_hat(const Indicator& ind, Complex lambda, Index m) {
  return ShiftedMuEstimator(ind.op, m).mu_hat(lambda);
}

}  // namespace fsa
