#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fsa/pseudospectra.hpp"

namespace fsa {

/// The spectral quantity s under study: s(A_n) is ||A_n||, ||A_n^{-1}||,
/// kappa(A_n) or the sampled Sp_eps(A_n).  Kappa is derived and never
/// compared set-wise.
enum class Quantity { Norm, InvNorm, Kappa, PseudoSet };

inline std::string to_string(Quantity q) {
  switch (q) {
    case Quantity::Norm: return "norm";
    case Quantity::InvNorm: return "inv_norm";
    case Quantity::Kappa: return "kappa";
    case Quantity::PseudoSet: return "pseudo_set";
  }
  return "?";
}

enum class Verdict { Convergent, Divergent, Inconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Convergent: return "convergent";
    case Verdict::Divergent: return "divergent";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct IndicatorEstimate {
  std::size_t member = 0;
  NormEstimate norm;      // meaningful for Norm/Kappa
  NormEstimate inv_norm;  // meaningful for InvNorm/Kappa
};

/// Per-quantity record: sampled sequence values, indicator-side estimates and
/// maxima, per-residue values, verdicts and discrepancies.
struct AsymptoticsReport {
  Quantity quantity = Quantity::Norm;
  double epsilon = 0.0;  // PseudoSet only
  std::pair<Index, Index> n_range{1, 1};
  std::vector<Index> sampled_n;
  std::vector<ExtReal> samples;
  ExtReal sequence_limsup = ExtReal::finite(0.0);
  Index tail_start = 1;  // the limsup surrogate maxes over n >= tail_start

  std::vector<IndicatorEstimate> indicator_estimates;
  ExtReal indicator_max = ExtReal::finite(0.0);
  std::map<Index, ExtReal> per_residue;
  ExtReal residue_liminf = ExtReal::finite(0.0);
  bool all_converged = true;

  // Kappa extras (Polski sandwich and the per-residue product formula).
  ExtReal kappa_lower = ExtReal::finite(0.0);    // max over computed finite set
  ExtReal kappa_upper = ExtReal::finite(0.0);    // product of the two maxima
  ExtReal kappa_refined = ExtReal::finite(0.0);  // max_r (norm-max_r * invnorm-max_r)
  bool kappa_lower_strict = false;               // lower < sampled limsup
  bool kappa_upper_strict = false;               // refined/sampled < upper

  Verdict verdict = Verdict::Convergent;
  std::vector<Index> witness_residues;
  double discrepancy = 0.0;  // |sequence side - indicator side| (0 if both inf)
  bool stable = true;        // InvNorm: indicator-side max finite, all converged
  double tolerance = 0.0;
};

namespace detail {

inline Index tail_start_of(Index n_lo, Index n_hi) {
  // max over the tail half of the sampled range
  return n_hi - (n_hi - n_lo) / 2;
}

template <typename Value, typename Agree>
void residue_verdict(AsymptoticsReport& rep, const std::map<Index, Value>& values,
                     Agree&& agree) {
  rep.verdict = Verdict::Convergent;
  rep.witness_residues.clear();
  for (auto it = values.begin(); it != values.end(); ++it) {
    auto jt = it;
    for (++jt; jt != values.end(); ++jt) {
      if (!agree(it->second, jt->second)) {
        rep.verdict = Verdict::Divergent;
        rep.witness_residues = {it->first, jt->first};
        return;
      }
    }
  }
  if (!rep.all_converged) rep.verdict = Verdict::Inconclusive;
}

inline void fill_residue_values(
    AsymptoticsReport& rep, const IndicatorSet& stab,
    const std::function<ExtReal(const IndicatorEstimate&)>& value_of) {
  rep.indicator_max = ExtReal::finite(0.0);
  for (const auto& e : rep.indicator_estimates)
    rep.indicator_max = max(rep.indicator_max, value_of(e));
  bool first = true;
  for (const auto& [r, idxs] : stab.by_residue) {
    ExtReal v = ExtReal::finite(0.0);
    for (std::size_t mi : idxs) {
      for (const auto& e : rep.indicator_estimates)
        if (e.member == mi) v = max(v, value_of(e));
    }
    rep.per_residue[r] = v;
    rep.residue_liminf = first ? v : min(rep.residue_liminf, v);
    first = false;
  }
}

}  // namespace detail

/// limsup ||A_n|| versus max_B ||B|| over the stability indicators.
inline AsymptoticsReport limsup_norm(const FSExpression& expr, Index n_lo, Index n_hi,
                                     double tol = 1e-6, Index m_max = 200,
                                     const IndicatorSet* precomputed = nullptr) {
  if (n_lo < 1 || n_hi < n_lo)
    throw std::invalid_argument("limsup_norm: bad n range");
  AsymptoticsReport rep;
  rep.quantity = Quantity::Norm;
  rep.n_range = {n_lo, n_hi};
  rep.tolerance = tol;
  PExponent p = expr.p_exponent();
  rep.tail_start = detail::tail_start_of(n_lo, n_hi);
  for (Index n = n_lo; n <= n_hi; ++n) {
    rep.sampled_n.push_back(n);
    ExtReal v = ExtReal::finite(op_norm(finite_section(expr, SectionIndex(n)), p));
    rep.samples.push_back(v);
    if (n >= rep.tail_start) rep.sequence_limsup = max(rep.sequence_limsup, v);
  }
  IndicatorSet local;
  const IndicatorSet& stab = precomputed ? *precomputed : (local = stab_composed(expr));
  for (std::size_t i = 0; i < stab.members.size(); ++i) {
    IndicatorEstimate e;
    e.member = i;
    e.norm = indicator_norm(stab.members[i], p, tol, m_max);
    rep.all_converged = rep.all_converged && e.norm.converged;
    rep.indicator_estimates.push_back(std::move(e));
  }
  detail::fill_residue_values(rep, stab,
                              [](const IndicatorEstimate& e) { return e.norm.as_ext(); });
  detail::residue_verdict(rep, rep.per_residue, [tol](const ExtReal& a, const ExtReal& b) {
    return discrepancy(a, b) <= tol;
  });
  rep.discrepancy = discrepancy(rep.sequence_limsup, rep.indicator_max);
  return rep;
}

/// limsup ||A_n^{-1}|| versus max_B ||B^{-1}||; the sequence is stable iff the
/// indicator-side maximum is finite.
inline AsymptoticsReport limsup_inv_norm(const FSExpression& expr, Index n_lo,
                                         Index n_hi, double tol = 1e-6,
                                         Index m_max = 200,
                                         const IndicatorSet* precomputed = nullptr) {
  if (n_lo < 1 || n_hi < n_lo)
    throw std::invalid_argument("limsup_inv_norm: bad n range");
  AsymptoticsReport rep;
  rep.quantity = Quantity::InvNorm;
  rep.n_range = {n_lo, n_hi};
  rep.tolerance = tol;
  PExponent p = expr.p_exponent();
  rep.tail_start = detail::tail_start_of(n_lo, n_hi);
  rep.sequence_limsup = ExtReal::finite(0.0);
  for (Index n = n_lo; n <= n_hi; ++n) {
    rep.sampled_n.push_back(n);
    ExtReal v = inv_norm(finite_section(expr, SectionIndex(n)), p);
    rep.samples.push_back(v);
    if (n >= rep.tail_start) rep.sequence_limsup = max(rep.sequence_limsup, v);
  }
  IndicatorSet local;
  const IndicatorSet& stab = precomputed ? *precomputed : (local = stab_composed(expr));
  for (std::size_t i = 0; i < stab.members.size(); ++i) {
    IndicatorEstimate e;
    e.member = i;
    e.inv_norm = indicator_inv_norm(stab.members[i], tol, m_max);
    rep.all_converged = rep.all_converged && e.inv_norm.converged;
    rep.indicator_estimates.push_back(std::move(e));
  }
  detail::fill_residue_values(
      rep, stab, [](const IndicatorEstimate& e) { return e.inv_norm.as_ext(); });
  detail::residue_verdict(rep, rep.per_residue, [tol](const ExtReal& a, const ExtReal& b) {
    return discrepancy(a, b) <= tol;
  });
  rep.discrepancy = discrepancy(rep.sequence_limsup, rep.indicator_max);
  rep.stable = !rep.indicator_max.is_infinite() && rep.all_converged;
  return rep;
}

/// Condition-number asymptotics: the sandwich sup_B kappa(B) <= limsup
/// kappa(A_n) <= max||B|| * max||C^{-1}||, plus the per-residue refinement
/// limsup kappa = max_r (norm-max over Stab_r) * (invnorm-max over Stab_r).
/// The lower bound is a max over the computed finite set; whether the paper's
/// sup is attained there is open.
inline AsymptoticsReport limsup_kappa(const FSExpression& expr, Index n_lo, Index n_hi,
                                      double tol = 1e-6, Index m_max = 200,
                                      const IndicatorSet* precomputed = nullptr) {
  if (n_lo < 1 || n_hi < n_lo)
    throw std::invalid_argument("limsup_kappa: bad n range");
  AsymptoticsReport rep;
  rep.quantity = Quantity::Kappa;
  rep.n_range = {n_lo, n_hi};
  rep.tolerance = tol;
  PExponent p = expr.p_exponent();
  rep.tail_start = detail::tail_start_of(n_lo, n_hi);
  rep.sequence_limsup = ExtReal::finite(0.0);
  for (Index n = n_lo; n <= n_hi; ++n) {
    rep.sampled_n.push_back(n);
    ExtReal v = kappa(finite_section(expr, SectionIndex(n)), p);
    rep.samples.push_back(v);
    if (n >= rep.tail_start) rep.sequence_limsup = max(rep.sequence_limsup, v);
  }
  IndicatorSet local;
  const IndicatorSet& stab = precomputed ? *precomputed : (local = stab_composed(expr));
  ExtReal norm_max = ExtReal::finite(0.0), inv_max = ExtReal::finite(0.0);
  std::map<Index, ExtReal> norm_r, inv_r;
  for (std::size_t i = 0; i < stab.members.size(); ++i) {
    IndicatorEstimate e;
    e.member = i;
    e.norm = indicator_norm(stab.members[i], p, tol, m_max);
    e.inv_norm = indicator_inv_norm(stab.members[i], tol, m_max);
    rep.all_converged = rep.all_converged && e.norm.converged && e.inv_norm.converged;
    rep.kappa_lower = max(rep.kappa_lower, e.norm.as_ext() * e.inv_norm.as_ext());
    norm_max = max(norm_max, e.norm.as_ext());
    inv_max = max(inv_max, e.inv_norm.as_ext());
    rep.indicator_estimates.push_back(std::move(e));
  }
  // Per-residue maxima of each factor.
  for (const auto& [r, idxs] : stab.by_residue) {
    ExtReal nr = ExtReal::finite(0.0), ir = ExtReal::finite(0.0);
    for (std::size_t mi : idxs) {
      nr = max(nr, rep.indicator_estimates[mi].norm.as_ext());
      ir = max(ir, rep.indicator_estimates[mi].inv_norm.as_ext());
    }
    norm_r[r] = nr;
    inv_r[r] = ir;
  }
  rep.kappa_upper = norm_max * inv_max;
  bool first = true;
  for (const auto& [r, nr] : norm_r) {
    ExtReal v = nr * inv_r[r];
    rep.per_residue[r] = v;
    rep.kappa_refined = first ? v : max(rep.kappa_refined, v);
    rep.residue_liminf = first ? v : min(rep.residue_liminf, v);
    first = false;
  }
  rep.indicator_max = rep.kappa_refined;
  detail::residue_verdict(rep, rep.per_residue, [tol](const ExtReal& a, const ExtReal& b) {
    return discrepancy(a, b) <= tol;
  });
  rep.discrepancy = discrepancy(rep.sequence_limsup, rep.kappa_refined);
  rep.kappa_lower_strict =
      !rep.sequence_limsup.is_infinite() &&
      rep.kappa_lower.as_double() < rep.sequence_limsup.as_double() - tol;
  rep.kappa_upper_strict =
      !rep.kappa_upper.is_infinite()
          ? rep.kappa_refined.as_double() < rep.kappa_upper.as_double() - tol
          : !rep.kappa_refined.is_infinite();
  return rep;
}

/// Everything the pseudospectral pipeline produces for one epsilon: per-n
/// grids and sublevel sets, their operational limsup/liminf, the indicator
/// union, and the Hausdorff discrepancies.
struct PseudospectraReport {
  double epsilon = 0.0;
  GridBox box;
  Index nx = 0, ny = 0;
  std::vector<Index> sampled_n;
  std::vector<PseudospectrumGrid> sequence_grids;   // one per sampled n
  std::vector<PointSet> sequence_sets;              // sublevel sets at epsilon
  PointSet sequence_limsup, sequence_liminf;
  PseudospectrumGrid indicator_union;               // pointwise min over members
  std::vector<PseudospectrumGrid> indicator_grids;  // one per member
  PointSet indicator_set;
  std::map<Index, PointSet> per_residue_sets;
  double hausdorff_discrepancy = 0.0;  // d_H(sequence limsup, indicator union)
  bool comparable = true;              // false if exactly one side is empty
  bool hausdorff_convergent = true;    // d_H(limsup, liminf) <= tolerance
  double set_tolerance = 0.0;          // 2 * grid cell diagonal
  bool inner_approximation = true;
  Index indicator_window = 0;
};

/// Picks an even number (>= 2) of section indices from the tail of the range.
inline std::vector<Index> pseudo_sample_indices(Index n_lo, Index n_hi,
                                                Index max_samples = 8) {
  Index count = std::min<Index>(max_samples, n_hi - n_lo + 1);
  if (count < 2) count = std::min<Index>(2, n_hi - n_lo + 1);
  if (count % 2 == 1 && count > 1) --count;
  std::vector<Index> ns;
  for (Index n = n_hi - count + 1; n <= n_hi; ++n) ns.push_back(n);
  return ns;
}

inline PseudospectraReport limsup_pseudospectrum(
    const FSExpression& expr, double epsilon, const GridBox& box, Index nx, Index ny,
    Index n_lo, Index n_hi, Index indicator_window = 24, Index threads = 0,
    Index max_samples = 8, const IndicatorSet* precomputed = nullptr) {
  if (expr.p_exponent() != PExponent::Two)
    throw UnsupportedExponent("limsup_pseudospectrum: supported only at p=2");
  PseudospectraReport rep;
  rep.epsilon = epsilon;
  rep.box = box;
  rep.nx = nx;
  rep.ny = ny;
  rep.indicator_window = indicator_window;
  rep.sampled_n = pseudo_sample_indices(n_lo, n_hi, max_samples);
  for (Index n : rep.sampled_n) {
    rep.sequence_grids.push_back(pseudo_grid(finite_section(expr, SectionIndex(n)),
                                             box, nx, ny, {epsilon}, threads));
    rep.sequence_sets.push_back(rep.sequence_grids.back().sublevel(epsilon));
  }
  rep.set_tolerance = 2.0 * rep.sequence_grids.front().cell_diagonal();
  rep.sequence_limsup = set_limsup(rep.sequence_sets, rep.set_tolerance);
  rep.sequence_liminf = set_liminf(rep.sequence_sets, rep.set_tolerance);

  IndicatorSet local;
  const IndicatorSet& stab = precomputed ? *precomputed : (local = stab_composed(expr));
  std::vector<const PseudospectrumGrid*> ptrs;
  for (const auto& member : stab.members) {
    rep.indicator_grids.push_back(
        pseudo_grid(member, box, nx, ny, {epsilon}, indicator_window, threads));
  }
  for (const auto& g : rep.indicator_grids) ptrs.push_back(&g);
  rep.indicator_union = grid_pointwise_min(ptrs);
  rep.indicator_set = rep.indicator_union.sublevel(epsilon);
  for (const auto& [r, idxs] : stab.by_residue) {
    std::vector<const PseudospectrumGrid*> rp;
    for (std::size_t mi : idxs) rp.push_back(&rep.indicator_grids[mi]);
    rep.per_residue_sets[r] = grid_pointwise_min(rp).sublevel(epsilon);
  }

  if (rep.sequence_limsup.empty() && rep.indicator_set.empty()) {
    rep.hausdorff_discrepancy = 0.0;
  } else if (rep.sequence_limsup.empty() || rep.indicator_set.empty()) {
    rep.comparable = false;
    rep.hausdorff_discrepancy = std::numeric_limits<double>::infinity();
  } else {
    rep.hausdorff_discrepancy =
        hausdorff_distance(rep.sequence_limsup, rep.indicator_set);
  }
  if (rep.sequence_limsup.empty() && rep.sequence_liminf.empty())
    rep.hausdorff_convergent = true;
  else if (rep.sequence_limsup.empty() || rep.sequence_liminf.empty())
    rep.hausdorff_convergent = false;
  else
    rep.hausdorff_convergent =
        hausdorff_distance(rep.sequence_limsup, rep.sequence_liminf) <=
        rep.set_tolerance;
  return rep;
}

/// Convergence of s(A_n) via minimizing sequences: in the eventually-periodic
/// class the arithmetic progressions mod the leaf-period lcm are minimizing,
/// so s converges iff all residue classes give the same indicator-side value
/// (Hausdorff-agree, for sets).
inline AsymptoticsReport convergence_verdict(const FSExpression& expr, Quantity q,
                                             double tol = 1e-6, Index m_max = 200,
                                             double epsilon = 0.05,
                                             const GridBox* box = nullptr, Index nx = 81,
                                             Index ny = 81, Index indicator_window = 24,
                                             Index threads = 0) {
  IndicatorSet stab = stab_composed(expr);
  switch (q) {
    case Quantity::Norm: {
      AsymptoticsReport rep = limsup_norm(expr, 1, 2, tol, m_max, &stab);
      rep.sampled_n.clear();
      rep.samples.clear();
      return rep;
    }
    case Quantity::InvNorm: {
      AsymptoticsReport rep = limsup_inv_norm(expr, 1, 2, tol, m_max, &stab);
      rep.sampled_n.clear();
      rep.samples.clear();
      return rep;
    }
    case Quantity::Kappa: {
      AsymptoticsReport rep = limsup_kappa(expr, 1, 2, tol, m_max, &stab);
      rep.sampled_n.clear();
      rep.samples.clear();
      return rep;
    }
    case Quantity::PseudoSet: {
      if (!box)
        throw std::invalid_argument("convergence_verdict: PseudoSet needs a grid box");
      AsymptoticsReport rep;
      rep.quantity = Quantity::PseudoSet;
      rep.epsilon = epsilon;
      rep.tolerance = tol;
      std::vector<PseudospectrumGrid> grids;
      for (const auto& member : stab.members)
        grids.push_back(
            pseudo_grid(member, *box, nx, ny, {epsilon}, indicator_window, threads));
      std::map<Index, PointSet> sets;
      for (const auto& [r, idxs] : stab.by_residue) {
        std::vector<const PseudospectrumGrid*> rp;
        for (std::size_t mi : idxs) rp.push_back(&grids[mi]);
        sets[r] = grid_pointwise_min(rp).sublevel(epsilon);
      }
      double tol_h = 2.0 * grids.front().cell_diagonal();
      detail::residue_verdict(rep, sets, [tol_h](const PointSet& a, const PointSet& b) {
        if (a.empty() && b.empty()) return true;
        if (a.empty() || b.empty()) return false;
        return hausdorff_distance(a, b) <= tol_h;
      });
      return rep;
    }
  }
  throw std::logic_error("convergence_verdict: unreachable");
}

/// Spectral-pollution attribution at lambda: evaluates the rectangular
/// mu-estimator for every stability indicator and returns the culprits with
/// mu_hat <= eps, sorted ascending.  If only the Center qualifies, lambda is a
/// genuine spectrum approximation.
struct PollutionEntry {
  std::size_t member = 0;
  double mu_hat = 0.0;
};

struct PollutionReport {
  Complex lambda;
  double epsilon = 0.0;
  Index window = 0;
  std::vector<PollutionEntry> culprits;    // mu_hat <= eps, ascending
  std::vector<PollutionEntry> all_values;  // every member, ascending
  bool genuine = false;  // only the Center indicator qualifies
};

inline PollutionReport pollution_attribution(const FSExpression& expr, Complex lambda,
                                             double eps, Index window_m,
                                             const IndicatorSet* precomputed = nullptr) {
  if (expr.p_exponent() != PExponent::Two)
    throw UnsupportedExponent("pollution_attribution: supported only at p=2");
  IndicatorSet local;
  const IndicatorSet& stab = precomputed ? *precomputed : (local = stab_composed(expr));
  PollutionReport rep;
  rep.lambda = lambda;
  rep.epsilon = eps;
  rep.window = window_m;
  for (std::size_t i = 0; i < stab.members.size(); ++i) {
    double v = mu_hat(stab.members[i], lambda, window_m);
    rep.all_values.push_back({i, v});
  }
  std::stable_sort(rep.all_values.begin(), rep.all_values.end(),
                   [](const PollutionEntry& a, const PollutionEntry& b) {
                     return a.mu_hat < b.mu_hat;
                   });
  for (const auto& e : rep.all_values)
    if (e.mu_hat <= eps) rep.culprits.push_back(e);
  rep.genuine = rep.culprits.size() == 1 &&
                stab.members[rep.culprits.front().member].kind == IndicatorKind::Center;
  return rep;
}

}  // namespace fsa
