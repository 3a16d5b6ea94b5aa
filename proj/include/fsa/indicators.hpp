#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fsa/expression.hpp"
#include "fsa/limit_ops.hpp"

namespace fsa {

/// Where a stability indicator comes from.  Center is the pointwise limit of
/// A_n itself (domain Z).  PlusCorner is the limit of S_{-n} A_n S_n, built
/// from Lim_+ of the leaves and compressed to ..0 (the lower-right corner of
/// the growing matrices).  MinusCorner is the limit of S_n A_n S_{-n}, built
/// from Lim_- and compressed to 0.. (the top-left corner).
enum class IndicatorKind { Center, PlusCorner, MinusCorner };

inline std::string to_string(IndicatorKind k) {
  switch (k) {
    case IndicatorKind::Center: return "center";
    case IndicatorKind::PlusCorner: return "plus-corner";
    case IndicatorKind::MinusCorner: return "minus-corner";
  }
  return "?";
}

struct Indicator {
  BandOperator op;
  IndicatorKind kind = IndicatorKind::Center;
  std::optional<Index> residue;  // nullopt = all residue classes
  std::string provenance;
};

/// Stab(A_n): deduplicated stability indicators with their residue structure.
/// members[by_residue[r][i]] are the indicators of the subsequence h = r (mod
/// modulus); the Center member appears in every class.  `raw` keeps the full
/// pre-deduplication list for reporting.
struct IndicatorSet {
  Index modulus = 1;
  std::vector<Indicator> members;
  std::map<Index, std::vector<std::size_t>> by_residue;
  std::vector<Indicator> raw;

  std::size_t insert(Indicator ind, Index residue_class) {
    raw.push_back(ind);
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (members[i].kind == ind.kind && structurally_equal(members[i].op, ind.op)) {
        attach(i, residue_class);
        return i;
      }
    }
    members.push_back(std::move(ind));
    attach(members.size() - 1, residue_class);
    return members.size() - 1;
  }

  void attach(std::size_t member_index, Index residue_class) {
    auto& v = by_residue[residue_class];
    for (std::size_t i : v)
      if (i == member_index) return;
    v.push_back(member_index);
  }
};

namespace detail {

inline IndicatorSet stab_over_residues(const FSExpression& expr, Index modulus,
                                       const std::vector<Index>& residues,
                                       Index bandwidth_cap) {
  IndicatorSet set;
  set.modulus = modulus;
  Indicator center{pointwise_limit(expr, bandwidth_cap), IndicatorKind::Center,
                   std::nullopt, "pointwise limit of A_n"};
  for (Index r : residues) {
    std::size_t ci = set.insert(center, r);
    set.members[ci].residue = std::nullopt;

    BandOperator plus = evaluate_with_leaves(
        expr,
        [&](const BandOperator& leaf) {
          return compress(limit_along(leaf, modulus, r, Direction::Plus),
                          OperatorDomain::leq(0));
        },
        bandwidth_cap);
    set.insert({std::move(plus), IndicatorKind::PlusCorner, r,
                "leaves -> Lim+ along n = " + std::to_string(r) + " (mod " +
                    std::to_string(modulus) + "), compressed to ..0"},
               r);

    BandOperator minus = evaluate_with_leaves(
        expr,
        [&](const BandOperator& leaf) {
          return compress(limit_along(leaf, modulus, r, Direction::Minus),
                          OperatorDomain::geq(0));
        },
        bandwidth_cap);
    set.insert({std::move(minus), IndicatorKind::MinusCorner, r,
                "leaves -> Lim- along n = " + std::to_string(r) + " (mod " +
                    std::to_string(modulus) + "), compressed to 0.."},
               r);
  }
  return set;
}

inline Index expression_modulus(const FSExpression& expr) {
  Index rho = 1;
  expr.for_each_leaf([&rho](const BandOperator& leaf) {
    rho = lcm_index(rho, stab_modulus(leaf));
  });
  return rho;
}

}  // namespace detail

/// Stab of the composed finite sections of expr: the pointwise limit plus, per
/// residue class r mod the leaf-period lcm, the two corner limits with every
/// leaf sampled along the same subsequence h = r (mod lcm).
inline IndicatorSet stab_composed(const FSExpression& expr, Index bandwidth_cap = 64) {
  Index rho = detail::expression_modulus(expr);
  std::vector<Index> residues;
  for (Index r = 0; r < rho; ++r) residues.push_back(r);
  return detail::stab_over_residues(expr, rho, residues, bandwidth_cap);
}

/// Stab of the pure finite sections P_n A P_n.
inline IndicatorSet stab_pure(const BandOperator& op) {
  return stab_composed(FSExpression::leaf(op));
}

/// Stab_h along the arithmetic progression h_n = n*modulus + residue.
inline IndicatorSet stab_h(const FSExpression& expr, Index modulus, Index residue,
                           Index bandwidth_cap = 64) {
  Index rho = detail::expression_modulus(expr);
  if (modulus < 1 || modulus % rho != 0)
    throw std::invalid_argument("stab_h: leaf period lcm " + std::to_string(rho) +
                                " does not divide modulus " +
                                std::to_string(modulus));
  return detail::stab_over_residues(expr, modulus, {mod_floor(residue, modulus)},
                                    bandwidth_cap);
}

/// B(A_n - lambda I_n) = B(A_n) - lambda I, with I the identity on each
/// member's own space.
inline IndicatorSet stab_shifted(const IndicatorSet& set, Complex lambda) {
  IndicatorSet out;
  out.modulus = set.modulus;
  out.by_residue = set.by_residue;
  out.members.reserve(set.members.size());
  for (const auto& ind : set.members)
    out.members.push_back({ind.op - lambda, ind.kind, ind.residue, ind.provenance});
  out.raw.reserve(set.raw.size());
  for (const auto& ind : set.raw)
    out.raw.push_back({ind.op - lambda, ind.kind, ind.residue, ind.provenance});
  return out;
}

}  // namespace fsa
