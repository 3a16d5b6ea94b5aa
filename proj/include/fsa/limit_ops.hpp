#pragma once

#include <vector>

#include "fsa/band_operator.hpp"

namespace fsa {

enum class Direction { Plus, Minus };

/// Limit operators of an eventually-periodic band operator in one direction,
/// organized by residue class mod the tail period lcm.  member(r) is the
/// (purely periodic) pointwise limit of S_{-h} A S_h along h = k*rho + r for
/// Plus, and along h = -(k*rho + r) for Minus.
struct LimitOperatorSet {
  Direction direction;
  Index modulus = 1;
  std::vector<BandOperator> members;  // indexed by residue r in 0..modulus-1

  const BandOperator& member(Index r) const {
    return members[static_cast<std::size_t>(mod_floor(r, modulus))];
  }
};

/// lcm of the minimal tail periods of all diagonals (right for Plus, left for
/// Minus); 1 for the zero operator.
inline Index tail_period_lcm(const BandOperator& op, Direction dir) {
  Index rho = 1;
  for (const auto& [k, seq] : op.diagonals())
    rho = lcm_index(rho, dir == Direction::Plus ? seq.rp() : seq.lp());
  return rho;
}

/// lcm of both tail period lcms; the residue modulus of Stab constructions.
inline Index stab_modulus(const BandOperator& op) {
  return lcm_index(tail_period_lcm(op, Direction::Plus),
                   tail_period_lcm(op, Direction::Minus));
}

/// The unique limit operator along the arithmetic progression h_n = n*modulus
/// + residue (shift direction given by dir).  Requires the tail lcm to divide
/// modulus.
inline BandOperator limit_along(const BandOperator& op, Index modulus, Index residue,
                                Direction dir) {
  if (op.domain() != OperatorDomain::full())
    throw std::invalid_argument("limit_along: operator must live on Z");
  Index rho = tail_period_lcm(op, dir);
  if (modulus < 1 || modulus % rho != 0)
    throw std::invalid_argument("limit_along: tail period lcm " +
                                std::to_string(rho) + " does not divide modulus " +
                                std::to_string(modulus));
  Index r = mod_floor(residue, modulus);
  BandOperator b(OperatorDomain::full(), op.p_exponent());
  for (const auto& [k, seq] : op.diagonals())
    b.set_diagonal(k, dir == Direction::Plus ? seq.right_tail_periodic(r)
                                             : seq.left_tail_periodic(r));
  return b;
}

inline LimitOperatorSet limit_set(const BandOperator& op, Direction dir) {
  LimitOperatorSet s;
  s.direction = dir;
  s.modulus = tail_period_lcm(op, dir);
  s.members.reserve(static_cast<std::size_t>(s.modulus));
  for (Index r = 0; r < s.modulus; ++r)
    s.members.push_back(limit_along(op, s.modulus, r, dir));
  return s;
}

inline LimitOperatorSet limit_plus(const BandOperator& op) {
  return limit_set(op, Direction::Plus);
}

inline LimitOperatorSet limit_minus(const BandOperator& op) {
  return limit_set(op, Direction::Minus);
}

}  // namespace fsa
