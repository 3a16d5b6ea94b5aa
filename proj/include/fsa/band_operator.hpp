#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fsa/sequence.hpp"

namespace fsa {

/// Index set the operator acts on: Z, a half-line a.. or a half-line ..b.
struct OperatorDomain {
  enum class Kind { FullLine, HalfLinePlus, HalfLineMinus };
  Kind kind = Kind::FullLine;
  Index bound = 0;  // a for HalfLinePlus (i >= a), b for HalfLineMinus (i <= b)

  static OperatorDomain full() { return {Kind::FullLine, 0}; }
  static OperatorDomain geq(Index a) { return {Kind::HalfLinePlus, a}; }
  static OperatorDomain leq(Index b) { return {Kind::HalfLineMinus, b}; }

  bool contains(Index i) const {
    switch (kind) {
      case Kind::FullLine: return true;
      case Kind::HalfLinePlus: return i >= bound;
      case Kind::HalfLineMinus: return i <= bound;
    }
    return false;
  }
  bool operator==(const OperatorDomain& o) const {
    if (kind != o.kind) return false;
    return kind == Kind::FullLine || bound == o.bound;
  }
  bool operator!=(const OperatorDomain& o) const { return !(*this == o); }

  OperatorDomain translated(Index k) const {  // index set of S_{-k} A S_k
    switch (kind) {
      case Kind::FullLine: return full();
      case Kind::HalfLinePlus: return geq(bound - k);
      case Kind::HalfLineMinus: return leq(bound - k);
    }
    return full();
  }

  std::string str() const {
    switch (kind) {
      case Kind::FullLine: return "Z";
      case Kind::HalfLinePlus: return std::to_string(bound) + "..";
      case Kind::HalfLineMinus: return ".." + std::to_string(bound);
    }
    return "?";
  }
};

/// The l^p space the operator's norms refer to.
enum class PExponent { One, Two, Inf };

inline PExponent dual(PExponent p) {
  switch (p) {
    case PExponent::One: return PExponent::Inf;
    case PExponent::Inf: return PExponent::One;
    default: return PExponent::Two;
  }
}

inline std::string to_string(PExponent p) {
  switch (p) {
    case PExponent::One: return "1";
    case PExponent::Two: return "2";
    default: return "inf";
  }
}

/// Closed integer interval a..b.
struct Interval {
  Index lo = 0, hi = -1;
  Interval() = default;
  Interval(Index l, Index h) : lo(l), hi(h) {}
  Index size() const { return hi - lo + 1; }
  bool empty() const { return hi < lo; }
};

/// Materialized rectangular window of a matrix.
struct FiniteMatrix {
  Interval rows, cols;
  Eigen::MatrixXcd values;
};

/// Band operator with eventually-periodic diagonals.  diagonals()[k] holds
/// A_{i,i+k} as a sequence in the row index i; entries outside domain x domain
/// vanish by construction.
class BandOperator {
 public:
  explicit BandOperator(OperatorDomain domain = OperatorDomain::full(),
                        PExponent p = PExponent::Two)
      : domain_(domain), p_(p) {}

  const OperatorDomain& domain() const { return domain_; }
  PExponent p_exponent() const { return p_; }
  const std::map<Index, EventuallyPeriodicSequence>& diagonals() const {
    return diagonals_;
  }

  /// Stores (a copy of) seq as diagonal k, clipped to the domain; identically
  /// zero diagonals are dropped.
  void set_diagonal(Index k, EventuallyPeriodicSequence seq) {
    seq = clip_to_domain(k, std::move(seq));
    if (seq.is_zero())
      diagonals_.erase(k);
    else
      diagonals_[k] = std::move(seq);
  }

  void add_to_diagonal(Index k, const EventuallyPeriodicSequence& seq) {
    auto it = diagonals_.find(k);
    if (it == diagonals_.end())
      set_diagonal(k, seq);
    else
      set_diagonal(k, it->second + seq);
  }

  Complex entry(Index i, Index j) const {
    if (!domain_.contains(i) || !domain_.contains(j)) return Complex(0.0);
    auto it = diagonals_.find(j - i);
    if (it == diagonals_.end()) return Complex(0.0);
    return it->second.at(i);
  }

  /// prop(A): max |k| over stored offsets (0 for the zero operator).
  Index bandwidth() const {
    Index w = 0;
    for (const auto& [k, seq] : diagonals_) w = std::max(w, std::abs(k));
    return w;
  }

  bool is_zero() const { return diagonals_.empty(); }

 private:
  EventuallyPeriodicSequence clip_to_domain(Index k,
                                            EventuallyPeriodicSequence seq) const {
    // Row i carries A_{i,i+k}; require i and i+k in the domain.
    switch (domain_.kind) {
      case OperatorDomain::Kind::FullLine: return seq;
      case OperatorDomain::Kind::HalfLinePlus:
        return seq.zero_before(std::max(domain_.bound, domain_.bound - k));
      case OperatorDomain::Kind::HalfLineMinus:
        return seq.zero_after(std::min(domain_.bound, domain_.bound - k));
    }
    return seq;
  }

  std::map<Index, EventuallyPeriodicSequence> diagonals_;
  OperatorDomain domain_;
  PExponent p_;
};

inline FiniteMatrix materialize(const BandOperator& op, Interval rows, Interval cols) {
  if (rows.empty() || cols.empty())
    throw std::invalid_argument("materialize: empty interval");
  FiniteMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.values = Eigen::MatrixXcd::Zero(rows.size(), cols.size());
  Index w = op.bandwidth();
  for (Index i = rows.lo; i <= rows.hi; ++i) {
    Index jlo = std::max(cols.lo, i - w), jhi = std::min(cols.hi, i + w);
    for (Index j = jlo; j <= jhi; ++j)
      m.values(i - rows.lo, j - cols.lo) = op.entry(i, j);
  }
  return m;
}

/// Banach adjoint as a matrix: entry(adj,i,j) = conj(entry(op,j,i)); the dual
/// exponent is recorded on p_exponent.
inline BandOperator adjoint(const BandOperator& op) {
  BandOperator b(op.domain(), dual(op.p_exponent()));
  for (const auto& [k, seq] : op.diagonals())
    b.set_diagonal(-k, seq.translated(-k).conjugated());
  return b;
}

/// S_{-k} A S_k: entry(result,i,j) = entry(op,i+k,j+k).
inline BandOperator shift_conjugate(const BandOperator& op, Index k) {
  BandOperator b(op.domain().translated(k), op.p_exponent());
  for (const auto& [d, seq] : op.diagonals()) b.set_diagonal(d, seq.translated(k));
  return b;
}

/// One-sided compression P A P of a full-line operator.
inline BandOperator compress(const BandOperator& op, OperatorDomain target) {
  if (op.domain() == target) return op;
  if (op.domain() != OperatorDomain::full())
    throw std::invalid_argument(
        "compress: operator already lives on a half-line (" + op.domain().str() +
        " -> " + target.str() + ")");
  BandOperator b(target, op.p_exponent());
  for (const auto& [k, seq] : op.diagonals()) b.set_diagonal(k, seq);
  return b;
}

/// Bi-infinite extension of an operator on 1.. by c times the identity.
inline BandOperator semiinfinite_embed(const BandOperator& op, double c) {
  if (c <= 0.0) throw std::invalid_argument("semiinfinite_embed: c must be > 0");
  if (op.domain() != OperatorDomain::geq(1))
    throw std::invalid_argument("semiinfinite_embed: operator must live on 1..");
  BandOperator b(OperatorDomain::full(), op.p_exponent());
  for (const auto& [k, seq] : op.diagonals()) b.set_diagonal(k, seq);
  b.add_to_diagonal(0, EventuallyPeriodicSequence::constant(c).zero_after(0));
  return b;
}

inline BandOperator identity_on(OperatorDomain domain,
                                PExponent p = PExponent::Two) {
  BandOperator b(domain, p);
  b.set_diagonal(0, EventuallyPeriodicSequence::constant(1.0));
  return b;
}

inline void require_compatible(const BandOperator& a, const BandOperator& b,
                               const char* what) {
  if (a.domain() != b.domain())
    throw std::invalid_argument(std::string(what) + ": domain mismatch");
  if (a.p_exponent() != b.p_exponent())
    throw std::invalid_argument(std::string(what) + ": p-exponent mismatch");
}

inline BandOperator band_sum(const BandOperator& a, const BandOperator& b) {
  require_compatible(a, b, "band_sum");
  BandOperator r = a;
  for (const auto& [k, seq] : b.diagonals()) r.add_to_diagonal(k, seq);
  return r;
}

inline BandOperator band_scale(Complex alpha, const BandOperator& a) {
  BandOperator r(a.domain(), a.p_exponent());
  for (const auto& [k, seq] : a.diagonals()) r.set_diagonal(k, seq.scaled(alpha));
  return r;
}

/// Symbolic matrix product; diagonals convolve, bandwidths add.
inline BandOperator band_product(const BandOperator& a, const BandOperator& b,
                                 Index bandwidth_cap = 64) {
  require_compatible(a, b, "band_product");
  Index w = a.bandwidth() + b.bandwidth();
  if (w > bandwidth_cap)
    throw std::invalid_argument("band_product: bandwidth " + std::to_string(w) +
                                " exceeds cap " + std::to_string(bandwidth_cap));
  BandOperator r(a.domain(), a.p_exponent());
  for (const auto& [k, sa] : a.diagonals()) {
    for (const auto& [m, sb] : b.diagonals()) {
      // entry(r,i,i+k+m) += a_{i,i+k} * b_{i+k,i+k+m}
      r.add_to_diagonal(k + m, sa * sb.translated(k));
    }
  }
  return r;
}

inline BandOperator operator-(const BandOperator& a, Complex lambda) {
  return band_sum(a, band_scale(-lambda, identity_on(a.domain(), a.p_exponent())));
}

inline bool structurally_equal(const BandOperator& a, const BandOperator& b,
                               double tol = structural_tol) {
  if (a.domain() != b.domain() || a.p_exponent() != b.p_exponent()) return false;
  if (a.diagonals().size() != b.diagonals().size()) return false;
  auto ita = a.diagonals().begin();
  auto itb = b.diagonals().begin();
  for (; ita != a.diagonals().end(); ++ita, ++itb) {
    if (ita->first != itb->first) return false;
    if (!ita->second.equals(itb->second, tol)) return false;
  }
  return true;
}

}  // namespace fsa
