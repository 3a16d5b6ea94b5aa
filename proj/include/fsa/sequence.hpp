#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

#include "fsa/scalars.hpp"

namespace fsa {

/// Two-sided scalar sequence with a periodic left tail, a finite center and a
/// periodic right tail.  Entry at index i:
///   i <  center_start()            : left_period[(i - center_start) mod L]
///   center_start() <= i < end      : center[i - center_start]
///   i >= end = center_start+|center|: right_period[(i - end) mod R]
/// Construction normalizes to minimal periods and a minimal center, so that
/// value-equal sequences compare equal.
class EventuallyPeriodicSequence {
 public:
  EventuallyPeriodicSequence()
      : left_{Complex(0.0)}, center_{}, center_start_(0), right_{Complex(0.0)} {}

  EventuallyPeriodicSequence(std::vector<Complex> left, std::vector<Complex> center,
                             Index center_start, std::vector<Complex> right)
      : left_(std::move(left)),
        center_(std::move(center)),
        center_start_(center_start),
        right_(std::move(right)) {
    if (left_.empty() || right_.empty())
      throw std::invalid_argument("EventuallyPeriodicSequence: empty period");
    normalize();
  }

  static EventuallyPeriodicSequence zero() { return EventuallyPeriodicSequence(); }

  static EventuallyPeriodicSequence constant(Complex c) {
    return EventuallyPeriodicSequence({c}, {}, 0, {c});
  }

  /// Purely periodic sequence with value period[i mod period.size()] at i.
  static EventuallyPeriodicSequence periodic(std::vector<Complex> period) {
    std::vector<Complex> copy = period;
    return EventuallyPeriodicSequence(std::move(copy), {}, 0, std::move(period));
  }

  /// Finite-support sequence: values at indices start.. , zero elsewhere.
  static EventuallyPeriodicSequence finite(std::vector<Complex> values, Index start) {
    return EventuallyPeriodicSequence({Complex(0.0)}, std::move(values), start,
                                      {Complex(0.0)});
  }

  Complex at(Index i) const {
    if (i < center_start_)
      return left_[static_cast<std::size_t>(mod_floor(i - center_start_, lp()))];
    Index end = center_end();
    if (i < end) return center_[static_cast<std::size_t>(i - center_start_)];
    return right_[static_cast<std::size_t>(mod_floor(i - end, rp()))];
  }

  const std::vector<Complex>& left_period() const { return left_; }
  const std::vector<Complex>& center() const { return center_; }
  Index center_start() const { return center_start_; }
  Index center_end() const { return center_start_ + static_cast<Index>(center_.size()); }
  const std::vector<Complex>& right_period() const { return right_; }
  Index lp() const { return static_cast<Index>(left_.size()); }
  Index rp() const { return static_cast<Index>(right_.size()); }

  bool is_zero(double tol = structural_tol) const {
    auto all0 = [tol](const std::vector<Complex>& v) {
      return std::all_of(v.begin(), v.end(),
                         [tol](Complex c) { return std::abs(c) <= tol; });
    };
    return all0(left_) && all0(center_) && all0(right_);
  }

  /// t_i = s_{i+d}
  EventuallyPeriodicSequence translated(Index d) const {
    EventuallyPeriodicSequence t = *this;
    t.center_start_ -= d;
    return t;
  }

  EventuallyPeriodicSequence map(const std::function<Complex(Complex)>& f) const {
    auto apply = [&f](std::vector<Complex> v) {
      for (auto& c : v) c = f(c);
      return v;
    };
    return EventuallyPeriodicSequence(apply(left_), apply(center_), center_start_,
                                      apply(right_));
  }

  EventuallyPeriodicSequence conjugated() const {
    return map([](Complex c) { return std::conj(c); });
  }

  EventuallyPeriodicSequence scaled(Complex a) const {
    return map([a](Complex c) { return a * c; });
  }

  /// Pointwise combination; tails stay periodic with the lcm of the periods.
  static EventuallyPeriodicSequence combine(
      const EventuallyPeriodicSequence& a, const EventuallyPeriodicSequence& b,
      const std::function<Complex(Complex, Complex)>& f) {
    Index L = lcm_index(a.lp(), b.lp());
    Index R = lcm_index(a.rp(), b.rp());
    Index cs = std::min(a.center_start_, b.center_start_);
    Index ce = std::max(a.center_end(), b.center_end());
    std::vector<Complex> left(static_cast<std::size_t>(L));
    for (Index m = 0; m < L; ++m) {
      Index i = cs - L + m;  // one full combined period just below the center
      left[static_cast<std::size_t>(mod_floor(i - cs, L))] = f(a.at(i), b.at(i));
    }
    std::vector<Complex> center(static_cast<std::size_t>(ce - cs));
    for (Index i = cs; i < ce; ++i)
      center[static_cast<std::size_t>(i - cs)] = f(a.at(i), b.at(i));
    std::vector<Complex> right(static_cast<std::size_t>(R));
    for (Index m = 0; m < R; ++m) {
      Index i = ce + m;
      right[static_cast<std::size_t>(mod_floor(i - ce, R))] = f(a.at(i), b.at(i));
    }
    return EventuallyPeriodicSequence(std::move(left), std::move(center), cs,
                                      std::move(right));
  }

  friend EventuallyPeriodicSequence operator+(const EventuallyPeriodicSequence& a,
                                              const EventuallyPeriodicSequence& b) {
    return combine(a, b, [](Complex x, Complex y) { return x + y; });
  }
  friend EventuallyPeriodicSequence operator*(const EventuallyPeriodicSequence& a,
                                              const EventuallyPeriodicSequence& b) {
    return combine(a, b, [](Complex x, Complex y) { return x * y; });
  }

  /// Entries kept for i >= from, zero below.
  EventuallyPeriodicSequence zero_before(Index from) const {
    std::vector<Complex> left{Complex(0.0)};
    Index ce = center_end();
    if (from < ce) {
      std::vector<Complex> center(static_cast<std::size_t>(ce - from));
      for (Index i = from; i < ce; ++i)
        center[static_cast<std::size_t>(i - from)] = at(i);
      return EventuallyPeriodicSequence(std::move(left), std::move(center), from,
                                        right_);
    }
    // Transition lands inside the right tail: rotate the period so its phase
    // stays anchored at the new (empty) center boundary.
    std::vector<Complex> right(static_cast<std::size_t>(rp()));
    for (Index m = 0; m < rp(); ++m)
      right[static_cast<std::size_t>(m)] =
          right_[static_cast<std::size_t>(mod_floor(m + from - ce, rp()))];
    return EventuallyPeriodicSequence(std::move(left), {}, from, std::move(right));
  }

  /// Entries kept for i <= to, zero above.
  EventuallyPeriodicSequence zero_after(Index to) const {
    std::vector<Complex> right{Complex(0.0)};
    Index cs = center_start_;
    if (to + 1 > cs) {
      std::vector<Complex> center(static_cast<std::size_t>(to + 1 - cs));
      for (Index i = cs; i <= to; ++i)
        center[static_cast<std::size_t>(i - cs)] = at(i);
      return EventuallyPeriodicSequence(left_, std::move(center), cs,
                                        std::move(right));
    }
    std::vector<Complex> left(static_cast<std::size_t>(lp()));
    for (Index m = 0; m < lp(); ++m)
      left[static_cast<std::size_t>(m)] =
          left_[static_cast<std::size_t>(mod_floor(m + (to + 1) - cs, lp()))];
    return EventuallyPeriodicSequence(std::move(left), {}, to + 1,
                                      std::move(right));
  }

  /// Purely periodic sequence matching the right tail along the shifted phase:
  /// t_i = right[(i + shift - center_end) mod R].
  EventuallyPeriodicSequence right_tail_periodic(Index shift) const {
    Index R = rp();
    std::vector<Complex> period(static_cast<std::size_t>(R));
    for (Index m = 0; m < R; ++m)
      period[static_cast<std::size_t>(m)] =
          right_[static_cast<std::size_t>(mod_floor(m + shift - center_end(), R))];
    return periodic(std::move(period));
  }

  /// Purely periodic sequence matching the left tail: t_i = left[(i - shift -
  /// center_start) mod L].
  EventuallyPeriodicSequence left_tail_periodic(Index shift) const {
    Index L = lp();
    std::vector<Complex> period(static_cast<std::size_t>(L));
    for (Index m = 0; m < L; ++m)
      period[static_cast<std::size_t>(m)] =
          left_[static_cast<std::size_t>(mod_floor(m - shift - center_start_, L))];
    return periodic(std::move(period));
  }

  /// Semantic equality: equal minimal periods and entrywise agreement on a
  /// window covering both centers plus one full period on each side.
  bool equals(const EventuallyPeriodicSequence& o, double tol = structural_tol) const {
    if (lp() != o.lp() || rp() != o.rp()) return false;
    Index lo = std::min(center_start_, o.center_start_) - lp();
    Index hi = std::max(center_end(), o.center_end()) + rp();
    for (Index i = lo; i < hi; ++i)
      if (!approx_equal(at(i), o.at(i), tol)) return false;
    return true;
  }

 private:
  void normalize() {
    reduce_period(left_);
    reduce_period(right_);
    shrink_center();
    for (auto& c : left_) clean(c);
    for (auto& c : center_) clean(c);
    for (auto& c : right_) clean(c);
  }

  static void clean(Complex& c) {
    // Snap exact-intent zeros produced by cancellation.
    if (std::abs(c.real()) < 1e-300) c.real(0.0);
    if (std::abs(c.imag()) < 1e-300) c.imag(0.0);
  }

  static void reduce_period(std::vector<Complex>& v) {
    Index n = static_cast<Index>(v.size());
    for (Index d = 1; d < n; ++d) {
      if (n % d != 0) continue;
      bool ok = true;
      for (Index i = 0; i < n && ok; ++i)
        ok = approx_equal(v[static_cast<std::size_t>(i)],
                          v[static_cast<std::size_t>(i % d)]);
      if (ok) {
        v.resize(static_cast<std::size_t>(d));
        return;
      }
    }
  }

  void shrink_center() {
    // Drop trailing center entries already produced by the right tail.
    while (!center_.empty()) {
      Complex tail_value = right_[static_cast<std::size_t>(rp() - 1)];
      if (!approx_equal(center_.back(), tail_value)) break;
      center_.pop_back();
      std::rotate(right_.rbegin(), right_.rbegin() + 1, right_.rend());
    }
    // Drop leading center entries already produced by the left tail.
    while (!center_.empty()) {
      if (!approx_equal(center_.front(), left_.front())) break;
      center_.erase(center_.begin());
      ++center_start_;
      std::rotate(left_.begin(), left_.begin() + 1, left_.end());
    }
  }

  std::vector<Complex> left_;
  std::vector<Complex> center_;
  Index center_start_;
  std::vector<Complex> right_;
};

}  // namespace fsa
