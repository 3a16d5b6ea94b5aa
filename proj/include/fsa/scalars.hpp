#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace fsa {

using Complex = std::complex<double>;
using Index = std::int64_t;

/// Tolerance used for structural (symbolic) comparisons of coefficients.
inline constexpr double structural_tol = 1e-12;

/// Cap above which an inverse-norm estimate is reported as infinite.
inline constexpr double inv_norm_cap = 1e12;

inline bool approx_equal(Complex a, Complex b, double tol = structural_tol) {
  return std::abs(a - b) <= tol;
}

/// Floor modulus, total on all of Z.
inline Index mod_floor(Index i, Index m) {
  Index r = i % m;
  return r < 0 ? r + m : r;
}

inline Index gcd_index(Index a, Index b) {
  while (b != 0) {
    Index t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline Index lcm_index(Index a, Index b) { return a / gcd_index(a, b) * b; }

/// Nonnegative extended real: either a finite value or infinity.
/// Infinity stands for "not invertible" in inverse-norm contexts and is a
/// value, never an error.
class ExtReal {
 public:
  ExtReal() : value_(0.0), infinite_(false) {}
  static ExtReal finite(double v) { return ExtReal(v, false); }
  static ExtReal infinity() { return ExtReal(0.0, true); }

  bool is_infinite() const { return infinite_; }
  double value() const {
    if (infinite_) throw std::logic_error("ExtReal: value() on infinity");
    return value_;
  }
  /// Finite value, or +inf double for the infinite flag (for comparisons).
  double as_double() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_;
  }

  friend ExtReal operator*(const ExtReal& a, const ExtReal& b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return finite(a.value_ * b.value_);
  }
  friend bool operator<(const ExtReal& a, const ExtReal& b) {
    return a.as_double() < b.as_double();
  }
  friend ExtReal max(const ExtReal& a, const ExtReal& b) { return a < b ? b : a; }
  friend ExtReal min(const ExtReal& a, const ExtReal& b) { return a < b ? a : b; }

  /// Two infinities agree; otherwise absolute difference.
  friend double discrepancy(const ExtReal& a, const ExtReal& b) {
    if (a.infinite_ && b.infinite_) return 0.0;
    if (a.infinite_ || b.infinite_) return std::numeric_limits<double>::infinity();
    return std::abs(a.value_ - b.value_);
  }

  std::string str() const {
    if (infinite_) return "inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value_);
    return buf;
  }

 private:
  ExtReal(double v, bool inf) : value_(v), infinite_(inf) {}
  double value_;
  bool infinite_;
};

struct UnsupportedExponent : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace fsa
