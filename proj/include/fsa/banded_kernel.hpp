#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "fsa/scalars.hpp"

namespace fsa {

/// Banded LU with partial pivoting (LAPACK gbtrf-style storage and update
/// order) plus forward/adjoint solves.  Used by the grid sampler, where one
/// matrix is refactored for tens of thousands of shifts and dense SVD per
/// shift is far too slow.
class BandedLU {
 public:
  BandedLU(Index n, Index kl, Index ku)
      : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1),
        ab_(static_cast<std::size_t>(ldab_ * n), Complex(0.0)),
        ipiv_(static_cast<std::size_t>(n), 0) {}

  Index size() const { return n_; }

  /// Valid for max(0, j-kl-ku) <= i <= min(n-1, j+kl).
  Complex& at(Index i, Index j) {
    return ab_[static_cast<std::size_t>((kl_ + ku_ + i - j) + j * ldab_)];
  }
  const Complex& at(Index i, Index j) const {
    return ab_[static_cast<std::size_t>((kl_ + ku_ + i - j) + j * ldab_)];
  }

  bool in_band(Index i, Index j) const {
    return i >= 0 && i < n_ && j >= 0 && j < n_ && i - j <= kl_ && j - i <= kl_ + ku_;
  }

  void factor() {
    singular_ = false;
    Index ju = 0;
    for (Index j = 0; j < n_; ++j) {
      Index km = std::min(kl_, n_ - 1 - j);
      Index jp = 0;
      double best = std::abs(at(j, j));
      for (Index p = 1; p <= km; ++p) {
        double v = std::abs(at(j + p, j));
        if (v > best) {
          best = v;
          jp = p;
        }
      }
      ipiv_[static_cast<std::size_t>(j)] = j + jp;
      ju = std::max(ju, std::min(j + kl_ + ku_, n_ - 1));
      if (best == 0.0) {
        singular_ = true;
        continue;
      }
      if (jp != 0)
        for (Index c = j; c <= ju; ++c) std::swap(at(j, c), at(j + jp, c));
      Complex pivot = at(j, j);
      for (Index i = 1; i <= km; ++i) at(j + i, j) /= pivot;
      for (Index c = j + 1; c <= ju; ++c) {
        Complex t = at(j, c);
        if (t == Complex(0.0)) continue;
        for (Index i = 1; i <= km; ++i) at(j + i, c) -= at(j + i, j) * t;
      }
    }
  }

  /// An exactly zero pivot under partial pivoting certifies singularity.
  bool exactly_singular() const { return singular_; }

  void solve(Complex* b) const {
    for (Index j = 0; j < n_ - 1; ++j) {
      Index p = ipiv_[static_cast<std::size_t>(j)];
      if (p != j) std::swap(b[j], b[p]);
      Index km = std::min(kl_, n_ - 1 - j);
      Complex t = b[j];
      for (Index i = 1; i <= km; ++i) b[j + i] -= at(j + i, j) * t;
    }
    for (Index j = n_ - 1; j >= 0; --j) {
      b[j] /= at(j, j);
      Index ilo = std::max<Index>(0, j - kl_ - ku_);
      Complex t = b[j];
      for (Index i = ilo; i < j; ++i) b[i] -= at(i, j) * t;
    }
  }

  void solve_adjoint(Complex* b) const {
    for (Index j = 0; j < n_; ++j) {
      Index ilo = std::max<Index>(0, j - kl_ - ku_);
      Complex s = b[j];
      for (Index i = ilo; i < j; ++i) s -= std::conj(at(i, j)) * b[i];
      b[j] = s / std::conj(at(j, j));
    }
    for (Index j = n_ - 1; j >= 0; --j) {
      Index km = std::min(kl_, n_ - 1 - j);
      Complex s = b[j];
      for (Index i = 1; i <= km; ++i) s -= std::conj(at(j + i, j)) * b[j + i];
      b[j] = s;
      Index p = ipiv_[static_cast<std::size_t>(j)];
      if (p != j) std::swap(b[j], b[p]);
    }
  }

 private:
  Index n_, kl_, ku_, ldab_;
  std::vector<Complex> ab_;
  std::vector<Index> ipiv_;
  bool singular_ = false;
};

namespace detail {

inline void deterministic_start(std::vector<Complex>& x) {
  double nrm = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double t = static_cast<double>(i);
    x[i] = Complex(std::cos(0.7 * t + 0.3), std::sin(0.4 * t + 1.1));
    nrm += std::norm(x[i]);
  }
  nrm = std::sqrt(nrm);
  for (auto& v : x) v /= nrm;
}

inline double vec_norm(const std::vector<Complex>& x) {
  double s = 0.0;
  for (const auto& v : x) s += std::norm(v);
  return std::sqrt(s);
}

/// Largest eigenvalue of the Hermitian PSD map x -> apply(x) by power
/// iteration; returns 1/sqrt(rho), i.e. the smallest singular value when
/// apply = (M^H M)^{-1}.
template <typename Apply>
double smallest_sigma_from_inverse_power(Index n, Apply&& apply, double rel_tol,
                                         int max_iter) {
  std::vector<Complex> x(static_cast<std::size_t>(n));
  deterministic_start(x);
  std::vector<Complex> z;
  double sigma_prev = -1.0;
  for (int it = 0; it < max_iter; ++it) {
    z = x;
    if (!apply(z)) return 0.0;  // breakdown: treat as singular
    double rho = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      rho += (std::conj(x[i]) * z[i]).real();
    double zn = vec_norm(z);
    if (!std::isfinite(rho) || !std::isfinite(zn) || zn > 1e280) return 0.0;
    if (rho <= 0.0 || zn == 0.0) return 0.0;
    double sigma = 1.0 / std::sqrt(rho);
    for (auto& v : z) v /= zn;
    x.swap(z);
    if (sigma_prev >= 0.0 &&
        std::abs(sigma - sigma_prev) <= rel_tol * std::max(sigma, 1e-30))
      return sigma;
    sigma_prev = sigma;
  }
  return sigma_prev;
}

}  // namespace detail

/// Band pattern of a square matrix plus its entries, ready for repeated
/// shifted factorizations.
struct BandedSquare {
  Index n = 0, kl = 0, ku = 0;
  Eigen::MatrixXcd dense;  // kept for band filling of arbitrary patterns

  explicit BandedSquare(const Eigen::MatrixXcd& m) : n(m.rows()), dense(m) {
    if (m.rows() != m.cols())
      throw std::invalid_argument("BandedSquare: matrix must be square");
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        if (m(i, j) != Complex(0.0)) {
          kl = std::max(kl, i - j);
          ku = std::max(ku, j - i);
        }
  }

  BandedLU factorize_shifted(Complex lambda) const {
    BandedLU lu(n, kl, ku);
    for (Index j = 0; j < n; ++j) {
      Index ilo = std::max<Index>(0, j - ku), ihi = std::min(n - 1, j + kl);
      for (Index i = ilo; i <= ihi; ++i) lu.at(i, j) = dense(i, j);
      lu.at(j, j) -= lambda;
    }
    lu.factor();
    return lu;
  }
};

/// sigma_min(M - lambda I) via inverse iteration on (M-lambda)^H (M-lambda).
inline double sigma_min_shifted(const BandedSquare& base, Complex lambda,
                                double rel_tol = 1e-8, int max_iter = 400) {
  BandedLU lu = base.factorize_shifted(lambda);
  if (lu.exactly_singular()) return 0.0;
  return detail::smallest_sigma_from_inverse_power(
      base.n,
      [&lu](std::vector<Complex>& v) {
        lu.solve_adjoint(v.data());
        lu.solve(v.data());
        for (const auto& c : v)
          if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
        return true;
      },
      rel_tol, max_iter);
}

/// Tall window with a 0/1 diagonal mask; sigma_min(T - lambda D) is computed
/// through the banded normal equations G = (T-lambda D)^H (T-lambda D).
/// diag_offset = (absolute index of window row 0) - (absolute index of window
/// column 0), so the diagonal of column c sits at window row c - diag_offset.
struct TallWindow {
  Eigen::MatrixXcd t;          // rows x cols, rows >= cols
  std::vector<Index> diag_row; // per column: row position of the diagonal, -1 if none
  Index band = 0;              // |absolute row - absolute column| bound

  TallWindow(const Eigen::MatrixXcd& m, Index diag_offset)
      : t(m), diag_row(static_cast<std::size_t>(m.cols()), -1) {
    for (Index c = 0; c < t.cols(); ++c) {
      Index r = c - diag_offset;
      if (r >= 0 && r < t.rows()) diag_row[static_cast<std::size_t>(c)] = r;
    }
    for (Index r = 0; r < t.rows(); ++r)
      for (Index c = 0; c < t.cols(); ++c)
        if (t(r, c) != Complex(0.0))
          band = std::max(band, std::abs(r - c + diag_offset));
  }

  double sigma_min_shifted(Complex lambda, double rel_tol = 1e-8,
                           int max_iter = 400) const {
    Index cols = t.cols();
    Index g_band = std::min(cols - 1, 2 * band);
    BandedLU g(cols, g_band, g_band);
    // G_{c,d} = sum_r conj(T'(r,c)) T'(r,d) with T' = T - lambda D.
    auto entry = [&](Index r, Index c) -> Complex {
      Complex v = t(r, c);
      if (diag_row[static_cast<std::size_t>(c)] == r) v -= lambda;
      return v;
    };
    for (Index c = 0; c < cols; ++c) {
      for (Index d = std::max<Index>(0, c - g_band);
           d <= std::min(cols - 1, c + g_band); ++d) {
        Complex s(0.0);
        for (Index r = 0; r < t.rows(); ++r) {
          Complex a = entry(r, c);
          if (a == Complex(0.0)) continue;
          s += std::conj(a) * entry(r, d);
        }
        g.at(c, d) = s;
      }
    }
    g.factor();
    if (g.exactly_singular()) return 0.0;
    double s = detail::smallest_sigma_from_inverse_power(
        cols,
        [&g](std::vector<Complex>& v) {
          g.solve(v.data());
          for (const auto& c : v)
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
          return true;
        },
        rel_tol, max_iter);
    // Here rho -> 1/lambda_min(G) and sigma_min(T') = sqrt(lambda_min(G)).
    return s;
  }
};

}  // namespace fsa
