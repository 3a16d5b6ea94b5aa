#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "fsa/band_operator.hpp"

namespace fsa {

/// Relative pivot / singular-value threshold below which a finite matrix is
/// declared not invertible.
inline constexpr double singular_rel_tol = 1e-13;

namespace detail {

inline Eigen::VectorXd singular_values(const Eigen::MatrixXcd& m) {
  if (m.rows() <= 64 && m.cols() <= 64)
    return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues();
  return Eigen::BDCSVD<Eigen::MatrixXcd>(m).singularValues();
}

}  // namespace detail

/// Induced operator norm of a finite window: max column sum (p=1), max row sum
/// (p=inf), largest singular value (p=2).
inline double op_norm(const Eigen::MatrixXcd& m, PExponent p) {
  if (m.size() == 0) return 0.0;
  switch (p) {
    case PExponent::One: return m.cwiseAbs().colwise().sum().maxCoeff();
    case PExponent::Inf: return m.cwiseAbs().rowwise().sum().maxCoeff();
    case PExponent::Two: return detail::singular_values(m)(0);
  }
  return 0.0;
}

inline double op_norm(const FiniteMatrix& m, PExponent p) {
  return op_norm(m.values, p);
}

/// Lower norm nu at p=2: smallest singular value of a square or tall window.
inline double lower_norm(const Eigen::MatrixXcd& m, PExponent p = PExponent::Two) {
  if (p != PExponent::Two)
    throw UnsupportedExponent("lower_norm: supported only at p=2");
  if (m.rows() < m.cols())
    throw std::invalid_argument("lower_norm: window must be square or tall");
  Eigen::VectorXd sv = detail::singular_values(m);
  return sv(sv.size() - 1);
}

inline double lower_norm(const FiniteMatrix& m, PExponent p = PExponent::Two) {
  return lower_norm(m.values, p);
}

/// mu = min(nu(M), nu(M*)); for square windows at p=2 both coincide with the
/// smallest singular value.
inline double mu(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("mu: window must be square");
  return std::min(lower_norm(m), lower_norm(Eigen::MatrixXcd(m.adjoint())));
}

inline double mu(const FiniteMatrix& m) { return mu(m.values); }

/// Explicit dense inverse via partially pivoted LU; empty on (relative) pivot
/// breakdown.
inline std::optional<Eigen::MatrixXcd> dense_inverse(const Eigen::MatrixXcd& m) {
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
  double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (min_pivot < singular_rel_tol * scale) return std::nullopt;
  return lu.inverse();
}

/// ||M^{-1}|| with the convention ||M^{-1}|| = inf iff M is not invertible.
inline ExtReal inv_norm(const Eigen::MatrixXcd& m, PExponent p) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("inv_norm: window must be square");
  if (p == PExponent::Two) {
    double mn = mu(m);
    double scale = std::max(1.0, op_norm(m, PExponent::Two));
    if (mn <= singular_rel_tol * scale) return ExtReal::infinity();
    return ExtReal::finite(1.0 / mn);
  }
  auto inv = dense_inverse(m);
  if (!inv) return ExtReal::infinity();
  return ExtReal::finite(op_norm(*inv, p));
}

inline ExtReal inv_norm(const FiniteMatrix& m, PExponent p) {
  return inv_norm(m.values, p);
}

/// kappa = ||M|| ||M^{-1}||, infinity-absorbing.
inline ExtReal kappa(const Eigen::MatrixXcd& m, PExponent p) {
  return ExtReal::finite(op_norm(m, p)) * inv_norm(m, p);
}

inline ExtReal kappa(const FiniteMatrix& m, PExponent p) {
  return kappa(m.values, p);
}

inline std::vector<Complex> eigenvalues(const Eigen::MatrixXcd& m) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, false);
  std::vector<Complex> out(es.eigenvalues().data(),
                           es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

inline std::vector<Complex> eigenvalues(const FiniteMatrix& m) {
  return eigenvalues(m.values);
}

}  // namespace fsa
