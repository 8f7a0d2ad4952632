// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

namespace ldisc::poly {

using Complex = std::complex<double>;

/// Horner evaluation of a real polynomial in descending powers at complex s.
inline Complex evaluate(const Eigen::VectorXd& coeffs, Complex s) {
  if (coeffs.size() == 0) return {0.0, 0.0};
  Complex acc(coeffs(0), 0.0);
  for (Eigen::Index k = 1; k < coeffs.size(); ++k) acc = acc * s + coeffs(k);
  return acc;
}

/// Product of two polynomials (convolution of descending-power coefficients).
inline Eigen::VectorXd multiply(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() == 0 || b.size() == 0) return Eigen::VectorXd();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(a.size() + b.size() - 1);
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = 0; j < b.size(); ++j) out(i + j) += a(i) * b(j);
  return out;
}

/// Drop leading (highest-power) zero coefficients; keeps at least one entry.
inline Eigen::VectorXd trim_leading_zeros(const Eigen::VectorXd& c, double tol = 0.0) {
  Eigen::Index lead = 0;
  while (lead + 1 < c.size() && std::abs(c(lead)) <= tol) ++lead;
  return c.tail(c.size() - lead).eval();
}

/// Roots via the companion matrix of the monic normalization.
inline Eigen::VectorXcd roots(const Eigen::VectorXd& coeffs) {
  Eigen::VectorXd c = trim_leading_zeros(coeffs);
  const Eigen::Index deg = c.size() - 1;
  if (deg <= 0) return Eigen::VectorXcd();
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  companion.bottomLeftCorner(deg - 1, deg - 1).setIdentity();
  for (Eigen::Index k = 0; k < deg; ++k) companion(0, k) = -c(k + 1) / c(0);
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, /*computeEigenvectors=*/false);
  return es.eigenvalues();
}

}  // namespace ldisc::poly
