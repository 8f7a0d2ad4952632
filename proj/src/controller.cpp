// SPDX-License-Identifier: Apache-2.0
#include "ldisc/controller.hpp"

#include <cmath>
#include <sstream>

#include "ldisc/linsys.hpp"
#include "ldisc/polynomial.hpp"

namespace ldisc {

ControllerStructure::ControllerStructure(Eigen::Index n_i, Eigen::Index n_o, int n_p,
                                         Eigen::MatrixXi n_z, Properness properness)
    : n_i_(n_i), n_o_(n_o), n_p_(n_p), n_z_(std::move(n_z)), properness_(properness) {
  if (n_i_ < 1 || n_o_ < 1) throw DimensionError("controller needs positive dimensions");
  if (n_p_ < 0) throw ArgumentError("n_p must be nonnegative");
  if (n_z_.rows() != n_i_ || n_z_.cols() != n_o_)
    throw DimensionError("n_z grid must be n_i x n_o");
  for (Eigen::Index i = 0; i < n_i_; ++i) {
    for (Eigen::Index j = 0; j < n_o_; ++j) {
      if (n_z_(i, j) < 0) throw ArgumentError("n_z entries must be nonnegative");
      if (properness_ == Properness::strict_proper && !(n_p_ > n_z_(i, j))) {
        std::ostringstream msg;
        msg << "strict properness requires n_p > n_z for entry (" << i << "," << j << ")";
        throw ArgumentError(msg.str());
      }
      if (properness_ == Properness::biproper && n_z_(i, j) > n_p_) {
        std::ostringstream msg;
        msg << "entry (" << i << "," << j << ") is improper (n_z > n_p)";
        throw ArgumentError(msg.str());
      }
    }
  }
}

ControllerStructure ControllerStructure::siso(int n_p, int n_z, Properness properness) {
  Eigen::MatrixXi grid(1, 1);
  grid(0, 0) = n_z;
  return ControllerStructure(1, 1, n_p, grid, properness);
}

Eigen::Index ControllerStructure::theta_size() const {
  return static_cast<Eigen::Index>(n_p_) + n_z_.sum() + n_i_ * n_o_;
}

Eigen::Index ControllerStructure::alpha_offset(Eigen::Index i, Eigen::Index j) const {
  Eigen::Index at = n_p_;
  for (Eigen::Index a = 0; a < n_i_; ++a)
    for (Eigen::Index b = 0; b < n_o_; ++b) {
      if (a == i && b == j) return at;
      at += n_z_(a, b);
    }
  throw DimensionError("alpha index out of range");
}

Eigen::Index ControllerStructure::gain_offset(Eigen::Index i, Eigen::Index j) const {
  if (i < 0 || i >= n_i_ || j < 0 || j >= n_o_) throw DimensionError("gain index out of range");
  return static_cast<Eigen::Index>(n_p_) + n_z_.sum() + i * n_o_ + j;
}

Eigen::VectorXd ControllerStructure::beta(const Eigen::VectorXd& theta) const {
  check_theta(theta);
  return theta.head(n_p_);
}

Eigen::VectorXd ControllerStructure::alpha(const Eigen::VectorXd& theta, Eigen::Index i,
                                           Eigen::Index j) const {
  check_theta(theta);
  return theta.segment(alpha_offset(i, j), n_z_(i, j));
}

double ControllerStructure::gain(const Eigen::VectorXd& theta, Eigen::Index i,
                                 Eigen::Index j) const {
  check_theta(theta);
  return theta(gain_offset(i, j));
}

void ControllerStructure::check_theta(const Eigen::VectorXd& theta) const {
  if (theta.size() != theta_size()) {
    std::ostringstream msg;
    msg << "theta has length " << theta.size() << ", structure needs " << theta_size();
    throw DimensionError(msg.str());
  }
}

Eigen::Index theta_dimension(const ControllerStructure& structure) {
  return structure.theta_size();
}

namespace {

Eigen::VectorXd factored_poly(const Eigen::VectorXd& coeffs, double lead) {
  const Eigen::Index n = coeffs.size();
  Eigen::VectorXd acc(1);
  acc << lead;
  const Eigen::Index quads = n / 2;
  for (Eigen::Index l = 0; l < quads; ++l) {
    Eigen::VectorXd quad(3);
    quad << 1.0, coeffs(2 * l), coeffs(2 * l + 1);
    acc = poly::multiply(acc, quad);
  }
  if (n % 2 == 1) {
    Eigen::VectorXd lin(2);
    lin << 1.0, coeffs(n - 1);
    acc = poly::multiply(acc, lin);
  }
  return acc;
}

}  // namespace

Eigen::VectorXd denominator_poly(const Eigen::VectorXd& beta) {
  return factored_poly(beta, 1.0);
}

Eigen::VectorXd numerator_poly(const Eigen::VectorXd& alpha, double gain) {
  return factored_poly(alpha, gain);
}

Eigen::MatrixXcd evaluate_controller(const ControllerStructure& structure,
                                     const Eigen::VectorXd& theta, Complex s) {
  structure.check_theta(theta);
  const Eigen::VectorXd den = denominator_poly(theta.head(structure.n_p()));
  const Complex d = poly::evaluate(den, s);
  const double dscale = den.cwiseAbs().maxCoeff();
  if (std::abs(d) <= 1e-300 * std::max(1.0, dscale)) {
    std::ostringstream msg;
    msg << "controller denominator vanishes at s = " << s.real() << (s.imag() >= 0 ? "+" : "")
        << s.imag() << "j";
    throw SingularityError(msg.str());
  }
  Eigen::MatrixXcd out(structure.n_i(), structure.n_o());
  for (Eigen::Index i = 0; i < structure.n_i(); ++i) {
    for (Eigen::Index j = 0; j < structure.n_o(); ++j) {
      const Eigen::VectorXd num = numerator_poly(
          theta.segment(structure.alpha_offset(i, j), structure.n_z(i, j)),
          theta(structure.gain_offset(i, j)));
      out(i, j) = poly::evaluate(num, s) / d;
    }
  }
  return out;
}

Eigen::VectorXd stability_residuals(const ControllerStructure& structure,
                                    const Eigen::VectorXd& theta) {
  structure.check_theta(theta);
  return -theta.head(structure.n_p());
}

DescriptorRealization controller_realization(const ControllerStructure& structure,
                                             const Eigen::VectorXd& theta) {
  structure.check_theta(theta);
  const int n_p = structure.n_p();
  const Eigen::Index n_i = structure.n_i();
  const Eigen::Index n_o = structure.n_o();
  const Eigen::VectorXd beta = theta.head(n_p);
  for (Eigen::Index l = 0; l < beta.size(); ++l)
    if (!(beta(l) > 0.0))
      throw ArgumentError("controller_realization requires strictly feasible beta (> 0)");

  const Eigen::VectorXd den = denominator_poly(beta);  // monic, length n_p + 1

  // One controllable companion block of d(s) per controller input column.
  Eigen::MatrixXd Ac = Eigen::MatrixXd::Zero(n_p, n_p);
  if (n_p > 0) {
    Ac.topRightCorner(n_p - 1, n_p - 1).setIdentity();
    for (int k = 0; k < n_p; ++k) Ac(n_p - 1, k) = -den(n_p - k);  // ascending order
  }

  const Eigen::Index n_dyn = static_cast<Eigen::Index>(n_p) * n_o;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n_dyn, n_dyn);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n_dyn, n_o);
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n_i, n_dyn);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n_i, n_o);

  for (Eigen::Index j = 0; j < n_o; ++j) {
    if (n_p > 0) {
      A.block(j * n_p, j * n_p, n_p, n_p) = Ac;
      B(j * n_p + n_p - 1, j) = 1.0;
    }
    for (Eigen::Index i = 0; i < n_i; ++i) {
      Eigen::VectorXd num = numerator_poly(
          theta.segment(structure.alpha_offset(i, j), structure.n_z(i, j)),
          theta(structure.gain_offset(i, j)));
      Eigen::VectorXd padded = Eigen::VectorXd::Zero(n_p + 1);
      padded.tail(num.size()) = num;
      const double direct = padded(0);
      D(i, j) = direct;
      // Strictly proper remainder N - direct * d, coefficients ascending.
      for (int k = 0; k < n_p; ++k)
        C(i, j * n_p + k) = padded(n_p - k) - direct * den(n_p - k);
    }
  }

  DescriptorRealization sys;
  if (D.isZero(0.0)) {
    sys.E = Eigen::MatrixXd::Identity(n_dyn, n_dyn);
    sys.A = A;
    sys.B = B;
    sys.C = C;
    return sys;
  }

  // Algebraic states carry the feed-through: 0 = -x2 + u, y = C x1 + D x2.
  const Eigen::Index n = n_dyn + n_o;
  sys.E = Eigen::MatrixXd::Zero(n, n);
  sys.E.topLeftCorner(n_dyn, n_dyn).setIdentity();
  sys.A = Eigen::MatrixXd::Zero(n, n);
  sys.A.topLeftCorner(n_dyn, n_dyn) = A;
  sys.A.bottomRightCorner(n_o, n_o) = -Eigen::MatrixXd::Identity(n_o, n_o);
  sys.B = Eigen::MatrixXd::Zero(n, n_o);
  sys.B.topRows(n_dyn) = B;
  sys.B.bottomRows(n_o).setIdentity();
  sys.C = Eigen::MatrixXd::Zero(n_i, n);
  sys.C.leftCols(n_dyn) = C;
  sys.C.rightCols(n_o) = D;
  return sys;
}

double controller_difference_norm(const ControllerStructure& structure,
                                  const Eigen::VectorXd& theta_a, const Eigen::VectorXd& theta_b,
                                  double rel_tol) {
  if ((theta_a - theta_b).isZero(0.0)) return 0.0;
  const DescriptorRealization a = controller_realization(structure, theta_a);
  const DescriptorRealization b = controller_realization(structure, theta_b);

  DescriptorRealization diff;
  const Eigen::Index na = a.order();
  const Eigen::Index nb = b.order();
  diff.E = Eigen::MatrixXd::Zero(na + nb, na + nb);
  diff.E.topLeftCorner(na, na) = a.E;
  diff.E.bottomRightCorner(nb, nb) = b.E;
  diff.A = Eigen::MatrixXd::Zero(na + nb, na + nb);
  diff.A.topLeftCorner(na, na) = a.A;
  diff.A.bottomRightCorner(nb, nb) = b.A;
  diff.B = Eigen::MatrixXd::Zero(na + nb, a.inputs());
  diff.B.topRows(na) = a.B;
  diff.B.bottomRows(nb) = b.B;
  diff.C = Eigen::MatrixXd::Zero(a.outputs(), na + nb);
  diff.C.leftCols(na) = a.C;
  diff.C.rightCols(nb) = -b.C;

  return hinf_norm(diff, rel_tol).norm;
}

}  // namespace ldisc
