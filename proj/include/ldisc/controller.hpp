// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

#include "ldisc/loewner.hpp"

namespace ldisc {

enum class Properness { strict_proper, biproper };

/// Fixed controller structure: one shared monic denominator of degree n_p and
/// per-entry numerators of degree n_z(i,j). K(s) is the n_i x n_o matrix with
/// entry (i,j) = N_ij(s) / d(s); when closing a loop against plant data of
/// shape n_o x n_i, entry (i,j) maps measurement j to command i.
class ControllerStructure {
 public:
  ControllerStructure(Eigen::Index n_i, Eigen::Index n_o, int n_p, Eigen::MatrixXi n_z,
                      Properness properness);
  static ControllerStructure siso(int n_p, int n_z, Properness properness);

  Eigen::Index n_i() const { return n_i_; }
  Eigen::Index n_o() const { return n_o_; }
  int n_p() const { return n_p_; }
  int n_z(Eigen::Index i, Eigen::Index j) const { return n_z_(i, j); }
  const Eigen::MatrixXi& n_z() const { return n_z_; }
  Properness properness() const { return properness_; }

  /// Flattened theta layout: [beta | alpha(0,0), alpha(0,1), ... | gains].
  Eigen::Index theta_size() const;
  Eigen::Index alpha_offset(Eigen::Index i, Eigen::Index j) const;
  Eigen::Index gain_offset(Eigen::Index i, Eigen::Index j) const;

  Eigen::VectorXd beta(const Eigen::VectorXd& theta) const;
  Eigen::VectorXd alpha(const Eigen::VectorXd& theta, Eigen::Index i, Eigen::Index j) const;
  double gain(const Eigen::VectorXd& theta, Eigen::Index i, Eigen::Index j) const;
  void check_theta(const Eigen::VectorXd& theta) const;

 private:
  Eigen::Index n_i_;
  Eigen::Index n_o_;
  int n_p_;
  Eigen::MatrixXi n_z_;
  Properness properness_;
};

Eigen::Index theta_dimension(const ControllerStructure& structure);

/// Monic denominator polynomial d(beta, s): product of quadratics
/// (s^2 + b_{2l-1} s + b_{2l}) with a trailing linear factor when n_p is odd.
Eigen::VectorXd denominator_poly(const Eigen::VectorXd& beta);

/// Numerator polynomial with the same factor pattern, scaled by the gain.
Eigen::VectorXd numerator_poly(const Eigen::VectorXd& alpha, double gain);

Eigen::MatrixXcd evaluate_controller(const ControllerStructure& structure,
                                     const Eigen::VectorXd& theta, Complex s);

/// Stability constraint residuals: -beta. Feasible iff every component < 0.
Eigen::VectorXd stability_residuals(const ControllerStructure& structure,
                                    const Eigen::VectorXd& theta);

/// Shared-denominator state-space: one companion block of d(s) per controller
/// input, direct feed-through embedded as algebraic descriptor states when
/// some entry is biproper. Requires beta > 0.
DescriptorRealization controller_realization(const ControllerStructure& structure,
                                             const Eigen::VectorXd& theta);

/// || K(theta_a) - K(theta_b) ||_inf via the stacked difference realization.
double controller_difference_norm(const ControllerStructure& structure,
                                  const Eigen::VectorXd& theta_a, const Eigen::VectorXd& theta_b,
                                  double rel_tol = 1e-6);

}  // namespace ldisc
