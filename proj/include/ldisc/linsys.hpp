// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>

#include <Eigen/Core>

#include "ldisc/loewner.hpp"

namespace ldisc {

/// Standard state-space x' = Ax + Bu, y = Cx + Du.
struct StateSpace {
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::MatrixXd C;
  Eigen::MatrixXd D;

  Eigen::Index order() const { return A.rows(); }
};

/// Projects a descriptor realization to standard form: plain E-solve when E is
/// well conditioned, index-1 reduction (algebraic states eliminated, direct
/// term recovered) otherwise. Empty when the pencil has higher index.
std::optional<StateSpace> to_standard(const DescriptorRealization& sys);

Eigen::MatrixXcd evaluate_state_space(const StateSpace& sys, Complex s);

/// Max real part over the finite generalized eigenvalues of (A, E);
/// -infinity when no finite eigenvalue exists.
double spectral_abscissa(const DescriptorRealization& sys);

bool is_stable(const DescriptorRealization& sys, double margin = 1e-9);

struct HinfOptions {
  double rel_tol = 1e-6;
  int sweep_points = 400;
  // Sweep bracket; non-positive values mean "derive from the pole spread".
  double sweep_min = 0.0;
  double sweep_max = 0.0;
};

struct HinfResult {
  double norm = 0.0;
  double peak_omega = 0.0;     // frequency attaining the reported lower bound
  double achieved_rel_tol = 0.0;
  bool grid_fallback = false;  // level-set test degenerated; golden-section refinement used
};

/// H-infinity norm of a stable realization: log-sweep lower bound, then
/// bisection driven by purely imaginary eigenvalues of the level-set
/// Hamiltonian; golden-section refinement around grid peaks as fallback.
HinfResult hinf_norm(const DescriptorRealization& sys, const HinfOptions& options);
HinfResult hinf_norm(const DescriptorRealization& sys, double rel_tol = 1e-6);

}  // namespace ldisc
