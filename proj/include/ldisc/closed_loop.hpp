// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include <Eigen/Core>

#include "ldisc/controller.hpp"
#include "ldisc/freq_data.hpp"

namespace ldisc {

/// Reference-matching objective: mean squared Frobenius mismatch on the grid.
struct ObjectiveValue {
  double d = 0.0;
  std::vector<double> per_frequency;
};

/// M(K, j w_k) = (I + Phi_k K)^{-1} Phi_k K at every grid point.
std::vector<Eigen::MatrixXcd> closed_loop_samples(const FrequencyDataset& data,
                                                  const ControllerStructure& structure,
                                                  const Eigen::VectorXd& theta);

ObjectiveValue matching_objective(const FrequencyDataset& data, const RationalTransferMatrix& Md,
                                  const ControllerStructure& structure,
                                  const Eigen::VectorXd& theta);

/// Small-gain transfer samples G_k = Phi_k (I - M_k) for a stabilizing theta.
std::vector<Eigen::MatrixXcd> g_samples(const FrequencyDataset& data,
                                        const ControllerStructure& structure,
                                        const Eigen::VectorXd& theta_stab);

/// gamma = ||G_hat||_inf where G_hat is the Loewner identification of the
/// G samples; throws GammaEstimationError when G_hat comes out unstable.
double estimate_gamma(const FrequencyDataset& data, const ControllerStructure& structure,
                      const Eigen::VectorXd& theta_stab, double svd_rel_tol = 1e-10);

struct StabilityCheck {
  bool stable = false;
  double abscissa = 0.0;
  Eigen::Index identified_order = 0;
};

/// Loewner-identifies the closed loop from its samples and reports stability
/// of the identified model. Zero closed-loop data counts as stable.
StabilityCheck verify_closed_loop_stability(const FrequencyDataset& data,
                                            const ControllerStructure& structure,
                                            const Eigen::VectorXd& theta,
                                            double svd_rel_tol = 1e-10);

/// Rescales plant data by (j w + a)/(j w), absorbing one integrator into the
/// controller so the stable-controller machinery applies to PI/PID shapes.
FrequencyDataset filter_plant_for_integrator(const FrequencyDataset& data, double a);

}  // namespace ldisc
