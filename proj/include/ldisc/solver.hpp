// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ldisc/closed_loop.hpp"

namespace ldisc {

struct SubproblemOptions {
  int max_evaluations = 200;     // objective-evaluation budget per subproblem
  double fd_step = 1e-6;         // central-difference step scale
  double penalty_initial = 1e2;  // norm-constraint penalty weight, relative to d_i
  double penalty_growth = 10.0;
  int penalty_rounds = 3;
  double radius_fraction = 0.9;  // inner target as a fraction of eps / gamma
};

struct DesignConfig {
  double epsilon = 1.0;  // small-gain safety factor, (0, 1]
  double eta = 1e-9;     // stop threshold on the objective decrease
  int max_iter = 500;
  double svd_rel_tol = 1e-10;
  double beta_min = 1e-8;         // strict-feasibility floor for beta
  double stability_margin = 1e-9;
  int init_restarts = 50;
  int init_descent_iters = 40;
  std::uint64_t seed = 0;
  SubproblemOptions subproblem;

  void validate() const;
};

struct IterationRecord {
  int index = 0;            // 0 is the initial point
  double objective = 0.0;   // d_i
  double gamma = 0.0;       // bound active while producing this iterate (NaN at index 0)
  Eigen::VectorXd theta;
  double norm_margin = 0.0;  // eps/gamma - ||K_i - K_{i-1}||_inf (NaN at index 0)
  std::string subproblem_status;  // "initial" | "improved" | "unchanged"
  double wall_ms = 0.0;
};

enum class StopReason { converged, max_iterations };

struct DesignReport {
  std::vector<IterationRecord> records;
  Eigen::VectorXd final_theta;
  StopReason stop = StopReason::converged;
  std::string stop_detail;
  DesignConfig config;
  std::uint64_t dataset_hash = 0;
};

/// Multistart random search plus finite-difference descent on the spectral
/// abscissa of the identified closed loop. Throws InitializationError when the
/// restart budget runs out.
Eigen::VectorXd initialize_controller(const FrequencyDataset& data,
                                      const ControllerStructure& structure,
                                      const DesignConfig& config);

struct SubproblemResult {
  Eigen::VectorXd theta;
  double objective = 0.0;
  double difference_norm = 0.0;
  std::string status;  // "improved" | "unchanged"
};

/// One trust-region step: minimize the matching objective subject to
/// beta >= beta_min and ||K(theta) - K(theta_i)||_inf < eps/gamma, the norm
/// verified post-hoc with the exact state-space value. Never increases the
/// objective; returns theta_i unchanged when no improvement is found.
SubproblemResult solve_subproblem(const FrequencyDataset& data, const RationalTransferMatrix& Md,
                                  const ControllerStructure& structure,
                                  const Eigen::VectorXd& theta_i, double gamma,
                                  const DesignConfig& config);

/// The outer loop: estimate gamma from fresh G samples, solve the subproblem,
/// record, stop on objective stagnation or the iteration cap.
DesignReport run_ldisc(const FrequencyDataset& data, const RationalTransferMatrix& Md,
                       const ControllerStructure& structure, const Eigen::VectorXd& theta0,
                       const DesignConfig& config);

std::uint64_t dataset_hash(const FrequencyDataset& data);

}  // namespace ldisc
