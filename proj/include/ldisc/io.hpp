// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "ldisc/controller.hpp"
#include "ldisc/freq_data.hpp"
#include "ldisc/solver.hpp"

namespace ldisc::io {

inline constexpr const char* kVersion = "0.1.0";

/// Header stamped on every output; deterministic for identical inputs.
struct Provenance {
  std::string version = kVersion;
  std::string config_hash;  // hex FNV-1a of the serialized config
  std::uint64_t seed = 0;
};

std::string config_hash(const DesignConfig& config);

/// CSV dataset, one row per frequency: column `omega` then `re_i_j,im_i_j`
/// for every (output i, input j) in row-major order. `#` starts a comment.
FrequencyDataset load_dataset(const std::filesystem::path& path, Eigen::Index n_outputs,
                              Eigen::Index n_inputs);
void save_dataset(const std::filesystem::path& path, const FrequencyDataset& data,
                  const std::optional<Provenance>& provenance = std::nullopt);

RationalTransferMatrix load_rational(const std::filesystem::path& path);
void save_rational(const std::filesystem::path& path, const RationalTransferMatrix& model);

DescriptorRealization load_realization(const std::filesystem::path& path);
void save_realization(const std::filesystem::path& path, const DescriptorRealization& sys,
                      const std::optional<Provenance>& provenance = std::nullopt);

ControllerStructure load_structure(const std::filesystem::path& path);
void save_structure(const std::filesystem::path& path, const ControllerStructure& structure);

/// Controller file: structure, flattened theta, derived poles and per-entry
/// zeros for inspection.
void save_controller(const std::filesystem::path& path, const ControllerStructure& structure,
                     const Eigen::VectorXd& theta,
                     const std::optional<Provenance>& provenance = std::nullopt);
/// Reads back the `theta` array (accepts a controller file or a bare
/// {"theta": [...]} document).
Eigen::VectorXd load_theta(const std::filesystem::path& path);

void save_report(const std::filesystem::path& path, const DesignReport& report,
                 const ControllerStructure& structure,
                 const std::optional<Provenance>& provenance = std::nullopt);

/// Iteration log CSV: iter,objective,gamma,norm_margin,accepted,wall_ms.
void save_iteration_log(const std::filesystem::path& path, const DesignReport& report,
                        const std::optional<Provenance>& provenance = std::nullopt);

/// Evaluation CSV: omega, reference-model entries, closed-loop entries,
/// same re/im row-major entry convention as the dataset format.
void save_evaluation(const std::filesystem::path& path, const FrequencyDataset& data,
                     const RationalTransferMatrix& Md, const ControllerStructure& structure,
                     const Eigen::VectorXd& theta,
                     const std::optional<Provenance>& provenance = std::nullopt);

}  // namespace ldisc::io
