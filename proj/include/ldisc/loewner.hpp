// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "ldisc/freq_data.hpp"

namespace ldisc {

/// Real descriptor system E x' = A x + B u, y = C x.
struct DescriptorRealization {
  Eigen::MatrixXd E;
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::MatrixXd C;

  Eigen::Index order() const { return A.rows(); }
  Eigen::Index inputs() const { return B.cols(); }
  Eigen::Index outputs() const { return C.rows(); }
};

/// Samples det(sE - A) at a handful of fixed shifts; false means the pencil
/// looks singular for every probe.
bool pencil_is_regular(const DescriptorRealization& sys);

/// C (sE - A)^{-1} B; throws SingularityError when the shift hits the pencil.
Eigen::MatrixXcd evaluate_realization(const DescriptorRealization& sys, Complex s);

/// Interpolation points with their data values. When `conjugate_paired` is
/// set, points come as adjacent (p, conj(p)) pairs with conjugated values and
/// the pencil construction rotates them to real coordinates.
struct InterpolationSet {
  Eigen::VectorXcd points;
  std::vector<Eigen::MatrixXcd> values;
  bool conjugate_paired = false;
};

/// Alternating split of the frequency-sorted samples (odd positions to mu,
/// even to lambda), each side closed under complex conjugation.
std::pair<InterpolationSet, InterpolationSet> partition_points(const FrequencyDataset& data);
std::pair<InterpolationSet, InterpolationSet> partition_points(
    const std::vector<FrequencySample>& samples);

/// Block Loewner pencil. For conjugate-paired input sets the stored matrices
/// are rotated to the real basis, so imaginary parts are round-off only.
struct LoewnerPencil {
  Eigen::MatrixXcd L;    // (m*n_o) x (p*n_i)
  Eigen::MatrixXcd Ls;   // same shape, shifted
  Eigen::MatrixXcd V;    // stacked right data, (m*n_o) x n_i
  Eigen::MatrixXcd W;    // stacked left data, n_o x (p*n_i)
  Eigen::VectorXcd mu;
  Eigen::VectorXcd lambda;
  Eigen::Index n_outputs = 0;
  Eigen::Index n_inputs = 0;
};

LoewnerPencil build_pencil(const InterpolationSet& mu, const InterpolationSet& lambda);

struct RealizeResult {
  DescriptorRealization system;
  Eigen::VectorXd row_singular_values;  // of [L, Ls]
  Eigen::VectorXd col_singular_values;  // of [L; Ls]
  std::vector<std::string> warnings;
};

/// Loewner identification: partition, pencil, rank-revealing SVD, projection.
/// Returns a real descriptor realization interpolating the data.
RealizeResult realize(const FrequencyDataset& data, double svd_rel_tol = 1e-10);
RealizeResult realize(const std::vector<FrequencySample>& samples, double svd_rel_tol = 1e-10);

}  // namespace ldisc
