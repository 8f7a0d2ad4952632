// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "ldisc/errors.hpp"

namespace ldisc {

using Complex = std::complex<double>;

/// One frequency-response sample: the plant value at s = j*omega.
struct FrequencySample {
  double omega = 0.0;       // rad/s, > 0
  Eigen::MatrixXcd response;  // n_o x n_i
};

/// Immutable ordered set of frequency-response samples on a positive grid.
///
/// Frequencies are strictly increasing and only the positive half-axis is
/// stored; the conjugate-symmetric extension is applied where needed by the
/// interpolation machinery, never materialized here.
class FrequencyDataset {
 public:
  explicit FrequencyDataset(std::vector<FrequencySample> samples);

  Eigen::Index size() const { return static_cast<Eigen::Index>(samples_.size()); }
  Eigen::Index outputs() const { return n_outputs_; }
  Eigen::Index inputs() const { return n_inputs_; }

  const FrequencySample& operator[](Eigen::Index k) const { return samples_[static_cast<std::size_t>(k)]; }
  const std::vector<FrequencySample>& samples() const { return samples_; }
  std::vector<double> frequencies() const;

  auto begin() const { return samples_.begin(); }
  auto end() const { return samples_.end(); }

 private:
  std::vector<FrequencySample> samples_;
  Eigen::Index n_outputs_ = 0;
  Eigen::Index n_inputs_ = 0;
};

/// Geometrically spaced grid with exact endpoints, count >= 2.
std::vector<double> logspace_frequencies(double w_min, double w_max, int count);

/// One rational entry: real coefficients in descending powers of s.
struct RationalEntry {
  Eigen::VectorXd num;
  Eigen::VectorXd den;
};

/// Matrix of independent scalar rational functions (reference models, plants).
class RationalTransferMatrix {
 public:
  RationalTransferMatrix(Eigen::Index n_outputs, Eigen::Index n_inputs);
  static RationalTransferMatrix siso(Eigen::VectorXd num, Eigen::VectorXd den);

  void set_entry(Eigen::Index i, Eigen::Index j, Eigen::VectorXd num, Eigen::VectorXd den);
  const RationalEntry& entry(Eigen::Index i, Eigen::Index j) const;

  Eigen::Index outputs() const { return n_outputs_; }
  Eigen::Index inputs() const { return n_inputs_; }

  /// Entrywise num(s)/den(s); throws SingularityError at a denominator root.
  Eigen::MatrixXcd evaluate(Complex s) const;

 private:
  Eigen::Index n_outputs_;
  Eigen::Index n_inputs_;
  std::vector<RationalEntry> entries_;  // row-major
};

/// Samples the model entrywise at s = j*omega for each grid frequency.
FrequencyDataset sample_rational(const RationalTransferMatrix& model,
                                 const std::vector<double>& freqs);

}  // namespace ldisc
