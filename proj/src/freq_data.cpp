// SPDX-License-Identifier: Apache-2.0
#include "ldisc/freq_data.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "ldisc/polynomial.hpp"

namespace ldisc {

FrequencyDataset::FrequencyDataset(std::vector<FrequencySample> samples)
    : samples_(std::move(samples)) {
  if (samples_.size() < 2) throw ArgumentError("dataset needs at least 2 samples");
  n_outputs_ = samples_.front().response.rows();
  n_inputs_ = samples_.front().response.cols();
  if (n_outputs_ < 1 || n_inputs_ < 1) throw DimensionError("empty response matrix");
  double prev = 0.0;
  for (const auto& s : samples_) {
    if (!(s.omega > 0.0) || !std::isfinite(s.omega))
      throw ArgumentError("frequencies must be positive and finite");
    if (!(s.omega > prev)) throw ArgumentError("frequencies must be strictly increasing");
    prev = s.omega;
    if (s.response.rows() != n_outputs_ || s.response.cols() != n_inputs_)
      throw DimensionError("inconsistent response shape across samples");
    if (!s.response.allFinite()) throw ArgumentError("non-finite response entry");
  }
}

std::vector<double> FrequencyDataset::frequencies() const {
  std::vector<double> w;
  w.reserve(samples_.size());
  for (const auto& s : samples_) w.push_back(s.omega);
  return w;
}

std::vector<double> logspace_frequencies(double w_min, double w_max, int count) {
  if (!(w_min > 0.0) || !(w_min < w_max))
    throw ArgumentError("logspace requires 0 < w_min < w_max");
  if (count < 2) throw ArgumentError("logspace requires count >= 2");
  std::vector<double> w(static_cast<std::size_t>(count));
  const double lmin = std::log10(w_min);
  const double lmax = std::log10(w_max);
  for (int k = 0; k < count; ++k)
    w[static_cast<std::size_t>(k)] =
        std::pow(10.0, lmin + (lmax - lmin) * static_cast<double>(k) / (count - 1));
  w.front() = w_min;  // exact endpoints
  w.back() = w_max;
  return w;
}

RationalTransferMatrix::RationalTransferMatrix(Eigen::Index n_outputs, Eigen::Index n_inputs)
    : n_outputs_(n_outputs), n_inputs_(n_inputs) {
  if (n_outputs < 1 || n_inputs < 1) throw DimensionError("rational matrix needs positive dims");
  RationalEntry zero;
  zero.num = Eigen::VectorXd::Zero(1);
  zero.den = Eigen::VectorXd::Ones(1);
  entries_.assign(static_cast<std::size_t>(n_outputs * n_inputs), zero);
}

RationalTransferMatrix RationalTransferMatrix::siso(Eigen::VectorXd num, Eigen::VectorXd den) {
  RationalTransferMatrix m(1, 1);
  m.set_entry(0, 0, std::move(num), std::move(den));
  return m;
}

void RationalTransferMatrix::set_entry(Eigen::Index i, Eigen::Index j, Eigen::VectorXd num,
                                       Eigen::VectorXd den) {
  if (i < 0 || i >= n_outputs_ || j < 0 || j >= n_inputs_)
    throw DimensionError("entry index out of range");
  if (num.size() == 0) num = Eigen::VectorXd::Zero(1);
  if (den.size() == 0 || den(0) == 0.0)
    throw ArgumentError("denominator leading coefficient must be nonzero");
  if (!num.allFinite() || !den.allFinite()) throw ArgumentError("non-finite coefficient");
  entries_[static_cast<std::size_t>(i * n_inputs_ + j)] = {std::move(num), std::move(den)};
}

const RationalEntry& RationalTransferMatrix::entry(Eigen::Index i, Eigen::Index j) const {
  if (i < 0 || i >= n_outputs_ || j < 0 || j >= n_inputs_)
    throw DimensionError("entry index out of range");
  return entries_[static_cast<std::size_t>(i * n_inputs_ + j)];
}

Eigen::MatrixXcd RationalTransferMatrix::evaluate(Complex s) const {
  Eigen::MatrixXcd out(n_outputs_, n_inputs_);
  for (Eigen::Index i = 0; i < n_outputs_; ++i) {
    for (Eigen::Index j = 0; j < n_inputs_; ++j) {
      const auto& e = entry(i, j);
      const Complex d = poly::evaluate(e.den, s);
      const Complex n = poly::evaluate(e.num, s);
      const double dscale = e.den.cwiseAbs().maxCoeff();
      if (std::abs(d) <= 1e-300 * std::max(1.0, dscale)) {
        std::ostringstream msg;
        msg << "evaluation at a pole of entry (" << i << "," << j << ") at s = " << s.real()
            << (s.imag() >= 0 ? "+" : "") << s.imag() << "j";
        throw SingularityError(msg.str());
      }
      out(i, j) = n / d;
      if (!std::isfinite(out(i, j).real()) || !std::isfinite(out(i, j).imag())) {
        std::ostringstream msg;
        msg << "non-finite evaluation of entry (" << i << "," << j << ")";
        throw SingularityError(msg.str());
      }
    }
  }
  return out;
}

FrequencyDataset sample_rational(const RationalTransferMatrix& model,
                                 const std::vector<double>& freqs) {
  std::vector<FrequencySample> samples;
  samples.reserve(freqs.size());
  for (double w : freqs) {
    try {
      samples.push_back({w, model.evaluate(Complex(0.0, w))});
    } catch (const SingularityError&) {
      std::ostringstream msg;
      msg << "model has a pole on the grid at omega = " << w;
      throw SingularityError(msg.str());
    }
  }
  return FrequencyDataset(std::move(samples));
}

}  // namespace ldisc
