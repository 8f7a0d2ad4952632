// SPDX-License-Identifier: Apache-2.0
#include "ldisc/closed_loop.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "ldisc/linsys.hpp"

namespace ldisc {

namespace {

void check_loop_dimensions(const FrequencyDataset& data, const ControllerStructure& structure) {
  if (structure.n_i() != data.inputs() || structure.n_o() != data.outputs()) {
    std::ostringstream msg;
    msg << "controller shape " << structure.n_i() << "x" << structure.n_o()
        << " does not close against plant data " << data.outputs() << "x" << data.inputs();
    throw DimensionError(msg.str());
  }
}

}  // namespace

std::vector<Eigen::MatrixXcd> closed_loop_samples(const FrequencyDataset& data,
                                                  const ControllerStructure& structure,
                                                  const Eigen::VectorXd& theta) {
  check_loop_dimensions(data, structure);
  const Eigen::Index n_y = data.outputs();
  std::vector<Eigen::MatrixXcd> out;
  out.reserve(static_cast<std::size_t>(data.size()));
  for (const auto& sample : data) {
    const Eigen::MatrixXcd K = evaluate_controller(structure, theta, Complex(0.0, sample.omega));
    const Eigen::MatrixXcd loop = sample.response * K;
    const Eigen::MatrixXcd ret = Eigen::MatrixXcd::Identity(n_y, n_y) + loop;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(ret);
    if (!(lu.rcond() > 1e-12)) {
      std::ostringstream msg;
      msg << "return difference I + Phi K is singular at omega = " << sample.omega;
      throw SingularityError(msg.str());
    }
    out.push_back(lu.solve(loop));
  }
  return out;
}

ObjectiveValue matching_objective(const FrequencyDataset& data, const RationalTransferMatrix& Md,
                                  const ControllerStructure& structure,
                                  const Eigen::VectorXd& theta) {
  check_loop_dimensions(data, structure);
  if (Md.outputs() != data.outputs() || Md.inputs() != data.outputs())
    throw DimensionError("reference model must be square n_o x n_o");
  const auto M = closed_loop_samples(data, structure, theta);
  ObjectiveValue value;
  value.per_frequency.reserve(M.size());
  double acc = 0.0;
  for (Eigen::Index k = 0; k < data.size(); ++k) {
    const Eigen::MatrixXcd ref = Md.evaluate(Complex(0.0, data[k].omega));
    const double err = (ref - M[static_cast<std::size_t>(k)]).squaredNorm();
    value.per_frequency.push_back(err);
    acc += err;
  }
  value.d = acc / static_cast<double>(data.size());
  return value;
}

std::vector<Eigen::MatrixXcd> g_samples(const FrequencyDataset& data,
                                        const ControllerStructure& structure,
                                        const Eigen::VectorXd& theta_stab) {
  check_loop_dimensions(data, structure);
  if (data.outputs() != data.inputs())
    throw DimensionError("small-gain samples require a square plant");
  const auto M = closed_loop_samples(data, structure, theta_stab);
  const Eigen::Index n = data.outputs();
  std::vector<Eigen::MatrixXcd> out;
  out.reserve(M.size());
  for (Eigen::Index k = 0; k < data.size(); ++k)
    out.push_back(data[k].response *
                  (Eigen::MatrixXcd::Identity(n, n) - M[static_cast<std::size_t>(k)]));
  return out;
}

double estimate_gamma(const FrequencyDataset& data, const ControllerStructure& structure,
                      const Eigen::VectorXd& theta_stab, double svd_rel_tol) {
  const auto G = g_samples(data, structure, theta_stab);
  std::vector<FrequencySample> samples;
  samples.reserve(G.size());
  for (Eigen::Index k = 0; k < data.size(); ++k)
    samples.push_back({data[k].omega, G[static_cast<std::size_t>(k)]});

  RealizeResult fit = realize(samples, svd_rel_tol);
  const double alpha = spectral_abscissa(fit.system);
  if (!(alpha < 0.0)) {
    std::ostringstream msg;
    msg << "identified loop transfer is unstable (abscissa " << alpha
        << "); the loop is not stabilized or the data is insufficient";
    throw GammaEstimationError(msg.str());
  }

  HinfOptions options;
  options.rel_tol = 1e-6;
  options.sweep_min = data[0].omega / 100.0;
  options.sweep_max = data[data.size() - 1].omega * 100.0;
  return hinf_norm(fit.system, options).norm;
}

StabilityCheck verify_closed_loop_stability(const FrequencyDataset& data,
                                            const ControllerStructure& structure,
                                            const Eigen::VectorXd& theta, double svd_rel_tol) {
  const auto M = closed_loop_samples(data, structure, theta);

  double loop_scale = 0.0;
  double data_scale = 0.0;
  for (Eigen::Index k = 0; k < data.size(); ++k) {
    loop_scale = std::max(loop_scale, M[static_cast<std::size_t>(k)].cwiseAbs().maxCoeff());
    data_scale = std::max(data_scale, data[k].response.cwiseAbs().maxCoeff());
  }
  StabilityCheck check;
  if (loop_scale <= 1e-14 * (1.0 + data_scale)) {  // K = 0: vacuously stable
    check.stable = true;
    check.abscissa = -std::numeric_limits<double>::infinity();
    check.identified_order = 0;
    return check;
  }

  std::vector<FrequencySample> samples;
  samples.reserve(M.size());
  for (Eigen::Index k = 0; k < data.size(); ++k)
    samples.push_back({data[k].omega, M[static_cast<std::size_t>(k)]});
  RealizeResult fit = realize(samples, svd_rel_tol);
  check.abscissa = spectral_abscissa(fit.system);
  check.stable = check.abscissa < -1e-9;
  check.identified_order = fit.system.order();
  return check;
}

FrequencyDataset filter_plant_for_integrator(const FrequencyDataset& data, double a) {
  if (!(a > 0.0)) throw ArgumentError("filter parameter a must be positive");
  std::vector<FrequencySample> samples;
  samples.reserve(static_cast<std::size_t>(data.size()));
  for (const auto& s : data) {
    const Complex jw(0.0, s.omega);
    samples.push_back({s.omega, (s.response * ((jw + a) / jw)).eval()});
  }
  return FrequencyDataset(std::move(samples));
}

}  // namespace ldisc
