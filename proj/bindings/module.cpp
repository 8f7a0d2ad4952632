// SPDX-License-Identifier: Apache-2.0
#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ldisc/examples.hpp"
#include "ldisc/io.hpp"
#include "ldisc/linsys.hpp"
#include "ldisc/solver.hpp"

namespace py = pybind11;
using namespace ldisc;

namespace {

FrequencyDataset dataset_from_arrays(const Eigen::VectorXd& omegas,
                                     const std::vector<Eigen::MatrixXcd>& responses) {
  if (static_cast<std::size_t>(omegas.size()) != responses.size())
    throw DimensionError("omega/response count mismatch");
  std::vector<FrequencySample> samples;
  samples.reserve(responses.size());
  for (Eigen::Index k = 0; k < omegas.size(); ++k)
    samples.push_back({omegas(k), responses[static_cast<std::size_t>(k)]});
  return FrequencyDataset(std::move(samples));
}

RationalTransferMatrix rational_from_lists(
    const std::vector<std::vector<Eigen::VectorXd>>& num,
    const std::vector<std::vector<Eigen::VectorXd>>& den) {
  const Eigen::Index n_o = static_cast<Eigen::Index>(num.size());
  if (n_o == 0 || num.size() != den.size()) throw DimensionError("num/den grids must match");
  const Eigen::Index n_i = static_cast<Eigen::Index>(num.front().size());
  RationalTransferMatrix model(n_o, n_i);
  for (Eigen::Index i = 0; i < n_o; ++i)
    for (Eigen::Index j = 0; j < n_i; ++j)
      model.set_entry(i, j, num[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                      den[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
  return model;
}

}  // namespace

PYBIND11_MODULE(_ldisc, m) {
  m.doc() = "Data-driven structured controller design from frequency-response samples";

  py::register_exception<ParseError>(m, "ParseError");
  py::register_exception<DimensionError>(m, "DimensionError");
  py::register_exception<SingularityError>(m, "SingularityError");
  py::register_exception<DegenerateDataError>(m, "DegenerateDataError");
  py::register_exception<InitializationError>(m, "InitializationError");
  py::register_exception<GammaEstimationError>(m, "GammaEstimationError");
  static py::exception<Error> base_error(m, "Error");

  py::class_<FrequencySample>(m, "FrequencySample")
      .def(py::init([](double omega, const Eigen::MatrixXcd& response) {
             return FrequencySample{omega, response};
           }),
           py::arg("omega"), py::arg("response"))
      .def_readonly("omega", &FrequencySample::omega)
      .def_readonly("response", &FrequencySample::response);

  py::class_<FrequencyDataset>(m, "FrequencyDataset")
      .def(py::init(&dataset_from_arrays), py::arg("omegas"), py::arg("responses"))
      .def("__len__", &FrequencyDataset::size)
      .def("__getitem__",
           [](const FrequencyDataset& d, Eigen::Index k) {
             if (k < 0 || k >= d.size()) throw py::index_error();
             return d[k];
           })
      .def_property_readonly("outputs", &FrequencyDataset::outputs)
      .def_property_readonly("inputs", &FrequencyDataset::inputs)
      .def("frequencies", &FrequencyDataset::frequencies);

  py::class_<RationalTransferMatrix>(m, "RationalTransferMatrix")
      .def(py::init(&rational_from_lists), py::arg("num"), py::arg("den"))
      .def_property_readonly("outputs", &RationalTransferMatrix::outputs)
      .def_property_readonly("inputs", &RationalTransferMatrix::inputs)
      .def("evaluate", &RationalTransferMatrix::evaluate, py::arg("s"));

  py::class_<DescriptorRealization>(m, "DescriptorRealization")
      .def(py::init([](Eigen::MatrixXd E, Eigen::MatrixXd A, Eigen::MatrixXd B,
                       Eigen::MatrixXd C) {
             return DescriptorRealization{std::move(E), std::move(A), std::move(B), std::move(C)};
           }),
           py::arg("E"), py::arg("A"), py::arg("B"), py::arg("C"))
      .def_readonly("E", &DescriptorRealization::E)
      .def_readonly("A", &DescriptorRealization::A)
      .def_readonly("B", &DescriptorRealization::B)
      .def_readonly("C", &DescriptorRealization::C)
      .def_property_readonly("order", &DescriptorRealization::order);

  py::enum_<Properness>(m, "Properness")
      .value("strict_proper", Properness::strict_proper)
      .value("biproper", Properness::biproper);

  py::class_<ControllerStructure>(m, "ControllerStructure")
      .def(py::init<Eigen::Index, Eigen::Index, int, Eigen::MatrixXi, Properness>(),
           py::arg("n_inputs"), py::arg("n_outputs"), py::arg("n_p"), py::arg("n_z"),
           py::arg("properness"))
      .def_static("siso", &ControllerStructure::siso, py::arg("n_p"), py::arg("n_z"),
                  py::arg("properness"))
      .def_property_readonly("n_inputs", &ControllerStructure::n_i)
      .def_property_readonly("n_outputs", &ControllerStructure::n_o)
      .def_property_readonly("n_p", &ControllerStructure::n_p)
      .def_property_readonly("theta_size", &ControllerStructure::theta_size);

  py::class_<SubproblemOptions>(m, "SubproblemOptions")
      .def(py::init<>())
      .def_readwrite("max_evaluations", &SubproblemOptions::max_evaluations)
      .def_readwrite("fd_step", &SubproblemOptions::fd_step)
      .def_readwrite("penalty_initial", &SubproblemOptions::penalty_initial)
      .def_readwrite("penalty_growth", &SubproblemOptions::penalty_growth)
      .def_readwrite("penalty_rounds", &SubproblemOptions::penalty_rounds)
      .def_readwrite("radius_fraction", &SubproblemOptions::radius_fraction);

  py::class_<DesignConfig>(m, "DesignConfig")
      .def(py::init<>())
      .def_readwrite("epsilon", &DesignConfig::epsilon)
      .def_readwrite("eta", &DesignConfig::eta)
      .def_readwrite("max_iter", &DesignConfig::max_iter)
      .def_readwrite("svd_rel_tol", &DesignConfig::svd_rel_tol)
      .def_readwrite("beta_min", &DesignConfig::beta_min)
      .def_readwrite("init_restarts", &DesignConfig::init_restarts)
      .def_readwrite("seed", &DesignConfig::seed)
      .def_readwrite("subproblem", &DesignConfig::subproblem);

  py::class_<IterationRecord>(m, "IterationRecord")
      .def_readonly("index", &IterationRecord::index)
      .def_readonly("objective", &IterationRecord::objective)
      .def_readonly("gamma", &IterationRecord::gamma)
      .def_readonly("theta", &IterationRecord::theta)
      .def_readonly("norm_margin", &IterationRecord::norm_margin)
      .def_readonly("status", &IterationRecord::subproblem_status)
      .def_readonly("wall_ms", &IterationRecord::wall_ms);

  py::enum_<StopReason>(m, "StopReason")
      .value("converged", StopReason::converged)
      .value("max_iterations", StopReason::max_iterations);

  py::class_<DesignReport>(m, "DesignReport")
      .def_readonly("records", &DesignReport::records)
      .def_readonly("final_theta", &DesignReport::final_theta)
      .def_readonly("stop", &DesignReport::stop)
      .def_readonly("stop_detail", &DesignReport::stop_detail);

  py::class_<ObjectiveValue>(m, "ObjectiveValue")
      .def_readonly("d", &ObjectiveValue::d)
      .def_readonly("per_frequency", &ObjectiveValue::per_frequency);

  py::class_<StabilityCheck>(m, "StabilityCheck")
      .def_readonly("stable", &StabilityCheck::stable)
      .def_readonly("abscissa", &StabilityCheck::abscissa)
      .def_readonly("identified_order", &StabilityCheck::identified_order);

  py::class_<HinfResult>(m, "HinfResult")
      .def_readonly("norm", &HinfResult::norm)
      .def_readonly("peak_omega", &HinfResult::peak_omega)
      .def_readonly("achieved_rel_tol", &HinfResult::achieved_rel_tol)
      .def_readonly("grid_fallback", &HinfResult::grid_fallback);

  py::class_<RealizeResult>(m, "RealizeResult")
      .def_readonly("system", &RealizeResult::system)
      .def_readonly("warnings", &RealizeResult::warnings);

  m.def("logspace_frequencies", &logspace_frequencies, py::arg("w_min"), py::arg("w_max"),
        py::arg("count"));
  m.def("sample_rational", &sample_rational, py::arg("model"), py::arg("freqs"));
  m.def(
      "realize",
      [](const FrequencyDataset& data, double svd_rel_tol) { return realize(data, svd_rel_tol); },
      py::arg("data"), py::arg("svd_rel_tol") = 1e-10);
  m.def("evaluate_realization", &evaluate_realization, py::arg("system"), py::arg("s"));
  m.def("spectral_abscissa", &spectral_abscissa, py::arg("system"));
  m.def("is_stable", &is_stable, py::arg("system"), py::arg("margin") = 1e-9);
  m.def(
      "hinf_norm",
      [](const DescriptorRealization& sys, double rel_tol) { return hinf_norm(sys, rel_tol); },
      py::arg("system"), py::arg("rel_tol") = 1e-6);
  m.def("theta_dimension", &theta_dimension, py::arg("structure"));
  m.def("evaluate_controller", &evaluate_controller, py::arg("structure"), py::arg("theta"),
        py::arg("s"));
  m.def("stability_residuals", &stability_residuals, py::arg("structure"), py::arg("theta"));
  m.def("controller_realization", &controller_realization, py::arg("structure"),
        py::arg("theta"));
  m.def("controller_difference_norm", &controller_difference_norm, py::arg("structure"),
        py::arg("theta_a"), py::arg("theta_b"), py::arg("rel_tol") = 1e-6);
  m.def("closed_loop_samples", &closed_loop_samples, py::arg("data"), py::arg("structure"),
        py::arg("theta"));
  m.def("matching_objective", &matching_objective, py::arg("data"), py::arg("reference"),
        py::arg("structure"), py::arg("theta"));
  m.def("g_samples", &g_samples, py::arg("data"), py::arg("structure"), py::arg("theta"));
  m.def("estimate_gamma", &estimate_gamma, py::arg("data"), py::arg("structure"),
        py::arg("theta"), py::arg("svd_rel_tol") = 1e-10);
  m.def("verify_closed_loop_stability", &verify_closed_loop_stability, py::arg("data"),
        py::arg("structure"), py::arg("theta"), py::arg("svd_rel_tol") = 1e-10);
  m.def("filter_plant_for_integrator", &filter_plant_for_integrator, py::arg("data"),
        py::arg("a"));
  m.def("initialize_controller", &initialize_controller, py::arg("data"), py::arg("structure"),
        py::arg("config"));
  m.def("run_ldisc", &run_ldisc, py::arg("data"), py::arg("reference"), py::arg("structure"),
        py::arg("theta0"), py::arg("config"));

  m.def("load_dataset", &io::load_dataset, py::arg("path"), py::arg("n_outputs"),
        py::arg("n_inputs"));
  m.def(
      "save_dataset",
      [](const std::string& path, const FrequencyDataset& data) {
        io::save_dataset(path, data);
      },
      py::arg("path"), py::arg("data"));

  auto ex = m.def_submodule("examples", "bundled case studies");
  ex.def("dc_motor_plant", &examples::dc_motor_plant);
  ex.def("dc_motor_reference", &examples::dc_motor_reference);
  ex.def("ideal_dc_controller", &examples::ideal_dc_controller);
  ex.def("f16_reference", &examples::f16_reference);
  ex.def("nmp_demo_plant", &examples::nmp_demo_plant);
  ex.def("dc_motor_dataset", &examples::dc_motor_dataset);
  ex.def("mismatch_dataset", &examples::mismatch_dataset);
  ex.def("dc_motor_structure", &examples::dc_motor_structure);
  ex.def("mismatch_structure", &examples::mismatch_structure);
}
