// SPDX-License-Identifier: Apache-2.0
//
// ldisc command line: identify, analyze, and design from frequency data.

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ldisc/examples.hpp"
#include "ldisc/io.hpp"
#include "ldisc/linsys.hpp"
#include "ldisc/solver.hpp"

namespace {

namespace fs = std::filesystem;
using namespace ldisc;

constexpr int kExitMaxIter = 2;
constexpr int kExitParse = 10;
constexpr int kExitDimension = 11;
constexpr int kExitInitialization = 12;
constexpr int kExitGamma = 13;
constexpr int kExitNumeric = 14;

int log_level() {
  const char* env = std::getenv("LDISC_LOG");
  if (!env) return 1;
  try {
    return std::stoi(env);
  } catch (...) {
    return 1;
  }
}

void info(const std::string& message) {
  if (log_level() >= 1) std::cout << message << "\n";
}

struct DesignInputs {
  FrequencyDataset data;
  RationalTransferMatrix reference;
  ControllerStructure structure;
};

struct DesignFlags {
  std::string data_path;
  std::string ref_path;
  std::string structure_path;
  std::string init_path;
  bool auto_init = false;
  std::string demo;
  std::string out_dir = ".";
  int data_outputs = 1;
  int data_inputs = 1;
  DesignConfig config;
};

DesignInputs gather_inputs(const DesignFlags& flags) {
  if (flags.demo == "dc-motor")
    return {examples::dc_motor_dataset(), examples::dc_motor_reference(),
            examples::dc_motor_structure()};
  if (flags.demo == "mismatch")
    return {examples::mismatch_dataset(), examples::f16_reference(),
            examples::mismatch_structure()};
  if (!flags.demo.empty()) throw ArgumentError("unknown demo '" + flags.demo + "'");

  ControllerStructure structure = io::load_structure(flags.structure_path);
  FrequencyDataset data = io::load_dataset(flags.data_path, structure.n_o(), structure.n_i());
  RationalTransferMatrix reference = io::load_rational(flags.ref_path);
  return {std::move(data), std::move(reference), std::move(structure)};
}

int run_design(const DesignFlags& flags) {
  const DesignInputs inputs = gather_inputs(flags);
  fs::create_directories(flags.out_dir);

  io::Provenance provenance;
  provenance.config_hash = io::config_hash(flags.config);
  provenance.seed = flags.config.seed;

  Eigen::VectorXd theta0;
  if (!flags.init_path.empty()) {
    theta0 = io::load_theta(flags.init_path);
  } else {
    info("searching for a stabilizing initial controller...");
    theta0 = initialize_controller(inputs.data, inputs.structure, flags.config);
  }

  info("running the design loop...");
  const DesignReport report =
      run_ldisc(inputs.data, inputs.reference, inputs.structure, theta0, flags.config);

  const fs::path out(flags.out_dir);
  io::save_report(out / "report.json", report, inputs.structure, provenance);
  io::save_iteration_log(out / "iterations.csv", report, provenance);
  io::save_controller(out / "controller.json", inputs.structure, report.final_theta, provenance);
  io::save_evaluation(out / "evaluation.csv", inputs.data, inputs.reference, inputs.structure,
                      report.final_theta, provenance);
  io::save_dataset(out / "dataset.csv", inputs.data, provenance);

  const double final_objective = report.records.back().objective;
  std::cout << "final objective: " << final_objective << "\n";
  std::cout << "iterations: " << report.records.size() - 1 << " (" << report.stop_detail << ")\n";
  std::cout << "outputs written to " << out.string() << "\n";
  return report.stop == StopReason::converged ? 0 : kExitMaxIter;
}

int run_demo(const std::string& name, DesignFlags flags) {
  flags.demo = name;
  const DesignInputs inputs = gather_inputs(flags);
  fs::create_directories(flags.out_dir);
  const fs::path out(flags.out_dir);
  io::save_rational(out / "reference.json", inputs.reference);
  io::save_structure(out / "structure.json", inputs.structure);
  return run_design(flags);
}

int run_identify(const std::string& data_path, int n_outputs, int n_inputs, double svd_tol,
                 const std::string& out_path) {
  const FrequencyDataset data = io::load_dataset(data_path, n_outputs, n_inputs);
  const RealizeResult fit = realize(data, svd_tol);
  for (const auto& w : fit.warnings) std::cerr << "warning: " << w << "\n";

  double residual = 0.0;
  double scale = 0.0;
  for (const auto& s : data) {
    const Eigen::MatrixXcd value = evaluate_realization(fit.system, Complex(0.0, s.omega));
    residual = std::max(residual, (value - s.response).norm());
    scale = std::max(scale, s.response.norm());
  }
  std::cout << "order: " << fit.system.order() << "\n";
  std::cout << "interpolation residual: " << residual / (1.0 + scale) << " (relative)\n";
  if (!out_path.empty()) {
    io::save_realization(out_path, fit.system);
    std::cout << "realization written to " << out_path << "\n";
  }
  return 0;
}

int run_hinf(const std::string& path, double rel_tol) {
  const DescriptorRealization sys = io::load_realization(path);
  const HinfResult result = hinf_norm(sys, rel_tol);
  std::cout << "hinf norm: " << result.norm << "\n";
  std::cout << "peak omega: " << result.peak_omega << " rad/s\n";
  std::cout << "achieved rel tol: " << result.achieved_rel_tol
            << (result.grid_fallback ? " (grid fallback)" : "") << "\n";
  return 0;
}

int run_abscissa(const std::string& path) {
  const DescriptorRealization sys = io::load_realization(path);
  const double alpha = spectral_abscissa(sys);
  std::cout << "spectral abscissa: " << alpha << "\n";
  std::cout << "stable: " << (is_stable(sys) ? "yes" : "no") << "\n";
  return 0;
}

int run_evaluate(const std::string& data_path, const std::string& ref_path,
                 const std::string& controller_path, const std::string& out_path) {
  const ControllerStructure structure = [&] {
    return io::load_structure(controller_path);
  }();
  const FrequencyDataset data = io::load_dataset(data_path, structure.n_o(), structure.n_i());
  const RationalTransferMatrix reference = io::load_rational(ref_path);
  const Eigen::VectorXd theta = io::load_theta(controller_path);
  io::save_evaluation(out_path, data, reference, structure, theta);
  std::cout << "evaluation written to " << out_path << "\n";
  return 0;
}

int dispatch_errors(const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDimension;
  } catch (const InitializationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInitialization;
  } catch (const GammaEstimationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitGamma;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

void add_config_flags(CLI::App* cmd, DesignConfig& config) {
  cmd->add_option("--eps", config.epsilon, "small-gain safety factor, (0, 1]")
      ->check(CLI::Range(1e-12, 1.0));
  cmd->add_option("--eta", config.eta, "stop threshold on the objective decrease")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-iter", config.max_iter, "outer iteration cap")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--svd-tol", config.svd_rel_tol, "Loewner SVD truncation tolerance")
      ->check(CLI::Range(1e-300, 0.999999));
  cmd->add_option("--seed", config.seed, "random seed for the initialization search");
  cmd->add_option("--restarts", config.init_restarts, "initialization restart budget")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--inner-evals", config.subproblem.max_evaluations,
                  "objective-evaluation budget per subproblem")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ldisc: data-driven structured controller design from frequency samples"};
  app.require_subcommand(1);

  DesignFlags design_flags;
  auto* design = app.add_subcommand("design", "run the full iterative design");
  design->add_option("--data", design_flags.data_path, "dataset CSV");
  design->add_option("--ref", design_flags.ref_path, "reference model file");
  design->add_option("--structure", design_flags.structure_path, "controller structure file");
  design->add_option("--init", design_flags.init_path, "initial controller file");
  design->add_flag("--auto-init", design_flags.auto_init, "search for a stabilizing start");
  design->add_option("--demo", design_flags.demo, "built-in example: dc-motor | mismatch");
  design->add_option("--out", design_flags.out_dir, "output directory");
  add_config_flags(design, design_flags.config);
  design->callback([&design_flags]() {
    if (design_flags.demo.empty()) {
      if (design_flags.data_path.empty() || design_flags.ref_path.empty() ||
          design_flags.structure_path.empty())
        throw CLI::ValidationError("design", "--data, --ref and --structure are required");
      if (design_flags.init_path.empty() && !design_flags.auto_init)
        throw CLI::ValidationError("design", "provide --init FILE or --auto-init");
    }
  });

  std::string demo_name;
  DesignFlags demo_flags;
  auto* demo = app.add_subcommand("demo", "write a bundled example and run the pipeline on it");
  demo->add_option("name", demo_name, "dc-motor | mismatch")->required();
  demo->add_option("--out", demo_flags.out_dir, "output directory");
  add_config_flags(demo, demo_flags.config);

  std::string id_data, id_out;
  int id_outputs = 1, id_inputs = 1;
  double id_tol = 1e-10;
  auto* identify = app.add_subcommand("identify", "Loewner identification of a dataset");
  identify->add_option("--data", id_data, "dataset CSV")->required();
  identify->add_option("--outputs", id_outputs, "dataset output count");
  identify->add_option("--inputs", id_inputs, "dataset input count");
  identify->add_option("--svd-tol", id_tol, "SVD truncation tolerance")
      ->check(CLI::Range(1e-300, 0.999999));
  identify->add_option("--out", id_out, "realization file to write");

  std::string hinf_path;
  double hinf_tol = 1e-6;
  auto* hinf = app.add_subcommand("hinf-norm", "H-infinity norm of a realization file");
  hinf->add_option("realization", hinf_path, "realization file")->required();
  hinf->add_option("--rel-tol", hinf_tol, "relative accuracy")->check(CLI::Range(1e-12, 0.1));

  std::string absc_path;
  auto* absc = app.add_subcommand("abscissa", "spectral abscissa of a realization file");
  absc->add_option("realization", absc_path, "realization file")->required();

  std::string ev_data, ev_ref, ev_controller, ev_out = "evaluation.csv";
  auto* evaluate = app.add_subcommand("evaluate", "closed-loop response against the reference");
  evaluate->add_option("--data", ev_data, "dataset CSV")->required();
  evaluate->add_option("--ref", ev_ref, "reference model file")->required();
  evaluate->add_option("--controller", ev_controller, "controller file")->required();
  evaluate->add_option("--out", ev_out, "CSV to write");

  CLI11_PARSE(app, argc, argv);

  if (design->parsed()) return dispatch_errors([&] { return run_design(design_flags); });
  if (demo->parsed()) return dispatch_errors([&] { return run_demo(demo_name, demo_flags); });
  if (identify->parsed())
    return dispatch_errors([&] { return run_identify(id_data, id_outputs, id_inputs, id_tol, id_out); });
  if (hinf->parsed()) return dispatch_errors([&] { return run_hinf(hinf_path, hinf_tol); });
  if (absc->parsed()) return dispatch_errors([&] { return run_abscissa(absc_path); });
  if (evaluate->parsed())
    return dispatch_errors([&] { return run_evaluate(ev_data, ev_ref, ev_controller, ev_out); });
  return 0;
}
