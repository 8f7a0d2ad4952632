// SPDX-License-Identifier: Apache-2.0
#include "ldisc/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "ldisc/closed_loop.hpp"
#include "ldisc/polynomial.hpp"

namespace ldisc::io {

namespace {

using nlohmann::json;

// Shortest round-trip formatting keeps save(load(f)) == f for our own files.
std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw NumericError("double formatting failed");
  return std::string(buf, ptr);
}

double parse_double(std::string_view text, int line_no) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    std::ostringstream msg;
    msg << "line " << line_no << ": malformed number '" << std::string(text) << "'";
    throw ParseError(msg.str());
  }
  return v;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t at = 0;
  while (true) {
    const std::size_t comma = line.find(',', at);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(at));
      break;
    }
    fields.push_back(line.substr(at, comma - at));
    at = comma + 1;
  }
  return fields;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open for writing: " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open: " + path.string());
  return in;
}

void write_provenance_comments(std::ofstream& out, const std::optional<Provenance>& provenance) {
  if (!provenance) return;
  out << "# ldisc " << provenance->version << "\n";
  out << "# config_hash=" << provenance->config_hash << "\n";
  out << "# seed=" << provenance->seed << "\n";
}

json provenance_json(const std::optional<Provenance>& provenance) {
  json j;
  if (provenance) {
    j["version"] = provenance->version;
    j["config_hash"] = provenance->config_hash;
    j["seed"] = provenance->seed;
  } else {
    j["version"] = kVersion;
  }
  return j;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array()) throw ParseError("matrix must be an array of rows");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return Eigen::MatrixXd(0, 0);
  const Eigen::Index cols = static_cast<Eigen::Index>(j.at(0).size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (static_cast<Eigen::Index>(j.at(i).size()) != cols)
      throw ParseError("ragged matrix rows");
    for (Eigen::Index jj = 0; jj < cols; ++jj) m(i, jj) = j.at(i).at(jj).get<double>();
  }
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) arr.push_back(v(k));
  return arr;
}

Eigen::VectorXd vector_from_json(const json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = j.at(k).get<double>();
  return v;
}

json load_json(const std::filesystem::path& path) {
  auto in = open_in(path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return j;
}

void dump_json(const std::filesystem::path& path, const json& j) {
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

}  // namespace

std::string config_hash(const DesignConfig& config) {
  json j;
  j["epsilon"] = config.epsilon;
  j["eta"] = config.eta;
  j["max_iter"] = config.max_iter;
  j["svd_rel_tol"] = config.svd_rel_tol;
  j["beta_min"] = config.beta_min;
  j["stability_margin"] = config.stability_margin;
  j["init_restarts"] = config.init_restarts;
  j["init_descent_iters"] = config.init_descent_iters;
  j["seed"] = config.seed;
  j["subproblem"] = {{"max_evaluations", config.subproblem.max_evaluations},
                     {"fd_step", config.subproblem.fd_step},
                     {"penalty_initial", config.subproblem.penalty_initial},
                     {"penalty_growth", config.subproblem.penalty_growth},
                     {"penalty_rounds", config.subproblem.penalty_rounds},
                     {"radius_fraction", config.subproblem.radius_fraction}};
  const std::string text = j.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream hex;
  hex << std::hex << h;
  return hex.str();
}

FrequencyDataset load_dataset(const std::filesystem::path& path, Eigen::Index n_outputs,
                              Eigen::Index n_inputs) {
  if (n_outputs < 1 || n_inputs < 1) throw DimensionError("dataset dimensions must be positive");
  auto in = open_in(path);
  const std::size_t expected = 1 + 2 * static_cast<std::size_t>(n_outputs * n_inputs);

  std::vector<FrequencySample> samples;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line.rfind("omega", 0) != 0) {
        std::ostringstream msg;
        msg << "line " << line_no << ": expected header starting with 'omega'";
        throw ParseError(msg.str());
      }
      const auto fields = split_csv(line);
      if (fields.size() != expected) {
        std::ostringstream msg;
        msg << "line " << line_no << ": header has " << fields.size() << " columns, expected "
            << expected << " for a " << n_outputs << "x" << n_inputs << " dataset";
        throw ParseError(msg.str());
      }
      header_seen = true;
      continue;
    }
    const auto fields = split_csv(line);
    if (fields.size() != expected) {
      std::ostringstream msg;
      msg << "line " << line_no << ": row has " << fields.size() << " columns, expected "
          << expected;
      throw ParseError(msg.str());
    }
    FrequencySample sample;
    sample.omega = parse_double(fields[0], line_no);
    sample.response.resize(n_outputs, n_inputs);
    std::size_t at = 1;
    for (Eigen::Index i = 0; i < n_outputs; ++i)
      for (Eigen::Index j = 0; j < n_inputs; ++j) {
        const double re = parse_double(fields[at++], line_no);
        const double im = parse_double(fields[at++], line_no);
        sample.response(i, j) = Complex(re, im);
      }
    samples.push_back(std::move(sample));
  }
  if (!header_seen) throw ParseError(path.string() + ": missing header line");

  std::sort(samples.begin(), samples.end(),
            [](const FrequencySample& a, const FrequencySample& b) { return a.omega < b.omega; });
  for (std::size_t k = 1; k < samples.size(); ++k)
    if (!(samples[k - 1].omega < samples[k].omega)) {
      std::ostringstream msg;
      msg << "duplicate frequency " << format_double(samples[k].omega);
      throw ParseError(msg.str());
    }
  try {
    return FrequencyDataset(std::move(samples));
  } catch (const Error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_dataset(const std::filesystem::path& path, const FrequencyDataset& data,
                  const std::optional<Provenance>& provenance) {
  auto out = open_out(path);
  write_provenance_comments(out, provenance);
  out << "omega";
  for (Eigen::Index i = 0; i < data.outputs(); ++i)
    for (Eigen::Index j = 0; j < data.inputs(); ++j)
      out << ",re_" << (i + 1) << "_" << (j + 1) << ",im_" << (i + 1) << "_" << (j + 1);
  out << "\n";
  for (const auto& s : data) {
    out << format_double(s.omega);
    for (Eigen::Index i = 0; i < data.outputs(); ++i)
      for (Eigen::Index j = 0; j < data.inputs(); ++j)
        out << "," << format_double(s.response(i, j).real()) << ","
            << format_double(s.response(i, j).imag());
    out << "\n";
  }
}

RationalTransferMatrix load_rational(const std::filesystem::path& path) {
  const json j = load_json(path);
  try {
    const Eigen::Index n_o = j.at("n_outputs").get<Eigen::Index>();
    const Eigen::Index n_i = j.at("n_inputs").get<Eigen::Index>();
    RationalTransferMatrix model(n_o, n_i);
    for (Eigen::Index i = 0; i < n_o; ++i)
      for (Eigen::Index jj = 0; jj < n_i; ++jj)
        model.set_entry(i, jj, vector_from_json(j.at("num").at(i).at(jj)),
                        vector_from_json(j.at("den").at(i).at(jj)));
    return model;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_rational(const std::filesystem::path& path, const RationalTransferMatrix& model) {
  json num = json::array();
  json den = json::array();
  for (Eigen::Index i = 0; i < model.outputs(); ++i) {
    json num_row = json::array();
    json den_row = json::array();
    for (Eigen::Index j = 0; j < model.inputs(); ++j) {
      num_row.push_back(vector_to_json(model.entry(i, j).num));
      den_row.push_back(vector_to_json(model.entry(i, j).den));
    }
    num.push_back(num_row);
    den.push_back(den_row);
  }
  json j;
  j["n_outputs"] = model.outputs();
  j["n_inputs"] = model.inputs();
  j["num"] = num;
  j["den"] = den;
  dump_json(path, j);
}

DescriptorRealization load_realization(const std::filesystem::path& path) {
  const json j = load_json(path);
  try {
    DescriptorRealization sys;
    const Eigen::Index r = j.at("order").get<Eigen::Index>();
    const Eigen::Index ni = j.at("n_inputs").get<Eigen::Index>();
    const Eigen::Index no = j.at("n_outputs").get<Eigen::Index>();
    auto reshape = [](const json& arr, Eigen::Index rows, Eigen::Index cols) {
      if (static_cast<Eigen::Index>(arr.size()) != rows * cols)
        throw ParseError("matrix payload size mismatch");
      Eigen::MatrixXd m(rows, cols);
      Eigen::Index at = 0;
      for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index jj = 0; jj < cols; ++jj) m(i, jj) = arr.at(at++).get<double>();
      return m;
    };
    sys.E = reshape(j.at("E"), r, r);
    sys.A = reshape(j.at("A"), r, r);
    sys.B = reshape(j.at("B"), r, ni);
    sys.C = reshape(j.at("C"), no, r);
    return sys;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_realization(const std::filesystem::path& path, const DescriptorRealization& sys,
                      const std::optional<Provenance>& provenance) {
  json j;
  j["provenance"] = provenance_json(provenance);
  j["order"] = sys.order();
  j["n_inputs"] = sys.inputs();
  j["n_outputs"] = sys.outputs();
  auto flat = [](const Eigen::MatrixXd& m) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index jj = 0; jj < m.cols(); ++jj) arr.push_back(m(i, jj));
    return arr;
  };
  j["E"] = flat(sys.E);
  j["A"] = flat(sys.A);
  j["B"] = flat(sys.B);
  j["C"] = flat(sys.C);
  dump_json(path, j);
}

ControllerStructure load_structure(const std::filesystem::path& path) {
  json j = load_json(path);
  if (j.contains("structure")) j = j.at("structure");  // controller files embed it
  try {
    const Eigen::Index n_i = j.at("n_inputs").get<Eigen::Index>();
    const Eigen::Index n_o = j.at("n_outputs").get<Eigen::Index>();
    const int n_p = j.at("n_p").get<int>();
    Eigen::MatrixXi n_z(n_i, n_o);
    const json& grid = j.at("n_z");
    for (Eigen::Index i = 0; i < n_i; ++i)
      for (Eigen::Index jj = 0; jj < n_o; ++jj) n_z(i, jj) = grid.at(i).at(jj).get<int>();
    const std::string mode = j.value("properness", "strict");
    if (mode != "strict" && mode != "biproper")
      throw ParseError("properness must be 'strict' or 'biproper'");
    return ControllerStructure(
        n_i, n_o, n_p, n_z,
        mode == "strict" ? Properness::strict_proper : Properness::biproper);
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

namespace {

json structure_json(const ControllerStructure& structure) {
  json j;
  j["n_inputs"] = structure.n_i();
  j["n_outputs"] = structure.n_o();
  j["n_p"] = structure.n_p();
  json grid = json::array();
  for (Eigen::Index i = 0; i < structure.n_i(); ++i) {
    json row = json::array();
    for (Eigen::Index jj = 0; jj < structure.n_o(); ++jj) row.push_back(structure.n_z(i, jj));
    grid.push_back(row);
  }
  j["n_z"] = grid;
  j["properness"] =
      structure.properness() == Properness::strict_proper ? "strict" : "biproper";
  return j;
}

}  // namespace

void save_structure(const std::filesystem::path& path, const ControllerStructure& structure) {
  dump_json(path, structure_json(structure));
}

namespace {

json roots_json(const Eigen::VectorXcd& roots) {
  json arr = json::array();
  for (Eigen::Index k = 0; k < roots.size(); ++k)
    arr.push_back(json::array({roots(k).real(), roots(k).imag()}));
  return arr;
}

json controller_json(const ControllerStructure& structure, const Eigen::VectorXd& theta,
                     const std::optional<Provenance>& provenance) {
  json j;
  j["provenance"] = provenance_json(provenance);
  j["structure"] = structure_json(structure);
  j["theta"] = vector_to_json(theta);
  j["poles"] = roots_json(poly::roots(denominator_poly(theta.head(structure.n_p()))));
  json entries = json::array();
  for (Eigen::Index i = 0; i < structure.n_i(); ++i)
    for (Eigen::Index jj = 0; jj < structure.n_o(); ++jj) {
      const double gain = theta(structure.gain_offset(i, jj));
      const Eigen::VectorXd num =
          numerator_poly(theta.segment(structure.alpha_offset(i, jj), structure.n_z(i, jj)), gain);
      json e;
      e["input"] = i + 1;
      e["output"] = jj + 1;
      e["gain"] = gain;
      e["zeros"] = roots_json(gain != 0.0 ? poly::roots(num) : Eigen::VectorXcd());
      entries.push_back(e);
    }
  j["entries"] = entries;
  return j;
}

}  // namespace

void save_controller(const std::filesystem::path& path, const ControllerStructure& structure,
                     const Eigen::VectorXd& theta, const std::optional<Provenance>& provenance) {
  dump_json(path, controller_json(structure, theta, provenance));
}

Eigen::VectorXd load_theta(const std::filesystem::path& path) {
  const json j = load_json(path);
  try {
    return vector_from_json(j.at("theta"));
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_report(const std::filesystem::path& path, const DesignReport& report,
                 const ControllerStructure& structure,
                 const std::optional<Provenance>& provenance) {
  json j;
  j["provenance"] = provenance_json(provenance);
  {
    std::ostringstream hex;
    hex << std::hex << report.dataset_hash;
    j["dataset_hash"] = hex.str();
  }
  const DesignConfig& c = report.config;
  j["config"] = {{"epsilon", c.epsilon},
                 {"eta", c.eta},
                 {"max_iter", c.max_iter},
                 {"svd_rel_tol", c.svd_rel_tol},
                 {"beta_min", c.beta_min},
                 {"stability_margin", c.stability_margin},
                 {"init_restarts", c.init_restarts},
                 {"seed", c.seed},
                 {"subproblem",
                  {{"max_evaluations", c.subproblem.max_evaluations},
                   {"fd_step", c.subproblem.fd_step},
                   {"penalty_initial", c.subproblem.penalty_initial},
                   {"penalty_growth", c.subproblem.penalty_growth},
                   {"penalty_rounds", c.subproblem.penalty_rounds},
                   {"radius_fraction", c.subproblem.radius_fraction}}}};
  json records = json::array();
  for (const auto& r : report.records) {
    json rec;
    rec["iter"] = r.index;
    rec["objective"] = r.objective;
    rec["gamma"] = r.gamma;
    rec["theta"] = vector_to_json(r.theta);
    rec["norm_margin"] = r.norm_margin;
    rec["status"] = r.subproblem_status;
    rec["wall_ms"] = r.wall_ms;
    records.push_back(rec);
  }
  j["records"] = records;
  j["stop_reason"] =
      report.stop == StopReason::converged ? "converged" : "max_iterations";
  j["stop_detail"] = report.stop_detail;
  j["final_controller"] = controller_json(structure, report.final_theta, provenance);
  dump_json(path, j);
}

void save_iteration_log(const std::filesystem::path& path, const DesignReport& report,
                        const std::optional<Provenance>& provenance) {
  auto out = open_out(path);
  write_provenance_comments(out, provenance);
  out << "iter,objective,gamma,norm_margin,accepted,wall_ms\n";
  for (const auto& r : report.records) {
    out << r.index << "," << format_double(r.objective) << "," << format_double(r.gamma) << ","
        << format_double(r.norm_margin) << "," << (r.subproblem_status == "improved" ? 1 : 0)
        << "," << format_double(r.wall_ms) << "\n";
  }
}

void save_evaluation(const std::filesystem::path& path, const FrequencyDataset& data,
                     const RationalTransferMatrix& Md, const ControllerStructure& structure,
                     const Eigen::VectorXd& theta, const std::optional<Provenance>& provenance) {
  const auto M = closed_loop_samples(data, structure, theta);
  auto out = open_out(path);
  write_provenance_comments(out, provenance);
  const Eigen::Index n = data.outputs();
  out << "omega";
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out << ",md_re_" << (i + 1) << "_" << (j + 1) << ",md_im_" << (i + 1) << "_" << (j + 1);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      out << ",m_re_" << (i + 1) << "_" << (j + 1) << ",m_im_" << (i + 1) << "_" << (j + 1);
  out << "\n";
  for (Eigen::Index k = 0; k < data.size(); ++k) {
    const Eigen::MatrixXcd ref = Md.evaluate(Complex(0.0, data[k].omega));
    out << format_double(data[k].omega);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        out << "," << format_double(ref(i, j).real()) << "," << format_double(ref(i, j).imag());
    const auto& m = M[static_cast<std::size_t>(k)];
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        out << "," << format_double(m(i, j).real()) << "," << format_double(m(i, j).imag());
    out << "\n";
  }
}

}  // namespace ldisc::io
