// SPDX-License-Identifier: Apache-2.0
#include "ldisc/loewner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace ldisc {

namespace {

constexpr double kPairRotation = 0.70710678118654752440;  // 1/sqrt(2)

// Probe shifts kept away from the real and imaginary axes.
const Complex kProbeShifts[] = {{0.3141, 1.618}, {-1.234, 0.777}, {2.01, -0.45}, {-0.11, -2.9}};

}  // namespace

bool pencil_is_regular(const DescriptorRealization& sys) {
  const Eigen::Index n = sys.order();
  if (n == 0) return true;
  for (const Complex& s : kProbeShifts) {
    Eigen::MatrixXcd pencil = s * sys.E.cast<Complex>() - sys.A.cast<Complex>();
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(pencil);
    if (lu.isInvertible()) return true;
  }
  return false;
}

Eigen::MatrixXcd evaluate_realization(const DescriptorRealization& sys, Complex s) {
  const Eigen::Index n = sys.order();
  if (n == 0) return Eigen::MatrixXcd::Zero(sys.outputs(), sys.inputs());
  Eigen::MatrixXcd pencil = s * sys.E.cast<Complex>() - sys.A.cast<Complex>();
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(pencil);
  if (!lu.isInvertible()) {
    std::ostringstream msg;
    msg << "pencil sE - A is singular at s = " << s.real() << (s.imag() >= 0 ? "+" : "")
        << s.imag() << "j";
    throw SingularityError(msg.str());
  }
  return sys.C.cast<Complex>() * lu.solve(sys.B.cast<Complex>());
}

std::pair<InterpolationSet, InterpolationSet> partition_points(
    const std::vector<FrequencySample>& samples) {
  if (samples.size() < 2) throw ArgumentError("partition needs at least 2 points");
  std::vector<const FrequencySample*> sorted;
  sorted.reserve(samples.size());
  for (const auto& s : samples) sorted.push_back(&s);
  std::sort(sorted.begin(), sorted.end(),
            [](const FrequencySample* a, const FrequencySample* b) { return a->omega < b->omega; });
  for (std::size_t k = 1; k < sorted.size(); ++k)
    if (!(sorted[k - 1]->omega < sorted[k]->omega))
      throw ArgumentError("duplicate frequency in partition input");

  auto closed = [](const std::vector<const FrequencySample*>& pts) {
    InterpolationSet set;
    set.conjugate_paired = true;
    set.points.resize(static_cast<Eigen::Index>(2 * pts.size()));
    set.values.reserve(2 * pts.size());
    Eigen::Index at = 0;
    for (const FrequencySample* p : pts) {
      set.points(at++) = Complex(0.0, p->omega);
      set.values.push_back(p->response);
      set.points(at++) = Complex(0.0, -p->omega);
      set.values.push_back(p->response.conjugate());
    }
    return set;
  };

  std::vector<const FrequencySample*> mu_pts, lambda_pts;
  for (std::size_t k = 0; k < sorted.size(); ++k)
    (k % 2 == 0 ? mu_pts : lambda_pts).push_back(sorted[k]);
  return {closed(mu_pts), closed(lambda_pts)};
}

std::pair<InterpolationSet, InterpolationSet> partition_points(const FrequencyDataset& data) {
  return partition_points(data.samples());
}

LoewnerPencil build_pencil(const InterpolationSet& mu, const InterpolationSet& lambda) {
  const Eigen::Index m = mu.points.size();
  const Eigen::Index p = lambda.points.size();
  if (m == 0 || p == 0) throw ArgumentError("empty interpolation set");
  if (static_cast<Eigen::Index>(mu.values.size()) != m ||
      static_cast<Eigen::Index>(lambda.values.size()) != p)
    throw DimensionError("point/value count mismatch");

  const Eigen::Index n_o = mu.values.front().rows();
  const Eigen::Index n_i = mu.values.front().cols();
  for (const auto& v : mu.values)
    if (v.rows() != n_o || v.cols() != n_i) throw DimensionError("inconsistent mu data shape");
  for (const auto& v : lambda.values)
    if (v.rows() != n_o || v.cols() != n_i) throw DimensionError("inconsistent lambda data shape");

  double scale = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) scale = std::max(scale, std::abs(mu.points(i)));
  for (Eigen::Index j = 0; j < p; ++j) scale = std::max(scale, std::abs(lambda.points(j)));

  LoewnerPencil pencil;
  pencil.n_outputs = n_o;
  pencil.n_inputs = n_i;
  pencil.mu = mu.points;
  pencil.lambda = lambda.points;
  pencil.L.resize(m * n_o, p * n_i);
  pencil.Ls.resize(m * n_o, p * n_i);
  pencil.V.resize(m * n_o, n_i);
  pencil.W.resize(n_o, p * n_i);

  for (Eigen::Index i = 0; i < m; ++i) {
    pencil.V.middleRows(i * n_o, n_o) = mu.values[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < p; ++j) {
      const Complex diff = mu.points(i) - lambda.points(j);
      if (std::abs(diff) <= 1e-14 * std::max(1.0, scale)) {
        std::ostringstream msg;
        msg << "interpolation point collision between mu[" << i << "] and lambda[" << j << "]";
        throw ArgumentError(msg.str());
      }
      const auto& gm = mu.values[static_cast<std::size_t>(i)];
      const auto& gl = lambda.values[static_cast<std::size_t>(j)];
      pencil.L.block(i * n_o, j * n_i, n_o, n_i) = (gm - gl) / diff;
      pencil.Ls.block(i * n_o, j * n_i, n_o, n_i) = (mu.points(i) * gm - lambda.points(j) * gl) / diff;
    }
  }
  for (Eigen::Index j = 0; j < p; ++j)
    pencil.W.middleCols(j * n_i, n_i) = lambda.values[static_cast<std::size_t>(j)];

  // Rotate conjugate pairs to the real basis: per pair, the unitary
  // J = (1/sqrt 2) [[1, j], [1, -j]] applied blockwise makes every stored
  // matrix real up to round-off.
  if (mu.conjugate_paired && lambda.conjugate_paired) {
    if (m % 2 != 0 || p % 2 != 0) throw ArgumentError("paired set with odd point count");
    auto pair_transform = [](Eigen::Index pairs, Eigen::Index block) {
      Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(2 * pairs * block, 2 * pairs * block);
      const Complex one(kPairRotation, 0.0);
      const Complex pj(0.0, kPairRotation);
      for (Eigen::Index q = 0; q < pairs; ++q) {
        const Eigen::Index at = 2 * q * block;
        for (Eigen::Index b = 0; b < block; ++b) {
          T(at + b, at + b) = one;
          T(at + b, at + block + b) = pj;
          T(at + block + b, at + b) = one;
          T(at + block + b, at + block + b) = -pj;
        }
      }
      return T;
    };
    const Eigen::MatrixXcd Tmu = pair_transform(m / 2, n_o);
    const Eigen::MatrixXcd Tlam = pair_transform(p / 2, n_i);
    pencil.L = Tmu.adjoint() * pencil.L * Tlam;
    pencil.Ls = Tmu.adjoint() * pencil.Ls * Tlam;
    pencil.V = Tmu.adjoint() * pencil.V;
    pencil.W = pencil.W * Tlam;
  }
  return pencil;
}

namespace {

RealizeResult realize_from_pencil(const LoewnerPencil& pencil, double svd_rel_tol) {
  if (!(svd_rel_tol > 0.0) || !(svd_rel_tol < 1.0))
    throw ArgumentError("svd_rel_tol must lie in (0, 1)");

  const double imag_norm = pencil.L.imag().norm() + pencil.Ls.imag().norm() +
                           pencil.V.imag().norm() + pencil.W.imag().norm();
  const double real_norm = pencil.L.real().norm() + pencil.Ls.real().norm() +
                           pencil.V.real().norm() + pencil.W.real().norm();
  if (imag_norm > 1e-8 * (1.0 + real_norm))
    throw NumericError("pencil is not real; realize requires conjugate-paired data");

  const Eigen::MatrixXd L = pencil.L.real();
  const Eigen::MatrixXd Ls = pencil.Ls.real();
  const Eigen::MatrixXd V = pencil.V.real();
  const Eigen::MatrixXd W = pencil.W.real();

  Eigen::MatrixXd row_pencil(L.rows(), L.cols() + Ls.cols());
  row_pencil << L, Ls;
  Eigen::MatrixXd col_pencil(L.rows() + Ls.rows(), L.cols());
  col_pencil << L, Ls;

  const double pencil_scale = row_pencil.cwiseAbs().maxCoeff();
  double data_scale = std::max(V.cwiseAbs().maxCoeff(), W.cwiseAbs().maxCoeff());
  if (pencil_scale <= 1e-14 * std::max(1.0, data_scale))
    throw DegenerateDataError("Loewner pencil is numerically zero (constant or empty data)");

  Eigen::BDCSVD<Eigen::MatrixXd> svd_row(row_pencil, Eigen::ComputeThinU);
  Eigen::BDCSVD<Eigen::MatrixXd> svd_col(col_pencil, Eigen::ComputeThinV);

  auto rank_of = [svd_rel_tol](const Eigen::VectorXd& sv) {
    if (sv.size() == 0) return Eigen::Index(0);
    const double cutoff = svd_rel_tol * sv(0);
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) > cutoff) ++r;
    return r;
  };

  RealizeResult result;
  result.row_singular_values = svd_row.singularValues();
  result.col_singular_values = svd_col.singularValues();

  const Eigen::Index r_row = rank_of(result.row_singular_values);
  const Eigen::Index r_col = rank_of(result.col_singular_values);
  Eigen::Index r = std::min(r_row, r_col);
  if (r_row != r_col) {
    std::ostringstream msg;
    msg << "rank mismatch between row pencil (" << r_row << ") and column pencil (" << r_col
        << "); using " << r;
    result.warnings.push_back(msg.str());
  }
  if (r == 0) throw DegenerateDataError("Loewner pencil has numerical rank 0");
  if (r < result.row_singular_values.size()) {
    const double gap = result.row_singular_values(r - 1) / result.row_singular_values(r);
    if (gap < 10.0) {
      std::ostringstream msg;
      msg << "rank ambiguity: sigma_r/sigma_{r+1} = " << gap << " at r = " << r;
      result.warnings.push_back(msg.str());
    }
  }

  const Eigen::MatrixXd Y1 = svd_row.matrixU().leftCols(r);
  const Eigen::MatrixXd X2 = svd_col.matrixV().leftCols(r);

  result.system.E = -Y1.transpose() * L * X2;
  result.system.A = -Y1.transpose() * Ls * X2;
  result.system.B = Y1.transpose() * V;
  result.system.C = W * X2;

  if (!pencil_is_regular(result.system))
    throw NumericError("projected Loewner pencil is singular; data may be deficient");
  return result;
}

}  // namespace

RealizeResult realize(const std::vector<FrequencySample>& samples, double svd_rel_tol) {
  auto [mu, lambda] = partition_points(samples);
  return realize_from_pencil(build_pencil(mu, lambda), svd_rel_tol);
}

RealizeResult realize(const FrequencyDataset& data, double svd_rel_tol) {
  return realize(data.samples(), svd_rel_tol);
}

}  // namespace ldisc
