// SPDX-License-Identifier: Apache-2.0
#include "ldisc/linsys.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace ldisc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kConditionLimit = 1e8;

Eigen::JacobiSVD<Eigen::MatrixXd> svd_of(const Eigen::MatrixXd& m, unsigned flags = 0) {
  return Eigen::JacobiSVD<Eigen::MatrixXd>(m, flags);
}

double sigma_max(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
}

double sigma_max_real(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  return svd_of(m).singularValues()(0);
}

}  // namespace

std::optional<StateSpace> to_standard(const DescriptorRealization& sys) {
  const Eigen::Index n = sys.order();
  const Eigen::Index ni = sys.inputs();
  const Eigen::Index no = sys.outputs();
  if (n == 0) {
    StateSpace ss;
    ss.A.resize(0, 0);
    ss.B.resize(0, ni);
    ss.C.resize(no, 0);
    ss.D = Eigen::MatrixXd::Zero(no, ni);
    return ss;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys.E, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  const double smax = sv(0);

  if (smax > 0.0 && sv(n - 1) > smax / kConditionLimit) {
    StateSpace ss;
    ss.A = svd.solve(sys.A);
    ss.B = svd.solve(sys.B);
    ss.C = sys.C;
    ss.D = Eigen::MatrixXd::Zero(no, ni);
    return ss;
  }

  // Index-1 reduction: split along the SVD of E and eliminate the algebraic
  // states 0 = A21 z1 + A22 z2 + B2 u.
  const double cutoff = smax * static_cast<double>(n) * 1e-13;
  Eigen::Index re = 0;
  while (re < n && sv(re) > cutoff) ++re;

  const Eigen::MatrixXd At = svd.matrixU().transpose() * sys.A * svd.matrixV();
  const Eigen::MatrixXd Bt = svd.matrixU().transpose() * sys.B;
  const Eigen::MatrixXd Ct = sys.C * svd.matrixV();

  const Eigen::Index na = n - re;
  const Eigen::MatrixXd A11 = At.topLeftCorner(re, re);
  const Eigen::MatrixXd A12 = At.topRightCorner(re, na);
  const Eigen::MatrixXd A21 = At.bottomLeftCorner(na, re);
  const Eigen::MatrixXd A22 = At.bottomRightCorner(na, na);

  Eigen::FullPivLU<Eigen::MatrixXd> lu(A22);
  if (na > 0 && !lu.isInvertible()) return std::nullopt;

  Eigen::MatrixXd X21 = na > 0 ? lu.solve(A21).eval() : Eigen::MatrixXd(0, re);
  Eigen::MatrixXd X2B = na > 0 ? lu.solve(Bt.bottomRows(na)).eval() : Eigen::MatrixXd(0, ni);

  StateSpace ss;
  const auto sigma_inv = sv.head(re).cwiseInverse().asDiagonal();
  ss.A = sigma_inv * (A11 - A12 * X21);
  ss.B = sigma_inv * (Bt.topRows(re) - A12 * X2B);
  ss.C = Ct.leftCols(re) - Ct.rightCols(na) * X21;
  ss.D = -Ct.rightCols(na) * X2B;
  return ss;
}

Eigen::MatrixXcd evaluate_state_space(const StateSpace& sys, Complex s) {
  if (sys.order() == 0) return sys.D.cast<Complex>();
  Eigen::MatrixXcd shifted =
      s * Eigen::MatrixXcd::Identity(sys.order(), sys.order()) - sys.A.cast<Complex>();
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(shifted);
  if (!lu.isInvertible()) throw SingularityError("state matrix singular at requested shift");
  return sys.C.cast<Complex>() * lu.solve(sys.B.cast<Complex>()) + sys.D.cast<Complex>();
}

double spectral_abscissa(const DescriptorRealization& sys) {
  const Eigen::Index n = sys.order();
  if (n == 0) return -kInf;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys.E, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  if (sv(0) > 0.0 && sv(n - 1) > sv(0) / kConditionLimit) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(svd.solve(sys.A), false);
    if (es.info() != Eigen::Success) throw NumericError("eigenvalue solver failed");
    return es.eigenvalues().real().maxCoeff();
  }

  Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges;
  ges.compute(sys.A, sys.E, false);
  if (ges.info() != Eigen::Success) throw NumericError("generalized eigenvalue solver failed");
  const auto alphas = ges.alphas();
  const auto betas = ges.betas();
  const double beta_scale = betas.cwiseAbs().maxCoeff();
  double worst = -kInf;
  for (Eigen::Index k = 0; k < betas.size(); ++k) {
    if (std::abs(betas(k)) <= 1e-10 * std::max(1.0, beta_scale)) continue;  // infinite direction
    worst = std::max(worst, alphas(k).real() / betas(k));
  }
  return worst;
}

bool is_stable(const DescriptorRealization& sys, double margin) {
  return spectral_abscissa(sys) < -margin;
}

namespace {

struct ImagEigs {
  bool solver_ok = true;
  bool any = false;
  std::vector<double> omegas;  // positive imaginary parts
};

// Purely imaginary eigenvalues of the level-set Hamiltonian for gamma.
// For gamma > sigma_max(D) and A Hurwitz: gamma is a singular value of
// G(j w) for some w iff the Hamiltonian has an eigenvalue at j w.
ImagEigs hamiltonian_imaginary_eigs(const StateSpace& ss, double gamma) {
  ImagEigs out;
  const Eigen::Index n = ss.order();
  const Eigen::Index ni = ss.B.cols();
  const Eigen::MatrixXd R =
      gamma * gamma * Eigen::MatrixXd::Identity(ni, ni) - ss.D.transpose() * ss.D;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(R);
  if (!lu.isInvertible()) {
    out.solver_ok = false;
    return out;
  }
  const Eigen::MatrixXd RinvDt = lu.solve(ss.D.transpose());
  const Eigen::MatrixXd Abar = ss.A + ss.B * RinvDt * ss.C;

  Eigen::MatrixXd H(2 * n, 2 * n);
  H.topLeftCorner(n, n) = Abar;
  H.topRightCorner(n, n) = ss.B * lu.solve(ss.B.transpose());
  H.bottomLeftCorner(n, n) =
      -ss.C.transpose() *
      (Eigen::MatrixXd::Identity(ss.C.rows(), ss.C.rows()) + ss.D * RinvDt) * ss.C;
  H.bottomRightCorner(n, n) = -Abar.transpose();

  Eigen::EigenSolver<Eigen::MatrixXd> es(H, false);
  if (es.info() != Eigen::Success) {
    out.solver_ok = false;
    return out;
  }
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const Complex lambda = es.eigenvalues()(k);
    if (std::abs(lambda.real()) <= 1e-8 * std::max(1.0, std::abs(lambda))) {
      out.any = true;
      if (lambda.imag() > 0.0) out.omegas.push_back(lambda.imag());
    }
  }
  return out;
}

struct Evaluator {
  const DescriptorRealization* descriptor = nullptr;
  const StateSpace* standard = nullptr;

  double sigma_at(double omega) const {
    const Complex s(0.0, omega);
    if (standard) return sigma_max(evaluate_state_space(*standard, s));
    return sigma_max(evaluate_realization(*descriptor, s));
  }
};

// Golden-section refinement of sigma(omega) inside [lo, hi].
std::pair<double, double> golden_peak(const Evaluator& eval, double lo, double hi) {
  constexpr double kGolden = 0.61803398874989484820;
  double a = lo, b = hi;
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = eval.sigma_at(x1);
  double f2 = eval.sigma_at(x2);
  for (int it = 0; it < 160 && (b - a) > 1e-12 * (1.0 + std::abs(b)); ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = eval.sigma_at(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = eval.sigma_at(x1);
    }
  }
  const double mid = 0.5 * (a + b);
  return {mid, eval.sigma_at(mid)};
}

}  // namespace

HinfResult hinf_norm(const DescriptorRealization& sys, const HinfOptions& options) {
  if (!(options.rel_tol > 0.0) || !(options.rel_tol > 0.0 && options.rel_tol <= 0.1))
    throw ArgumentError("hinf rel_tol must lie in (0, 0.1]");
  const double alpha = spectral_abscissa(sys);
  if (!(alpha < 0.0))
    throw ArgumentError("hinf_norm requires a stable realization (spectral abscissa < 0)");

  auto standard = to_standard(sys);
  Evaluator eval;
  eval.descriptor = &sys;
  if (standard) eval.standard = &*standard;

  // Frequency sweep bracket: user-provided range unioned with the pole spread.
  double wmin = options.sweep_min > 0.0 ? options.sweep_min : kInf;
  double wmax = options.sweep_max > 0.0 ? options.sweep_max : 0.0;
  std::vector<double> special;  // pole-informed frequencies
  if (standard && standard->order() > 0) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(standard->A, false);
    if (es.info() == Eigen::Success) {
      for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        const Complex lambda = es.eigenvalues()(k);
        const double mag = std::abs(lambda);
        if (mag > 0.0) {
          wmin = std::min(wmin, mag / 100.0);
          wmax = std::max(wmax, mag * 100.0);
          special.push_back(mag);
        }
        if (std::abs(lambda.imag()) > 0.0) special.push_back(std::abs(lambda.imag()));
      }
    }
  }
  if (!(wmin < kInf)) wmin = 1e-3;
  if (!(wmax > 0.0)) wmax = 1e3;
  if (options.sweep_min > 0.0) wmin = std::min(wmin, options.sweep_min);
  if (options.sweep_max > 0.0) wmax = std::max(wmax, options.sweep_max);

  HinfResult result;
  result.grid_fallback = !standard.has_value();

  double best_sigma = eval.sigma_at(0.0);
  double best_omega = 0.0;
  const int count = std::max(options.sweep_points, 16);
  std::vector<double> grid(static_cast<std::size_t>(count));
  const double lmin = std::log10(wmin);
  const double lmax = std::log10(wmax);
  for (int k = 0; k < count; ++k)
    grid[static_cast<std::size_t>(k)] = std::pow(10.0, lmin + (lmax - lmin) * k / (count - 1.0));
  grid.insert(grid.end(), special.begin(), special.end());
  std::sort(grid.begin(), grid.end());
  std::vector<double> sigma(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    sigma[k] = eval.sigma_at(grid[k]);
    if (sigma[k] > best_sigma) {
      best_sigma = sigma[k];
      best_omega = grid[k];
    }
  }

  const double sD = standard ? sigma_max_real(standard->D) : 0.0;
  double lower = std::max(best_sigma, sD);
  result.peak_omega = best_omega;

  auto refine_grid_peaks = [&]() {
    // Refine every interior local maximum plus the global peak bracket.
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const bool left_ok = k == 0 || sigma[k] >= sigma[k - 1];
      const bool right_ok = k + 1 >= grid.size() || sigma[k] >= sigma[k + 1];
      if (!(left_ok && right_ok)) continue;
      const double lo = k == 0 ? grid[0] / 10.0 : grid[k - 1];
      const double hi = k + 1 >= grid.size() ? grid.back() * 10.0 : grid[k + 1];
      auto [w, s] = golden_peak(eval, lo, hi);
      if (s > lower) {
        lower = s;
        result.peak_omega = w;
      }
    }
  };

  if (!standard || standard->order() == 0) {
    if (!standard) refine_grid_peaks();
    result.norm = std::max(lower, sD);
    result.achieved_rel_tol = standard ? 0.0 : 1e-9;
    return result;
  }

  if (lower <= 0.0) {  // zero transfer
    result.norm = 0.0;
    result.achieved_rel_tol = 0.0;
    return result;
  }

  // Level-set iteration: probe slightly above the attained lower bound; when
  // the Hamiltonian still has imaginary eigenvalues, the level crossings feed
  // new attained values (evaluated at the crossings and their midpoints), so
  // the lower bound is always an actual singular value on the axis.
  const double step = std::max(0.5 * options.rel_tol, 1e-9);
  bool degenerate = false;
  bool certified = false;
  for (int it = 0; it < 120; ++it) {
    const double gamma = lower * (1.0 + 2.0 * step);
    ImagEigs eigs = hamiltonian_imaginary_eigs(*standard, gamma);
    if (!eigs.solver_ok) {
      degenerate = true;
      break;
    }
    if (!eigs.any) {
      certified = true;  // no crossing above gamma: norm < gamma
      break;
    }
    double attained = lower;
    std::sort(eigs.omegas.begin(), eigs.omegas.end());
    for (std::size_t k = 0; k < eigs.omegas.size(); ++k) {
      const double w = eigs.omegas[k];
      const double s = eval.sigma_at(w);
      if (s > attained) {
        attained = s;
        result.peak_omega = w;
      }
      if (k + 1 < eigs.omegas.size()) {
        const double wm = 0.5 * (w + eigs.omegas[k + 1]);
        const double sm = eval.sigma_at(wm);
        if (sm > attained) {
          attained = sm;
          result.peak_omega = wm;
        }
      }
    }
    if (!(attained > lower * (1.0 + 1e-14))) {
      // Detected crossings no longer raise the bound (coalescence zone);
      // the remaining uncertainty is below the probe step.
      certified = true;
      break;
    }
    lower = attained;
  }

  if (degenerate || !certified) {
    refine_grid_peaks();
    result.grid_fallback = true;
  }
  result.norm = std::max(lower, sD);
  result.achieved_rel_tol = 2.0 * step;
  return result;
}

HinfResult hinf_norm(const DescriptorRealization& sys, double rel_tol) {
  HinfOptions options;
  options.rel_tol = rel_tol;
  return hinf_norm(sys, options);
}

}  // namespace ldisc
