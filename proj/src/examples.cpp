// SPDX-License-Identifier: Apache-2.0
#include "ldisc/examples.hpp"

namespace ldisc::examples {

RationalTransferMatrix dc_motor_plant() {
  const double K = 0.021;    // electromagnetic coefficient, N m s/rad
  const double f = 0.0182;   // fluid friction, N m s/rad
  const double R = 0.56;     // resistance, ohm
  const double L = 5.63e-3;  // inductance, H
  const double J = 5e-4;     // moment of inertia, kg m^2
  const double denom = f * R + K * K;
  Eigen::VectorXd num(1);
  num << K / denom;
  Eigen::VectorXd den(3);
  den << J * L / denom, (f * L + J * R) / denom, 1.0;
  return RationalTransferMatrix::siso(num, den);
}

RationalTransferMatrix dc_motor_reference() {
  const double w0 = 10.0;
  const double xi = 1.0;
  Eigen::VectorXd num(1);
  num << 1.0;
  Eigen::VectorXd den(3);
  den << 1.0 / (w0 * w0), 2.0 * xi / w0, 1.0;
  return RationalTransferMatrix::siso(num, den);
}

RationalTransferMatrix ideal_dc_controller() {
  Eigen::VectorXd num(3);
  num << 12.618, 12.618 * 36.51, 12.618 * 4.011;
  Eigen::VectorXd den(3);
  den << 1.0, 20.0, 0.0;
  return RationalTransferMatrix::siso(num, den);
}

RationalTransferMatrix f16_reference() {
  RationalTransferMatrix m(2, 2);
  Eigen::VectorXd num1(1), den1(2), num2(1), den2(2);
  num1 << 5.0;
  den1 << 1.0, 5.0;
  num2 << 0.8;
  den2 << 1.0, 0.8;
  m.set_entry(0, 0, num1, den1);
  m.set_entry(1, 1, num2, den2);
  return m;
}

RationalTransferMatrix nmp_demo_plant() {
  RationalTransferMatrix m(2, 2);
  Eigen::VectorXd den(3);
  den << 1.0, 5.0, 4.0;  // (s+1)(s+4)
  Eigen::VectorXd diag(2), upper(1), lower(1);
  diag << 1.0, 2.0;  // s + 2
  upper << 4.5;
  lower << 2.0;
  m.set_entry(0, 0, diag, den);
  m.set_entry(0, 1, upper, den);
  m.set_entry(1, 0, lower, den);
  m.set_entry(1, 1, diag, den);
  return m;
}

FrequencyDataset dc_motor_dataset() {
  return sample_rational(dc_motor_plant(), logspace_frequencies(1e-2, 1e2, 50));
}

FrequencyDataset mismatch_dataset() {
  return sample_rational(nmp_demo_plant(), logspace_frequencies(1e-2, 1e2, 200));
}

ControllerStructure dc_motor_structure() {
  return ControllerStructure::siso(2, 2, Properness::biproper);
}

ControllerStructure mismatch_structure() {
  Eigen::MatrixXi n_z(2, 2);
  n_z.setConstant(2);
  return ControllerStructure(2, 2, 2, n_z, Properness::biproper);
}

}  // namespace ldisc::examples
