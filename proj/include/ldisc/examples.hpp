// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ldisc/controller.hpp"
#include "ldisc/freq_data.hpp"

namespace ldisc::examples {

/// Second-order DC motor: voltage to angular velocity.
RationalTransferMatrix dc_motor_plant();

/// Unit-DC-gain reference, double pole at -10 rad/s.
RationalTransferMatrix dc_motor_reference();

/// The model-matching controller 12.618 (s^2 + 36.51 s + 4.011) / (s (s + 20));
/// it has a pole at the origin, so it is used by analyses, never as an iterate.
RationalTransferMatrix ideal_dc_controller();

/// Decoupled two-channel reference: diag(5/(s+5), 0.8/(s+0.8)).
RationalTransferMatrix f16_reference();

/// Coupled stable 2x2 demo plant with a transmission zero at s = +1:
///   P(s) = [[s+2, 4.5], [2, s+2]] / ((s+1)(s+4)).
RationalTransferMatrix nmp_demo_plant();

/// 50 log-spaced samples of the DC motor on [1e-2, 1e2] rad/s.
FrequencyDataset dc_motor_dataset();

/// 200 log-spaced samples of the demo plant on [1e-2, 1e2] rad/s.
FrequencyDataset mismatch_dataset();

/// Biproper SISO order-2 structure (5 parameters).
ControllerStructure dc_motor_structure();

/// Biproper 2x2 order-2 structure, every numerator of degree 2 (14 parameters).
ControllerStructure mismatch_structure();

}  // namespace ldisc::examples
