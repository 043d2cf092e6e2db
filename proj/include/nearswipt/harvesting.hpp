// SPDX-License-Identifier: Apache-2.0
//
// nearswipt - link-level simulator for simultaneous wireless information and
// power transfer with gigantic planar antenna arrays
// Copyright (C) 2026 the nearswipt developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <armadillo>
#include <iosfwd>

#include "nearswipt/precoding.hpp"

namespace nearswipt {

// Saturating rectifier curve parameters. Defaults are the common logistic
// fit of measured rectenna data: 24 mW saturation, steepness 150 / W,
// inflection at 14 mW input. Treat them as a calibration point; absolute
// harvested-power levels move with them, orderings do not.
struct EhModelParams {
  double saturation_w = 24e-3;
  double steepness_per_w = 150.0;
  double inflection_w = 14e-3;

  void validate() const;
};

enum class EhCurve { sigmoid, linear };

// Rectifier model selector. The linear mode (dc = efficiency * rf) exists
// for ablation runs only and ignores the sigmoid parameters.
struct EhModel {
  EhCurve curve = EhCurve::sigmoid;
  EhModelParams params;
  double linear_efficiency = 0.5;

  double dc_output_w(double rf_input_w) const;
};

struct HarvestResult {
  double rf_input_w = 0.0;
  double dc_w = 0.0;
  double net_w = 0.0;          // dc - circuit consumption, may be negative
  double clipped_net_w = 0.0;  // max(net, 0)
};

// Average RF power collected by one EH user from every transmitted beam:
//   sum_k p_k |h^H w_k|^2 + sum_e q_e |h^H b_e|^2
// Receiver noise is excluded; it is orders of magnitude below these levels.
double rf_input_power(const arma::cx_vec& eh_true_channel, const arma::cx_mat& data_precoders,
                      const arma::vec& data_powers, const EnergyBeamSet& beams);
double rf_input_power(const arma::cx_vec& eh_true_channel, const ZfSolution& solution,
                      const EnergyBeamSet& beams);

// Normalized logistic rectifier:
//   Psi = M / (1 + exp(-a (x - b))),  Omega = 1 / (1 + exp(a b)),
//   dc  = (Psi - M Omega) / (1 - Omega)
// Strictly increasing, dc(0) = 0, approaches M from below.
double nonlinear_dc(double rf_input_w, const EhModelParams& params);

// net = dc - circuit_power; clipped_net = max(net, 0).
std::pair<double, double> net_harvested(double dc_w, double circuit_power_w);

HarvestResult harvest(double rf_input_w, const EhModel& model, double circuit_power_w);

// Input/output samples of the configured curve as CSV (rf_w, dc_w rows),
// for visual calibration of the rectifier parameters.
void write_eh_curve_csv(std::ostream& os, const EhModel& model, double max_rf_w = 70e-3,
                        std::size_t points = 400);

}  // namespace nearswipt
