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

#include "nearswipt/harvesting.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace nearswipt {

void EhModelParams::validate() const {
  if (!(saturation_w > 0.0) || !(steepness_per_w > 0.0) || !(inflection_w > 0.0))
    throw std::invalid_argument("harvesting: rectifier parameters must be positive");
}

double EhModel::dc_output_w(double rf_input_w) const {
  if (curve == EhCurve::linear) return linear_efficiency * rf_input_w;
  return nonlinear_dc(rf_input_w, params);
}

double rf_input_power(const arma::cx_vec& eh_true_channel, const arma::cx_mat& data_precoders,
                      const arma::vec& data_powers, const EnergyBeamSet& beams) {
  double rf = 0.0;
  if (data_precoders.n_cols > 0) {
    const arma::cx_rowvec cross = eh_true_channel.t() * data_precoders;
    rf += arma::dot(data_powers, arma::square(arma::abs(cross)).t());
  }
  if (beams.beams.n_cols > 0) {
    const arma::cx_rowvec cross = eh_true_channel.t() * beams.beams;
    rf += arma::dot(beams.powers, arma::square(arma::abs(cross)).t());
  }
  return rf;
}

double rf_input_power(const arma::cx_vec& eh_true_channel, const ZfSolution& solution,
                      const EnergyBeamSet& beams) {
  return rf_input_power(eh_true_channel, solution.precoders, solution.powers, beams);
}

double nonlinear_dc(double rf_input_w, const EhModelParams& params) {
  params.validate();
  if (!(rf_input_w >= 0.0))
    throw std::invalid_argument("harvesting: RF input must be nonnegative");

  const double m = params.saturation_w;
  const double a = params.steepness_per_w;
  const double b = params.inflection_w;

  const double psi = m / (1.0 + std::exp(-a * (rf_input_w - b)));
  const double omega = 1.0 / (1.0 + std::exp(a * b));
  return (psi - m * omega) / (1.0 - omega);
}

std::pair<double, double> net_harvested(double dc_w, double circuit_power_w) {
  const double net = dc_w - circuit_power_w;
  return {net, std::max(net, 0.0)};
}

HarvestResult harvest(double rf_input_w, const EhModel& model, double circuit_power_w) {
  HarvestResult r;
  r.rf_input_w = rf_input_w;
  r.dc_w = model.dc_output_w(rf_input_w);
  const auto [net, clipped] = net_harvested(r.dc_w, circuit_power_w);
  r.net_w = net;
  r.clipped_net_w = clipped;
  return r;
}

void write_eh_curve_csv(std::ostream& os, const EhModel& model, double max_rf_w,
                        std::size_t points) {
  if (points < 2) throw std::invalid_argument("harvesting: curve needs at least two points");
  os << "rf_w,dc_w\n";
  char buf[64];
  for (std::size_t i = 0; i < points; ++i) {
    const double rf = max_rf_w * static_cast<double>(i) / static_cast<double>(points - 1);
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", rf, model.dc_output_w(rf));
    os << buf;
  }
}

}  // namespace nearswipt
