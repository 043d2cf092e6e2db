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

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "nearswipt/channel.hpp"
#include "nearswipt/estimation.hpp"
#include "nearswipt/harvesting.hpp"
#include "nearswipt/precoding.hpp"
#include "nearswipt/scenario.hpp"

namespace nearswipt {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kCsvSchemaVersion = 1;

// The four built-in Monte-Carlo campaigns:
//   band_sweep    - harvested power vs. ID-user count across carrier bands
//                   and array sizes, LS estimation, correlated Rician fading
//   near_vs_far   - spherical vs. planar wavefront under equalized path
//                   loss, broadside-clustered users, perfect CSI, pure LOS
//   estimator_cdf - net-harvested-power CDFs for perfect/ML/LS estimation
//                   with a small pilot budget
//   tradeoff      - harvested power vs. sum SE of a fixed multi-antenna
//                   link while sweeping the power split
enum class ExperimentId { band_sweep, near_vs_far, estimator_cdf, tradeoff };

std::string to_string(ExperimentId id);
ExperimentId experiment_from_string(const std::string& name);
std::string to_string(EstimatorKind kind);
EstimatorKind estimator_from_string(const std::string& name);
std::string to_string(FieldModel model);
std::string to_string(BeamPowerSplit split);
std::string to_string(EhCurve curve);

// One (carrier, array size) operating point.
struct BandPoint {
  double carrier_frequency_hz = 7.5e9;
  std::size_t rows = 40;
  std::size_t cols = 10;
};

// Full description of one campaign. defaults_for() fills the built-in
// per-experiment defaults; the config file and CLI override from there.
struct ExperimentSpec {
  ExperimentId id = ExperimentId::band_sweep;
  SystemConfig system;
  std::size_t rows = 40;  // array for experiments without a band sweep
  std::size_t cols = 10;
  double spacing_factor = 0.5;
  UserPlacement placement;
  FadingProfile fading;
  EhModel eh_model;
  double target_se_bps_hz = 4.0;
  BeamPowerSplit beam_split = BeamPowerSplit::equal;
  bool include_info_leakage = true;  // EH users also collect data-beam power
  std::size_t threads = 0;           // 0 = hardware concurrency

  // band_sweep / near_vs_far
  std::vector<BandPoint> band_points;
  std::vector<std::size_t> id_user_counts;
  double reference_distance_m = 25.0;  // near_vs_far path-loss equalization

  // estimator_cdf
  std::vector<EstimatorKind> estimators;
  std::size_t eh_pilot_length = 5;
  bool estimate_id_channels = true;
  MlGridSpec ml_grid;

  // tradeoff
  std::vector<double> rho_grid;
  std::vector<std::size_t> id_antenna_counts;
  double tradeoff_kappa_db = 20.0;
  double id_user_distance_m = 25.0;  // fixed broadside ID link

  static ExperimentSpec defaults_for(ExperimentId id);
  void validate() const;
};

// One Monte-Carlo draw at one sweep point. List-valued fields are empty
// for outage trials. sum_se is the sum over ID users (or the waterfilled
// sum SE in the tradeoff experiment).
struct ExperimentRecord {
  std::string sweep_point;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  bool feasible = true;
  std::size_t num_id = 0;
  std::size_t num_eh = 0;
  std::vector<double> se_bps_hz;  // per ID user
  std::vector<double> rf_w;       // per EH user
  std::vector<double> dc_w;
  std::vector<double> net_w;
  double sum_se_bps_hz = 0.0;
};

struct ExperimentResult {
  ExperimentId id = ExperimentId::band_sweep;
  std::vector<ExperimentRecord> records;
};

// All randomness of one trial: user drops, large-scale states, true
// channels (base station x user antenna). ID users come first in the
// shared placement stream so arms with equal user counts pair up.
struct TrialScene {
  std::vector<PolarPosition> id_polar;
  std::vector<PolarPosition> eh_polar;
  std::vector<LargeScaleState> id_large_scale;
  std::vector<LargeScaleState> eh_large_scale;
  arma::cx_mat id_channels;  // M x num_id (single-antenna ID users)
  arma::cx_mat eh_channels;  // M x num_eh
};

// Correlated Rician scene with indoor-factory path loss, lognormal
// shadowing and lognormal kappa. correlation may be null (white scattering).
TrialScene build_rician_scene(const ArrayGeometry& geometry,
                              const CorrelationMatrix* correlation,
                              const UserPlacement& placement, const FadingProfile& fading,
                              double carrier_frequency_hz, std::size_t num_id,
                              std::size_t num_eh, std::uint64_t master_seed,
                              std::size_t trial);

// Pure-LOS scene with every link scaled to the shadowing-free path loss at
// reference_distance, using the requested wavefront model for all users.
// Identical seeds give identical user drops for both wavefront models.
TrialScene build_equalized_los_scene(const ArrayGeometry& geometry,
                                     const UserPlacement& placement,
                                     double carrier_frequency_hz, double reference_distance_m,
                                     FieldModel field, std::size_t num_id, std::size_t num_eh,
                                     std::uint64_t master_seed, std::size_t trial);

ExperimentResult run_band_sweep(const ExperimentSpec& spec);
ExperimentResult run_near_vs_far(const ExperimentSpec& spec);
ExperimentResult run_estimator_cdf(const ExperimentSpec& spec);
ExperimentResult run_tradeoff(const ExperimentSpec& spec);
ExperimentResult run_experiment(const ExperimentSpec& spec);

struct CdfPoint {
  double value = 0.0;
  double probability = 0.0;
};

// Right-continuous empirical CDF with duplicate values collapsed.
std::vector<CdfPoint> compute_cdf(std::vector<double> values);

// Linear-interpolation quantile (the common "type 7" definition).
double quantile(std::vector<double> values, double q);

// Per-sweep-point aggregate. Harvested-power statistics are over feasible
// trials only (per-trial mean across EH users); outage_rate keeps the
// failed trials visible.
struct SummaryRow {
  std::string sweep_point;
  std::size_t trials = 0;
  std::size_t feasible_trials = 0;
  double outage_rate = 0.0;
  double mean_sum_se = std::numeric_limits<double>::quiet_NaN();
  double mean_min_se = std::numeric_limits<double>::quiet_NaN();
  double mean_rf_w = std::numeric_limits<double>::quiet_NaN();
  double mean_dc_w = std::numeric_limits<double>::quiet_NaN();
  double mean_net_w = std::numeric_limits<double>::quiet_NaN();
  double median_net_w = std::numeric_limits<double>::quiet_NaN();
  double p10_net_w = std::numeric_limits<double>::quiet_NaN();
  double p90_net_w = std::numeric_limits<double>::quiet_NaN();
};

std::vector<SummaryRow> summarize(const ExperimentResult& result);

// records.csv: one row per record, floats as %.17g so values round-trip
// exactly; list fields are semicolon-joined within their cell.
void write_records_csv(const ExperimentResult& result, std::ostream& os);
void write_records_csv(const ExperimentResult& result, const std::string& path);
ExperimentResult read_records_csv(std::istream& is);

void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& os);
void write_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path);

}  // namespace nearswipt
