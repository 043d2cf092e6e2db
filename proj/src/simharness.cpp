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

#include "nearswipt/simharness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <thread>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

namespace nearswipt {

namespace {

// Each trial churns through multi-megabyte factorization workspaces while the
// record buffers it leaves behind are tiny and long lived. glibc keeps the
// freed workspace pages parked in its arena behind those survivors, so a long
// campaign ratchets resident memory up linearly with the trial count even
// though nothing leaks. Handing the freed pages back every few dozen trials
// keeps the footprint flat for a few microseconds per call.
void release_freed_pages() {
#if defined(__GLIBC__)
  malloc_trim(0);
#endif
}

constexpr std::size_t kTrimStride = 64;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// Runs body(trial) for every trial index on a small worker pool. Workers
// only write to their own record slots, so merging is just indexing; the
// first exception aborts the run once every worker has drained.
void parallel_trials(std::size_t n_trials, std::size_t n_threads,
                     const std::function<void(std::size_t)>& body) {
  if (n_threads == 0) n_threads = std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<std::size_t>(n_threads, std::max<std::size_t>(n_trials, 1));

  if (n_threads <= 1) {
    for (std::size_t t = 0; t < n_trials; ++t) {
      body(t);
      if ((t + 1) % kTrimStride == 0) release_freed_pages();
    }
    release_freed_pages();
    return;
  }

  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto worker = [&]() {
    while (true) {
      const std::size_t t = next.fetch_add(1);
      if (t >= n_trials) return;
      try {
        body(t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
      if ((t + 1) % kTrimStride == 0) release_freed_pages();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  release_freed_pages();
}

struct DownlinkEval {
  bool feasible = false;
  arma::vec se;
  std::vector<double> rf, dc, net;
  double sum_se = 0.0;
};

// Full downlink evaluation of one trial: ZF + minimum-rate allocation on
// the ID estimates, energy beams on the EH estimates, genie-aided SE and
// harvested power against the true channels. Rank-deficient or infeasible
// draws come back with feasible = false.
DownlinkEval evaluate_downlink(const arma::cx_mat& true_id, const arma::cx_mat& true_eh,
                               const arma::cx_mat& id_est, const arma::cx_mat& eh_est,
                               const ExperimentSpec& spec, double prelog,
                               double noise_w) {
  DownlinkEval out;

  ZfSolution zf;
  try {
    zf = zf_solution(id_est, spec.target_se_bps_hz, prelog, noise_w,
                     spec.system.tx_power_total_w);
  } catch (const singular_channel_error&) {
    return out;
  }
  if (!zf.feasible) return out;

  const EnergyBeamSet beams =
      nullspace_energy_beams(id_est, eh_est, zf.residual_power_w, spec.beam_split);

  out.se = realized_se(true_id, zf, beams, noise_w, prelog);
  out.sum_se = arma::accu(out.se);

  const arma::cx_mat no_precoders(true_eh.n_rows, 0);
  const arma::vec no_powers;
  for (arma::uword e = 0; e < true_eh.n_cols; ++e) {
    const double rf = spec.include_info_leakage
                          ? rf_input_power(true_eh.col(e), zf, beams)
                          : rf_input_power(true_eh.col(e), no_precoders, no_powers, beams);
    const HarvestResult h = harvest(rf, spec.eh_model, spec.system.eh_circuit_power_w);
    out.rf.push_back(h.rf_input_w);
    out.dc.push_back(h.dc_w);
    out.net.push_back(h.net_w);
  }
  out.feasible = true;
  return out;
}

ExperimentRecord make_record(std::string sweep_point, std::size_t trial, std::uint64_t seed,
                             std::size_t num_id, std::size_t num_eh, DownlinkEval eval) {
  ExperimentRecord rec;
  rec.sweep_point = std::move(sweep_point);
  rec.trial = trial;
  rec.seed = seed;
  rec.num_id = num_id;
  rec.num_eh = num_eh;
  rec.feasible = eval.feasible;
  if (eval.feasible) {
    rec.se_bps_hz.assign(eval.se.begin(), eval.se.end());
    rec.rf_w = std::move(eval.rf);
    rec.dc_w = std::move(eval.dc);
    rec.net_w = std::move(eval.net);
    rec.sum_se_bps_hz = eval.sum_se;
  }
  return rec;
}

std::string band_tag(const BandPoint& bp) {
  return "fc_ghz=" + fmt_short(bp.carrier_frequency_hz / 1e9) + ";array=" +
         std::to_string(bp.rows) + "x" + std::to_string(bp.cols);
}

}  // namespace

std::string to_string(ExperimentId id) {
  switch (id) {
    case ExperimentId::band_sweep: return "band_sweep";
    case ExperimentId::near_vs_far: return "near_vs_far";
    case ExperimentId::estimator_cdf: return "estimator_cdf";
    case ExperimentId::tradeoff: return "tradeoff";
  }
  throw std::logic_error("simharness: unknown experiment id");
}

ExperimentId experiment_from_string(const std::string& name) {
  if (name == "band_sweep") return ExperimentId::band_sweep;
  if (name == "near_vs_far") return ExperimentId::near_vs_far;
  if (name == "estimator_cdf") return ExperimentId::estimator_cdf;
  if (name == "tradeoff") return ExperimentId::tradeoff;
  throw std::invalid_argument("simharness: unknown experiment '" + name + "'");
}

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::perfect: return "perfect";
    case EstimatorKind::ml: return "ml";
    case EstimatorKind::ls: return "ls";
  }
  throw std::logic_error("simharness: unknown estimator kind");
}

EstimatorKind estimator_from_string(const std::string& name) {
  if (name == "perfect") return EstimatorKind::perfect;
  if (name == "ml") return EstimatorKind::ml;
  if (name == "ls") return EstimatorKind::ls;
  throw std::invalid_argument("simharness: unknown estimator '" + name + "'");
}

std::string to_string(FieldModel model) {
  return model == FieldModel::near ? "near" : "far";
}

std::string to_string(BeamPowerSplit split) {
  return split == BeamPowerSplit::equal ? "equal" : "proportional";
}

std::string to_string(EhCurve curve) {
  return curve == EhCurve::sigmoid ? "sigmoid" : "linear";
}

ExperimentSpec ExperimentSpec::defaults_for(ExperimentId id) {
  ExperimentSpec spec;
  spec.id = id;
  switch (id) {
    case ExperimentId::band_sweep:
      spec.band_points = {{3e9, 16, 4}, {7.5e9, 40, 10}, {15e9, 80, 20}, {30e9, 80, 20}};
      spec.id_user_counts = {10, 20, 30, 40};
      spec.system.num_eh_users = 10;
      spec.system.trials = 200;
      break;
    case ExperimentId::near_vs_far:
      spec.band_points = {{7.5e9, 40, 10}, {15e9, 80, 20}};
      spec.id_user_counts = {5, 10, 15, 20};
      spec.system.num_eh_users = 5;
      spec.system.trials = 200;
      spec.placement.cone_half_angle_rad = 5.0 * arma::datum::pi / 180.0;
      break;
    case ExperimentId::estimator_cdf:
      spec.system.carrier_frequency_hz = 7.5e9;
      spec.rows = 40;
      spec.cols = 10;
      spec.system.num_id_users = 20;
      spec.system.num_eh_users = 5;
      spec.system.trials = 500;
      spec.estimators = {EstimatorKind::perfect, EstimatorKind::ml, EstimatorKind::ls};
      spec.eh_pilot_length = 5;
      spec.estimate_id_channels = true;
      // LOS-dominated links, the regime the parametric estimator is built
      // for; the config can dial the kappa statistics back down.
      spec.fading.kappa_mean_db = 60.0;
      spec.fading.kappa_std_db = 0.0;
      // Experiment-scale grid: the azimuth step must stay well below the
      // row beamwidth or the coarse search strands the refinement pass on
      // a sidelobe, and the angular cells dominate the residual error for
      // close-range users. 24x96x64 keeps the atom cache under the limit
      // and a 500-trial campaign in the minutes.
      spec.ml_grid.distance_points = 24;
      spec.ml_grid.azimuth_points = 96;
      spec.ml_grid.elevation_points = 64;
      break;
    case ExperimentId::tradeoff:
      spec.system.carrier_frequency_hz = 7.5e9;
      spec.rows = 40;
      spec.cols = 10;
      spec.system.num_id_users = 1;
      spec.system.num_eh_users = 10;
      spec.system.trials = 200;
      spec.rho_grid.resize(21);
      for (std::size_t i = 0; i < 21; ++i) spec.rho_grid[i] = 0.05 * static_cast<double>(i);
      spec.id_antenna_counts = {1, 2, 4, 8};
      break;
  }
  return spec;
}

void ExperimentSpec::validate() const {
  system.validate();
  placement.validate();
  eh_model.params.validate();
  if (!(target_se_bps_hz >= 0.0))
    throw std::invalid_argument("simharness: target SE must be nonnegative");
  if (!(spacing_factor > 0.0))
    throw std::invalid_argument("simharness: spacing factor must be positive");
  if (system.trials == 0) throw std::invalid_argument("simharness: need at least one trial");
  if (!(placement.distance_min_m >= 1.0))
    throw std::invalid_argument("simharness: placement below the path-loss validity floor");

  switch (id) {
    case ExperimentId::band_sweep:
    case ExperimentId::near_vs_far: {
      if (band_points.empty() || id_user_counts.empty())
        throw std::invalid_argument("simharness: band points and ID-user counts required");
      std::size_t max_users = 0;
      for (std::size_t k : id_user_counts) {
        if (k == 0) throw std::invalid_argument("simharness: ID-user count must be positive");
        max_users = std::max(max_users, k);
      }
      for (const BandPoint& bp : band_points) {
        if (bp.rows < 1 || bp.cols < 1 || !(bp.carrier_frequency_hz > 0))
          throw std::invalid_argument("simharness: invalid band point");
        if (max_users > bp.rows * bp.cols)
          throw std::invalid_argument("simharness: more ID users than antennas");
      }
      if (id == ExperimentId::band_sweep &&
          max_users + system.num_eh_users >= system.coherence_block_len)
        throw std::invalid_argument("simharness: pilots exceed the coherence block");
      if (id == ExperimentId::near_vs_far && !(reference_distance_m >= 1.0))
        throw std::invalid_argument("simharness: reference distance below model validity");
      break;
    }
    case ExperimentId::estimator_cdf: {
      if (estimators.empty())
        throw std::invalid_argument("simharness: estimator list required");
      if (rows * cols < system.num_id_users)
        throw std::invalid_argument("simharness: more ID users than antennas");
      if (eh_pilot_length < system.num_eh_users)
        throw std::invalid_argument(
            "simharness: EH pilot length below the number of sounding EH users");
      const std::size_t pilot_total =
          eh_pilot_length + (estimate_id_channels ? system.num_id_users : 0);
      if (pilot_total >= system.coherence_block_len)
        throw std::invalid_argument("simharness: pilots exceed the coherence block");
      ml_grid.validate();
      break;
    }
    case ExperimentId::tradeoff: {
      if (rho_grid.empty() || id_antenna_counts.empty())
        throw std::invalid_argument("simharness: rho grid and antenna counts required");
      for (double rho : rho_grid)
        if (!(rho >= 0.0 && rho <= 1.0))
          throw std::invalid_argument("simharness: rho values must lie in [0, 1]");
      for (std::size_t n : id_antenna_counts)
        if (n == 0) throw std::invalid_argument("simharness: antenna count must be positive");
      if (!(id_user_distance_m >= 1.0))
        throw std::invalid_argument("simharness: ID-user distance below model validity");
      break;
    }
  }
}

TrialScene build_rician_scene(const ArrayGeometry& geometry,
                              const CorrelationMatrix* correlation,
                              const UserPlacement& placement, const FadingProfile& fading,
                              double carrier_frequency_hz, std::size_t num_id,
                              std::size_t num_eh, std::uint64_t master_seed,
                              std::size_t trial) {
  const std::size_t total = num_id + num_eh;
  const std::size_t m = geometry.size();

  TrialScene scene;
  RngStream placement_rng(master_seed, trial, "placement");
  const auto polar = sample_user_polar(placement, total, placement_rng);
  scene.id_polar.assign(polar.begin(), polar.begin() + num_id);
  scene.eh_polar.assign(polar.begin() + num_id, polar.end());

  RngStream large_scale_rng(master_seed, trial, "largescale");
  RngStream fading_rng(master_seed, trial, "fading");

  // One batched scattering draw for all users: a single pair of real GEMMs
  // against the correlation factor instead of one per user.
  arma::cx_mat scatter = fading_rng.cnormal_mat(m, total);
  if (correlation != nullptr)
    scatter = arma::cx_mat(correlation->sampling_factor * arma::real(scatter),
                           correlation->sampling_factor * arma::imag(scatter));

  scene.id_channels.set_size(m, num_id);
  scene.eh_channels.set_size(m, num_eh);

  for (std::size_t u = 0; u < total; ++u) {
    const double pl = pathloss_indoor_factory_db(polar[u].distance_m, carrier_frequency_hz);
    const LargeScaleState ls = draw_large_scale(pl, fading, large_scale_rng);
    const double kappa = ls.kappa_linear();

    const arma::cx_vec los = nearfield_response(geometry, to_cartesian(polar[u]));
    const arma::cx_vec h =
        std::isfinite(kappa)
            ? arma::cx_vec(std::sqrt(ls.beta()) *
                           (std::sqrt(kappa / (kappa + 1.0)) * los +
                            std::sqrt(1.0 / (kappa + 1.0)) * scatter.col(u)))
            : arma::cx_vec(std::sqrt(ls.beta()) * los);

    if (u < num_id) {
      scene.id_channels.col(u) = h;
      scene.id_large_scale.push_back(ls);
    } else {
      scene.eh_channels.col(u - num_id) = h;
      scene.eh_large_scale.push_back(ls);
    }
  }
  return scene;
}

TrialScene build_equalized_los_scene(const ArrayGeometry& geometry,
                                     const UserPlacement& placement,
                                     double carrier_frequency_hz, double reference_distance_m,
                                     FieldModel field, std::size_t num_id, std::size_t num_eh,
                                     std::uint64_t master_seed, std::size_t trial) {
  const std::size_t total = num_id + num_eh;
  const std::size_t m = geometry.size();
  const double ref_pl =
      pathloss_indoor_factory_db(reference_distance_m, carrier_frequency_hz);
  const double amp = std::sqrt(std::pow(10.0, -ref_pl / 10.0));

  TrialScene scene;
  RngStream placement_rng(master_seed, trial, "placement");
  const auto polar = sample_user_polar(placement, total, placement_rng);
  scene.id_polar.assign(polar.begin(), polar.begin() + num_id);
  scene.eh_polar.assign(polar.begin() + num_id, polar.end());

  LargeScaleState ls;
  ls.pathloss_db = ref_pl;
  ls.kappa_db = std::numeric_limits<double>::infinity();
  scene.id_large_scale.assign(num_id, ls);
  scene.eh_large_scale.assign(num_eh, ls);

  scene.id_channels.set_size(m, num_id);
  scene.eh_channels.set_size(m, num_eh);
  for (std::size_t u = 0; u < total; ++u) {
    const arma::cx_vec a =
        field == FieldModel::near
            ? nearfield_response(geometry, to_cartesian(polar[u]))
            : farfield_response(geometry, polar[u].azimuth_rad, polar[u].elevation_rad);
    if (u < num_id)
      scene.id_channels.col(u) = amp * a;
    else
      scene.eh_channels.col(u - num_id) = amp * a;
  }
  return scene;
}

ExperimentResult run_band_sweep(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentResult result;
  result.id = ExperimentId::band_sweep;

  const double noise_w = noise_power_w(spec.system);
  const std::size_t num_eh = spec.system.num_eh_users;
  const std::size_t trials = spec.system.trials;
  const double tau_c = static_cast<double>(spec.system.coherence_block_len);

  for (const BandPoint& bp : spec.band_points) {
    const ArrayGeometry geometry =
        build_array_geometry(bp.rows, bp.cols, bp.carrier_frequency_hz, spec.spacing_factor);
    const CorrelationMatrix correlation = spatial_correlation_isotropic(geometry);

    for (std::size_t num_id : spec.id_user_counts) {
      const std::string sweep = band_tag(bp) + ";num_id=" + std::to_string(num_id);
      const std::size_t base = result.records.size();
      result.records.resize(base + trials);

      const std::size_t tau_p = num_id + num_eh;  // minimum orthogonal length
      const PilotConfig pilot{tau_p, spec.system.pilot_power_w, 0};
      const double prelog = (tau_c - static_cast<double>(tau_p)) / tau_c;

      parallel_trials(trials, spec.threads, [&, num_id, base](std::size_t t) {
        const TrialScene scene = build_rician_scene(
            geometry, &correlation, spec.placement, spec.fading, bp.carrier_frequency_hz,
            num_id, num_eh, spec.system.master_seed, t);

        RngStream pilot_rng(spec.system.master_seed, t, "pilot");
        arma::cx_mat id_est(geometry.size(), num_id);
        arma::cx_mat eh_est(geometry.size(), num_eh);
        for (std::size_t k = 0; k < num_id; ++k) {
          const arma::cx_vec y =
              simulate_uplink_pilot(scene.id_channels.col(k), pilot, noise_w, pilot_rng);
          id_est.col(k) = ls_estimate(y, pilot, noise_w).estimate;
        }
        for (std::size_t e = 0; e < num_eh; ++e) {
          const arma::cx_vec y =
              simulate_uplink_pilot(scene.eh_channels.col(e), pilot, noise_w, pilot_rng);
          eh_est.col(e) = ls_estimate(y, pilot, noise_w).estimate;
        }

        DownlinkEval eval = evaluate_downlink(scene.id_channels, scene.eh_channels, id_est,
                                              eh_est, spec, prelog, noise_w);
        result.records[base + t] = make_record(sweep, t, spec.system.master_seed, num_id,
                                               num_eh, std::move(eval));
      });
    }
  }
  return result;
}

ExperimentResult run_near_vs_far(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentResult result;
  result.id = ExperimentId::near_vs_far;

  const double noise_w = noise_power_w(spec.system);
  const std::size_t num_eh = spec.system.num_eh_users;
  const std::size_t trials = spec.system.trials;
  constexpr FieldModel kFields[] = {FieldModel::near, FieldModel::far};

  for (const BandPoint& bp : spec.band_points) {
    const ArrayGeometry geometry =
        build_array_geometry(bp.rows, bp.cols, bp.carrier_frequency_hz, spec.spacing_factor);

    for (std::size_t num_id : spec.id_user_counts) {
      std::size_t bases[2];
      std::string sweeps[2];
      for (int f = 0; f < 2; ++f) {
        sweeps[f] = band_tag(bp) + ";field=" + to_string(kFields[f]) +
                    ";num_id=" + std::to_string(num_id);
        bases[f] = result.records.size();
        result.records.resize(bases[f] + trials);
      }

      // Both wavefront models see the same drops: the scene builders only
      // consume the shared placement stream here.
      parallel_trials(trials, spec.threads, [&, num_id](std::size_t t) {
        for (int f = 0; f < 2; ++f) {
          const TrialScene scene = build_equalized_los_scene(
              geometry, spec.placement, bp.carrier_frequency_hz, spec.reference_distance_m,
              kFields[f], num_id, num_eh, spec.system.master_seed, t);
          DownlinkEval eval =
              evaluate_downlink(scene.id_channels, scene.eh_channels, scene.id_channels,
                                scene.eh_channels, spec, 1.0, noise_w);
          result.records[bases[f] + t] = make_record(sweeps[f], t, spec.system.master_seed,
                                                     num_id, num_eh, std::move(eval));
        }
      });
    }
  }
  return result;
}

ExperimentResult run_estimator_cdf(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentResult result;
  result.id = ExperimentId::estimator_cdf;

  const double noise_w = noise_power_w(spec.system);
  const std::size_t num_id = spec.system.num_id_users;
  const std::size_t num_eh = spec.system.num_eh_users;
  const std::size_t trials = spec.system.trials;

  const ArrayGeometry geometry = build_array_geometry(
      spec.rows, spec.cols, spec.system.carrier_frequency_hz, spec.spacing_factor);
  const CorrelationMatrix correlation = spatial_correlation_isotropic(geometry);

  const bool wants_ml = std::find(spec.estimators.begin(), spec.estimators.end(),
                                  EstimatorKind::ml) != spec.estimators.end();
  std::optional<MlSearchGrid> ml_grid;
  if (wants_ml) ml_grid.emplace(geometry, spec.ml_grid);

  const PilotConfig eh_pilot{spec.eh_pilot_length, spec.system.pilot_power_w, 0};
  const PilotConfig id_pilot{num_id, spec.system.pilot_power_w, 0};

  // Pilot overhead is a property of the frame, not of the estimator, so
  // every arm shares the same prelog.
  const double tau_c = static_cast<double>(spec.system.coherence_block_len);
  const double tau_total = static_cast<double>(spec.eh_pilot_length) +
                           (spec.estimate_id_channels ? static_cast<double>(num_id) : 0.0);
  const double prelog = (tau_c - tau_total) / tau_c;

  std::vector<std::size_t> bases(spec.estimators.size());
  std::vector<std::string> sweeps(spec.estimators.size());
  for (std::size_t a = 0; a < spec.estimators.size(); ++a) {
    sweeps[a] = "estimator=" + to_string(spec.estimators[a]);
    bases[a] = result.records.size();
    result.records.resize(bases[a] + trials);
  }

  parallel_trials(trials, spec.threads, [&](std::size_t t) {
    const TrialScene scene = build_rician_scene(
        geometry, &correlation, spec.placement, spec.fading,
        spec.system.carrier_frequency_hz, num_id, num_eh, spec.system.master_seed, t);

    // One set of observations per trial, shared by all estimator arms.
    RngStream pilot_rng(spec.system.master_seed, t, "pilot");
    arma::cx_mat y_id(geometry.size(), num_id);
    arma::cx_mat y_eh(geometry.size(), num_eh);
    if (spec.estimate_id_channels)
      for (std::size_t k = 0; k < num_id; ++k)
        y_id.col(k) = simulate_uplink_pilot(scene.id_channels.col(k), id_pilot, noise_w,
                                            pilot_rng);
    for (std::size_t e = 0; e < num_eh; ++e)
      y_eh.col(e) =
          simulate_uplink_pilot(scene.eh_channels.col(e), eh_pilot, noise_w, pilot_rng);

    for (std::size_t a = 0; a < spec.estimators.size(); ++a) {
      const EstimatorKind kind = spec.estimators[a];
      arma::cx_mat id_est = scene.id_channels;
      arma::cx_mat eh_est = scene.eh_channels;

      if (kind == EstimatorKind::ls) {
        if (spec.estimate_id_channels)
          for (std::size_t k = 0; k < num_id; ++k)
            id_est.col(k) = ls_estimate(y_id.col(k), id_pilot, noise_w).estimate;
        for (std::size_t e = 0; e < num_eh; ++e)
          eh_est.col(e) = ls_estimate(y_eh.col(e), eh_pilot, noise_w).estimate;
      } else if (kind == EstimatorKind::ml) {
        // Batch every user into one grid sweep; pilot scaling differs per
        // group but does not affect the argmax.
        arma::cx_mat all_obs;
        std::vector<PilotConfig> pilots;
        if (spec.estimate_id_channels) {
          all_obs = arma::join_rows(y_id, y_eh);
          pilots.assign(num_id, id_pilot);
          pilots.insert(pilots.end(), num_eh, eh_pilot);
        } else {
          all_obs = y_eh;
          pilots.assign(num_eh, eh_pilot);
        }
        const auto estimates = ml_estimate(all_obs, pilots, *ml_grid);
        std::size_t offset = 0;
        if (spec.estimate_id_channels) {
          for (std::size_t k = 0; k < num_id; ++k) id_est.col(k) = estimates[k].estimate;
          offset = num_id;
        }
        for (std::size_t e = 0; e < num_eh; ++e)
          eh_est.col(e) = estimates[offset + e].estimate;
      }

      DownlinkEval eval = evaluate_downlink(scene.id_channels, scene.eh_channels, id_est,
                                            eh_est, spec, prelog, noise_w);
      result.records[bases[a] + t] = make_record(sweeps[a], t, spec.system.master_seed,
                                                 num_id, num_eh, std::move(eval));
    }
  });
  return result;
}

ExperimentResult run_tradeoff(const ExperimentSpec& spec) {
  spec.validate();
  ExperimentResult result;
  result.id = ExperimentId::tradeoff;

  const double noise_w = noise_power_w(spec.system);
  const double fc = spec.system.carrier_frequency_hz;
  const std::size_t num_eh = spec.system.num_eh_users;
  const std::size_t trials = spec.system.trials;

  const ArrayGeometry geometry = build_array_geometry(spec.rows, spec.cols, fc,
                                                      spec.spacing_factor);
  const CorrelationMatrix correlation = spatial_correlation_isotropic(geometry);

  const PolarPosition id_polar{spec.id_user_distance_m, 0.0, 0.0};
  const arma::vec::fixed<3> id_center = to_cartesian(id_polar);
  const double id_pl = pathloss_indoor_factory_db(spec.id_user_distance_m, fc);

  constexpr FieldModel kFields[] = {FieldModel::near, FieldModel::far};
  const bool kRician[] = {false, true};

  for (FieldModel field : kFields) {
    for (bool rician : kRician) {
      for (std::size_t n_ant : spec.id_antenna_counts) {
        const arma::mat offsets = ue_planar_offsets(n_ant, geometry.wavelength_m);
        const arma::cx_mat los_unit =
            field == FieldModel::near
                ? nearfield_mimo_los(geometry, id_center, offsets)
                : farfield_mimo_los(geometry, id_polar.azimuth_rad, id_polar.elevation_rad,
                                    offsets);

        const std::string arm_tag = "field=" + to_string(field) +
                                    ";channel=" + (rician ? "rician" : "los") +
                                    ";id_antennas=" + std::to_string(n_ant);
        const std::size_t base = result.records.size();
        result.records.resize(base + spec.rho_grid.size() * trials);

        parallel_trials(trials, spec.threads, [&, base](std::size_t t) {
          // EH drops and channels are independent of the arm, and the ID
          // scattering draw is independent of the wavefront model, so all
          // arms at a fixed antenna count stay paired per trial.
          RngStream placement_rng(spec.system.master_seed, t, "placement");
          const auto eh_polar = sample_user_polar(spec.placement, num_eh, placement_rng);
          arma::cx_mat eh_channels(geometry.size(), num_eh);
          for (std::size_t e = 0; e < num_eh; ++e) {
            const double beta =
                std::pow(10.0, -pathloss_indoor_factory_db(eh_polar[e].distance_m, fc) / 10.0);
            eh_channels.col(e) =
                std::sqrt(beta) * nearfield_response(geometry, to_cartesian(eh_polar[e]));
          }

          arma::cx_mat id_channel;
          if (rician) {
            LargeScaleState ls;
            ls.pathloss_db = id_pl;
            ls.kappa_db = spec.tradeoff_kappa_db;
            RngStream id_fading_rng(spec.system.master_seed, t, "idfading");
            id_channel =
                draw_rician_channel(los_unit, &correlation, ls, id_fading_rng, field).entries;
          } else {
            id_channel = std::sqrt(std::pow(10.0, -id_pl / 10.0)) * los_unit;
          }

          for (std::size_t r = 0; r < spec.rho_grid.size(); ++r) {
            const double rho = spec.rho_grid[r];
            const TradeoffDesign design =
                mimo_tradeoff_design(id_channel, eh_channels, rho,
                                     spec.system.tx_power_total_w, noise_w, spec.beam_split);

            DownlinkEval eval;
            eval.feasible = true;
            eval.sum_se = design.sum_se;
            const arma::cx_mat no_precoders(geometry.size(), 0);
            const arma::vec no_powers;
            for (std::size_t e = 0; e < num_eh; ++e) {
              const double rf =
                  spec.include_info_leakage
                      ? rf_input_power(eh_channels.col(e), design.id_precoders,
                                       design.id_powers, design.beams)
                      : rf_input_power(eh_channels.col(e), no_precoders, no_powers,
                                       design.beams);
              const HarvestResult h =
                  harvest(rf, spec.eh_model, spec.system.eh_circuit_power_w);
              eval.rf.push_back(h.rf_input_w);
              eval.dc.push_back(h.dc_w);
              eval.net.push_back(h.net_w);
            }

            ExperimentRecord rec = make_record(arm_tag + ";rho=" + fmt_short(rho), t,
                                               spec.system.master_seed, 1, num_eh,
                                               std::move(eval));
            result.records[base + r * trials + t] = std::move(rec);
          }
        });
      }
    }
  }
  return result;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  switch (spec.id) {
    case ExperimentId::band_sweep: return run_band_sweep(spec);
    case ExperimentId::near_vs_far: return run_near_vs_far(spec);
    case ExperimentId::estimator_cdf: return run_estimator_cdf(spec);
    case ExperimentId::tradeoff: return run_tradeoff(spec);
  }
  throw std::logic_error("simharness: unknown experiment id");
}

std::vector<CdfPoint> compute_cdf(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("simharness: CDF of an empty sample");
  std::sort(values.begin(), values.end());

  std::vector<CdfPoint> cdf;
  const double n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i + 1 < values.size() && values[i + 1] == values[i]) continue;
    cdf.push_back({values[i], static_cast<double>(i + 1) / n});
  }
  return cdf;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("simharness: quantile of an empty sample");
  q = std::clamp(q, 0.0, 1.0);
  std::sort(values.begin(), values.end());
  const double h = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

std::vector<SummaryRow> summarize(const ExperimentResult& result) {
  struct Accum {
    std::size_t trials = 0, feasible = 0;
    double sum_se = 0.0, min_se = 0.0;
    std::size_t se_count = 0;
    double rf = 0.0, dc = 0.0;
    std::vector<double> net_means;
  };

  std::map<std::string, std::size_t> index;
  std::vector<std::string> order;
  std::vector<Accum> accums;

  for (const ExperimentRecord& rec : result.records) {
    auto [it, inserted] = index.try_emplace(rec.sweep_point, accums.size());
    if (inserted) {
      order.push_back(rec.sweep_point);
      accums.emplace_back();
    }
    Accum& acc = accums[it->second];
    ++acc.trials;
    if (!rec.feasible) continue;
    ++acc.feasible;
    acc.sum_se += rec.sum_se_bps_hz;
    if (!rec.se_bps_hz.empty()) {
      acc.min_se += *std::min_element(rec.se_bps_hz.begin(), rec.se_bps_hz.end());
      ++acc.se_count;
    }
    if (!rec.net_w.empty()) {
      const double n = static_cast<double>(rec.net_w.size());
      acc.rf += std::accumulate(rec.rf_w.begin(), rec.rf_w.end(), 0.0) / n;
      acc.dc += std::accumulate(rec.dc_w.begin(), rec.dc_w.end(), 0.0) / n;
      acc.net_means.push_back(std::accumulate(rec.net_w.begin(), rec.net_w.end(), 0.0) / n);
    }
  }

  std::vector<SummaryRow> rows;
  rows.reserve(order.size());
  for (const std::string& sweep : order) {
    const Accum& acc = accums[index.at(sweep)];
    SummaryRow row;
    row.sweep_point = sweep;
    row.trials = acc.trials;
    row.feasible_trials = acc.feasible;
    row.outage_rate =
        1.0 - static_cast<double>(acc.feasible) / static_cast<double>(acc.trials);
    if (acc.feasible > 0) {
      const double nf = static_cast<double>(acc.feasible);
      row.mean_sum_se = acc.sum_se / nf;
      if (acc.se_count > 0) row.mean_min_se = acc.min_se / static_cast<double>(acc.se_count);
    }
    if (!acc.net_means.empty()) {
      const double nh = static_cast<double>(acc.net_means.size());
      row.mean_rf_w = acc.rf / nh;
      row.mean_dc_w = acc.dc / nh;
      row.mean_net_w =
          std::accumulate(acc.net_means.begin(), acc.net_means.end(), 0.0) / nh;
      row.median_net_w = quantile(acc.net_means, 0.5);
      row.p10_net_w = quantile(acc.net_means, 0.1);
      row.p90_net_w = quantile(acc.net_means, 0.9);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

constexpr const char* kRecordsHeader =
    "experiment,sweep_point,trial,seed,feasible,num_id,num_eh,se_bps_hz,rf_w,dc_w,net_w,"
    "sum_se_bps_hz";

std::string join17(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ';';
    out += fmt17(values[i]);
  }
  return out;
}

std::vector<double> split17(const std::string& cell) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < cell.size()) {
    std::size_t next = cell.find(';', pos);
    if (next == std::string::npos) next = cell.size();
    out.push_back(std::strtod(cell.substr(pos, next - pos).c_str(), nullptr));
    pos = next + 1;
  }
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = line.find(',', pos);
    if (next == std::string::npos) {
      cells.push_back(line.substr(pos));
      return cells;
    }
    cells.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
}

}  // namespace

void write_records_csv(const ExperimentResult& result, std::ostream& os) {
  os << kRecordsHeader << '\n';
  const std::string experiment = to_string(result.id);
  for (const ExperimentRecord& rec : result.records) {
    os << experiment << ',' << rec.sweep_point << ',' << rec.trial << ',' << rec.seed << ','
       << (rec.feasible ? 1 : 0) << ',' << rec.num_id << ',' << rec.num_eh << ','
       << join17(rec.se_bps_hz) << ',' << join17(rec.rf_w) << ',' << join17(rec.dc_w) << ','
       << join17(rec.net_w) << ',' << fmt17(rec.sum_se_bps_hz) << '\n';
  }
}

void write_records_csv(const ExperimentResult& result, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("simharness: cannot open '" + path + "' for writing");
  write_records_csv(result, os);
  if (!os.good()) throw std::runtime_error("simharness: write to '" + path + "' failed");
}

ExperimentResult read_records_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kRecordsHeader)
    throw std::invalid_argument("simharness: unrecognized records header");

  ExperimentResult result;
  bool id_set = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 12)
      throw std::invalid_argument("simharness: malformed records row");
    if (!id_set) {
      result.id = experiment_from_string(cells[0]);
      id_set = true;
    }
    ExperimentRecord rec;
    rec.sweep_point = cells[1];
    rec.trial = std::strtoull(cells[2].c_str(), nullptr, 10);
    rec.seed = std::strtoull(cells[3].c_str(), nullptr, 10);
    rec.feasible = cells[4] == "1";
    rec.num_id = std::strtoull(cells[5].c_str(), nullptr, 10);
    rec.num_eh = std::strtoull(cells[6].c_str(), nullptr, 10);
    rec.se_bps_hz = split17(cells[7]);
    rec.rf_w = split17(cells[8]);
    rec.dc_w = split17(cells[9]);
    rec.net_w = split17(cells[10]);
    rec.sum_se_bps_hz = std::strtod(cells[11].c_str(), nullptr);
    result.records.push_back(std::move(rec));
  }
  return result;
}

void write_summary_csv(const std::vector<SummaryRow>& rows, std::ostream& os) {
  os << "sweep_point,trials,feasible_trials,outage_rate,mean_sum_se,mean_min_se,mean_rf_w,"
        "mean_dc_w,mean_net_w,median_net_w,p10_net_w,p90_net_w\n";
  for (const SummaryRow& row : rows) {
    os << row.sweep_point << ',' << row.trials << ',' << row.feasible_trials << ','
       << fmt17(row.outage_rate) << ',' << fmt17(row.mean_sum_se) << ','
       << fmt17(row.mean_min_se) << ',' << fmt17(row.mean_rf_w) << ',' << fmt17(row.mean_dc_w)
       << ',' << fmt17(row.mean_net_w) << ',' << fmt17(row.median_net_w) << ','
       << fmt17(row.p10_net_w) << ',' << fmt17(row.p90_net_w) << '\n';
  }
}

void write_summary_csv(const std::vector<SummaryRow>& rows, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("simharness: cannot open '" + path + "' for writing");
  write_summary_csv(rows, os);
  if (!os.good()) throw std::runtime_error("simharness: write to '" + path + "' failed");
}

}  // namespace nearswipt
