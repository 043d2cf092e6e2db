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

#include "nearswipt/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace nearswipt {

namespace {

using nlohmann::json;

[[noreturn]] void fail_key(const std::string& scope, const std::string& key) {
  throw std::invalid_argument("config: unknown key '" +
                              (scope.empty() ? key : scope + "." + key) + "'");
}

// Dispatch helper: hands every (key, value) pair of an object to `handle`,
// which returns false for keys it does not recognize.
template <typename Handler>
void walk_object(const json& obj, const std::string& scope, Handler&& handle) {
  if (!obj.is_object())
    throw std::invalid_argument("config: '" + (scope.empty() ? "<root>" : scope) +
                                "' must be a JSON object");
  for (const auto& [key, value] : obj.items())
    if (!handle(key, value)) fail_key(scope, key);
}

void read_system(const json& obj, SystemConfig& sys) {
  walk_object(obj, "system", [&](const std::string& k, const json& v) {
    if (k == "carrier_frequency_hz") sys.carrier_frequency_hz = v.get<double>();
    else if (k == "bandwidth_hz") sys.bandwidth_hz = v.get<double>();
    else if (k == "noise_psd_dbw_hz") sys.noise_psd_dbw_hz = v.get<double>();
    else if (k == "noise_figure_db") sys.noise_figure_db = v.get<double>();
    else if (k == "tx_power_total_w") sys.tx_power_total_w = v.get<double>();
    else if (k == "pilot_power_w") sys.pilot_power_w = v.get<double>();
    else if (k == "coherence_block_len") sys.coherence_block_len = v.get<std::size_t>();
    else if (k == "eh_circuit_power_w") sys.eh_circuit_power_w = v.get<double>();
    else if (k == "num_id_users") sys.num_id_users = v.get<std::size_t>();
    else if (k == "num_eh_users") sys.num_eh_users = v.get<std::size_t>();
    else if (k == "id_user_antennas") sys.id_user_antennas = v.get<std::size_t>();
    else if (k == "trials") sys.trials = v.get<std::size_t>();
    else if (k == "master_seed") sys.master_seed = v.get<std::uint64_t>();
    else return false;
    return true;
  });
}

void read_placement(const json& obj, UserPlacement& placement) {
  walk_object(obj, "placement", [&](const std::string& k, const json& v) {
    if (k == "distance_min_m") placement.distance_min_m = v.get<double>();
    else if (k == "distance_max_m") placement.distance_max_m = v.get<double>();
    else if (k == "azimuth_min_rad") placement.azimuth_min_rad = v.get<double>();
    else if (k == "azimuth_max_rad") placement.azimuth_max_rad = v.get<double>();
    else if (k == "elevation_min_rad") placement.elevation_min_rad = v.get<double>();
    else if (k == "elevation_max_rad") placement.elevation_max_rad = v.get<double>();
    else if (k == "cone_half_angle_rad") {
      if (v.is_null()) placement.cone_half_angle_rad.reset();
      else placement.cone_half_angle_rad = v.get<double>();
    } else return false;
    return true;
  });
}

void read_fading(const json& obj, FadingProfile& fading) {
  walk_object(obj, "fading", [&](const std::string& k, const json& v) {
    if (k == "shadowing_std_db") fading.shadowing_std_db = v.get<double>();
    else if (k == "kappa_mean_db") fading.kappa_mean_db = v.get<double>();
    else if (k == "kappa_std_db") fading.kappa_std_db = v.get<double>();
    else return false;
    return true;
  });
}

void read_eh_model(const json& obj, EhModel& model) {
  walk_object(obj, "eh_model", [&](const std::string& k, const json& v) {
    if (k == "curve") {
      const std::string name = v.get<std::string>();
      if (name == "sigmoid") model.curve = EhCurve::sigmoid;
      else if (name == "linear") model.curve = EhCurve::linear;
      else throw std::invalid_argument("config: unknown eh curve '" + name + "'");
    } else if (k == "saturation_w") model.params.saturation_w = v.get<double>();
    else if (k == "steepness_per_w") model.params.steepness_per_w = v.get<double>();
    else if (k == "inflection_w") model.params.inflection_w = v.get<double>();
    else if (k == "linear_efficiency") model.linear_efficiency = v.get<double>();
    else return false;
    return true;
  });
}

void read_ml_grid(const json& obj, MlGridSpec& grid) {
  walk_object(obj, "ml_grid", [&](const std::string& k, const json& v) {
    if (k == "distance_points") grid.distance_points = v.get<std::size_t>();
    else if (k == "distance_min_m") grid.distance_min_m = v.get<double>();
    else if (k == "distance_max_m") grid.distance_max_m = v.get<double>();
    else if (k == "azimuth_points") grid.azimuth_points = v.get<std::size_t>();
    else if (k == "azimuth_min_rad") grid.azimuth_min_rad = v.get<double>();
    else if (k == "azimuth_max_rad") grid.azimuth_max_rad = v.get<double>();
    else if (k == "elevation_points") grid.elevation_points = v.get<std::size_t>();
    else if (k == "elevation_min_rad") grid.elevation_min_rad = v.get<double>();
    else if (k == "elevation_max_rad") grid.elevation_max_rad = v.get<double>();
    else if (k == "refine") grid.refine = v.get<bool>();
    else return false;
    return true;
  });
}

std::vector<BandPoint> read_band_points(const json& arr) {
  if (!arr.is_array()) throw std::invalid_argument("config: 'band_points' must be an array");
  std::vector<BandPoint> points;
  for (const json& obj : arr) {
    BandPoint bp;
    walk_object(obj, "band_points[]", [&](const std::string& k, const json& v) {
      if (k == "carrier_frequency_hz") bp.carrier_frequency_hz = v.get<double>();
      else if (k == "rows") bp.rows = v.get<std::size_t>();
      else if (k == "cols") bp.cols = v.get<std::size_t>();
      else return false;
      return true;
    });
    points.push_back(bp);
  }
  return points;
}

std::vector<EstimatorKind> read_estimators(const json& arr) {
  if (!arr.is_array()) throw std::invalid_argument("config: 'estimators' must be an array");
  std::vector<EstimatorKind> kinds;
  for (const json& v : arr) kinds.push_back(estimator_from_string(v.get<std::string>()));
  return kinds;
}

ExperimentSpec spec_from_json(ExperimentId id, const json& root) {
  ExperimentSpec spec = ExperimentSpec::defaults_for(id);

  walk_object(root, "", [&](const std::string& k, const json& v) {
    if (k == "experiment") {
      if (experiment_from_string(v.get<std::string>()) != id)
        throw std::invalid_argument("config: experiment key does not match '" +
                                    to_string(id) + "'");
    } else if (k == "system") read_system(v, spec.system);
    else if (k == "array") {
      walk_object(v, "array", [&](const std::string& ak, const json& av) {
        if (ak == "rows") spec.rows = av.get<std::size_t>();
        else if (ak == "cols") spec.cols = av.get<std::size_t>();
        else if (ak == "spacing_factor") spec.spacing_factor = av.get<double>();
        else return false;
        return true;
      });
    } else if (k == "placement") read_placement(v, spec.placement);
    else if (k == "fading") read_fading(v, spec.fading);
    else if (k == "eh_model") read_eh_model(v, spec.eh_model);
    else if (k == "target_se_bps_hz") spec.target_se_bps_hz = v.get<double>();
    else if (k == "beam_split") {
      const std::string name = v.get<std::string>();
      if (name == "equal") spec.beam_split = BeamPowerSplit::equal;
      else if (name == "proportional") spec.beam_split = BeamPowerSplit::proportional;
      else throw std::invalid_argument("config: unknown beam split '" + name + "'");
    } else if (k == "include_info_leakage") spec.include_info_leakage = v.get<bool>();
    else if (k == "threads") spec.threads = v.get<std::size_t>();
    else if (k == "band_points") spec.band_points = read_band_points(v);
    else if (k == "id_user_counts") spec.id_user_counts = v.get<std::vector<std::size_t>>();
    else if (k == "reference_distance_m") spec.reference_distance_m = v.get<double>();
    else if (k == "estimators") spec.estimators = read_estimators(v);
    else if (k == "eh_pilot_length") spec.eh_pilot_length = v.get<std::size_t>();
    else if (k == "estimate_id_channels") spec.estimate_id_channels = v.get<bool>();
    else if (k == "ml_grid") read_ml_grid(v, spec.ml_grid);
    else if (k == "rho_grid") spec.rho_grid = v.get<std::vector<double>>();
    else if (k == "id_antenna_counts")
      spec.id_antenna_counts = v.get<std::vector<std::size_t>>();
    else if (k == "tradeoff_kappa_db") spec.tradeoff_kappa_db = v.get<double>();
    else if (k == "id_user_distance_m") spec.id_user_distance_m = v.get<double>();
    else return false;
    return true;
  });

  spec.validate();
  return spec;
}

json spec_to_json(const ExperimentSpec& spec) {
  json root;
  root["experiment"] = to_string(spec.id);

  json sys;
  sys["carrier_frequency_hz"] = spec.system.carrier_frequency_hz;
  sys["bandwidth_hz"] = spec.system.bandwidth_hz;
  sys["noise_psd_dbw_hz"] = spec.system.noise_psd_dbw_hz;
  sys["noise_figure_db"] = spec.system.noise_figure_db;
  sys["tx_power_total_w"] = spec.system.tx_power_total_w;
  sys["pilot_power_w"] = spec.system.pilot_power_w;
  sys["coherence_block_len"] = spec.system.coherence_block_len;
  sys["eh_circuit_power_w"] = spec.system.eh_circuit_power_w;
  sys["num_id_users"] = spec.system.num_id_users;
  sys["num_eh_users"] = spec.system.num_eh_users;
  sys["id_user_antennas"] = spec.system.id_user_antennas;
  sys["trials"] = spec.system.trials;
  sys["master_seed"] = spec.system.master_seed;
  root["system"] = std::move(sys);

  root["array"] = {{"rows", spec.rows}, {"cols", spec.cols},
                   {"spacing_factor", spec.spacing_factor}};

  json placement;
  placement["distance_min_m"] = spec.placement.distance_min_m;
  placement["distance_max_m"] = spec.placement.distance_max_m;
  placement["azimuth_min_rad"] = spec.placement.azimuth_min_rad;
  placement["azimuth_max_rad"] = spec.placement.azimuth_max_rad;
  placement["elevation_min_rad"] = spec.placement.elevation_min_rad;
  placement["elevation_max_rad"] = spec.placement.elevation_max_rad;
  placement["cone_half_angle_rad"] =
      spec.placement.cone_half_angle_rad ? json(*spec.placement.cone_half_angle_rad)
                                         : json(nullptr);
  root["placement"] = std::move(placement);

  root["fading"] = {{"shadowing_std_db", spec.fading.shadowing_std_db},
                    {"kappa_mean_db", spec.fading.kappa_mean_db},
                    {"kappa_std_db", spec.fading.kappa_std_db}};

  root["eh_model"] = {{"curve", to_string(spec.eh_model.curve)},
                      {"saturation_w", spec.eh_model.params.saturation_w},
                      {"steepness_per_w", spec.eh_model.params.steepness_per_w},
                      {"inflection_w", spec.eh_model.params.inflection_w},
                      {"linear_efficiency", spec.eh_model.linear_efficiency}};

  root["target_se_bps_hz"] = spec.target_se_bps_hz;
  root["beam_split"] = to_string(spec.beam_split);
  root["include_info_leakage"] = spec.include_info_leakage;
  root["threads"] = spec.threads;

  json band_points = json::array();
  for (const BandPoint& bp : spec.band_points)
    band_points.push_back({{"carrier_frequency_hz", bp.carrier_frequency_hz},
                           {"rows", bp.rows},
                           {"cols", bp.cols}});
  root["band_points"] = std::move(band_points);
  root["id_user_counts"] = spec.id_user_counts;
  root["reference_distance_m"] = spec.reference_distance_m;

  json estimators = json::array();
  for (EstimatorKind kind : spec.estimators) estimators.push_back(to_string(kind));
  root["estimators"] = std::move(estimators);
  root["eh_pilot_length"] = spec.eh_pilot_length;
  root["estimate_id_channels"] = spec.estimate_id_channels;

  json grid;
  grid["distance_points"] = spec.ml_grid.distance_points;
  grid["distance_min_m"] = spec.ml_grid.distance_min_m;
  grid["distance_max_m"] = spec.ml_grid.distance_max_m;
  grid["azimuth_points"] = spec.ml_grid.azimuth_points;
  grid["azimuth_min_rad"] = spec.ml_grid.azimuth_min_rad;
  grid["azimuth_max_rad"] = spec.ml_grid.azimuth_max_rad;
  grid["elevation_points"] = spec.ml_grid.elevation_points;
  grid["elevation_min_rad"] = spec.ml_grid.elevation_min_rad;
  grid["elevation_max_rad"] = spec.ml_grid.elevation_max_rad;
  grid["refine"] = spec.ml_grid.refine;
  root["ml_grid"] = std::move(grid);

  root["rho_grid"] = spec.rho_grid;
  root["id_antenna_counts"] = spec.id_antenna_counts;
  root["tradeoff_kappa_db"] = spec.tradeoff_kappa_db;
  root["id_user_distance_m"] = spec.id_user_distance_m;
  return root;
}

}  // namespace

ExperimentSpec apply_config_json(ExperimentId id, const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& err) {
    throw std::invalid_argument(std::string("config: ") + err.what());
  }
  return spec_from_json(id, root);
}

std::optional<ExperimentId> config_experiment(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& err) {
    throw std::invalid_argument(std::string("config: ") + err.what());
  }
  if (!root.is_object() || !root.contains("experiment")) return std::nullopt;
  return experiment_from_string(root.at("experiment").get<std::string>());
}

ExperimentSpec load_experiment_config(ExperimentId id, const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("config: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << is.rdbuf();
  return apply_config_json(id, buffer.str());
}

std::string spec_to_json_text(const ExperimentSpec& spec, int indent) {
  return spec_to_json(spec).dump(indent);
}

void write_meta(const ExperimentSpec& spec, std::ostream& os) {
  os << "tool: nearswipt " << kVersion << '\n'
     << "csv_schema_version: " << kCsvSchemaVersion << '\n'
     << "experiment: " << to_string(spec.id) << '\n'
     << "master_seed: " << spec.system.master_seed << '\n'
     << "trials: " << spec.system.trials << '\n'
     << "resolved_config:\n"
     << spec_to_json_text(spec) << '\n';
}

void write_meta(const ExperimentSpec& spec, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("config: cannot open '" + path + "' for writing");
  write_meta(spec, os);
  if (!os.good()) throw std::runtime_error("config: write to '" + path + "' failed");
}

}  // namespace nearswipt
