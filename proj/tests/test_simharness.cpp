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

#include <sstream>
#include <string>

#include "doctest.h"
#include "nearswipt/simharness.hpp"

using namespace nearswipt;

TEST_CASE("enum names round trip") {
  for (ExperimentId id : {ExperimentId::band_sweep, ExperimentId::near_vs_far,
                          ExperimentId::estimator_cdf, ExperimentId::tradeoff})
    CHECK(experiment_from_string(to_string(id)) == id);
  for (EstimatorKind k : {EstimatorKind::perfect, EstimatorKind::ml, EstimatorKind::ls})
    CHECK(estimator_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(experiment_from_string("bogus"), std::invalid_argument);
  CHECK_THROWS_AS(estimator_from_string("bogus"), std::invalid_argument);
}

TEST_CASE("experiment defaults validate") {
  for (ExperimentId id : {ExperimentId::band_sweep, ExperimentId::near_vs_far,
                          ExperimentId::estimator_cdf, ExperimentId::tradeoff}) {
    const ExperimentSpec spec = ExperimentSpec::defaults_for(id);
    CHECK_NOTHROW(spec.validate());
  }

  ExperimentSpec bad = ExperimentSpec::defaults_for(ExperimentId::band_sweep);
  bad.placement.distance_min_m = 0.7;  // below the path-loss validity floor
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = ExperimentSpec::defaults_for(ExperimentId::tradeoff);
  bad.rho_grid = {0.5, 1.2};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("cdf and quantile helpers") {
  const std::vector<double> v = {3.0, 1.0, 2.0, 2.0, 5.0};
  const auto cdf = compute_cdf(v);
  REQUIRE(cdf.size() == 4);  // duplicates collapse
  CHECK(cdf[0].value == 1.0);
  CHECK(cdf[0].probability == doctest::Approx(0.2));
  CHECK(cdf[1].value == 2.0);
  CHECK(cdf[1].probability == doctest::Approx(0.6));
  CHECK(cdf[3].value == 5.0);
  CHECK(cdf[3].probability == doctest::Approx(1.0));

  CHECK(quantile({1.0, 2.0, 3.0, 4.0, 5.0}, 0.5) == doctest::Approx(3.0));
  CHECK(quantile({1.0, 2.0, 3.0, 4.0}, 0.5) == doctest::Approx(2.5));
  CHECK(quantile({7.0}, 0.9) == doctest::Approx(7.0));
}

TEST_CASE("records csv round trips exactly") {
  ExperimentResult result;
  result.id = ExperimentId::near_vs_far;

  ExperimentRecord r;
  r.sweep_point = "fc_ghz=7.5;array=40x10;field=near;num_id=5";
  r.trial = 3;
  r.seed = 1234567890123456789ull;
  r.feasible = true;
  r.num_id = 5;
  r.num_eh = 2;
  r.se_bps_hz = {4.0, 3.9999999999999996, 0.1234567890123456789};
  r.rf_w = {1.5e-7, 2.5e-12};
  r.dc_w = {1e-300, 0.0};
  r.net_w = {-3e-3, 2.9999999999999e-3};
  r.sum_se_bps_hz = 12.000000000000002;
  result.records.push_back(r);

  r.feasible = false;
  r.trial = 4;
  r.se_bps_hz.clear();
  result.records.push_back(r);

  std::ostringstream os;
  write_records_csv(result, os);
  std::istringstream is(os.str());
  const ExperimentResult back = read_records_csv(is);

  REQUIRE(back.records.size() == 2);
  CHECK(back.id == result.id);
  const ExperimentRecord& b = back.records[0];
  CHECK(b.sweep_point == r.sweep_point);
  CHECK(b.trial == 3);
  CHECK(b.seed == 1234567890123456789ull);
  CHECK(b.num_id == 5);
  CHECK(b.num_eh == 2);
  REQUIRE(b.se_bps_hz.size() == 3);
  // %.17g print and strtod parse are lossless for doubles.
  CHECK(b.se_bps_hz[1] == 3.9999999999999996);
  CHECK(b.se_bps_hz[2] == 0.1234567890123456789);
  CHECK(b.dc_w[0] == 1e-300);
  CHECK(b.net_w[0] == -3e-3);
  CHECK(b.sum_se_bps_hz == 12.000000000000002);
  CHECK(back.records[1].feasible == false);
  CHECK(back.records[1].se_bps_hz.empty());

  std::istringstream bad("not,a,records,header\n");
  CHECK_THROWS_AS(read_records_csv(bad), std::invalid_argument);
}

TEST_CASE("summaries aggregate per sweep point in first-seen order") {
  ExperimentResult result;
  result.id = ExperimentId::band_sweep;

  ExperimentRecord a;
  a.sweep_point = "pt_b";
  a.feasible = true;
  a.num_eh = 2;
  a.se_bps_hz = {4.0};
  a.rf_w = {1e-3, 3e-3};
  a.dc_w = {1e-3, 3e-3};
  a.net_w = {-2e-3, 0.0};
  a.sum_se_bps_hz = 4.0;
  result.records.push_back(a);

  ExperimentRecord outage = a;
  outage.feasible = false;
  outage.sum_se_bps_hz = 0.0;
  result.records.push_back(outage);

  ExperimentRecord c = a;
  c.sweep_point = "pt_a";
  result.records.push_back(c);

  const auto rows = summarize(result);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].sweep_point == "pt_b");  // first appearance wins
  CHECK(rows[1].sweep_point == "pt_a");
  CHECK(rows[0].trials == 2);
  CHECK(rows[0].feasible_trials == 1);
  CHECK(rows[0].outage_rate == doctest::Approx(0.5));
  // Feasible-only statistics with per-trial means over EH users.
  CHECK(rows[0].mean_sum_se == doctest::Approx(4.0));
  CHECK(rows[0].mean_rf_w == doctest::Approx(2e-3));
  CHECK(rows[0].mean_net_w == doctest::Approx(-1e-3));
}

TEST_CASE("rician scenes are deterministic and share placements across bands") {
  const ExperimentSpec spec = ExperimentSpec::defaults_for(ExperimentId::band_sweep);
  const ArrayGeometry geom_a = build_array_geometry(16, 4, 3e9);
  const ArrayGeometry geom_b = build_array_geometry(40, 10, 7.5e9);

  const TrialScene s1 =
      build_rician_scene(geom_a, nullptr, spec.placement, spec.fading, 3e9, 4, 2, 77, 5);
  const TrialScene s2 =
      build_rician_scene(geom_a, nullptr, spec.placement, spec.fading, 3e9, 4, 2, 77, 5);
  CHECK(arma::abs(s1.id_channels - s2.id_channels).max() == 0.0);
  CHECK(arma::abs(s1.eh_channels - s2.eh_channels).max() == 0.0);

  // Same seed and trial on another band: identical user drops, different
  // channels (geometry and carrier differ).
  const TrialScene s3 =
      build_rician_scene(geom_b, nullptr, spec.placement, spec.fading, 7.5e9, 4, 2, 77, 5);
  REQUIRE(s3.id_polar.size() == s1.id_polar.size());
  for (std::size_t k = 0; k < s1.id_polar.size(); ++k) {
    CHECK(s1.id_polar[k].distance_m == s3.id_polar[k].distance_m);
    CHECK(s1.id_polar[k].azimuth_rad == s3.id_polar[k].azimuth_rad);
    CHECK(s1.id_polar[k].elevation_rad == s3.id_polar[k].elevation_rad);
  }

  // Different trials decorrelate the drops.
  const TrialScene s4 =
      build_rician_scene(geom_a, nullptr, spec.placement, spec.fading, 3e9, 4, 2, 77, 6);
  CHECK(s4.id_polar[0].distance_m != s1.id_polar[0].distance_m);
}

TEST_CASE("equalized scenes pair near and far arms on the same drops") {
  const ExperimentSpec spec = ExperimentSpec::defaults_for(ExperimentId::near_vs_far);
  const ArrayGeometry geom = build_array_geometry(40, 10, 7.5e9);

  const TrialScene near = build_equalized_los_scene(geom, spec.placement, 7.5e9, 25.0,
                                                    FieldModel::near, 3, 2, 9, 0);
  const TrialScene far = build_equalized_los_scene(geom, spec.placement, 7.5e9, 25.0,
                                                   FieldModel::far, 3, 2, 9, 0);
  REQUIRE(near.eh_polar.size() == 2);
  for (std::size_t e = 0; e < 2; ++e) {
    CHECK(near.eh_polar[e].distance_m == far.eh_polar[e].distance_m);
    CHECK(near.eh_polar[e].azimuth_rad == far.eh_polar[e].azimuth_rad);
  }
  // Same equalized per-element power, different wavefront structure.
  const double p_near = arma::accu(arma::square(arma::abs(near.eh_channels.col(0))));
  const double p_far = arma::accu(arma::square(arma::abs(far.eh_channels.col(0))));
  CHECK(p_near == doctest::Approx(p_far).epsilon(1e-9));
  CHECK(arma::abs(near.eh_channels - far.eh_channels).max() > 1e-12);
}

TEST_CASE("experiment runs are reproducible and thread-count invariant") {
  ExperimentSpec spec = ExperimentSpec::defaults_for(ExperimentId::near_vs_far);
  spec.system.trials = 2;
  spec.system.num_eh_users = 2;
  spec.id_user_counts = {3};
  spec.threads = 1;

  const ExperimentResult a = run_experiment(spec);
  spec.threads = 4;
  const ExperimentResult b = run_experiment(spec);

  std::ostringstream oa, ob;
  write_records_csv(a, oa);
  write_records_csv(b, ob);
  CHECK(oa.str() == ob.str());
  CHECK(!a.records.empty());
}
