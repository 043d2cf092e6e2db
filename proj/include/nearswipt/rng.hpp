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
#include <complex>
#include <cstdint>
#include <string_view>
#include <utility>

namespace nearswipt {

// Maps (master_seed, trial, purpose) to a decorrelated 64-bit seed.
// Purpose tags keep draws for placement, fading, pilot noise, etc. on
// independent substreams, so adding a consumer never shifts the others.
std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t trial,
                                 std::string_view purpose);

// Deterministic random stream keyed by (master_seed, trial, purpose).
//
// Normal variates come from a hand-rolled Box-Muller transform on top of
// 53-bit uniforms instead of std::normal_distribution, whose output is
// implementation-defined. Identical seeds give identical draws on every
// platform, which the paired-arm experiment design relies on.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t trial, std::string_view purpose);

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);

  double normal();
  std::complex<double> cnormal();  // CN(0,1): real and imag are N(0, 1/2)

  arma::vec normal_vec(arma::uword n);
  arma::cx_vec cnormal_vec(arma::uword n);
  arma::cx_mat cnormal_mat(arma::uword n_rows, arma::uword n_cols);

 private:
  std::pair<double, double> normal_pair();

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace nearswipt
