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

#include "nearswipt/rng.hpp"

#include <cmath>
#include <numbers>

namespace nearswipt {

namespace {

// SplitMix64 finalizer. Good avalanche behaviour, so sequential trial
// indices and similar purpose tags still land on unrelated seeds.
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// FNV-1a, enough to turn a short tag into a 64-bit key.
std::uint64_t hash_tag(std::string_view tag) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t trial,
                                 std::string_view purpose) {
  std::uint64_t s = splitmix64(master_seed);
  s = splitmix64(s ^ trial);
  s = splitmix64(s ^ hash_tag(purpose));
  return s;
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t trial, std::string_view purpose)
    : engine_(derive_stream_seed(master_seed, trial, purpose)) {}

double RngStream::uniform() {
  // 53 bits, same construction as std::generate_canonical but pinned down.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

std::pair<double, double> RngStream::normal_pair() {
  // Box-Muller. u1 is kept away from zero so the log stays finite.
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(t), r * std::sin(t)};
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  auto [a, b] = normal_pair();
  spare_ = b;
  has_spare_ = true;
  return a;
}

std::complex<double> RngStream::cnormal() {
  auto [a, b] = normal_pair();
  return {a * std::numbers::sqrt2 / 2.0, b * std::numbers::sqrt2 / 2.0};
}

arma::vec RngStream::normal_vec(arma::uword n) {
  arma::vec v(n);
  for (arma::uword i = 0; i < n; ++i) v[i] = normal();
  return v;
}

arma::cx_vec RngStream::cnormal_vec(arma::uword n) {
  arma::cx_vec v(n);
  for (arma::uword i = 0; i < n; ++i) v[i] = cnormal();
  return v;
}

arma::cx_mat RngStream::cnormal_mat(arma::uword n_rows, arma::uword n_cols) {
  arma::cx_mat m(n_rows, n_cols);
  for (arma::uword j = 0; j < n_cols; ++j)
    for (arma::uword i = 0; i < n_rows; ++i) m(i, j) = cnormal();
  return m;
}

}  // namespace nearswipt
