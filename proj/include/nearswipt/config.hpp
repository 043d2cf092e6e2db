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

#include <iosfwd>
#include <optional>
#include <string>

#include "nearswipt/simharness.hpp"

namespace nearswipt {

// Overlays a JSON document on the experiment defaults. The document must be
// an object; an empty object reproduces defaults_for(id) exactly. Keys
// mirror the ExperimentSpec field names, grouped as in the struct ("system",
// "array", "placement", "fading", "eh_model", "ml_grid" are nested objects).
// An optional top-level "experiment" key must agree with `id`. Unknown keys
// are rejected so typos cannot silently fall back to defaults. The resolved
// spec is validated before it is returned.
ExperimentSpec apply_config_json(ExperimentId id, const std::string& json_text);

// The document's top-level "experiment" key, if present.
std::optional<ExperimentId> config_experiment(const std::string& json_text);

// apply_config_json on the contents of a file.
ExperimentSpec load_experiment_config(ExperimentId id, const std::string& path);

// Every resolved knob as a pretty-printed JSON document. Feeding the text
// back through apply_config_json reproduces the same spec.
std::string spec_to_json_text(const ExperimentSpec& spec, int indent = 2);

// meta.txt: tool version, CSV schema version, experiment id, master seed,
// trial count and the full resolved configuration.
void write_meta(const ExperimentSpec& spec, std::ostream& os);
void write_meta(const ExperimentSpec& spec, const std::string& path);

}  // namespace nearswipt
