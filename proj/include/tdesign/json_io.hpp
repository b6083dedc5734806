// Copyright 2026 The tdesign Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// JSON forms of ensembles and reports. Doubles are rendered in shortest
// round-trip form, so dump(parse(dump(x))) is byte-identical.

#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "tdesign/channel_norms.hpp"
#include "tdesign/crypto.hpp"
#include "tdesign/ensembles.hpp"

namespace tdesign {

using Json = nlohmann::json;

/// {"d", "provenance", "elements": [[[re, im], ...] row-major, ...], "weights"}.
Json ensemble_to_json(const UnitaryEnsemble &ens);
/// Throws ConfigError on malformed documents or invalid ensembles.
UnitaryEnsemble ensemble_from_json(const Json &j);

void save_ensemble(const UnitaryEnsemble &ens, const std::string &path);
UnitaryEnsemble load_ensemble(const std::string &path);

Json complex_vector_to_json(const StateVector &v);

Json to_json(const NormReport &r);
Json to_json(const DesignCertificate &c);
Json to_json(const SecurityReport &r);

/// Two-space indented text with a trailing newline.
std::string dump(const Json &j);

/// Reads and parses a JSON file; throws ConfigError.
Json read_json_file(const std::string &path);

}  // namespace tdesign
