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


#include "tdesign/json_io.hpp"

#include <fstream>
#include <sstream>

#include "tdesign/errors.hpp"

namespace tdesign {

namespace {

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json &j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ConfigError("ensemble file: matrix entries must be [re, im] pairs");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

Json optional_number(const std::optional<double> &v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

Json ensemble_to_json(const UnitaryEnsemble &ens) {
    Json elements = Json::array();
    for (const auto &u : ens.elements) {
        Json m = Json::array();
        for (Eigen::Index r = 0; r < u.rows(); ++r) {
            for (Eigen::Index c = 0; c < u.cols(); ++c) {
                m.push_back(complex_to_json(u(r, c)));
            }
        }
        elements.push_back(std::move(m));
    }
    return {{"d", ens.d}, {"provenance", ens.provenance}, {"elements", std::move(elements)}, {"weights", ens.weights}};
}

UnitaryEnsemble ensemble_from_json(const Json &j) {
    if (!j.is_object() || !j.contains("d") || !j.contains("elements")) {
        throw ConfigError("ensemble file: expected an object with \"d\" and \"elements\"");
    }
    if (!j["d"].is_number_integer() || j["d"].get<int>() < 1) {
        throw ConfigError("ensemble file: \"d\" must be a positive integer");
    }
    const int d = j["d"].get<int>();
    const Json &elems = j["elements"];
    if (!elems.is_array()) {
        throw ConfigError("ensemble file: \"elements\" must be an array");
    }
    std::vector<Operator> elements;
    for (const auto &m : elems) {
        if (!m.is_array() || m.size() != static_cast<std::size_t>(d) * d) {
            throw ConfigError("ensemble file: each element needs d * d entries");
        }
        Operator u(d, d);
        for (int r = 0; r < d; ++r) {
            for (int c = 0; c < d; ++c) {
                u(r, c) = complex_from_json(m[r * d + c]);
            }
        }
        elements.push_back(std::move(u));
    }
    std::vector<double> weights;
    if (j.contains("weights")) {
        if (!j["weights"].is_array()) {
            throw ConfigError("ensemble file: \"weights\" must be an array");
        }
        for (const auto &w : j["weights"]) {
            if (!w.is_number()) {
                throw ConfigError("ensemble file: weights must be numbers");
            }
            weights.push_back(w.get<double>());
        }
    }
    const std::string provenance = j.value("provenance", std::string("external"));
    return make_ensemble(d, std::move(elements), std::move(weights), provenance);
}

void save_ensemble(const UnitaryEnsemble &ens, const std::string &path) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot open '" + path + "' for writing");
    }
    out << dump(ensemble_to_json(ens));
}

UnitaryEnsemble load_ensemble(const std::string &path) { return ensemble_from_json(read_json_file(path)); }

Json complex_vector_to_json(const StateVector &v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(complex_to_json(v(i)));
    }
    return out;
}

Json to_json(const NormReport &r) {
    Json j{{"kind", to_string(r.kind)}, {"value", r.value}};
    if (r.kind == NormKind::certified) {
        j["gap"] = r.gap;
    }
    if (r.kind == NormKind::heuristic_lower || r.kind == NormKind::assembled) {
        j["restarts"] = r.restarts;
    }
    j["lower_bound"] = optional_number(r.lower_bound);
    j["upper_bound"] = optional_number(r.upper_bound);
    j["witness"] = r.witness ? complex_vector_to_json(*r.witness) : Json(nullptr);
    Json terms = Json::object();
    for (const auto &[name, value] : r.terms) {
        terms[name] = value;
    }
    j["terms"] = std::move(terms);
    return j;
}

Json to_json(const DesignCertificate &c) {
    return {{"t", c.t}, {"defect", c.defect}, {"tolerance", c.tolerance}, {"verdict", to_string(c.verdict)}};
}

Json to_json(const SecurityReport &r) {
    Json rows = Json::array();
    for (const auto &row : r.nm_defects) {
        rows.push_back({{"label", row.label},
                        {"p_star", row.p_star},
                        {"defect", to_json(row.defect)},
                        {"value", row.defect.value},
                        {"norm_kind", to_string(row.defect.kind)},
                        {"mode", to_string(r.mode)},
                        {"p_star_unit_interval", row.p_star_unit},
                        {"defect_unit_interval", row.defect_unit},
                        {"twirl_coefficient", row.twirl_coefficient}});
    }
    return {{"provenance", r.provenance},
            {"d", r.d},
            {"key_bits", r.key_bits},
            {"mode", to_string(r.mode)},
            {"sigma", "maximally-mixed"},
            {"defects_are_upper_bounds", true},
            {"indist_defect", to_json(r.indist_defect)},
            {"nm_defects", std::move(rows)}};
}

std::string dump(const Json &j) { return j.dump(2) + "\n"; }

Json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open '" + path + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return Json::parse(buffer.str());
    } catch (const Json::exception &e) {
        throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
    }
}

}  // namespace tdesign
