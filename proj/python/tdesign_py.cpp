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


// Python bindings. Reports cross the boundary as plain dicts built from the
// canonical JSON form.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tdesign/channel_norms.hpp"
#include "tdesign/crypto.hpp"
#include "tdesign/errors.hpp"
#include "tdesign/harness.hpp"
#include "tdesign/json_io.hpp"
#include "tdesign/schur_weyl.hpp"

namespace py = pybind11;
using namespace tdesign;

namespace {

py::object to_py(const Json &j) { return py::module_::import("json").attr("loads")(j.dump()); }

Json from_py(const py::object &o) {
    return Json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

SearchOptions search_options(int restarts, std::uint64_t seed) {
    SearchOptions so;
    so.restarts = restarts;
    so.seed = seed;
    return so;
}

}  // namespace

PYBIND11_MODULE(tdesign, m) {
    m.doc() = "Unitary designs, exact twirls, channel norms and encryption-scheme defects";
    m.attr("__version__") = TDESIGN_VERSION;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<NotHermitianError>(m, "NotHermitianError", PyExc_ValueError);
    py::register_exception<NotAChannelError>(m, "NotAChannelError", PyExc_ValueError);
    py::register_exception<CapError>(m, "CapError", PyExc_OverflowError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

    py::class_<UnitaryEnsemble>(m, "UnitaryEnsemble")
        .def_readonly("d", &UnitaryEnsemble::d)
        .def_readonly("elements", &UnitaryEnsemble::elements)
        .def_readonly("weights", &UnitaryEnsemble::weights)
        .def_readonly("provenance", &UnitaryEnsemble::provenance)
        .def("__len__", &UnitaryEnsemble::size)
        .def("to_json", [](const UnitaryEnsemble &e) { return dump(ensemble_to_json(e)); })
        .def("__repr__", [](const UnitaryEnsemble &e) {
            return "<UnitaryEnsemble " + e.provenance + " size=" + std::to_string(e.size()) + ">";
        });

    m.def("make_ensemble", &make_ensemble, py::arg("d"), py::arg("elements"), py::arg("weights") = std::vector<double>{},
          py::arg("provenance") = "external");
    m.def("pauli_ensemble", &pauli_ensemble, py::arg("d"));
    m.def("clifford_ensemble", [](int qubits) { return clifford_ensemble(qubits); }, py::arg("qubits"));
    m.def("haar_ensemble", &haar_ensemble, py::arg("d"), py::arg("n"), py::arg("seed"));
    m.def("subsample", &subsample, py::arg("parent"), py::arg("n"), py::arg("seed"));
    m.def("ensemble_from_json", [](const std::string &text) { return ensemble_from_json(Json::parse(text)); });
    m.def("load_ensemble", &load_ensemble, py::arg("path"));
    m.def("save_ensemble", &save_ensemble, py::arg("ensemble"), py::arg("path"));

    m.def("design_order_defect",
          [](const UnitaryEnsemble &e, int t) { return to_py(to_json(design_order_defect(e, t))); }, py::arg("ensemble"),
          py::arg("t"));
    m.def("exact_twirl", &exact_twirl, py::arg("x"), py::arg("t"), py::arg("d"));
    m.def("exact_twirl_11", &exact_twirl_11, py::arg("x"), py::arg("d"));
    m.def("channel_twirl_exact", &channel_twirl_exact, py::arg("choi"), py::arg("d"));
    m.def("twirl_one_to_infty_norm", [](int t, int d) { return twirl_one_to_infty_norm(t, d).str(); }, py::arg("t"),
          py::arg("d"));

    m.def(
        "diamond_distance",
        [](const Operator &choi, int d_in, int d_out) {
            return to_py(to_json(diamond_distance(map_from_choi(d_in, d_out, choi))));
        },
        py::arg("choi"), py::arg("d_in"), py::arg("d_out"),
        "Diamond norm of the Hermitian-preserving map with this Choi matrix.");
    m.def(
        "one_to_one_distance",
        [](const Operator &choi, int d_in, int d_out, int restarts, std::uint64_t seed) {
            return to_py(to_json(one_to_one_distance(map_from_choi(d_in, d_out, choi), search_options(restarts, seed))));
        },
        py::arg("choi"), py::arg("d_in"), py::arg("d_out"), py::arg("restarts") = 64, py::arg("seed") = 0);
    m.def(
        "one_to_infty_distance",
        [](const Operator &choi, int d_in, int d_out, int restarts, std::uint64_t seed) {
            return to_py(
                to_json(one_to_infty_distance(map_from_choi(d_in, d_out, choi), search_options(restarts, seed))));
        },
        py::arg("choi"), py::arg("d_in"), py::arg("d_out"), py::arg("restarts") = 64, py::arg("seed") = 0);
    m.def(
        "t_fold_deviation_choi", [](const UnitaryEnsemble &e, int t) { return t_fold_deviation(e, t).choi; },
        py::arg("ensemble"), py::arg("t"));
    m.def(
        "u_ubar_deviation_choi", [](const UnitaryEnsemble &e) { return u_ubar_deviation(e).choi; },
        py::arg("ensemble"));
    m.def(
        "theta_bounds",
        [](const UnitaryEnsemble &e, int restarts, std::uint64_t seed) {
            ThetaOptions th;
            th.search = search_options(restarts, seed);
            const auto b = theta_distance_bounds(e, th);
            py::dict out;
            out["lower"] = to_py(to_json(b.lower));
            out["upper"] = to_py(to_json(b.upper));
            return out;
        },
        py::arg("ensemble"), py::arg("restarts") = 16, py::arg("seed") = 0);

    m.def(
        "security_report",
        [](const UnitaryEnsemble &e, const std::string &mode, int restarts, std::uint64_t attack_seed) {
            CryptoOptions co;
            co.search.restarts = restarts;
            co.theta.search.restarts = restarts;
            const auto scheme = build_scheme(e);
            return to_py(to_json(
                security_report(scheme, attack_suite(scheme.d, attack_seed), parse_security_mode(mode), co)));
        },
        py::arg("ensemble"), py::arg("mode") = "no-side-info", py::arg("restarts") = 16, py::arg("attack_seed") = 0);

    m.def(
        "run_experiment", [](const py::object &config) { return to_py(to_json(run_experiment(config_from_json(from_py(config))))); },
        py::arg("config"), "Runs an experiment from a config dict; returns the JSON report as a dict.");
    m.def(
        "fit_scaling",
        [](const std::vector<std::pair<int, double>> &points) {
            std::vector<ScalingRow> rows;
            for (const auto &[n, v] : points) {
                ScalingRow r;
                r.n = n;
                r.value = v;
                rows.push_back(r);
            }
            const auto fit = fit_scaling(rows);
            return py::make_tuple(fit.slope, fit.intercept, fit.r2);
        },
        py::arg("points"), "OLS of log median value on log n for (n, value) pairs.");
}
