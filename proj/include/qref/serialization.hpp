// Copyright 2026 The qref Authors
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

#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "qref/oracle.hpp"
#include "qref/simulator.hpp"

/// JSON encodings of matrices, strategies, channels and run outputs.
///
/// A matrix is {"real": [[...]], "imag": [[...]]} with rows outermost;
/// "imag" may be omitted for real matrices. POVMs are arrays of matrices.
namespace qref::io {

using Json = nlohmann::ordered_json;

/// Malformed or invalid configuration input (CLI exit code 2).
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline const Json &require(const Json &j, const char *key, const std::string &where) {
    if (!j.is_object() || !j.contains(key)) {
        throw ConfigError(where + ": missing required field '" + key + "'");
    }
    return j.at(key);
}

inline double as_number(const Json &j, const std::string &where) {
    if (!j.is_number()) throw ConfigError(where + ": expected a number");
    return j.get<double>();
}

inline int as_int(const Json &j, const std::string &where) {
    if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer");
    return j.get<int>();
}

inline std::string as_string(const Json &j, const std::string &where) {
    if (!j.is_string()) throw ConfigError(where + ": expected a string");
    return j.get<std::string>();
}

inline std::vector<double> as_number_list(const Json &j, const std::string &where) {
    if (!j.is_array()) throw ConfigError(where + ": expected an array of numbers");
    std::vector<double> out;
    for (std::size_t k = 0; k < j.size(); ++k) out.push_back(as_number(j[k], where + "[" + std::to_string(k) + "]"));
    return out;
}

inline std::vector<int> as_int_list(const Json &j, const std::string &where) {
    if (!j.is_array()) throw ConfigError(where + ": expected an array of integers");
    std::vector<int> out;
    for (std::size_t k = 0; k < j.size(); ++k) out.push_back(as_int(j[k], where + "[" + std::to_string(k) + "]"));
    return out;
}

/// Non-finite values (e.g. an infinite discrimination ratio) become null.
inline Json number(double v) {
    return std::isfinite(v) ? Json(v) : Json(nullptr);
}

// ---------------------------------------------------------------------------
// Matrices and quantum objects

inline Json matrix_to_json(const ComplexMatrix &m) {
    Json re = Json::array(), im = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json rr = Json::array(), ri = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            rr.push_back(m(r, c).real());
            ri.push_back(m(r, c).imag());
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ri));
    }
    return Json{{"real", re}, {"imag", im}};
}

inline ComplexMatrix matrix_from_json(const Json &j, const std::string &where) {
    const Json &re = require(j, "real", where);
    if (!re.is_array() || re.empty()) throw ConfigError(where + ".real: expected a non-empty array of rows");
    const auto rows = static_cast<Eigen::Index>(re.size());
    const auto cols = static_cast<Eigen::Index>(re[0].is_array() ? re[0].size() : 0);
    if (cols == 0) throw ConfigError(where + ".real: rows must be non-empty arrays");
    const Json *im = j.contains("imag") ? &j.at("imag") : nullptr;
    if (im && (!im->is_array() || static_cast<Eigen::Index>(im->size()) != rows)) {
        throw ConfigError(where + ".imag: shape does not match .real");
    }
    ComplexMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Json &row = re[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            throw ConfigError(where + ".real: ragged rows");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            const std::string cell = where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]";
            double imag = 0.0;
            if (im) {
                const Json &irow = (*im)[static_cast<std::size_t>(r)];
                if (!irow.is_array() || static_cast<Eigen::Index>(irow.size()) != cols) {
                    throw ConfigError(where + ".imag: shape does not match .real");
                }
                imag = as_number(irow[static_cast<std::size_t>(c)], cell + ".imag");
            }
            m(r, c) = Complex(as_number(row[static_cast<std::size_t>(c)], cell + ".real"), imag);
        }
    }
    return m;
}

/// Runs a constructor that validates its input, turning rejections into ConfigError.
template <class F>
auto validated(const std::string &where, F &&make) -> decltype(make()) {
    try {
        return make();
    } catch (const std::invalid_argument &e) {
        throw ConfigError(where + ": " + e.what());
    }
}

inline Json povm_to_json(const Povm &p) {
    Json out = Json::array();
    for (const auto &e : p.elements()) out.push_back(matrix_to_json(e));
    return out;
}

inline Povm povm_from_json(const Json &j, const std::string &where) {
    if (!j.is_array()) throw ConfigError(where + ": expected an array of matrices");
    std::vector<ComplexMatrix> elements;
    for (std::size_t k = 0; k < j.size(); ++k) elements.push_back(matrix_from_json(j[k], where + "[" + std::to_string(k) + "]"));
    return validated(where, [&] { return Povm(std::move(elements)); });
}

inline DensityOperator density_from_json(const Json &j, const std::string &where) {
    ComplexMatrix m = matrix_from_json(j, where);
    return validated(where, [&] { return DensityOperator(std::move(m)); });
}

inline Json bloch_to_json(const BlochVector &b) {
    return Json{{"m", {b.m[0], b.m[1], b.m[2]}}, {"mu", b.mu}};
}

inline BlochVector bloch_from_json(const Json &j, const std::string &where) {
    const auto m = as_number_list(require(j, "m", where), where + ".m");
    if (m.size() != 3) throw ConfigError(where + ".m: expected three components");
    return {{m[0], m[1], m[2]}, as_number(require(j, "mu", where), where + ".mu")};
}

inline Json channel_to_json(const QuantumChannel &c) {
    Json ops = Json::array();
    for (const auto &k : c.kraus_operators()) ops.push_back(matrix_to_json(k));
    return Json{{"type", "kraus"}, {"operators", ops}};
}

/// {"type": "identity" | "depolarizing" (p) | "amplitude-damping" (gamma) | "kraus" (operators)}
inline QuantumChannel channel_from_json(const Json &j, const std::string &where) {
    const std::string type = as_string(require(j, "type", where), where + ".type");
    if (type == "identity") return identity_channel(2);
    if (type == "depolarizing") {
        const double p = as_number(require(j, "p", where), where + ".p");
        return validated(where, [&] { return depolarizing_channel(p); });
    }
    if (type == "amplitude-damping") {
        const double g = as_number(require(j, "gamma", where), where + ".gamma");
        return validated(where, [&] { return amplitude_damping_channel(g); });
    }
    if (type == "kraus") {
        const Json &ops = require(j, "operators", where);
        if (!ops.is_array()) throw ConfigError(where + ".operators: expected an array of matrices");
        std::vector<ComplexMatrix> kraus;
        for (std::size_t k = 0; k < ops.size(); ++k) {
            kraus.push_back(matrix_from_json(ops[k], where + ".operators[" + std::to_string(k) + "]"));
        }
        return validated(where, [&] { return QuantumChannel(std::move(kraus)); });
    }
    throw ConfigError(where + ".type: unknown channel type '" + type + "'");
}

/// {"type": "ideal" | "sigma1-only" | "table" (states: six matrices) | "channel" (channel)}
inline PreparationModel preparation_from_json(const Json &j, const std::string &where) {
    const std::string type = as_string(require(j, "type", where), where + ".type");
    if (type == "ideal") return std::monostate{};
    if (type == "sigma1-only") return sigma1_only_preparation();
    if (type == "table") {
        const Json &states = require(j, "states", where);
        if (!states.is_array() || states.size() != kNumConditions) {
            throw ConfigError(where + ".states: expected six states ordered (1,+),(1,-),(2,+),(2,-),(3,+),(3,-)");
        }
        StateTable t;
        for (std::size_t k = 0; k < states.size(); ++k) {
            t.states.push_back(density_from_json(states[k], where + ".states[" + std::to_string(k) + "]"));
        }
        return t;
    }
    if (type == "channel") return channel_from_json(require(j, "channel", where), where + ".channel");
    throw ConfigError(where + ".type: unknown preparation type '" + type + "'");
}

// ---------------------------------------------------------------------------
// Strategies

inline Json alice_list_to_json(const AliceList &l) {
    return Json(l.values);
}

inline AliceList alice_list_from_json(const Json &j, const std::string &where) {
    AliceList l{as_int_list(j, where)};
    validated(where, [&] {
        l.validate();
        return 0;
    });
    return l;
}

inline Json strategy_to_json(const Strategy &s) {
    return std::visit(
        [](const auto &st) -> Json {
            using T = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<T, HonestStrategy>) {
                Json alice = Json::array();
                for (const auto &p : st.alice_povms) alice.push_back(povm_to_json(p));
                return Json{{"type", "honest"}, {"alice_povms", alice}, {"bob_joint_povm", povm_to_json(st.bob_joint_povm)}};
            } else if constexpr (std::is_same_v<T, NoStateCheat>) {
                return Json{{"type", "cheat-nostate"},
                            {"estimator", bloch_to_json(st.estimator)},
                            {"alice_list", alice_list_to_json(st.alice)}};
            } else if constexpr (std::is_same_v<T, LhsStrategy>) {
                Json states = Json::array(), responses = Json::array();
                for (const auto &rho : st.hidden_states) states.push_back(matrix_to_json(rho.matrix()));
                for (const auto &r : st.alice_responses) responses.push_back({r[0], r[1], r[2]});
                return Json{{"type", "lhs"},
                            {"weights", st.weights},
                            {"hidden_states", states},
                            {"alice_responses", responses},
                            {"bob_joint_povm", povm_to_json(st.bob_joint_povm)}};
            } else {
                Json table = Json::array();
                for (const auto &per_j : st.alice_table) {
                    Json tj = Json::array();
                    for (const auto &per_b : per_j) tj.push_back({per_b[0], per_b[1]});
                    table.push_back(tj);
                }
                return Json{{"type", "comm-cheat"},
                            {"direction", to_string(st.direction)},
                            {"alice_list", alice_list_to_json(st.alice)},
                            {"estimator", bloch_to_json(st.estimator)},
                            {"bob_rule", {st.bob_rule[0], st.bob_rule[1]}},
                            {"alice_table", table}};
            }
        },
        s);
}

inline Strategy strategy_from_json(const Json &j, const std::string &where = "strategy") {
    const std::string type = as_string(require(j, "type", where), where + ".type");
    if (type == "honest") {
        HonestStrategy st = HonestStrategy::canonical();
        if (j.contains("alice_povms")) {
            const Json &a = j.at("alice_povms");
            if (!a.is_array() || a.size() != 3) throw ConfigError(where + ".alice_povms: expected three POVMs");
            st.alice_povms.clear();
            for (std::size_t k = 0; k < 3; ++k) {
                st.alice_povms.push_back(povm_from_json(a[k], where + ".alice_povms[" + std::to_string(k) + "]"));
            }
        }
        if (j.contains("bob_joint_povm")) st.bob_joint_povm = povm_from_json(j.at("bob_joint_povm"), where + ".bob_joint_povm");
        validated(where, [&] {
            st.validate();
            return 0;
        });
        return st;
    }
    if (type == "cheat-nostate") {
        NoStateCheat st;
        if (j.contains("estimator")) st.estimator = bloch_from_json(j.at("estimator"), where + ".estimator");
        if (j.contains("alice_list")) st.alice = alice_list_from_json(j.at("alice_list"), where + ".alice_list");
        validated(where, [&] {
            st.validate();
            return 0;
        });
        return st;
    }
    if (type == "lhs") {
        const auto weights = as_number_list(require(j, "weights", where), where + ".weights");
        const Json &states = require(j, "hidden_states", where);
        const Json &responses = require(j, "alice_responses", where);
        if (!states.is_array() || !responses.is_array()) {
            throw ConfigError(where + ": hidden_states and alice_responses must be arrays");
        }
        std::vector<DensityOperator> rho;
        for (std::size_t k = 0; k < states.size(); ++k) {
            rho.push_back(density_from_json(states[k], where + ".hidden_states[" + std::to_string(k) + "]"));
        }
        std::vector<std::array<double, 3>> resp;
        for (std::size_t k = 0; k < responses.size(); ++k) {
            const auto r = as_number_list(responses[k], where + ".alice_responses[" + std::to_string(k) + "]");
            if (r.size() != 3) throw ConfigError(where + ".alice_responses: each entry needs three values");
            resp.push_back({r[0], r[1], r[2]});
        }
        Povm povm = j.contains("bob_joint_povm") ? povm_from_json(j.at("bob_joint_povm"), where + ".bob_joint_povm")
                                                 : partial_bell_povm();
        LhsStrategy st{weights, std::move(rho), std::move(resp), std::move(povm)};
        validated(where, [&] {
            st.validate();
            return 0;
        });
        return st;
    }
    if (type == "comm-cheat") {
        const std::string dir = as_string(require(j, "direction", where), where + ".direction");
        CommCheat st;
        st.direction = validated(where + ".direction", [&] { return communication_from_string(dir); });
        if (j.contains("alice_list")) st.alice = alice_list_from_json(j.at("alice_list"), where + ".alice_list");
        if (j.contains("estimator")) st.estimator = bloch_from_json(j.at("estimator"), where + ".estimator");
        if (j.contains("bob_rule")) {
            const auto r = as_int_list(j.at("bob_rule"), where + ".bob_rule");
            if (r.size() != 2) throw ConfigError(where + ".bob_rule: expected [b if e=+1, b if e=-1]");
            st.bob_rule = {r[0], r[1]};
        }
        if (j.contains("alice_table")) {
            const Json &t = j.at("alice_table");
            if (!t.is_array() || t.size() != 3) throw ConfigError(where + ".alice_table: expected a 3x2x2 array");
            for (std::size_t a = 0; a < 3; ++a) {
                if (!t[a].is_array() || t[a].size() != 2) throw ConfigError(where + ".alice_table: expected a 3x2x2 array");
                for (std::size_t b = 0; b < 2; ++b) {
                    const auto v = as_int_list(t[a][b], where + ".alice_table");
                    if (v.size() != 2) throw ConfigError(where + ".alice_table: expected a 3x2x2 array");
                    st.alice_table[a][b] = {v[0], v[1]};
                }
            }
        }
        validated(where, [&] {
            st.validate();
            return 0;
        });
        return st;
    }
    throw ConfigError(where + ".type: unknown strategy type '" + type + "'");
}

// ---------------------------------------------------------------------------
// Outputs

inline Json correlations_to_json(const CorrelationTable &t) {
    Json out = Json::array();
    for (std::size_t c = 0; c < kNumConditions; ++c) {
        out.push_back({{"j", condition_j(c)}, {"s", condition_s(c)}, {"ab", t.ab[c]}, {"b", t.b[c]}});
    }
    return out;
}

inline Json estimate_to_json(const PayoffEstimate &e) {
    Json tallies = Json::array();
    for (std::size_t c = 0; c < kNumConditions; ++c) {
        tallies.push_back({{"j", condition_j(c)},
                           {"s", condition_s(c)},
                           {"count", e.tallies[c].count},
                           {"ab", e.tallies[c].mean_ab()},
                           {"b", e.tallies[c].mean_b()}});
    }
    return Json{{"mean", e.mean}, {"std_error", e.std_error}, {"rounds", e.rounds}, {"tallies", tallies}};
}

inline Json lhs_report_to_json(const oracle::LhsSuiteReport &r) {
    Json out{{"passed", r.passed},
             {"trials", r.trials},
             {"max_payoff", number(r.max_payoff)},
             {"max_route_gap", r.max_route_gap}};
    if (r.failure) out["failure"] = *r.failure;
    if (!r.passed && r.worst) out["counterexample"] = strategy_to_json(*r.worst);
    return out;
}

}  // namespace qref::io
