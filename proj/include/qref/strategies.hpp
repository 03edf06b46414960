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

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "qref/games.hpp"

namespace qref {

inline constexpr Eigen::Index kSignalDim = 2;

/// {1 - |psi-><psi-|, |psi-><psi-|}: outcome b = 1 projects B (x) C onto the singlet.
inline Povm partial_bell_povm() {
    const ComplexMatrix p = singlet_projector();
    return Povm({identity(4) - p, p});
}

/// The measurement on H_B induced by a joint POVM on H_B (x) H_C when the
/// referee's system C is in state omega: M_b = Tr_C[E_b (1_B (x) omega)].
inline Povm programmed_povm(const Povm &e_bc, const DensityOperator &omega) {
    const Eigen::Index dc = omega.dim();
    if (e_bc.dim() % dc != 0) {
        throw std::invalid_argument("programmed_povm: joint POVM dimension is not a multiple of the signal dimension");
    }
    const Eigen::Index db = e_bc.dim() / dc;
    const ComplexMatrix lifted = tensor(identity(db), omega.matrix());
    const std::array<std::size_t, 2> dims{static_cast<std::size_t>(db), static_cast<std::size_t>(dc)};
    std::vector<ComplexMatrix> out;
    out.reserve(e_bc.size());
    for (const auto &e : e_bc.elements()) {
        out.push_back(partial_trace(e * lifted, dims, 1));
    }
    return Povm(std::move(out));
}

/// Binary estimate of s: {mu (1 + m . sigma), 1 - mu (1 + m . sigma)}; element 0 means "s = +1".
inline Povm estimator_povm(const BlochVector &estimator) {
    if (!(estimator.mu > 0.0)) {
        throw std::invalid_argument("estimator: mu must be positive");
    }
    const ComplexMatrix plus = bloch_operator(estimator);
    try {
        return Povm({plus, identity(2) - plus});
    } catch (const std::invalid_argument &) {
        throw std::invalid_argument("estimator: mu (1 + m.sigma) and its complement must both be positive");
    }
}

inline bool is_admissible_estimator(const BlochVector &estimator, double tol = kValidationTol) {
    return estimator.mu > 0.0 && estimator.norm() <= 1.0 + tol && estimator.mu * (1.0 + estimator.norm()) <= 1.0 + tol;
}

/// Alice measures a binary POVM per classical input j on her share of a
/// state; Bob measures a binary joint POVM on his share and the referee's qubit.
struct HonestStrategy {
    std::vector<Povm> alice_povms;  // index j - 1; element 0 is a = +1
    Povm bob_joint_povm;            // element 1 is b = 1

    /// Alice measures sigma_j, Bob makes the partial Bell-state measurement.
    static HonestStrategy canonical() {
        std::vector<Povm> alice;
        for (int j = 1; j <= 3; ++j) {
            alice.push_back(sign_measurement(pauli(j)));
        }
        return {std::move(alice), partial_bell_povm()};
    }

    Eigen::Index alice_dim() const { return alice_povms.front().dim(); }
    Eigen::Index bob_dim() const { return bob_joint_povm.dim() / kSignalDim; }

    void validate() const {
        if (alice_povms.size() != 3) {
            throw std::invalid_argument("HonestStrategy: need one Alice POVM per input j = 1, 2, 3");
        }
        for (const auto &p : alice_povms) {
            if (p.size() != 2 || p.dim() != alice_dim()) {
                throw std::invalid_argument("HonestStrategy: Alice POVMs must be binary and share one dimension");
            }
        }
        if (bob_joint_povm.size() != 2 || bob_joint_povm.dim() % kSignalDim != 0) {
            throw std::invalid_argument("HonestStrategy: Bob's joint POVM must be binary on H_B (x) qubit");
        }
    }
};

/// A rule for Alice's +-1 output that uses no quantum resource: the constant
/// +1 (empty list) or a pre-agreed list cycled by round index.
struct AliceList {
    std::vector<int> values;

    int output(std::uint64_t round) const {
        return values.empty() ? 1 : values[static_cast<std::size_t>(round % values.size())];
    }
    /// Fraction of rounds in which Alice outputs +1.
    double plus_fraction() const {
        if (values.empty()) return 1.0;
        std::size_t plus = 0;
        for (int v : values) plus += v == 1 ? 1 : 0;
        return static_cast<double>(plus) / static_cast<double>(values.size());
    }
    void validate() const {
        for (int v : values) {
            if (v != 1 && v != -1) throw std::invalid_argument("AliceList: entries must be +-1");
        }
    }
};

/// No shared state: Bob estimates s with a binary POVM and answers b = 1 iff
/// his estimate equals Alice's pre-agreed output.
struct NoStateCheat {
    BlochVector estimator{{1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)}, 0.5};
    AliceList alice;

    void validate() const {
        estimator_povm(estimator);
        alice.validate();
    }
};

/// Bob holds one of finitely many hidden states rho_lambda; Alice's output
/// for input j is a +-1 variable with mean alice_responses[lambda][j-1].
struct LhsStrategy {
    std::vector<double> weights;
    std::vector<DensityOperator> hidden_states;
    std::vector<std::array<double, 3>> alice_responses;
    Povm bob_joint_povm;

    Eigen::Index bob_dim() const { return bob_joint_povm.dim() / kSignalDim; }

    void validate() const {
        const std::size_t n = weights.size();
        if (n == 0 || hidden_states.size() != n || alice_responses.size() != n) {
            throw std::invalid_argument("LhsStrategy: weights, hidden states and responses must have equal nonzero length");
        }
        double total = 0.0;
        for (double w : weights) {
            if (!(w >= 0.0)) throw std::invalid_argument("LhsStrategy: weights must be non-negative");
            total += w;
        }
        if (std::abs(total - 1.0) > kValidationTol) {
            throw std::invalid_argument("LhsStrategy: weights must sum to 1");
        }
        if (bob_joint_povm.size() != 2 || bob_joint_povm.dim() % kSignalDim != 0) {
            throw std::invalid_argument("LhsStrategy: Bob's joint POVM must be binary on H_B (x) qubit");
        }
        for (std::size_t k = 0; k < n; ++k) {
            if (hidden_states[k].dim() != bob_dim()) {
                throw std::invalid_argument("LhsStrategy: hidden state dimension does not match Bob's POVM");
            }
            for (double a : alice_responses[k]) {
                if (!(std::abs(a) <= 1.0 + kValidationTol)) {
                    throw std::invalid_argument("LhsStrategy: Alice responses must lie in [-1, 1]");
                }
            }
        }
    }
};

enum class Communication { none, alice_to_bob, bob_to_alice };

inline std::string to_string(Communication c) {
    switch (c) {
    case Communication::none:
        return "none";
    case Communication::alice_to_bob:
        return "alice-to-bob";
    case Communication::bob_to_alice:
        return "bob-to-alice";
    }
    return "none";
}

inline Communication communication_from_string(const std::string &s) {
    if (s == "none") return Communication::none;
    if (s == "alice-to-bob") return Communication::alice_to_bob;
    if (s == "bob-to-alice") return Communication::bob_to_alice;
    throw std::invalid_argument("unknown communication setting '" + s + "'");
}

/// Cheats that use one-way classical communication and no shared state.
///
/// alice_to_bob: Alice outputs from `alice` and sends (j, a); Bob measures
/// sigma_j on the signal and answers b = 1 iff the outcome equals a.
///
/// bob_to_alice: Bob measures `estimator` to get e = +-1, answers
/// b = bob_rule[e], and sends (b, e); Alice answers alice_table[j-1][b][e].
/// Index 0 of an estimate means e = +1.
struct CommCheat {
    using AliceTable = std::array<std::array<std::array<int, 2>, 2>, 3>;

    Communication direction = Communication::alice_to_bob;
    AliceList alice;
    BlochVector estimator{{1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)}, 0.5};
    std::array<int, 2> bob_rule{1, 1};
    AliceTable alice_table = echo_estimate_table();

    /// a = e regardless of j and b.
    static AliceTable echo_estimate_table() {
        AliceTable t{};
        for (auto &per_j : t) {
            for (auto &per_b : per_j) {
                per_b = {1, -1};
            }
        }
        return t;
    }

    static CommCheat alice_to_bob(AliceList alice = {}) {
        CommCheat c;
        c.direction = Communication::alice_to_bob;
        c.alice = std::move(alice);
        return c;
    }

    static CommCheat bob_to_alice(BlochVector estimator, std::array<int, 2> bob_rule = {1, 1},
                                  AliceTable table = echo_estimate_table()) {
        CommCheat c;
        c.direction = Communication::bob_to_alice;
        c.estimator = estimator;
        c.bob_rule = bob_rule;
        c.alice_table = table;
        return c;
    }

    void validate() const {
        switch (direction) {
        case Communication::alice_to_bob:
            alice.validate();
            break;
        case Communication::bob_to_alice:
            estimator_povm(estimator);
            for (int b : bob_rule) {
                if (b != 0 && b != 1) throw std::invalid_argument("CommCheat: bob_rule entries must be 0 or 1");
            }
            for (const auto &per_j : alice_table) {
                for (const auto &per_b : per_j) {
                    for (int a : per_b) {
                        if (a != 1 && a != -1) throw std::invalid_argument("CommCheat: alice_table entries must be +-1");
                    }
                }
            }
            break;
        case Communication::none:
            throw std::invalid_argument("CommCheat: direction must be alice-to-bob or bob-to-alice");
        }
    }
};

using Strategy = std::variant<HonestStrategy, NoStateCheat, LhsStrategy, CommCheat>;

inline void validate_strategy(const Strategy &s) {
    std::visit([](const auto &x) { x.validate(); }, s);
}

inline std::string strategy_kind(const Strategy &s) {
    switch (s.index()) {
    case 0:
        return "honest";
    case 1:
        return "cheat-nostate";
    case 2:
        return "lhs";
    default:
        return "comm-cheat";
    }
}

/// The communication a strategy needs from the referee's rules.
inline Communication required_communication(const Strategy &s) {
    if (const auto *c = std::get_if<CommCheat>(&s)) return c->direction;
    return Communication::none;
}

/// p(a, b | j, delivered signal), indexed [alice_index(a)][b].
using OutcomeTable = std::array<std::array<double, 2>, 2>;

namespace detail {

inline OutcomeTable outcome_table(const HonestStrategy &st, const std::optional<DensityOperator> &shared, int j,
                                  const DensityOperator &delivered) {
    if (!shared) {
        throw std::invalid_argument("honest strategy requires a shared state");
    }
    if (shared->dim() != st.alice_dim() * st.bob_dim() || delivered.dim() != kSignalDim) {
        throw std::invalid_argument("honest strategy: shared state dimension does not match the POVMs");
    }
    const ComplexMatrix joint = tensor(shared->matrix(), delivered.matrix());
    const Povm &alice = st.alice_povms.at(static_cast<std::size_t>(j - 1));
    OutcomeTable t{};
    for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t b = 0; b < 2; ++b) {
            t[a][b] = trace_product(tensor(alice[a], st.bob_joint_povm[b]), joint).real();
        }
    }
    return t;
}

inline std::array<double, 2> estimate_probabilities(const BlochVector &estimator, const DensityOperator &delivered) {
    const Povm m = estimator_povm(estimator);
    return {delivered.expectation(m[0]), delivered.expectation(m[1])};
}

inline OutcomeTable outcome_table(const NoStateCheat &st, const std::optional<DensityOperator> &, int,
                                  const DensityOperator &delivered) {
    const auto pe = estimate_probabilities(st.estimator, delivered);
    const double f = st.alice.plus_fraction();
    OutcomeTable t{};
    // a = +1: b = 1 iff e = +1. a = -1: b = 1 iff e = -1.
    t[0][1] = f * pe[0];
    t[0][0] = f * pe[1];
    t[1][1] = (1.0 - f) * pe[1];
    t[1][0] = (1.0 - f) * pe[0];
    return t;
}

inline OutcomeTable outcome_table(const LhsStrategy &st, const std::optional<DensityOperator> &, int j,
                                  const DensityOperator &delivered) {
    OutcomeTable t{};
    for (std::size_t k = 0; k < st.weights.size(); ++k) {
        const ComplexMatrix joint = tensor(st.hidden_states[k].matrix(), delivered.matrix());
        const double pb1 = trace_product(st.bob_joint_povm[1], joint).real();
        const double pb0 = trace_product(st.bob_joint_povm[0], joint).real();
        const double mean_a = st.alice_responses[k][static_cast<std::size_t>(j - 1)];
        const double pa[2] = {0.5 * (1.0 + mean_a), 0.5 * (1.0 - mean_a)};
        for (std::size_t a = 0; a < 2; ++a) {
            t[a][0] += st.weights[k] * pa[a] * pb0;
            t[a][1] += st.weights[k] * pa[a] * pb1;
        }
    }
    return t;
}

inline OutcomeTable outcome_table(const CommCheat &st, const std::optional<DensityOperator> &, int j,
                                  const DensityOperator &delivered) {
    OutcomeTable t{};
    if (st.direction == Communication::alice_to_bob) {
        const Povm sigma_j = sign_measurement(pauli(j));
        const double pe[2] = {delivered.expectation(sigma_j[0]), delivered.expectation(sigma_j[1])};
        const double f = st.alice.plus_fraction();
        t[0][1] = f * pe[0];
        t[0][0] = f * pe[1];
        t[1][1] = (1.0 - f) * pe[1];
        t[1][0] = (1.0 - f) * pe[0];
        return t;
    }
    const auto pe = estimate_probabilities(st.estimator, delivered);
    for (std::size_t e = 0; e < 2; ++e) {
        const int b = st.bob_rule[e];
        const int a = st.alice_table.at(static_cast<std::size_t>(j - 1))[static_cast<std::size_t>(b)][e];
        t[alice_index(a)][static_cast<std::size_t>(b)] += pe[e];
    }
    return t;
}

}  // namespace detail

/// Exact p(a, b | j, delivered) for any strategy. The signal label s is not
/// an argument: strategies only see j (Alice) and the delivered state (Bob).
inline OutcomeTable joint_distribution(const Strategy &strategy, const std::optional<DensityOperator> &shared,
                                       int j, const DensityOperator &delivered) {
    if (j < 1 || j > 3) throw std::invalid_argument("joint_distribution: j must be 1, 2 or 3");
    return std::visit([&](const auto &st) { return detail::outcome_table(st, shared, j, delivered); }, strategy);
}

/// <ab>_{j,s} and <b>_{j,s} for every condition; the channel, if any, acts on
/// each prepared signal before Bob receives it.
inline CorrelationTable correlation_table(const SteeringGameSpec &spec, const Strategy &strategy,
                                          const std::optional<DensityOperator> &shared,
                                          const std::optional<QuantumChannel> &channel = std::nullopt) {
    validate_strategy(strategy);
    CorrelationTable table;
    for (std::size_t c = 0; c < kNumConditions; ++c) {
        const DensityOperator delivered = channel ? apply_channel(*channel, spec.signal(c)) : spec.signal(c);
        const OutcomeTable t = joint_distribution(strategy, shared, condition_j(c), delivered);
        double total = 0.0;
        for (const auto &row : t) {
            for (double p : row) {
                if (p < -kValidationTol || p > 1.0 + kValidationTol) {
                    throw std::runtime_error("joint_distribution: probability outside [0, 1]");
                }
                total += p;
            }
        }
        if (std::abs(total - 1.0) > kValidationTol) {
            throw std::runtime_error("joint_distribution: probabilities do not sum to 1");
        }
        table.ab[c] = t[0][1] - t[1][1];
        table.b[c] = t[0][1] + t[1][1];
    }
    return table;
}

/// Exact average payoff 2 sum_{j,s} (s <ab>_{j,s} - (r/sqrt 3) <b>_{j,s}),
/// from p(a,b|j,s) = Tr[(A^j_a (x) E_b)(rho_AB (x) omega_js)] or the
/// strategy's classical rule.
inline double qrs_payoff_exact(const SteeringGameSpec &spec, const Strategy &strategy,
                               const std::optional<DensityOperator> &shared,
                               const std::optional<QuantumChannel> &channel = std::nullopt) {
    return payoff_from_correlations(spec, correlation_table(spec, strategy, shared, channel));
}

struct DiscriminationStats {
    double true_positive = 0.0;   // average over j of p(+ | s = +1, j)
    double false_positive = 0.0;  // average over j of p(+ | s = -1, j)
    double ratio = 0.0;           // +inf when false_positive == 0
};

inline DiscriminationStats discrimination_stats(const BlochVector &estimator, const SteeringGameSpec &spec) {
    const Povm m = estimator_povm(estimator);
    DiscriminationStats out;
    for (int j = 1; j <= 3; ++j) {
        out.true_positive += spec.signal(j, 1).expectation(m[0]) / 3.0;
        out.false_positive += spec.signal(j, -1).expectation(m[0]) / 3.0;
    }
    out.ratio = out.false_positive > 0.0 ? out.true_positive / out.false_positive
                                         : std::numeric_limits<double>::infinity();
    return out;
}

/// Exact payoff of the no-state cheat from its average true/false positive
/// rates: 6[(1 - c) p(+|+) - (1 + c) p(+|-)] with c the <b> penalty, and the
/// mirror expression for rounds in which Alice's list says -1.
inline double cheat_payoff_no_state(const NoStateCheat &cheat, const SteeringGameSpec &spec) {
    cheat.validate();
    const DiscriminationStats d = discrimination_stats(cheat.estimator, spec);
    const double c = spec.penalty();
    const double plus = 6.0 * ((1.0 - c) * d.true_positive - (1.0 + c) * d.false_positive);
    const double true_negative = 1.0 - d.false_positive;
    const double false_negative = 1.0 - d.true_positive;
    const double minus = 6.0 * ((1.0 - c) * true_negative - (1.0 + c) * false_negative);
    const double f = cheat.alice.plus_fraction();
    return f * plus + (1.0 - f) * minus;
}

/// Exact payoff of a communication cheat, summed condition by condition from
/// Bob's estimate statistics.
inline double comm_cheat_payoff(const CommCheat &cheat, const SteeringGameSpec &spec) {
    cheat.validate();
    const double c = spec.penalty();
    double total = 0.0;
    if (cheat.direction == Communication::alice_to_bob) {
        const double f = cheat.alice.plus_fraction();
        for (int j = 1; j <= 3; ++j) {
            const ComplexMatrix proj_plus = 0.5 * (identity(2) + pauli(j));
            for (int s : {1, -1}) {
                const double p_plus = spec.signal(j, s).expectation(proj_plus);
                // Bob answers b = 1 iff his sigma_j outcome equals Alice's a.
                total += f * p_plus * (s - c) + (1.0 - f) * (1.0 - p_plus) * (-s - c);
            }
        }
        return 2.0 * total;
    }
    const Povm m = estimator_povm(cheat.estimator);
    for (int j = 1; j <= 3; ++j) {
        for (int s : {1, -1}) {
            for (std::size_t e = 0; e < 2; ++e) {
                const int b = cheat.bob_rule[e];
                if (b == 0) continue;
                const int a = cheat.alice_table[static_cast<std::size_t>(j - 1)][1][e];
                total += spec.signal(j, s).expectation(m[e]) * (s * a - c);
            }
        }
    }
    return 2.0 * total;
}

/// q(lambda), tau_lambda and N built from X_lambda = Tr_B[E_1 (rho_lambda (x) 1_C)].
struct LhsReduction {
    double n = 0.0;
    std::vector<double> q;
    std::vector<DensityOperator> tau;
    std::vector<std::size_t> source;  // index into the strategy's lambda list
};

inline LhsReduction lhs_reduction(const LhsStrategy &strategy) {
    strategy.validate();
    const Eigen::Index db = strategy.bob_dim();
    const std::array<std::size_t, 2> dims{static_cast<std::size_t>(db), static_cast<std::size_t>(kSignalDim)};
    const ComplexMatrix id_c = identity(kSignalDim);

    std::vector<ComplexMatrix> x;
    std::vector<double> tr;
    LhsReduction out;
    for (std::size_t k = 0; k < strategy.weights.size(); ++k) {
        ComplexMatrix xk = partial_trace(strategy.bob_joint_povm[1] * tensor(strategy.hidden_states[k].matrix(), id_c),
                                         dims, 0);
        xk = 0.5 * (xk + xk.adjoint());
        const double t = xk.trace().real();
        out.n += strategy.weights[k] * t;
        x.push_back(std::move(xk));
        tr.push_back(t);
    }
    for (std::size_t k = 0; k < x.size(); ++k) {
        // Terms with Tr[X] ~ 0 carry no weight; dropping them avoids 0/0.
        if (tr[k] <= 1e-13 || strategy.weights[k] <= 0.0) continue;
        out.q.push_back(strategy.weights[k] * tr[k] / out.n);
        out.tau.emplace_back(x[k] / tr[k]);
        out.source.push_back(k);
    }
    return out;
}

struct LhsPayoffRoutes {
    double direct = 0.0;   // from p(a,b|j,s) summed over lambda
    double reduced = 0.0;  // 2N sum_lambda q [sum_j <a_j> Tr(D_j tau) - c Tr(U_j tau)]
};

/// Both evaluations of an LHS strategy's payoff. D_j = sum_s s omega_js and
/// U_j = sum_s omega_js are taken from the spec's ensemble; for the ideal
/// ensemble they are sigma_j and 1, giving 2N[sum_j <a_j sigma_j>_LHS - r sqrt 3].
inline LhsPayoffRoutes lhs_payoff_routes(const LhsStrategy &strategy, const SteeringGameSpec &spec) {
    LhsPayoffRoutes out;
    out.direct = qrs_payoff_exact(spec, Strategy{strategy}, std::nullopt);

    const LhsReduction red = lhs_reduction(strategy);
    std::array<ComplexMatrix, 3> signed_sum, unsigned_sum;
    for (int j = 1; j <= 3; ++j) {
        const auto &plus = spec.signal(j, 1).matrix();
        const auto &minus = spec.signal(j, -1).matrix();
        signed_sum[static_cast<std::size_t>(j - 1)] = plus - minus;
        unsigned_sum[static_cast<std::size_t>(j - 1)] = plus + minus;
    }
    double inner = 0.0;
    for (std::size_t i = 0; i < red.q.size(); ++i) {
        const auto &resp = strategy.alice_responses[red.source[i]];
        double per_lambda = 0.0;
        for (std::size_t j = 0; j < 3; ++j) {
            per_lambda += resp[j] * red.tau[i].expectation(signed_sum[j]) -
                          spec.penalty() * red.tau[i].expectation(unsigned_sum[j]);
        }
        inner += red.q[i] * per_lambda;
    }
    out.reduced = 2.0 * red.n * inner;
    return out;
}

/// Payoff of an LHS strategy; the two routes must agree or this throws.
inline double lhs_payoff_exact(const LhsStrategy &strategy, const SteeringGameSpec &spec, double tol = kValidationTol) {
    const LhsPayoffRoutes r = lhs_payoff_routes(strategy, spec);
    if (std::abs(r.direct - r.reduced) > tol) {
        throw std::logic_error("lhs_payoff_exact: direct (" + std::to_string(r.direct) + ") and reduced (" +
                               std::to_string(r.reduced) + ") evaluations disagree");
    }
    return r.direct;
}

}  // namespace qref
