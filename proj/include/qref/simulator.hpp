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

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "qref/rng.hpp"
#include "qref/strategies.hpp"

namespace qref {

// ---------------------------------------------------------------------------
// Referee preparation

/// Explicit table of prepared states, indexed by condition_index(j, s).
struct StateTable {
    std::vector<DensityOperator> states;
};

/// Ideal (monostate), an explicit table, or the intended states sent through a channel.
using PreparationModel = std::variant<std::monostate, StateTable, QuantumChannel>;

inline DensityOperator referee_prepare(int j, int s, const PreparationModel &model = {}) {
    require_signal_label(j, s);
    if (const auto *table = std::get_if<StateTable>(&model)) {
        if (table->states.size() != kNumConditions) {
            throw std::invalid_argument("referee_prepare: state table must hold six states");
        }
        const DensityOperator &rho = table->states[condition_index(j, s)];
        if (rho.dim() != 2) {
            throw std::invalid_argument("referee_prepare: table states must be qubit states");
        }
        return rho;
    }
    if (const auto *channel = std::get_if<QuantumChannel>(&model)) {
        return apply_channel(*channel, signal_state(j, s));
    }
    return signal_state(j, s);
}

/// Every prepared state is an eigenstate of sigma_1 with eigenvalue s, whatever j is.
inline StateTable sigma1_only_preparation() {
    StateTable t;
    for (std::size_t c = 0; c < kNumConditions; ++c) {
        t.states.push_back(signal_state(1, condition_s(c)));
    }
    return t;
}

inline SteeringGameSpec with_preparation(const SteeringGameSpec &spec, const PreparationModel &model) {
    std::vector<DensityOperator> ensemble;
    for (std::size_t c = 0; c < kNumConditions; ++c) {
        ensemble.push_back(referee_prepare(condition_j(c), condition_s(c), model));
    }
    return spec.with_ensemble(std::move(ensemble));
}

// ---------------------------------------------------------------------------
// Round sampling

/**
 * Born-rule sampler for one strategy over a fixed list of delivered signal
 * states. Each party is sampled by its own stage and sees only what it is
 * entitled to: Alice gets j (plus any message from Bob), Bob gets the
 * delivered state (plus any message from Alice). The label s is never passed
 * to either stage.
 */
class RoundSampler {
  public:
    RoundSampler(Strategy strategy, std::optional<DensityOperator> shared, std::vector<DensityOperator> delivered)
        : strategy_(std::move(strategy)), shared_(std::move(shared)), delivered_(std::move(delivered)) {
        validate_strategy(strategy_);
        for (const auto &rho : delivered_) {
            if (rho.dim() != kSignalDim) throw std::invalid_argument("RoundSampler: delivered signals must be qubits");
        }
        std::visit([this](const auto &st) { prepare(st); }, strategy_);
    }

    /// Returns (a, b) for one round.
    std::pair<int, int> sample(int j, std::size_t delivered_index, std::uint64_t round, Rng &rng) const {
        if (j < 1 || j > 3) throw std::invalid_argument("RoundSampler: j must be 1, 2 or 3");
        if (delivered_index >= delivered_.size()) throw std::out_of_range("RoundSampler: delivered index");
        return std::visit([&](const auto &st) { return play(st, j, delivered_index, round, rng); }, strategy_);
    }

  private:
    struct AliceMessage {
        int j;
        int a;
    };
    struct BobMessage {
        int b;
        int estimate;
    };

    static int draw_sign(Rng &rng, double p_plus) { return rng.uniform() < p_plus ? 1 : -1; }
    static int draw_bit(Rng &rng, double p_one) { return rng.uniform() < p_one ? 1 : 0; }

    static void check_probability(double p) {
        if (p < -kValidationTol || p > 1.0 + kValidationTol) {
            throw std::runtime_error("RoundSampler: probability " + std::to_string(p) + " outside [0, 1]");
        }
    }

    // Honest: Alice measures first; Bob measures the programmed POVM on the
    // post-measurement state of his share.
    void prepare(const HonestStrategy &st) {
        if (!shared_) throw std::invalid_argument("honest strategy requires a shared state");
        const Eigen::Index da = st.alice_dim(), db = st.bob_dim();
        if (shared_->dim() != da * db) {
            throw std::invalid_argument("honest strategy: shared state dimension does not match the POVMs");
        }
        const std::array<std::size_t, 2> dims{static_cast<std::size_t>(da), static_cast<std::size_t>(db)};
        for (std::size_t j = 0; j < 3; ++j) {
            for (std::size_t a = 0; a < 2; ++a) {
                const ComplexMatrix unnormalized =
                    partial_trace(tensor(st.alice_povms[j][a], identity(db)) * shared_->matrix(), dims, 0);
                const double p = unnormalized.trace().real();
                check_probability(p);
                alice_marginal_[j][a] = p;
                bob_conditional_[j][a] = p > 0.0 ? ComplexMatrix(unnormalized / p) : ComplexMatrix(identity(db) / double(db));
            }
        }
        for (const auto &rho : delivered_) {
            bob_programmed_.push_back(programmed_povm(st.bob_joint_povm, rho)[1]);
        }
    }

    std::pair<int, int> play(const HonestStrategy &, int j, std::size_t d, std::uint64_t, Rng &rng) const {
        const auto jj = static_cast<std::size_t>(j - 1);
        const int a = draw_sign(rng, alice_marginal_[jj][0]);
        const ComplexMatrix &bob_share = bob_conditional_[jj][alice_index(a)];
        const double p1 = trace_product(bob_programmed_[d], bob_share).real();
        check_probability(p1);
        return {a, draw_bit(rng, p1)};
    }

    void prepare(const NoStateCheat &st) {
        for (const auto &rho : delivered_) {
            estimate_plus_.push_back(detail::estimate_probabilities(st.estimator, rho)[0]);
        }
    }

    std::pair<int, int> play(const NoStateCheat &st, int, std::size_t d, std::uint64_t round, Rng &rng) const {
        const int a = st.alice.output(round);
        // Bob: estimate s, answer 1 iff it matches the pre-agreed list entry.
        const int estimate = draw_sign(rng, estimate_plus_[d]);
        return {a, estimate == st.alice.output(round) ? 1 : 0};
    }

    void prepare(const LhsStrategy &st) {
        lhs_b1_.assign(st.weights.size(), std::vector<double>(delivered_.size()));
        for (std::size_t k = 0; k < st.weights.size(); ++k) {
            for (std::size_t d = 0; d < delivered_.size(); ++d) {
                const ComplexMatrix joint = tensor(st.hidden_states[k].matrix(), delivered_[d].matrix());
                lhs_b1_[k][d] = trace_product(st.bob_joint_povm[1], joint).real();
                check_probability(lhs_b1_[k][d]);
            }
        }
    }

    std::pair<int, int> play(const LhsStrategy &st, int j, std::size_t d, std::uint64_t, Rng &rng) const {
        const std::size_t lambda = rng.categorical(st.weights);
        const double mean_a = st.alice_responses[lambda][static_cast<std::size_t>(j - 1)];
        const int a = draw_sign(rng, 0.5 * (1.0 + mean_a));
        return {a, draw_bit(rng, lhs_b1_[lambda][d])};
    }

    void prepare(const CommCheat &st) {
        for (const auto &rho : delivered_) {
            if (st.direction == Communication::alice_to_bob) {
                std::array<double, 3> per_axis{};
                for (int axis = 1; axis <= 3; ++axis) {
                    per_axis[static_cast<std::size_t>(axis - 1)] = rho.expectation(0.5 * (identity(2) + pauli(axis)));
                }
                sigma_plus_.push_back(per_axis);
            } else {
                estimate_plus_.push_back(detail::estimate_probabilities(st.estimator, rho)[0]);
            }
        }
    }

    std::pair<int, int> play(const CommCheat &st, int j, std::size_t d, std::uint64_t round, Rng &rng) const {
        if (st.direction == Communication::alice_to_bob) {
            const AliceMessage msg{j, st.alice.output(round)};
            return {msg.a, bob_after_alice(st, msg, d, rng)};
        }
        const BobMessage msg = bob_before_alice(st, d, rng);
        return {alice_after_bob(st, j, msg), msg.b};
    }

    int bob_after_alice(const CommCheat &, const AliceMessage &msg, std::size_t d, Rng &rng) const {
        const int outcome = draw_sign(rng, sigma_plus_[d][static_cast<std::size_t>(msg.j - 1)]);
        return outcome == msg.a ? 1 : 0;
    }

    BobMessage bob_before_alice(const CommCheat &st, std::size_t d, Rng &rng) const {
        const int estimate = draw_sign(rng, estimate_plus_[d]);
        return {st.bob_rule[alice_index(estimate)], estimate};
    }

    static int alice_after_bob(const CommCheat &st, int j, const BobMessage &msg) {
        return st.alice_table[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(msg.b)]
                             [alice_index(msg.estimate)];
    }

    Strategy strategy_;
    std::optional<DensityOperator> shared_;
    std::vector<DensityOperator> delivered_;

    std::array<std::array<double, 2>, 3> alice_marginal_{};
    std::array<std::array<ComplexMatrix, 2>, 3> bob_conditional_;
    std::vector<ComplexMatrix> bob_programmed_;
    std::vector<double> estimate_plus_;
    std::vector<std::array<double, 3>> sigma_plus_;
    std::vector<std::vector<double>> lhs_b1_;
};

/// Samples (a, b) for a single round given the delivered signal.
inline std::pair<int, int> sample_outcome(const Strategy &strategy, const std::optional<DensityOperator> &shared,
                                          int j, const DensityOperator &delivered, std::uint64_t round, Rng &rng) {
    return RoundSampler(strategy, shared, {delivered}).sample(j, 0, round, rng);
}

// ---------------------------------------------------------------------------
// Game runs

struct RunConfig {
    std::uint64_t rounds = 1;
    std::uint64_t seed = 0;
    SteeringGameSpec spec;
    Strategy strategy = HonestStrategy::canonical();
    std::optional<DensityOperator> shared_state;
    std::optional<QuantumChannel> channel;
    Communication communication = Communication::none;
    unsigned threads = 1;
    bool keep_transcript = true;
};

struct RoundRecord {
    std::uint64_t round = 0;
    int j = 1;
    int s = 1;
    int a = 1;
    int b = 0;
    double payoff = 0.0;
};

struct ConditionTally {
    std::uint64_t count = 0;
    double sum_ab = 0.0;
    double sum_b = 0.0;

    double mean_ab() const { return count ? sum_ab / static_cast<double>(count) : 0.0; }
    double mean_b() const { return count ? sum_b / static_cast<double>(count) : 0.0; }
};

struct PayoffEstimate {
    double mean = 0.0;
    double std_error = 0.0;  // sample std deviation / sqrt(rounds); 0 for a single round
    std::uint64_t rounds = 0;
    std::array<ConditionTally, kNumConditions> tallies{};

    CorrelationTable correlations() const {
        CorrelationTable t;
        for (std::size_t c = 0; c < kNumConditions; ++c) {
            t.ab[c] = tallies[c].mean_ab();
            t.b[c] = tallies[c].mean_b();
        }
        return t;
    }
};

struct RunResult {
    PayoffEstimate estimate;
    std::vector<RoundRecord> transcript;
};

inline void validate_run_config(const RunConfig &config) {
    if (config.rounds < 1) throw std::invalid_argument("RunConfig: rounds must be >= 1");
    validate_strategy(config.strategy);
    const Communication needed = required_communication(config.strategy);
    if (config.communication != needed) {
        if (needed == Communication::none) {
            throw std::invalid_argument("RunConfig: communication " + to_string(config.communication) +
                                        " is configured but strategy '" + strategy_kind(config.strategy) +
                                        "' does not use it");
        }
        throw std::invalid_argument("RunConfig: strategy needs communication " + to_string(needed) +
                                    " but the game allows " + to_string(config.communication));
    }
    if (config.channel && (config.channel->input_dim() != 2 || config.channel->output_dim() != 2)) {
        throw std::invalid_argument("RunConfig: channel must map qubits to qubits");
    }
    if (std::holds_alternative<HonestStrategy>(config.strategy) && !config.shared_state) {
        throw std::invalid_argument("RunConfig: honest strategy requires a shared state");
    }
}

/// The states Bob actually receives, indexed by condition.
inline std::vector<DensityOperator> delivered_signals(const SteeringGameSpec &spec,
                                                      const std::optional<QuantumChannel> &channel) {
    std::vector<DensityOperator> out;
    for (std::size_t c = 0; c < kNumConditions; ++c) {
        out.push_back(channel ? apply_channel(*channel, spec.signal(c)) : spec.signal(c));
    }
    return out;
}

inline double exact_payoff(const RunConfig &config) {
    validate_run_config(config);
    return qrs_payoff_exact(config.spec, config.strategy, config.shared_state, config.channel);
}

namespace detail {

inline constexpr std::uint64_t kChunkRounds = 1u << 15;

struct ChunkSums {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::array<ConditionTally, kNumConditions> tallies{};
};

}  // namespace detail

/**
 * Plays `config.rounds` independent rounds. Round n draws everything from
 * Rng::stream(seed, n); rounds are grouped into fixed-size chunks whose sums
 * are merged in chunk order, so results are identical for any thread count.
 */
inline RunResult run_game(const RunConfig &config) {
    validate_run_config(config);
    const RoundSampler sampler(config.strategy, config.shared_state, delivered_signals(config.spec, config.channel));
    const auto &dist = config.spec.input_distribution();

    RunResult result;
    if (config.keep_transcript) result.transcript.resize(config.rounds);

    const std::uint64_t n_chunks = (config.rounds + detail::kChunkRounds - 1) / detail::kChunkRounds;
    std::vector<detail::ChunkSums> chunks(n_chunks);

    auto run_chunk = [&](std::uint64_t chunk) {
        detail::ChunkSums sums;
        const std::uint64_t begin = chunk * detail::kChunkRounds;
        const std::uint64_t end = std::min(config.rounds, begin + detail::kChunkRounds);
        for (std::uint64_t n = begin; n < end; ++n) {
            Rng rng = Rng::stream(config.seed, n);
            const std::size_t c = rng.categorical(dist);
            const int j = condition_j(c), s = condition_s(c);
            const auto [a, b] = sampler.sample(j, c, n, rng);
            const double payoff = per_round_payoff(config.spec, a, b, j, s);
            sums.sum += payoff;
            sums.sum_sq += payoff * payoff;
            auto &tally = sums.tallies[c];
            tally.count += 1;
            tally.sum_ab += a * b;
            tally.sum_b += b;
            if (config.keep_transcript) result.transcript[n] = {n, j, s, a, b, payoff};
        }
        chunks[chunk] = sums;
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(n_chunks)));
    if (workers == 1) {
        for (std::uint64_t k = 0; k < n_chunks; ++k) run_chunk(k);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::vector<std::thread> pool;
        std::exception_ptr failure;
        std::atomic<bool> failed{false};
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                try {
                    for (std::uint64_t k = next++; k < n_chunks && !failed; k = next++) run_chunk(k);
                } catch (...) {
                    if (!failed.exchange(true)) failure = std::current_exception();
                }
            });
        }
        for (auto &t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }

    double sum = 0.0, sum_sq = 0.0;
    PayoffEstimate &est = result.estimate;
    for (const auto &ch : chunks) {
        sum += ch.sum;
        sum_sq += ch.sum_sq;
        for (std::size_t c = 0; c < kNumConditions; ++c) {
            est.tallies[c].count += ch.tallies[c].count;
            est.tallies[c].sum_ab += ch.tallies[c].sum_ab;
            est.tallies[c].sum_b += ch.tallies[c].sum_b;
        }
    }
    const auto n = static_cast<double>(config.rounds);
    est.rounds = config.rounds;
    est.mean = sum / n;
    if (config.rounds > 1) {
        const double var = std::max(0.0, (sum_sq - n * est.mean * est.mean) / (n - 1.0));
        est.std_error = std::sqrt(var / n);
    }
    return result;
}

inline void write_transcript_csv(std::ostream &out, const std::vector<RoundRecord> &records) {
    out << "round,j,s,a,b,payoff\n";
    char buf[64];
    for (const auto &r : records) {
        std::snprintf(buf, sizeof buf, "%.17g", r.payoff);
        out << r.round << ',' << r.j << ',' << r.s << ',' << r.a << ',' << r.b << ',' << buf << '\n';
    }
}

// ---------------------------------------------------------------------------
// Channel noise as a modified joint POVM

/// E~_b = (1_B (x) phi*)(E_b) for a joint POVM on H_B (x) qubit.
inline std::vector<ComplexMatrix> noise_absorbed_elements(const QuantumChannel &channel, const Povm &e_bc) {
    if (e_bc.dim() % channel.output_dim() != 0) {
        throw std::invalid_argument("noise_absorbed_povm: POVM dimension is not a multiple of the signal dimension");
    }
    const DualMap dual = dual_channel(channel);
    const Eigen::Index db = e_bc.dim() / channel.output_dim();
    std::vector<ComplexMatrix> out;
    for (const auto &e : e_bc.elements()) out.push_back(dual.lift_on_last(e, db));
    return out;
}

inline Povm noise_absorbed_povm(const QuantumChannel &channel, const Povm &e_bc) {
    return Povm(noise_absorbed_elements(channel, e_bc));
}

struct EquivalenceReport {
    bool passed = false;
    double max_deviation = 0.0;
    std::string diagnostic;

    explicit operator bool() const { return passed; }
};

/// Checks Tr[E_b (rho (x) phi(omega_js))] = Tr[E~_b (rho (x) omega_js)] on
/// random rho and all six signal states, and that {E~_b} is a POVM.
inline EquivalenceReport noisy_equivalence_check(const QuantumChannel &channel, const Povm &e_bc, int samples,
                                                 std::uint64_t seed = 0x5eed, double tol = kIdentityTol) {
    EquivalenceReport report;
    if (channel.input_dim() != 2 || channel.output_dim() != 2) {
        report.diagnostic = "channel must map qubits to qubits";
        return report;
    }
    if (e_bc.dim() % 2 != 0) {
        report.diagnostic = "joint POVM dimension must be a multiple of 2";
        return report;
    }
    const std::vector<ComplexMatrix> modified = noise_absorbed_elements(channel, e_bc);
    try {
        Povm check(modified);
    } catch (const std::invalid_argument &e) {
        report.diagnostic = std::string("modified operators are not a POVM: ") + e.what();
        return report;
    }
    const Eigen::Index db = e_bc.dim() / 2;
    for (int t = 0; t < samples; ++t) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(t));
        const Eigen::Index rank = 1 + static_cast<Eigen::Index>(rng.next() % static_cast<std::uint64_t>(db));
        const ComplexMatrix rho = random_density_matrix(rng, db, rank);
        for (std::size_t c = 0; c < kNumConditions; ++c) {
            const ComplexMatrix omega = signal_state(condition_j(c), condition_s(c)).matrix();
            const ComplexMatrix noisy = tensor(rho, channel.apply(omega));
            const ComplexMatrix clean = tensor(rho, omega);
            for (std::size_t b = 0; b < e_bc.size(); ++b) {
                const double lhs = trace_product(e_bc[b], noisy).real();
                const double rhs = trace_product(modified[b], clean).real();
                report.max_deviation = std::max(report.max_deviation, std::abs(lhs - rhs));
            }
        }
    }
    report.passed = report.max_deviation <= tol;
    if (!report.passed) {
        report.diagnostic = "max deviation " + std::to_string(report.max_deviation) + " exceeds tolerance";
    }
    return report;
}

// ---------------------------------------------------------------------------
// Classically refereed witness game

/// Both parties output the n-th entry of a shared +-1 list, ignoring x and y.
struct PredeterminedListCheat {
    std::vector<int> values{1, -1, -1, 1, -1};
};

/// Alice measures alice_sign * sigma_x, Bob sigma_y, on a shared two-qubit state.
struct WitnessQuantumStrategy {
    DensityOperator state;
    int alice_sign = -1;
};

using WitnessStrategy = std::variant<PredeterminedListCheat, WitnessQuantumStrategy>;

inline double classical_witness_payoff_exact(const WitnessStrategy &strategy) {
    if (std::holds_alternative<PredeterminedListCheat>(strategy)) {
        // ab = 1 on every round, so both correlators equal 1.
        return classical_witness_payoff({1.0, 1.0});
    }
    const auto &q = std::get<WitnessQuantumStrategy>(strategy);
    return classical_witness_payoff(witness_correlations(q.state, q.alice_sign));
}

/// Uniform settings x, y in {1, 2}; returns the mean per-round payoff and its standard error.
inline PayoffEstimate run_classical_witness_game(const WitnessStrategy &strategy, std::uint64_t rounds,
                                                 std::uint64_t seed) {
    if (rounds < 1) throw std::invalid_argument("run_classical_witness_game: rounds must be >= 1");
    double sum = 0.0, sum_sq = 0.0;
    for (std::uint64_t n = 0; n < rounds; ++n) {
        Rng rng = Rng::stream(seed, n);
        const int x = 1 + static_cast<int>(rng.uniform() * 2.0);
        const int y = 1 + static_cast<int>(rng.uniform() * 2.0);
        int a = 1, b = 1;
        if (const auto *list = std::get_if<PredeterminedListCheat>(&strategy)) {
            a = b = list->values.empty() ? 1 : list->values[n % list->values.size()];
        } else {
            const auto &q = std::get<WitnessQuantumStrategy>(strategy);
            const auto &state = q.state;
            const Povm pa = sign_measurement(q.alice_sign * pauli(x)), pb = sign_measurement(pauli(y));
            std::array<double, 4> probs{};
            for (std::size_t i = 0; i < 2; ++i) {
                for (std::size_t k = 0; k < 2; ++k) {
                    probs[i * 2 + k] = std::max(0.0, state.expectation(tensor(pa[i], pb[k])));
                }
            }
            const std::size_t o = rng.categorical(probs);
            a = alice_value(o / 2);
            b = alice_value(o % 2);
        }
        const double w = classical_witness_round_payoff(a, b, x, y);
        sum += w;
        sum_sq += w * w;
    }
    PayoffEstimate est;
    const auto n = static_cast<double>(rounds);
    est.rounds = rounds;
    est.mean = sum / n;
    if (rounds > 1) est.std_error = std::sqrt(std::max(0.0, (sum_sq - n * est.mean * est.mean) / (n - 1.0)) / n);
    return est;
}

}  // namespace qref
