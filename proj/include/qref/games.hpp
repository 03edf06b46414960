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
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "qref/quantum.hpp"

namespace qref {

inline constexpr int kNumConditions = 6;

/// Conditions (j, s) are indexed j-major with s = +1 before s = -1:
/// (1,+), (1,-), (2,+), (2,-), (3,+), (3,-).
inline std::size_t condition_index(int j, int s) {
    require_signal_label(j, s);
    return static_cast<std::size_t>((j - 1) * 2 + (s == 1 ? 0 : 1));
}
inline int condition_j(std::size_t c) { return static_cast<int>(c / 2) + 1; }
inline int condition_s(std::size_t c) { return c % 2 == 0 ? 1 : -1; }

/// Outcome label a = +1 is index 0, a = -1 is index 1.
inline int alice_value(std::size_t a_index) { return a_index == 0 ? 1 : -1; }
inline std::size_t alice_index(int a) { return a == 1 ? 0 : 1; }

/// Rules and parameters of the quantum-refereed steering game: which qubit
/// states the referee actually sends for each (j, s), how (j, s) is sampled,
/// and the payoff penalty r * payoff_bound / 3 applied to <b>.
class SteeringGameSpec {
  public:
    SteeringGameSpec() : SteeringGameSpec(ideal_ensemble(), uniform_distribution(), 1.0, std::sqrt(3.0)) {}

    SteeringGameSpec(std::vector<DensityOperator> ensemble, std::array<double, kNumConditions> input_distribution,
                     double r, double payoff_bound)
        : ensemble_(std::move(ensemble)), distribution_(input_distribution), r_(r), payoff_bound_(payoff_bound) {
        if (ensemble_.size() != kNumConditions) {
            throw std::invalid_argument("SteeringGameSpec: ensemble must hold exactly six states");
        }
        for (const auto &rho : ensemble_) {
            if (rho.dim() != 2) {
                throw std::invalid_argument("SteeringGameSpec: signal states must be qubit states");
            }
        }
        double total = 0.0;
        for (double p : distribution_) {
            if (!(p >= 0.0)) {
                throw std::invalid_argument("SteeringGameSpec: input probabilities must be non-negative");
            }
            total += p;
        }
        if (std::abs(total - 1.0) > kValidationTol) {
            throw std::invalid_argument("SteeringGameSpec: input probabilities must sum to 1");
        }
        if (!(r_ >= 1.0)) {
            throw std::invalid_argument("SteeringGameSpec: r must be >= 1");
        }
        if (!(payoff_bound_ > 0.0)) {
            throw std::invalid_argument("SteeringGameSpec: payoff bound must be positive");
        }
    }

    static std::vector<DensityOperator> ideal_ensemble() {
        std::vector<DensityOperator> out;
        for (std::size_t c = 0; c < kNumConditions; ++c) {
            out.push_back(signal_state(condition_j(c), condition_s(c)));
        }
        return out;
    }

    static std::array<double, kNumConditions> uniform_distribution() {
        std::array<double, kNumConditions> d{};
        d.fill(1.0 / kNumConditions);
        return d;
    }

    const DensityOperator &signal(int j, int s) const { return ensemble_[condition_index(j, s)]; }
    const DensityOperator &signal(std::size_t c) const { return ensemble_.at(c); }
    const std::vector<DensityOperator> &ensemble() const { return ensemble_; }
    double input_probability(int j, int s) const { return distribution_[condition_index(j, s)]; }
    const std::array<double, kNumConditions> &input_distribution() const { return distribution_; }
    double r() const { return r_; }
    double payoff_bound() const { return payoff_bound_; }

    /// Coefficient of <b>_{j,s} in the average payoff; r / sqrt(3) by default.
    double penalty() const { return r_ * payoff_bound_ / 3.0; }

    bool has_ideal_ensemble(double tol = kIdentityTol) const {
        for (std::size_t c = 0; c < kNumConditions; ++c) {
            if (!approx_equal(ensemble_[c].matrix(), signal_state(condition_j(c), condition_s(c)).matrix(), tol)) {
                return false;
            }
        }
        return true;
    }

    SteeringGameSpec with_r(double r) const { return {ensemble_, distribution_, r, payoff_bound_}; }
    SteeringGameSpec with_payoff_bound(double bound) const { return {ensemble_, distribution_, r_, bound}; }
    SteeringGameSpec with_ensemble(std::vector<DensityOperator> e) const {
        return {std::move(e), distribution_, r_, payoff_bound_};
    }
    SteeringGameSpec with_input_distribution(std::array<double, kNumConditions> d) const {
        return {ensemble_, d, r_, payoff_bound_};
    }

  private:
    std::vector<DensityOperator> ensemble_;
    std::array<double, kNumConditions> distribution_;
    double r_;
    double payoff_bound_;
};

/// Conditional averages <ab>_{j,s} and <b>_{j,s}, indexed by condition_index.
struct CorrelationTable {
    std::array<double, kNumConditions> ab{};
    std::array<double, kNumConditions> b{};
    std::optional<std::array<double, 3>> steered;

    bool is_consistent(double tol = kValidationTol) const {
        for (std::size_t c = 0; c < kNumConditions; ++c) {
            if (std::abs(ab[c]) > b[c] + tol || b[c] > 1.0 + tol || b[c] < -tol) {
                return false;
            }
        }
        return true;
    }
};

/// |<a1 b1> + <a1 b2> + <a2 b1> - <a2 b2>|, correlators ordered (a1b1, a1b2, a2b1, a2b2).
inline double chsh_value(const std::array<double, 4> &corr) {
    return std::abs(corr[0] + corr[1] + corr[2] - corr[3]);
}

/// |<a1 sigma1> + <a2 sigma2>|; the local-hidden-state bound is sqrt(2).
inline double steering2_value(double a1_sigma1, double a2_sigma2) {
    return std::abs(a1_sigma1 + a2_sigma2);
}

/// Signed sum of the three steering correlators; the local-hidden-state bound is sqrt(3).
inline double steering3_value(const std::array<double, 3> &a_sigma) {
    return a_sigma[0] + a_sigma[1] + a_sigma[2];
}

/// |<sigma1 (x) sigma1> + <sigma2 (x) sigma2>| for a two-qubit state; separable bound is 1.
inline double witness2_value(const DensityOperator &state) {
    if (state.dim() != 4) {
        throw std::invalid_argument("witness2_value: expected a two-qubit state");
    }
    return std::abs(state.expectation(tensor(pauli(1), pauli(1))) + state.expectation(tensor(pauli(2), pauli(2))));
}

/// Correlators <sigma_x (x) sigma_x> reported to a classical referee for x = 1, 2.
struct WitnessCorrelations {
    double xx = 0.0;
    double yy = 0.0;
};

/// Average of ab delta_xy / p(x,y) - 1: positive only if the witness bound 1 is exceeded.
inline double classical_witness_payoff(const WitnessCorrelations &corr) {
    return corr.xx + corr.yy - 1.0;
}

/// Alice measures alice_sign * sigma_x and Bob sigma_x. On Werner states the
/// honest choice is alice_sign = -1, which gives <ab> = W for both settings.
inline WitnessCorrelations witness_correlations(const DensityOperator &state, int alice_sign = 1) {
    if (state.dim() != 4) {
        throw std::invalid_argument("witness_correlations: expected a two-qubit state");
    }
    if (alice_sign != 1 && alice_sign != -1) {
        throw std::invalid_argument("witness_correlations: alice_sign must be +-1");
    }
    return {alice_sign * state.expectation(tensor(pauli(1), pauli(1))),
            alice_sign * state.expectation(tensor(pauli(2), pauli(2)))};
}

/// Per-round payoff of the classical witness game, settings x, y in {1, 2}.
inline double classical_witness_round_payoff(int a, int b, int x, int y, double p_xy = 0.25) {
    return (x == y ? static_cast<double>(a * b) / p_xy : 0.0) - 1.0;
}

/// Expectation of a_observable (x) b_observable on a bipartite state.
inline double correlator(const ComplexMatrix &a_observable, const ComplexMatrix &b_observable,
                         const DensityOperator &state) {
    return state.expectation(tensor(a_observable, b_observable));
}

/// The +-1 observable sum_a a E_a of a binary POVM whose element 0 is a = +1.
inline ComplexMatrix binary_observable(const Povm &povm) {
    if (povm.size() != 2) {
        throw std::invalid_argument("binary_observable: expected a two-outcome POVM");
    }
    return povm[0] - povm[1];
}

/// CHSH correlators on a two-qubit state at the settings that reach 2 sqrt(2)
/// on the singlet: Alice sigma3, sigma1; Bob -(sigma3 +- sigma1)/sqrt(2).
inline std::array<double, 4> canonical_chsh_correlators(const DensityOperator &state) {
    const ComplexMatrix a1 = pauli(3), a2 = pauli(1);
    const ComplexMatrix b1 = -(pauli(3) + pauli(1)) / std::numbers::sqrt2;
    const ComplexMatrix b2 = -(pauli(3) - pauli(1)) / std::numbers::sqrt2;
    return {correlator(a1, b1, state), correlator(a1, b2, state), correlator(a2, b1, state),
            correlator(a2, b2, state)};
}

/// 2 sum_{j,s} (s <ab>_{j,s} - penalty <b>_{j,s}).
inline double payoff_from_correlations(const SteeringGameSpec &spec, const CorrelationTable &table) {
    double total = 0.0;
    for (std::size_t c = 0; c < kNumConditions; ++c) {
        total += condition_s(c) * table.ab[c] - spec.penalty() * table.b[c];
    }
    return 2.0 * total;
}

/// Per-round score whose expectation under the spec's input distribution is
/// the average payoff: (2 / p(j,s)) (s a b - penalty b), i.e. 12(...) when
/// (j, s) is uniform.
inline double per_round_payoff(const SteeringGameSpec &spec, int a, int b, int j, int s) {
    require_signal_label(j, s);
    if (a != 1 && a != -1) throw std::invalid_argument("per_round_payoff: a must be +-1");
    if (b != 0 && b != 1) throw std::invalid_argument("per_round_payoff: b must be 0 or 1");
    const double p = spec.input_probability(j, s);
    if (p <= 0.0) {
        throw std::invalid_argument("per_round_payoff: condition has zero input probability");
    }
    return (2.0 / p) * (static_cast<double>(s * a * b) - spec.penalty() * b);
}

}  // namespace qref
