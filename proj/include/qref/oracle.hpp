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
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "qref/rng.hpp"
#include "qref/strategies.hpp"

/// Brute-force verifiers. Everything here is recomputed from raw traces of
/// signal states against measurement operators, or goes through the generic
/// qrs_payoff_exact / lhs_payoff_routes entry points; none of the closed-form
/// payoff shortcuts in strategies.hpp are used.
namespace qref::oracle {

struct ChshEnumeration {
    double max_value = 0.0;
    double min_value = 0.0;
    int maximizer_count = 0;
    std::array<int, 4> argmax{};  // (a1, a2, b1, b2)
};

/// a1 b1 + a1 b2 + a2 b1 - a2 b2 over all 16 deterministic +-1 assignments.
inline ChshEnumeration enumerate_chsh_deterministic() {
    ChshEnumeration out;
    out.max_value = -std::numeric_limits<double>::infinity();
    out.min_value = std::numeric_limits<double>::infinity();
    std::vector<std::array<int, 4>> values;
    for (int mask = 0; mask < 16; ++mask) {
        const int a1 = (mask & 1) ? -1 : 1, a2 = (mask & 2) ? -1 : 1;
        const int b1 = (mask & 4) ? -1 : 1, b2 = (mask & 8) ? -1 : 1;
        const double v = a1 * b1 + a1 * b2 + a2 * b1 - a2 * b2;
        if (v > out.max_value) {
            out.max_value = v;
            out.argmax = {a1, a2, b1, b2};
            out.maximizer_count = 0;
        }
        if (v == out.max_value) ++out.maximizer_count;
        out.min_value = std::min(out.min_value, v);
    }
    return out;
}

/// Fibonacci-lattice unit vectors, roughly uniform on the sphere.
inline std::vector<std::array<double, 3>> fibonacci_directions(std::size_t count) {
    std::vector<std::array<double, 3>> out;
    out.reserve(count);
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < count; ++i) {
        const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(count);
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden_angle * static_cast<double>(i);
        out.push_back({rho * std::cos(phi), rho * std::sin(phi), z});
    }
    return out;
}

/// Estimator grid for a given resolution R: R^2 Fibonacci directions times
/// radial shells k/R (k = 0..R), and mu = k/R (k = 1..R) wherever
/// mu (1 + |m|) <= 1.
struct EstimatorGrid {
    int resolution = 0;
    std::vector<std::array<double, 3>> directions;
    std::vector<double> radii;
    std::vector<double> mus;

    explicit EstimatorGrid(int r) : resolution(r) {
        if (r < 10) throw std::invalid_argument("EstimatorGrid: resolution must be >= 10");
        directions = fibonacci_directions(static_cast<std::size_t>(r) * static_cast<std::size_t>(r));
        for (int k = 0; k <= r; ++k) radii.push_back(static_cast<double>(k) / r);
        for (int k = 1; k <= r; ++k) mus.push_back(static_cast<double>(k) / r);
    }

    /// Diameter of one grid cell: angular spacing combined with radial spacing.
    double cell_size() const {
        const double angular = std::sqrt(4.0 * std::numbers::pi / static_cast<double>(directions.size()));
        const double radial = 1.0 / resolution;
        return std::sqrt(angular * angular + radial * radial);
    }

    static bool admissible(double radius, double mu) { return mu * (1.0 + radius) <= 1.0 + 1e-12; }

    template <class F>
    void for_each_vector(F &&f) const {
        bool centre_done = false;
        for (double radius : radii) {
            for (const auto &d : directions) {
                if (radius == 0.0) {
                    if (centre_done) break;
                    centre_done = true;
                }
                f(std::array<double, 3>{radius * d[0], radius * d[1], radius * d[2]}, radius);
            }
        }
    }
};

/// Tr[(1 + m.sigma) omega_c] for each condition of the spec's ensemble.
inline std::array<double, kNumConditions> unit_mu_traces(const std::array<double, 3> &m, const SteeringGameSpec &spec) {
    const ComplexMatrix op = bloch_operator({m, 1.0});
    std::array<double, kNumConditions> t{};
    for (std::size_t c = 0; c < kNumConditions; ++c) t[c] = trace_product(op, spec.signal(c).matrix()).real();
    return t;
}

/// Payoff of "Alice answers +1, Bob answers b = 1 iff his estimate is +1",
/// assembled from p(+1, b=1 | c) = mu Tr[(1 + m.sigma) omega_c].
inline double no_state_payoff_from_traces(const std::array<double, kNumConditions> &unit_traces, double mu,
                                          const SteeringGameSpec &spec) {
    CorrelationTable table;
    for (std::size_t c = 0; c < kNumConditions; ++c) {
        table.ab[c] = mu * unit_traces[c];
        table.b[c] = mu * unit_traces[c];
    }
    return payoff_from_correlations(spec, table);
}

inline double ratio_from_traces(const std::array<double, kNumConditions> &t) {
    double tp = 0.0, fp = 0.0;
    for (std::size_t c = 0; c < kNumConditions; ++c) (condition_s(c) == 1 ? tp : fp) += t[c];
    return fp > 0.0 ? tp / fp : std::numeric_limits<double>::infinity();
}

/// Derivative-free compass search on a box, halving the step on failure.
inline std::vector<double> compass_maximize(const std::function<double(const std::vector<double> &)> &f,
                                            std::vector<double> x, const std::vector<double> &lo,
                                            const std::vector<double> &hi, double step, double min_step = 1e-12) {
    double best = f(x);
    while (step > min_step) {
        bool improved = false;
        for (std::size_t i = 0; i < x.size(); ++i) {
            for (double dir : {1.0, -1.0}) {
                std::vector<double> y = x;
                y[i] = std::clamp(y[i] + dir * step, lo[i], hi[i]);
                const double v = f(y);
                if (v > best) {
                    best = v;
                    x = std::move(y);
                    improved = true;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    return x;
}

inline std::array<double, 3> spherical(double radius, double theta, double phi) {
    return {radius * std::sin(theta) * std::cos(phi), radius * std::sin(theta) * std::sin(phi),
            radius * std::cos(theta)};
}

inline std::array<double, 2> angles_of(const std::array<double, 3> &m) {
    const double n = std::sqrt(m[0] * m[0] + m[1] * m[1] + m[2] * m[2]);
    if (n == 0.0) return {0.0, 0.0};
    return {std::acos(std::clamp(m[2] / n, -1.0, 1.0)), std::atan2(m[1], m[0])};
}

struct CheatGridResult {
    double max_payoff = -std::numeric_limits<double>::infinity();
    BlochVector argmax;
    double cell_size = 0.0;
    std::uint64_t evaluations = 0;
    // Local refinement started from the grid maximizer.
    double refined_max_payoff = 0.0;
    BlochVector refined_argmax;
    double max_ratio = 0.0;
    std::array<double, 3> max_ratio_direction{};
};

/// Sweeps the no-state cheat over the estimator grid, then polishes the best
/// grid point (payoff) and the best discrimination ratio by compass search.
inline CheatGridResult grid_max_cheat(const SteeringGameSpec &spec, int resolution) {
    const EstimatorGrid grid(resolution);
    CheatGridResult out;
    out.cell_size = grid.cell_size();
    std::array<double, 3> best_ratio_m{};
    grid.for_each_vector([&](const std::array<double, 3> &m, double radius) {
        const auto t = unit_mu_traces(m, spec);
        const double ratio = ratio_from_traces(t);
        if (ratio > out.max_ratio) {
            out.max_ratio = ratio;
            best_ratio_m = m;
        }
        for (double mu : grid.mus) {
            if (!EstimatorGrid::admissible(radius, mu)) break;
            const double v = no_state_payoff_from_traces(t, mu, spec);
            ++out.evaluations;
            if (v > out.max_payoff) {
                out.max_payoff = v;
                out.argmax = {m, mu};
            }
        }
    });

    // Payoff refinement over (radius, theta, phi, t) with mu = t / (1 + radius).
    auto payoff_at = [&](const std::vector<double> &x) {
        const double mu = x[3] / (1.0 + x[0]);
        if (mu <= 0.0) return -std::numeric_limits<double>::infinity();
        return no_state_payoff_from_traces(unit_mu_traces(spherical(x[0], x[1], x[2]), spec), mu, spec);
    };
    {
        const auto ang = angles_of(out.argmax.m);
        const double radius = out.argmax.norm();
        std::vector<double> x0{radius, ang[0], ang[1], out.argmax.mu * (1.0 + radius)};
        const auto x = compass_maximize(payoff_at, x0, {0.0, 0.0, -2 * std::numbers::pi, 1e-9},
                                        {1.0, std::numbers::pi, 2 * std::numbers::pi, 1.0}, 0.5 / resolution);
        out.refined_max_payoff = payoff_at(x);
        out.refined_argmax = {spherical(x[0], x[1], x[2]), x[3] / (1.0 + x[0])};
    }
    // Ratio refinement over (radius, theta, phi); mu cancels in the ratio.
    if (std::isfinite(out.max_ratio)) {
        auto ratio_at = [&](const std::vector<double> &x) {
            return ratio_from_traces(unit_mu_traces(spherical(x[0], x[1], x[2]), spec));
        };
        const auto ang = angles_of(best_ratio_m);
        std::vector<double> x0{std::sqrt(best_ratio_m[0] * best_ratio_m[0] + best_ratio_m[1] * best_ratio_m[1] +
                                         best_ratio_m[2] * best_ratio_m[2]),
                               ang[0], ang[1]};
        const auto x = compass_maximize(ratio_at, x0, {0.0, 0.0, -2 * std::numbers::pi},
                                        {1.0, std::numbers::pi, 2 * std::numbers::pi}, 0.5 / resolution);
        out.max_ratio = ratio_at(x);
        out.max_ratio_direction = spherical(x[0], x[1], x[2]);
    } else {
        out.max_ratio_direction = best_ratio_m;
    }
    return out;
}

struct BobToAliceGridResult {
    double max_payoff = -std::numeric_limits<double>::infinity();
    CommCheat argmax = CommCheat::bob_to_alice(BlochVector{});
    std::uint64_t estimators = 0;
};

/// Best Bob-to-Alice cheat over the estimator grid, all four rules b(e) and
/// all 2^12 Alice tables a(j, b, e). Each table entry multiplies a disjoint
/// set of terms of the payoff, so the table maximum is taken entry by entry.
inline BobToAliceGridResult grid_max_bob_to_alice(const SteeringGameSpec &spec, int resolution) {
    const EstimatorGrid grid(resolution);
    BobToAliceGridResult out;
    const double c = spec.penalty();
    grid.for_each_vector([&](const std::array<double, 3> &m, double radius) {
        const auto t = unit_mu_traces(m, spec);
        for (double mu : grid.mus) {
            if (!EstimatorGrid::admissible(radius, mu)) break;
            ++out.estimators;
            // P(e | c) with e = +1 at index 0.
            std::array<std::array<double, 2>, kNumConditions> pe{};
            for (std::size_t k = 0; k < kNumConditions; ++k) pe[k] = {mu * t[k], 1.0 - mu * t[k]};
            for (int rule = 0; rule < 4; ++rule) {
                const std::array<int, 2> bob_rule{rule & 1, (rule >> 1) & 1};
                CommCheat::AliceTable table = CommCheat::echo_estimate_table();
                double total = 0.0;
                for (int j = 1; j <= 3; ++j) {
                    for (std::size_t e = 0; e < 2; ++e) {
                        if (bob_rule[e] == 0) continue;
                        double best = -std::numeric_limits<double>::infinity();
                        for (int a : {1, -1}) {
                            double v = 0.0;
                            for (int s : {1, -1}) v += pe[condition_index(j, s)][e] * (s * a - c);
                            if (v > best) {
                                best = v;
                                table[static_cast<std::size_t>(j - 1)][1][e] = a;
                            }
                        }
                        total += best;
                    }
                }
                const double payoff = 2.0 * total;
                if (payoff > out.max_payoff) {
                    out.max_payoff = payoff;
                    out.argmax = CommCheat::bob_to_alice({m, mu}, bob_rule, table);
                }
            }
        }
    });
    return out;
}

struct LhsSuiteReport {
    std::uint64_t trials = 0;  // strategies evaluated (random and best-response variants)
    double max_payoff = -std::numeric_limits<double>::infinity();
    double max_route_gap = 0.0;
    bool passed = true;
    std::optional<LhsStrategy> worst;  // strategy attaining max_payoff
    std::optional<std::string> failure;
};

/// Random binary POVM {S^-1/2 P_b S^-1/2} from Gaussian positive operators P_b, S = P_0 + P_1.
inline Povm random_binary_povm(Rng &rng, Eigen::Index dim, Eigen::Index rank_of_one) {
    const ComplexMatrix p0 = random_positive_operator(rng, dim, dim);
    const ComplexMatrix p1 = random_positive_operator(rng, dim, rank_of_one);
    const ComplexMatrix inv_sqrt = inverse_sqrt_positive(p0 + p1);
    ComplexMatrix e1 = inv_sqrt * p1 * inv_sqrt;
    e1 = 0.5 * (e1 + e1.adjoint());
    return Povm({identity(dim) - e1, e1});
}

inline LhsStrategy random_lhs_strategy(Rng &rng, Eigen::Index bob_dim, std::size_t lambda_count) {
    std::vector<double> weights;
    double total = 0.0;
    for (std::size_t k = 0; k < lambda_count; ++k) {
        double u = rng.uniform();
        while (u <= 0.0) u = rng.uniform();
        weights.push_back(-std::log(u));
        total += weights.back();
    }
    for (double &w : weights) w /= total;

    std::vector<DensityOperator> states;
    std::vector<std::array<double, 3>> responses;
    for (std::size_t k = 0; k < lambda_count; ++k) {
        const auto rank = 1 + static_cast<Eigen::Index>(rng.next() % static_cast<std::uint64_t>(bob_dim));
        states.emplace_back(random_density_matrix(rng, bob_dim, rank));
        responses.push_back({2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0});
    }
    const Eigen::Index joint = bob_dim * kSignalDim;
    const auto rank_one = 1 + static_cast<Eigen::Index>(rng.next() % static_cast<std::uint64_t>(joint));
    Povm povm = (bob_dim == 2 && rng.uniform() < 0.25) ? partial_bell_povm() : random_binary_povm(rng, joint, rank_one);
    return {std::move(weights), std::move(states), std::move(responses), std::move(povm)};
}

/// Alice's responses replaced by the sign of sum_s s Tr[E_1 rho_lambda (x) omega_js],
/// the best she can do against Bob's fixed behaviour.
inline LhsStrategy best_response(const LhsStrategy &st, const SteeringGameSpec &spec) {
    LhsStrategy out = st;
    for (std::size_t k = 0; k < st.weights.size(); ++k) {
        for (int j = 1; j <= 3; ++j) {
            double signed_sum = 0.0;
            for (int s : {1, -1}) {
                signed_sum +=
                    s * trace_product(st.bob_joint_povm[1], tensor(st.hidden_states[k].matrix(), spec.signal(j, s).matrix()))
                            .real();
            }
            out.alice_responses[k][static_cast<std::size_t>(j - 1)] = signed_sum >= 0.0 ? 1.0 : -1.0;
        }
    }
    return out;
}

/// Samples random LHS strategies for every (H_B dim, |lambda|) pair, `trials`
/// per pair, and evaluates each with random and best-response Alice outputs.
inline LhsSuiteReport random_lhs_suite(int trials, const std::vector<int> &bob_dims,
                                       const std::vector<int> &lambda_sizes, std::uint64_t seed,
                                       const SteeringGameSpec &spec = {}, double payoff_tol = 1e-9,
                                       double route_tol = kValidationTol) {
    if (trials < 1) throw std::invalid_argument("random_lhs_suite: trials must be >= 1");
    LhsSuiteReport report;
    std::uint64_t index = 0;
    for (int d : bob_dims) {
        if (d < 1 || d > 4) throw std::invalid_argument("random_lhs_suite: H_B dimension must lie in [1, 4]");
        for (int l : lambda_sizes) {
            if (l < 1) throw std::invalid_argument("random_lhs_suite: lambda sizes must be >= 1");
            for (int t = 0; t < trials; ++t, ++index) {
                Rng rng = Rng::stream(seed, index);
                const LhsStrategy base = random_lhs_strategy(rng, d, static_cast<std::size_t>(l));
                for (const LhsStrategy &st : {base, best_response(base, spec)}) {
                    const LhsPayoffRoutes r = lhs_payoff_routes(st, spec);
                    ++report.trials;
                    const double gap = std::abs(r.direct - r.reduced);
                    report.max_route_gap = std::max(report.max_route_gap, gap);
                    if (r.direct > report.max_payoff) {
                        report.max_payoff = r.direct;
                        report.worst = st;
                    }
                    if (report.passed && (gap > route_tol || r.direct > payoff_tol)) {
                        report.passed = false;
                        report.failure = gap > route_tol
                                             ? "evaluation routes disagree by " + std::to_string(gap)
                                             : "positive payoff " + std::to_string(r.direct) + " for an LHS strategy";
                    }
                }
            }
        }
    }
    return report;
}

struct ThresholdRow {
    double w = 0.0;
    double witness2 = 0.0;        // bound 1
    double steering2 = 0.0;       // bound sqrt 2
    double steering3 = 0.0;       // bound sqrt 3
    double chsh = 0.0;            // bound 2
    double witness_payoff = 0.0;  // classical witness game, > 0 wins
    double qrs_payoff = 0.0;      // honest quantum-refereed payoff, > 0 wins
};

/// Werner-family functionals. Steering correlators use Alice measuring
/// -sigma_j against Bob's sigma_j; the game payoff uses the canonical honest
/// strategy.
inline std::vector<ThresholdRow> threshold_scan(const std::vector<double> &w_grid, double r = 1.0) {
    const SteeringGameSpec spec = SteeringGameSpec{}.with_r(r);
    const Strategy honest = HonestStrategy::canonical();
    std::vector<ThresholdRow> rows;
    for (double w : w_grid) {
        const DensityOperator rho = werner_state(w);
        std::array<double, 3> steered{};
        for (int j = 1; j <= 3; ++j) {
            steered[static_cast<std::size_t>(j - 1)] = rho.expectation(tensor(-pauli(j), pauli(j)));
        }
        ThresholdRow row;
        row.w = w;
        row.witness2 = witness2_value(rho);
        row.steering2 = steering2_value(steered[0], steered[1]);
        row.steering3 = steering3_value(steered);
        row.chsh = chsh_value(canonical_chsh_correlators(rho));
        row.witness_payoff = classical_witness_payoff(witness_correlations(rho, -1));
        row.qrs_payoff = qrs_payoff_exact(spec, honest, rho);
        rows.push_back(row);
    }
    return rows;
}

/// Smallest grid W after which `excess` stays positive; nullopt if it never turns positive.
inline std::optional<double> sign_change(const std::vector<ThresholdRow> &rows,
                                         const std::function<double(const ThresholdRow &)> &excess) {
    std::optional<double> crossing;
    for (const auto &row : rows) {
        if (excess(row) > 0.0) {
            if (!crossing) crossing = row.w;
        } else {
            crossing.reset();
        }
    }
    return crossing;
}

inline std::vector<double> uniform_grid(double start, double stop, double step) {
    if (!(step > 0.0) || !(stop >= start)) return {};
    std::vector<double> out;
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
    for (std::size_t k = 0; k <= n; ++k) out.push_back(start + static_cast<double>(k) * step);
    return out;
}

struct ThresholdCheck {
    std::string name;
    double expected = 0.0;
    std::optional<double> found;
    bool passed = false;
};

/// Compares each functional's sign change with its known Werner threshold.
inline std::vector<ThresholdCheck> check_thresholds(const std::vector<ThresholdRow> &rows, double step, double r = 1.0) {
    const double sqrt2 = std::numbers::sqrt2, sqrt3 = std::numbers::sqrt3;
    std::vector<ThresholdCheck> out;
    auto add = [&](std::string name, double expected, std::function<double(const ThresholdRow &)> excess) {
        ThresholdCheck c{std::move(name), expected, sign_change(rows, excess), false};
        c.passed = c.found && std::abs(*c.found - expected) <= step + 1e-12;
        out.push_back(std::move(c));
    };
    add("witness2", 0.5, [](const ThresholdRow &x) { return x.witness2 - 1.0; });
    add("witness_payoff", 0.5, [](const ThresholdRow &x) { return x.witness_payoff; });
    add("steering2", 1.0 / sqrt2, [=](const ThresholdRow &x) { return x.steering2 - sqrt2; });
    add("chsh", 1.0 / sqrt2, [](const ThresholdRow &x) { return x.chsh - 2.0; });
    add("steering3", 1.0 / sqrt3, [=](const ThresholdRow &x) { return x.steering3 - sqrt3; });
    add("qrs_payoff", r / sqrt3, [](const ThresholdRow &x) { return x.qrs_payoff; });
    return out;
}

}  // namespace qref::oracle
