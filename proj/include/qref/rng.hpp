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
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>

#include "qref/linalg.hpp"

namespace qref {

/**
 * SplitMix64 generator with a fixed stream-splitting rule.
 *
 * Every unit of work (a simulated round, an oracle trial) draws from its own
 * child stream: `Rng::stream(seed, index)` starts SplitMix64 from
 * `mix(seed ^ mix(index + 1))`. Results therefore do not depend on how work
 * is partitioned across threads. Uniform doubles use the top 53 bits; normal
 * variates use Box-Muller. Nothing here goes through <random> distributions,
 * whose output is implementation defined.
 */
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    static Rng stream(std::uint64_t seed, std::uint64_t index) { return Rng(mix(seed ^ mix(index + 1))); }

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Index drawn from a discrete distribution by inverse CDF, in input order.
    std::size_t categorical(std::span<const double> probs) {
        const double u = uniform();
        double acc = 0.0;
        for (std::size_t k = 0; k < probs.size(); ++k) {
            acc += probs[k];
            if (u < acc) return k;
        }
        // Rounding slack: fall back to the last outcome with nonzero weight.
        for (std::size_t k = probs.size(); k-- > 0;) {
            if (probs[k] > 0.0) return k;
        }
        throw std::invalid_argument("Rng::categorical: all probabilities are zero");
    }

    /// Standard complex Gaussian matrix (real and imaginary parts N(0, 1/2)).
    ComplexMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols) {
        ComplexMatrix g(rows, cols);
        const double scale = std::sqrt(0.5);
        for (Eigen::Index c = 0; c < cols; ++c) {
            for (Eigen::Index r = 0; r < rows; ++r) {
                const double re = normal();
                const double im = normal();
                g(r, c) = Complex(scale * re, scale * im);
            }
        }
        return g;
    }

  private:
    std::uint64_t state_;
};

/// G^dagger G for a rank x dim complex Gaussian G.
inline ComplexMatrix random_positive_operator(Rng &rng, Eigen::Index dim, Eigen::Index rank) {
    if (rank < 1 || rank > dim) {
        throw std::invalid_argument("random_positive_operator: rank must lie in [1, dim]");
    }
    const ComplexMatrix g = rng.complex_gaussian(rank, dim);
    return g.adjoint() * g;
}

inline ComplexMatrix random_density_matrix(Rng &rng, Eigen::Index dim, Eigen::Index rank) {
    ComplexMatrix p = random_positive_operator(rng, dim, rank);
    return p / p.trace().real();
}

/// Random uniform unit vector in R^3.
inline std::array<double, 3> random_unit_vector(Rng &rng) {
    for (;;) {
        std::array<double, 3> v{rng.normal(), rng.normal(), rng.normal()};
        const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        if (n > 1e-12) {
            return {v[0] / n, v[1] / n, v[2] / n};
        }
    }
}

}  // namespace qref
