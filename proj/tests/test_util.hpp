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

#include <gtest/gtest.h>

#include "qref/qref.hpp"

namespace qref::testing {

/// Hand-rolled generators for property tests; every draw comes from a seeded Rng.
inline ComplexMatrix random_matrix(Rng &rng, Eigen::Index dim) { return rng.complex_gaussian(dim, dim); }

inline ComplexMatrix random_hermitian(Rng &rng, Eigen::Index dim) {
    const ComplexMatrix g = rng.complex_gaussian(dim, dim);
    return 0.5 * (g + g.adjoint());
}

inline DensityOperator random_state(Rng &rng, Eigen::Index dim) {
    const auto rank = 1 + static_cast<Eigen::Index>(rng.uniform() * static_cast<double>(dim));
    return DensityOperator(random_density_matrix(rng, dim, rank));
}

/// Random Kraus channel on a qubit from an isometry: K_k = rows of V, V^dagger V = I.
inline QuantumChannel random_qubit_channel(Rng &rng, int kraus_count) {
    const ComplexMatrix g = rng.complex_gaussian(2 * kraus_count, 2);
    const ComplexMatrix v = g * inverse_sqrt_positive(g.adjoint() * g);
    std::vector<ComplexMatrix> kraus;
    for (int k = 0; k < kraus_count; ++k) kraus.push_back(v.block(2 * k, 0, 2, 2));
    return QuantumChannel(kraus);
}

/// {S^-1/2 P S^-1/2, S^-1/2 Q S^-1/2} with S = P + Q for random positive P, Q.
inline Povm random_binary_povm(Rng &rng, Eigen::Index dim) {
    const ComplexMatrix p = random_positive_operator(rng, dim, dim), q = random_positive_operator(rng, dim, dim);
    const ComplexMatrix w = inverse_sqrt_positive(p + q);
    ComplexMatrix e0 = w * p * w;
    e0 = 0.5 * (e0 + e0.adjoint());
    return Povm({e0, identity(dim) - e0});
}

inline ::testing::AssertionResult MatrixNear(const ComplexMatrix &a, const ComplexMatrix &b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        return ::testing::AssertionFailure() << "shape mismatch";
    }
    const double dev = (a - b).cwiseAbs().maxCoeff();
    if (dev <= tol) return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure() << "max deviation " << dev << " > " << tol << "\n" << a << "\nvs\n" << b;
}

}  // namespace qref::testing
