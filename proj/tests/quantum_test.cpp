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


#include <cmath>

#include "test_util.hpp"

namespace qref {
namespace {

using testing::MatrixNear;

TEST(DensityOperatorTest, Validation) {
    EXPECT_NO_THROW(DensityOperator(0.5 * identity(2)));
    EXPECT_THROW(DensityOperator(identity(2)), std::invalid_argument);
    EXPECT_THROW(DensityOperator(ComplexMatrix(pauli(3) * 0.5 + 0.5 * identity(2) * 0.0)), std::invalid_argument);
    ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    EXPECT_THROW(DensityOperator{neg}, std::invalid_argument);
    ComplexMatrix nh = 0.5 * identity(2);
    nh(0, 1) = 0.1;
    EXPECT_THROW(DensityOperator{nh}, std::invalid_argument);
    EXPECT_THROW(DensityOperator(ComplexMatrix::Zero(2, 3)), std::invalid_argument);
}

TEST(PovmTest, Validation) {
    EXPECT_NO_THROW(Povm({0.5 * identity(2), 0.5 * identity(2)}));
    EXPECT_THROW(Povm({0.5 * identity(2), 0.4 * identity(2)}), std::invalid_argument);
    EXPECT_THROW(Povm({1.5 * identity(2), -0.5 * identity(2)}), std::invalid_argument);
    EXPECT_THROW(Povm({identity(2), ComplexMatrix::Zero(3, 3)}), std::invalid_argument);
    EXPECT_THROW(Povm(std::vector<ComplexMatrix>{}), std::invalid_argument);
}

TEST(SignMeasurement, ElementZeroIsPlusOne) {
    const Povm p = sign_measurement(pauli(3));
    EXPECT_EQ(p[0](0, 0), Complex(1.0));
    EXPECT_EQ(p[1](1, 1), Complex(1.0));
}

TEST(Werner, Examples) {
    EXPECT_TRUE(MatrixNear(werner_state(0).matrix(), identity(4) / 4.0, 1e-15));
    EXPECT_TRUE(MatrixNear(werner_state(1).matrix(), singlet_projector(), 1e-15));
    for (double w : {-1.0 / 3.0, -0.2, 0.0, 0.3, 0.7, 1.0}) {
        for (int j = 1; j <= 3; ++j) {
            EXPECT_NEAR(werner_state(w).expectation(tensor(pauli(j), pauli(j))), -w, 1e-15);
        }
    }
}

TEST(Werner, RangeIsEnforced) {
    EXPECT_THROW(werner_state(1.01), std::invalid_argument);
    EXPECT_THROW(werner_state(-0.34), std::invalid_argument);
}

TEST(WernerProperty, SpectrumAndPositivityBoundary) {
    for (int k = -40; k <= 120; ++k) {
        const double w = k / 100.0;
        ComplexMatrix m = identity(4);
        for (int j = 1; j <= 3; ++j) m -= w * tensor(pauli(j), pauli(j));
        m /= 4.0;
        const RealVector ev = hermitian_eigenvalues(m);
        EXPECT_NEAR(ev(0), std::min((1 + 3 * w) / 4, (1 - w) / 4), 1e-14);
        EXPECT_NEAR(ev(3), std::max((1 + 3 * w) / 4, (1 - w) / 4), 1e-14);
        const bool inside = w >= -1.0 / 3.0 && w <= 1.0;
        EXPECT_EQ(is_positive_semidefinite(m, 1e-14), inside) << "w=" << w;
        if (inside) {
            EXPECT_NO_THROW(werner_state(w));
        } else {
            EXPECT_THROW(werner_state(w), std::invalid_argument);
        }
    }
}

TEST(Signals, Examples) {
    ComplexMatrix up = ComplexMatrix::Zero(2, 2);
    up(0, 0) = 1.0;
    EXPECT_TRUE(MatrixNear(signal_state(3, 1).matrix(), up, 0.0));
    EXPECT_NEAR(trace_product(signal_state(1, 1).matrix(), signal_state(1, -1).matrix()).real(), 0.0, 1e-15);
    EXPECT_NEAR(trace_product(signal_state(1, 1).matrix(), signal_state(2, 1).matrix()).real(), 0.5, 1e-15);
    EXPECT_THROW(signal_state(0, 1), std::invalid_argument);
    EXPECT_THROW(signal_state(1, 0), std::invalid_argument);
}

TEST(Signals, SumIdentitiesHoldExactly) {
    for (int j = 1; j <= 3; ++j) {
        const ComplexMatrix p = signal_state(j, 1).matrix(), m = signal_state(j, -1).matrix();
        EXPECT_TRUE(MatrixNear(p + m, identity(2), 1e-15));
        EXPECT_TRUE(MatrixNear(p - m, pauli(j), 1e-15));
        // Rank-1 projector.
        EXPECT_TRUE(MatrixNear(p * p, p, 1e-15));
    }
}

TEST(Channels, Examples) {
    Rng rng(21);
    const DensityOperator rho = testing::random_state(rng, 2);
    EXPECT_TRUE(MatrixNear(apply_channel(identity_channel(2), rho).matrix(), rho.matrix(), 1e-15));
    EXPECT_TRUE(MatrixNear(apply_channel(depolarizing_channel(1.0), rho).matrix(), 0.5 * identity(2), 1e-15));
    for (double p : {0.0, 0.3, 0.77}) {
        for (int j = 1; j <= 3; ++j) {
            for (int s : {1, -1}) {
                const ComplexMatrix w = signal_state(j, s).matrix();
                EXPECT_TRUE(MatrixNear(apply_channel(depolarizing_channel(p), signal_state(j, s)).matrix(),
                                       (1 - p) * w + p * 0.5 * identity(2), 1e-15));
            }
        }
    }
    EXPECT_TRUE(MatrixNear(apply_channel(depolarizing_channel(0.0), rho).matrix(), rho.matrix(), 1e-15));
}

TEST(Channels, KrausCompleteness) {
    for (const auto &c : {depolarizing_channel(0.3), amplitude_damping_channel(0.4)}) {
        ComplexMatrix sum = ComplexMatrix::Zero(2, 2);
        for (const auto &k : c.kraus_operators()) sum += k.adjoint() * k;
        EXPECT_TRUE(MatrixNear(sum, identity(2), 1e-12));
    }
}

TEST(Channels, Validation) {
    EXPECT_THROW(depolarizing_channel(-0.1), std::invalid_argument);
    EXPECT_THROW(depolarizing_channel(1.1), std::invalid_argument);
    EXPECT_THROW(amplitude_damping_channel(2.0), std::invalid_argument);
    EXPECT_THROW(QuantumChannel({0.5 * identity(2)}), std::invalid_argument);
    EXPECT_THROW(QuantumChannel({identity(2), ComplexMatrix::Zero(3, 3)}), std::invalid_argument);
    EXPECT_THROW(apply_channel(identity_channel(2), werner_state(0.5)), std::invalid_argument);
}

TEST(AmplitudeDamping, IsNonUnital) {
    const ComplexMatrix out = apply_channel(amplitude_damping_channel(0.3), maximally_mixed(2)).matrix();
    EXPECT_FALSE(approx_equal(out, 0.5 * identity(2), 1e-3));
    EXPECT_NEAR(out(0, 0).real(), 0.5 + 0.15, 1e-15);
}

TEST(Dual, Examples) {
    const DualMap id = dual_channel(identity_channel(2));
    EXPECT_TRUE(MatrixNear(id(pauli(2)), pauli(2), 0.0));
    for (double p : {0.1, 0.5}) {
        for (int j = 1; j <= 3; ++j) {
            EXPECT_TRUE(MatrixNear(dual_channel(depolarizing_channel(p))(pauli(j)), (1 - p) * pauli(j), 1e-15));
        }
    }
}

TEST(DualProperty, AdjointIdentityAndUnitality) {
    Rng rng(22);
    std::vector<QuantumChannel> channels{identity_channel(2), depolarizing_channel(0.3), amplitude_damping_channel(0.6)};
    for (int k = 0; k < 5; ++k) channels.push_back(testing::random_qubit_channel(rng, 1 + k % 4));
    for (const auto &c : channels) {
        const DualMap d = dual_channel(c);
        EXPECT_TRUE(MatrixNear(d(identity(2)), identity(2), 1e-12));
        for (int t = 0; t < 100; ++t) {
            const ComplexMatrix x = testing::random_hermitian(rng, 2), y = testing::random_hermitian(rng, 2);
            EXPECT_NEAR(std::abs(trace_product(x, c.apply(y)) - trace_product(d(x), y)), 0.0, 1e-12);
        }
    }
}

TEST(DualProperty, LiftOnLastActsOnTrailingFactor) {
    Rng rng(23);
    const QuantumChannel c = testing::random_qubit_channel(rng, 3);
    const DualMap d = dual_channel(c);
    for (Eigen::Index db : {1, 2, 3}) {
        const ComplexMatrix a = testing::random_hermitian(rng, db), x = testing::random_hermitian(rng, 2);
        EXPECT_TRUE(MatrixNear(d.lift_on_last(tensor(a, x), db), tensor(a, d(x)), 1e-12));
    }
}

TEST(Mixture, IsConvexCombination) {
    const DensityOperator m = mixture(0.25, werner_state(1), werner_state(0));
    EXPECT_TRUE(MatrixNear(m.matrix(), werner_state(0.25).matrix(), 1e-15));
    EXPECT_THROW(mixture(1.5, werner_state(1), werner_state(0)), std::invalid_argument);
}

}  // namespace
}  // namespace qref
