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
#include <string>
#include <utility>
#include <vector>

#include "qref/linalg.hpp"

namespace qref {

/// A validated density operator: Hermitian, unit trace, positive semidefinite.
class DensityOperator {
  public:
    explicit DensityOperator(ComplexMatrix matrix, double tol = kValidationTol) : matrix_(std::move(matrix)) {
        require_square(matrix_, "DensityOperator");
        if (!is_hermitian(matrix_, tol)) {
            throw std::invalid_argument("DensityOperator: matrix is not Hermitian");
        }
        if (std::abs(matrix_.trace() - Complex(1.0)) > tol) {
            throw std::invalid_argument("DensityOperator: trace is " + std::to_string(matrix_.trace().real()) +
                                        ", expected 1");
        }
        if (hermitian_eigenvalues(matrix_)(0) < -tol) {
            throw std::invalid_argument("DensityOperator: matrix has a negative eigenvalue");
        }
    }

    const ComplexMatrix &matrix() const { return matrix_; }
    Eigen::Index dim() const { return matrix_.rows(); }

    /// Tr[op rho], real part.
    double expectation(const ComplexMatrix &op) const { return trace_product(op, matrix_).real(); }

  private:
    ComplexMatrix matrix_;
};

inline DensityOperator mixture(double alpha, const DensityOperator &a, const DensityOperator &b) {
    if (alpha < 0.0 || alpha > 1.0) {
        throw std::invalid_argument("mixture: weight must lie in [0, 1]");
    }
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("mixture: dimension mismatch");
    }
    return DensityOperator(alpha * a.matrix() + (1.0 - alpha) * b.matrix());
}

inline DensityOperator maximally_mixed(Eigen::Index dim) {
    return DensityOperator(identity(dim) / static_cast<double>(dim));
}

/// Positive operators summing to the identity; element k is outcome label k.
class Povm {
  public:
    explicit Povm(std::vector<ComplexMatrix> elements, double tol = kValidationTol) : elements_(std::move(elements)) {
        if (elements_.empty()) {
            throw std::invalid_argument("Povm: at least one element required");
        }
        const Eigen::Index d = elements_.front().rows();
        ComplexMatrix sum = ComplexMatrix::Zero(d, d);
        for (std::size_t k = 0; k < elements_.size(); ++k) {
            const ComplexMatrix &e = elements_[k];
            require_square(e, "Povm");
            if (e.rows() != d) {
                throw std::invalid_argument("Povm: elements have different dimensions");
            }
            if (!is_hermitian(e, tol) || !is_positive_semidefinite(e, tol)) {
                throw std::invalid_argument("Povm: element " + std::to_string(k) + " is not positive semidefinite");
            }
            sum += e;
        }
        if (!approx_equal(sum, identity(d), tol)) {
            throw std::invalid_argument("Povm: elements do not sum to the identity");
        }
    }

    const std::vector<ComplexMatrix> &elements() const { return elements_; }
    const ComplexMatrix &operator[](std::size_t k) const { return elements_.at(k); }
    std::size_t size() const { return elements_.size(); }
    Eigen::Index dim() const { return elements_.front().rows(); }

  private:
    std::vector<ComplexMatrix> elements_;
};

/// Two-outcome projective measurement of a +-1 valued observable; element 0 is
/// the +1 outcome.
inline Povm sign_measurement(const ComplexMatrix &observable) {
    const Eigen::Index d = observable.rows();
    return Povm({0.5 * (identity(d) + observable), 0.5 * (identity(d) - observable)});
}

/// The Heisenberg-picture adjoint X -> sum_k K_k^dagger X K_k of a channel.
class DualMap {
  public:
    explicit DualMap(std::vector<ComplexMatrix> kraus) : kraus_(std::move(kraus)) {}

    ComplexMatrix operator()(const ComplexMatrix &x) const {
        const Eigen::Index d = kraus_.front().cols();
        ComplexMatrix out = ComplexMatrix::Zero(d, d);
        for (const auto &k : kraus_) {
            out += k.adjoint() * x * k;
        }
        return out;
    }

    /// (I_B (x) phi*)(x) for an operator on H_B (x) H_C where phi* acts on C.
    ComplexMatrix lift_on_last(const ComplexMatrix &x, Eigen::Index leading_dim) const {
        const ComplexMatrix id = identity(leading_dim);
        const Eigen::Index d = leading_dim * kraus_.front().cols();
        ComplexMatrix out = ComplexMatrix::Zero(d, d);
        for (const auto &k : kraus_) {
            const ComplexMatrix lifted = tensor(id, k);
            out += lifted.adjoint() * x * lifted;
        }
        return out;
    }

    const std::vector<ComplexMatrix> &kraus_operators() const { return kraus_; }

  private:
    std::vector<ComplexMatrix> kraus_;
};

/// A CPTP map in Kraus form.
class QuantumChannel {
  public:
    explicit QuantumChannel(std::vector<ComplexMatrix> kraus, double tol = kValidationTol) : kraus_(std::move(kraus)) {
        if (kraus_.empty()) {
            throw std::invalid_argument("QuantumChannel: at least one Kraus operator required");
        }
        const Eigen::Index in = kraus_.front().cols();
        const Eigen::Index out = kraus_.front().rows();
        ComplexMatrix completeness = ComplexMatrix::Zero(in, in);
        for (const auto &k : kraus_) {
            if (k.cols() != in || k.rows() != out) {
                throw std::invalid_argument("QuantumChannel: Kraus operators have inconsistent shapes");
            }
            completeness += k.adjoint() * k;
        }
        if (!approx_equal(completeness, identity(in), tol)) {
            throw std::invalid_argument("QuantumChannel: Kraus operators are not trace preserving");
        }
    }

    const std::vector<ComplexMatrix> &kraus_operators() const { return kraus_; }
    Eigen::Index input_dim() const { return kraus_.front().cols(); }
    Eigen::Index output_dim() const { return kraus_.front().rows(); }

    ComplexMatrix apply(const ComplexMatrix &rho) const {
        if (rho.rows() != input_dim() || rho.cols() != input_dim()) {
            throw std::invalid_argument("QuantumChannel: input dimension mismatch");
        }
        ComplexMatrix out = ComplexMatrix::Zero(output_dim(), output_dim());
        for (const auto &k : kraus_) {
            out += k * rho * k.adjoint();
        }
        return out;
    }

  private:
    std::vector<ComplexMatrix> kraus_;
};

inline DensityOperator apply_channel(const QuantumChannel &c, const DensityOperator &rho) {
    return DensityOperator(c.apply(rho.matrix()));
}

inline DualMap dual_channel(const QuantumChannel &c) {
    return DualMap(c.kraus_operators());
}

inline QuantumChannel identity_channel(Eigen::Index dim = 2) {
    return QuantumChannel({identity(dim)});
}

/// rho -> (1 - p) rho + p I/2 on a qubit.
inline QuantumChannel depolarizing_channel(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("depolarizing_channel: p must lie in [0, 1]");
    }
    std::vector<ComplexMatrix> kraus;
    kraus.push_back(std::sqrt(1.0 - 0.75 * p) * identity(2));
    for (int j = 1; j <= 3; ++j) {
        kraus.push_back(std::sqrt(0.25 * p) * pauli(j));
    }
    return QuantumChannel(std::move(kraus));
}

/// Non-unital qubit channel decaying |1> to |0> with probability gamma.
inline QuantumChannel amplitude_damping_channel(double gamma) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
        throw std::invalid_argument("amplitude_damping_channel: gamma must lie in [0, 1]");
    }
    ComplexMatrix k0 = ComplexMatrix::Zero(2, 2);
    ComplexMatrix k1 = ComplexMatrix::Zero(2, 2);
    k0(0, 0) = 1.0;
    k0(1, 1) = std::sqrt(1.0 - gamma);
    k1(0, 1) = std::sqrt(gamma);
    return QuantumChannel({k0, k1});
}

/// |Psi-><Psi-| = (1/4)(1 (x) 1 - sum_j sigma_j (x) sigma_j).
inline ComplexMatrix singlet_projector() {
    ComplexMatrix out = identity(4);
    for (int j = 1; j <= 3; ++j) {
        out -= tensor(pauli(j), pauli(j));
    }
    return 0.25 * out;
}

/// Two-qubit Werner state W |Psi-><Psi-| + (1 - W) 1/4, valid for -1/3 <= W <= 1.
inline DensityOperator werner_state(double w) {
    if (!(w >= -1.0 / 3.0 - kIdentityTol && w <= 1.0 + kIdentityTol)) {
        throw std::invalid_argument("werner_state: W must lie in [-1/3, 1], got " + std::to_string(w));
    }
    return DensityOperator(w * singlet_projector() + (1.0 - w) * 0.25 * identity(4));
}

inline void require_signal_label(int j, int s) {
    if (j < 1 || j > 3) {
        throw std::invalid_argument("signal label j must be 1, 2 or 3, got " + std::to_string(j));
    }
    if (s != 1 && s != -1) {
        throw std::invalid_argument("signal sign s must be +1 or -1, got " + std::to_string(s));
    }
}

/// The referee's intended signal (1/2)(1 + s sigma_j).
inline DensityOperator signal_state(int j, int s) {
    require_signal_label(j, s);
    return DensityOperator(0.5 * (identity(2) + static_cast<double>(s) * pauli(j)));
}

}  // namespace qref
