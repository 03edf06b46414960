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
#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

/// Dense complex linear algebra for small Hilbert spaces (dimension <= 16).
///
/// Multipartite operators are always laid out with factors in the order
/// A (Alice), B (Bob's share), C (the referee's signal system), so the
/// Kronecker product `tensor(a, b)` places `a` on the leading factor.
namespace qref {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kValidationTol = 1e-10;
inline constexpr double kIdentityTol = 1e-12;

inline constexpr Complex kI{0.0, 1.0};

inline void require_square(const ComplexMatrix &m, const char *what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw std::invalid_argument(std::string(what) + ": expected a non-empty square matrix, got " +
                                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
}

inline ComplexMatrix identity(Eigen::Index dim) {
    return ComplexMatrix::Identity(dim, dim);
}

inline ComplexMatrix dagger(const ComplexMatrix &m) {
    return m.adjoint();
}

/// Kronecker product with `a` on the leading (slower-varying) factor.
inline ComplexMatrix tensor(const ComplexMatrix &a, const ComplexMatrix &b) {
    const Eigen::Index ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
    ComplexMatrix out(ar * br, ac * bc);
    for (Eigen::Index i = 0; i < ar; ++i) {
        for (Eigen::Index j = 0; j < ac; ++j) {
            out.block(i * br, j * bc, br, bc) = a(i, j) * b;
        }
    }
    return out;
}

inline ComplexMatrix tensor(std::initializer_list<ComplexMatrix> factors) {
    if (factors.size() == 0) {
        return identity(1);
    }
    auto it = factors.begin();
    ComplexMatrix out = *it;
    for (++it; it != factors.end(); ++it) {
        out = tensor(out, *it);
    }
    return out;
}

/// Traces out factor `traced_factor` of an operator on the product space
/// with factor dimensions `dims`.
inline ComplexMatrix partial_trace(const ComplexMatrix &m, std::span<const std::size_t> dims,
                                   std::size_t traced_factor) {
    require_square(m, "partial_trace");
    if (dims.empty() || traced_factor >= dims.size()) {
        throw std::invalid_argument("partial_trace: traced factor index out of range");
    }
    const std::size_t total = std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
    if (total != static_cast<std::size_t>(m.rows())) {
        throw std::invalid_argument("partial_trace: product of factor dims (" + std::to_string(total) +
                                    ") does not match matrix dim (" + std::to_string(m.rows()) + ")");
    }
    // Index = (outer, traced, inner) in row-major factor order.
    std::size_t outer = 1, inner = 1;
    for (std::size_t k = 0; k < traced_factor; ++k) outer *= dims[k];
    for (std::size_t k = traced_factor + 1; k < dims.size(); ++k) inner *= dims[k];
    const std::size_t t = dims[traced_factor];
    const auto kept = static_cast<Eigen::Index>(outer * inner);

    ComplexMatrix out = ComplexMatrix::Zero(kept, kept);
    for (std::size_t o1 = 0; o1 < outer; ++o1) {
        for (std::size_t i1 = 0; i1 < inner; ++i1) {
            for (std::size_t o2 = 0; o2 < outer; ++o2) {
                for (std::size_t i2 = 0; i2 < inner; ++i2) {
                    Complex acc = 0.0;
                    for (std::size_t k = 0; k < t; ++k) {
                        acc += m(static_cast<Eigen::Index>((o1 * t + k) * inner + i1),
                                 static_cast<Eigen::Index>((o2 * t + k) * inner + i2));
                    }
                    out(static_cast<Eigen::Index>(o1 * inner + i1), static_cast<Eigen::Index>(o2 * inner + i2)) = acc;
                }
            }
        }
    }
    return out;
}

inline ComplexMatrix partial_trace(const ComplexMatrix &m, std::initializer_list<std::size_t> dims,
                                   std::size_t traced_factor) {
    return partial_trace(m, std::span<const std::size_t>(dims.begin(), dims.size()), traced_factor);
}

/// Tr[a b] without forming the product.
inline Complex trace_product(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.cols() != b.rows() || a.rows() != b.cols()) {
        throw std::invalid_argument("trace_product: incompatible shapes");
    }
    Complex acc = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index k = 0; k < a.cols(); ++k) {
            acc += a(i, k) * b(k, i);
        }
    }
    return acc;
}

inline bool approx_equal(const ComplexMatrix &a, const ComplexMatrix &b, double tol = kValidationTol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        return false;
    }
    return (a - b).cwiseAbs().maxCoeff() <= tol;
}

inline bool is_hermitian(const ComplexMatrix &m, double tol = kValidationTol) {
    return m.rows() == m.cols() && approx_equal(m, m.adjoint(), tol);
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
inline RealVector hermitian_eigenvalues(const ComplexMatrix &m) {
    require_square(m, "hermitian_eigenvalues");
    const ComplexMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
}

inline bool is_positive_semidefinite(const ComplexMatrix &m, double tol = kValidationTol) {
    require_square(m, "is_positive_semidefinite");
    if (!is_hermitian(m, tol)) {
        throw std::invalid_argument("is_positive_semidefinite: matrix is not Hermitian");
    }
    return hermitian_eigenvalues(m)(0) >= -tol;
}

/// Pauli matrix sigma_j for j in {1, 2, 3}.
inline ComplexMatrix pauli(int j) {
    ComplexMatrix s(2, 2);
    switch (j) {
    case 1:
        s << 0.0, 1.0, 1.0, 0.0;
        break;
    case 2:
        s << 0.0, -kI, kI, 0.0;
        break;
    case 3:
        s << 1.0, 0.0, 0.0, -1.0;
        break;
    default:
        throw std::invalid_argument("pauli: axis index must be 1, 2 or 3, got " + std::to_string(j));
    }
    return s;
}

/// A qubit operator mu * (1 + m . sigma).
struct BlochVector {
    std::array<double, 3> m{0.0, 0.0, 0.0};
    double mu = 0.5;

    double norm() const { return std::sqrt(m[0] * m[0] + m[1] * m[1] + m[2] * m[2]); }
    double component_sum() const { return m[0] + m[1] + m[2]; }
};

inline ComplexMatrix bloch_operator(const BlochVector &b) {
    ComplexMatrix out = identity(2);
    for (int j = 1; j <= 3; ++j) {
        out += b.m[static_cast<std::size_t>(j - 1)] * pauli(j);
    }
    return b.mu * out;
}

/// Real Bloch components Tr[sigma_j rho] of a qubit operator.
inline std::array<double, 3> bloch_components(const ComplexMatrix &rho) {
    if (rho.rows() != 2 || rho.cols() != 2) {
        throw std::invalid_argument("bloch_components: expected a qubit operator");
    }
    return {trace_product(pauli(1), rho).real(), trace_product(pauli(2), rho).real(),
            trace_product(pauli(3), rho).real()};
}

/// Inverse square root of a positive definite Hermitian matrix.
inline ComplexMatrix inverse_sqrt_positive(const ComplexMatrix &m) {
    require_square(m, "inverse_sqrt_positive");
    const ComplexMatrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    const RealVector &ev = solver.eigenvalues();
    if (ev(0) <= 0.0) {
        throw std::invalid_argument("inverse_sqrt_positive: matrix is not positive definite");
    }
    const RealVector inv = ev.cwiseSqrt().cwiseInverse();
    return solver.eigenvectors() * inv.asDiagonal() * solver.eigenvectors().adjoint();
}

}  // namespace qref
