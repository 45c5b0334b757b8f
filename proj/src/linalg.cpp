// Copyright 2026 The qlocal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qlocal/linalg.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <string>
#include <vector>

#include "qlocal/error.hpp"

namespace qlocal {

namespace {

constexpr Complex kI{0.0, 1.0};

std::array<Mat2, 4> make_paulis() {
    std::array<Mat2, 4> p;
    p[0] << 1, 0, 0, 1;
    p[1] << 0, 1, 1, 0;
    p[2] << 0, -kI, kI, 0;
    p[3] << 1, 0, 0, -1;
    return p;
}

const std::array<Mat2, 4> &paulis() {
    static const std::array<Mat2, 4> p = make_paulis();
    return p;
}

}  // namespace

const Mat2 &pauli_i() { return paulis()[0]; }
const Mat2 &pauli_x() { return paulis()[1]; }
const Mat2 &pauli_y() { return paulis()[2]; }
const Mat2 &pauli_z() { return paulis()[3]; }

const Mat2 &pauli(int index) {
    require(index >= 0 && index < 4, "pauli index must be in 0..3");
    return paulis()[static_cast<size_t>(index)];
}

int qubits_for_dimension(Eigen::Index dim) {
    if (dim < 2 || !std::has_single_bit(static_cast<unsigned long long>(dim))) {
        fail(ErrorKind::Contract, "dimension " + std::to_string(dim) + " is not 2^N with N >= 1");
    }
    int n = std::countr_zero(static_cast<unsigned long long>(dim));
    require(n <= kMaxQubits, "more than " + std::to_string(kMaxQubits) + " qubits is not supported");
    return n;
}

double max_abs(const CMatrix &m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool is_hermitian(const CMatrix &m, double tolerance) {
    return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tolerance;
}

bool is_anti_hermitian(const CMatrix &m, double tolerance) {
    return m.rows() == m.cols() && max_abs(m + m.adjoint()) <= tolerance;
}

bool is_unitary(const CMatrix &m, double tolerance) {
    return m.rows() == m.cols() &&
           max_abs(m.adjoint() * m - CMatrix::Identity(m.rows(), m.cols())) <= tolerance;
}

StateVector::StateVector(int nqubits, CVector amplitudes)
    : nqubits_(nqubits), amplitudes_(std::move(amplitudes)) {
    require(nqubits >= 1 && nqubits <= kMaxQubits, "qubit count out of range");
    if (amplitudes_.size() != (Eigen::Index{1} << nqubits)) {
        fail(ErrorKind::Contract, "state of " + std::to_string(nqubits) + " qubits needs " +
                                      std::to_string(1 << nqubits) + " amplitudes, got " +
                                      std::to_string(amplitudes_.size()));
    }
    double norm = amplitudes_.norm();
    if (std::abs(norm - 1.0) > tol::kStructural) {
        fail(ErrorKind::Invariant, "state vector is not normalized (norm " + std::to_string(norm) + ")");
    }
}

StateVector StateVector::basis(int nqubits, Eigen::Index index) {
    CVector v = CVector::Zero(Eigen::Index{1} << nqubits);
    require(index >= 0 && index < v.size(), "basis index out of range");
    v[index] = 1.0;
    return StateVector(nqubits, std::move(v));
}

Mat2 pauli_axis_op(const BlochVector &axis) {
    if (std::abs(axis.norm() - 1.0) > tol::kIdentity) {
        fail(ErrorKind::Contract, "measurement axis must have unit norm");
    }
    return axis.x() * pauli_x() + axis.y() * pauli_y() + axis.z() * pauli_z();
}

Mat2 axis_basis(const BlochVector &axis) {
    Mat2 plus_projector = 0.5 * (pauli_i() + pauli_axis_op(axis));
    Eigen::Vector2cd v = plus_projector.col(0).norm() >= plus_projector.col(1).norm()
                             ? Eigen::Vector2cd(plus_projector.col(0))
                             : Eigen::Vector2cd(plus_projector.col(1));
    v.normalize();
    Mat2 u;
    u << v[0], -std::conj(v[1]), v[1], std::conj(v[0]);
    return u;
}

CMatrix kron(const CMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

CMatrix embed_operators(std::span<const QubitFactor> factors, int nqubits) {
    require(nqubits >= 1 && nqubits <= kMaxQubits, "qubit count out of range");
    std::vector<const Mat2 *> slot(static_cast<size_t>(nqubits), nullptr);
    for (const auto &f : factors) {
        if (f.qubit < 1 || f.qubit > nqubits) {
            fail(ErrorKind::Contract, "qubit index " + std::to_string(f.qubit) + " out of range 1.." +
                                          std::to_string(nqubits));
        }
        auto &s = slot[static_cast<size_t>(f.qubit - 1)];
        if (s != nullptr) {
            fail(ErrorKind::Contract, "duplicate qubit index " + std::to_string(f.qubit));
        }
        s = &f.op;
    }
    CMatrix out = CMatrix::Identity(1, 1);
    for (const Mat2 *s : slot) {
        out = kron(out, s != nullptr ? *s : pauli_i());
    }
    return out;
}

CMatrix pauli_string_matrix(std::string_view pauli_string) {
    int n = static_cast<int>(pauli_string.size());
    require(n >= 1 && n <= kMaxQubits, "pauli string length out of range");
    CMatrix out = CMatrix::Identity(1, 1);
    for (char c : pauli_string) {
        int k = 0;
        switch (c) {
            case 'I': k = 0; break;
            case 'X': k = 1; break;
            case 'Y': k = 2; break;
            case 'Z': k = 3; break;
            default:
                fail(ErrorKind::Parse, std::string("invalid pauli character '") + c + "'");
        }
        out = kron(out, pauli(k));
    }
    return out;
}

Mat2 partial_trace_to_qubit(const CMatrix &op, int qubit) {
    require(op.rows() == op.cols(), "partial trace needs a square matrix");
    int n = qubits_for_dimension(op.rows());
    require(qubit >= 1 && qubit <= n, "qubit index out of range");
    const Eigen::Index bit = Eigen::Index{1} << (n - qubit);
    Mat2 out = Mat2::Zero();
    for (Eigen::Index x = 0; x < op.rows(); ++x) {
        if (x & bit) {
            continue;
        }
        Eigen::Index y = x | bit;
        out(0, 0) += op(x, x);
        out(0, 1) += op(x, y);
        out(1, 0) += op(y, x);
        out(1, 1) += op(y, y);
    }
    return out;
}

BlochVector bloch_vector(const Mat2 &op, BlochKind kind) {
    BlochVector a;
    for (int k = 0; k < 3; ++k) {
        Complex c = 0.5 * (op * pauli(k + 1)).trace();
        a[k] = kind == BlochKind::Hermitian ? c.real() : (-kI * c).real();
    }
    return a;
}

BlochDecomposition bloch_decompose(const Mat2 &op) {
    if (std::abs(op.trace()) >= tol::kStructural) {
        fail(ErrorKind::Contract, "bloch_decompose needs a traceless matrix");
    }
    BlochKind kind;
    if (is_hermitian(op, tol::kStructural)) {
        kind = BlochKind::Hermitian;
    } else if (is_anti_hermitian(op, tol::kStructural)) {
        kind = BlochKind::AntiHermitian;
    } else {
        fail(ErrorKind::Contract, "bloch_decompose needs a hermitian or anti-hermitian matrix");
    }
    return {kind, bloch_vector(op, kind)};
}

CMatrix unitary_evolution(const CMatrix &hamiltonian, double s) {
    if (!is_hermitian(hamiltonian, tol::kStructural)) {
        fail(ErrorKind::Invariant, "hamiltonian is not hermitian");
    }
    CMatrix h = 0.5 * (hamiltonian + hamiltonian.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(h);
    CVector phases = (eig.eigenvalues().cast<Complex>() * (-kI * s)).array().exp();
    return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

namespace {

template <typename Target>
void apply_local_impl(Target &target, int qubit, int nqubits, const Mat2 &op) {
    require(target.rows() == (Eigen::Index{1} << nqubits), "dimension mismatch in local apply");
    require(qubit >= 1 && qubit <= nqubits, "qubit index out of range");
    const Eigen::Index bit = Eigen::Index{1} << (nqubits - qubit);
    for (Eigen::Index x = 0; x < target.rows(); ++x) {
        if (x & bit) {
            continue;
        }
        Eigen::Index y = x | bit;
        for (Eigen::Index c = 0; c < target.cols(); ++c) {
            Complex a = target(x, c);
            Complex b = target(y, c);
            target(x, c) = op(0, 0) * a + op(0, 1) * b;
            target(y, c) = op(1, 0) * a + op(1, 1) * b;
        }
    }
}

}  // namespace

void apply_local_inplace(CMatrix &target, int qubit, int nqubits, const Mat2 &op) {
    apply_local_impl(target, qubit, nqubits, op);
}

void apply_local_inplace(CVector &target, int qubit, int nqubits, const Mat2 &op) {
    apply_local_impl(target, qubit, nqubits, op);
}

CMatrix conjugate_local(const CMatrix &m, int qubit, int nqubits, const Mat2 &u) {
    CMatrix out = m;
    Mat2 ud = u.adjoint();
    apply_local_inplace(out, qubit, nqubits, ud);
    CMatrix t = out.adjoint();
    apply_local_inplace(t, qubit, nqubits, ud);
    return t.adjoint();
}

void walsh_hadamard_inplace(std::span<Complex> values) {
    const size_t n = values.size();
    require(std::has_single_bit(n), "walsh transform length must be a power of two");
    for (size_t h = 1; h < n; h <<= 1) {
        for (size_t i = 0; i < n; i += h << 1) {
            for (size_t j = i; j < i + h; ++j) {
                Complex a = values[j];
                Complex b = values[j + h];
                values[j] = a + b;
                values[j + h] = a - b;
            }
        }
    }
}

}  // namespace qlocal
