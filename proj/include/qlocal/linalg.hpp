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

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <string_view>

namespace qlocal {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Mat2 = Eigen::Matrix2cd;
using BlochVector = Eigen::Vector3d;

namespace tol {
/// Structural predicates (hermiticity, tracelessness, "is zero").
inline constexpr double kStructural = 1e-10;
/// Arithmetic identities that hold up to roundoff.
inline constexpr double kIdentity = 1e-12;
}  // namespace tol

inline constexpr int kMaxQubits = 12;

const Mat2 &pauli_i();
const Mat2 &pauli_x();
const Mat2 &pauli_y();
const Mat2 &pauli_z();
/// Pauli matrix by index 0..3 = I, X, Y, Z.
const Mat2 &pauli(int index);

/// Number of qubits N for a 2^N dimension; throws on anything else.
int qubits_for_dimension(Eigen::Index dim);

double max_abs(const CMatrix &m);
bool is_hermitian(const CMatrix &m, double tolerance = tol::kIdentity);
bool is_anti_hermitian(const CMatrix &m, double tolerance = tol::kIdentity);
bool is_unitary(const CMatrix &m, double tolerance = tol::kIdentity);

/// Pure state of N qubits. Qubit 1 is the most significant bit of the basis
/// index, i.e. |x1 x2 ... xN> has index sum_j x_j 2^(N-j).
class StateVector {
   public:
    StateVector(int nqubits, CVector amplitudes);

    /// Computational basis state |index>.
    static StateVector basis(int nqubits, Eigen::Index index);

    int nqubits() const { return nqubits_; }
    Eigen::Index dim() const { return amplitudes_.size(); }
    const CVector &amplitudes() const { return amplitudes_; }
    Complex operator[](Eigen::Index i) const { return amplitudes_[i]; }

   private:
    int nqubits_;
    CVector amplitudes_;
};

/// n_x X + n_y Y + n_z Z for a unit axis.
Mat2 pauli_axis_op(const BlochVector &axis);

/// Basis change whose first/second columns are the +1/-1 eigenvectors of
/// axis . sigma, so U Z U^dagger = axis . sigma.
Mat2 axis_basis(const BlochVector &axis);

struct QubitFactor {
    int qubit;  // 1-based
    Mat2 op;
};

/// Tensor product of the listed single-qubit factors with identity elsewhere.
CMatrix embed_operators(std::span<const QubitFactor> factors, int nqubits);

/// Dense matrix of a Pauli string such as "XIZ" (character j acts on qubit j).
CMatrix pauli_string_matrix(std::string_view pauli);

CMatrix kron(const CMatrix &a, const CMatrix &b);

/// Trace over every qubit except j (1-based).
Mat2 partial_trace_to_qubit(const CMatrix &op, int qubit);

enum class BlochKind { Hermitian, AntiHermitian };

struct BlochDecomposition {
    BlochKind kind;
    BlochVector a;  // not normalized
};

/// O = a.sigma (hermitian) or O = i a.sigma (anti-hermitian) for traceless O.
BlochDecomposition bloch_decompose(const Mat2 &op);

/// The a-vector for a known kind, without classifying the matrix first. Near
/// zero matrices pass both predicates, so callers that know the kind use this.
BlochVector bloch_vector(const Mat2 &op, BlochKind kind);

/// exp(-i s H) for Hermitian H, through its eigendecomposition.
CMatrix unitary_evolution(const CMatrix &hamiltonian, double s);

/// Applies a 2x2 matrix to qubit j of a state (or of every column of a matrix).
void apply_local_inplace(CMatrix &target, int qubit, int nqubits, const Mat2 &op);
void apply_local_inplace(CVector &target, int qubit, int nqubits, const Mat2 &op);

/// U_j^dagger M U_j where U_j acts on qubit j only.
CMatrix conjugate_local(const CMatrix &m, int qubit, int nqubits, const Mat2 &u);

/// In-place Walsh-Hadamard transform: out[a] = sum_x in[x] (-1)^popcount(a & x).
void walsh_hadamard_inplace(std::span<Complex> values);

}  // namespace qlocal
