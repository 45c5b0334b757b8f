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

#include <functional>
#include <variant>
#include <vector>

#include "qlocal/linalg.hpp"

namespace qlocal {

/// |psi(lambda)> = exp(-i lambda t H) |psi0>.
struct HamiltonianEncoding {
    CMatrix hamiltonian;
    double time = 1.0;
};

/// Arbitrary pure-state family. Without an analytic derivative the state
/// derivative falls back to central differences with step 1e-6 max(1, |lambda|).
struct GenericFamily {
    std::function<CVector(double)> state;
    std::function<CVector(double)> derivative;  // may be empty
    bool richardson = false;                    // 4th-order extrapolation of the difference
};

using Encoding = std::variant<HamiltonianEncoding, GenericFamily>;

/// A single-parameter pure-state estimation model. Immutable after construction.
class Model {
   public:
    Model(StateVector probe, HamiltonianEncoding encoding);
    Model(StateVector probe, GenericFamily family);

    int nqubits() const { return probe_.nqubits(); }
    const StateVector &probe() const { return probe_; }
    const Encoding &encoding() const { return encoding_; }

    /// Null for generic families.
    const HamiltonianEncoding *hamiltonian() const { return std::get_if<HamiltonianEncoding>(&encoding_); }

   private:
    StateVector probe_;
    Encoding encoding_;
};

/// Encoded state and its (unnormalized) lambda-derivative at one point.
struct StateJet {
    StateVector state;
    CVector derivative;
};

/// exp(-i lambda t H)|psi0>; requires a Hamiltonian encoding.
StateVector evolve_state(const Model &model, double lambda);

/// |psi(lambda)> for either encoding.
StateVector encoded_state(const Model &model, double lambda);

CVector state_derivative(const Model &model, double lambda);

StateJet state_jet(const Model &model, double lambda);

/// 4 (<d psi|d psi> - |<psi|d psi>|^2).
double qfi(const Model &model, double lambda);
double qfi(const StateJet &jet);

/// Pure-state SLD, L = 2 d(rho) = 2 (|d psi><psi| + |psi><d psi|).
CMatrix sld(const Model &model, double lambda);
CMatrix sld(const StateJet &jet);

/// M = [rho, L]: anti-hermitian, traceless, rank <= 2 with eigenvalues
/// +-i sqrt(QFI).
class MMatrix {
   public:
    explicit MMatrix(CMatrix matrix);

    int nqubits() const { return nqubits_; }
    const CMatrix &matrix() const { return matrix_; }
    /// Spectral norm below 1e-10: every measurement saturates.
    bool is_trivial() const;

   private:
    int nqubits_;
    CMatrix matrix_;
};

MMatrix m_matrix(const Model &model, double lambda);
MMatrix m_matrix(const StateJet &jet);

/// G_lambda(t) = i U^dagger d_lambda U.
struct Generator {
    CMatrix matrix;
};

/// Constant-Hamiltonian fast path: G = t H.
Generator metrological_generator(const Model &model);

/// One piece of a piecewise-constant schedule, H_lambda(s) = base + lambda slope
/// for a span of `duration`.
struct ScheduleSegment {
    double duration;
    CMatrix base;
    CMatrix slope;
};

struct PiecewiseSchedule {
    std::vector<ScheduleSegment> segments;

    int nqubits() const;
    double total_time() const;
};

/// U_lambda at the end of the schedule.
CMatrix schedule_unitary(const PiecewiseSchedule &schedule, double lambda);

/// G = int_0^t U^dagger(s) d_lambda H(s) U(s) ds by the composite midpoint
/// rule with `steps_per_segment` nodes per segment.
Generator metrological_generator(const PiecewiseSchedule &schedule, double lambda, int steps_per_segment);

}  // namespace qlocal
