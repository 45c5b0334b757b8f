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

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qlocal/linalg.hpp"
#include "qlocal/model.hpp"

namespace qlocal {

/// One unit Bloch axis per qubit; axes()[j-1] belongs to qubit j.
class AxisAssignment {
   public:
    explicit AxisAssignment(std::vector<BlochVector> axes);

    static AxisAssignment uniform(int nqubits, const BlochVector &axis);
    static AxisAssignment computational(int nqubits) { return uniform(nqubits, BlochVector::UnitZ()); }

    int nqubits() const { return static_cast<int>(axes_.size()); }
    const std::vector<BlochVector> &axes() const { return axes_; }
    const BlochVector &axis(int qubit) const { return axes_.at(static_cast<size_t>(qubit - 1)); }

   private:
    std::vector<BlochVector> axes_;
};

/// Tr[M A_alpha] for every subset alpha, A_alpha = prod_{j in alpha} n_j.sigma_j.
/// Index alpha is a bitmask in the basis-index convention (qubit j is bit
/// N-j); entry 0 is Tr M.
std::vector<Complex> hoc_traces(const MMatrix &m, const AxisAssignment &axes);

/// max over non-empty alpha of |Tr[M A_alpha]|.
double hoc_residual(const MMatrix &m, const AxisAssignment &axes);

/// m^(j) with m^(j).sigma = -i Tr_{other qubits}(M); a level-1 admissible
/// axis is perpendicular to it. Zero vectors mean "unconstrained".
std::vector<BlochVector> single_qubit_plane_vectors(const MMatrix &m);

/// Orthonormal pair spanning the plane perpendicular to a common axis. For
/// axes parallel to z the pair is (x, y), so planar angles are the usual
/// azimuths.
struct PlanarFrame {
    BlochVector e1;
    BlochVector e2;

    static PlanarFrame perpendicular_to(const BlochVector &normal);
    BlochVector axis_at(double angle) const { return std::cos(angle) * e1 + std::sin(angle) * e2; }
    double angle_of(const BlochVector &v) const { return std::atan2(v.dot(e2), v.dot(e1)); }
};

/// T_jk = 1/2 [<{h, P_j Q_k}>_lambda] for P, Q in {e1.sigma, e2.sigma} and
/// h = H - <psi0|H|psi0>. On unitary-encoding models whose m-vectors are
/// normal to the frame, Tr[M A_jk] = 4 i t <a_j|T_jk|a_k> for planar axes.
struct PairCoupling {
    int j;
    int k;
    Eigen::Matrix2d t;
};

PairCoupling pair_coupling(const Model &model, double lambda, int j, int k);
PairCoupling pair_coupling(const Model &model, double lambda, int j, int k, const PlanarFrame &frame);

enum class HocStatus {
    Feasible,
    Inconclusive,          // residual between the feasibility and infeasibility thresholds
    NumericallyInfeasible, // best residual above 1e-6; not a proof
    CertifiedInfeasible,   // an analytic certificate rules out every local measurement
};

const char *to_string(HocStatus status);

struct HocReport {
    HocStatus status = HocStatus::Inconclusive;
    std::optional<AxisAssignment> axes;  // the best axes found (set whenever a search ran)
    double residual = 0.0;
    std::string method;
    std::optional<std::string> certificate;
    std::vector<double> planar_angles;  // filled by the three-qubit planar pipeline
    int restarts_used = 0;

    bool feasible() const { return status == HocStatus::Feasible; }
};

struct HocOptions {
    int restarts = 20;
    std::uint64_t seed = 0;
    int max_iter = 200;
    double feasibility_threshold = 1e-9;
    double infeasibility_threshold = 1e-6;
};

/// Multistart Levenberg-Marquardt over per-qubit axis angles minimizing
/// sum_alpha |Tr M A_alpha|^2. Qubits with a nonzero m-vector are searched
/// on the circle perpendicular to it, the rest on the full sphere.
HocReport hoc_solve_numeric(const MMatrix &m, const HocOptions &options = {});

/// Closed-form three-qubit planar construction through the T-matrix chain.
/// Falls back to hoc_solve_numeric when any structural precondition fails.
HocReport solve_planar_three_qubit(const Model &model, double lambda, const HocOptions &fallback = {});

/// Cov(A_alpha^(H), G) on psi0 for every alpha (index convention as
/// hoc_traces, entry 0 is identically zero), A^(H) = U^dagger A U.
std::vector<double> covariance_terms(const StateVector &probe, const Generator &generator,
                                     const AxisAssignment &axes, const CMatrix &unitary);

/// max over non-empty alpha of |Cov(A_alpha^(H), G)|. On unitary encodings
/// Tr[M A_alpha] = 4 i Cov(A_alpha^(H), G).
double covariance_check(const StateVector &probe, const Generator &generator, const AxisAssignment &axes,
                        const CMatrix &unitary);

/// Pair constraint cos_coeff cos(b_j - b_k) + sin_coeff sin(b_j - b_k) = 0 on
/// planar angles, plus the size of the part that is not a function of the
/// angle difference.
struct PairConstraint {
    int j;
    int k;
    double cos_coeff;
    double sin_coeff;
    double non_difference_part;
};

struct PlanarCertificate {
    bool infeasible = false;
    std::vector<PairConstraint> pairs;
    std::string note;
};

/// Analytic test on the second-order covariance conditions when every
/// qubit is forced into a common plane. Empty when the reduction does not
/// apply (some m-vector is zero, not parallel, or a pair term depends on
/// more than b_j - b_k).
std::optional<PlanarCertificate> planar_pair_certificate(const StateVector &probe, const Generator &generator,
                                                         const CMatrix &unitary, const MMatrix &m);

}  // namespace qlocal
