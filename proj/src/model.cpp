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

#include "qlocal/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qlocal/error.hpp"

namespace qlocal {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_hamiltonian(const CMatrix &h, Eigen::Index dim, const char *what) {
    if (h.rows() != dim || h.cols() != dim) {
        fail(ErrorKind::Contract, std::string(what) + " has the wrong dimension");
    }
    if (!is_hermitian(h, tol::kStructural)) {
        fail(ErrorKind::Invariant, std::string(what) + " is not hermitian");
    }
}

CVector query_family(const GenericFamily &family, int nqubits, double lambda) {
    CVector v;
    try {
        v = family.state(lambda);
    } catch (const Error &) {
        throw;
    } catch (const std::exception &e) {
        fail(ErrorKind::Invariant, "state provider failed at lambda=" + std::to_string(lambda) + ": " + e.what());
    }
    if (v.size() != (Eigen::Index{1} << nqubits)) {
        fail(ErrorKind::Invariant, "state provider returned the wrong dimension");
    }
    if (!std::isfinite(v.norm()) || std::abs(v.norm() - 1.0) > tol::kStructural) {
        fail(ErrorKind::Invariant, "state provider returned an unnormalized state at lambda=" + std::to_string(lambda));
    }
    return v;
}

CVector central_difference(const GenericFamily &family, int nqubits, double lambda, double h) {
    return (query_family(family, nqubits, lambda + h) - query_family(family, nqubits, lambda - h)) / (2.0 * h);
}

}  // namespace

Model::Model(StateVector probe, HamiltonianEncoding encoding) : probe_(std::move(probe)), encoding_(std::move(encoding)) {
    const auto &h = std::get<HamiltonianEncoding>(encoding_);
    check_hamiltonian(h.hamiltonian, probe_.dim(), "hamiltonian");
    require(std::isfinite(h.time), "encoding time must be finite");
}

Model::Model(StateVector probe, GenericFamily family) : probe_(std::move(probe)), encoding_(std::move(family)) {
    require(static_cast<bool>(std::get<GenericFamily>(encoding_).state), "generic family needs a state provider");
}

StateVector evolve_state(const Model &model, double lambda) {
    const HamiltonianEncoding *enc = model.hamiltonian();
    require(enc != nullptr, "evolve_state needs a hamiltonian encoding");
    CMatrix u = unitary_evolution(enc->hamiltonian, lambda * enc->time);
    CVector psi = u * model.probe().amplitudes();
    psi.normalize();
    return StateVector(model.nqubits(), std::move(psi));
}

StateVector encoded_state(const Model &model, double lambda) {
    if (model.hamiltonian() != nullptr) {
        return evolve_state(model, lambda);
    }
    const auto &family = std::get<GenericFamily>(model.encoding());
    return StateVector(model.nqubits(), query_family(family, model.nqubits(), lambda));
}

StateJet state_jet(const Model &model, double lambda) {
    if (const HamiltonianEncoding *enc = model.hamiltonian()) {
        StateVector psi = evolve_state(model, lambda);
        CVector d = (-kI * enc->time) * (enc->hamiltonian * psi.amplitudes());
        return {std::move(psi), std::move(d)};
    }
    const auto &family = std::get<GenericFamily>(model.encoding());
    const int n = model.nqubits();
    StateVector psi(n, query_family(family, n, lambda));
    if (family.derivative) {
        CVector d = family.derivative(lambda);
        if (d.size() != psi.dim()) {
            fail(ErrorKind::Invariant, "derivative provider returned the wrong dimension");
        }
        return {std::move(psi), std::move(d)};
    }
    const double h = 1e-6 * std::max(1.0, std::abs(lambda));
    CVector d = central_difference(family, n, lambda, h);
    if (family.richardson) {
        d = (4.0 * central_difference(family, n, lambda, 0.5 * h) - d) / 3.0;
    }
    return {std::move(psi), std::move(d)};
}

CVector state_derivative(const Model &model, double lambda) { return state_jet(model, lambda).derivative; }

double qfi(const StateJet &jet) {
    const CVector &psi = jet.state.amplitudes();
    double dd = jet.derivative.squaredNorm();
    double overlap = std::norm(psi.dot(jet.derivative));
    return std::max(0.0, 4.0 * (dd - overlap));
}

double qfi(const Model &model, double lambda) { return qfi(state_jet(model, lambda)); }

CMatrix sld(const StateJet &jet) {
    const CVector &psi = jet.state.amplitudes();
    CMatrix l = 2.0 * (jet.derivative * psi.adjoint());
    return l + l.adjoint().eval();
}

CMatrix sld(const Model &model, double lambda) { return sld(state_jet(model, lambda)); }

MMatrix::MMatrix(CMatrix matrix) : nqubits_(0), matrix_(std::move(matrix)) {
    require(matrix_.rows() == matrix_.cols(), "M must be square");
    nqubits_ = qubits_for_dimension(matrix_.rows());
    if (!is_anti_hermitian(matrix_, tol::kStructural)) {
        fail(ErrorKind::Invariant, "M is not anti-hermitian");
    }
    if (std::abs(matrix_.trace()) > tol::kStructural) {
        fail(ErrorKind::Invariant, "M is not traceless");
    }
}

bool MMatrix::is_trivial() const {
    // Rank <= 2 anti-hermitian: the Frobenius norm bounds the spectral norm
    // within a factor sqrt(2), and for +-ic pairs they differ exactly by it.
    return matrix_.norm() / std::sqrt(2.0) < tol::kStructural;
}

MMatrix m_matrix(const StateJet &jet) {
    // [rho, L] for rho = |psi><psi|, L = 2(|d><psi| + |psi><d|), expanded so
    // only outer products are formed.
    const CVector &psi = jet.state.amplitudes();
    const CVector &d = jet.derivative;
    Complex overlap = psi.dot(d);  // <psi|d>
    CMatrix m = psi * d.adjoint();
    m -= d * psi.adjoint();
    m += (overlap - std::conj(overlap)) * (psi * psi.adjoint());
    m *= 2.0;
    return MMatrix(std::move(m));
}

MMatrix m_matrix(const Model &model, double lambda) { return m_matrix(state_jet(model, lambda)); }

Generator metrological_generator(const Model &model) {
    const HamiltonianEncoding *enc = model.hamiltonian();
    require(enc != nullptr, "metrological generator needs a hamiltonian encoding");
    return {enc->time * enc->hamiltonian};
}

int PiecewiseSchedule::nqubits() const {
    require(!segments.empty(), "schedule has no segments");
    return qubits_for_dimension(segments.front().base.rows());
}

double PiecewiseSchedule::total_time() const {
    double t = 0.0;
    for (const auto &s : segments) {
        t += s.duration;
    }
    return t;
}

namespace {

void check_schedule(const PiecewiseSchedule &schedule) {
    const Eigen::Index dim = Eigen::Index{1} << schedule.nqubits();
    for (const auto &s : schedule.segments) {
        require(s.duration >= 0.0 && std::isfinite(s.duration), "segment duration must be finite and >= 0");
        check_hamiltonian(s.base, dim, "schedule segment base");
        check_hamiltonian(s.slope, dim, "schedule segment slope");
    }
}

}  // namespace

CMatrix schedule_unitary(const PiecewiseSchedule &schedule, double lambda) {
    check_schedule(schedule);
    const Eigen::Index dim = Eigen::Index{1} << schedule.nqubits();
    CMatrix u = CMatrix::Identity(dim, dim);
    for (const auto &s : schedule.segments) {
        u = unitary_evolution(s.base + lambda * s.slope, s.duration) * u;
    }
    return u;
}

Generator metrological_generator(const PiecewiseSchedule &schedule, double lambda, int steps_per_segment) {
    check_schedule(schedule);
    require(steps_per_segment >= 1, "need at least one quadrature step per segment");
    const Eigen::Index dim = Eigen::Index{1} << schedule.nqubits();
    CMatrix u = CMatrix::Identity(dim, dim);
    CMatrix g = CMatrix::Zero(dim, dim);
    for (const auto &s : schedule.segments) {
        if (s.duration == 0.0) {
            continue;
        }
        const CMatrix h = s.base + lambda * s.slope;
        const double ds = s.duration / steps_per_segment;
        const CMatrix half_step = unitary_evolution(h, 0.5 * ds);
        const CMatrix full_step = unitary_evolution(h, ds);
        CMatrix at_node = half_step * u;
        for (int k = 0; k < steps_per_segment; ++k) {
            g += ds * (at_node.adjoint() * s.slope * at_node);
            at_node = full_step * at_node;
        }
        u = unitary_evolution(h, s.duration) * u;
    }
    g = 0.5 * (g + g.adjoint()).eval();
    return {std::move(g)};
}

}  // namespace qlocal
