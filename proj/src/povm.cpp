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


#include "qlocal/povm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qlocal/error.hpp"

namespace qlocal {

namespace {

using Qubit = Eigen::Vector2cd;

/// Kronecker product of single-qubit vectors, factors[0] on qubit 1.
CVector product_vector(const std::vector<Qubit> &factors) {
    CVector v = CVector::Ones(1);
    for (const Qubit &f : factors) {
        CVector next(v.size() * 2);
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            next[2 * i] = v[i] * f[0];
            next[2 * i + 1] = v[i] * f[1];
        }
        v = std::move(next);
    }
    return v;
}

Qubit eigenvector(const BlochVector &axis, int bit) { return axis_basis(axis).col(bit); }

/// Either rank-1 vectors (E_x = |v><v|) or dense operators.
struct Outcomes {
    std::vector<CVector> vectors;
    std::vector<CMatrix> operators;
    bool rank_one() const { return operators.empty(); }
    std::size_t size() const { return rank_one() ? vectors.size() : operators.size(); }
};

Outcomes local_outcomes(const AxisAssignment &axes) {
    const int n = axes.nqubits();
    Outcomes out;
    for (std::size_t x = 0; x < (std::size_t{1} << n); ++x) {
        std::vector<Qubit> f;
        for (int j = 1; j <= n; ++j) {
            f.push_back(eigenvector(axes.axis(j), static_cast<int>((x >> (n - j)) & 1)));
        }
        out.vectors.push_back(product_vector(f));
    }
    return out;
}

Outcomes lmcc_outcomes(const LmccTree &tree) {
    const int n = tree.nqubits;
    Outcomes out;
    for (std::size_t o = 0; o < (std::size_t{1} << n); ++o) {
        std::vector<Qubit> f(static_cast<std::size_t>(n));
        for (int d = 0; d < n; ++d) {
            const std::size_t prefix = o >> (n - d);
            const int bit = static_cast<int>((o >> (n - 1 - d)) & 1);
            f[static_cast<std::size_t>(tree.order[static_cast<std::size_t>(d)] - 1)] =
                eigenvector(tree.axis(d, prefix), bit);
        }
        out.vectors.push_back(product_vector(f));
    }
    return out;
}

Outcomes povm_outcomes(const LocalPovm &povm) {
    const int n = povm.nqubits();
    std::vector<std::vector<Qubit>> elements(static_cast<std::size_t>(n));
    std::size_t total = 1;
    for (int j = 1; j <= n; ++j) {
        for (const auto &e : povm.qubit(j)) {
            elements[static_cast<std::size_t>(j - 1)].push_back(std::sqrt(e.weight) * eigenvector(e.axis, 0));
        }
        total *= povm.qubit(j).size();
    }
    Outcomes out;
    for (std::size_t o = 0; o < total; ++o) {
        std::vector<Qubit> f(static_cast<std::size_t>(n));
        std::size_t rest = o;
        for (int j = n; j >= 1; --j) {
            const auto &list = elements[static_cast<std::size_t>(j - 1)];
            f[static_cast<std::size_t>(j - 1)] = list[rest % list.size()];
            rest /= list.size();
        }
        out.vectors.push_back(product_vector(f));
    }
    return out;
}

void check_completeness(const CMatrix &sum) {
    const double err = max_abs(sum - CMatrix::Identity(sum.rows(), sum.cols()));
    if (err >= tol::kStructural) {
        fail(ErrorKind::Invariant, "measurement is not complete (residual " + std::to_string(err) + ")");
    }
}

Outcomes explicit_outcomes(const ExplicitMeasurement &m, Eigen::Index dim) {
    require(!m.operators.empty(), "explicit measurement has no operators");
    CMatrix sum = CMatrix::Zero(dim, dim);
    for (const CMatrix &e : m.operators) {
        require(e.rows() == dim && e.cols() == dim, "measurement operator has the wrong dimension");
        if (!is_hermitian(e, tol::kStructural)) {
            fail(ErrorKind::Invariant, "measurement operator is not hermitian");
        }
        Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (e + e.adjoint()), Eigen::EigenvaluesOnly);
        if (eig.eigenvalues().minCoeff() < -tol::kStructural) {
            fail(ErrorKind::Invariant, "measurement operator is not positive semidefinite");
        }
        sum += e;
    }
    check_completeness(sum);
    Outcomes out;
    out.operators = m.operators;
    return out;
}

int measurement_qubits(const Measurement &m) {
    struct {
        int operator()(const LocalMeasurement &l) const { return l.axes.nqubits(); }
        int operator()(const LmccTree &t) const { return t.nqubits; }
        int operator()(const LocalPovm &p) const { return p.nqubits(); }
        int operator()(const ExplicitMeasurement &e) const {
            require(!e.operators.empty(), "explicit measurement has no operators");
            return qubits_for_dimension(e.operators.front().rows());
        }
    } visitor;
    return std::visit(visitor, m);
}

Outcomes expand(const Measurement &m, int nqubits) {
    require(measurement_qubits(m) == nqubits, "measurement acts on a different number of qubits");
    if (const auto *l = std::get_if<LocalMeasurement>(&m)) {
        return local_outcomes(l->axes);
    }
    if (const auto *t = std::get_if<LmccTree>(&m)) {
        require(t->nodes.size() == (std::size_t{1} << nqubits) - 1 && t->order.size() == static_cast<std::size_t>(nqubits),
                "malformed LMCC tree");
        return lmcc_outcomes(*t);
    }
    if (const auto *p = std::get_if<LocalPovm>(&m)) {
        return povm_outcomes(*p);
    }
    return explicit_outcomes(std::get<ExplicitMeasurement>(m), Eigen::Index{1} << nqubits);
}

}  // namespace

LocalPovm::LocalPovm(std::vector<std::vector<PovmElement>> per_qubit) : per_qubit_(std::move(per_qubit)) {
    require(!per_qubit_.empty() && per_qubit_.size() <= static_cast<std::size_t>(kMaxQubits),
            "POVM qubit count out of range");
    for (std::size_t j = 0; j < per_qubit_.size(); ++j) {
        const auto &list = per_qubit_[j];
        const std::string where = " on qubit " + std::to_string(j + 1);
        if (list.empty()) {
            fail(ErrorKind::Invariant, "POVM has no elements" + where);
        }
        double total = 0.0;
        BlochVector first_moment = BlochVector::Zero();
        for (const auto &e : list) {
            if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
                fail(ErrorKind::Invariant, "POVM weights must be positive" + where);
            }
            if (std::abs(e.axis.norm() - 1.0) > tol::kIdentity) {
                fail(ErrorKind::Invariant, "POVM axes must be unit vectors" + where);
            }
            total += e.weight;
            first_moment += e.weight * e.axis;
        }
        if (std::abs(total - 2.0) >= tol::kStructural) {
            fail(ErrorKind::Invariant, "POVM weights must sum to 2" + where);
        }
        if (first_moment.norm() >= tol::kStructural) {
            fail(ErrorKind::Invariant, "POVM weighted axes must sum to zero" + where);
        }
    }
}

std::vector<CMatrix> measurement_projectors(const Measurement &m, int nqubits) {
    Outcomes o = expand(m, nqubits);
    if (!o.rank_one()) {
        return o.operators;
    }
    const Eigen::Index dim = Eigen::Index{1} << nqubits;
    std::vector<CMatrix> out;
    CMatrix sum = CMatrix::Zero(dim, dim);
    for (const CVector &v : o.vectors) {
        out.push_back(v * v.adjoint());
        sum += out.back();
    }
    check_completeness(sum);
    return out;
}

std::vector<double> outcome_probabilities(const StateVector &state, const Measurement &m) {
    Outcomes o = expand(m, state.nqubits());
    const CVector &psi = state.amplitudes();
    std::vector<double> p;
    p.reserve(o.size());
    for (std::size_t x = 0; x < o.size(); ++x) {
        double v = o.rank_one() ? std::norm(o.vectors[x].dot(psi)) : psi.dot(o.operators[x] * psi).real();
        p.push_back(std::clamp(v, 0.0, 1.0));
    }
    return p;
}

double cfi(const StateJet &jet, const Measurement &m) {
    const CVector &psi = jet.state.amplitudes();
    const CVector &d = jet.derivative;
    // L psi for L = 2(|d><psi| + |psi><d|).
    const CVector l_psi = 2.0 * (d + psi * d.dot(psi));
    Outcomes o = expand(m, jet.state.nqubits());
    double total = 0.0;
    for (std::size_t x = 0; x < o.size(); ++x) {
        double p;
        double dp;
        double limit;
        if (o.rank_one()) {
            const CVector &v = o.vectors[x];
            const Complex vp = v.dot(psi);
            p = std::norm(vp);
            dp = 2.0 * (std::conj(v.dot(d)) * vp).real();
            limit = std::norm(v.dot(l_psi));
        } else {
            const CMatrix &e = o.operators[x];
            const CVector e_psi = e * psi;
            p = psi.dot(e_psi).real();
            dp = 2.0 * d.dot(e_psi).real();
            limit = l_psi.dot(e * l_psi).real();
        }
        total += p > 1e-12 ? dp * dp / p : limit;
    }
    return total;
}

double cfi(const Model &model, const Measurement &m, double lambda) { return cfi(state_jet(model, lambda), m); }

SaturationResult saturation_check(const MMatrix &m, const Measurement &measurement) {
    Outcomes o = expand(measurement, m.nqubits());
    const CMatrix &a = m.matrix();
    double worst = 0.0;
    for (std::size_t x = 0; x < o.size(); ++x) {
        if (o.rank_one()) {
            const CVector &v = o.vectors[x];
            const double peak = v.cwiseAbs().maxCoeff();
            worst = std::max(worst, std::abs(v.dot(a * v)) * peak * peak);
        } else {
            const CMatrix &e = o.operators[x];
            worst = std::max(worst, max_abs(e * a * e));
        }
    }
    return {worst < 1e-9, worst};
}

LocalMeasurement reduce_to_projective(const LocalPovm &povm) {
    std::vector<BlochVector> axes;
    for (int j = 1; j <= povm.nqubits(); ++j) {
        axes.push_back(povm.qubit(j).front().axis);
    }
    return {AxisAssignment(std::move(axes))};
}

}  // namespace qlocal
