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


#include "qlocal/catalog.hpp"

#include <cmath>
#include <numbers>

#include "qlocal/error.hpp"

namespace qlocal {

namespace {

constexpr Complex kI{0.0, 1.0};

/// Two-site Pauli string p_j p_{j+1} on N qubits.
CMatrix nearest_neighbour(char p, int j, int n) {
    std::string s(static_cast<std::size_t>(n), 'I');
    s[static_cast<std::size_t>(j - 1)] = p;
    s[static_cast<std::size_t>(j)] = p;
    return pauli_string_matrix(s);
}

CMatrix chain_hamiltonian(int n, std::string_view paulis) {
    const Eigen::Index dim = Eigen::Index{1} << n;
    CMatrix h = CMatrix::Zero(dim, dim);
    for (int j = 1; j < n; ++j) {
        for (char p : paulis) {
            h += nearest_neighbour(p, j, n);
        }
    }
    return h;
}

void require_three(std::string_view name, int n) {
    if (n != 3) {
        fail(ErrorKind::Contract, std::string(name) + " is a three-qubit model");
    }
}

void require_odd(int n) {
    if (n < 3 || n % 2 == 0) {
        fail(ErrorKind::Contract, "wtilde_xy needs an odd qubit count >= 3");
    }
}

void require_range(int n) {
    if (n < 1 || n > kMaxQubits) {
        fail(ErrorKind::Contract, "qubit count out of range");
    }
}

Model ghz_family(int n) {
    const Eigen::Index dim = Eigen::Index{1} << n;
    const double amp = 1.0 / std::sqrt(2.0);
    GenericFamily family;
    family.state = [n, dim, amp](double lambda) {
        CVector v = CVector::Zero(dim);
        v[0] = amp;
        v[dim - 1] = amp * std::exp(-kI * (n * lambda));
        return v;
    };
    family.derivative = [n, dim, amp](double lambda) {
        CVector v = CVector::Zero(dim);
        v[dim - 1] = -kI * static_cast<double>(n) * amp * std::exp(-kI * (n * lambda));
        return v;
    };
    return Model(ghz_state(n), std::move(family));
}

Model ghz_hamiltonian(int n) {
    const Eigen::Index dim = Eigen::Index{1} << n;
    CMatrix h = CMatrix::Zero(dim, dim);
    for (int j = 1; j <= n; ++j) {
        h -= 0.5 * embed_operators(std::vector<QubitFactor>{{j, pauli_z()}}, n);
    }
    return Model(ghz_state(n), HamiltonianEncoding{h, 1.0});
}

}  // namespace

const std::vector<CatalogInfo> &catalog_list() {
    static const std::vector<CatalogInfo> entries = {
        {"ghz", "GHZ phase family (|0..0> + exp(-i N lambda)|1..1>)/sqrt(2)", 3, false, true, "all-x, every lambda"},
        {"ghz_h", "GHZ probe under H = -1/2 sum_j Z_j", 3, false, true, "all-x, every lambda"},
        {"w3_xx", "W3 probe under H = X1 X2 + X2 X3", 3, true, true, "closed-form planar angles, every lambda"},
        {"wtilde_xy", "signed W probe under H = sum_j (X_j X_j+1 + Y_j Y_j+1), odd N", 3, false, true,
         "(x, z, ..., z, x) at lambda = 0"},
        {"w3_xxyy_counter", "W3 probe under H = X1 X2 + X2 X3 + Y1 Y2 + Y2 Y3", 3, true, false,
         "none: no saturating local measurement at lambda = 0"},
    };
    return entries;
}

const CatalogInfo &catalog_info(std::string_view name) {
    for (const auto &e : catalog_list()) {
        if (e.name == name) {
            return e;
        }
    }
    fail(ErrorKind::UnknownName, "unknown catalog entry '" + std::string(name) + "'");
}

std::vector<int> wtilde_signs(int nqubits) {
    require_odd(nqubits);
    std::vector<int> s(static_cast<std::size_t>(nqubits));
    s[0] = 1;
    s[1] = 0;
    for (std::size_t i = 2; i < s.size(); ++i) {
        s[i] = 1 - s[i - 2];
    }
    return s;
}

StateVector signed_w_state(const std::vector<int> &signs) {
    const int n = static_cast<int>(signs.size());
    require_range(n);
    CVector v = CVector::Zero(Eigen::Index{1} << n);
    const double amp = 1.0 / std::sqrt(static_cast<double>(n));
    for (int i = 1; i <= n; ++i) {
        v[Eigen::Index{1} << (n - i)] = signs[static_cast<std::size_t>(i - 1)] % 2 == 0 ? amp : -amp;
    }
    return StateVector(n, std::move(v));
}

StateVector ghz_state(int nqubits) {
    require_range(nqubits);
    CVector v = CVector::Zero(Eigen::Index{1} << nqubits);
    v[0] = v[v.size() - 1] = 1.0 / std::sqrt(2.0);
    return StateVector(nqubits, std::move(v));
}

Model build_catalog_model(std::string_view name, int nqubits) {
    const CatalogInfo &info = catalog_info(name);
    const int n = nqubits <= 0 ? info.default_nqubits : nqubits;
    require_range(n);
    if (name == "ghz") {
        if (n < 2) {
            fail(ErrorKind::Contract, "ghz needs at least two qubits");
        }
        return ghz_family(n);
    }
    if (name == "ghz_h") {
        if (n < 2) {
            fail(ErrorKind::Contract, "ghz_h needs at least two qubits");
        }
        return ghz_hamiltonian(n);
    }
    if (name == "w3_xx") {
        require_three(name, n);
        return Model(signed_w_state({0, 0, 0}), HamiltonianEncoding{chain_hamiltonian(3, "X"), 1.0});
    }
    if (name == "w3_xxyy_counter") {
        require_three(name, n);
        return Model(signed_w_state({0, 0, 0}), HamiltonianEncoding{chain_hamiltonian(3, "XY"), 1.0});
    }
    // wtilde_xy
    StateVector probe = signed_w_state(wtilde_signs(n));
    CMatrix h = chain_hamiltonian(n, "XY");
    const double mean = probe.amplitudes().dot(h * probe.amplitudes()).real();
    if (std::abs(mean) > tol::kStructural) {
        fail(ErrorKind::Invariant, "signed W probe has nonzero mean energy");
    }
    return Model(std::move(probe), HamiltonianEncoding{std::move(h), 1.0});
}

std::array<double, 3> w3_xx_reference_angles(double lambda) {
    const double c2 = std::cos(2 * lambda);
    const double s2 = std::sin(2 * lambda);
    const double c4 = std::cos(4 * lambda);
    const double s4 = std::sin(4 * lambda);
    const double c6 = std::cos(6 * lambda);
    const double s8 = std::sin(8 * lambda);
    const double root = std::sqrt(2.0) * std::sqrt((41 + 23 * c4) * std::pow(29 * c2 + 6 * c6, 2));
    const double num = -(root - 107 * s4 + 282 * s8);
    const double den = 8 * (5 + 93 * c4);
    // cot a2 = num / den
    const double a2 = std::atan2(den, num);
    const double ca = std::cos(a2);
    const double sa = std::sin(a2);
    const double a1 = std::atan2(-7 * ca - 6 * sa * s4, -5 * sa * c2 - 2 * ca * s2);
    return {a1, a2, a1};
}

const Measurement &ReferenceMeasurement::get() const {
    if (!measurement) {
        fail(ErrorKind::NoReference, "catalog entry has no reference measurement");
    }
    return *measurement;
}

ReferenceMeasurement catalog_reference_measurement(std::string_view name, int nqubits, double lambda) {
    const CatalogInfo &info = catalog_info(name);
    const int n = nqubits <= 0 ? info.default_nqubits : nqubits;
    // Validates the qubit count the same way the model builder does.
    (void)build_catalog_model(name, n);
    if (name == "ghz" || name == "ghz_h") {
        return {LocalMeasurement{AxisAssignment::uniform(n, BlochVector::UnitX())}, true};
    }
    if (name == "w3_xx") {
        auto a = w3_xx_reference_angles(lambda);
        std::vector<BlochVector> axes;
        for (double t : a) {
            axes.emplace_back(std::cos(t), std::sin(t), 0.0);
        }
        return {LocalMeasurement{AxisAssignment(std::move(axes))}, true};
    }
    if (name == "wtilde_xy") {
        std::vector<BlochVector> axes(static_cast<std::size_t>(n), BlochVector::UnitZ());
        axes.front() = BlochVector::UnitX();
        axes.back() = BlochVector::UnitX();
        return {LocalMeasurement{AxisAssignment(std::move(axes))}, true};
    }
    return {std::nullopt, false};
}

}  // namespace qlocal
