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


#include "qlocal/imp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qlocal/error.hpp"

namespace qlocal {

Mat2 block_trace(const CMatrix &w, int qubit) {
    require(w.rows() == w.cols(), "block_trace needs a square matrix");
    const int n = qubits_for_dimension(w.rows());
    require(qubit >= 1 && qubit <= n, "qubit index out of range");
    if (!is_anti_hermitian(w, tol::kStructural) || std::abs(w.trace()) > tol::kStructural) {
        fail(ErrorKind::Contract, "block_trace needs a traceless anti-hermitian matrix");
    }
    return partial_trace_to_qubit(w, qubit);
}

BlochVector orthogonal_axis(const BlochVector &a) {
    const double norm = a.norm();
    if (norm == 0.0) {
        return BlochVector::UnitZ();
    }
    BlochVector c = BlochVector::UnitZ().cross(a);
    if (c.norm() > 1e-12 * norm) {
        return c.normalized();
    }
    return BlochVector::UnitX();
}

std::optional<BlochVector> coplanar_normal(const std::vector<BlochVector> &vectors) {
    Eigen::Matrix<double, 3, Eigen::Dynamic> a(3, std::max<std::size_t>(vectors.size(), 3));
    a.setZero();
    for (std::size_t k = 0; k < vectors.size(); ++k) {
        a.col(static_cast<Eigen::Index>(k)) = vectors[k];
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU);
    const auto &s = svd.singularValues();
    if (s[0] == 0.0) {
        return BlochVector::UnitZ();
    }
    if (s[1] < 1e-9 * s[0]) {
        // Rank one: any axis orthogonal to the dominant direction.
        return orthogonal_axis(svd.matrixU().col(0));
    }
    if (s[2] >= 1e-9 * s[0]) {
        return std::nullopt;
    }
    BlochVector n = svd.matrixU().col(2).normalized();
    if (n.z() < 0.0 || (n.z() == 0.0 && n.x() < 0.0)) {
        n = -n;
    }
    return n;
}

namespace {

/// M with qubits relabelled so that order[d] becomes qubit d + 1.
CMatrix permute_qubits(const CMatrix &m, const std::vector<int> &order) {
    const int n = static_cast<int>(order.size());
    const Eigen::Index dim = m.rows();
    std::vector<Eigen::Index> source(static_cast<std::size_t>(dim));
    for (Eigen::Index y = 0; y < dim; ++y) {
        Eigen::Index x = 0;
        for (int d = 0; d < n; ++d) {
            if ((y >> (n - 1 - d)) & 1) {
                x |= Eigen::Index{1} << (n - order[static_cast<std::size_t>(d)]);
            }
        }
        source[static_cast<std::size_t>(y)] = x;
    }
    CMatrix out(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) {
            out(r, c) = m(source[static_cast<std::size_t>(r)], source[static_cast<std::size_t>(c)]);
        }
    }
    return out;
}

void lmcc_recurse(const CMatrix &w, int depth, std::size_t prefix, LmccTree &tree) {
    const int k = qubits_for_dimension(w.rows());
    const BlochVector a = bloch_vector(partial_trace_to_qubit(w, 1), BlochKind::AntiHermitian);
    const BlochVector n = orthogonal_axis(a);
    tree.nodes[(std::size_t{1} << depth) - 1 + prefix] = n;
    const CMatrix rotated = conjugate_local(w, 1, k, axis_basis(n));
    const Eigen::Index half = w.rows() / 2;
    if (k == 1) {
        tree.leaf_residual = std::max({tree.leaf_residual, std::abs(rotated(0, 0)), std::abs(rotated(1, 1))});
        return;
    }
    lmcc_recurse(rotated.topLeftCorner(half, half), depth + 1, prefix << 1, tree);
    lmcc_recurse(rotated.bottomRightCorner(half, half), depth + 1, (prefix << 1) | 1, tree);
}

}  // namespace

LmccTree lmcc_build(const MMatrix &m, std::vector<int> order) {
    const int n = m.nqubits();
    if (order.empty()) {
        order.resize(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 1);
    }
    std::vector<int> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (int j = 0; j < static_cast<int>(sorted.size()); ++j) {
        require(sorted.size() == static_cast<std::size_t>(n) && sorted[static_cast<std::size_t>(j)] == j + 1,
                "qubit order must be a permutation of 1..N");
    }
    LmccTree tree;
    tree.nqubits = n;
    tree.order = order;
    tree.nodes.assign((std::size_t{1} << n) - 1, BlochVector::UnitZ());
    lmcc_recurse(permute_qubits(m.matrix(), order), 0, 0, tree);
    return tree;
}

const char *to_string(MKind kind) {
    switch (kind) {
        case MKind::Zero: return "zero";
        case MKind::Diagonal: return "diagonal";
        case MKind::ZeroDiagonal: return "zero-diagonal";
        case MKind::General: return "general";
    }
    return "unknown";
}

MStructure classify_m(const MMatrix &m, const StateVector *state) {
    const CMatrix &a = m.matrix();
    MStructure s;
    if (max_abs(a) < tol::kStructural) {
        s.kind = MKind::Zero;
        return s;
    }
    double off = 0.0;
    double diag = 0.0;
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
        for (Eigen::Index r = 0; r < a.rows(); ++r) {
            double &slot = r == c ? diag : off;
            slot = std::max(slot, std::abs(a(r, c)));
        }
    }
    if (off < tol::kStructural) {
        s.kind = MKind::Diagonal;
        if (state != nullptr) {
            s.ghz = ghz_extract(m, *state);
        }
    } else if (diag < tol::kStructural) {
        s.kind = MKind::ZeroDiagonal;
    } else {
        s.kind = MKind::General;
    }
    return s;
}

std::optional<AxisAssignment> structure_measurement(const MStructure &s, int nqubits) {
    switch (s.kind) {
        case MKind::Zero:
        case MKind::ZeroDiagonal: return AxisAssignment::computational(nqubits);
        case MKind::Diagonal: return AxisAssignment::uniform(nqubits, BlochVector::UnitX());
        case MKind::General: return std::nullopt;
    }
    return std::nullopt;
}

GhzPair ghz_extract(const MMatrix &m, const StateVector &state) {
    const CMatrix &a = m.matrix();
    require(state.dim() == a.rows(), "state dimension does not match M");
    require(max_abs(a) >= tol::kStructural, "ghz_extract needs a nonzero M");
    double off = 0.0;
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
        for (Eigen::Index r = 0; r < a.rows(); ++r) {
            if (r != c) {
                off = std::max(off, std::abs(a(r, c)));
            }
        }
    }
    require(off < tol::kStructural, "ghz_extract needs a diagonal M");

    std::vector<Eigen::Index> support;
    for (Eigen::Index x = 0; x < a.rows(); ++x) {
        if (std::abs(a(x, x)) >= tol::kStructural) {
            support.push_back(x);
        }
    }
    GhzPair out;
    if (support.size() != 2) {
        out.note = "diagonal of M has " + std::to_string(support.size()) + " nonzero entries, expected 2";
        if (!support.empty()) {
            out.first = support.front();
            out.second = support.back();
            out.weight = std::abs(a(support.front(), support.front()));
        }
        return out;
    }
    out.first = support[0];
    out.second = support[1];
    out.weight = 0.5 * (std::abs(a(out.first, out.first)) + std::abs(a(out.second, out.second)));
    const double amp = 1.0 / std::sqrt(2.0);
    const bool balanced =
        std::abs(std::abs(state[out.first]) - amp) < 1e-8 && std::abs(std::abs(state[out.second]) - amp) < 1e-8;
    const Eigen::Index all = (Eigen::Index{1} << state.nqubits()) - 1;
    const bool complementary = (out.first ^ out.second) == all;
    out.consistent = balanced && complementary;
    if (!balanced) {
        out.note = "amplitudes on the pair are not 1/sqrt(2)";
    } else if (!complementary) {
        out.note = "the pair's bitstrings agree on some qubit, so the state is not GHZ-type";
    }
    return out;
}

}  // namespace qlocal
