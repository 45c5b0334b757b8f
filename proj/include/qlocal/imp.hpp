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

#include <optional>
#include <string>
#include <vector>

#include "qlocal/hoc.hpp"
#include "qlocal/linalg.hpp"
#include "qlocal/model.hpp"

namespace qlocal {

/// 2x2 matrix of block traces w_ab = Tr W_ab with respect to `qubit` of W.
Mat2 block_trace(const CMatrix &w, int qubit);

/// Deterministic unit n with n.a = 0: z for a = 0, else normalize(z x a),
/// falling back to x when a is parallel to z.
BlochVector orthogonal_axis(const BlochVector &a);

/// Common unit normal of a set of vectors, or nullopt when they span R^3.
/// The sign is fixed so that n_z >= 0 (ties: n_x >= 0).
std::optional<BlochVector> coplanar_normal(const std::vector<BlochVector> &vectors);

/// Adaptive measurement tree. Qubit order[d] is measured at depth d with the
/// axis stored at node 2^d - 1 + p, where p packs the earlier outcome bits
/// (first outcome most significant).
struct LmccTree {
    int nqubits = 0;
    std::vector<int> order;          // 1-based qubit labels
    std::vector<BlochVector> nodes;  // 2^N - 1 axes
    double leaf_residual = 0.0;      // max |diagonal| of the fully rotated M

    const BlochVector &axis(int depth, std::size_t prefix) const {
        return nodes.at((std::size_t{1} << depth) - 1 + prefix);
    }
};

/// Depth-first IMP recursion; always succeeds for a valid M. An empty order
/// means 1..N.
LmccTree lmcc_build(const MMatrix &m, std::vector<int> order = {});

enum class MKind { Zero, Diagonal, ZeroDiagonal, General };

const char *to_string(MKind kind);

struct GhzPair {
    Eigen::Index first = 0;   // smaller basis index
    Eigen::Index second = 0;  // larger basis index
    double weight = 0.0;      // |2c|: magnitude of the two diagonal entries
    bool consistent = false;  // amplitudes 1/sqrt(2) and all bits differ
    std::string note;
};

struct MStructure {
    MKind kind = MKind::General;
    std::optional<GhzPair> ghz;
};

/// Entry-wise classification at 1e-10. With a state, a Diagonal M also gets
/// its GHZ pair.
MStructure classify_m(const MMatrix &m, const StateVector *state = nullptr);

/// Closed-form local measurement for the structured classes, nullopt for
/// General.
std::optional<AxisAssignment> structure_measurement(const MStructure &s, int nqubits);

/// The two basis states carrying +-2ic on the diagonal of M, checked against
/// the GHZ form of the encoded state.
GhzPair ghz_extract(const MMatrix &m, const StateVector &state);

}  // namespace qlocal
