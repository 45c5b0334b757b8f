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

#include <variant>
#include <vector>

#include "qlocal/hoc.hpp"
#include "qlocal/imp.hpp"
#include "qlocal/linalg.hpp"
#include "qlocal/model.hpp"

namespace qlocal {

/// Product projective measurement E_x = prod_j (I + (-1)^x_j n_j.sigma) / 2.
struct LocalMeasurement {
    AxisAssignment axes;
};

/// One element a (I + n.sigma) / 2 of a single-qubit rank-1 POVM.
struct PovmElement {
    double weight;
    BlochVector axis;
};

/// Product of per-qubit rank-1 POVMs; each qubit's elements satisfy
/// sum a = 2, sum a n = 0 and a > 0.
class LocalPovm {
   public:
    explicit LocalPovm(std::vector<std::vector<PovmElement>> per_qubit);

    int nqubits() const { return static_cast<int>(per_qubit_.size()); }
    const std::vector<PovmElement> &qubit(int j) const { return per_qubit_.at(static_cast<std::size_t>(j - 1)); }

   private:
    std::vector<std::vector<PovmElement>> per_qubit_;
};

/// Arbitrary operators, for checking non-local measurements.
struct ExplicitMeasurement {
    std::vector<CMatrix> operators;
};

using Measurement = std::variant<LocalMeasurement, LmccTree, LocalPovm, ExplicitMeasurement>;

/// Dense POVM elements; completeness is verified to 1e-10.
std::vector<CMatrix> measurement_projectors(const Measurement &m, int nqubits);

/// p(x) = <psi|E_x|psi>, clamped to [0, 1].
std::vector<double> outcome_probabilities(const StateVector &state, const Measurement &m);

/// Classical Fisher information of the outcome distribution at lambda.
/// Outcomes with p <= 1e-12 contribute their limit <psi|L E_x L|psi>.
double cfi(const Model &model, const Measurement &m, double lambda);
double cfi(const StateJet &jet, const Measurement &m);

struct SaturationResult {
    bool saturates;
    double residual;  // max_x ||E_x M E_x||_max
};

SaturationResult saturation_check(const MMatrix &m, const Measurement &measurement);

/// Projective measurement along each qubit's first POVM axis.
LocalMeasurement reduce_to_projective(const LocalPovm &povm);

}  // namespace qlocal
