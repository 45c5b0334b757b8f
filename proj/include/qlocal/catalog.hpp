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

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qlocal/model.hpp"
#include "qlocal/povm.hpp"

namespace qlocal {

struct CatalogInfo {
    std::string name;
    std::string description;
    int default_nqubits;
    bool fixed_nqubits;      // the entry only exists for default_nqubits
    bool expected_feasible;  // a saturating local measurement exists
    std::string reference;   // where the reference measurement applies
};

const std::vector<CatalogInfo> &catalog_list();
const CatalogInfo &catalog_info(std::string_view name);

/// Builds a named model. nqubits <= 0 selects the entry's default.
Model build_catalog_model(std::string_view name, int nqubits = 0);

struct ReferenceMeasurement {
    std::optional<Measurement> measurement;  // empty for the counterexample
    bool expected_feasible;

    /// The measurement; throws ErrorKind::NoReference when there is none.
    const Measurement &get() const;
};

ReferenceMeasurement catalog_reference_measurement(std::string_view name, int nqubits, double lambda);

/// Sign vector S~(1..N) for odd N >= 3: S~(1) = 1, S~(2) = 0,
/// S~(i + 2) = 1 - S~(i).
std::vector<int> wtilde_signs(int nqubits);

/// Equal-weight single-excitation state with signs (-1)^s_i on |i>.
StateVector signed_w_state(const std::vector<int> &signs);

/// GHZ probe (|0..0> + |1..1>) / sqrt(2).
StateVector ghz_state(int nqubits);

/// Closed-form planar angles (a1, a2, a3) of the saturating measurement for
/// the W3 model with H = X1 X2 + X2 X3.
std::array<double, 3> w3_xx_reference_angles(double lambda);

}  // namespace qlocal
