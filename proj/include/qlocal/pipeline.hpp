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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qlocal/error.hpp"
#include "qlocal/hoc.hpp"
#include "qlocal/imp.hpp"
#include "qlocal/model.hpp"
#include "qlocal/povm.hpp"

namespace qlocal {

struct ParsedModel {
    Model model;
    std::vector<std::string> warnings;
};

/// JSON model description:
///   {"nqubits": N, "probe": [[re, im], ...] | "ghz" | "w" | "wtilde" | "zero" | "plus",
///    "hamiltonian": [{"coefficient": c, "pauli": "XIZ"}, ...], "time": t}
/// or {"catalog": NAME, "nqubits": N}. A probe whose norm is off by less than
/// 1e-6 is renormalized with a warning.
ParsedModel parse_model_spec(std::string_view text);

/// "x,z,x" style letters (optionally signed) or "ax ay az; ..." triples.
AxisAssignment parse_axes(std::string_view text, int nqubits);

/// start:stop:count, endpoints included.
std::vector<double> parse_lambda_grid(std::string_view text);

struct VerifyReport {
    double qfi = 0.0;
    double residual = 0.0;  // hoc residual
    SaturationResult saturation{false, 0.0};
    double cfi = 0.0;
    bool feasible = false;  // residual below the threshold
};

VerifyReport verify_measurement(const Model &model, double lambda, const AxisAssignment &axes,
                                double threshold = 1e-9);

struct LmReport {
    HocReport hoc;
    double cfi = 0.0;
};

struct LmccReport {
    LmccTree tree;
    double cfi = 0.0;
};

struct PointReport {
    double lambda = 0.0;
    bool ok = true;
    std::optional<ErrorKind> error_kind;
    std::string error;
    double qfi = 0.0;
    MStructure structure;
    LmReport lm;
    std::optional<LmccReport> lmcc;
    std::optional<VerifyReport> reference;
    bool reference_expected_feasible = false;
};

struct PipelineOptions {
    HocOptions hoc;
    int threads = 1;
    bool with_lmcc = true;
    /// Optional reference axes per lambda (catalog runs).
    std::function<std::optional<AxisAssignment>(double)> reference;
    bool reference_expected_feasible = false;
};

PointReport analyze_point(const Model &model, double lambda, const PipelineOptions &options);

/// One report per grid point, in grid order. Errors are recorded per point.
std::vector<PointReport> run_pipeline(const Model &model, const std::vector<double> &grid,
                                      const PipelineOptions &options);

enum class ReportFormat { Json, Csv };

/// JSON lines (one object per point) or CSV with a header row. Floating
/// point values carry 17 significant digits.
std::string format_reports(const std::vector<PointReport> &reports, ReportFormat format);
std::string format_verify(const std::vector<std::pair<double, VerifyReport>> &reports, ReportFormat format);
std::string format_lmcc(const LmccReport &report, double lambda);
std::string format_catalog_list();

}  // namespace qlocal
