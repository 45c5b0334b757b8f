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


#include "qlocal/qlocal.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "qlocal/catalog.hpp"
#include "qlocal/error.hpp"
#include "qlocal/pipeline.hpp"

struct qlocal_model {
    qlocal::Model model;
    std::string catalog_name;  // empty for user models
};

namespace {

thread_local std::string g_last_error;

qlocal_status status_for(qlocal::ErrorKind kind) {
    switch (kind) {
        case qlocal::ErrorKind::Parse: return QLOCAL_ERR_PARSE;
        case qlocal::ErrorKind::Invariant: return QLOCAL_ERR_INVARIANT;
        case qlocal::ErrorKind::Contract: return QLOCAL_ERR_INVALID_ARGUMENT;
        case qlocal::ErrorKind::UnknownName: return QLOCAL_ERR_UNKNOWN_NAME;
        case qlocal::ErrorKind::NoReference: return QLOCAL_ERR_NO_REFERENCE;
    }
    return QLOCAL_ERR_INTERNAL;
}

qlocal_status set_error(qlocal_status s, const std::string &msg) {
    g_last_error = msg;
    return s;
}

template <typename F>
qlocal_status guarded(F &&body) {
    g_last_error.clear();
    try {
        return body();
    } catch (const qlocal::Error &e) {
        return set_error(status_for(e.kind()), e.what());
    } catch (const std::bad_alloc &) {
        return set_error(QLOCAL_ERR_INTERNAL, "out of memory");
    } catch (const std::exception &e) {
        return set_error(QLOCAL_ERR_INTERNAL, e.what());
    }
}

char *copy_string(const std::string &s) {
    char *out = static_cast<char *>(std::malloc(s.size() + 1));
    if (out == nullptr) {
        throw std::bad_alloc();
    }
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

qlocal::PipelineOptions to_pipeline(const qlocal_options *o) {
    qlocal_options defaults;
    qlocal_options_init(&defaults);
    if (o == nullptr) {
        o = &defaults;
    }
    if (o->restarts < 1 || o->max_iter < 1 || !(o->tolerance > 0.0) || o->threads < 1) {
        qlocal::fail(qlocal::ErrorKind::Contract, "options out of range");
    }
    qlocal::PipelineOptions p;
    p.hoc.seed = o->seed;
    p.hoc.restarts = o->restarts;
    p.hoc.max_iter = o->max_iter;
    p.hoc.feasibility_threshold = o->tolerance;
    p.hoc.infeasibility_threshold = std::max(o->tolerance, p.hoc.infeasibility_threshold);
    p.threads = o->threads;
    p.with_lmcc = o->with_lmcc != 0;
    return p;
}

qlocal::ReportFormat format_of(const qlocal_options *o) {
    return o != nullptr && o->format == QLOCAL_FORMAT_CSV ? qlocal::ReportFormat::Csv : qlocal::ReportFormat::Json;
}

std::vector<double> grid_of(const double *lambdas, size_t count) {
    if (count > 0 && lambdas == nullptr) {
        qlocal::fail(qlocal::ErrorKind::Contract, "null lambda grid");
    }
    return std::vector<double>(lambdas, lambdas + count);
}

/// Status for a finished sweep: the first point error, then feasibility.
qlocal_status sweep_status(const std::vector<qlocal::PointReport> &reports, bool require_feasible) {
    for (const auto &r : reports) {
        if (!r.ok) {
            std::string msg = "lambda=" + std::to_string(r.lambda) + ": " + r.error;
            return set_error(r.error_kind ? status_for(*r.error_kind) : QLOCAL_ERR_INTERNAL, msg);
        }
    }
    if (require_feasible) {
        std::string failed;
        for (const auto &r : reports) {
            if (!r.lm.hoc.feasible()) {
                failed += (failed.empty() ? "" : ", ") + std::to_string(r.lambda);
            }
        }
        if (!failed.empty()) {
            return set_error(QLOCAL_ERR_INFEASIBLE, "no saturating local measurement found at lambda = " + failed);
        }
    }
    return QLOCAL_OK;
}

}  // namespace

extern "C" {

void qlocal_options_init(qlocal_options *options) {
    if (options == nullptr) {
        return;
    }
    options->seed = 0;
    options->restarts = 20;
    options->max_iter = 200;
    options->tolerance = 1e-9;
    options->threads = 1;
    options->with_lmcc = 1;
    options->require_feasible = 0;
    options->format = QLOCAL_FORMAT_JSON;
}

const char *qlocal_last_error(void) { return g_last_error.c_str(); }

const char *qlocal_version(void) { return "0.1.0"; }

void qlocal_string_free(char *text) { std::free(text); }

qlocal_status qlocal_model_from_json(const char *text, qlocal_model **out, char **warnings) {
    return guarded([&] {
        if (text == nullptr || out == nullptr) {
            return set_error(QLOCAL_ERR_INVALID_ARGUMENT, "null argument");
        }
        qlocal::ParsedModel parsed = qlocal::parse_model_spec(text);
        std::string joined;
        for (const auto &w : parsed.warnings) {
            joined += w + "\n";
        }
        char *w = warnings != nullptr ? copy_string(joined) : nullptr;
        *out = new qlocal_model{std::move(parsed.model), {}};
        if (warnings != nullptr) {
            *warnings = w;
        }
        return QLOCAL_OK;
    });
}

qlocal_status qlocal_model_from_catalog(const char *name, int nqubits, qlocal_model **out) {
    return guarded([&] {
        if (name == nullptr || out == nullptr) {
            return set_error(QLOCAL_ERR_INVALID_ARGUMENT, "null argument");
        }
        *out = new qlocal_model{qlocal::build_catalog_model(name, nqubits), name};
        return QLOCAL_OK;
    });
}

void qlocal_model_free(qlocal_model *model) { delete model; }

int qlocal_model_nqubits(const qlocal_model *model) { return model == nullptr ? 0 : model->model.nqubits(); }

qlocal_status qlocal_qfi(const qlocal_model *model, double lambda, double *out) {
    return guarded([&] {
        if (model == nullptr || out == nullptr) {
            return set_error(QLOCAL_ERR_INVALID_ARGUMENT, "null argument");
        }
        *out = qlocal::qfi(model->model, lambda);
        return QLOCAL_OK;
    });
}

qlocal_status qlocal_sweep(const qlocal_model *model, const double *lambdas, size_t count,
                           const qlocal_options *options, char **out) {
    return guarded([&] {
        if (model == nullptr || out == nullptr) {
            return set_error(QLOCAL_ERR_INVALID_ARGUMENT, "null argument");
        }
        auto reports = qlocal::run_pipeline(model->model, grid_of(lambdas, count), to_pipeline(options));
        *out = copy_string(qlocal::format_reports(reports, format_of(options)));
        return sweep_status(reports, options != nullptr && options->require_feasible != 0);
    });
}

qlocal_status qlocal_verify(const qlocal_model *model, const double *lambdas, size_t count, const char *axes,
                            const qlocal_options *options, char **out) {
    return guarded([&] {
        if (model == nullptr || axes == nullptr || out == nullptr) {
            return set_error(QLOCAL_ERR_INVALID_ARGUMENT, "null argument");
        }
        const auto p = to_pipeline(options);
        const qlocal::AxisAssignment a = qlocal::parse_axes(axes, model->model.nqubits());
        std::vector<std::pair<double, qlocal::VerifyReport>> reports;
        for (double lambda : grid_of(lambdas, count)) {
            reports.emplace_back(lambda,
                                 qlocal::verify_measurement(model->model, lambda, a, p.hoc.feasibility_threshold));
        }
        *out = copy_string(qlocal::format_verify(reports, format_of(options)));
        if (options != nullptr && options->require_feasible != 0) {
            for (const auto &[lambda, v] : reports) {
                if (!v.feasible) {
                    return set_error(QLOCAL_ERR_INFEASIBLE,
                                     "axes do not saturate the bound at lambda = " + std::to_string(lambda));
                }
            }
        }
        return QLOCAL_OK;
    });
}

qlocal_status qlocal_lmcc(const qlocal_model *model, double lambda, const int *order, size_t order_len,
                          char **out) {
    return guarded([&] {
        if (model == nullptr || out == nullptr || (order == nullptr && order_len > 0)) {
            return set_error(QLOCAL_ERR_INVALID_ARGUMENT, "null argument");
        }
        qlocal::StateJet jet = qlocal::state_jet(model->model, lambda);
        std::vector<int> ord(order, order + order_len);
        qlocal::LmccReport r{qlocal::lmcc_build(qlocal::m_matrix(jet), ord), 0.0};
        r.cfi = qlocal::cfi(jet, r.tree);
        *out = copy_string(qlocal::format_lmcc(r, lambda));
        return QLOCAL_OK;
    });
}

qlocal_status qlocal_catalog_list(char **out) {
    return guarded([&] {
        if (out == nullptr) {
            return set_error(QLOCAL_ERR_INVALID_ARGUMENT, "null argument");
        }
        *out = copy_string(qlocal::format_catalog_list());
        return QLOCAL_OK;
    });
}

qlocal_status qlocal_catalog_run(const char *name, int nqubits, const double *lambdas, size_t count,
                                 const qlocal_options *options, char **out) {
    return guarded([&] {
        if (name == nullptr || out == nullptr) {
            return set_error(QLOCAL_ERR_INVALID_ARGUMENT, "null argument");
        }
        const std::string entry = name;
        const qlocal::CatalogInfo &info = qlocal::catalog_info(entry);
        const int n = nqubits <= 0 ? info.default_nqubits : nqubits;
        qlocal::Model model = qlocal::build_catalog_model(entry, n);
        qlocal::PipelineOptions p = to_pipeline(options);
        p.reference_expected_feasible = info.expected_feasible;
        p.reference = [entry, n](double lambda) -> std::optional<qlocal::AxisAssignment> {
            auto ref = qlocal::catalog_reference_measurement(entry, n, lambda);
            if (!ref.measurement) {
                return std::nullopt;
            }
            return std::get<qlocal::LocalMeasurement>(*ref.measurement).axes;
        };
        auto reports = qlocal::run_pipeline(model, grid_of(lambdas, count), p);
        *out = copy_string(qlocal::format_reports(reports, format_of(options)));
        return sweep_status(reports, options != nullptr && options->require_feasible != 0);
    });
}

qlocal_status qlocal_parse_grid(const char *text, double **out, size_t *count) {
    return guarded([&] {
        if (text == nullptr || out == nullptr || count == nullptr) {
            return set_error(QLOCAL_ERR_INVALID_ARGUMENT, "null argument");
        }
        std::vector<double> grid = qlocal::parse_lambda_grid(text);
        double *buf = static_cast<double *>(std::malloc(std::max<size_t>(1, grid.size()) * sizeof(double)));
        if (buf == nullptr) {
            throw std::bad_alloc();
        }
        std::copy(grid.begin(), grid.end(), buf);
        *out = buf;
        *count = grid.size();
        return QLOCAL_OK;
    });
}

void qlocal_grid_free(double *grid) { std::free(grid); }

}  // extern "C"
