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


// Command-line front end. Links only the C interface.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "qlocal/qlocal.h"

namespace {

constexpr int kExitUsage = 2;

struct ModelArgs {
    std::string model_file;
    std::string catalog;
    int n = 0;
};

struct GridArgs {
    double lambda = 0.0;
    std::string grid;
};

struct SolverArgs {
    std::uint64_t seed = 0;
    int restarts = 20;
    int max_iter = 200;
    double tolerance = 1e-9;
    int threads = 1;
    std::string format = "json";
    bool require_feasible = false;
    bool no_lmcc = false;
};

int exit_code(qlocal_status s) {
    switch (s) {
        case QLOCAL_OK: return 0;
        case QLOCAL_ERR_PARSE:
        case QLOCAL_ERR_INVALID_ARGUMENT:
        case QLOCAL_ERR_UNKNOWN_NAME:
        case QLOCAL_ERR_NO_REFERENCE: return 2;
        case QLOCAL_ERR_INVARIANT: return 3;
        case QLOCAL_ERR_INFEASIBLE: return 4;
        case QLOCAL_ERR_INTERNAL: return 1;
    }
    return 1;
}

int report(qlocal_status s) {
    if (s != QLOCAL_OK) {
        std::cerr << "qlocal: " << qlocal_last_error() << "\n";
    }
    return exit_code(s);
}

/// Prints and frees an output string.
void emit(char *text) {
    if (text != nullptr) {
        std::fputs(text, stdout);
        qlocal_string_free(text);
    }
}

void add_model_flags(CLI::App *cmd, ModelArgs &m) {
    cmd->add_option("--model", m.model_file, "JSON model file ('-' or omitted: stdin)");
    cmd->add_option("--catalog", m.catalog, "built-in model name");
    cmd->add_option("--n", m.n, "qubit count for catalog models");
}

void add_grid_flags(CLI::App *cmd, GridArgs &g, bool grid_only) {
    if (!grid_only) {
        cmd->add_option("--lambda", g.lambda, "parameter value");
    }
    cmd->add_option("--lambda-grid", g.grid, "start:stop:count");
}

void add_solver_flags(CLI::App *cmd, SolverArgs &s) {
    cmd->add_option("--seed", s.seed, "restart seed");
    cmd->add_option("--restarts", s.restarts, "numeric solver restarts")->check(CLI::PositiveNumber);
    cmd->add_option("--max-iter", s.max_iter, "iterations per restart")->check(CLI::PositiveNumber);
    cmd->add_option("--tolerance", s.tolerance, "feasibility threshold")->check(CLI::PositiveNumber);
    cmd->add_option("--threads", s.threads, "grid workers")->check(CLI::PositiveNumber);
    cmd->add_option("--format", s.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_flag("--require-feasible", s.require_feasible, "exit 4 unless every point is feasible");
    cmd->add_flag("--no-lmcc", s.no_lmcc, "skip the LMCC tree");
}

qlocal_options options_of(const SolverArgs &s) {
    qlocal_options o;
    qlocal_options_init(&o);
    o.seed = s.seed;
    o.restarts = s.restarts;
    o.max_iter = s.max_iter;
    o.tolerance = s.tolerance;
    o.threads = s.threads;
    o.with_lmcc = s.no_lmcc ? 0 : 1;
    o.require_feasible = s.require_feasible ? 1 : 0;
    o.format = s.format == "csv" ? QLOCAL_FORMAT_CSV : QLOCAL_FORMAT_JSON;
    return o;
}

qlocal_status load_model(const ModelArgs &m, qlocal_model **out) {
    if (!m.catalog.empty()) {
        return qlocal_model_from_catalog(m.catalog.c_str(), m.n, out);
    }
    std::string text;
    if (m.model_file.empty() || m.model_file == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    } else {
        std::ifstream f(m.model_file);
        if (!f) {
            std::cerr << "qlocal: cannot open " << m.model_file << "\n";
            return QLOCAL_ERR_PARSE;
        }
        text.assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
    }
    char *warnings = nullptr;
    qlocal_status s = qlocal_model_from_json(text.c_str(), out, &warnings);
    if (warnings != nullptr) {
        std::cerr << warnings;
        qlocal_string_free(warnings);
    }
    return s;
}

/// Grid from --lambda-grid if given, else the single --lambda value.
qlocal_status load_grid(const GridArgs &g, std::vector<double> &grid) {
    if (g.grid.empty()) {
        grid = {g.lambda};
        return QLOCAL_OK;
    }
    double *buf = nullptr;
    size_t count = 0;
    qlocal_status s = qlocal_parse_grid(g.grid.c_str(), &buf, &count);
    if (s == QLOCAL_OK) {
        grid.assign(buf, buf + count);
        qlocal_grid_free(buf);
    }
    return s;
}

struct ModelHandle {
    qlocal_model *ptr = nullptr;
    ~ModelHandle() { qlocal_model_free(ptr); }
};

int run_sweep(const ModelArgs &m, const GridArgs &g, const SolverArgs &s) {
    ModelHandle model;
    if (qlocal_status st = load_model(m, &model.ptr); st != QLOCAL_OK) {
        return report(st);
    }
    std::vector<double> grid;
    if (qlocal_status st = load_grid(g, grid); st != QLOCAL_OK) {
        return report(st);
    }
    qlocal_options o = options_of(s);
    char *out = nullptr;
    qlocal_status st = qlocal_sweep(model.ptr, grid.data(), grid.size(), &o, &out);
    emit(out);
    return report(st);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Local measurement analysis for pure-state quantum parameter estimation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(qlocal_version()));

    ModelArgs model;
    GridArgs grid;
    SolverArgs solver;
    std::string axes;
    std::string order;
    std::string catalog_name;

    auto *analyze = app.add_subcommand("analyze", "analyze one parameter value");
    add_model_flags(analyze, model);
    add_grid_flags(analyze, grid, false);
    add_solver_flags(analyze, solver);

    auto *sweep = app.add_subcommand("sweep", "analyze a parameter grid");
    add_model_flags(sweep, model);
    add_grid_flags(sweep, grid, true);
    add_solver_flags(sweep, solver);
    sweep->get_option("--lambda-grid")->required();

    auto *catalog = app.add_subcommand("catalog", "built-in models");
    catalog->require_subcommand(1);
    auto *catalog_list = catalog->add_subcommand("list", "list built-in models");
    auto *catalog_run = catalog->add_subcommand("run", "analyze a built-in model and check its reference measurement");
    catalog_run->add_option("name", catalog_name, "catalog entry")->required();
    catalog_run->add_option("--n", model.n, "qubit count");
    add_grid_flags(catalog_run, grid, false);
    add_solver_flags(catalog_run, solver);

    auto *verify = app.add_subcommand("verify", "check user-supplied measurement axes");
    add_model_flags(verify, model);
    add_grid_flags(verify, grid, false);
    add_solver_flags(verify, solver);
    verify->add_option("--axes", axes, "per-qubit axes: 'x,z,x' or '1,0,0; 0,0,1; ...'")->required();

    auto *lmcc = app.add_subcommand("lmcc", "emit the adaptive measurement tree");
    add_model_flags(lmcc, model);
    lmcc->add_option("--lambda", grid.lambda, "parameter value");
    lmcc->add_option("--order", order, "qubit order, e.g. 2,1,3");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    if (*analyze || *sweep) {
        return run_sweep(model, grid, solver);
    }
    if (*catalog_list) {
        char *out = nullptr;
        qlocal_status st = qlocal_catalog_list(&out);
        emit(out);
        return report(st);
    }
    if (*catalog_run) {
        std::vector<double> g;
        if (qlocal_status st = load_grid(grid, g); st != QLOCAL_OK) {
            return report(st);
        }
        qlocal_options o = options_of(solver);
        char *out = nullptr;
        qlocal_status st = qlocal_catalog_run(catalog_name.c_str(), model.n, g.data(), g.size(), &o, &out);
        emit(out);
        return report(st);
    }
    if (*verify) {
        ModelHandle m;
        if (qlocal_status st = load_model(model, &m.ptr); st != QLOCAL_OK) {
            return report(st);
        }
        std::vector<double> g;
        if (qlocal_status st = load_grid(grid, g); st != QLOCAL_OK) {
            return report(st);
        }
        qlocal_options o = options_of(solver);
        char *out = nullptr;
        qlocal_status st = qlocal_verify(m.ptr, g.data(), g.size(), axes.c_str(), &o, &out);
        emit(out);
        return report(st);
    }
    // lmcc
    ModelHandle m;
    if (qlocal_status st = load_model(model, &m.ptr); st != QLOCAL_OK) {
        return report(st);
    }
    std::vector<int> ord;
    std::stringstream ss(order);
    for (std::string tok; std::getline(ss, tok, ',');) {
        try {
            ord.push_back(std::stoi(tok));
        } catch (const std::exception &) {
            std::cerr << "qlocal: bad qubit order '" << order << "'\n";
            return kExitUsage;
        }
    }
    char *out = nullptr;
    qlocal_status st = qlocal_lmcc(m.ptr, grid.lambda, ord.empty() ? nullptr : ord.data(), ord.size(), &out);
    emit(out);
    return report(st);
}
