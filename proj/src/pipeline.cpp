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


#include "qlocal/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "qlocal/catalog.hpp"

namespace qlocal {

namespace {

using Json = nlohmann::ordered_json;


std::string format_double(double v) {
    if (!std::isfinite(v)) {
        return "null";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_json(const Json &j, std::string &out) {
    switch (j.type()) {
        case Json::value_t::object: {
            out += '{';
            bool first = true;
            for (const auto &[k, v] : j.items()) {
                if (!first) {
                    out += ',';
                }
                first = false;
                out += Json(k).dump();
                out += ':';
                write_json(v, out);
            }
            out += '}';
            break;
        }
        case Json::value_t::array: {
            out += '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i > 0) {
                    out += ',';
                }
                write_json(j[i], out);
            }
            out += ']';
            break;
        }
        case Json::value_t::number_float: out += format_double(j.get<double>()); break;
        default: out += j.dump(); break;
    }
}

std::string to_text(const Json &j) {
    std::string out;
    write_json(j, out);
    return out;
}

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string q = "\"";
    for (char c : s) {
        q += c == '"' ? std::string("\"\"") : std::string(1, c);
    }
    return q + "\"";
}

Json axis_json(const BlochVector &v) { return Json::array({v.x(), v.y(), v.z()}); }

Json axes_json(const AxisAssignment &a) {
    Json arr = Json::array();
    for (const auto &v : a.axes()) {
        arr.push_back(axis_json(v));
    }
    return arr;
}

const char *error_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::Parse: return "parse";
        case ErrorKind::Invariant: return "invariant";
        case ErrorKind::Contract: return "invalid-argument";
        case ErrorKind::UnknownName: return "unknown-name";
        case ErrorKind::NoReference: return "no-reference";
    }
    return "internal";
}

double ratio(double cfi, double qfi) { return qfi > tol::kStructural ? cfi / qfi : std::nan(""); }

// ---------------------------------------------------------------------------
// Model spec

StateVector named_probe(const std::string &name, int n) {
    const Eigen::Index dim = Eigen::Index{1} << n;
    if (name == "ghz") {
        return ghz_state(n);
    }
    if (name == "w") {
        return signed_w_state(std::vector<int>(static_cast<std::size_t>(n), 0));
    }
    if (name == "wtilde") {
        return signed_w_state(wtilde_signs(n));
    }
    if (name == "zero") {
        return StateVector::basis(n, 0);
    }
    if (name == "plus") {
        return StateVector(n, CVector::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim))));
    }
    fail(ErrorKind::UnknownName, "unknown named probe '" + name + "'");
}

template <typename T>
T field(const Json &j, const char *key) {
    if (!j.contains(key)) {
        fail(ErrorKind::Parse, std::string("model spec is missing '") + key + "'");
    }
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception &) {
        fail(ErrorKind::Parse, std::string("model spec field '") + key + "' has the wrong type");
    }
}

}  // namespace

ParsedModel parse_model_spec(std::string_view text) {
    Json j;
    try {
        j = Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error &e) {
        fail(ErrorKind::Parse, std::string("malformed model spec: ") + e.what());
    }
    if (!j.is_object()) {
        fail(ErrorKind::Parse, "model spec must be a JSON object");
    }
    if (j.contains("catalog")) {
        const int n = j.contains("nqubits") ? field<int>(j, "nqubits") : 0;
        return {build_catalog_model(field<std::string>(j, "catalog"), n), {}};
    }
    const int n = field<int>(j, "nqubits");
    if (n < 1 || n > kMaxQubits) {
        fail(ErrorKind::Parse, "nqubits must be in 1.." + std::to_string(kMaxQubits));
    }
    const Eigen::Index dim = Eigen::Index{1} << n;
    std::vector<std::string> warnings;

    if (!j.contains("probe")) {
        fail(ErrorKind::Parse, "model spec is missing 'probe'");
    }
    const Json &p = j.at("probe");
    std::optional<StateVector> probe;
    if (p.is_string()) {
        probe = named_probe(p.get<std::string>(), n);
    } else if (p.is_array()) {
        if (static_cast<Eigen::Index>(p.size()) != dim) {
            fail(ErrorKind::Parse, "probe has " + std::to_string(p.size()) + " amplitudes, expected " +
                                       std::to_string(dim));
        }
        CVector amps(dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            const Json &a = p[static_cast<std::size_t>(i)];
            if (a.is_number()) {
                amps[i] = a.get<double>();
            } else if (a.is_array() && a.size() == 2 && a[0].is_number() && a[1].is_number()) {
                amps[i] = Complex(a[0].get<double>(), a[1].get<double>());
            } else {
                fail(ErrorKind::Parse, "probe amplitudes must be [re, im] pairs");
            }
        }
        const double norm = amps.norm();
        if (!std::isfinite(norm) || std::abs(norm - 1.0) >= 1e-6) {
            fail(ErrorKind::Invariant, "probe is not normalized (norm " + format_double(norm) + ")");
        }
        if (norm != 1.0) {
            if (std::abs(norm - 1.0) > tol::kIdentity) {
                warnings.push_back("probe renormalized from norm " + format_double(norm));
            }
            amps /= norm;
        }
        probe.emplace(n, std::move(amps));
    } else {
        fail(ErrorKind::Parse, "probe must be an amplitude list or a named state");
    }

    if (!j.contains("hamiltonian") || !j.at("hamiltonian").is_array()) {
        fail(ErrorKind::Parse, "model spec needs a 'hamiltonian' term list");
    }
    CMatrix h = CMatrix::Zero(dim, dim);
    for (const Json &term : j.at("hamiltonian")) {
        if (!term.is_object()) {
            fail(ErrorKind::Parse, "hamiltonian terms must be objects");
        }
        const double c = field<double>(term, "coefficient");
        const std::string pauli = field<std::string>(term, "pauli");
        if (static_cast<int>(pauli.size()) != n) {
            fail(ErrorKind::Parse, "pauli string '" + pauli + "' does not have length " + std::to_string(n));
        }
        h += c * pauli_string_matrix(pauli);
    }
    double time = 1.0;
    if (j.contains("time")) {
        time = field<double>(j, "time");
    }
    return {Model(std::move(*probe), HamiltonianEncoding{std::move(h), time}), std::move(warnings)};
}

AxisAssignment parse_axes(std::string_view text, int nqubits) {
    std::vector<BlochVector> axes;
    std::string s(text);
    const bool triples = s.find(';') != std::string::npos ||
                         std::any_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    std::vector<std::string> tokens;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, triples ? ';' : ',')) {
        tok.erase(std::remove_if(tok.begin(), tok.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }),
                  tok.end());
        if (!tok.empty()) {
            tokens.push_back(tok);
        }
    }
    for (const std::string &t : tokens) {
        if (triples) {
            BlochVector v;
            std::stringstream ts(t);
            std::string part;
            int k = 0;
            while (std::getline(ts, part, ',')) {
                if (k >= 3) {
                    fail(ErrorKind::Parse, "axis '" + t + "' has more than three components");
                }
                double x = 0.0;
                auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), x);
                if (ec != std::errc() || ptr != part.data() + part.size()) {
                    fail(ErrorKind::Parse, "bad axis component '" + part + "'");
                }
                v[k++] = x;
            }
            if (k != 3 || v.norm() == 0.0) {
                fail(ErrorKind::Parse, "axis '" + t + "' needs three components");
            }
            axes.push_back(v.normalized());
        } else {
            double sign = 1.0;
            std::string name = t;
            if (name[0] == '-' || name[0] == '+') {
                sign = name[0] == '-' ? -1.0 : 1.0;
                name = name.substr(1);
            }
            if (name == "x" || name == "X") {
                axes.push_back(sign * BlochVector::UnitX());
            } else if (name == "y" || name == "Y") {
                axes.push_back(sign * BlochVector::UnitY());
            } else if (name == "z" || name == "Z") {
                axes.push_back(sign * BlochVector::UnitZ());
            } else {
                fail(ErrorKind::Parse, "unknown axis '" + t + "'");
            }
        }
    }
    if (static_cast<int>(axes.size()) != nqubits) {
        fail(ErrorKind::Parse, "expected " + std::to_string(nqubits) + " axes, got " + std::to_string(axes.size()));
    }
    return AxisAssignment(std::move(axes));
}

std::vector<double> parse_lambda_grid(std::string_view text) {
    std::vector<std::string> parts;
    std::stringstream ss{std::string(text)};
    std::string tok;
    while (std::getline(ss, tok, ':')) {
        parts.push_back(tok);
    }
    if (parts.size() != 3) {
        fail(ErrorKind::Parse, "lambda grid must be start:stop:count");
    }
    double start = 0.0;
    double stop = 0.0;
    long long count = 0;
    try {
        std::size_t used = 0;
        start = std::stod(parts[0], &used);
        if (used != parts[0].size()) throw std::invalid_argument("start");
        stop = std::stod(parts[1], &used);
        if (used != parts[1].size()) throw std::invalid_argument("stop");
        count = std::stoll(parts[2], &used);
        if (used != parts[2].size()) throw std::invalid_argument("count");
    } catch (const std::exception &) {
        fail(ErrorKind::Parse, "lambda grid must be start:stop:count");
    }
    if (count < 0 || !std::isfinite(start) || !std::isfinite(stop)) {
        fail(ErrorKind::Parse, "lambda grid needs finite endpoints and count >= 0");
    }
    std::vector<double> grid;
    for (long long i = 0; i < count; ++i) {
        grid.push_back(count == 1 ? start : start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    return grid;
}

VerifyReport verify_measurement(const Model &model, double lambda, const AxisAssignment &axes, double threshold) {
    require(axes.nqubits() == model.nqubits(), "axis count does not match the model");
    StateJet jet = state_jet(model, lambda);
    MMatrix m = m_matrix(jet);
    VerifyReport r;
    r.qfi = qfi(jet);
    r.residual = hoc_residual(m, axes);
    LocalMeasurement lm{axes};
    r.saturation = saturation_check(m, lm);
    r.cfi = cfi(jet, lm);
    r.feasible = r.residual < threshold;
    return r;
}

PointReport analyze_point(const Model &model, double lambda, const PipelineOptions &options) {
    PointReport r;
    r.lambda = lambda;
    try {
        StateJet jet = state_jet(model, lambda);
        MMatrix m = m_matrix(jet);
        r.qfi = qfi(jet);
        r.structure = classify_m(m, &jet.state);

        HocReport hoc;
        bool solved = false;
        if (auto axes = structure_measurement(r.structure, model.nqubits())) {
            hoc.residual = hoc_residual(m, *axes);
            if (hoc.residual < options.hoc.feasibility_threshold) {
                hoc.axes = std::move(axes);
                hoc.status = HocStatus::Feasible;
                hoc.method = std::string("structure (") + to_string(r.structure.kind) + ")";
                solved = true;
            }
        }
        if (!solved) {
            if (model.nqubits() == 3 && model.hamiltonian() != nullptr) {
                hoc = solve_planar_three_qubit(model, lambda, options.hoc);
            } else {
                hoc = hoc_solve_numeric(m, options.hoc);
            }
        }
        if (!hoc.feasible()) {
            if (const HamiltonianEncoding *enc = model.hamiltonian()) {
                const CMatrix u = unitary_evolution(enc->hamiltonian, lambda * enc->time);
                auto cert = planar_pair_certificate(model.probe(), metrological_generator(model), u, m);
                if (cert) {
                    hoc.certificate = cert->note;
                    if (cert->infeasible) {
                        hoc.status = HocStatus::CertifiedInfeasible;
                    }
                }
            }
        }
        r.lm.hoc = std::move(hoc);
        if (r.lm.hoc.axes) {
            r.lm.cfi = cfi(jet, LocalMeasurement{*r.lm.hoc.axes});
        }
        if (options.with_lmcc) {
            LmccReport l{lmcc_build(m), 0.0};
            l.cfi = cfi(jet, l.tree);
            r.lmcc = std::move(l);
        }
        if (options.reference) {
            r.reference_expected_feasible = options.reference_expected_feasible;
            if (auto axes = options.reference(lambda)) {
                r.reference = verify_measurement(model, lambda, *axes, options.hoc.feasibility_threshold);
            }
        }
    } catch (const Error &e) {
        r.ok = false;
        r.error_kind = e.kind();
        r.error = e.what();
    } catch (const std::exception &e) {
        r.ok = false;
        r.error = e.what();
    }
    return r;
}

std::vector<PointReport> run_pipeline(const Model &model, const std::vector<double> &grid,
                                      const PipelineOptions &options) {
    std::vector<PointReport> out(grid.size());
    const int workers = std::max(1, std::min<int>(options.threads, static_cast<int>(grid.size())));
    if (workers <= 1) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            out[i] = analyze_point(model, grid[i], options);
        }
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < grid.size(); i = next++) {
                out[i] = analyze_point(model, grid[i], options);
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    return out;
}

namespace {

Json verify_json(const VerifyReport &v) {
    Json j;
    j["qfi"] = v.qfi;
    j["residual"] = v.residual;
    j["feasible"] = v.feasible;
    j["saturates"] = v.saturation.saturates;
    j["saturation_residual"] = v.saturation.residual;
    j["cfi"] = v.cfi;
    j["cfi_over_qfi"] = ratio(v.cfi, v.qfi);
    return j;
}

Json lmcc_json(const LmccReport &l, double qfi) {
    Json j;
    j["order"] = l.tree.order;
    Json nodes = Json::array();
    for (const auto &n : l.tree.nodes) {
        nodes.push_back(axis_json(n));
    }
    j["axes"] = std::move(nodes);
    j["leaf_residual"] = l.tree.leaf_residual;
    j["cfi"] = l.cfi;
    if (qfi >= 0.0) {
        j["cfi_over_qfi"] = ratio(l.cfi, qfi);
    }
    return j;
}

Json point_json(const PointReport &r) {
    Json j;
    j["lambda"] = r.lambda;
    j["ok"] = r.ok;
    if (!r.ok) {
        j["error"] = {{"kind", r.error_kind ? error_name(*r.error_kind) : "internal"}, {"message", r.error}};
        return j;
    }
    j["qfi"] = r.qfi;
    Json ms;
    ms["kind"] = to_string(r.structure.kind);
    if (r.structure.ghz) {
        const GhzPair &g = *r.structure.ghz;
        ms["ghz"] = {{"first", g.first}, {"second", g.second}, {"weight", g.weight}, {"consistent", g.consistent},
                     {"note", g.note}};
    }
    j["m_structure"] = std::move(ms);
    const HocReport &h = r.lm.hoc;
    Json lm;
    lm["feasible"] = h.feasible();
    lm["status"] = to_string(h.status);
    lm["method"] = h.method;
    lm["residual"] = h.residual;
    lm["axes"] = h.axes ? axes_json(*h.axes) : Json(nullptr);
    if (!h.planar_angles.empty()) {
        lm["planar_angles"] = h.planar_angles;
    }
    lm["cfi"] = h.axes ? Json(r.lm.cfi) : Json(nullptr);
    lm["cfi_over_qfi"] = h.axes ? Json(ratio(r.lm.cfi, r.qfi)) : Json(nullptr);
    j["lm"] = std::move(lm);
    if (r.lmcc) {
        j["lmcc"] = lmcc_json(*r.lmcc, r.qfi);
    }
    if (r.reference) {
        Json ref = verify_json(*r.reference);
        ref["expected_feasible"] = r.reference_expected_feasible;
        j["reference"] = std::move(ref);
    }
    Json diag;
    diag["restarts_used"] = h.restarts_used;
    diag["certificate"] = h.certificate ? Json(*h.certificate) : Json(nullptr);
    j["diagnostics"] = std::move(diag);
    return j;
}

}  // namespace

std::string format_reports(const std::vector<PointReport> &reports, ReportFormat format) {
    std::string out;
    if (format == ReportFormat::Json) {
        for (const auto &r : reports) {
            out += to_text(point_json(r));
            out += '\n';
        }
        return out;
    }
    out = "lambda,ok,qfi,m_kind,lm_status,lm_residual,lm_cfi,lm_cfi_over_qfi,lmcc_cfi,restarts_used,error\n";
    for (const auto &r : reports) {
        out += format_double(r.lambda) + ',' + (r.ok ? "true" : "false") + ',';
        if (r.ok) {
            const HocReport &h = r.lm.hoc;
            out += format_double(r.qfi) + ',' + to_string(r.structure.kind) + ',' + to_string(h.status) + ',' +
                   format_double(h.residual) + ',' + (h.axes ? format_double(r.lm.cfi) : "") + ',' +
                   (h.axes ? format_double(ratio(r.lm.cfi, r.qfi)) : "") + ',' +
                   (r.lmcc ? format_double(r.lmcc->cfi) : "") + ',' + std::to_string(h.restarts_used) + ',';
        } else {
            out += ",,,,,,,,";
            out += csv_field(r.error);
        }
        out += '\n';
    }
    return out;
}

std::string format_verify(const std::vector<std::pair<double, VerifyReport>> &reports, ReportFormat format) {
    std::string out;
    if (format == ReportFormat::Json) {
        for (const auto &[lambda, v] : reports) {
            Json j;
            j["lambda"] = lambda;
            const Json fields = verify_json(v);
            for (const auto &[k, val] : fields.items()) {
                j[k] = val;
            }
            out += to_text(j) + '\n';
        }
        return out;
    }
    out = "lambda,qfi,residual,feasible,saturates,saturation_residual,cfi,cfi_over_qfi\n";
    for (const auto &[lambda, v] : reports) {
        out += format_double(lambda) + ',' + format_double(v.qfi) + ',' + format_double(v.residual) + ',' +
               (v.feasible ? "true" : "false") + ',' + (v.saturation.saturates ? "true" : "false") + ',' +
               format_double(v.saturation.residual) + ',' + format_double(v.cfi) + ',' +
               format_double(ratio(v.cfi, v.qfi)) + '\n';
    }
    return out;
}

std::string format_lmcc(const LmccReport &report, double lambda) {
    Json j;
    j["lambda"] = lambda;
    j["nqubits"] = report.tree.nqubits;
    const Json fields = lmcc_json(report, -1.0);
    for (const auto &[k, v] : fields.items()) {
        j[k] = v;
    }
    return to_text(j) + '\n';
}

std::string format_catalog_list() {
    std::string out;
    for (const auto &e : catalog_list()) {
        Json j;
        j["name"] = e.name;
        j["description"] = e.description;
        j["default_nqubits"] = e.default_nqubits;
        j["fixed_nqubits"] = e.fixed_nqubits;
        j["expected_feasible"] = e.expected_feasible;
        j["reference"] = e.reference;
        out += to_text(j) + '\n';
    }
    return out;
}

}  // namespace qlocal
