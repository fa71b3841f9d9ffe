// Copyright 2026 The icotk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "icotk/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "icotk/channels.hpp"
#include "icotk/decomposition.hpp"
#include "icotk/explorer.hpp"
#include "icotk/io.hpp"
#include "icotk/process.hpp"
#include "icotk/simplex.hpp"

namespace icotk::cli {

namespace {

struct Report {
    ordered_json doc;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    explicit Report(const std::string &command) {
        doc["command"] = command;
        doc["inputs"] = ordered_json::array();
        doc["tolerances"] = ordered_json::object();
    }

    void add_input(const std::string &path) {
        ordered_json in;
        in["path"] = path;
        try {
            in["digest"] = "fnv1a64:" + fnv1a64_hex(read_text_file(path));
        } catch (const FormatError &) {
            in["digest"] = nullptr;
        }
        doc["inputs"].push_back(std::move(in));
    }

    std::string finish(int code) {
        doc["exit_code"] = code;
        doc["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return doc.dump(2);
    }
};

struct Context {
    std::ostream &out;
    std::ostream &err;
};

ordered_json scalar_or_operator(const LabeledOperator &op) {
    if (op.space().empty()) {
        return ordered_json::array({op.matrix()(0, 0).real(), op.matrix()(0, 0).imag()});
    }
    return operator_to_json(op);
}

ordered_json subset_table(const std::vector<SubsetResidual> &rows, double tol) {
    ordered_json a = ordered_json::array();
    for (const auto &s : rows) {
        ordered_json row;
        row["subset"] = s.subset;
        row["residual"] = s.residual;
        row["passes"] = s.residual <= tol;
        a.push_back(std::move(row));
    }
    return a;
}

/// Maps exceptions onto the exit-code contract and records the message in the report.
int guarded(Context &ctx, Report &report, const std::function<int()> &body) {
    auto fail = [&](int code, const std::string &kind, const std::string &msg) {
        report.doc["error"] = {{"kind", kind}, {"message", msg}};
        ctx.err << "icotk: " << msg << '\n';
        return code;
    };
    try {
        return body();
    } catch (const ScaleCapExceeded &e) {
        return fail(kCapExceeded, "scale_cap", e.what());
    } catch (const ParityViolation &e) {
        report.doc["rejection"] = {{"subset", e.subset}, {"residual", e.residual}};
        return fail(kRejected, "parity_violation", e.what());
    } catch (const DecompositionError &e) {
        return fail(kRejected, "decomposition", e.what());
    } catch (const LpFailure &e) {
        return fail(kRejected, "lp_failure", e.what());
    } catch (const FormatError &e) {
        return fail(kMalformed, "malformed_input", e.what());
    } catch (const nlohmann::json::exception &e) {
        return fail(kMalformed, "malformed_input", e.what());
    } catch (const std::invalid_argument &e) {
        return fail(kMalformed, "invalid_input", e.what());
    } catch (const std::exception &e) {
        return fail(kRejected, "failure", e.what());
    }
}

void emit(Context &ctx, const std::string &text, const std::string &path, std::ostream &fallback) {
    if (path.empty()) {
        fallback << text;
        if (text.empty() || text.back() != '\n') fallback << '\n';
    } else {
        write_text_file(path, text);
    }
    (void)ctx;
}

// ---------------------------------------------------------------------------------------------

int cmd_validate(Context &ctx, Report &report, const std::string &path, double tol) {
    report.add_input(path);
    report.doc["tolerances"]["tol"] = tol;
    return guarded(ctx, report, [&] {
        LabeledOperator op = read_operator_file(path);
        ProcessMatrix W(std::move(op));
        ValidationReport v = validate(W, tol);
        ordered_json r;
        r["psd_margin"] = v.psd_margin;
        r["trace_error"] = v.trace_error;
        r["expected_trace"] = W.signature.normalization();
        r["subsets"] = subset_table(v.subset_residuals, tol);
        r["extension_residual"] = v.extension_residual;
        if (auto w = v.worst_violation()) {
            r["worst_violation"] = {{"subset", w->subset}, {"residual", w->residual}};
            ctx.err << "icotk: rejected, subset " << subset_str(w->subset) << " has residual " << w->residual << '\n';
        }
        report.doc["results"] = std::move(r);
        report.doc["verdict"] = v.verdict;
        return v.verdict ? kOk : kRejected;
    });
}

int cmd_parity(Context &ctx, Report &report, const std::string &path, bool classical, bool quantum,
               const std::string &method, double tol) {
    report.add_input(path);
    report.doc["tolerances"]["tol"] = tol;
    return guarded(ctx, report, [&] {
        nlohmann::json doc = read_json_file(path);
        bool is_classical = classical || (!quantum && doc.is_object() && doc.contains("p"));
        if (is_classical) {
            ClassicalChannel ch = classical_from_json(doc);
            ch.require_valid(tol);
            ParityReport p = parity_erasure_classical(ch, tol);
            report.doc["kind"] = "classical";
            report.doc["results"] = {{"signed_sum", parity_report_to_json(p)}};
            report.doc["verdict"] = p.verdict;
            return p.verdict ? kOk : kRejected;
        }
        QuantumChannel ch = QuantumChannel::multipartite(operator_from_json(doc));
        ch.require_valid(tol);
        report.doc["kind"] = "quantum";
        report.doc["method"] = method;
        ordered_json r;
        std::vector<bool> verdicts;
        if (method == "choi" || method == "both") {
            ParityReport p = parity_erasure_quantum(ch, tol);
            r["choi"] = parity_report_to_json(p);
            verdicts.push_back(p.verdict);
        }
        if (method == "direct" || method == "both") {
            ParityReport p = parity_erasure_quantum_direct(ch, tol);
            r["direct"] = parity_report_to_json(p);
            verdicts.push_back(p.verdict);
        }
        bool verdict = true;
        for (bool v : verdicts) verdict = verdict && v;
        if (verdicts.size() == 2) {
            r["methods_agree"] = verdicts[0] == verdicts[1];
            if (verdicts[0] != verdicts[1]) ctx.err << "icotk: checkers disagree\n";
        }
        report.doc["results"] = std::move(r);
        report.doc["verdict"] = verdict;
        return verdict ? kOk : kRejected;
    });
}

int cmd_apply(Context &ctx, Report &report, const std::string &process_path, const std::vector<std::string> &op_paths,
              const std::vector<int> &order, double tol) {
    report.add_input(process_path);
    for (const auto &p : op_paths) report.add_input(p);
    report.doc["tolerances"]["tol"] = tol;
    report.doc["order"] = order;
    return guarded(ctx, report, [&] {
        LabeledOperator w = read_operator_file(process_path);
        QuantumChannel T = QuantumChannel::multipartite(w);
        T.require_valid(tol);

        // Every op file holds one operator or {"instrument": [operator, ...]}.
        std::vector<std::vector<LabeledOperator>> elements;
        for (const auto &p : op_paths) {
            nlohmann::json doc = read_json_file(p);
            std::vector<LabeledOperator> els;
            if (doc.is_object() && doc.contains("instrument")) {
                if (!doc["instrument"].is_array() || doc["instrument"].empty()) {
                    throw FormatError(p + ": \"instrument\" must be a nonempty array");
                }
                for (const auto &e : doc["instrument"]) els.push_back(operator_from_json(e));
            } else {
                els.push_back(operator_from_json(doc));
            }
            elements.push_back(std::move(els));
        }
        std::vector<int> radices;
        for (const auto &e : elements) radices.push_back(static_cast<int>(e.size()));

        std::optional<ProcessMatrix> W;
        try {
            W = ProcessMatrix(w);
        } catch (const std::invalid_argument &) {
        }

        ApplyOptions opts;
        opts.order = order;
        opts.tol = tol;
        ordered_json rows = ordered_json::array();
        double total = 0.0;
        bool scalar = true;
        double discrepancy = 0.0;
        for (std::int64_t c = 0; c < radix_product(radices); ++c) {
            auto pick = decode_index(c, radices);
            std::vector<LabeledOperator> ops;
            for (std::size_t k = 0; k < elements.size(); ++k) ops.push_back(elements[k][pick[k]]);
            LabeledOperator res = apply_supermap(T, ops, opts);
            ordered_json row;
            row["outcomes"] = pick;
            row["value"] = scalar_or_operator(res);
            if (W) {
                double d = operator_norm(res - pair(*W, ops, tol));
                discrepancy = std::max(discrepancy, d);
                row["pair_discrepancy"] = d;
            }
            if (res.space().empty()) {
                total += res.matrix()(0, 0).real();
            } else {
                scalar = false;
            }
            rows.push_back(std::move(row));
        }
        ordered_json r;
        r["results"] = std::move(rows);
        if (scalar) r["total"] = total;
        if (W) {
            r["pair_discrepancy"] = discrepancy;
        } else {
            r["pair_discrepancy"] = nullptr;
        }
        report.doc["results"] = std::move(r);
        report.doc["verdict"] = true;
        return kOk;
    });
}

struct ExploreArgs {
    bool census = false;
    bool vertices = false;
    std::string lp_path;
    std::vector<int> outputs{2, 2};
    std::vector<int> inputs{2, 2};
    std::int64_t cap_outputs = 4;
    std::int64_t cap_inputs = 4;
    std::string csv_path;
};

int cmd_explore(Context &ctx, Report &report, const ExploreArgs &a, double tol) {
    report.doc["tolerances"]["tol"] = tol;
    report.doc["scenario"] = {{"outputs", a.outputs}, {"inputs", a.inputs}};
    report.doc["caps"] = {{"max_outputs", a.cap_outputs}, {"max_inputs", a.cap_inputs}};
    ScaleCaps caps{a.cap_inputs, a.cap_outputs};
    if (!a.lp_path.empty()) report.add_input(a.lp_path);
    return guarded(ctx, report, [&]() -> int {
        if (a.census || a.vertices) {
            auto census = deterministic_parity_erasure_census(a.outputs, a.inputs, caps, tol);
            std::vector<ClassicalChannel> census_tables;
            bool all_ordered = true;
            for (const auto &d : census) {
                census_tables.push_back(d.to_channel());
                all_ordered = all_ordered && is_causally_ordered(d);
            }
            ordered_json r;
            r["census_count"] = census.size();
            r["census_all_causally_ordered"] = all_ordered;
            std::vector<ClassicalChannel> rows = census_tables;
            if (a.vertices) {
                rows = parity_polytope_vertices(a.outputs, a.inputs, caps);
                bool same = rows.size() == census_tables.size();
                for (std::size_t k = 0; same && k < rows.size(); ++k) {
                    same = (rows[k].table - census_tables[k].table).cwiseAbs().maxCoeff() <= 1e-9;
                }
                r["vertex_count"] = rows.size();
                r["vertices_match_census"] = same;
            }
            emit(ctx, channels_csv(rows), a.csv_path, ctx.out);
            report.doc["results"] = std::move(r);
            report.doc["verdict"] = true;
            return kOk;
        }
        ClassicalChannel ch = read_classical_file(a.lp_path);
        ch.require_valid(tol);
        SeparabilityCertificate cert = causal_separability_lp(ch, tol, caps);
        ctx.out << certificate_to_json(cert).dump(2) << '\n';
        report.doc["results"] = {{"feasible", cert.feasible}, {"residual", cert.residual}, {"margin", cert.margin}};
        report.doc["verdict"] = cert.feasible;
        return cert.feasible ? kOk : kRejected;
    });
}

}  // namespace

std::optional<double> tolerance_from_env() {
    const char *v = std::getenv("ICOTK_TOL");
    if (v == nullptr || *v == '\0') return std::nullopt;
    char *end = nullptr;
    double t = std::strtod(v, &end);
    if (end == v || *end != '\0' || !std::isfinite(t) || t <= 0.0) {
        throw std::invalid_argument(std::string("ICOTK_TOL must be a positive number, got \"") + v + "\"");
    }
    return t;
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    Context ctx{out, err};
    std::optional<double> env_tol;
    try {
        env_tol = tolerance_from_env();
    } catch (const std::invalid_argument &e) {
        err << "icotk: " << e.what() << '\n';
        return kMalformed;
    }

    CLI::App app{"Process-matrix and parity-erasure toolkit", "icotk"};
    app.require_subcommand(1);
    std::string report_path;
    app.add_option("--report", report_path, "Write the JSON run report to this file");

    double tol = env_tol.value_or(kDefaultTol);

    auto *validate_cmd = app.add_subcommand("validate", "Check the process-matrix conditions of an operator file");
    std::string validate_path;
    validate_cmd->add_option("path", validate_path, "Operator file")->required();
    validate_cmd->add_option("--tol", tol, "Residual tolerance");

    auto *parity_cmd = app.add_subcommand("parity", "Check parity erasure of a classical or quantum channel");
    std::string parity_path, method = "choi";
    bool classical = false, quantum = false;
    parity_cmd->add_option("path", parity_path, "Channel file")->required();
    auto *cflag = parity_cmd->add_flag("--classical", classical, "Classical table input");
    parity_cmd->add_flag("--quantum", quantum, "Quantum operator input")->excludes(cflag);
    parity_cmd->add_option("--method", method, "Quantum checker")->check(CLI::IsMember({"choi", "direct", "both"}));
    parity_cmd->add_option("--tol", tol, "Residual tolerance");

    auto *apply_cmd = app.add_subcommand("apply", "Use a process as a supermap on local operations");
    std::string process_path;
    std::vector<std::string> op_paths;
    std::vector<int> order;
    apply_cmd->add_option("process", process_path, "Process operator file")->required();
    apply_cmd->add_option("ops", op_paths, "One operator or instrument file per party")->required();
    apply_cmd->add_option("--order", order, "Insertion order, e.g. 2,1")->delimiter(',');
    apply_cmd->add_option("--tol", tol, "Residual tolerance");

    auto *explore_cmd = app.add_subcommand("explore", "Classical census, polytope vertices and separability LP");
    ExploreArgs ex;
    double explore_tol = env_tol.value_or(1e-8);
    auto *census_flag = explore_cmd->add_flag("--two-bit-census,--census", ex.census, "Deterministic census");
    auto *vertex_flag = explore_cmd->add_flag("--vertices", ex.vertices, "Parity-erasure polytope vertices");
    auto *lp_opt = explore_cmd->add_option("--lp", ex.lp_path, "Classical table to certify");
    census_flag->excludes(vertex_flag)->excludes(lp_opt);
    vertex_flag->excludes(lp_opt);
    explore_cmd->add_option("--outputs", ex.outputs, "Output alphabet sizes")->delimiter(',');
    explore_cmd->add_option("--inputs", ex.inputs, "Input alphabet sizes")->delimiter(',');
    explore_cmd->add_option("--max-outputs", ex.cap_outputs, "Cap on joint outputs");
    explore_cmd->add_option("--max-inputs", ex.cap_inputs, "Cap on joint inputs");
    explore_cmd->add_option("--csv", ex.csv_path, "Write the CSV table to this file instead of stdout");
    explore_cmd->add_option("--tol", explore_tol, "Tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kMalformed;
    }
    if (explore_cmd->parsed() && !ex.census && !ex.vertices && ex.lp_path.empty()) {
        err << "icotk explore: one of --two-bit-census, --vertices or --lp is required\n";
        return kMalformed;
    }

    int code = kOk;
    std::string text;
    if (validate_cmd->parsed()) {
        Report r("validate");
        code = cmd_validate(ctx, r, validate_path, tol);
        text = r.finish(code);
    } else if (parity_cmd->parsed()) {
        Report r("parity");
        code = cmd_parity(ctx, r, parity_path, classical, quantum, method, tol);
        text = r.finish(code);
    } else if (apply_cmd->parsed()) {
        Report r("apply");
        code = cmd_apply(ctx, r, process_path, op_paths, order, tol);
        text = r.finish(code);
    } else {
        Report r("explore");
        code = cmd_explore(ctx, r, ex, explore_tol);
        text = r.finish(code);
        // The table or certificate owns stdout.
        emit(ctx, text, report_path, err);
        return code;
    }
    emit(ctx, text, report_path, out);
    return code;
}

}  // namespace icotk::cli
