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

#include "icotk/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace icotk {

namespace {

const nlohmann::json &member(const nlohmann::json &j, const char *key) {
    if (!j.is_object() || !j.contains(key)) {
        throw FormatError(std::string("missing field \"") + key + "\"");
    }
    return j.at(key);
}

int int_field(const nlohmann::json &j, const char *key) {
    const auto &v = member(j, key);
    if (!v.is_number_integer()) throw FormatError(std::string("field \"") + key + "\" must be an integer");
    return v.get<int>();
}

double finite_number(const nlohmann::json &v, const std::string &where) {
    if (!v.is_number()) throw FormatError(where + ": expected a number");
    double d = v.get<double>();
    if (!std::isfinite(d)) throw FormatError(where + ": non-finite value");
    return d;
}

std::vector<int> size_list(const nlohmann::json &j, const char *key) {
    const auto &v = member(j, key);
    if (!v.is_array() || v.empty()) throw FormatError(std::string("field \"") + key + "\" must be a nonempty array");
    std::vector<int> out;
    for (const auto &e : v) {
        if (!e.is_number_integer() || e.get<int>() < 1) {
            throw FormatError(std::string("field \"") + key + "\" must hold positive integers");
        }
        out.push_back(e.get<int>());
    }
    return out;
}

ordered_json real_vector(const Eigen::VectorXd &v) {
    ordered_json a = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

ordered_json real_matrix(const Eigen::MatrixXd &m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(real_vector(m.row(r).transpose()));
    return rows;
}

ordered_json labels_json(const TensorSpace &space) {
    ordered_json a = ordered_json::array();
    for (const auto &l : space) a.push_back(label_to_json(l));
    return a;
}

TensorSpace labels_from(const nlohmann::json &j) {
    if (!j.is_array()) throw FormatError("labels must be an array");
    std::vector<SystemLabel> labels;
    for (const auto &e : j) labels.push_back(label_from_json(e));
    for (std::size_t a = 0; a < labels.size(); ++a) {
        for (std::size_t b = a + 1; b < labels.size(); ++b) {
            if (labels[a].same_system(labels[b])) throw FormatError("duplicate system " + labels[a].str());
        }
    }
    return TensorSpace(std::move(labels));
}

}  // namespace

ordered_json label_to_json(const SystemLabel &label) {
    ordered_json j;
    j["party"] = label.party;
    j["role"] = std::string(1, role_char(label.role));
    j["dim"] = label.dim;
    if (label.tag != 0) j["tag"] = label.tag;
    return j;
}

SystemLabel label_from_json(const nlohmann::json &j) {
    SystemLabel l;
    l.party = int_field(j, "party");
    const auto &role = member(j, "role");
    if (!role.is_string() || role.get<std::string>().size() != 1) {
        throw FormatError("role must be one of \"A\", \"X\", \"P\", \"F\", \"M\"");
    }
    try {
        l.role = role_from_char(role.get<std::string>()[0]);
    } catch (const std::invalid_argument &e) {
        throw FormatError(e.what());
    }
    l.dim = int_field(j, "dim");
    if (l.dim < 1) throw FormatError("dim must be positive");
    if (j.contains("tag")) l.tag = int_field(j, "tag");
    if (l.party < 0) throw FormatError("party must be nonnegative");
    return l;
}

ordered_json operator_to_json(const LabeledOperator &op) {
    ordered_json j;
    j["labels"] = labels_json(op.space());
    ordered_json rows = ordered_json::array();
    const Matrix &m = op.matrix();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(ordered_json::array({m(r, c).real(), m(r, c).imag()}));
        }
        rows.push_back(std::move(row));
    }
    j["matrix"] = std::move(rows);
    return j;
}

LabeledOperator operator_from_json(const nlohmann::json &j) {
    TensorSpace space = labels_from(member(j, "labels"));
    const auto &rows = member(j, "matrix");
    const std::int64_t d = space.dim();
    if (!rows.is_array() || static_cast<std::int64_t>(rows.size()) != d) {
        throw FormatError("matrix must have " + std::to_string(d) + " rows to match the labels");
    }
    Matrix m(d, d);
    for (std::int64_t r = 0; r < d; ++r) {
        const auto &row = rows[r];
        if (!row.is_array() || static_cast<std::int64_t>(row.size()) != d) {
            throw FormatError("matrix row " + std::to_string(r) + " must have " + std::to_string(d) + " entries");
        }
        for (std::int64_t c = 0; c < d; ++c) {
            const auto &e = row[c];
            const std::string where = "entry (" + std::to_string(r) + ", " + std::to_string(c) + ")";
            if (!e.is_array() || e.size() != 2) throw FormatError(where + ": expected [re, im]");
            m(r, c) = cplx(finite_number(e[0], where), finite_number(e[1], where));
        }
    }
    return LabeledOperator(std::move(space), std::move(m));
}

ordered_json channel_to_json(const QuantumChannel &ch) {
    ordered_json j = operator_to_json(ch.choi);
    j["inputs"] = labels_json(ch.inputs);
    return j;
}

QuantumChannel channel_from_json(const nlohmann::json &j) {
    LabeledOperator op = operator_from_json(j);
    TensorSpace inputs = labels_from(member(j, "inputs"));
    try {
        return QuantumChannel(std::move(op), std::move(inputs));
    } catch (const std::invalid_argument &e) {
        throw FormatError(e.what());
    }
}

ordered_json classical_to_json(const ClassicalChannel &ch) {
    ordered_json j;
    j["outputs"] = ch.out_sizes;
    j["inputs"] = ch.in_sizes;
    j["p"] = real_matrix(ch.table);
    return j;
}

ClassicalChannel classical_from_json(const nlohmann::json &j) {
    auto outs = size_list(j, "outputs");
    auto ins = size_list(j, "inputs");
    if (outs.size() != ins.size()) throw FormatError("outputs and inputs must list the same number of parties");
    const std::int64_t no = radix_product(outs);
    const std::int64_t ni = radix_product(ins);
    const auto &rows = member(j, "p");
    if (!rows.is_array() || static_cast<std::int64_t>(rows.size()) != no) {
        throw FormatError("p must have " + std::to_string(no) + " rows (one per joint output)");
    }
    Eigen::MatrixXd p(no, ni);
    for (std::int64_t a = 0; a < no; ++a) {
        if (!rows[a].is_array() || static_cast<std::int64_t>(rows[a].size()) != ni) {
            throw FormatError("p row " + std::to_string(a) + " must have " + std::to_string(ni) + " entries");
        }
        for (std::int64_t x = 0; x < ni; ++x) {
            p(a, x) = finite_number(rows[a][x], "p(" + std::to_string(a) + ", " + std::to_string(x) + ")");
        }
    }
    return ClassicalChannel(std::move(outs), std::move(ins), std::move(p));
}

ordered_json decomposition_to_json(const DecompositionResult &d) {
    ordered_json j;
    j["party"] = d.party;
    j["memory"] = label_to_json(d.memory);
    j["memory_dim"] = d.memory.dim;
    j["encoder"] = channel_to_json(d.encoder);
    j["decoder"] = channel_to_json(d.decoder);
    j["residual"] = d.residual;
    j["no_influence_residual"] = d.no_influence;
    return j;
}

ordered_json classical_decomposition_to_json(const ClassicalDecomposition &d) {
    ordered_json j;
    j["party"] = d.party;
    j["outputs"] = d.out_sizes;
    j["inputs"] = d.in_sizes;
    j["memory_dim"] = d.memory_size;
    j["encoder"] = real_matrix(d.encoder);
    j["decoder"] = real_matrix(d.decoder);
    j["residual"] = d.residual;
    return j;
}

ordered_json certificate_to_json(const SeparabilityCertificate &c) {
    ordered_json j;
    j["feasible"] = c.feasible;
    ordered_json verts = ordered_json::array();
    for (std::size_t k = 0; k < c.vertices.size(); ++k) {
        ordered_json v;
        v["code"] = c.vertices[k].code;
        v["rule"] = c.vertices[k].describe();
        if (c.feasible) v["weight"] = c.weights(static_cast<Eigen::Index>(k));
        verts.push_back(std::move(v));
    }
    j["vertices"] = std::move(verts);
    if (!c.feasible) {
        j["witness"] = real_vector(c.witness);
        j["witness_offset"] = c.witness_offset;
        j["margin"] = c.margin;
    }
    j["residual"] = c.residual;
    j["tol"] = c.tol;
    j["iterations"] = c.iterations;
    return j;
}

ordered_json parity_report_to_json(const ParityReport &r) {
    ordered_json j;
    ordered_json rows = ordered_json::array();
    for (const auto &s : r.residuals) {
        ordered_json row;
        row["subset"] = s.subset;
        row["residual"] = s.residual;
        row["passes"] = s.residual <= r.tol;
        rows.push_back(std::move(row));
    }
    j["subsets"] = std::move(rows);
    j["tol"] = r.tol;
    j["verdict"] = r.verdict;
    if (auto w = r.worst_violation()) {
        j["worst_violation"] = {{"subset", w->subset}, {"residual", w->residual}};
    }
    return j;
}

std::string read_text_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (text.empty() || text.back() != '\n') out << '\n';
}

nlohmann::json read_json_file(const std::filesystem::path &path) {
    const std::string text = read_text_file(path);
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

LabeledOperator read_operator_file(const std::filesystem::path &path) {
    try {
        return operator_from_json(read_json_file(path));
    } catch (const FormatError &e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void write_operator_file(const std::filesystem::path &path, const LabeledOperator &op) {
    write_text_file(path, operator_to_json(op).dump());
}

ClassicalChannel read_classical_file(const std::filesystem::path &path) {
    try {
        return classical_from_json(read_json_file(path));
    } catch (const FormatError &e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string channels_csv(const std::vector<ClassicalChannel> &channels) {
    std::ostringstream os;
    os << std::setprecision(17);
    if (channels.empty()) {
        os << "index,code,causally_ordered\r\n";
        return os.str();
    }
    const auto &outs = channels.front().out_sizes;
    const auto &ins = channels.front().in_sizes;
    auto digits = [](const std::vector<int> &d) {
        std::string s;
        for (int v : d) s += std::to_string(v);
        return s;
    };
    os << "index,code,causally_ordered";
    for (std::int64_t a = 0; a < radix_product(outs); ++a) {
        for (std::int64_t x = 0; x < radix_product(ins); ++x) {
            os << ',' << csv_field("p(a=" + digits(decode_index(a, outs)) + "|x=" + digits(decode_index(x, ins)) + ")");
        }
    }
    os << "\r\n";
    for (std::size_t k = 0; k < channels.size(); ++k) {
        const auto &ch = channels[k];
        if (ch.out_sizes != outs || ch.in_sizes != ins) {
            throw std::invalid_argument("channels_csv: channels must share one scenario");
        }
        std::string code, ordered;
        try {
            auto d = DeterministicChannel::from_channel(ch);
            code = std::to_string(d.code);
            ordered = is_causally_ordered(d) ? "true" : "false";
        } catch (const std::invalid_argument &) {
        }
        os << k << ',' << code << ',' << ordered;
        for (std::int64_t a = 0; a < ch.table.rows(); ++a) {
            for (std::int64_t x = 0; x < ch.table.cols(); ++x) os << ',' << ch.table(a, x);
        }
        os << "\r\n";
    }
    return os.str();
}

std::string fnv1a64_hex(const std::string &bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

}  // namespace icotk
