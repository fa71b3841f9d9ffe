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

#ifndef ICOTK_IO_HPP
#define ICOTK_IO_HPP

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "icotk/channels.hpp"
#include "icotk/decomposition.hpp"
#include "icotk/explorer.hpp"
#include "icotk/tensor.hpp"

namespace icotk {

/// Unreadable file or document not matching the expected schema.
class FormatError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

using ordered_json = nlohmann::ordered_json;

// Operator files: {"labels": [{"party", "role", "dim", "tag"?}], "matrix": [[[re, im], ...], ...]}.
// Rows and columns follow the listed label order; writing always uses canonical order, and the
// optional "tag" is emitted only when nonzero.

ordered_json label_to_json(const SystemLabel &label);
SystemLabel label_from_json(const nlohmann::json &j);
ordered_json operator_to_json(const LabeledOperator &op);
LabeledOperator operator_from_json(const nlohmann::json &j);

/// Channel: operator document plus "inputs" (a list of labels).
ordered_json channel_to_json(const QuantumChannel &ch);
QuantumChannel channel_from_json(const nlohmann::json &j);

// Classical tables: {"outputs": [|A_i|], "inputs": [|X_i|], "p": [[p(a|x) for x] for a]}.
ordered_json classical_to_json(const ClassicalChannel &ch);
/// Checks shape and finiteness only; probability constraints are left to require_valid.
ClassicalChannel classical_from_json(const nlohmann::json &j);

ordered_json decomposition_to_json(const DecompositionResult &d);
ordered_json classical_decomposition_to_json(const ClassicalDecomposition &d);
ordered_json certificate_to_json(const SeparabilityCertificate &c);
ordered_json parity_report_to_json(const ParityReport &r);

nlohmann::json read_json_file(const std::filesystem::path &path);
std::string read_text_file(const std::filesystem::path &path);
/// Writes `text`, adding a final newline when it lacks one.
void write_text_file(const std::filesystem::path &path, const std::string &text);

LabeledOperator read_operator_file(const std::filesystem::path &path);
void write_operator_file(const std::filesystem::path &path, const LabeledOperator &op);
ClassicalChannel read_classical_file(const std::filesystem::path &path);

/// RFC 4180 field quoting.
std::string csv_field(const std::string &s);
/// One row per channel: index, deterministic code (empty when not deterministic), causal
/// ordering flag, then every p(a|x) with columns named "p(a=..|x=..)".
std::string channels_csv(const std::vector<ClassicalChannel> &channels);

/// 64-bit FNV-1a, lower-case hex.
std::string fnv1a64_hex(const std::string &bytes);

}  // namespace icotk

#endif  // ICOTK_IO_HPP
