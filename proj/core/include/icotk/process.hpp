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

#ifndef ICOTK_PROCESS_HPP
#define ICOTK_PROCESS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "icotk/tensor.hpp"

namespace icotk {

struct PartyDims {
    int a_dim = 2;
    int x_dim = 2;
};

/// Dimensions of an N-party scenario. Party i (1-based) owns A_i and X_i; the optional global
/// past P and future F are omitted from the operator space when their dimension is 1.
struct PartySignature {
    std::vector<PartyDims> parties;
    int past_dim = 1;
    int future_dim = 1;

    static PartySignature qubits(int n, int past_dim = 1, int future_dim = 1);
    /// Infers the signature from A_i/X_i/P/F labels; parties must be numbered 1..N and carry
    /// both an A and an X system, and P/F (if present) must be the party-0 globals.
    static PartySignature from_space(const TensorSpace &space);

    int size() const { return static_cast<int>(parties.size()); }
    SystemLabel a(int party) const { return label_a(party, parties.at(party - 1).a_dim); }
    SystemLabel x(int party) const { return label_x(party, parties.at(party - 1).x_dim); }
    SystemLabel past() const { return {0, Role::P, past_dim, 0}; }
    SystemLabel future() const { return {0, Role::F, future_dim, 0}; }
    bool extended() const { return past_dim > 1 || future_dim > 1; }

    /// Canonical space A_1 X_1 ... A_N X_N (P) (F).
    TensorSpace space() const;
    /// prod_i d_{X_i} * d_P: the trace of every valid process matrix.
    std::int64_t normalization() const;
    std::int64_t a_dim_product() const;

    void validate() const;
    bool operator==(const PartySignature &) const = default;
};

/// Nonempty, sorted list of party indices.
using PartySubset = std::vector<int>;

std::string subset_str(const PartySubset &subset);
/// All nonempty subsets of `parties`, ordered by bitmask over the position in `parties`.
std::vector<PartySubset> nonempty_subsets(const std::vector<int> &parties);

struct ProcessMatrix {
    PartySignature signature;
    LabeledOperator W;

    ProcessMatrix() = default;
    ProcessMatrix(PartySignature sig, LabeledOperator w);
    /// Signature inferred from the operator's labels.
    explicit ProcessMatrix(LabeledOperator w);
};

struct SubsetResidual {
    PartySubset subset;
    double residual = 0.0;
};

struct ValidationReport {
    double psd_margin = 0.0;   ///< minimum eigenvalue of W
    double trace_error = 0.0;  ///< |Tr W - prod d_X * d_P|
    std::vector<SubsetResidual> subset_residuals;
    /// Operator norm of the condition that discarding everything but P leaves Tr-normalized
    /// identity on P; identically zero without a past extension.
    double extension_residual = 0.0;
    double tol = kDefaultTol;
    bool verdict = false;

    /// Subset with the largest residual above tolerance, if any.
    std::optional<SubsetResidual> worst_violation() const;
};

/// Reduction expression for subset I: (1 - X_i) for i in I, [A_j X_j] for every other party
/// present in `space`, and every future system F replaced.
ReductionExpression subset_expression(const TensorSpace &space, const PartySubset &subset);

/// Operator norm of the signed reduction of W for subset I; zero for valid processes.
/// Parties are read from W's labels (P systems are left untouched, F systems discarded).
double subset_condition_residual(const LabeledOperator &W, const PartySubset &subset);
double subset_condition_residual(const ProcessMatrix &W, const PartySubset &subset);

/// Residual of the past-extension normalization (see ValidationReport::extension_residual).
double extension_condition_residual(const LabeledOperator &W);

ValidationReport validate(const ProcessMatrix &W, double tol = kDefaultTol);

/// Hilbert-Schmidt orthogonal projection onto the linear subspace cut out by every subset
/// condition (and the past-extension normalization when P systems are present).
///
/// Per party the reductions [A_i X_i] <= [X_i] are commuting projectors, so the operator space
/// splits into blocks [A_i X_i], [X_i] - [A_i X_i], 1 - [X_i]. Each subset condition removes
/// exactly one block, hence P(W) = W - sum_I signed_reduce(W, expr(I)).
LabeledOperator project_to_subspace(const LabeledOperator &W);

/// W_0 = 1 / (prod d_{A_i} * d_F): the process that ignores all inputs and outputs noise.
LabeledOperator uniform_noise_process(const PartySignature &sig);

struct RandomProcessOptions {
    /// Weight of W_0 in the final mixture. Unset: the smallest weight restoring positivity
    /// plus 1% of the remaining distance to W_0.
    std::optional<double> mixing_weight;
};

/// Random valid process: random Hermitian, projected onto the subspace, made traceless
/// relative to W_0 and mixed with W_0 until positive.
ProcessMatrix random_valid_process(const PartySignature &sig, std::uint64_t seed,
                                   const RandomProcessOptions &options = {});

/// Smallest W_0 mixing weight that keeps W_0 + (1 - w) K positive for a traceless K.
double minimal_mixing_weight(const PartySignature &sig, const LabeledOperator &traceless);

/// Comb of a random sequential circuit visiting the parties in `order`.
///
/// A random state (or random channel from P) feeds A_{order[0]} and a memory wire; each
/// intermediate step is a random channel X_{order[k]} (x) M_k -> A_{order[k+1]} (x) M_{k+1};
/// the last X and memory are discarded (or sent through a random channel into F).
ProcessMatrix random_ordered_process(const PartySignature &sig, std::span<const int> order, std::uint64_t seed,
                                     int memory_dim = 2);

/// Generalized pairing of W with local operations.
///
/// ops[i] is the Choi matrix of a CP map A_{i+1} -> X_{i+1}, possibly with ancilla systems
/// (role P/F) of its own. The result is link(W, ops_1 (x) ... (x) ops_N), i.e. Tr[W^T (x)_i M_i]
/// when nothing is left open: a probability for CP trace-non-increasing locals, exactly 1 for
/// CPTP locals, and the Choi of the induced map from the remaining P systems to F systems
/// otherwise. Throws std::invalid_argument for dimension mismatches or non-PSD ops.
LabeledOperator pair(const ProcessMatrix &W, std::span<const LabeledOperator> ops, double tol = kDefaultTol);
/// Real part of a fully contracted pairing; throws when systems remain open.
double pair_probability(const ProcessMatrix &W, std::span<const LabeledOperator> ops, double tol = kDefaultTol);

}  // namespace icotk

#endif  // ICOTK_PROCESS_HPP
