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

#ifndef ICOTK_DECOMPOSITION_HPP
#define ICOTK_DECOMPOSITION_HPP

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "icotk/channels.hpp"
#include "icotk/process.hpp"
#include "icotk/tensor.hpp"

namespace icotk {

/// A one-way-signaling decomposition was refused or failed its postconditions.
class DecompositionError : public std::runtime_error {
   public:
    DecompositionError(const std::string &what, double no_influence, double recomposition)
        : std::runtime_error(what), no_influence_residual(no_influence), recomposition_residual(recomposition) {}
    double no_influence_residual;
    double recomposition_residual;
};

/// A channel offered as a supermap is not parity-erasure.
class ParityViolation : public std::runtime_error {
   public:
    ParityViolation(PartySubset s, double r)
        : std::runtime_error("channel is not parity-erasure: subset " + subset_str(s) + " has residual " +
                             std::to_string(r)),
          subset(std::move(s)),
          residual(r) {}
    PartySubset subset;
    double residual;
};

/// Largest variation of p(a_i | x) when only x_i changes.
double no_influence_residual(const ClassicalChannel &ch, int party);
/// Operator norm of (1 - [X_i]) applied to the Choi matrix of the A_i marginal channel.
/// The remaining inputs stay open, so the condition holds for every state fed to them.
double no_influence_residual(const QuantumChannel &ch, int party);

/// Chain-rule factorization of a classical table with X_i not influencing A_i.
///
/// Encoder rows are (a_i, m) with a_i most significant, columns x_{-i}; the memory letter
/// m = (a_i, x_{-i}) copies the encoder's view. Decoder rows are a_{-i}, columns (x_i, m).
/// x_{-i} and a_{-i} flatten the other parties in increasing order.
struct ClassicalDecomposition {
    int party = 0;
    std::vector<int> out_sizes;
    std::vector<int> in_sizes;
    int memory_size = 0;
    Eigen::MatrixXd encoder;
    Eigen::MatrixXd decoder;
    double residual = 0.0;  ///< max-abs recomposition error

    ClassicalChannel recompose() const;
};

ClassicalDecomposition classical_oneway_decompose(const ClassicalChannel &ch, int party,
                                                  double tol = kDefaultTol);

struct DecomposeOptions {
    double tol = kDefaultTol;            ///< no-influence gate
    double recomposition_tol = 1e-7;     ///< residual, positivity and trace-preservation of the decoder
    double rank_threshold = 1e-10;       ///< relative eigenvalue cut for the memory dimension
    int memory_tag = 0;                  ///< tag of the memory system; 0 picks 1000 + party
};

/// E: (inputs except X_i) -> A_i (x) M and D: X_i (x) M -> (outputs except A_i).
struct DecompositionResult {
    int party = 0;
    QuantumChannel encoder;
    QuantumChannel decoder;
    SystemLabel memory;
    double residual = 0.0;  ///< operator norm of link(E, D) - C
    double no_influence = 0.0;

    LabeledOperator recompose() const;
};

/// One-way-signaling decomposition of a quantum channel at `party`.
///
/// E is the minimal Stinespring isometry of the A_i marginal channel, so the memory dimension is
/// the numerical rank of its Choi matrix. D is the unique least-squares solution of
/// link(E, D) = C; it is checked, not repaired: an out-of-tolerance residual, a non-positive D or a
/// non-trace-preserving D raise DecompositionError.
DecompositionResult quantum_oneway_decompose(const QuantumChannel &ch, int party, const DecomposeOptions &options = {});

/// Extended k-partite channel X_1..X_k (x) P -> A_1..A_k (x) F in the process direction.
using ExtendedChannel = QuantumChannel;

struct InsertOptions {
    DecomposeOptions decompose;
    /// Re-run the parity-erasure check on the (k-1)-partite result.
    bool verify = true;
};

/// Inserts the local channel C: A_i (x) P' -> X_i (x) F' into the one-way-signaling decomposition of
/// T at party i. C's ancillas must be P/F systems labelled with party i.
ExtendedChannel insert_channel(const ExtendedChannel &T, int party, const QuantumChannel &C,
                               const InsertOptions &options = {});

struct ApplyOptions {
    /// Insertion order; empty means descending party index.
    std::vector<int> order;
    double tol = kDefaultTol;
    DecomposeOptions decompose;
};

/// Tag of the outcome register used to dilate trace-decreasing local operations.
inline constexpr int kReadoutTag = 900;

/// Uses T as a supermap on local operations, inserting them one by one.
///
/// ops[k] is the Choi matrix of a CP trace-non-increasing map for the k-th party of T (increasing
/// party index). A map M that is not trace preserving is completed with a readout register R into
/// the channel M (x) |0><0|_R + (failure branch) (x) |1><1|_R, so every insertion is a channel;
/// the register is projected on outcome 0 at the end. The result lives on the remaining P/F
/// systems (a 1x1 scalar when there are none). Throws ParityViolation when T is not
/// parity-erasure.
LabeledOperator apply_supermap(const QuantumChannel &T, std::span<const LabeledOperator> ops,
                               const ApplyOptions &options = {});

}  // namespace icotk

#endif  // ICOTK_DECOMPOSITION_HPP
