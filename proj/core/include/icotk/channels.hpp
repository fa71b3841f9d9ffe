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

#ifndef ICOTK_CHANNELS_HPP
#define ICOTK_CHANNELS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "icotk/process.hpp"
#include "icotk/tensor.hpp"

namespace icotk {

/// Mixed-radix helpers; the first digit is the most significant.
std::vector<int> decode_index(std::int64_t flat, std::span<const int> radices);
std::int64_t encode_index(std::span<const int> digits, std::span<const int> radices);
std::int64_t radix_product(std::span<const int> radices);

/// Conditional probability table p(a_1..a_N | x_1..x_N).
///
/// `table(a, x)` holds the probability of the flattened output tuple a given the flattened input
/// tuple x; both flatten with party 1 as the most significant digit.
struct ClassicalChannel {
    std::vector<int> out_sizes;  ///< |A_i|
    std::vector<int> in_sizes;   ///< |X_i|
    Eigen::MatrixXd table;

    ClassicalChannel() = default;
    ClassicalChannel(std::vector<int> outs, std::vector<int> ins, Eigen::MatrixXd p);

    /// Deterministic table a = f(x) over digit tuples.
    static ClassicalChannel deterministic(std::vector<int> outs, std::vector<int> ins,
                                          const std::function<std::vector<int>(const std::vector<int> &)> &f);

    int parties() const { return static_cast<int>(out_sizes.size()); }
    std::int64_t num_outputs() const { return radix_product(out_sizes); }
    std::int64_t num_inputs() const { return radix_product(in_sizes); }

    /// Marginal p((a_i)_{i in I} | x), rows flattened over I in increasing party order.
    Eigen::MatrixXd marginal(const PartySubset &subset) const;

    /// Largest violation of nonnegativity or row normalization.
    double validity_error() const;
    /// Throws std::invalid_argument when the table is not a conditional distribution within tol.
    void require_valid(double tol = kDefaultTol) const;
};

/// Completely positive map with its Choi matrix in the fixed convention
/// Choi(T) = sum_ij |i><j|_in (x) T(|i><j|).
struct QuantumChannel {
    LabeledOperator choi;
    TensorSpace inputs;

    QuantumChannel() = default;
    QuantumChannel(LabeledOperator c, TensorSpace in);

    /// Process-direction channel: inputs are the X and P systems, outputs the A and F systems.
    static QuantumChannel multipartite(LabeledOperator choi);
    /// Local operation of a party: inputs are the A and P systems, outputs the X and F systems.
    static QuantumChannel local(LabeledOperator choi);

    TensorSpace outputs() const { return choi.space().without(inputs.labels()); }
    std::vector<int> parties() const { return choi.space().parties(); }

    /// max |Tr_out C - 1_in|.
    double tp_error() const;
    bool is_valid(double tol = kDefaultTol) const;
    void require_valid(double tol = kDefaultTol) const;

    /// T(state); `state` must live on (a superset containing) the input systems.
    LabeledOperator apply(const LabeledOperator &state) const;
};

/// Multipartite channel whose Choi matrix is the process matrix.
QuantumChannel channel_of(const ProcessMatrix &W);
/// Diagonal Choi matrix sum_{x,a} p(a|x) |x><x| (x) |a><a| over X_i/A_i systems.
QuantumChannel embed_classical(const ClassicalChannel &ch);

struct ParityReport {
    std::vector<SubsetResidual> residuals;
    double tol = kDefaultTol;
    bool verdict = false;

    std::optional<SubsetResidual> worst_violation() const;
    const SubsetResidual *find(const PartySubset &subset) const;
};

/// Parity erasure of a classical table.
///
/// Encodings enter linearly through each difference rho_{i,0} - rho_{i,1} and affinely through the
/// states of parties outside I, so it suffices to take letter pairs (x_i^0, x_i^1) for i in I and
/// fixed letters outside I. The residual is the largest |sum_b prod_i (-1)^{b_i} p(a_I | x(b))|.
ParityReport parity_erasure_classical(const ClassicalChannel &ch, double tol = kDefaultTol);

/// Parity erasure from the Choi matrix: the residual for I is the subset-condition residual of the
/// channel's Choi matrix. P systems are kept open (every preparation on P at once) and F systems
/// are discarded.
ParityReport parity_erasure_quantum(const QuantumChannel &ch, double tol = kDefaultTol);

/// Parity erasure by literal evaluation of signed output marginals.
///
/// For each I the channel is fed products of a spanning family of state differences on X_i
/// (i in I), spanning states on the remaining X_j and on every P system; A_j (j not in I) and F are
/// discarded and the residual is the largest trace norm of the resulting operator on A_I.
ParityReport parity_erasure_quantum_direct(const QuantumChannel &ch, double tol = kDefaultTol);

/// d^2 pure states |k>, (|k>+|l>)/sqrt2, (|k>+i|l>)/sqrt2 spanning the Hermitian d x d matrices.
std::vector<Matrix> spanning_states(int d);
/// states[m] - |0><0| for m >= 1; spans the traceless Hermitian matrices.
std::vector<Matrix> spanning_state_differences(int d);

struct Encoding {
    /// Per party: the states fed to X_i for bit 0 and bit 1.
    std::vector<std::pair<Matrix, Matrix>> states;
};

struct Measurement {
    /// Per party: effects on A_i, nonnegative and summing to the identity.
    std::vector<std::vector<Matrix>> effects;
};

/// p(a|x) = Tr[(x)_i e_{a_i} T((x)_i rho_{x_i})] with T the channel of W. Inputs are bits.
ClassicalChannel local_io_relation(const ProcessMatrix &W, const Encoding &enc, const Measurement &meas,
                                   double tol = kDefaultTol);

Encoding computational_encoding(const PartySignature &sig);
Measurement computational_measurement(const PartySignature &sig);

struct WeakParityReport {
    /// Signed sums with the inputs outside I held fixed.
    ParityReport signed_sum;
    /// |p(a_I | parity 0) - p(a_I | parity 1)| with all inputs uniform. Reported alongside, never
    /// folded into the verdict.
    ParityReport uniform_marginal;
    bool verdict() const { return signed_sum.verdict; }
};

/// Parity independence of the outcomes (a_i)_{i in I} for binary-input tables.
WeakParityReport weak_parity_check(const ClassicalChannel &ch, double tol = kDefaultTol);

}  // namespace icotk

#endif  // ICOTK_CHANNELS_HPP
