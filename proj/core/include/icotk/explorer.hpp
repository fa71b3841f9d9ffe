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

#ifndef ICOTK_EXPLORER_HPP
#define ICOTK_EXPLORER_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "icotk/channels.hpp"

namespace icotk {

/// Requested enumeration exceeds the configured scale.
class ScaleCapExceeded : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Limits on the number of joint input and output letters of an enumerated scenario.
struct ScaleCaps {
    std::int64_t max_inputs = 4;
    std::int64_t max_outputs = 4;
};

void require_within_caps(const std::vector<int> &out_sizes, const std::vector<int> &in_sizes,
                         const ScaleCaps &caps = {});

/// Deterministic channel a = f(x) stored as a base-|outputs| integer: digit x (least significant
/// first) is the flat output index for flat input x.
struct DeterministicChannel {
    std::vector<int> out_sizes;
    std::vector<int> in_sizes;
    std::uint64_t code = 0;

    std::int64_t output_for(std::int64_t x) const;
    ClassicalChannel to_channel() const;
    /// Throws std::invalid_argument when some row is not one-hot within tol.
    static DeterministicChannel from_channel(const ClassicalChannel &ch, double tol = 1e-9);

    /// "x=00 -> a=10" style listing, one pair per input, separated by "; ".
    std::string describe() const;
    bool operator==(const DeterministicChannel &) const = default;
};

/// Streams all |outputs|^|inputs| deterministic channels in increasing code order.
class DeterministicEnumerator {
   public:
    DeterministicEnumerator(std::vector<int> out_sizes, std::vector<int> in_sizes, const ScaleCaps &caps = {});

    std::optional<DeterministicChannel> next();
    std::uint64_t size() const { return total_; }
    void reset() { next_code_ = 0; }

   private:
    std::vector<int> out_sizes_;
    std::vector<int> in_sizes_;
    std::uint64_t total_ = 0;
    std::uint64_t next_code_ = 0;
};

DeterministicEnumerator enumerate_deterministic(const std::vector<int> &out_sizes, const std::vector<int> &in_sizes,
                                                const ScaleCaps &caps = {});

/// Party j's output depends on party i's input: dependency(i, j) over 0-based party positions.
Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> dependency_graph(const DeterministicChannel &ch);
/// True when some ordering of the parties lets every output depend only on earlier inputs.
bool is_causally_ordered(const DeterministicChannel &ch);

/// Deterministic channels passing parity_erasure_classical.
std::vector<DeterministicChannel> deterministic_parity_erasure_census(const std::vector<int> &out_sizes,
                                                                      const std::vector<int> &in_sizes,
                                                                      const ScaleCaps &caps = {},
                                                                      double tol = kDefaultTol);

/// Equality system of the parity-erasure polytope over the variables p(a|x), flattened as
/// a * |inputs| + x: normalization per x and the signed-sum rows of every party subset, with
/// linearly dependent rows dropped (exact rank filtering).
struct PolytopeConstraints {
    Eigen::MatrixXd equalities;
    Eigen::VectorXd rhs;
    int rows_before_filtering = 0;
};
PolytopeConstraints parity_polytope_constraints(const std::vector<int> &out_sizes, const std::vector<int> &in_sizes);

/// Vertices of {p >= 0} intersected with the parity-erasure equalities, by exact enumeration of
/// basic feasible solutions in rational arithmetic.
std::vector<ClassicalChannel> parity_polytope_vertices(const std::vector<int> &out_sizes,
                                                       const std::vector<int> &in_sizes, const ScaleCaps &caps = {});

/// Causally ordered deterministic channels: the vertices of the separable hull.
std::vector<DeterministicChannel> causally_ordered_deterministic(const std::vector<int> &out_sizes,
                                                                 const std::vector<int> &in_sizes,
                                                                 const ScaleCaps &caps = {});

struct SeparabilityCertificate {
    bool feasible = false;
    std::vector<DeterministicChannel> vertices;
    /// Convex weights on `vertices` (feasible case).
    Eigen::VectorXd weights;
    /// Affine functional h.q + offset, nonnegative on every vertex and equal to -margin at the
    /// channel (infeasible case). Coordinates follow the table flattening a * |inputs| + x.
    Eigen::VectorXd witness;
    double witness_offset = 0.0;
    double margin = 0.0;
    /// Feasible: max |mixture - table| (including the weight sum). Infeasible: largest violation of
    /// the witness on the vertices.
    double residual = 0.0;
    double tol = 1e-8;
    int iterations = 0;
};

/// Membership of `ch` in the convex hull of causally ordered deterministic channels.
/// Throws LpFailure when the solver or the certificate check fails.
SeparabilityCertificate causal_separability_lp(const ClassicalChannel &ch, double tol = 1e-8,
                                               const ScaleCaps &caps = {});

}  // namespace icotk

#endif  // ICOTK_EXPLORER_HPP
