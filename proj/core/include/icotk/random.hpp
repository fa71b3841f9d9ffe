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

#ifndef ICOTK_RANDOM_HPP
#define ICOTK_RANDOM_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "icotk/tensor.hpp"

namespace icotk {

using Rng = std::mt19937_64;

// Generators for test corpora. All take an explicit engine so runs are reproducible.

/// Complex matrix with i.i.d. standard normal real and imaginary parts.
Matrix random_ginibre(std::int64_t rows, std::int64_t cols, Rng &rng);
Matrix random_hermitian(std::int64_t d, Rng &rng);
/// Haar-distributed unitary via QR of a Ginibre matrix.
Matrix random_unitary(std::int64_t d, Rng &rng);
/// Density matrix G G^dagger / Tr with G of shape d x rank (rank <= 0 means full rank).
Matrix random_density(std::int64_t d, Rng &rng, std::int64_t rank = 0);

LabeledOperator random_hermitian(const TensorSpace &space, Rng &rng);
LabeledOperator random_state(const TensorSpace &space, Rng &rng, std::int64_t rank = 0);

/// Choi matrix of a random CPTP map `in` -> `out` with the given Kraus rank (<= 0: full).
LabeledOperator random_channel_choi(const TensorSpace &in, const TensorSpace &out, Rng &rng,
                                    std::int64_t kraus_rank = 0);

/// Choi matrices of the elements of a random instrument `in` -> `out`; they sum to a channel.
std::vector<LabeledOperator> random_instrument(const TensorSpace &in, const TensorSpace &out, int outcomes,
                                               Rng &rng);

/// Rescales a PSD operator C on in (x) out so that Tr_out C = 1_in. The partial trace must be
/// invertible.
LabeledOperator normalize_to_channel(const LabeledOperator &choi, const TensorSpace &in);

}  // namespace icotk

#endif  // ICOTK_RANDOM_HPP
