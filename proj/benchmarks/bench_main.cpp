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

#include <benchmark/benchmark.h>

#include <vector>

#include "icotk/decomposition.hpp"
#include "icotk/explorer.hpp"
#include "icotk/process.hpp"
#include "icotk/random.hpp"

namespace icotk {
namespace {

void BM_Validate(benchmark::State &state) {
    auto sig = PartySignature::qubits(static_cast<int>(state.range(0)));
    auto w = random_valid_process(sig, 1);
    for (auto _ : state) benchmark::DoNotOptimize(validate(w));
}
BENCHMARK(BM_Validate)->DenseRange(1, 3)->Unit(benchmark::kMicrosecond);

void BM_Project(benchmark::State &state) {
    auto sig = PartySignature::qubits(static_cast<int>(state.range(0)));
    Rng rng(2);
    auto h = random_hermitian(sig.space(), rng);
    for (auto _ : state) benchmark::DoNotOptimize(project_to_subspace(h));
}
BENCHMARK(BM_Project)->DenseRange(1, 3)->Unit(benchmark::kMicrosecond);

void BM_Link(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    auto sig = PartySignature::qubits(n);
    Rng rng(3);
    auto w = random_valid_process(sig, 3).W;
    std::vector<LabeledOperator> ops;
    for (int i = 1; i <= n; ++i) ops.push_back(random_channel_choi(TensorSpace{sig.a(i)}, TensorSpace{sig.x(i)}, rng));
    auto locals = tensor_all(ops);
    for (auto _ : state) benchmark::DoNotOptimize(link(w, locals));
}
BENCHMARK(BM_Link)->DenseRange(1, 3)->Unit(benchmark::kMicrosecond);

void BM_ParityQuantum(benchmark::State &state) {
    auto ch = channel_of(random_valid_process(PartySignature::qubits(static_cast<int>(state.range(0))), 4));
    for (auto _ : state) benchmark::DoNotOptimize(parity_erasure_quantum(ch));
}
BENCHMARK(BM_ParityQuantum)->DenseRange(1, 3)->Unit(benchmark::kMicrosecond);

void BM_ParityQuantumDirect(benchmark::State &state) {
    auto ch = channel_of(random_valid_process(PartySignature::qubits(static_cast<int>(state.range(0))), 5));
    for (auto _ : state) benchmark::DoNotOptimize(parity_erasure_quantum_direct(ch));
}
BENCHMARK(BM_ParityQuantumDirect)->DenseRange(1, 3)->Unit(benchmark::kMicrosecond);

void BM_ApplySupermap(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    auto sig = PartySignature::qubits(n);
    Rng rng(6);
    auto ch = channel_of(random_valid_process(sig, 6));
    std::vector<LabeledOperator> ops;
    for (int i = 1; i <= n; ++i) ops.push_back(random_channel_choi(TensorSpace{sig.a(i)}, TensorSpace{sig.x(i)}, rng));
    for (auto _ : state) benchmark::DoNotOptimize(apply_supermap(ch, ops));
}
BENCHMARK(BM_ApplySupermap)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_Census(benchmark::State &state) {
    const std::vector<int> bits{2, 2};
    for (auto _ : state) benchmark::DoNotOptimize(deterministic_parity_erasure_census(bits, bits));
}
BENCHMARK(BM_Census)->Unit(benchmark::kMillisecond);

void BM_PolytopeVertices(benchmark::State &state) {
    const std::vector<int> bits{2, 2};
    for (auto _ : state) benchmark::DoNotOptimize(parity_polytope_vertices(bits, bits));
}
BENCHMARK(BM_PolytopeVertices)->Unit(benchmark::kMillisecond)->Iterations(1);

void BM_SeparabilityLp(benchmark::State &state) {
    const std::vector<int> bits{2, 2};
    ClassicalChannel swap({2, 2}, {2, 2}, Eigen::MatrixXd::Zero(4, 4));
    for (int x = 0; x < 4; ++x) swap.table(((x & 1) << 1) | (x >> 1), x) = 1.0;
    for (auto _ : state) benchmark::DoNotOptimize(causal_separability_lp(swap));
}
BENCHMARK(BM_SeparabilityLp)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace icotk

BENCHMARK_MAIN();
