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

// Regenerates the golden files in fixtures/. Usage: icotk_make_fixtures <dir>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "icotk/channels.hpp"
#include "icotk/explorer.hpp"
#include "icotk/io.hpp"
#include "icotk/process.hpp"
#include "icotk/random.hpp"

using namespace icotk;

namespace {

LabeledOperator identity_choi(const SystemLabel &in, const SystemLabel &out) {
    Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(in.dim * out.dim);
    for (int k = 0; k < std::min(in.dim, out.dim); ++k) phi(k * out.dim + k) = 1.0;
    return LabeledOperator(TensorSpace{in, out}, phi * phi.adjoint());
}

}  // namespace

int main(int argc, char **argv) {
    if (argc != 2) {
        std::cerr << "usage: icotk_make_fixtures <dir>\n";
        return 2;
    }
    const std::filesystem::path dir = argv[1];
    std::filesystem::create_directories(dir);
    const auto sig = PartySignature::qubits(2);

    write_operator_file(dir / "uniform_noise.json", uniform_noise_process(sig));

    const int order[] = {1, 2};
    write_operator_file(dir / "comb.json", random_ordered_process(sig, order, 20261019).W);

    write_operator_file(dir / "swap_quantum.json",
                        tensor(identity_choi(label_x(1, 2), label_a(2, 2)), identity_choi(label_x(2, 2), label_a(1, 2))));

    const std::vector<int> bits{2, 2};
    auto swap = ClassicalChannel::deterministic(bits, bits, [](const std::vector<int> &x) {
        return std::vector<int>{x[1], x[0]};
    });
    write_text_file(dir / "swap_classical.json", classical_to_json(swap).dump());

    // Equal mixture of "B copies A's bit" and "A copies B's bit".
    auto a_first = ClassicalChannel::deterministic(bits, bits, [](const std::vector<int> &x) {
        return std::vector<int>{0, x[0]};
    });
    auto b_first = ClassicalChannel::deterministic(bits, bits, [](const std::vector<int> &x) {
        return std::vector<int>{x[1], 0};
    });
    ClassicalChannel mixture(bits, bits, 0.5 * a_first.table + 0.5 * b_first.table);
    write_text_file(dir / "causal_mixture_classical.json", classical_to_json(mixture).dump());

    ClassicalChannel negative = mixture;
    negative.table(0, 0) -= 1.25;
    negative.table(1, 0) += 1.25;
    write_text_file(dir / "classical_negative_entry.json", classical_to_json(negative).dump());

    write_text_file(dir / "corrupted.json", R"({"labels": [{"party": 1, "role": "A", "dim": 2}], "matrix": [[[1, 0], [0)");

    Rng rng(7);
    for (int i = 1; i <= 2; ++i) {
        const TensorSpace in{label_a(i, 2)}, out{label_x(i, 2)};
        write_operator_file(dir / ("channel_party" + std::to_string(i) + ".json"), random_channel_choi(in, out, rng));
        ordered_json inst;
        inst["instrument"] = ordered_json::array();
        for (const auto &el : random_instrument(in, out, 2, rng)) inst["instrument"].push_back(operator_to_json(el));
        write_text_file(dir / ("instrument_party" + std::to_string(i) + ".json"), inst.dump());
    }

    std::vector<ClassicalChannel> census;
    for (const auto &d : deterministic_parity_erasure_census(bits, bits)) census.push_back(d.to_channel());
    std::ofstream(dir / "census_two_bit.csv", std::ios::binary) << channels_csv(census);
    return 0;
}
