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

#include <gtest/gtest.h>

#include <stdexcept>

#include "icotk/channels.hpp"
#include "icotk/explorer.hpp"
#include "icotk/process.hpp"
#include "icotk/random.hpp"
#include "support.hpp"

namespace icotk {
namespace {

using testing::classical_rule;
using testing::ket_bra;

const std::vector<int> kBits{2, 2};
const SystemLabel A1 = label_a(1, 2);
const SystemLabel X1 = label_x(1, 2);
const SystemLabel A2 = label_a(2, 2);
const SystemLabel X2 = label_x(2, 2);

using Rule = std::vector<int>;

TEST(ClassicalParity, OneWayCopyPasses) {
    auto ch = classical_rule(kBits, kBits, [](const Rule &x) { return Rule{0, x[0]}; });
    EXPECT_TRUE(parity_erasure_classical(ch).verdict);
}

TEST(ClassicalParity, SwapFailsOnlyJointly) {
    auto ch = classical_rule(kBits, kBits, [](const Rule &x) { return Rule{x[1], x[0]}; });
    auto r = parity_erasure_classical(ch);
    EXPECT_FALSE(r.verdict);
    EXPECT_LT(r.find({1})->residual, 1e-15);
    EXPECT_LT(r.find({2})->residual, 1e-15);
    EXPECT_NEAR(r.find({1, 2})->residual, 1.0, 1e-15);
    EXPECT_EQ(r.worst_violation()->subset, (PartySubset{1, 2}));
}

TEST(ClassicalParity, IdentityFeedbackFailsAtSingleParty) {
    for (auto rule : std::vector<std::function<Rule(const Rule &)>>{
             [](const Rule &x) { return Rule{x[0], 0}; }, [](const Rule &x) { return Rule{x[0], x[0]}; },
             [](const Rule &x) { return Rule{x[0], x[1]}; }}) {
        auto r = parity_erasure_classical(classical_rule(kBits, kBits, rule));
        EXPECT_FALSE(r.verdict);
        EXPECT_NEAR(r.find({1})->residual, 1.0, 1e-15);
    }
}

TEST(ClassicalParity, MatchesBruteForceSignedSums) {
    Rng rng(1);
    for (int t = 0; t < 50; ++t) {
        auto ch = testing::random_table({2, 2, 2}, {2, 2, 2}, rng);
        auto r = parity_erasure_classical(ch);
        for (const auto &row : r.residuals) {
            double worst = 0.0;
            for (std::int64_t f = 0; f < 8; ++f) {
                worst = std::max(worst, testing::brute_signed_sum(ch, row.subset, decode_index(f, std::vector{2, 2, 2})));
            }
            EXPECT_NEAR(row.residual, worst, 1e-14) << subset_str(row.subset);
        }
    }
}

TEST(ClassicalParity, NonBinaryInputsUseEveryLetterPair) {
    // a_1 = [x_1 == 2]: letters 0 and 1 look alike, so only pairs involving 2 detect influence.
    auto ch = classical_rule({2}, {3}, [](const Rule &x) { return Rule{x[0] == 2 ? 1 : 0}; });
    EXPECT_FALSE(parity_erasure_classical(ch).verdict);
    auto ok = classical_rule({2, 2}, {3, 3}, [](const Rule &x) { return Rule{0, x[0] == 2 ? 1 : 0}; });
    EXPECT_TRUE(parity_erasure_classical(ok).verdict);
}

TEST(ClassicalParity, InvalidTableRejected) {
    Eigen::MatrixXd p(2, 2);
    p << 1.2, 0.5, -0.2, 0.5;
    EXPECT_THROW(parity_erasure_classical(ClassicalChannel({2}, {2}, p)), std::invalid_argument);
}

TEST(QuantumParity, CombPasses) {
    auto sig = PartySignature::qubits(2);
    const int order[] = {2, 1};
    auto ch = channel_of(random_ordered_process(sig, order, 3));
    EXPECT_TRUE(parity_erasure_quantum(ch).verdict);
    EXPECT_TRUE(parity_erasure_quantum_direct(ch).verdict);
}

TEST(QuantumParity, SwapFailsJointly) {
    auto ch = QuantumChannel::multipartite(testing::swap_process());
    for (const auto &r : {parity_erasure_quantum(ch), parity_erasure_quantum_direct(ch)}) {
        EXPECT_FALSE(r.verdict);
        EXPECT_LT(r.find({1})->residual, 1e-12);
        EXPECT_LT(r.find({2})->residual, 1e-12);
        EXPECT_GE(r.find({1, 2})->residual, 0.5);
    }
    EXPECT_NEAR(parity_erasure_quantum(ch).find({1, 2})->residual, 2.25, 1e-12);
    EXPECT_NEAR(parity_erasure_quantum_direct(ch).find({1, 2})->residual, 4.0, 1e-12);
}

TEST(QuantumParity, DepolarizingPasses) {
    auto sig = PartySignature::qubits(3);
    auto ch = QuantumChannel::multipartite(uniform_noise_process(sig));
    EXPECT_TRUE(parity_erasure_quantum(ch).verdict);
    EXPECT_TRUE(parity_erasure_quantum_direct(ch).verdict);
}

TEST(QuantumParity, NonChannelRejected) {
    auto op = LabeledOperator::identity(TensorSpace{A1, X1});
    EXPECT_THROW(parity_erasure_quantum(QuantumChannel::multipartite(op)), std::invalid_argument);
    EXPECT_THROW(parity_erasure_quantum_direct(QuantumChannel::multipartite(op)), std::invalid_argument);
}

TEST(QuantumParity, CheckersAgreeOnRandomChannels) {
    Rng rng(2);
    auto sig = PartySignature::qubits(2);
    int disagreements = 0, positives = 0;
    for (int t = 0; t < 200; ++t) {
        LabeledOperator choi;
        switch (t % 4) {
            case 0:
                choi = random_channel_choi(TensorSpace{X1, X2}, TensorSpace{A1, A2}, rng);
                break;
            case 1:
                choi = random_valid_process(sig, t).W;
                break;
            case 2: {
                // Mixture of a valid process and a signalling channel: fails unless the weight is 0.
                double w = (t % 8 == 2) ? 0.0 : 0.3;
                choi = random_valid_process(sig, t).W * (1.0 - w) + testing::swap_process() * w;
                break;
            }
            default:
                choi = tensor(random_channel_choi(TensorSpace{X1}, TensorSpace{A2}, rng),
                              random_channel_choi(TensorSpace{X2}, TensorSpace{A1}, rng));
        }
        auto ch = QuantumChannel::multipartite(choi);
        bool a = parity_erasure_quantum(ch).verdict;
        bool b = parity_erasure_quantum_direct(ch).verdict;
        disagreements += a != b;
        positives += a;
    }
    EXPECT_EQ(disagreements, 0);
    EXPECT_GT(positives, 50);
    EXPECT_LT(positives, 150);
}

TEST(QuantumParity, ClassicalEmbeddingGivesSameVerdicts) {
    auto stream = enumerate_deterministic(kBits, kBits);
    while (auto d = stream.next()) {
        auto ch = d->to_channel();
        bool c = parity_erasure_classical(ch).verdict;
        auto q = embed_classical(ch);
        EXPECT_EQ(c, parity_erasure_quantum(q).verdict) << d->describe();
        EXPECT_EQ(c, parity_erasure_quantum_direct(q).verdict) << d->describe();
    }
}

// Signed marginal for one random encoding: differences on I, random states elsewhere.
double random_encoding_residual(const QuantumChannel &ch, const PartySubset &I, Rng &rng) {
    std::vector<LabeledOperator> inputs;
    for (const auto &l : ch.inputs) {
        bool in_i = l.role == Role::X && std::find(I.begin(), I.end(), l.party) != I.end();
        Matrix s = random_density(l.dim, rng);
        if (in_i) s -= random_density(l.dim, rng);
        inputs.push_back(LabeledOperator(TensorSpace{l}, s));
    }
    auto out = ch.apply(tensor_all(inputs));
    std::vector<SystemLabel> drop;
    for (const auto &l : out.space()) {
        if (l.role == Role::F || std::find(I.begin(), I.end(), l.party) == I.end()) drop.push_back(l);
    }
    return trace_norm(partial_trace(out, drop).matrix());
}

TEST(QuantumParity, RandomEncodingsNeverFlipTheVerdict) {
    Rng rng(3);
    auto sig = PartySignature::qubits(2);
    std::vector<QuantumChannel> corpus{channel_of(random_valid_process(sig, 1)),
                                       channel_of(random_valid_process(PartySignature::qubits(2, 2, 2), 2)),
                                       QuantumChannel::multipartite(testing::swap_process()),
                                       QuantumChannel::multipartite(
                                           random_channel_choi(TensorSpace{X1, X2}, TensorSpace{A1, A2}, rng))};
    for (const auto &ch : corpus) {
        const bool verdict = parity_erasure_quantum(ch).verdict;
        double worst = 0.0;
        for (int t = 0; t < 500; ++t) {
            for (const auto &I : nonempty_subsets(ch.parties())) {
                worst = std::max(worst, random_encoding_residual(ch, I, rng));
            }
        }
        EXPECT_EQ(verdict, worst <= 1e-9) << worst;
    }
}

TEST(SpanningStates, SpanTheHermitianMatrices) {
    for (int d : {2, 3}) {
        auto states = spanning_states(d);
        ASSERT_EQ(static_cast<int>(states.size()), d * d);
        Eigen::MatrixXcd stack(d * d, d * d);
        for (int k = 0; k < d * d; ++k) {
            EXPECT_NEAR(states[k].trace().real(), 1.0, 1e-14);
            stack.col(k) = Eigen::Map<const Eigen::VectorXcd>(states[k].data(), d * d);
        }
        EXPECT_EQ(Eigen::FullPivLU<Eigen::MatrixXcd>(stack).rank(), d * d);
        EXPECT_EQ(static_cast<int>(spanning_state_differences(d).size()), d * d - 1);
    }
}

TEST(LocalIo, UniformNoiseIgnoresInputs) {
    auto sig = PartySignature::qubits(2);
    ProcessMatrix w(sig, uniform_noise_process(sig));
    auto t = local_io_relation(w, computational_encoding(sig), computational_measurement(sig));
    for (Eigen::Index x = 1; x < t.table.cols(); ++x) EXPECT_LT((t.table.col(x) - t.table.col(0)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(LocalIo, SinglePartyBornRule) {
    Rng rng(4);
    Matrix rho = random_density(2, rng);
    ProcessMatrix w(tensor(LabeledOperator(TensorSpace{A1}, rho), LabeledOperator::identity(TensorSpace{X1})));
    auto t = local_io_relation(w, computational_encoding(w.signature), computational_measurement(w.signature));
    for (int x = 0; x < 2; ++x) {
        EXPECT_NEAR(t.table(0, x), rho(0, 0).real(), 1e-14);
        EXPECT_NEAR(t.table(1, x), rho(1, 1).real(), 1e-14);
    }
}

TEST(LocalIo, IdentityWireCopiesTheBit) {
    Rng rng(5);
    Matrix rho = random_density(2, rng);
    ProcessMatrix w(tensor_all(std::vector<LabeledOperator>{LabeledOperator(TensorSpace{A1}, rho),
                                                            testing::identity_channel(X1, A2),
                                                            LabeledOperator::identity(TensorSpace{X2})}));
    auto t = local_io_relation(w, computational_encoding(w.signature), computational_measurement(w.signature));
    for (int x = 0; x < 4; ++x) {
        auto xd = decode_index(x, kBits);
        for (int a = 0; a < 4; ++a) {
            auto ad = decode_index(a, kBits);
            double want = ad[1] == xd[0] ? rho(ad[0], ad[0]).real() : 0.0;
            EXPECT_NEAR(t.table(a, x), want, 1e-14);
        }
    }
}

TEST(LocalIo, RejectsMismatchedEncodings) {
    auto sig = PartySignature::qubits(2);
    ProcessMatrix w(sig, uniform_noise_process(sig));
    Encoding enc = computational_encoding(sig);
    enc.states.pop_back();
    EXPECT_THROW(local_io_relation(w, enc, computational_measurement(sig)), std::invalid_argument);
}

TEST(WeakParity, LocalIoOfValidProcessesPasses) {
    Rng rng(6);
    auto sig = PartySignature::qubits(2);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto w = random_valid_process(sig, seed);
        Encoding enc;
        Measurement meas;
        for (int i = 1; i <= 2; ++i) {
            enc.states.emplace_back(random_density(2, rng), random_density(2, rng));
            Matrix u = random_unitary(2, rng);
            meas.effects.push_back({u * ket_bra(2, 0, 0) * u.adjoint(), u * ket_bra(2, 1, 1) * u.adjoint()});
        }
        auto r = weak_parity_check(local_io_relation(w, enc, meas));
        EXPECT_TRUE(r.verdict());
        EXPECT_TRUE(r.uniform_marginal.verdict);
    }
}

TEST(WeakParity, Examples) {
    EXPECT_FALSE(weak_parity_check(classical_rule(kBits, kBits, [](const Rule &x) { return Rule{x[1], x[0]}; })).verdict());
    EXPECT_TRUE(weak_parity_check(classical_rule(kBits, kBits, [](const Rule &x) { return Rule{x[1], 0}; })).verdict());
    EXPECT_THROW(weak_parity_check(classical_rule({2}, {3}, [](const Rule &) { return Rule{0}; })),
                 std::invalid_argument);
}

TEST(WeakParity, CoarseFormIsReportedSeparately) {
    // a_1 = x_1 AND x_2: the joint parity test over both inputs sees a bias, but with x_2 = 0 fixed
    // party 1's marginal is constant while with x_2 = 1 it copies x_1.
    auto ch = classical_rule(kBits, kBits, [](const Rule &x) { return Rule{x[0] & x[1], 0}; });
    auto r = weak_parity_check(ch);
    EXPECT_FALSE(r.signed_sum.verdict);
    EXPECT_NEAR(r.signed_sum.find({1})->residual, 1.0, 1e-15);
    EXPECT_NEAR(r.uniform_marginal.find({1})->residual, 0.5, 1e-15);
}

}  // namespace
}  // namespace icotk
