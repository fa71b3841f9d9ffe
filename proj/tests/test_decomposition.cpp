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

#include <algorithm>
#include <random>

#include "icotk/decomposition.hpp"
#include "support.hpp"

namespace icotk {
namespace {

using testing::choi_from_kraus;
using testing::classical_rule;
using testing::identity_channel;
using testing::labeled;
using Rule = std::vector<int>;

const SystemLabel A1 = label_a(1, 2);
const SystemLabel X1 = label_x(1, 2);
const SystemLabel A2 = label_a(2, 2);
const SystemLabel X2 = label_x(2, 2);

double max_abs(const LabeledOperator &a, const LabeledOperator &b) {
    return (a.matrix_in(b.space()) - b.matrix()).cwiseAbs().maxCoeff();
}

// p(a|x) = p(a_i | x_{-i}) q(a_{-i} | a_i, x) with both factors random.
ClassicalChannel random_oneway_table(const std::vector<int> &outs, const std::vector<int> &ins, int party,
                                     Rng &rng) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    const int i = party - 1;
    const auto na = radix_product(outs), nx = radix_product(ins);
    Eigen::MatrixXd first(outs[i], nx / ins[i]);
    for (Eigen::Index c = 0; c < first.cols(); ++c) {
        for (Eigen::Index r = 0; r < first.rows(); ++r) first(r, c) = u(rng);
        first.col(c) /= first.col(c).sum();
    }
    Eigen::MatrixXd rest(na / outs[i], outs[i] * nx);
    for (Eigen::Index c = 0; c < rest.cols(); ++c) {
        for (Eigen::Index r = 0; r < rest.rows(); ++r) rest(r, c) = u(rng);
        rest.col(c) /= rest.col(c).sum();
    }
    auto drop = [i](std::vector<int> v) {
        v.erase(v.begin() + i);
        return v;
    };
    Eigen::MatrixXd p(na, nx);
    for (std::int64_t x = 0; x < nx; ++x) {
        auto xd = decode_index(x, ins);
        auto xo = encode_index(drop(xd), drop(ins));
        for (std::int64_t a = 0; a < na; ++a) {
            auto ad = decode_index(a, outs);
            auto ao = encode_index(drop(ad), drop(outs));
            p(a, x) = first(ad[i], xo) * rest(ao, ad[i] * nx + x);
        }
    }
    return ClassicalChannel(outs, ins, p);
}

TEST(NoInfluence, ClassicalExamples) {
    auto copy = classical_rule({2, 2}, {2, 2}, [](const Rule &x) { return Rule{0, x[0]}; });
    EXPECT_EQ(no_influence_residual(copy, 1), 0.0);
    EXPECT_EQ(no_influence_residual(copy, 2), 0.0);
    auto loop = classical_rule({2, 2}, {2, 2}, [](const Rule &x) { return Rule{x[0], 0}; });
    EXPECT_EQ(no_influence_residual(loop, 1), 1.0);
    EXPECT_EQ(no_influence_residual(loop, 2), 0.0);
    EXPECT_THROW(no_influence_residual(loop, 3), std::invalid_argument);
}

TEST(NoInfluence, QuantumExamples) {
    auto loop = QuantumChannel::multipartite(
        tensor(identity_channel(X1, A1), LabeledOperator::identity(TensorSpace{X2, A2}) * 0.5));
    // |Phi><Phi| - 1/2 on X_1 A_1: eigenvalues 3/2 and -1/2.
    EXPECT_NEAR(no_influence_residual(loop, 1), 1.5, 1e-12);
    EXPECT_LT(no_influence_residual(loop, 2), 1e-12);
    auto swap = QuantumChannel::multipartite(testing::swap_process());
    EXPECT_LT(no_influence_residual(swap, 1), 1e-12);
    EXPECT_LT(no_influence_residual(swap, 2), 1e-12);
}

TEST(ClassicalDecompose, CopyChannel) {
    auto copy = classical_rule({2, 2}, {2, 2}, [](const Rule &x) { return Rule{x[1], x[0]}; });
    for (int party : {1, 2}) {
        auto d = classical_oneway_decompose(copy, party);
        EXPECT_EQ(d.memory_size, 4);
        EXPECT_EQ(d.encoder.rows(), 2 * 4);
        EXPECT_EQ(d.encoder.cols(), 2);
        EXPECT_EQ(d.decoder.rows(), 2);
        EXPECT_EQ(d.decoder.cols(), 2 * 4);
        EXPECT_EQ(d.residual, 0.0);
        EXPECT_EQ(d.recompose().table, copy.table);
    }
}

TEST(ClassicalDecompose, ChainRuleOnRandomTables) {
    Rng rng(11);
    for (int t = 0; t < 100; ++t) {
        std::vector<int> outs{2, 3, 2}, ins{2, 2, 3};
        int party = 1 + t % 3;
        auto ch = random_oneway_table(outs, ins, party, rng);
        ASSERT_LT(no_influence_residual(ch, party), 1e-12);
        auto d = classical_oneway_decompose(ch, party);
        EXPECT_LT(d.residual, 1e-12);
        EXPECT_LT((d.recompose().table - ch.table).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT((d.encoder.colwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
        EXPECT_LT((d.decoder.colwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12);
        EXPECT_GE(d.encoder.minCoeff(), 0.0);
        EXPECT_GE(d.decoder.minCoeff(), 0.0);
    }
}

TEST(ClassicalDecompose, RefusesSelfInfluence) {
    auto loop = classical_rule({2, 2}, {2, 2}, [](const Rule &x) { return Rule{x[0], 0}; });
    try {
        classical_oneway_decompose(loop, 1);
        FAIL() << "expected DecompositionError";
    } catch (const DecompositionError &e) {
        EXPECT_EQ(e.no_influence_residual, 1.0);
    }
}

void expect_cptp(const QuantumChannel &ch) {
    EXPECT_LT(ch.tp_error(), 1e-8);
    EXPECT_GT(min_eigenvalue(ch.choi), -1e-8);
}

TEST(QuantumDecompose, ProductChannel) {
    Rng rng(12);
    auto choi = tensor(random_channel_choi(TensorSpace{X1}, TensorSpace{A2}, rng),
                       random_channel_choi(TensorSpace{X2}, TensorSpace{A1}, rng));
    auto ch = QuantumChannel::multipartite(choi);
    for (int party : {1, 2}) {
        auto d = quantum_oneway_decompose(ch, party);
        EXPECT_LT(d.residual, 1e-8);
        EXPECT_LT(max_abs(d.recompose(), choi), 1e-8);
        EXPECT_EQ(d.memory.role, Role::M);
        EXPECT_EQ(d.memory.tag, 1000 + party);
        expect_cptp(d.encoder);
        expect_cptp(d.decoder);
    }
}

TEST(QuantumDecompose, CombAtEveryNonInfluencedParty) {
    auto sig = PartySignature::qubits(3);
    const int order[] = {1, 3, 2};
    auto ch = channel_of(random_ordered_process(sig, order, 13));
    for (int party : {1, 2, 3}) {
        auto d = quantum_oneway_decompose(ch, party);
        EXPECT_LT(d.residual, 1e-8) << party;
        expect_cptp(d.encoder);
        expect_cptp(d.decoder);
    }
}

TEST(QuantumDecompose, MemoryIsTheMarginalRank) {
    // A_1 gets a pure state independent of everything: rank 1 marginal, trivial memory.
    Eigen::VectorXcd psi(2);
    psi << 0.6, 0.8;
    auto choi = tensor_all(std::vector<LabeledOperator>{LabeledOperator(TensorSpace{A1}, psi * psi.adjoint()),
                                                        identity_channel(X1, A2),
                                                        LabeledOperator::identity(TensorSpace{X2})});
    auto d = quantum_oneway_decompose(QuantumChannel::multipartite(choi), 1);
    EXPECT_EQ(d.memory.dim, 2);  // X_2 is an open input of the encoder; the marginal has rank 2
    auto pure = tensor(LabeledOperator(TensorSpace{A1}, psi * psi.adjoint()), identity_channel(X1, A2));
    EXPECT_EQ(quantum_oneway_decompose(QuantumChannel::multipartite(pure), 1).memory.dim, 1);
}

TEST(QuantumDecompose, RefusesSelfInfluence) {
    auto ch = QuantumChannel::multipartite(identity_channel(X1, A1));
    EXPECT_THROW(quantum_oneway_decompose(ch, 1), DecompositionError);
    auto swap = QuantumChannel::multipartite(testing::swap_process());
    EXPECT_NO_THROW(quantum_oneway_decompose(swap, 1));
}

TEST(QuantumDecompose, DecompositionsDifferingByAMemoryUnitaryAgree) {
    Rng rng(14);
    auto sig = PartySignature::qubits(2);
    auto ch = channel_of(random_valid_process(sig, 14));
    auto d = quantum_oneway_decompose(ch, 1);
    SystemLabel m2 = d.memory;
    m2.tag += 1;
    Matrix v = random_unitary(d.memory.dim, rng);
    auto e2 = link(d.encoder.choi, labeled(d.memory, m2, choi_from_kraus({v})));
    auto d2 = link(labeled(m2, d.memory, choi_from_kraus({Matrix(v.adjoint())})), d.decoder.choi);
    EXPECT_LT(max_abs(link(e2, d2), ch.choi), 1e-8);
    for (int t = 0; t < 5; ++t) {
        auto local = random_channel_choi(TensorSpace{A1}, TensorSpace{X1}, rng);
        auto a = link(link(d.encoder.choi, local), d.decoder.choi);
        auto b = link(link(e2, local), d2);
        EXPECT_LT(max_abs(a, b), 1e-8);
        auto via_insert = insert_channel(ch, 1, QuantumChannel::local(local));
        EXPECT_LT(max_abs(via_insert.choi, a), 1e-8);
    }
}

TEST(Expansion, DualBasisReconstructsChoi) {
    Rng rng(15);
    for (int t = 0; t < 20; ++t) {
        auto choi = random_channel_choi(TensorSpace{A1}, TensorSpace{X1}, rng);
        auto effects = spanning_states(2), states = spanning_states(2);
        const int n = 4;
        Eigen::MatrixXcd gram(n, n);
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) gram(j, k) = (effects[j].adjoint() * effects[k]).trace();
        }
        Eigen::MatrixXcd ginv = gram.inverse();
        // Dual: Tr(dual_j^dagger e_k) = delta_jk.
        std::vector<Matrix> dual(n, Matrix::Zero(2, 2));
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) dual[j] += std::conj(ginv(j, k)) * effects[k];
        }
        LabeledOperator rebuilt = LabeledOperator::zero(choi.space());
        for (int j = 0; j < n; ++j) {
            for (int l = 0; l < n; ++l) {
                auto d = tensor(LabeledOperator(TensorSpace{A1}, dual[j]), LabeledOperator(TensorSpace{X1}, dual[l]));
                cplx c = hs_inner(d, choi);
                rebuilt += tensor(LabeledOperator(TensorSpace{A1}, effects[j]),
                                  LabeledOperator(TensorSpace{X1}, states[l])) *
                           c;
            }
        }
        EXPECT_LT(max_abs(rebuilt, choi), 1e-12);
    }
}

TEST(InsertChannel, SinglePartyGivesOne) {
    Rng rng(16);
    auto sig = PartySignature::qubits(1);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto ch = channel_of(random_valid_process(sig, seed));
        auto out = insert_channel(ch, 1, QuantumChannel::local(random_channel_choi(TensorSpace{A1}, TensorSpace{X1}, rng)));
        EXPECT_TRUE(out.choi.space().empty());
        EXPECT_NEAR(out.choi.trace().real(), 1.0, 1e-9);
        EXPECT_NEAR(out.choi.trace().imag(), 0.0, 1e-9);
    }
}

TEST(InsertChannel, IdentityClosesTheWire) {
    Rng rng(17);
    Matrix rho = random_density(2, rng);
    auto w = tensor_all(std::vector<LabeledOperator>{LabeledOperator(TensorSpace{A1}, rho), identity_channel(X1, A2),
                                                     LabeledOperator::identity(TensorSpace{X2})});
    auto ch = QuantumChannel::multipartite(w);
    auto at2 = insert_channel(ch, 2, QuantumChannel::local(identity_channel(A2, X2)));
    EXPECT_LT(max_abs(at2.choi, tensor(LabeledOperator(TensorSpace{A1}, rho), LabeledOperator::identity(TensorSpace{X1}))),
              1e-9);
    auto at1 = insert_channel(ch, 1, QuantumChannel::local(identity_channel(A1, X1)));
    EXPECT_LT(max_abs(at1.choi, tensor(LabeledOperator(TensorSpace{A2}, rho), LabeledOperator::identity(TensorSpace{X2}))),
              1e-9);
}

TEST(InsertChannel, MeasurePrepareKeepsParityErasure) {
    Rng rng(18);
    auto sig = PartySignature::qubits(3);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto ch = channel_of(random_valid_process(sig, seed));
        LabeledOperator mp = LabeledOperator::zero(TensorSpace{A2, X2});
        for (int k = 0; k < 2; ++k) {
            mp += tensor(LabeledOperator(TensorSpace{A2}, testing::ket_bra(2, k, k)),
                         LabeledOperator(TensorSpace{X2}, random_density(2, rng)));
        }
        InsertOptions opts;
        opts.verify = false;
        auto out = insert_channel(ch, 2, QuantumChannel::local(mp), opts);
        EXPECT_EQ(out.parties(), (std::vector<int>{1, 3}));
        EXPECT_TRUE(out.is_valid(1e-8));
        EXPECT_TRUE(parity_erasure_quantum(out).verdict);
        EXPECT_TRUE(parity_erasure_quantum_direct(out).verdict);
    }
}

TEST(InsertChannel, ClosureWithPastAndFuture) {
    Rng rng(19);
    auto sig = PartySignature::qubits(2, 2, 2);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto ch = channel_of(random_valid_process(sig, seed));
        // The local operation carries its own future ancilla.
        SystemLabel anc{1, Role::F, 2, 5};
        auto local = random_channel_choi(TensorSpace{A1}, TensorSpace{X1, anc}, rng);
        auto out = insert_channel(ch, 1, QuantumChannel::local(local));
        EXPECT_TRUE(out.choi.space().contains(anc));
        EXPECT_TRUE(out.is_valid(1e-8));
        EXPECT_TRUE(parity_erasure_quantum(out).verdict);
    }
}

TEST(InsertChannel, RejectsMalformedLocals) {
    auto ch = channel_of(random_valid_process(PartySignature::qubits(2), 1));
    // Ancilla owned by another party.
    SystemLabel foreign{2, Role::F, 2, 5};
    Rng rng(20);
    auto bad = random_channel_choi(TensorSpace{A1}, TensorSpace{X1, foreign}, rng);
    EXPECT_THROW(insert_channel(ch, 1, QuantumChannel::local(bad)), std::invalid_argument);
    EXPECT_THROW(insert_channel(ch, 3, QuantumChannel::local(identity_channel(A1, X1))), std::invalid_argument);
}

TEST(ApplySupermap, EveryOrderMatchesThePairing) {
    Rng rng(21);
    auto sig = PartySignature::qubits(3);
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        auto w = random_valid_process(sig, seed);
        std::vector<LabeledOperator> ops;
        for (int i = 1; i <= 3; ++i) ops.push_back(random_channel_choi(TensorSpace{sig.a(i)}, TensorSpace{sig.x(i)}, rng));
        const double expected = pair_probability(w, ops);
        EXPECT_NEAR(expected, 1.0, 1e-9);
        std::vector<int> order{1, 2, 3};
        do {
            ApplyOptions opts;
            opts.order = order;
            auto out = apply_supermap(channel_of(w), ops, opts);
            EXPECT_NEAR(out.trace().real(), expected, 1e-9);
        } while (std::next_permutation(order.begin(), order.end()));
    }
}

TEST(ApplySupermap, ExtendedProcessInducesThePairedChannel) {
    Rng rng(22);
    auto sig = PartySignature::qubits(2, 2, 2);
    auto w = random_valid_process(sig, 22);
    std::vector<LabeledOperator> ops;
    for (int i = 1; i <= 2; ++i) ops.push_back(random_channel_choi(TensorSpace{sig.a(i)}, TensorSpace{sig.x(i)}, rng));
    auto expected = pair(w, ops);
    for (auto order : {std::vector<int>{1, 2}, std::vector<int>{2, 1}}) {
        ApplyOptions opts;
        opts.order = order;
        EXPECT_LT(max_abs(apply_supermap(channel_of(w), ops, opts), expected), 1e-9);
    }
}

TEST(ApplySupermap, InstrumentOutcomesMatchThePairing) {
    Rng rng(23);
    auto sig = PartySignature::qubits(2);
    auto w = random_valid_process(sig, 23);
    auto i1 = random_instrument(TensorSpace{A1}, TensorSpace{X1}, 2, rng);
    auto i2 = random_instrument(TensorSpace{A2}, TensorSpace{X2}, 3, rng);
    double total = 0.0;
    for (const auto &e1 : i1) {
        for (const auto &e2 : i2) {
            std::vector<LabeledOperator> ops{e1, e2};
            double p = apply_supermap(channel_of(w), ops).trace().real();
            EXPECT_NEAR(p, pair_probability(w, ops), 1e-9);
            EXPECT_GE(p, -1e-12);
            total += p;
        }
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
}

TEST(ApplySupermap, RejectsSignallingChannels) {
    std::vector<LabeledOperator> ops{identity_channel(A1, X1), identity_channel(A2, X2)};
    try {
        apply_supermap(QuantumChannel::multipartite(testing::swap_process()), ops);
        FAIL() << "expected ParityViolation";
    } catch (const ParityViolation &e) {
        EXPECT_EQ(e.subset, (PartySubset{1, 2}));
        EXPECT_GT(e.residual, 1.0);
    }
}

}  // namespace
}  // namespace icotk
