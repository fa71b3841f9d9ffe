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

#include "icotk/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace icotk {

// ---------------------------------------------------------------------------------------------
// No-influence

double no_influence_residual(const ClassicalChannel &ch, int party) {
    if (party < 1 || party > ch.parties()) {
        throw std::invalid_argument("no_influence_residual: party " + std::to_string(party) + " out of range");
    }
    ch.require_valid();
    const Eigen::MatrixXd marg = ch.marginal({party});
    double worst = 0.0;
    for (std::int64_t x = 0; x < ch.num_inputs(); ++x) {
        auto digits = decode_index(x, ch.in_sizes);
        for (int v = digits[party - 1] + 1; v < ch.in_sizes[party - 1]; ++v) {
            auto other = digits;
            other[party - 1] = v;
            double d = (marg.col(x) - marg.col(encode_index(other, ch.in_sizes))).cwiseAbs().maxCoeff();
            worst = std::max(worst, d);
        }
    }
    return worst;
}

namespace {

struct PartySystems {
    SystemLabel a;
    SystemLabel x;
};

PartySystems party_systems(const QuantumChannel &ch, int party) {
    const auto &space = ch.choi.space();
    if (!space.contains(label_a(party, 1)) || !space.contains(label_x(party, 1))) {
        throw std::invalid_argument("party " + std::to_string(party) + " is not active in channel " + space.str());
    }
    PartySystems s{space.at(label_a(party, 1)), space.at(label_x(party, 1))};
    if (!ch.inputs.contains(s.x) || ch.inputs.contains(s.a)) {
        throw std::invalid_argument("channel must map X_i to A_i for party " + std::to_string(party));
    }
    return s;
}

}  // namespace

double no_influence_residual(const QuantumChannel &ch, int party) {
    auto sys = party_systems(ch, party);
    TensorSpace discard = ch.outputs().without(std::vector<SystemLabel>{sys.a});
    LabeledOperator marg = partial_trace(ch.choi, discard.labels());
    LabeledOperator diff = marg - trace_and_replace(marg, {sys.x});
    return operator_norm(diff);
}

// ---------------------------------------------------------------------------------------------
// Classical chain rule

namespace {

std::vector<int> others_of(int n, int party) {
    std::vector<int> out;
    for (int i = 1; i <= n; ++i) {
        if (i != party) out.push_back(i);
    }
    return out;
}

}  // namespace

ClassicalChannel ClassicalDecomposition::recompose() const {
    const int n = static_cast<int>(out_sizes.size());
    auto others = others_of(n, party);
    std::vector<int> xo_radices, ao_radices;
    for (int j : others) {
        xo_radices.push_back(in_sizes[j - 1]);
        ao_radices.push_back(out_sizes[j - 1]);
    }
    const int na_i = out_sizes[party - 1];
    const int nx_i = in_sizes[party - 1];
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(radix_product(out_sizes), radix_product(in_sizes));
    std::vector<int> a(n), x(n);
    for (std::int64_t xf = 0; xf < p.cols(); ++xf) {
        x = decode_index(xf, in_sizes);
        std::vector<int> xo;
        for (int j : others) xo.push_back(x[j - 1]);
        const std::int64_t xo_flat = encode_index(xo, xo_radices);
        for (int ai = 0; ai < na_i; ++ai) {
            for (int m = 0; m < memory_size; ++m) {
                double e = encoder(static_cast<std::int64_t>(ai) * memory_size + m, xo_flat);
                if (e == 0.0) continue;
                for (std::int64_t ao = 0; ao < radix_product(ao_radices); ++ao) {
                    auto ad = decode_index(ao, ao_radices);
                    for (std::size_t t = 0; t < others.size(); ++t) a[others[t] - 1] = ad[t];
                    a[party - 1] = ai;
                    double d = decoder(ao, static_cast<std::int64_t>(x[party - 1]) * memory_size + m);
                    p(encode_index(a, out_sizes), xf) += e * d;
                }
            }
        }
    }
    (void)nx_i;
    return ClassicalChannel(out_sizes, in_sizes, std::move(p));
}

ClassicalDecomposition classical_oneway_decompose(const ClassicalChannel &ch, int party, double tol) {
    double ni = no_influence_residual(ch, party);
    if (ni > tol) {
        throw DecompositionError("classical decomposition refused: X" + std::to_string(party) + " influences A" +
                                     std::to_string(party) + " (residual " + std::to_string(ni) + ")",
                                 ni, INFINITY);
    }
    const int n = ch.parties();
    auto others = others_of(n, party);
    std::vector<int> xo_radices, ao_radices;
    for (int j : others) {
        xo_radices.push_back(ch.in_sizes[j - 1]);
        ao_radices.push_back(ch.out_sizes[j - 1]);
    }
    const int na_i = ch.out_sizes[party - 1];
    const int nx_i = ch.in_sizes[party - 1];
    const std::int64_t nxo = radix_product(xo_radices);
    const std::int64_t nao = radix_product(ao_radices);

    ClassicalDecomposition dec;
    dec.party = party;
    dec.out_sizes = ch.out_sizes;
    dec.in_sizes = ch.in_sizes;
    dec.memory_size = static_cast<int>(na_i * nxo);
    dec.encoder = Eigen::MatrixXd::Zero(static_cast<std::int64_t>(na_i) * dec.memory_size, nxo);
    dec.decoder = Eigen::MatrixXd::Zero(nao, static_cast<std::int64_t>(nx_i) * dec.memory_size);

    const Eigen::MatrixXd marg = ch.marginal({party});
    std::vector<int> x(n), a(n);
    for (std::int64_t xo = 0; xo < nxo; ++xo) {
        auto xod = decode_index(xo, xo_radices);
        for (std::size_t t = 0; t < others.size(); ++t) x[others[t] - 1] = xod[t];
        for (int ai = 0; ai < na_i; ++ai) {
            // p(a_i | x_{-i}), averaged over x_i (constant up to the no-influence residual).
            double pa = 0.0;
            for (int xi = 0; xi < nx_i; ++xi) {
                x[party - 1] = xi;
                pa += marg(ai, encode_index(x, ch.in_sizes));
            }
            pa /= nx_i;
            const int m = static_cast<int>(ai * nxo + xo);
            dec.encoder(static_cast<std::int64_t>(ai) * dec.memory_size + m, xo) = pa;
            for (int xi = 0; xi < nx_i; ++xi) {
                x[party - 1] = xi;
                const std::int64_t xf = encode_index(x, ch.in_sizes);
                const std::int64_t col = static_cast<std::int64_t>(xi) * dec.memory_size + m;
                for (std::int64_t ao = 0; ao < nao; ++ao) {
                    auto ad = decode_index(ao, ao_radices);
                    for (std::size_t t = 0; t < others.size(); ++t) a[others[t] - 1] = ad[t];
                    a[party - 1] = ai;
                    double joint = ch.table(encode_index(a, ch.out_sizes), xf);
                    dec.decoder(ao, col) = pa > 0.0 ? joint / pa : 1.0 / static_cast<double>(nao);
                }
            }
        }
    }
    // Memory letters never produced by the encoder get a uniform decoder column.
    for (std::int64_t col = 0; col < dec.decoder.cols(); ++col) {
        if (dec.decoder.col(col).sum() == 0.0) {
            dec.decoder.col(col).setConstant(1.0 / static_cast<double>(nao));
        }
    }
    dec.residual = (dec.recompose().table - ch.table).cwiseAbs().maxCoeff();
    return dec;
}

// ---------------------------------------------------------------------------------------------
// Quantum one-way-signaling decomposition

LabeledOperator DecompositionResult::recompose() const {
    return link(encoder.choi, decoder.choi, std::vector<SystemLabel>{memory});
}

DecompositionResult quantum_oneway_decompose(const QuantumChannel &ch, int party, const DecomposeOptions &options) {
    auto sys = party_systems(ch, party);
    const double ni = no_influence_residual(ch, party);
    if (ni > options.tol) {
        throw DecompositionError("quantum decomposition refused: X" + std::to_string(party) + " influences A" +
                                     std::to_string(party) + " (residual " + std::to_string(ni) + ")",
                                 ni, INFINITY);
    }
    const TensorSpace in_rest = ch.inputs.without(std::vector<SystemLabel>{sys.x});
    std::vector<SystemLabel> discard = ch.outputs().without(std::vector<SystemLabel>{sys.a}).labels();
    discard.push_back(sys.x);
    // Choi matrix of the marginal channel (inputs except X_i) -> A_i.
    const LabeledOperator marg =
        (partial_trace(ch.choi, discard) * cplx(1.0 / static_cast<double>(sys.x.dim))).hermitized();

    Eigen::SelfAdjointEigenSolver<Matrix> es(marg.matrix());
    const Eigen::VectorXd &evals = es.eigenvalues();
    const double cut = options.rank_threshold * std::max(1.0, evals.maxCoeff());
    std::vector<Eigen::Index> kept;
    for (Eigen::Index k = evals.size(); k-- > 0;) {
        if (evals(k) > cut) kept.push_back(k);
    }
    const auto rank = static_cast<int>(kept.size());
    if (rank == 0) {
        throw DecompositionError("quantum decomposition: marginal channel has zero Choi matrix", ni, INFINITY);
    }
    const SystemLabel memory{0, Role::M, rank, options.memory_tag ? options.memory_tag : 1000 + party};

    // |E>> = sum_k sqrt(lambda_k) |v_k> (x) |k>_M.
    const std::int64_t dm = marg.dim();
    Eigen::VectorXcd omega = Eigen::VectorXcd::Zero(dm * rank);
    for (int k = 0; k < rank; ++k) {
        Eigen::VectorXcd v = es.eigenvectors().col(kept[k]) * std::sqrt(evals(kept[k]));
        for (std::int64_t row = 0; row < dm; ++row) {
            omega(row * rank + k) = v(row);
        }
    }
    LabeledOperator e_choi(concat(marg.space(), TensorSpace{memory}), omega * omega.adjoint());

    DecompositionResult out;
    out.party = party;
    out.memory = memory;
    out.no_influence = ni;
    out.encoder = QuantumChannel(std::move(e_choi), in_rest);
    LabeledOperator d_choi = solve_link(out.encoder.choi, ch.choi, std::vector<SystemLabel>{memory}).hermitized();
    out.decoder = QuantumChannel(std::move(d_choi), TensorSpace{sys.x, memory});
    out.residual = operator_norm(out.recompose() - ch.choi);

    const double rt = options.recomposition_tol;
    if (out.residual > rt) {
        throw DecompositionError("quantum decomposition: recomposition residual " + std::to_string(out.residual) +
                                     " exceeds tolerance (no-influence residual " + std::to_string(ni) + ")",
                                 ni, out.residual);
    }
    double dmin = min_eigenvalue(out.decoder.choi);
    if (dmin < -rt) {
        throw DecompositionError("quantum decomposition: decoder is not completely positive (min eigenvalue " +
                                     std::to_string(dmin) + ")",
                                 ni, out.residual);
    }
    double dtp = out.decoder.tp_error();
    if (dtp > rt) {
        throw DecompositionError("quantum decomposition: decoder is not trace preserving (deviation " +
                                     std::to_string(dtp) + ")",
                                 ni, out.residual);
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// Slot insertion and supermap application

ExtendedChannel insert_channel(const ExtendedChannel &T, int party, const QuantumChannel &C,
                               const InsertOptions &options) {
    auto sys = party_systems(T, party);
    const auto &cs = C.choi.space();
    for (const auto &want : {sys.a, sys.x}) {
        auto k = cs.find(want);
        if (!k || cs[*k].dim != want.dim) {
            throw std::invalid_argument("insert_channel: local channel lacks system " + want.str());
        }
    }
    if (!C.inputs.contains(sys.a) || C.inputs.contains(sys.x)) {
        throw std::invalid_argument("insert_channel: local channel must map A_i to X_i");
    }
    for (const auto &l : cs) {
        if (l.same_system(sys.a) || l.same_system(sys.x)) continue;
        bool ancilla = (l.role == Role::P || l.role == Role::F) && l.party == party;
        if (!ancilla) {
            throw std::invalid_argument("insert_channel: unexpected system " + l.str() + " in local channel");
        }
        if (T.choi.space().contains(l)) {
            throw std::invalid_argument("insert_channel: ancilla " + l.str() + " clashes with the channel");
        }
        if ((l.role == Role::P) != C.inputs.contains(l)) {
            throw std::invalid_argument("insert_channel: ancilla P systems must be inputs and F systems outputs");
        }
    }

    const DecompositionResult dec = quantum_oneway_decompose(T, party, options.decompose);
    LabeledOperator ec = link(dec.encoder.choi, C.choi, std::vector<SystemLabel>{sys.a});
    LabeledOperator joined = link(ec, dec.decoder.choi, std::vector<SystemLabel>{sys.x, dec.memory});
    ExtendedChannel out = QuantumChannel::multipartite(joined.hermitized());

    if (options.verify) {
        const double rt = options.decompose.recomposition_tol;
        out.require_valid(rt);
        auto report = parity_erasure_quantum(out, rt);
        if (auto bad = report.worst_violation()) {
            throw ParityViolation(bad->subset, bad->residual);
        }
    }
    return out;
}

LabeledOperator apply_supermap(const QuantumChannel &T, std::span<const LabeledOperator> ops,
                               const ApplyOptions &options) {
    const auto parties = T.parties();
    if (ops.size() != parties.size()) {
        throw std::invalid_argument("apply_supermap: expected " + std::to_string(parties.size()) +
                                    " local operations, got " + std::to_string(ops.size()));
    }
    auto report = parity_erasure_quantum(T, options.tol);
    if (auto bad = report.worst_violation()) {
        throw ParityViolation(bad->subset, bad->residual);
    }

    std::vector<int> order = options.order;
    if (order.empty()) {
        order.assign(parties.rbegin(), parties.rend());
    }
    {
        auto sorted = order;
        std::sort(sorted.begin(), sorted.end());
        if (sorted != parties) {
            throw std::invalid_argument("apply_supermap: insertion order is not a permutation of the parties");
        }
    }

    std::vector<QuantumChannel> locals;
    std::vector<SystemLabel> readouts;
    for (std::size_t k = 0; k < parties.size(); ++k) {
        const LabeledOperator &op = ops[k];
        QuantumChannel c = QuantumChannel::local(op);
        if (!is_psd(op, options.tol)) {
            throw std::invalid_argument("apply_supermap: local operation " + std::to_string(parties[k]) +
                                        " is not completely positive");
        }
        if (c.tp_error() <= options.tol) {
            locals.push_back(std::move(c));
            continue;
        }
        const TensorSpace outs = c.outputs();
        // Tr_out of a Choi matrix is the transposed effect, so the failure branch
        // sigma -> Tr[G sigma] tau has Choi (1 - Tr_out op) (x) tau.
        LabeledOperator effect = partial_trace(op, outs.labels());
        LabeledOperator complement = LabeledOperator::identity(effect.space()) - effect;
        if (min_eigenvalue(complement) < -options.tol) {
            throw std::invalid_argument("apply_supermap: local operation " + std::to_string(parties[k]) +
                                        " increases trace");
        }
        SystemLabel readout{parties[k], Role::F, 2, kReadoutTag};
        Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
        p0(0, 0) = 1.0;
        p1(1, 1) = 1.0;
        LabeledOperator fail = tensor(complement,
                                      LabeledOperator::identity(outs) * cplx(1.0 / static_cast<double>(outs.dim())));
        LabeledOperator full = tensor(op, LabeledOperator(TensorSpace{readout}, p0)) +
                               tensor(fail, LabeledOperator(TensorSpace{readout}, p1));
        locals.push_back(QuantumChannel::local(std::move(full)));
        readouts.push_back(readout);
    }

    ExtendedChannel current = T;
    InsertOptions insert;
    insert.decompose = options.decompose;
    for (int party : order) {
        auto pos = std::find(parties.begin(), parties.end(), party) - parties.begin();
        current = insert_channel(current, party, locals[pos], insert);
    }
    LabeledOperator result = current.choi;
    for (const auto &r : readouts) {
        Matrix p0 = Matrix::Zero(2, 2);
        p0(0, 0) = 1.0;
        result = link(result, LabeledOperator(TensorSpace{r}, p0), std::vector<SystemLabel>{r});
    }
    return result;
}

}  // namespace icotk
