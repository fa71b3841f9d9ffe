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

#include "icotk/channels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace icotk {

std::vector<int> decode_index(std::int64_t flat, std::span<const int> radices) {
    std::vector<int> digits(radices.size());
    for (std::size_t k = radices.size(); k-- > 0;) {
        digits[k] = static_cast<int>(flat % radices[k]);
        flat /= radices[k];
    }
    return digits;
}

std::int64_t encode_index(std::span<const int> digits, std::span<const int> radices) {
    std::int64_t flat = 0;
    for (std::size_t k = 0; k < radices.size(); ++k) {
        flat = flat * radices[k] + digits[k];
    }
    return flat;
}

std::int64_t radix_product(std::span<const int> radices) {
    std::int64_t n = 1;
    for (int r : radices) {
        n *= r;
    }
    return n;
}

// ---------------------------------------------------------------------------------------------
// ClassicalChannel

ClassicalChannel::ClassicalChannel(std::vector<int> outs, std::vector<int> ins, Eigen::MatrixXd p)
    : out_sizes(std::move(outs)), in_sizes(std::move(ins)), table(std::move(p)) {
    if (out_sizes.size() != in_sizes.size() || out_sizes.empty()) {
        throw std::invalid_argument("classical channel needs matching, nonempty per-party alphabet lists");
    }
    for (int s : out_sizes) {
        if (s < 1) throw std::invalid_argument("output alphabet sizes must be >= 1");
    }
    for (int s : in_sizes) {
        if (s < 1) throw std::invalid_argument("input alphabet sizes must be >= 1");
    }
    if (table.rows() != num_outputs() || table.cols() != num_inputs()) {
        throw std::invalid_argument("classical table shape " + std::to_string(table.rows()) + "x" +
                                    std::to_string(table.cols()) + " does not match alphabets");
    }
}

ClassicalChannel ClassicalChannel::deterministic(std::vector<int> outs, std::vector<int> ins,
                                                 const std::function<std::vector<int>(const std::vector<int> &)> &f) {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(radix_product(outs), radix_product(ins));
    for (std::int64_t x = 0; x < p.cols(); ++x) {
        auto a = f(decode_index(x, ins));
        if (a.size() != outs.size()) {
            throw std::invalid_argument("deterministic: rule returned wrong number of outputs");
        }
        for (std::size_t k = 0; k < a.size(); ++k) {
            if (a[k] < 0 || a[k] >= outs[k]) {
                throw std::invalid_argument("deterministic: output letter out of range");
            }
        }
        p(encode_index(a, outs), x) = 1.0;
    }
    return ClassicalChannel(std::move(outs), std::move(ins), std::move(p));
}

Eigen::MatrixXd ClassicalChannel::marginal(const PartySubset &subset) const {
    std::vector<int> radices;
    for (int i : subset) {
        if (i < 1 || i > parties()) {
            throw std::invalid_argument("marginal: party " + std::to_string(i) + " out of range");
        }
        radices.push_back(out_sizes[i - 1]);
    }
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(radix_product(radices), table.cols());
    std::vector<int> sub(subset.size());
    for (std::int64_t a = 0; a < table.rows(); ++a) {
        auto digits = decode_index(a, out_sizes);
        for (std::size_t k = 0; k < subset.size(); ++k) {
            sub[k] = digits[subset[k] - 1];
        }
        m.row(encode_index(sub, radices)) += table.row(a);
    }
    return m;
}

double ClassicalChannel::validity_error() const {
    double err = std::max(0.0, -table.minCoeff());
    for (std::int64_t x = 0; x < table.cols(); ++x) {
        err = std::max(err, std::abs(table.col(x).sum() - 1.0));
    }
    if (!table.allFinite()) {
        return INFINITY;
    }
    return err;
}

void ClassicalChannel::require_valid(double tol) const {
    double err = validity_error();
    if (!(err <= tol)) {
        throw std::invalid_argument("classical table is not a conditional distribution (violation " +
                                    std::to_string(err) + ")");
    }
}

// ---------------------------------------------------------------------------------------------
// QuantumChannel

QuantumChannel::QuantumChannel(LabeledOperator c, TensorSpace in) : choi(std::move(c)), inputs(std::move(in)) {
    for (const auto &l : inputs) {
        if (choi.space().at(l).dim != l.dim) {
            throw std::invalid_argument("input system " + l.str() + " has a different dimension in the Choi matrix");
        }
    }
    inputs = inputs.canonical();
}

QuantumChannel QuantumChannel::multipartite(LabeledOperator choi) {
    TensorSpace in = choi.space().with_roles({Role::X, Role::P});
    return QuantumChannel(std::move(choi), std::move(in));
}

QuantumChannel QuantumChannel::local(LabeledOperator choi) {
    TensorSpace in = choi.space().with_roles({Role::A, Role::P});
    return QuantumChannel(std::move(choi), std::move(in));
}

double QuantumChannel::tp_error() const {
    LabeledOperator marg = partial_trace(choi, outputs().labels());
    return (marg.matrix() - Matrix::Identity(marg.dim(), marg.dim())).cwiseAbs().maxCoeff();
}

bool QuantumChannel::is_valid(double tol) const {
    if (!choi.is_hermitian(tol)) {
        return false;
    }
    return is_psd(choi, tol) && tp_error() <= tol;
}

void QuantumChannel::require_valid(double tol) const {
    double herm = choi.hermiticity_error();
    if (herm > tol) {
        throw std::invalid_argument("Choi matrix is not Hermitian (deviation " + std::to_string(herm) + ")");
    }
    double lmin = min_eigenvalue(choi);
    if (lmin < -tol) {
        throw std::invalid_argument("Choi matrix is not positive (min eigenvalue " + std::to_string(lmin) + ")");
    }
    double tp = tp_error();
    if (tp > tol) {
        throw std::invalid_argument("map is not trace preserving (deviation " + std::to_string(tp) + ")");
    }
}

LabeledOperator QuantumChannel::apply(const LabeledOperator &state) const {
    return link(state, choi, inputs.labels());
}

QuantumChannel channel_of(const ProcessMatrix &W) { return QuantumChannel::multipartite(W.W); }

QuantumChannel embed_classical(const ClassicalChannel &ch) {
    std::vector<SystemLabel> labels;
    for (int i = 1; i <= ch.parties(); ++i) {
        labels.push_back(label_x(i, ch.in_sizes[i - 1]));
    }
    for (int i = 1; i <= ch.parties(); ++i) {
        labels.push_back(label_a(i, ch.out_sizes[i - 1]));
    }
    const std::int64_t nx = ch.num_inputs(), na = ch.num_outputs();
    Matrix m = Matrix::Zero(nx * na, nx * na);
    for (std::int64_t x = 0; x < nx; ++x) {
        for (std::int64_t a = 0; a < na; ++a) {
            m(x * na + a, x * na + a) = ch.table(a, x);
        }
    }
    return QuantumChannel::multipartite(LabeledOperator(TensorSpace(std::move(labels)), std::move(m)));
}

// ---------------------------------------------------------------------------------------------
// Parity erasure

std::optional<SubsetResidual> ParityReport::worst_violation() const {
    std::optional<SubsetResidual> worst;
    for (const auto &r : residuals) {
        if (r.residual > tol && (!worst || r.residual > worst->residual)) {
            worst = r;
        }
    }
    return worst;
}

const SubsetResidual *ParityReport::find(const PartySubset &subset) const {
    for (const auto &r : residuals) {
        if (r.subset == subset) {
            return &r;
        }
    }
    return nullptr;
}

namespace {

void finish(ParityReport &report) {
    report.verdict = std::all_of(report.residuals.begin(), report.residuals.end(),
                                 [&](const SubsetResidual &r) { return r.residual <= report.tol; });
}

std::vector<int> all_parties(int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) {
        p[i] = i + 1;
    }
    return p;
}

/// max over letter pairs for I and letters outside I of |signed sum of marginal(a_I | x)|.
double classical_signed_residual(const ClassicalChannel &ch, const PartySubset &subset, bool binary_pair_only) {
    const Eigen::MatrixXd marg = ch.marginal(subset);
    const int n = ch.parties();
    const std::size_t k = subset.size();
    std::vector<bool> in_subset(n + 1, false);
    for (int i : subset) {
        in_subset[i] = true;
    }
    // Candidate letter pairs per party in I.
    std::vector<std::vector<std::pair<int, int>>> pairs(k);
    for (std::size_t t = 0; t < k; ++t) {
        int size = ch.in_sizes[subset[t] - 1];
        for (int u = 0; u < size; ++u) {
            for (int v = u + 1; v < size; ++v) {
                if (!binary_pair_only || (u == 0 && v == 1)) {
                    pairs[t].emplace_back(u, v);
                }
            }
        }
        if (pairs[t].empty()) {
            return 0.0;  // a single input letter carries no bit
        }
    }
    std::vector<int> outside_radices;
    std::vector<int> outside_parties;
    for (int i = 1; i <= n; ++i) {
        if (!in_subset[i]) {
            outside_parties.push_back(i);
            outside_radices.push_back(ch.in_sizes[i - 1]);
        }
    }
    std::vector<int> pair_radices(k);
    for (std::size_t t = 0; t < k; ++t) {
        pair_radices[t] = static_cast<int>(pairs[t].size());
    }

    double worst = 0.0;
    std::vector<int> x(n);
    Eigen::VectorXd acc(marg.rows());
    for (std::int64_t pc = 0; pc < radix_product(pair_radices); ++pc) {
        auto pick = decode_index(pc, pair_radices);
        for (std::int64_t oc = 0; oc < radix_product(outside_radices); ++oc) {
            auto fixed = decode_index(oc, outside_radices);
            for (std::size_t t = 0; t < outside_parties.size(); ++t) {
                x[outside_parties[t] - 1] = fixed[t];
            }
            acc.setZero();
            for (std::uint64_t b = 0; b < (std::uint64_t{1} << k); ++b) {
                int sign = 1;
                for (std::size_t t = 0; t < k; ++t) {
                    bool bit = b >> t & 1;
                    const auto &pr = pairs[t][pick[t]];
                    x[subset[t] - 1] = bit ? pr.second : pr.first;
                    if (bit) sign = -sign;
                }
                acc += sign * marg.col(encode_index(x, ch.in_sizes));
            }
            worst = std::max(worst, acc.cwiseAbs().maxCoeff());
        }
    }
    return worst;
}

}  // namespace

ParityReport parity_erasure_classical(const ClassicalChannel &ch, double tol) {
    ch.require_valid(tol);
    ParityReport report;
    report.tol = tol;
    for (auto &subset : nonempty_subsets(all_parties(ch.parties()))) {
        double r = classical_signed_residual(ch, subset, false);
        report.residuals.push_back({std::move(subset), r});
    }
    finish(report);
    return report;
}

namespace {

void require_multipartite(const QuantumChannel &ch, double tol) {
    for (const auto &l : ch.choi.space()) {
        bool is_input = ch.inputs.contains(l);
        bool want_input = l.role == Role::X || l.role == Role::P;
        if (l.role == Role::M || is_input != want_input) {
            throw std::invalid_argument("parity check expects a channel from X/P systems to A/F systems, got " +
                                        ch.choi.space().str());
        }
    }
    ch.require_valid(tol);
}

}  // namespace

ParityReport parity_erasure_quantum(const QuantumChannel &ch, double tol) {
    require_multipartite(ch, tol);
    ParityReport report;
    report.tol = tol;
    for (auto &subset : nonempty_subsets(ch.parties())) {
        double r = subset_condition_residual(ch.choi, subset);
        report.residuals.push_back({std::move(subset), r});
    }
    finish(report);
    return report;
}

std::vector<Matrix> spanning_states(int d) {
    std::vector<Matrix> out;
    auto proj = [&](const Eigen::VectorXcd &v) -> Matrix { return v * v.adjoint(); };
    for (int k = 0; k < d; ++k) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
        v(k) = 1.0;
        out.push_back(proj(v));
    }
    const double s = 1.0 / std::sqrt(2.0);
    for (int k = 0; k < d; ++k) {
        for (int l = k + 1; l < d; ++l) {
            Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
            v(k) = s;
            v(l) = s;
            out.push_back(proj(v));
            v(l) = cplx(0.0, s);
            out.push_back(proj(v));
        }
    }
    return out;
}

std::vector<Matrix> spanning_state_differences(int d) {
    auto states = spanning_states(d);
    std::vector<Matrix> out;
    for (std::size_t m = 1; m < states.size(); ++m) {
        out.push_back(states[m] - states[0]);
    }
    return out;
}

ParityReport parity_erasure_quantum_direct(const QuantumChannel &ch, double tol) {
    require_multipartite(ch, tol);
    ParityReport report;
    report.tol = tol;
    const TensorSpace &space = ch.choi.space();
    const auto parties = ch.parties();
    std::vector<SystemLabel> futures, pasts;
    for (const auto &l : space) {
        if (l.role == Role::F) futures.push_back(l);
        if (l.role == Role::P) pasts.push_back(l);
    }

    for (auto &subset : nonempty_subsets(parties)) {
        // Discard A_j (j not in I) and every F before feeding inputs.
        std::vector<SystemLabel> discard = futures;
        for (int j : parties) {
            if (!std::binary_search(subset.begin(), subset.end(), j)) {
                discard.push_back(space.at(label_a(j, 1)));
            }
        }
        const LabeledOperator marginal = partial_trace(ch.choi, discard);

        // One family of operators per input system.
        std::vector<SystemLabel> slots;
        std::vector<std::vector<Matrix>> families;
        for (int j : parties) {
            SystemLabel x = space.at(label_x(j, 1));
            slots.push_back(x);
            bool in_i = std::binary_search(subset.begin(), subset.end(), j);
            families.push_back(in_i ? spanning_state_differences(x.dim) : spanning_states(x.dim));
        }
        for (const auto &p : pasts) {
            slots.push_back(p);
            families.push_back(spanning_states(p.dim));
        }
        std::vector<int> radices;
        for (const auto &f : families) {
            radices.push_back(static_cast<int>(f.size()));
        }
        double worst = 0.0;
        const std::int64_t combos = radix_product(radices);
        for (std::int64_t c = 0; c < combos; ++c) {
            auto pick = decode_index(c, radices);
            LabeledOperator input;
            for (std::size_t s = 0; s < slots.size(); ++s) {
                input = tensor(input, LabeledOperator(TensorSpace{slots[s]}, families[s][pick[s]]));
            }
            LabeledOperator out = link(input, marginal, input.space().labels());
            worst = std::max(worst, trace_norm(out.matrix()));
        }
        report.residuals.push_back({std::move(subset), worst});
    }
    finish(report);
    return report;
}

// ---------------------------------------------------------------------------------------------
// Local input-output relations

Encoding computational_encoding(const PartySignature &sig) {
    Encoding enc;
    for (const auto &p : sig.parties) {
        Matrix r0 = Matrix::Zero(p.x_dim, p.x_dim), r1 = Matrix::Zero(p.x_dim, p.x_dim);
        r0(0, 0) = 1.0;
        r1(std::min(1, p.x_dim - 1), std::min(1, p.x_dim - 1)) = 1.0;
        enc.states.emplace_back(r0, r1);
    }
    return enc;
}

Measurement computational_measurement(const PartySignature &sig) {
    Measurement meas;
    for (const auto &p : sig.parties) {
        std::vector<Matrix> effects;
        for (int k = 0; k < p.a_dim; ++k) {
            Matrix e = Matrix::Zero(p.a_dim, p.a_dim);
            e(k, k) = 1.0;
            effects.push_back(e);
        }
        meas.effects.push_back(std::move(effects));
    }
    return meas;
}

ClassicalChannel local_io_relation(const ProcessMatrix &W, const Encoding &enc, const Measurement &meas,
                                   double tol) {
    const auto &sig = W.signature;
    const int n = sig.size();
    if (sig.extended()) {
        throw std::invalid_argument("local_io_relation: extended processes are not supported");
    }
    if (static_cast<int>(enc.states.size()) != n || static_cast<int>(meas.effects.size()) != n) {
        throw std::invalid_argument("local_io_relation: encoding/measurement party count mismatch");
    }
    std::vector<int> outs(n), ins(n, 2);
    for (int i = 0; i < n; ++i) {
        const auto &[r0, r1] = enc.states[i];
        for (const Matrix *r : {&r0, &r1}) {
            if (r->rows() != sig.parties[i].x_dim || r->cols() != sig.parties[i].x_dim) {
                throw std::invalid_argument("local_io_relation: encoding state has wrong dimension");
            }
            if (!is_psd(LabeledOperator(TensorSpace{sig.x(i + 1)}, *r), tol) ||
                std::abs(r->trace() - cplx(1.0)) > tol) {
                throw std::invalid_argument("local_io_relation: encoding state is not a density matrix");
            }
        }
        const auto &effects = meas.effects[i];
        if (effects.empty()) {
            throw std::invalid_argument("local_io_relation: measurement without effects");
        }
        Matrix sum = Matrix::Zero(sig.parties[i].a_dim, sig.parties[i].a_dim);
        for (const auto &e : effects) {
            if (e.rows() != sig.parties[i].a_dim || e.cols() != sig.parties[i].a_dim) {
                throw std::invalid_argument("local_io_relation: effect has wrong dimension");
            }
            if (!is_psd(LabeledOperator(TensorSpace{sig.a(i + 1)}, e), tol)) {
                throw std::invalid_argument("local_io_relation: effect is not positive");
            }
            sum += e;
        }
        if ((sum - Matrix::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff() > tol) {
            throw std::invalid_argument("local_io_relation: effects do not sum to the identity");
        }
        outs[i] = static_cast<int>(effects.size());
    }

    std::vector<SystemLabel> x_labels;
    for (int i = 1; i <= n; ++i) {
        x_labels.push_back(sig.x(i));
    }
    // Effects tensored per outcome tuple, on the canonical A space.
    const std::int64_t na = radix_product(outs);
    std::vector<LabeledOperator> effect_ops;
    effect_ops.reserve(na);
    for (std::int64_t a = 0; a < na; ++a) {
        auto digits = decode_index(a, outs);
        LabeledOperator e;
        for (int i = 0; i < n; ++i) {
            e = tensor(e, LabeledOperator(TensorSpace{sig.a(i + 1)}, meas.effects[i][digits[i]]));
        }
        effect_ops.push_back(std::move(e));
    }

    const std::int64_t nx = radix_product(ins);
    Eigen::MatrixXd p(na, nx);
    for (std::int64_t x = 0; x < nx; ++x) {
        auto bits = decode_index(x, ins);
        LabeledOperator input;
        for (int i = 0; i < n; ++i) {
            const auto &pair = enc.states[i];
            input = tensor(input, LabeledOperator(TensorSpace{sig.x(i + 1)}, bits[i] ? pair.second : pair.first));
        }
        LabeledOperator out = link(input, W.W, x_labels);
        for (std::int64_t a = 0; a < na; ++a) {
            p(a, x) = (effect_ops[a].matrix() * out.matrix()).trace().real();
        }
    }
    return ClassicalChannel(std::move(outs), std::move(ins), std::move(p));
}

WeakParityReport weak_parity_check(const ClassicalChannel &ch, double tol) {
    for (int s : ch.in_sizes) {
        if (s != 2) {
            throw std::invalid_argument("weak_parity_check: all input alphabets must be binary");
        }
    }
    ch.require_valid(tol);
    WeakParityReport report;
    report.signed_sum.tol = tol;
    report.uniform_marginal.tol = tol;
    const int n = ch.parties();
    const std::int64_t nx = ch.num_inputs();
    for (const auto &subset : nonempty_subsets(all_parties(n))) {
        report.signed_sum.residuals.push_back({subset, classical_signed_residual(ch, subset, true)});

        const Eigen::MatrixXd marg = ch.marginal(subset);
        Eigen::VectorXd even = Eigen::VectorXd::Zero(marg.rows()), odd = even;
        for (std::int64_t x = 0; x < nx; ++x) {
            auto bits = decode_index(x, ch.in_sizes);
            int parity = 0;
            for (int i : subset) {
                parity ^= bits[i - 1];
            }
            (parity ? odd : even) += marg.col(x);
        }
        const double half = static_cast<double>(nx) / 2.0;
        report.uniform_marginal.residuals.push_back({subset, ((even - odd) / half).cwiseAbs().maxCoeff()});
    }
    finish(report.signed_sum);
    finish(report.uniform_marginal);
    return report;
}

}  // namespace icotk
