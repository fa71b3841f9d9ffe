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

#include "icotk/process.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "icotk/random.hpp"

namespace icotk {

PartySignature PartySignature::qubits(int n, int past_dim, int future_dim) {
    PartySignature sig;
    sig.parties.assign(n, PartyDims{2, 2});
    sig.past_dim = past_dim;
    sig.future_dim = future_dim;
    return sig;
}

PartySignature PartySignature::from_space(const TensorSpace &space) {
    PartySignature sig;
    auto parties = space.parties();
    for (std::size_t k = 0; k < parties.size(); ++k) {
        if (parties[k] != static_cast<int>(k) + 1) {
            throw std::invalid_argument("process parties must be numbered 1..N, found gap in " + space.str());
        }
    }
    sig.parties.resize(parties.size());
    for (const auto &l : space) {
        switch (l.role) {
            case Role::A:
            case Role::X:
                if (l.tag != 0) {
                    throw std::invalid_argument("unexpected tagged system " + l.str());
                }
                (l.role == Role::A ? sig.parties[l.party - 1].a_dim : sig.parties[l.party - 1].x_dim) = l.dim;
                break;
            case Role::P:
            case Role::F:
                if (l.party != 0 || l.tag != 0) {
                    throw std::invalid_argument("only the global P/F extensions are allowed in a process, got " +
                                                l.str());
                }
                (l.role == Role::P ? sig.past_dim : sig.future_dim) = l.dim;
                break;
            case Role::M:
                throw std::invalid_argument("memory system " + l.str() + " cannot appear in a process");
        }
    }
    for (int i = 1; i <= sig.size(); ++i) {
        if (!space.contains(label_a(i, 1)) || !space.contains(label_x(i, 1))) {
            throw std::invalid_argument("party " + std::to_string(i) + " needs both an A and an X system");
        }
    }
    return sig;
}

void PartySignature::validate() const {
    if (parties.empty()) {
        throw std::invalid_argument("signature needs at least one party");
    }
    for (const auto &p : parties) {
        if (p.a_dim < 1 || p.x_dim < 1) {
            throw std::invalid_argument("signature dimensions must be >= 1");
        }
    }
    if (past_dim < 1 || future_dim < 1) {
        throw std::invalid_argument("extension dimensions must be >= 1");
    }
}

TensorSpace PartySignature::space() const {
    std::vector<SystemLabel> labels;
    for (int i = 1; i <= size(); ++i) {
        labels.push_back(a(i));
        labels.push_back(x(i));
    }
    if (past_dim > 1) {
        labels.push_back(past());
    }
    if (future_dim > 1) {
        labels.push_back(future());
    }
    return TensorSpace(std::move(labels)).canonical();
}

std::int64_t PartySignature::normalization() const {
    std::int64_t n = past_dim;
    for (const auto &p : parties) {
        n *= p.x_dim;
    }
    return n;
}

std::int64_t PartySignature::a_dim_product() const {
    std::int64_t n = 1;
    for (const auto &p : parties) {
        n *= p.a_dim;
    }
    return n;
}

std::string subset_str(const PartySubset &subset) {
    std::ostringstream out;
    out << '{';
    for (std::size_t k = 0; k < subset.size(); ++k) {
        out << (k ? "," : "") << subset[k];
    }
    out << '}';
    return out.str();
}

std::vector<PartySubset> nonempty_subsets(const std::vector<int> &parties) {
    std::vector<PartySubset> out;
    const std::size_t n = parties.size();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        PartySubset s;
        for (std::size_t k = 0; k < n; ++k) {
            if (mask >> k & 1) {
                s.push_back(parties[k]);
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

ProcessMatrix::ProcessMatrix(PartySignature sig, LabeledOperator w) : signature(std::move(sig)), W(std::move(w)) {
    signature.validate();
    if (!W.space().same_set(signature.space())) {
        throw std::invalid_argument("process operator space " + W.space().str() + " does not match signature " +
                                    signature.space().str());
    }
}

ProcessMatrix::ProcessMatrix(LabeledOperator w) : ProcessMatrix(PartySignature::from_space(w.space()), LabeledOperator(w)) {}

std::optional<SubsetResidual> ValidationReport::worst_violation() const {
    std::optional<SubsetResidual> worst;
    for (const auto &r : subset_residuals) {
        if (r.residual > tol && (!worst || r.residual > worst->residual)) {
            worst = r;
        }
    }
    return worst;
}

// ---------------------------------------------------------------------------------------------

namespace {

std::vector<SystemLabel> labels_with_role(const TensorSpace &space, Role role) {
    std::vector<SystemLabel> out;
    for (const auto &l : space) {
        if (l.role == role) {
            out.push_back(l);
        }
    }
    return out;
}

}  // namespace

ReductionExpression subset_expression(const TensorSpace &space, const PartySubset &subset) {
    if (subset.empty()) {
        throw std::invalid_argument("party subset must be nonempty");
    }
    auto parties = space.parties();
    ReductionExpression expr;
    for (int p : parties) {
        expr.factors[p] = PartyFactor::AX;
    }
    for (int i : subset) {
        if (!std::binary_search(parties.begin(), parties.end(), i)) {
            throw std::invalid_argument("party " + std::to_string(i) + " not present in " + space.str());
        }
        expr.factors[i] = PartyFactor::OneMinusX;
    }
    expr.replace = labels_with_role(space, Role::F);
    return expr;
}

double subset_condition_residual(const LabeledOperator &W, const PartySubset &subset) {
    return operator_norm(signed_reduce(W, subset_expression(W.space(), subset)));
}

double subset_condition_residual(const ProcessMatrix &W, const PartySubset &subset) {
    return subset_condition_residual(W.W, subset);
}

namespace {

ReductionExpression extension_expression(const TensorSpace &space) {
    ReductionExpression expr;
    for (int p : space.parties()) {
        expr.factors[p] = PartyFactor::AX;
    }
    expr.replace = labels_with_role(space, Role::F);
    expr.one_minus = labels_with_role(space, Role::P);
    return expr;
}

}  // namespace

double extension_condition_residual(const LabeledOperator &W) {
    auto expr = extension_expression(W.space());
    if (expr.one_minus.empty()) {
        return 0.0;
    }
    return operator_norm(signed_reduce(W, expr));
}

ValidationReport validate(const ProcessMatrix &W, double tol) {
    double herm = W.W.hermiticity_error();
    if (herm > tol) {
        throw std::invalid_argument("validate: process operator is not Hermitian (deviation " +
                                    std::to_string(herm) + ")");
    }
    ValidationReport report;
    report.tol = tol;
    report.psd_margin = min_eigenvalue(W.W);
    report.trace_error = std::abs(W.W.trace() - cplx(static_cast<double>(W.signature.normalization())));
    for (auto &subset : nonempty_subsets(W.W.space().parties())) {
        double r = subset_condition_residual(W.W, subset);
        report.subset_residuals.push_back({std::move(subset), r});
    }
    report.extension_residual = extension_condition_residual(W.W);
    report.verdict = report.psd_margin >= -tol && report.trace_error <= tol && report.extension_residual <= tol &&
                     std::all_of(report.subset_residuals.begin(), report.subset_residuals.end(),
                                 [&](const SubsetResidual &r) { return r.residual <= tol; });
    return report;
}

LabeledOperator project_to_subspace(const LabeledOperator &W) {
    if (!W.is_hermitian(1e-8)) {
        throw std::invalid_argument("project_to_subspace: operator is not Hermitian");
    }
    LabeledOperator out = W;
    for (const auto &subset : nonempty_subsets(W.space().parties())) {
        out -= signed_reduce(W, subset_expression(W.space(), subset));
    }
    auto ext = extension_expression(W.space());
    if (!ext.one_minus.empty()) {
        out -= signed_reduce(W, ext);
    }
    return out.hermitized();
}

LabeledOperator uniform_noise_process(const PartySignature &sig) {
    sig.validate();
    TensorSpace space = sig.space();
    double scale = 1.0 / static_cast<double>(sig.a_dim_product() * sig.future_dim);
    return LabeledOperator::identity(space) * cplx(scale);
}

double minimal_mixing_weight(const PartySignature &sig, const LabeledOperator &traceless) {
    const double floor = 1.0 / static_cast<double>(sig.a_dim_product() * sig.future_dim);
    double lmin = min_eigenvalue(traceless);
    if (lmin >= -floor) {
        return 0.0;
    }
    return 1.0 - floor / -lmin;
}

ProcessMatrix random_valid_process(const PartySignature &sig, std::uint64_t seed,
                                   const RandomProcessOptions &options) {
    sig.validate();
    Rng rng(seed);
    const TensorSpace space = sig.space();
    const LabeledOperator w0 = uniform_noise_process(sig);
    LabeledOperator projected = project_to_subspace(random_hermitian(space, rng));
    // W_0 lies in the subspace, so removing its trace share keeps the result inside it.
    LabeledOperator traceless = projected - w0 * (projected.trace() / w0.trace());
    traceless = traceless.hermitized();

    const double wmin = minimal_mixing_weight(sig, traceless);
    double w = options.mixing_weight.value_or(wmin + 0.01 * (1.0 - wmin));
    if (w < wmin - 1e-15 || w > 1.0) {
        throw std::invalid_argument("random_valid_process: mixing weight " + std::to_string(w) +
                                    " outside [" + std::to_string(wmin) + ", 1]");
    }
    if (w >= 1.0) {
        return ProcessMatrix(sig, w0);
    }
    LabeledOperator W = w0 + traceless * cplx(1.0 - w);
    // Restore the exact trace lost to rounding.
    W *= cplx(static_cast<double>(sig.normalization()) / W.trace().real());
    return ProcessMatrix(sig, W.hermitized());
}

namespace {

SystemLabel memory_label(int step, int dim) { return {0, Role::M, dim, step + 1}; }

}  // namespace

ProcessMatrix random_ordered_process(const PartySignature &sig, std::span<const int> order, std::uint64_t seed,
                                     int memory_dim) {
    sig.validate();
    const int n = sig.size();
    {
        std::vector<int> sorted(order.begin(), order.end());
        std::sort(sorted.begin(), sorted.end());
        for (int k = 0; k < n; ++k) {
            if (static_cast<int>(sorted.size()) != n || sorted[k] != k + 1) {
                throw std::invalid_argument("random_ordered_process: order is not a permutation of the parties");
            }
        }
    }
    if (memory_dim < 1) {
        throw std::invalid_argument("random_ordered_process: memory dimension must be >= 1");
    }
    Rng rng(seed);

    SystemLabel mem = memory_label(0, memory_dim);
    LabeledOperator comb;
    TensorSpace first_out{sig.a(order[0]), mem};
    if (sig.past_dim > 1) {
        comb = random_channel_choi(TensorSpace{sig.past()}, first_out, rng);
    } else {
        comb = random_state(first_out, rng);
    }
    for (int k = 0; k + 1 < n; ++k) {
        SystemLabel next_mem = memory_label(k + 1, memory_dim);
        LabeledOperator step =
            random_channel_choi(TensorSpace{sig.x(order[k]), mem}, TensorSpace{sig.a(order[k + 1]), next_mem}, rng);
        comb = link(comb, step, std::vector<SystemLabel>{mem});
        mem = next_mem;
    }
    TensorSpace last_in{sig.x(order[n - 1]), mem};
    LabeledOperator last;
    if (sig.future_dim > 1) {
        last = random_channel_choi(last_in, TensorSpace{sig.future()}, rng);
    } else {
        last = LabeledOperator::identity(last_in);  // Choi of the discarding map
    }
    comb = link(comb, last, std::vector<SystemLabel>{mem});
    return ProcessMatrix(sig, comb.hermitized());
}

namespace {

LabeledOperator tensor_local_ops(const ProcessMatrix &W, std::span<const LabeledOperator> ops, double tol) {
    const auto &sig = W.signature;
    if (static_cast<int>(ops.size()) != sig.size()) {
        throw std::invalid_argument("pair: expected " + std::to_string(sig.size()) + " local operations, got " +
                                    std::to_string(ops.size()));
    }
    for (int i = 1; i <= sig.size(); ++i) {
        const auto &op = ops[i - 1];
        for (const auto &want : {sig.a(i), sig.x(i)}) {
            auto got = op.space().find(want);
            if (!got || op.space()[*got].dim != want.dim) {
                throw std::invalid_argument("pair: local operation " + std::to_string(i) + " lacks system " +
                                            want.str());
            }
        }
        for (const auto &l : op.space()) {
            bool own = (l.role == Role::A || l.role == Role::X) && l.party == i;
            bool ancilla = (l.role == Role::P || l.role == Role::F) && l.party == i;
            if (!own && !ancilla) {
                throw std::invalid_argument("pair: local operation " + std::to_string(i) + " has foreign system " +
                                            l.str());
            }
        }
        if (!is_psd(op, tol)) {
            throw std::invalid_argument("pair: local operation " + std::to_string(i) + " is not completely positive");
        }
    }
    return tensor_all(ops);
}

}  // namespace

LabeledOperator pair(const ProcessMatrix &W, std::span<const LabeledOperator> ops, double tol) {
    LabeledOperator local = tensor_local_ops(W, ops, tol);
    std::vector<SystemLabel> contract;
    for (int i = 1; i <= W.signature.size(); ++i) {
        contract.push_back(W.signature.a(i));
        contract.push_back(W.signature.x(i));
    }
    return link(W.W, local, contract);
}

double pair_probability(const ProcessMatrix &W, std::span<const LabeledOperator> ops, double tol) {
    LabeledOperator r = pair(W, ops, tol);
    if (!r.space().empty()) {
        throw std::invalid_argument("pair_probability: systems " + r.space().str() + " remain open");
    }
    return r.matrix()(0, 0).real();
}

}  // namespace icotk
