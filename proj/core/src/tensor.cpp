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

#include "icotk/tensor.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

namespace icotk {

char role_char(Role r) {
    switch (r) {
        case Role::A:
            return 'A';
        case Role::X:
            return 'X';
        case Role::P:
            return 'P';
        case Role::F:
            return 'F';
        case Role::M:
            return 'M';
    }
    return '?';
}

Role role_from_char(char c) {
    switch (c) {
        case 'A':
            return Role::A;
        case 'X':
            return Role::X;
        case 'P':
            return Role::P;
        case 'F':
            return Role::F;
        case 'M':
            return Role::M;
        default:
            throw std::invalid_argument(std::string("unknown system role '") + c + "'");
    }
}

std::string SystemLabel::str() const {
    std::ostringstream out;
    out << role_char(role) << party;
    if (tag != 0) {
        out << '#' << tag;
    }
    out << '(' << dim << ')';
    return out.str();
}

bool canonical_less(const SystemLabel &a, const SystemLabel &b) {
    if (a.party != b.party) {
        return a.party < b.party;
    }
    if (a.role != b.role) {
        return a.role < b.role;
    }
    return a.tag < b.tag;
}

// ---------------------------------------------------------------------------------------------
// TensorSpace

TensorSpace::TensorSpace(std::vector<SystemLabel> labels) : labels_(std::move(labels)) {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i].dim < 1) {
            throw std::invalid_argument("system " + labels_[i].str() + " has non-positive dimension");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (labels_[i].same_system(labels_[j])) {
                throw std::invalid_argument("duplicate system " + labels_[i].str() + " in tensor space");
            }
        }
    }
}

std::int64_t TensorSpace::dim() const {
    std::int64_t d = 1;
    for (const auto &l : labels_) {
        d *= l.dim;
    }
    return d;
}

std::int64_t TensorSpace::dim_of(std::span<const SystemLabel> subset) const {
    std::int64_t d = 1;
    for (const auto &l : subset) {
        d *= at(l).dim;
    }
    return d;
}

std::optional<std::size_t> TensorSpace::find(const SystemLabel &label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i].same_system(label)) {
            return i;
        }
    }
    return std::nullopt;
}

const SystemLabel &TensorSpace::at(const SystemLabel &label) const {
    auto k = find(label);
    if (!k) {
        throw std::invalid_argument("unknown system " + label.str() + " in space " + str());
    }
    return labels_[*k];
}

bool TensorSpace::is_canonical() const {
    return std::is_sorted(labels_.begin(), labels_.end(), canonical_less);
}

TensorSpace TensorSpace::canonical() const {
    auto sorted = labels_;
    std::sort(sorted.begin(), sorted.end(), canonical_less);
    TensorSpace out;
    out.labels_ = std::move(sorted);
    return out;
}

TensorSpace TensorSpace::without(std::span<const SystemLabel> removed) const {
    for (const auto &r : removed) {
        at(r);
    }
    std::vector<SystemLabel> kept;
    for (const auto &l : labels_) {
        bool drop = std::any_of(removed.begin(), removed.end(), [&](const SystemLabel &r) { return r.same_system(l); });
        if (!drop) {
            kept.push_back(l);
        }
    }
    TensorSpace out;
    out.labels_ = std::move(kept);
    return out;
}

TensorSpace TensorSpace::with_roles(std::initializer_list<Role> roles) const {
    std::vector<SystemLabel> kept;
    for (const auto &l : labels_) {
        if (std::find(roles.begin(), roles.end(), l.role) != roles.end()) {
            kept.push_back(l);
        }
    }
    TensorSpace out;
    out.labels_ = std::move(kept);
    return out;
}

std::vector<int> TensorSpace::parties() const {
    std::vector<int> out;
    for (const auto &l : labels_) {
        if ((l.role == Role::A || l.role == Role::X) && l.party >= 1) {
            out.push_back(l.party);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool TensorSpace::same_set(const TensorSpace &other) const {
    return canonical() == other.canonical();
}

std::string TensorSpace::str() const {
    std::ostringstream out;
    out << '[';
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        out << (i ? " " : "") << labels_[i].str();
    }
    out << ']';
    return out.str();
}

TensorSpace concat(const TensorSpace &a, const TensorSpace &b) {
    std::vector<SystemLabel> all = a.labels();
    all.insert(all.end(), b.begin(), b.end());
    return TensorSpace(std::move(all));
}

// ---------------------------------------------------------------------------------------------
// Index helpers

namespace {

std::vector<std::int64_t> strides_of(const TensorSpace &s) {
    std::vector<std::int64_t> st(s.size());
    std::int64_t acc = 1;
    for (std::size_t k = s.size(); k-- > 0;) {
        st[k] = acc;
        acc *= s[k].dim;
    }
    return st;
}

/// Splits every flat index of `space` into the flat index over the factors in `sub`
/// (ordered as in `space`) and the flat index over the remaining factors.
struct IndexSplit {
    std::vector<std::int64_t> inner;  // index over `sub`
    std::vector<std::int64_t> outer;  // index over the complement
    std::int64_t inner_dim = 1;
    std::int64_t outer_dim = 1;
};

IndexSplit split_indices(const TensorSpace &space, std::span<const SystemLabel> sub) {
    const std::size_t n = space.size();
    std::vector<bool> in_sub(n, false);
    for (const auto &l : sub) {
        in_sub[*space.find(l)] = true;
    }
    // Per-factor contribution strides in each of the two sub-indices.
    std::vector<std::int64_t> inner_stride(n, 0), outer_stride(n, 0);
    IndexSplit out;
    for (std::size_t k = n; k-- > 0;) {
        if (in_sub[k]) {
            inner_stride[k] = out.inner_dim;
            out.inner_dim *= space[k].dim;
        } else {
            outer_stride[k] = out.outer_dim;
            out.outer_dim *= space[k].dim;
        }
    }
    const std::int64_t total = space.dim();
    out.inner.assign(total, 0);
    out.outer.assign(total, 0);
    std::vector<int> digit(n, 0);
    std::int64_t in_idx = 0, out_idx = 0;
    for (std::int64_t f = 0; f < total; ++f) {
        out.inner[f] = in_idx;
        out.outer[f] = out_idx;
        // Increment the mixed-radix counter (last factor fastest).
        for (std::size_t k = n; k-- > 0;) {
            std::int64_t step = in_sub[k] ? inner_stride[k] : outer_stride[k];
            if (++digit[k] < space[k].dim) {
                (in_sub[k] ? in_idx : out_idx) += step;
                break;
            }
            (in_sub[k] ? in_idx : out_idx) -= step * (space[k].dim - 1);
            digit[k] = 0;
        }
    }
    return out;
}

void require_subset(const TensorSpace &space, std::span<const SystemLabel> labels) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        space.at(labels[i]);
        for (std::size_t j = 0; j < i; ++j) {
            if (labels[i].same_system(labels[j])) {
                throw std::invalid_argument("system " + labels[i].str() + " listed twice");
            }
        }
    }
}

}  // namespace

std::vector<std::int64_t> factor_permutation(const TensorSpace &from, const TensorSpace &to) {
    if (from.size() != to.size()) {
        throw std::invalid_argument("factor_permutation: spaces differ in size");
    }
    auto to_strides = strides_of(to);
    std::vector<std::int64_t> stride_in_to(from.size());
    for (std::size_t k = 0; k < from.size(); ++k) {
        auto pos = to.find(from[k]);
        if (!pos || to[*pos].dim != from[k].dim) {
            throw std::invalid_argument("factor_permutation: system " + from[k].str() + " not matched");
        }
        stride_in_to[k] = to_strides[*pos];
    }
    const std::int64_t total = from.dim();
    std::vector<std::int64_t> perm(total);
    std::vector<int> digit(from.size(), 0);
    std::int64_t idx = 0;
    for (std::int64_t f = 0; f < total; ++f) {
        perm[f] = idx;
        for (std::size_t k = from.size(); k-- > 0;) {
            if (++digit[k] < from[k].dim) {
                idx += stride_in_to[k];
                break;
            }
            idx -= stride_in_to[k] * (from[k].dim - 1);
            digit[k] = 0;
        }
    }
    return perm;
}

namespace {

Matrix permute_matrix(const Matrix &m, const std::vector<std::int64_t> &perm) {
    const auto d = static_cast<std::int64_t>(perm.size());
    Matrix out(d, d);
    for (std::int64_t j = 0; j < d; ++j) {
        for (std::int64_t i = 0; i < d; ++i) {
            out(perm[i], perm[j]) = m(i, j);
        }
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------------------------
// LabeledOperator

LabeledOperator::LabeledOperator() : matrix_(Matrix::Ones(1, 1)) {}

LabeledOperator::LabeledOperator(TensorSpace space, Matrix matrix) {
    if (matrix.rows() != matrix.cols() || matrix.rows() != space.dim()) {
        throw std::invalid_argument("operator of size " + std::to_string(matrix.rows()) + "x" +
                                    std::to_string(matrix.cols()) + " does not match space " + space.str());
    }
    if (space.is_canonical()) {
        space_ = std::move(space);
        matrix_ = std::move(matrix);
        return;
    }
    TensorSpace canon = space.canonical();
    matrix_ = permute_matrix(matrix, factor_permutation(space, canon));
    space_ = std::move(canon);
}

LabeledOperator LabeledOperator::identity(const TensorSpace &space) {
    return LabeledOperator(space, Matrix::Identity(space.dim(), space.dim()));
}

LabeledOperator LabeledOperator::scalar(cplx value) {
    Matrix m(1, 1);
    m(0, 0) = value;
    return LabeledOperator(TensorSpace{}, m);
}

LabeledOperator LabeledOperator::zero(const TensorSpace &space) {
    return LabeledOperator(space, Matrix::Zero(space.dim(), space.dim()));
}

Matrix LabeledOperator::matrix_in(const TensorSpace &order) const {
    if (order == space_) {
        return matrix_;
    }
    return permute_matrix(matrix_, factor_permutation(space_, order));
}

LabeledOperator LabeledOperator::adjoint() const {
    LabeledOperator out = *this;
    out.matrix_ = matrix_.adjoint();
    return out;
}

LabeledOperator LabeledOperator::hermitized() const {
    LabeledOperator out = *this;
    out.matrix_ = 0.5 * (matrix_ + matrix_.adjoint());
    return out;
}

LabeledOperator LabeledOperator::transposed() const {
    LabeledOperator out = *this;
    out.matrix_ = matrix_.transpose();
    return out;
}

LabeledOperator LabeledOperator::partial_transpose(std::span<const SystemLabel> labels) const {
    require_subset(space_, labels);
    auto split = split_indices(space_, labels);
    const std::int64_t d = dim();
    std::vector<std::int64_t> full(split.outer_dim * split.inner_dim);
    for (std::int64_t f = 0; f < d; ++f) {
        full[split.outer[f] * split.inner_dim + split.inner[f]] = f;
    }
    LabeledOperator out = *this;
    for (std::int64_t j = 0; j < d; ++j) {
        for (std::int64_t i = 0; i < d; ++i) {
            std::int64_t ii = full[split.outer[i] * split.inner_dim + split.inner[j]];
            std::int64_t jj = full[split.outer[j] * split.inner_dim + split.inner[i]];
            out.matrix_(ii, jj) = matrix_(i, j);
        }
    }
    return out;
}

double LabeledOperator::hermiticity_error() const {
    return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
}

LabeledOperator LabeledOperator::relabel_parties(const std::map<int, int> &party_map) const {
    std::vector<SystemLabel> labels = space_.labels();
    for (auto &l : labels) {
        auto it = party_map.find(l.party);
        if (it != party_map.end()) {
            l.party = it->second;
        }
    }
    return LabeledOperator(TensorSpace(std::move(labels)), matrix_);
}

LabeledOperator &LabeledOperator::operator+=(const LabeledOperator &rhs) {
    if (!(rhs.space_ == space_)) {
        throw std::invalid_argument("operator spaces differ: " + space_.str() + " vs " + rhs.space_.str());
    }
    matrix_ += rhs.matrix_;
    return *this;
}

LabeledOperator &LabeledOperator::operator-=(const LabeledOperator &rhs) {
    if (!(rhs.space_ == space_)) {
        throw std::invalid_argument("operator spaces differ: " + space_.str() + " vs " + rhs.space_.str());
    }
    matrix_ -= rhs.matrix_;
    return *this;
}

LabeledOperator &LabeledOperator::operator*=(cplx s) {
    matrix_ *= s;
    return *this;
}

// ---------------------------------------------------------------------------------------------
// Algebra

LabeledOperator tensor(const LabeledOperator &a, const LabeledOperator &b) {
    for (const auto &l : b.space()) {
        if (a.space().contains(l)) {
            throw std::invalid_argument("tensor: system " + l.str() + " appears in both factors");
        }
    }
    Matrix m = Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval();
    return LabeledOperator(concat(a.space(), b.space()), std::move(m));
}

LabeledOperator tensor_all(std::span<const LabeledOperator> ops) {
    LabeledOperator acc;
    for (const auto &op : ops) {
        acc = tensor(acc, op);
    }
    return acc;
}

LabeledOperator partial_trace(const LabeledOperator &op, std::span<const SystemLabel> labels) {
    require_subset(op.space(), labels);
    if (labels.empty()) {
        return op;
    }
    auto split = split_indices(op.space(), labels);
    const std::int64_t dk = split.outer_dim, dt = split.inner_dim;
    std::vector<std::int64_t> full(dk * dt);
    for (std::int64_t f = 0; f < op.dim(); ++f) {
        full[split.outer[f] * dt + split.inner[f]] = f;
    }
    const Matrix &m = op.matrix();
    Matrix out = Matrix::Zero(dk, dk);
    for (std::int64_t c = 0; c < dk; ++c) {
        for (std::int64_t r = 0; r < dk; ++r) {
            cplx acc = 0;
            for (std::int64_t t = 0; t < dt; ++t) {
                acc += m(full[r * dt + t], full[c * dt + t]);
            }
            out(r, c) = acc;
        }
    }
    return LabeledOperator(op.space().without(labels), std::move(out));
}

LabeledOperator trace_and_replace(const LabeledOperator &op, std::span<const SystemLabel> labels) {
    require_subset(op.space(), labels);
    if (labels.empty()) {
        return op;
    }
    auto split = split_indices(op.space(), labels);
    const Matrix reduced = partial_trace(op, labels).matrix();
    const double inv = 1.0 / static_cast<double>(split.inner_dim);
    const std::int64_t d = op.dim();
    Matrix out(d, d);
    for (std::int64_t j = 0; j < d; ++j) {
        for (std::int64_t i = 0; i < d; ++i) {
            out(i, j) = split.inner[i] == split.inner[j] ? reduced(split.outer[i], split.outer[j]) * inv : cplx(0);
        }
    }
    return LabeledOperator(op.space(), std::move(out));
}

std::vector<ReductionExpression::Term> ReductionExpression::expand() const {
    std::vector<Term> terms{{1, replace}};
    auto fork = [&](const SystemLabel &l) {
        std::vector<Term> next;
        next.reserve(terms.size() * 2);
        for (const auto &t : terms) {
            next.push_back(t);
            Term with = t;
            with.sign = -t.sign;
            with.labels.push_back(l);
            next.push_back(std::move(with));
        }
        terms = std::move(next);
    };
    for (const auto &[party, factor] : factors) {
        if (factor == PartyFactor::AX) {
            for (auto &t : terms) {
                t.labels.push_back(SystemLabel{party, Role::A, 1, 0});
                t.labels.push_back(SystemLabel{party, Role::X, 1, 0});
            }
        } else {
            fork(SystemLabel{party, Role::X, 1, 0});
        }
    }
    for (const auto &l : one_minus) {
        fork(l);
    }
    return terms;
}

LabeledOperator signed_reduce(const LabeledOperator &op, const ReductionExpression &expr) {
    LabeledOperator acc = LabeledOperator::zero(op.space());
    for (const auto &term : expr.expand()) {
        std::vector<SystemLabel> resolved;
        resolved.reserve(term.labels.size());
        for (const auto &l : term.labels) {
            resolved.push_back(op.space().at(l));
        }
        acc += trace_and_replace(op, resolved) * cplx(term.sign);
    }
    return acc;
}

LabeledOperator link(const LabeledOperator &a, const LabeledOperator &b, std::span<const SystemLabel> contract) {
    std::vector<SystemLabel> shared;
    for (const auto &l : contract) {
        const auto &la = a.space().at(l);
        const auto &lb = b.space().at(l);
        if (la.dim != lb.dim) {
            throw std::invalid_argument("link: dimension mismatch on " + la.str() + " vs " + lb.str());
        }
        for (const auto &s : shared) {
            if (s.same_system(l)) {
                throw std::invalid_argument("link: system " + l.str() + " contracted twice");
            }
        }
        shared.push_back(la);
    }
    TensorSpace a_keep = a.space().without(shared);
    TensorSpace b_keep = b.space().without(shared);
    for (const auto &l : b_keep) {
        if (a_keep.contains(l)) {
            throw std::invalid_argument("link: system " + l.str() + " is open in both operands");
        }
    }
    auto sa = split_indices(a.space(), shared);
    auto sb = split_indices(b.space(), shared);
    const std::int64_t da = sa.outer_dim, ds = sa.inner_dim, db = sb.outer_dim;

    // A'[(a,a'),(t,s)] = A[(a,t),(a',s)] and B'[(t,s),(b,b')] = B[(t,b),(s,b')].
    Matrix ap(da * da, ds * ds);
    for (std::int64_t j = 0; j < a.dim(); ++j) {
        for (std::int64_t i = 0; i < a.dim(); ++i) {
            ap(sa.outer[i] * da + sa.outer[j], sa.inner[i] * ds + sa.inner[j]) = a.matrix()(i, j);
        }
    }
    Matrix bp(ds * ds, db * db);
    for (std::int64_t j = 0; j < b.dim(); ++j) {
        for (std::int64_t i = 0; i < b.dim(); ++i) {
            bp(sb.inner[i] * ds + sb.inner[j], sb.outer[i] * db + sb.outer[j]) = b.matrix()(i, j);
        }
    }
    Matrix rp = ap * bp;
    Matrix out(da * db, da * db);
    for (std::int64_t x = 0; x < da; ++x) {
        for (std::int64_t xp = 0; xp < da; ++xp) {
            for (std::int64_t y = 0; y < db; ++y) {
                for (std::int64_t yp = 0; yp < db; ++yp) {
                    out(x * db + y, xp * db + yp) = rp(x * da + xp, y * db + yp);
                }
            }
        }
    }
    return LabeledOperator(concat(a_keep, b_keep), std::move(out));
}

LabeledOperator link(const LabeledOperator &a, const LabeledOperator &b) {
    std::vector<SystemLabel> shared;
    for (const auto &l : a.space()) {
        if (b.space().contains(l)) {
            shared.push_back(l);
        }
    }
    return link(a, b, shared);
}

LabeledOperator solve_link(const LabeledOperator &a, const LabeledOperator &target,
                           std::span<const SystemLabel> contract) {
    std::vector<SystemLabel> shared;
    for (const auto &l : contract) {
        shared.push_back(a.space().at(l));
        if (target.space().contains(l)) {
            throw std::invalid_argument("solve_link: contracted system " + l.str() + " appears in the target");
        }
    }
    std::sort(shared.begin(), shared.end(), canonical_less);
    TensorSpace a_keep = a.space().without(shared);
    for (const auto &l : a_keep) {
        if (target.space().at(l).dim != l.dim) {
            throw std::invalid_argument("solve_link: dimension mismatch on " + l.str());
        }
    }
    TensorSpace b_keep = target.space().without(a_keep.labels());
    auto sa = split_indices(a.space(), shared);
    auto st = split_indices(target.space(), a_keep.labels());
    const std::int64_t da = sa.outer_dim, ds = sa.inner_dim, db = st.outer_dim;

    Matrix ap(da * da, ds * ds);
    for (std::int64_t j = 0; j < a.dim(); ++j) {
        for (std::int64_t i = 0; i < a.dim(); ++i) {
            ap(sa.outer[i] * da + sa.outer[j], sa.inner[i] * ds + sa.inner[j]) = a.matrix()(i, j);
        }
    }
    Matrix rp(da * da, db * db);
    for (std::int64_t j = 0; j < target.dim(); ++j) {
        for (std::int64_t i = 0; i < target.dim(); ++i) {
            rp(st.inner[i] * da + st.inner[j], st.outer[i] * db + st.outer[j]) = target.matrix()(i, j);
        }
    }
    Matrix bp = ap.completeOrthogonalDecomposition().solve(rp);
    // b is laid out as (shared, b_keep); B'[(t,s),(b,b')] = b[(t,b),(s,b')].
    Matrix b(ds * db, ds * db);
    for (std::int64_t t = 0; t < ds; ++t) {
        for (std::int64_t s = 0; s < ds; ++s) {
            for (std::int64_t x = 0; x < db; ++x) {
                for (std::int64_t y = 0; y < db; ++y) {
                    b(t * db + x, s * db + y) = bp(t * ds + s, x * db + y);
                }
            }
        }
    }
    return LabeledOperator(concat(TensorSpace(shared), b_keep), std::move(b));
}

cplx hs_inner(const LabeledOperator &a, const LabeledOperator &b) {
    if (!(a.space() == b.space())) {
        throw std::invalid_argument("hs_inner: operator spaces differ");
    }
    return (a.matrix().adjoint() * b.matrix()).trace();
}

}  // namespace icotk
