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

#include "icotk/explorer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <boost/multiprecision/cpp_int.hpp>

#include "icotk/simplex.hpp"

namespace icotk {

namespace {

using Rational = boost::multiprecision::cpp_rational;
using RationalRow = std::vector<Rational>;

std::string digits_str(const std::vector<int> &d) {
    std::string s;
    for (int v : d) s += std::to_string(v);
    return s;
}

}  // namespace

void require_within_caps(const std::vector<int> &out_sizes, const std::vector<int> &in_sizes, const ScaleCaps &caps) {
    if (out_sizes.size() != in_sizes.size() || out_sizes.empty()) {
        throw std::invalid_argument("scenario needs one output and one input alphabet per party");
    }
    for (int s : out_sizes) {
        if (s < 1) throw std::invalid_argument("alphabet sizes must be positive");
    }
    for (int s : in_sizes) {
        if (s < 1) throw std::invalid_argument("alphabet sizes must be positive");
    }
    const std::int64_t no = radix_product(out_sizes);
    const std::int64_t ni = radix_product(in_sizes);
    if (no > caps.max_outputs || ni > caps.max_inputs) {
        throw ScaleCapExceeded("scenario with " + std::to_string(no) + " joint outputs and " + std::to_string(ni) +
                               " joint inputs exceeds the cap of " + std::to_string(caps.max_outputs) + " and " +
                               std::to_string(caps.max_inputs));
    }
}

// ---------------------------------------------------------------------------------------------
// Deterministic channels

std::int64_t DeterministicChannel::output_for(std::int64_t x) const {
    const auto k = static_cast<std::uint64_t>(radix_product(out_sizes));
    std::uint64_t c = code;
    for (std::int64_t t = 0; t < x; ++t) c /= k;
    return static_cast<std::int64_t>(c % k);
}

ClassicalChannel DeterministicChannel::to_channel() const {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(radix_product(out_sizes), radix_product(in_sizes));
    for (std::int64_t x = 0; x < p.cols(); ++x) {
        p(output_for(x), x) = 1.0;
    }
    return ClassicalChannel(out_sizes, in_sizes, std::move(p));
}

DeterministicChannel DeterministicChannel::from_channel(const ClassicalChannel &ch, double tol) {
    DeterministicChannel d{ch.out_sizes, ch.in_sizes, 0};
    const auto k = static_cast<std::uint64_t>(ch.num_outputs());
    std::uint64_t place = 1;
    for (std::int64_t x = 0; x < ch.num_inputs(); ++x) {
        Eigen::Index a = 0;
        ch.table.col(x).maxCoeff(&a);
        Eigen::VectorXd onehot = Eigen::VectorXd::Zero(ch.num_outputs());
        onehot(a) = 1.0;
        if ((ch.table.col(x) - onehot).cwiseAbs().maxCoeff() > tol) {
            throw std::invalid_argument("channel is not deterministic at input " + std::to_string(x));
        }
        d.code += static_cast<std::uint64_t>(a) * place;
        place *= k;
    }
    return d;
}

std::string DeterministicChannel::describe() const {
    std::string s;
    for (std::int64_t x = 0; x < radix_product(in_sizes); ++x) {
        if (x) s += "; ";
        s += "x=" + digits_str(decode_index(x, in_sizes)) + " -> a=" +
             digits_str(decode_index(output_for(x), out_sizes));
    }
    return s;
}

DeterministicEnumerator::DeterministicEnumerator(std::vector<int> out_sizes, std::vector<int> in_sizes,
                                                 const ScaleCaps &caps)
    : out_sizes_(std::move(out_sizes)), in_sizes_(std::move(in_sizes)) {
    require_within_caps(out_sizes_, in_sizes_, caps);
    const auto k = static_cast<std::uint64_t>(radix_product(out_sizes_));
    total_ = 1;
    for (std::int64_t x = 0; x < radix_product(in_sizes_); ++x) {
        if (total_ > std::numeric_limits<std::uint64_t>::max() / k) {
            throw ScaleCapExceeded("deterministic channel count overflows 64 bits");
        }
        total_ *= k;
    }
}

std::optional<DeterministicChannel> DeterministicEnumerator::next() {
    if (next_code_ >= total_) return std::nullopt;
    return DeterministicChannel{out_sizes_, in_sizes_, next_code_++};
}

DeterministicEnumerator enumerate_deterministic(const std::vector<int> &out_sizes, const std::vector<int> &in_sizes,
                                                const ScaleCaps &caps) {
    return DeterministicEnumerator(out_sizes, in_sizes, caps);
}

Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> dependency_graph(const DeterministicChannel &ch) {
    const int n = static_cast<int>(ch.in_sizes.size());
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> dep =
        Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, n, false);
    for (std::int64_t x = 0; x < radix_product(ch.in_sizes); ++x) {
        auto xd = decode_index(x, ch.in_sizes);
        auto ad = decode_index(ch.output_for(x), ch.out_sizes);
        for (int i = 0; i < n; ++i) {
            for (int v = xd[i] + 1; v < ch.in_sizes[i]; ++v) {
                auto other = xd;
                other[i] = v;
                auto bd = decode_index(ch.output_for(encode_index(other, ch.in_sizes)), ch.out_sizes);
                for (int j = 0; j < n; ++j) {
                    if (ad[j] != bd[j]) dep(i, j) = true;
                }
            }
        }
    }
    return dep;
}

bool is_causally_ordered(const DeterministicChannel &ch) {
    auto dep = dependency_graph(ch);
    const int n = static_cast<int>(dep.rows());
    // Repeatedly peel off a party whose output depends on no remaining party's input.
    std::vector<bool> placed(n, false);
    for (int round = 0; round < n; ++round) {
        int pick = -1;
        for (int j = 0; j < n && pick < 0; ++j) {
            if (placed[j]) continue;
            bool free = true;
            for (int i = 0; i < n; ++i) {
                if (!placed[i] && dep(i, j)) free = false;
            }
            if (free) pick = j;
        }
        if (pick < 0) return false;
        placed[pick] = true;
    }
    return true;
}

std::vector<DeterministicChannel> deterministic_parity_erasure_census(const std::vector<int> &out_sizes,
                                                                      const std::vector<int> &in_sizes,
                                                                      const ScaleCaps &caps, double tol) {
    std::vector<DeterministicChannel> out;
    auto stream = enumerate_deterministic(out_sizes, in_sizes, caps);
    while (auto d = stream.next()) {
        if (parity_erasure_classical(d->to_channel(), tol).verdict) {
            out.push_back(*d);
        }
    }
    return out;
}

std::vector<DeterministicChannel> causally_ordered_deterministic(const std::vector<int> &out_sizes,
                                                                 const std::vector<int> &in_sizes,
                                                                 const ScaleCaps &caps) {
    std::vector<DeterministicChannel> out;
    auto stream = enumerate_deterministic(out_sizes, in_sizes, caps);
    while (auto d = stream.next()) {
        if (is_causally_ordered(*d)) out.push_back(*d);
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// Parity-erasure polytope

namespace {

struct RationalSystem {
    std::vector<RationalRow> rows;
    RationalRow rhs;
    int rows_before_filtering = 0;
};

/// Keeps a row only when it is independent of the rows kept so far (augmented with the rhs so
/// inconsistent systems are not silently truncated).
class RowFilter {
   public:
    explicit RowFilter(std::size_t width) : width_(width) {}

    bool add(const RationalRow &row, const Rational &rhs) {
        RationalRow r = row;
        r.push_back(rhs);
        for (std::size_t k = 0; k < echelon_.size(); ++k) {
            const Rational f = r[pivots_[k]];
            if (f == 0) continue;
            for (std::size_t c = 0; c <= width_; ++c) r[c] -= f * echelon_[k][c];
        }
        std::size_t p = 0;
        while (p < width_ && r[p] == 0) ++p;
        if (p == width_) {
            if (r[width_] != 0) throw std::logic_error("parity polytope equalities are inconsistent");
            return false;
        }
        const Rational lead = r[p];
        for (auto &v : r) v /= lead;
        for (std::size_t k = 0; k < echelon_.size(); ++k) {
            const Rational f = echelon_[k][p];
            if (f == 0) continue;
            for (std::size_t c = 0; c <= width_; ++c) echelon_[k][c] -= f * r[c];
        }
        echelon_.push_back(std::move(r));
        pivots_.push_back(p);
        return true;
    }

   private:
    std::size_t width_;
    std::vector<RationalRow> echelon_;
    std::vector<std::size_t> pivots_;
};

RationalSystem build_system(const std::vector<int> &out_sizes, const std::vector<int> &in_sizes) {
    const int n = static_cast<int>(out_sizes.size());
    const std::int64_t no = radix_product(out_sizes);
    const std::int64_t ni = radix_product(in_sizes);
    const auto width = static_cast<std::size_t>(no * ni);
    auto var = [ni](std::int64_t a, std::int64_t x) { return static_cast<std::size_t>(a * ni + x); };

    std::vector<RationalRow> rows;
    RationalRow rhs;
    for (std::int64_t x = 0; x < ni; ++x) {
        RationalRow r(width, 0);
        for (std::int64_t a = 0; a < no; ++a) r[var(a, x)] = 1;
        rows.push_back(std::move(r));
        rhs.push_back(1);
    }
    std::vector<int> parties(n);
    for (int i = 0; i < n; ++i) parties[i] = i + 1;
    for (const auto &subset : nonempty_subsets(parties)) {
        const std::size_t k = subset.size();
        std::vector<bool> in_subset(n + 1, false);
        for (int i : subset) in_subset[i] = true;
        std::vector<std::vector<std::pair<int, int>>> pairs(k);
        bool trivial = false;
        for (std::size_t t = 0; t < k; ++t) {
            for (int u = 0; u < in_sizes[subset[t] - 1]; ++u) {
                for (int v = u + 1; v < in_sizes[subset[t] - 1]; ++v) pairs[t].emplace_back(u, v);
            }
            if (pairs[t].empty()) trivial = true;
        }
        if (trivial) continue;
        std::vector<int> pair_radices, outside_parties, outside_radices, sub_radices;
        for (std::size_t t = 0; t < k; ++t) {
            pair_radices.push_back(static_cast<int>(pairs[t].size()));
            sub_radices.push_back(out_sizes[subset[t] - 1]);
        }
        for (int i = 1; i <= n; ++i) {
            if (!in_subset[i]) {
                outside_parties.push_back(i);
                outside_radices.push_back(in_sizes[i - 1]);
            }
        }
        std::vector<int> x(n);
        for (std::int64_t pc = 0; pc < radix_product(pair_radices); ++pc) {
            auto pick = decode_index(pc, pair_radices);
            for (std::int64_t oc = 0; oc < radix_product(outside_radices); ++oc) {
                auto fixed = decode_index(oc, outside_radices);
                for (std::size_t t = 0; t < outside_parties.size(); ++t) x[outside_parties[t] - 1] = fixed[t];
                for (std::int64_t as = 0; as < radix_product(sub_radices); ++as) {
                    auto want = decode_index(as, sub_radices);
                    RationalRow r(width, 0);
                    for (std::uint64_t b = 0; b < (std::uint64_t{1} << k); ++b) {
                        int sign = 1;
                        for (std::size_t t = 0; t < k; ++t) {
                            bool bit = b >> t & 1;
                            x[subset[t] - 1] = bit ? pairs[t][pick[t]].second : pairs[t][pick[t]].first;
                            if (bit) sign = -sign;
                        }
                        const std::int64_t xf = encode_index(x, in_sizes);
                        for (std::int64_t a = 0; a < no; ++a) {
                            auto ad = decode_index(a, out_sizes);
                            bool match = true;
                            for (std::size_t t = 0; t < k; ++t) match = match && ad[subset[t] - 1] == want[t];
                            if (match) r[var(a, xf)] += sign;
                        }
                    }
                    rows.push_back(std::move(r));
                    rhs.push_back(0);
                }
            }
        }
    }

    RationalSystem sys;
    sys.rows_before_filtering = static_cast<int>(rows.size());
    RowFilter filter(width);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (filter.add(rows[r], rhs[r])) {
            sys.rows.push_back(rows[r]);
            sys.rhs.push_back(rhs[r]);
        }
    }
    return sys;
}

/// Solves the square system on the chosen columns; nullopt when singular.
std::optional<RationalRow> solve_square(const RationalSystem &sys, const std::vector<std::size_t> &cols) {
    const std::size_t r = cols.size();
    std::vector<RationalRow> m(r, RationalRow(r + 1));
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) m[i][j] = sys.rows[i][cols[j]];
        m[i][r] = sys.rhs[i];
    }
    for (std::size_t c = 0; c < r; ++c) {
        std::size_t piv = c;
        while (piv < r && m[piv][c] == 0) ++piv;
        if (piv == r) return std::nullopt;
        std::swap(m[c], m[piv]);
        const Rational lead = m[c][c];
        for (std::size_t j = c; j <= r; ++j) m[c][j] /= lead;
        for (std::size_t i = 0; i < r; ++i) {
            if (i == c || m[i][c] == 0) continue;
            const Rational f = m[i][c];
            for (std::size_t j = c; j <= r; ++j) m[i][j] -= f * m[c][j];
        }
    }
    RationalRow x(r);
    for (std::size_t i = 0; i < r; ++i) x[i] = m[i][r];
    return x;
}

}  // namespace

PolytopeConstraints parity_polytope_constraints(const std::vector<int> &out_sizes, const std::vector<int> &in_sizes) {
    require_within_caps(out_sizes, in_sizes, ScaleCaps{std::numeric_limits<std::int64_t>::max(),
                                                       std::numeric_limits<std::int64_t>::max()});
    auto sys = build_system(out_sizes, in_sizes);
    PolytopeConstraints c;
    c.rows_before_filtering = sys.rows_before_filtering;
    const auto width = static_cast<Eigen::Index>(radix_product(out_sizes) * radix_product(in_sizes));
    c.equalities = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(sys.rows.size()), width);
    c.rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sys.rows.size()));
    for (std::size_t i = 0; i < sys.rows.size(); ++i) {
        for (Eigen::Index j = 0; j < width; ++j) c.equalities(i, j) = sys.rows[i][j].convert_to<double>();
        c.rhs(i) = sys.rhs[i].convert_to<double>();
    }
    return c;
}

std::vector<ClassicalChannel> parity_polytope_vertices(const std::vector<int> &out_sizes,
                                                       const std::vector<int> &in_sizes, const ScaleCaps &caps) {
    require_within_caps(out_sizes, in_sizes, caps);
    const auto sys = build_system(out_sizes, in_sizes);
    const std::int64_t no = radix_product(out_sizes);
    const std::int64_t ni = radix_product(in_sizes);
    const auto width = static_cast<std::size_t>(no * ni);
    const std::size_t rank = sys.rows.size();

    // Every vertex is a basic feasible solution: choose `rank` basic columns, all others zero.
    std::set<RationalRow> found;
    std::vector<bool> chosen(width, false);
    std::fill(chosen.begin(), chosen.begin() + static_cast<std::ptrdiff_t>(rank), true);
    std::vector<std::size_t> cols(rank);
    do {
        std::size_t t = 0;
        for (std::size_t j = 0; j < width; ++j) {
            if (chosen[j]) cols[t++] = j;
        }
        auto sol = solve_square(sys, cols);
        if (!sol) continue;
        bool feasible = std::all_of(sol->begin(), sol->end(), [](const Rational &v) { return v >= 0; });
        if (!feasible) continue;
        RationalRow point(width, 0);
        for (std::size_t i = 0; i < rank; ++i) point[cols[i]] = (*sol)[i];
        found.insert(std::move(point));
    } while (std::prev_permutation(chosen.begin(), chosen.end()));

    std::vector<ClassicalChannel> out;
    for (const auto &point : found) {
        Eigen::MatrixXd p(no, ni);
        for (std::int64_t a = 0; a < no; ++a) {
            for (std::int64_t x = 0; x < ni; ++x) p(a, x) = point[static_cast<std::size_t>(a * ni + x)].convert_to<double>();
        }
        out.emplace_back(out_sizes, in_sizes, std::move(p));
    }
    // Deterministic vertices first in code order, any others after.
    auto key = [](const ClassicalChannel &c) -> std::pair<int, std::uint64_t> {
        try {
            return {0, DeterministicChannel::from_channel(c).code};
        } catch (const std::invalid_argument &) {
            return {1, 0};
        }
    };
    std::stable_sort(out.begin(), out.end(),
                     [&](const ClassicalChannel &l, const ClassicalChannel &r) { return key(l) < key(r); });
    return out;
}

// ---------------------------------------------------------------------------------------------
// Causal separability

SeparabilityCertificate causal_separability_lp(const ClassicalChannel &ch, double tol, const ScaleCaps &caps) {
    ch.require_valid(tol);
    SeparabilityCertificate cert;
    cert.tol = tol;
    cert.vertices = causally_ordered_deterministic(ch.out_sizes, ch.in_sizes, caps);

    const std::int64_t no = ch.num_outputs();
    const std::int64_t ni = ch.num_inputs();
    const Eigen::Index dim = no * ni;
    const auto nv = static_cast<Eigen::Index>(cert.vertices.size());
    Eigen::MatrixXd V(dim, nv);
    for (Eigen::Index k = 0; k < nv; ++k) {
        const Eigen::MatrixXd t = cert.vertices[k].to_channel().table;
        for (std::int64_t a = 0; a < no; ++a) {
            for (std::int64_t x = 0; x < ni; ++x) V(a * ni + x, k) = t(a, x);
        }
    }
    Eigen::VectorXd p(dim);
    for (std::int64_t a = 0; a < no; ++a) {
        for (std::int64_t x = 0; x < ni; ++x) p(a * ni + x) = ch.table(a, x);
    }

    Eigen::MatrixXd A(dim + 1, nv);
    A.topRows(dim) = V;
    A.row(dim).setOnes();
    Eigen::VectorXd b(dim + 1);
    b.head(dim) = p;
    b(dim) = 1.0;

    const FeasibilityResult lp = solve_feasibility(A, b, tol);
    cert.iterations = lp.iterations;
    cert.feasible = lp.feasible;
    if (lp.feasible) {
        cert.weights = lp.x;
        cert.residual = std::max((V * lp.x - p).cwiseAbs().maxCoeff(), std::abs(lp.x.sum() - 1.0));
        if (cert.residual > 10 * tol || lp.x.minCoeff() < -tol) {
            throw LpFailure("separability LP returned weights with residual " + std::to_string(cert.residual));
        }
        return cert;
    }
    cert.witness = -lp.farkas.head(dim);
    cert.witness_offset = -lp.farkas(dim);
    cert.margin = -(cert.witness.dot(p) + cert.witness_offset);
    Eigen::VectorXd on_vertices = (V.transpose() * cert.witness).array() + cert.witness_offset;
    cert.residual = std::max(0.0, -on_vertices.minCoeff());
    if (cert.margin <= tol || cert.residual > tol) {
        throw LpFailure("separability LP produced an unverifiable infeasibility witness (margin " +
                        std::to_string(cert.margin) + ", vertex violation " + std::to_string(cert.residual) + ")");
    }
    return cert;
}

}  // namespace icotk
