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

// Shared fixtures and independent oracles for the test suites. Oracles work on raw Eigen
// matrices with explicit index loops and never call the library's contraction routines.

#ifndef ICOTK_TESTS_SUPPORT_HPP
#define ICOTK_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "icotk/channels.hpp"
#include "icotk/process.hpp"
#include "icotk/random.hpp"
#include "icotk/tensor.hpp"

namespace icotk::testing {

using Kraus = std::vector<Matrix>;

inline Matrix ket_bra(int d, int i, int j) {
    Matrix m = Matrix::Zero(d, d);
    m(i, j) = 1.0;
    return m;
}

/// Choi matrix sum_k |K_k>><<K_k| with |K>> = sum_i |i> (x) K|i> (input factor first).
inline Matrix choi_from_kraus(const Kraus &ks) {
    const auto din = ks.front().cols(), dout = ks.front().rows();
    Matrix c = Matrix::Zero(din * dout, din * dout);
    for (const auto &k : ks) {
        Eigen::VectorXcd v(din * dout);
        for (Eigen::Index i = 0; i < din; ++i) {
            for (Eigen::Index o = 0; o < dout; ++o) v(i * dout + o) = k(o, i);
        }
        c += v * v.adjoint();
    }
    return c;
}

inline Matrix apply_kraus(const Kraus &ks, const Matrix &rho) {
    Matrix out = Matrix::Zero(ks.front().rows(), ks.front().rows());
    for (const auto &k : ks) out += k * rho * k.adjoint();
    return out;
}

/// Random channel with `rank` Kraus operators, sliced from a Haar isometry.
inline Kraus random_kraus(int din, int dout, int rank, Rng &rng) {
    Matrix u = random_unitary(static_cast<std::int64_t>(dout) * rank, rng);
    Kraus ks;
    for (int k = 0; k < rank; ++k) ks.push_back(u.block(k * dout, 0, dout, din));
    return ks;
}

/// Random instrument: a Haar isometry sliced into Kraus operators, two per outcome.
inline std::vector<Kraus> random_kraus_instrument(int din, int dout, int outcomes, Rng &rng) {
    Kraus ks = random_kraus(din, dout, 2 * outcomes, rng);
    std::vector<Kraus> out(outcomes);
    for (int e = 0; e < outcomes; ++e) out[e] = {ks[2 * e], ks[2 * e + 1]};
    return out;
}

inline LabeledOperator labeled(const SystemLabel &in, const SystemLabel &out, const Matrix &choi) {
    return LabeledOperator(TensorSpace{in, out}, choi);
}

/// Choi matrix of the identity channel in -> out (an isometry or its adjoint when dims differ).
inline LabeledOperator identity_channel(const SystemLabel &in, const SystemLabel &out) {
    Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(in.dim * out.dim);
    for (int k = 0; k < std::min(in.dim, out.dim); ++k) phi(k * out.dim + k) = 1.0;
    return LabeledOperator(TensorSpace{in, out}, phi * phi.adjoint());
}

/// Qubit swap process X1 -> A2, X2 -> A1.
inline LabeledOperator swap_process(int d = 2) {
    return tensor(identity_channel(label_x(1, d), label_a(2, d)), identity_channel(label_x(2, d), label_a(1, d)));
}

inline ClassicalChannel classical_rule(std::vector<int> outs, std::vector<int> ins,
                                       const std::function<std::vector<int>(const std::vector<int> &)> &f) {
    return ClassicalChannel::deterministic(std::move(outs), std::move(ins), f);
}

/// Entrywise partial trace of the middle factor of a d0 x d1 x d2 operator.
inline Matrix trace_middle_oracle(const Matrix &m, int d0, int d1, int d2) {
    Matrix out = Matrix::Zero(d0 * d2, d0 * d2);
    for (int a = 0; a < d0; ++a)
        for (int c = 0; c < d2; ++c)
            for (int a2 = 0; a2 < d0; ++a2)
                for (int c2 = 0; c2 < d2; ++c2)
                    for (int b = 0; b < d1; ++b)
                        out(a * d2 + c, a2 * d2 + c2) += m((a * d1 + b) * d2 + c, (a2 * d1 + b) * d2 + c2);
    return out;
}

/// Brute-force signed sum over binary inputs of the marginal of (a_i)_{i in I}; inputs outside I
/// are held at `fixed`. Returns the largest absolute value over outcomes.
inline double brute_signed_sum(const ClassicalChannel &ch, const PartySubset &I, const std::vector<int> &fixed) {
    const int n = ch.parties();
    double worst = 0.0;
    for (std::int64_t a = 0; a < ch.num_outputs(); ++a) {
        auto ad = decode_index(a, ch.out_sizes);
        double s = 0.0;
        for (std::int64_t x = 0; x < ch.num_inputs(); ++x) {
            auto xd = decode_index(x, ch.in_sizes);
            bool keep = true;
            int sign = 1;
            for (int i = 1; i <= n; ++i) {
                bool in_i = std::find(I.begin(), I.end(), i) != I.end();
                if (!in_i && xd[i - 1] != fixed[i - 1]) keep = false;
                if (in_i && xd[i - 1] > 1) keep = false;
                if (in_i && xd[i - 1] == 1) sign = -sign;
            }
            if (!keep) continue;
            // Sum p(a'|x) over outputs a' agreeing with a on I.
            for (std::int64_t b = 0; b < ch.num_outputs(); ++b) {
                auto bd = decode_index(b, ch.out_sizes);
                bool match = true;
                for (int i : I) match = match && bd[i - 1] == ad[i - 1];
                if (match) s += sign * ch.table(b, x);
            }
        }
        worst = std::max(worst, std::abs(s));
    }
    return worst;
}

/// Random conditional distribution with exponential-weight columns.
inline ClassicalChannel random_table(std::vector<int> outs, std::vector<int> ins, Rng &rng) {
    std::exponential_distribution<double> ex(1.0);
    Eigen::MatrixXd p(radix_product(outs), radix_product(ins));
    for (Eigen::Index x = 0; x < p.cols(); ++x) {
        for (Eigen::Index a = 0; a < p.rows(); ++a) p(a, x) = ex(rng);
        p.col(x) /= p.col(x).sum();
    }
    return ClassicalChannel(std::move(outs), std::move(ins), std::move(p));
}

}  // namespace icotk::testing

#endif  // ICOTK_TESTS_SUPPORT_HPP
