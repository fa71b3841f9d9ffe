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

#include "icotk/random.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace icotk {

Matrix random_ginibre(std::int64_t rows, std::int64_t cols, Rng &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix g(rows, cols);
    for (std::int64_t j = 0; j < cols; ++j) {
        for (std::int64_t i = 0; i < rows; ++i) {
            double re = normal(rng);
            double im = normal(rng);
            g(i, j) = cplx(re, im);
        }
    }
    return g;
}

Matrix random_hermitian(std::int64_t d, Rng &rng) {
    Matrix g = random_ginibre(d, d, rng);
    return 0.5 * (g + g.adjoint());
}

Matrix random_unitary(std::int64_t d, Rng &rng) {
    Matrix g = random_ginibre(d, d, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phases so the distribution is Haar.
    for (std::int64_t k = 0; k < d; ++k) {
        cplx rkk = r(k, k);
        double a = std::abs(rkk);
        if (a > 0) {
            q.col(k) *= rkk / a;
        }
    }
    return q;
}

Matrix random_density(std::int64_t d, Rng &rng, std::int64_t rank) {
    if (rank <= 0 || rank > d) {
        rank = d;
    }
    Matrix g = random_ginibre(d, rank, rng);
    Matrix rho = g * g.adjoint();
    return rho / rho.trace().real();
}

LabeledOperator random_hermitian(const TensorSpace &space, Rng &rng) {
    return LabeledOperator(space, random_hermitian(space.dim(), rng));
}

LabeledOperator random_state(const TensorSpace &space, Rng &rng, std::int64_t rank) {
    return LabeledOperator(space, random_density(space.dim(), rng, rank));
}

LabeledOperator normalize_to_channel(const LabeledOperator &choi, const TensorSpace &in) {
    TensorSpace out = choi.space().without(in.labels());
    LabeledOperator marginal = partial_trace(choi, out.labels());
    Eigen::SelfAdjointEigenSolver<Matrix> es(marginal.hermitized().matrix());
    if (es.eigenvalues().minCoeff() <= 0.0) {
        throw std::invalid_argument("normalize_to_channel: input marginal is singular");
    }
    Eigen::VectorXd inv_sqrt = es.eigenvalues().cwiseSqrt().cwiseInverse();
    Matrix y = es.eigenvectors() * inv_sqrt.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
    LabeledOperator factor = tensor(LabeledOperator(marginal.space(), y), LabeledOperator::identity(out));
    Matrix m = factor.matrix() * choi.matrix() * factor.matrix();
    return LabeledOperator(choi.space(), 0.5 * (m + m.adjoint()));
}

LabeledOperator random_channel_choi(const TensorSpace &in, const TensorSpace &out, Rng &rng,
                                    std::int64_t kraus_rank) {
    TensorSpace all = concat(in, out);
    const std::int64_t d = all.dim();
    if (kraus_rank <= 0 || kraus_rank > d) {
        kraus_rank = d;
    }
    Matrix g = random_ginibre(d, kraus_rank, rng);
    LabeledOperator c(all, g * g.adjoint());
    return normalize_to_channel(c, in);
}

std::vector<LabeledOperator> random_instrument(const TensorSpace &in, const TensorSpace &out, int outcomes,
                                               Rng &rng) {
    if (outcomes < 1) {
        throw std::invalid_argument("random_instrument: need at least one outcome");
    }
    TensorSpace all = concat(in, out);
    const std::int64_t d = all.dim();
    std::vector<LabeledOperator> parts;
    LabeledOperator sum = LabeledOperator::zero(all);
    for (int k = 0; k < outcomes; ++k) {
        Matrix g = random_ginibre(d, d, rng);
        parts.emplace_back(all, g * g.adjoint());
        sum += parts.back();
    }
    LabeledOperator marginal = partial_trace(sum, out.labels());
    Eigen::SelfAdjointEigenSolver<Matrix> es(marginal.hermitized().matrix());
    Eigen::VectorXd inv_sqrt = es.eigenvalues().cwiseSqrt().cwiseInverse();
    Matrix y = es.eigenvectors() * inv_sqrt.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
    LabeledOperator factor = tensor(LabeledOperator(marginal.space(), y), LabeledOperator::identity(out));
    for (auto &p : parts) {
        Matrix m = factor.matrix() * p.matrix() * factor.matrix();
        p = LabeledOperator(p.space(), 0.5 * (m + m.adjoint()));
    }
    return parts;
}

}  // namespace icotk
