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

#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "icotk/tensor.hpp"

namespace icotk {

namespace {

// Hermitian inputs (within a tight absolute slack) take the eigenvalue path.
bool nearly_hermitian(const Matrix &m) {
    double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
}

Eigen::VectorXd singular_values(const Matrix &m) {
    if (m.size() == 0) {
        return Eigen::VectorXd();
    }
    if (nearly_hermitian(m)) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
        return es.eigenvalues().cwiseAbs();
    }
    Eigen::BDCSVD<Matrix> svd(m);
    return svd.singularValues();
}

}  // namespace

double min_eigenvalue(const LabeledOperator &op) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(op.hermitized().matrix(), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

bool is_psd(const LabeledOperator &op, double tol) {
    double err = op.hermiticity_error();
    if (err > tol) {
        throw std::invalid_argument("is_psd: operator is not Hermitian (deviation " + std::to_string(err) + ")");
    }
    return min_eigenvalue(op) >= -tol;
}

double operator_norm(const Matrix &m) {
    auto sv = singular_values(m);
    return sv.size() ? sv.maxCoeff() : 0.0;
}

double operator_norm(const LabeledOperator &op) { return operator_norm(op.matrix()); }

double trace_norm(const Matrix &m) { return singular_values(m).sum(); }

}  // namespace icotk
