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

#include "icotk/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace icotk {

FeasibilityResult solve_feasibility(const Eigen::MatrixXd &A, const Eigen::VectorXd &b, double tol,
                                    int max_iterations) {
    const Eigen::Index m = A.rows();
    const Eigen::Index n = A.cols();
    if (b.size() != m) {
        throw std::invalid_argument("solve_feasibility: rhs has " + std::to_string(b.size()) + " entries, expected " +
                                    std::to_string(m));
    }
    // Tableau [A' | I | b'] with rows flipped so that b' >= 0; artificials start basic.
    Eigen::VectorXd sign = Eigen::VectorXd::Ones(m);
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, n + m + 1);
    for (Eigen::Index r = 0; r < m; ++r) {
        if (b(r) < 0) sign(r) = -1.0;
        T.row(r).head(n) = sign(r) * A.row(r);
        T(r, n + r) = 1.0;
        T(r, n + m) = sign(r) * b(r);
    }
    std::vector<Eigen::Index> basis(m);
    for (Eigen::Index r = 0; r < m; ++r) basis[r] = n + r;
    Eigen::VectorXd cost = Eigen::VectorXd::Zero(n + m);
    cost.tail(m).setOnes();

    FeasibilityResult res;
    Eigen::VectorXd reduced(n + m);
    for (;;) {
        // Reduced costs c_j - c_B^T B^{-1} A_j.
        reduced = cost;
        for (Eigen::Index r = 0; r < m; ++r) {
            if (cost(basis[r]) != 0.0) reduced -= cost(basis[r]) * T.row(r).head(n + m).transpose();
        }
        Eigen::Index enter = -1;
        for (Eigen::Index j = 0; j < n + m; ++j) {
            if (reduced(j) < -tol) {
                enter = j;
                break;
            }
        }
        if (enter < 0) break;
        if (++res.iterations > max_iterations) {
            throw LpFailure("simplex: iteration limit reached");
        }
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index r = 0; r < m; ++r) {
            if (T(r, enter) > tol) best = std::min(best, T(r, n + m) / T(r, enter));
        }
        // Bland: among the minimizing rows, the one whose basic variable has the smallest index.
        Eigen::Index leave = -1;
        for (Eigen::Index r = 0; r < m; ++r) {
            if (T(r, enter) > tol && T(r, n + m) / T(r, enter) <= best + tol &&
                (leave < 0 || basis[r] < basis[leave])) {
                leave = r;
            }
        }
        if (leave < 0) {
            // The auxiliary objective is bounded below by zero.
            throw LpFailure("simplex: unbounded auxiliary problem");
        }
        T.row(leave) /= T(leave, enter);
        for (Eigen::Index r = 0; r < m; ++r) {
            if (r != leave && T(r, enter) != 0.0) T.row(r) -= T(r, enter) * T.row(leave);
        }
        basis[leave] = enter;
    }

    res.x = Eigen::VectorXd::Zero(n);
    res.infeasibility = 0.0;
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
    for (Eigen::Index r = 0; r < m; ++r) {
        const double v = T(r, n + m);
        if (basis[r] < n) {
            res.x(basis[r]) = v;
        } else {
            res.infeasibility += v;
        }
        // B^{-1} sits in the artificial columns.
        y += cost(basis[r]) * T.row(r).segment(n, m).transpose();
    }
    res.farkas = sign.cwiseProduct(y);
    res.feasible = res.infeasibility <= tol;
    return res;
}

}  // namespace icotk
