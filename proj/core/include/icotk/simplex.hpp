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

#ifndef ICOTK_SIMPLEX_HPP
#define ICOTK_SIMPLEX_HPP

#include <stdexcept>

#include <Eigen/Dense>

namespace icotk {

class LpFailure : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Outcome of the feasibility problem A x = b, x >= 0.
struct FeasibilityResult {
    bool feasible = false;
    Eigen::VectorXd x;
    /// Optimal value of the auxiliary problem min sum(artificials); zero iff feasible.
    double infeasibility = 0.0;
    /// Dual vector y of the auxiliary problem. When infeasible, A^T y <= 0 and b^T y = infeasibility > 0
    /// (a Farkas certificate, up to round-off).
    Eigen::VectorXd farkas;
    int iterations = 0;
};

/// Phase one of the dense tableau simplex method with Bland's anti-cycling rule.
/// Throws LpFailure when the iteration limit is hit.
FeasibilityResult solve_feasibility(const Eigen::MatrixXd &A, const Eigen::VectorXd &b, double tol = 1e-8,
                                    int max_iterations = 100000);

}  // namespace icotk

#endif  // ICOTK_SIMPLEX_HPP
