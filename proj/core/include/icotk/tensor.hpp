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

#ifndef ICOTK_TENSOR_HPP
#define ICOTK_TENSOR_HPP

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace icotk {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

inline constexpr double kDefaultTol = 1e-9;

/// Role of a tensor factor. The declaration order is the canonical rank A < X < P < F < M.
///
/// Within a multipartite channel (process direction) A_i is the system delivered to party i
/// and X_i the system party i returns; P and F are global past/future extensions and M is an
/// internal memory wire.
enum class Role : std::uint8_t { A = 0, X = 1, P = 2, F = 3, M = 4 };

char role_char(Role r);
Role role_from_char(char c);

struct SystemLabel {
    int party = 0;
    Role role = Role::A;
    int dim = 1;
    int tag = 0;  ///< disambiguator for several systems with equal (party, role)

    /// Identity of a system ignores its dimension.
    bool same_system(const SystemLabel &other) const {
        return party == other.party && role == other.role && tag == other.tag;
    }
    bool operator==(const SystemLabel &) const = default;
    std::string str() const;
};

/// Strict weak order by (party, role, tag). This is the canonical order of tensor factors.
bool canonical_less(const SystemLabel &a, const SystemLabel &b);

inline SystemLabel label_a(int party, int dim) { return {party, Role::A, dim, 0}; }
inline SystemLabel label_x(int party, int dim) { return {party, Role::X, dim, 0}; }

class TensorSpace {
   public:
    TensorSpace() = default;
    TensorSpace(std::vector<SystemLabel> labels);
    TensorSpace(std::initializer_list<SystemLabel> labels) : TensorSpace(std::vector<SystemLabel>(labels)) {}

    const std::vector<SystemLabel> &labels() const { return labels_; }
    std::size_t size() const { return labels_.size(); }
    bool empty() const { return labels_.empty(); }
    const SystemLabel &operator[](std::size_t i) const { return labels_[i]; }
    auto begin() const { return labels_.begin(); }
    auto end() const { return labels_.end(); }

    /// Product of all factor dimensions (1 for the empty space).
    std::int64_t dim() const;
    std::int64_t dim_of(std::span<const SystemLabel> subset) const;

    /// Position of the factor with the same identity, if present.
    std::optional<std::size_t> find(const SystemLabel &label) const;
    bool contains(const SystemLabel &label) const { return find(label).has_value(); }
    /// Looks up the stored label (with dimension) of a system; throws if absent.
    const SystemLabel &at(const SystemLabel &label) const;

    bool is_canonical() const;
    TensorSpace canonical() const;

    /// Factors not in `removed`. Every entry of `removed` must be present.
    TensorSpace without(std::span<const SystemLabel> removed) const;
    /// Factors whose role is in `roles`, in current order.
    TensorSpace with_roles(std::initializer_list<Role> roles) const;
    /// Labels with role A or X and party >= 1, grouped per party (sorted).
    std::vector<int> parties() const;

    /// Same set of systems (regardless of order) with the same dimensions.
    bool same_set(const TensorSpace &other) const;
    bool operator==(const TensorSpace &) const = default;

    std::string str() const;

   private:
    std::vector<SystemLabel> labels_;
};

TensorSpace concat(const TensorSpace &a, const TensorSpace &b);

/// Dense complex square matrix over a labelled tensor space.
///
/// The space is always stored in canonical order; constructing from a non-canonical
/// space permutes the matrix accordingly. All operations are value-semantic.
class LabeledOperator {
   public:
    LabeledOperator();
    LabeledOperator(TensorSpace space, Matrix matrix);

    static LabeledOperator identity(const TensorSpace &space);
    static LabeledOperator scalar(cplx value);
    static LabeledOperator zero(const TensorSpace &space);

    const TensorSpace &space() const { return space_; }
    const Matrix &matrix() const { return matrix_; }
    std::int64_t dim() const { return matrix_.rows(); }

    cplx trace() const { return matrix_.trace(); }
    /// Matrix in an arbitrary ordering of the same systems.
    Matrix matrix_in(const TensorSpace &order) const;

    LabeledOperator adjoint() const;
    LabeledOperator hermitized() const;
    /// Full transpose in the computational basis of every factor.
    LabeledOperator transposed() const;
    /// Transpose of the listed factors only.
    LabeledOperator partial_transpose(std::span<const SystemLabel> labels) const;

    double hermiticity_error() const;
    bool is_hermitian(double tol = kDefaultTol) const { return hermiticity_error() <= tol; }

    /// Renames party indices (old -> new); parties missing from the map keep their index.
    LabeledOperator relabel_parties(const std::map<int, int> &party_map) const;

    LabeledOperator &operator+=(const LabeledOperator &rhs);
    LabeledOperator &operator-=(const LabeledOperator &rhs);
    LabeledOperator &operator*=(cplx s);
    friend LabeledOperator operator+(LabeledOperator a, const LabeledOperator &b) { return a += b; }
    friend LabeledOperator operator-(LabeledOperator a, const LabeledOperator &b) { return a -= b; }
    friend LabeledOperator operator*(LabeledOperator a, cplx s) { return a *= s; }
    friend LabeledOperator operator*(cplx s, LabeledOperator a) { return a *= s; }

   private:
    TensorSpace space_;
    Matrix matrix_;
};

/// Permutation of a flat index when the factors of `from` are reordered into `to`.
/// Both spaces must hold the same set of systems.
std::vector<std::int64_t> factor_permutation(const TensorSpace &from, const TensorSpace &to);

LabeledOperator tensor(const LabeledOperator &a, const LabeledOperator &b);
LabeledOperator tensor_all(std::span<const LabeledOperator> ops);

LabeledOperator partial_trace(const LabeledOperator &op, std::span<const SystemLabel> labels);
inline LabeledOperator partial_trace(const LabeledOperator &op, std::initializer_list<SystemLabel> labels) {
    return partial_trace(op, std::span<const SystemLabel>(labels.begin(), labels.size()));
}

/// Tr_L[S] tensored with the normalized identity on L, returned on the original space.
LabeledOperator trace_and_replace(const LabeledOperator &op, std::span<const SystemLabel> labels);
inline LabeledOperator trace_and_replace(const LabeledOperator &op, std::initializer_list<SystemLabel> labels) {
    return trace_and_replace(op, std::span<const SystemLabel>(labels.begin(), labels.size()));
}

enum class PartyFactor : std::uint8_t {
    OneMinusX,  ///< (1 - [X_i])
    AX,         ///< [A_i X_i]
};

/// Signed combination of trace-and-replace reductions.
///
/// Each party factor contributes either (identity - replace X_i) or replace(A_i X_i).
/// `replace` lists bare systems that are replaced in every term; `one_minus` lists bare
/// systems contributing an extra (identity - replace) factor.
struct ReductionExpression {
    std::map<int, PartyFactor> factors;
    std::vector<SystemLabel> replace;
    std::vector<SystemLabel> one_minus;

    struct Term {
        int sign;
        std::vector<SystemLabel> labels;  ///< identities; dimensions resolved against the operator
    };
    /// 2^(#OneMinusX + #one_minus) signed terms.
    std::vector<Term> expand() const;
};

LabeledOperator signed_reduce(const LabeledOperator &op, const ReductionExpression &expr);

/// Link product: Choi matrix of the composition of the maps with Choi `a` and `b`,
/// joined along the `contract` systems. With Choi(T) = sum_ij |i><j| (x) T(|i><j|) this is
/// Tr_S[(a^{T_S} (x) 1)(1 (x) b)].
LabeledOperator link(const LabeledOperator &a, const LabeledOperator &b, std::span<const SystemLabel> contract);
/// Link over every system shared by `a` and `b`.
LabeledOperator link(const LabeledOperator &a, const LabeledOperator &b);

/// Least-squares inverse of `link` in its second argument: returns b on
/// contract (x) (target systems not in `a`) minimizing ||link(a, b) - target||_F.
/// `a` minus the contracted systems must be a subset of the target's systems.
LabeledOperator solve_link(const LabeledOperator &a, const LabeledOperator &target,
                           std::span<const SystemLabel> contract);

/// Eigenvalue-based positivity check. Throws std::invalid_argument when `op` is not
/// Hermitian within `tol`.
bool is_psd(const LabeledOperator &op, double tol = kDefaultTol);
double min_eigenvalue(const LabeledOperator &op);

/// Largest singular value.
double operator_norm(const LabeledOperator &op);
double operator_norm(const Matrix &m);
/// Sum of singular values.
double trace_norm(const Matrix &m);

/// Hilbert-Schmidt inner product <a, b> = Tr(a^dagger b); spaces must match.
cplx hs_inner(const LabeledOperator &a, const LabeledOperator &b);

}  // namespace icotk

#endif  // ICOTK_TENSOR_HPP
