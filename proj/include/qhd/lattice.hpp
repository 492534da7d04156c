#pragma once

#include <qhd/curve_config.hpp>
#include <qhd/exact.hpp>

#include <optional>
#include <string>
#include <vector>

namespace qhd {

/// Symmetric intersection matrix of a configuration; row i belongs to ordering[i].
struct IntersectionLattice {
    std::vector<CurveId> ordering;
    Matrix<Integer> matrix;

    auto size() const -> std::size_t { return ordering.size(); }
    /// Throws std::out_of_range for ids outside the lattice.
    auto index_of(CurveId id) const -> std::size_t;
};

auto intersection_matrix(const CurveConfig & config) -> IntersectionLattice;

/// Bareiss fraction-free elimination.
auto det_direct(const Matrix<Integer> & m) -> Integer;

/// Exact inverse of a nonsingular integer matrix, computed once and reused for many right-hand sides.
class LatticeSolver {
public:
    /// Throws SingularLatticeError.
    explicit LatticeSolver(const Matrix<Integer> & m);

    auto solve(const RationalVector & rhs) const -> RationalVector;
    auto solve(const IntVector & rhs) const -> RationalVector;
    auto inverse() const -> const Matrix<Rational> & { return inverse_; }
    auto form() const -> const Matrix<Integer> & { return form_; }
    /// x^T M y.
    auto pair(const RationalVector & x, const RationalVector & y) const -> Rational;

private:
    Matrix<Integer> form_;
    Matrix<Rational> inverse_;
};

/// Coefficients k with K = sum k_i E_i, from K.E_i + E_i^2 = -2.
auto canonical_coefficients(const IntersectionLattice & lattice) -> RationalVector;

struct ClassSolution {
    RationalVector c;
    Rational self_pairing;
};

/// Rational class with prescribed intersections M c = v.
auto solve_class(const IntersectionLattice & lattice, const IntVector & v) -> ClassSolution;

auto is_negative_definite(const Matrix<Integer> & m) -> bool;

/// One arm of a star: curves read outward from the centre, b_i = -E_i^2, and n/q = [b_1, ..., b_s].
struct StarArm {
    std::vector<CurveId> curves;
    std::vector<long long> bs;
    Integer n;
    Integer q;
};

struct StarShape {
    CurveId centre;
    long long d = 0; ///< centre self-intersection is -d
    std::vector<StarArm> arms;
};

/// Centre is the unique curve of valency >= 3; every arm must be a simple chain of transversal
/// intersections. Throws NotStarShapedError otherwise.
auto star_shape(const CurveConfig & config) -> StarShape;

/// |n_1 ... n_t (d - sum q_i/n_i)|.
auto det_via_formula(const StarShape & star) -> Integer;

struct StarInvariants {
    Rational e;
    Rational chi;
    Rational beta;
};

/// e = d - sum q_i/n_i, chi = t - 2 - sum 1/n_i, beta = chi/e. Throws DomainError when e = 0.
auto star_invariants(const StarShape & star) -> StarInvariants;

/// Dual cycles of a chain: M e_i = -delta_i. Throws SingularLatticeError.
auto chain_dual_cycles(const std::vector<long long> & self_ints) -> std::vector<RationalVector>;

/// -(K+E) = sum_k Y_k + beta E_0 with Y = beta e_1 - e_s on each arm.
struct AnticanonicalDecomposition {
    std::vector<RationalVector> ys; ///< one per arm, indexed like the lattice
    Rational beta;
    RationalVector lhs;             ///< -(k_i + 1)
    RationalVector rhs;
    bool holds = false;
};

auto anticanonical_decomposition(const CurveConfig & config) -> AnticanonicalDecomposition;

struct BoundsReport {
    StarInvariants inv;
    RationalVector k;
    std::vector<CurveId> ordering;
    bool log_canonical = false; ///< beta = 0
    std::vector<std::string> violations;

    auto ok() const -> bool { return violations.empty(); }
};

/// chi >= 0, e < 0, -1 < beta <= 0, -1 <= k_i < 0 with -1 only at the centre of a
/// log-canonical graph. With `params`, beta = 0 must also coincide with (p,q,r) = (0,0,0).
auto verify_bounds(const CurveConfig & config, std::optional<FamilyParams> params = std::nullopt) -> BoundsReport;

} // namespace qhd
