#pragma once

#include <qhd/birational.hpp>
#include <qhd/exact.hpp>
#include <qhd/lattice.hpp>

#include <cstdint>
#include <set>
#include <vector>

namespace qhd {

struct SmithForm {
    Matrix<Integer> u;
    Matrix<Integer> d;
    Matrix<Integer> v;
};

/// U A V = D, D diagonal with d_1 | d_2 | ... and non-negative entries, U and V unimodular.
auto smith_normal_form(const Matrix<Integer> & a) -> SmithForm;

/// Group elements are coordinate tuples reduced mod the invariant factors.
using Element = std::vector<long long>;

struct FiniteAbelianGroup {
    std::vector<long long> factors; ///< invariant factors, each > 1, dividing the next

    auto rank() const -> std::size_t { return factors.size(); }
    auto order() const -> Integer;
    auto reduce(Element x) const -> Element;
    auto add(const Element & a, const Element & b) const -> Element;
    auto zero() const -> Element { return Element(factors.size(), 0); }
    /// Every element in lexicographic order; throws LimitExceededError past `limit`.
    auto elements(std::size_t limit) const -> std::vector<Element>;

    friend auto operator==(const FiniteAbelianGroup &, const FiniteAbelianGroup &) -> bool = default;
};

/// A subgroup stored by the Hermite normal form of its preimage in Z^k; the form is unique, so
/// two subgroups are equal iff their `hnf` rows are equal.
struct Subgroup {
    std::vector<Element> generators;
    Integer order;
    std::vector<std::vector<long long>> hnf;
    std::vector<long long> ambient; ///< invariant factors of the containing group

    friend auto operator==(const Subgroup & a, const Subgroup & b) -> bool { return a.hnf == b.hnf; }
    friend auto operator<(const Subgroup & a, const Subgroup & b) -> bool { return a.hnf < b.hnf; }
};

/// Canonical subgroup generated by `gens`.
auto make_subgroup(const FiniteAbelianGroup & g, const std::vector<Element> & gens) -> Subgroup;

/// All elements of a subgroup, sorted. Brute force; used to cross-check `hnf` equality.
auto subgroup_elements(const FiniteAbelianGroup & g, const Subgroup & h, std::size_t limit) -> std::set<Element>;

/// Default 10^6, overridden by QHD_SUBGROUP_LIMIT.
auto subgroup_limit() -> std::size_t;

struct DiscriminantForm {
    FiniteAbelianGroup group;
    /// b(g_i, g_j) in [0, 1).
    Matrix<Rational> gram;
    /// Representative in L (x) Q of each generator, in curve coordinates.
    std::vector<RationalVector> lifts;
    /// Rows of U that map an integer vector w (the dual element M^-1 w) to group coordinates.
    Matrix<Integer> to_group_rows;
    Matrix<Integer> form;
    /// Largest invariant factor and the gram matrix scaled by it (row-major, reduced mod it).
    long long exponent = 1;
    std::vector<long long> scaled_gram;

    /// Pairing numerator over `exponent`, in [0, exponent).
    auto pairing_scaled(const Element & a, const Element & b) const -> long long;
    /// Pairing of two group elements, in [0, 1).
    auto pairing(const Element & a, const Element & b) const -> Rational;
    /// Group coordinates of the dual element with intersection numbers w.
    auto from_intersections(const IntVector & w) const -> Element;
};

/// Throws SingularLatticeError.
auto discriminant_form(const IntersectionLattice & lattice) -> DiscriminantForm;
auto discriminant_form(const Matrix<Integer> & form) -> DiscriminantForm;

enum class Execution { Serial, Parallel };

/// Subgroups of the given order. Throws std::invalid_argument if order does not divide |G| and
/// LimitExceededError past the enumeration limit.
auto enumerate_subgroups(const FiniteAbelianGroup & g, const Integer & order, std::size_t limit = subgroup_limit(),
                         Execution exec = Execution::Serial) -> std::vector<Subgroup>;

/// Subgroups H with |H|^2 = |G| that pair to zero with themselves; H = H^perp is re-checked by
/// enumerating the orthogonal complement. Empty when |G| is not a square.
auto self_isotropic_subgroups(const DiscriminantForm & form, std::size_t limit = subgroup_limit(),
                              Execution exec = Execution::Serial) -> std::vector<Subgroup>;

auto is_isotropic(const DiscriminantForm & form, const Subgroup & h) -> bool;

/// Size of {x in G : b(x, h) = 0 for all h in H}, by enumeration.
auto orthogonal_complement_order(const DiscriminantForm & form, const Subgroup & h, std::size_t limit = subgroup_limit()) -> std::size_t;

/// Image of Pic (basis l, e_j) in the discriminant group of Gamma, from a blow-down record whose
/// initial configuration contains Gamma's curves with the same ids. Throws DomainError if the
/// record carries no Pic data and InconsistencyError if the image is not self-isotropic.
auto model_subgroup(const DiscriminantForm & form, const IntersectionLattice & gamma, const BlowDownRecord & record) -> Subgroup;

/// Throws std::invalid_argument when the groups differ.
auto is_basic(const FiniteAbelianGroup & g, const Subgroup & h, const std::vector<Subgroup> & basics) -> bool;

} // namespace qhd
