#include <qhd/errors.hpp>
#include <qhd/lattice.hpp>

#include <algorithm>
#include <set>
#include <stdexcept>

namespace qhd {

auto IntersectionLattice::index_of(CurveId id) const -> std::size_t
{
    auto it = std::lower_bound(ordering.begin(), ordering.end(), id);
    if (it == ordering.end() || *it != id)
        throw std::out_of_range("curve " + std::to_string(id.value) + " is not in the lattice");
    return static_cast<std::size_t>(it - ordering.begin());
}

auto intersection_matrix(const CurveConfig & config) -> IntersectionLattice
{
    IntersectionLattice lat;
    lat.ordering = config.curve_ids();
    const auto n = lat.ordering.size();
    lat.matrix = Matrix<Integer>(n, n, Integer(0));
    for (std::size_t i = 0; i < n; ++i)
        lat.matrix(i, i) = config.curve(lat.ordering[i]).self_int;
    for (const auto & [pid, pt] : config.points())
        for (std::size_t a = 0; a < pt.incident.size(); ++a)
            for (std::size_t b = a + 1; b < pt.incident.size(); ++b) {
                auto i = lat.index_of(pt.incident[a]);
                auto j = lat.index_of(pt.incident[b]);
                int m = pt.multiplicity(pt.incident[a], pt.incident[b]);
                lat.matrix(i, j) += m;
                lat.matrix(j, i) += m;
            }
    return lat;
}

auto det_direct(const Matrix<Integer> & m) -> Integer
{
    if (m.rows() != m.cols())
        throw std::invalid_argument("determinant of a non-square matrix");
    const auto n = m.rows();
    if (n == 0)
        return 1;
    Matrix<Integer> a = m;
    Integer sign = 1;
    Integer prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t piv = k + 1;
            while (piv < n && a(piv, k) == 0)
                ++piv;
            if (piv == n)
                return 0;
            a.swap_rows(k, piv);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
            a(i, k) = 0;
        }
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

LatticeSolver::LatticeSolver(const Matrix<Integer> & m) : form_(m)
{
    if (m.rows() != m.cols())
        throw std::invalid_argument("solver needs a square matrix");
    const auto n = m.rows();
    Matrix<Rational> a = convert<Rational>(m);
    inverse_ = Matrix<Rational>::identity(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && a(piv, c) == 0)
            ++piv;
        if (piv == n)
            throw SingularLatticeError();
        a.swap_rows(c, piv);
        inverse_.swap_rows(c, piv);
        Rational inv = 1 / a(c, c);
        for (std::size_t j = 0; j < n; ++j) {
            a(c, j) *= inv;
            inverse_(c, j) *= inv;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a(r, c) == 0)
                continue;
            Rational f = a(r, c);
            for (std::size_t j = 0; j < n; ++j) {
                a(r, j) -= f * a(c, j);
                inverse_(r, j) -= f * inverse_(c, j);
            }
        }
    }
}

auto LatticeSolver::solve(const RationalVector & rhs) const -> RationalVector
{
    const auto n = inverse_.rows();
    if (rhs.size() != n)
        throw std::invalid_argument("right-hand side has the wrong length");
    RationalVector x(n, Rational(0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (rhs[j] != 0)
                x[i] += inverse_(i, j) * rhs[j];
    return x;
}

auto LatticeSolver::solve(const IntVector & rhs) const -> RationalVector
{
    RationalVector r(rhs.size());
    for (std::size_t i = 0; i < rhs.size(); ++i)
        r[i] = Rational(Integer(static_cast<long>(rhs[i])));
    return solve(r);
}

auto LatticeSolver::pair(const RationalVector & x, const RationalVector & y) const -> Rational
{
    Rational s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0)
            continue;
        Rational row = 0;
        for (std::size_t j = 0; j < y.size(); ++j)
            if (form_(i, j) != 0)
                row += Rational(form_(i, j)) * y[j];
        s += x[i] * row;
    }
    return s;
}

auto canonical_coefficients(const IntersectionLattice & lattice) -> RationalVector
{
    LatticeSolver solver(lattice.matrix);
    RationalVector rhs(lattice.size());
    for (std::size_t i = 0; i < lattice.size(); ++i)
        rhs[i] = Rational(-2 - lattice.matrix(i, i));
    return solver.solve(rhs);
}

auto solve_class(const IntersectionLattice & lattice, const IntVector & v) -> ClassSolution
{
    LatticeSolver solver(lattice.matrix);
    auto c = solver.solve(v);
    auto self = solver.pair(c, c);
    return {std::move(c), std::move(self)};
}

auto is_negative_definite(const Matrix<Integer> & m) -> bool
{
    // Bareiss without pivoting: the k-th pivot is the k-th leading principal minor.
    const auto n = m.rows();
    Matrix<Integer> a = m;
    Integer prev = 1;
    for (std::size_t k = 0; k < n; ++k) {
        const Integer & minor = a(k, k);
        bool expect_negative = (k % 2 == 0);
        if (minor == 0 || (minor < 0) != expect_negative)
            return false;
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
        prev = a(k, k);
    }
    return true;
}

auto star_shape(const CurveConfig & config) -> StarShape
{
    for (const auto & [pid, pt] : config.points()) {
        if (pt.incident.size() != 2 || pt.multiplicity(pt.incident[0], pt.incident[1]) != 1)
            throw NotStarShapedError("graph has a non-transversal or multiple point");
    }
    std::optional<CurveId> centre;
    for (const auto & [id, c] : config.curves()) {
        if (config.points_on(id).size() >= 3) {
            if (centre)
                throw NotStarShapedError("more than one curve of valency >= 3");
            centre = id;
        }
        if (!c.singularities.empty())
            throw NotStarShapedError("graph contains singular curves");
    }
    if (!centre)
        throw NotStarShapedError("no curve of valency >= 3");

    StarShape star;
    star.centre = *centre;
    star.d = -config.curve(*centre).self_int;
    std::set<CurveId> visited{*centre};
    auto first_of_arms = config.neighbours(*centre);
    if (first_of_arms.size() != config.points_on(*centre).size())
        throw NotStarShapedError("centre meets a curve more than once");
    for (auto start : first_of_arms) {
        StarArm arm;
        auto prev = *centre;
        auto cur = start;
        while (true) {
            if (!visited.insert(cur).second)
                throw NotStarShapedError("graph contains a cycle");
            arm.curves.push_back(cur);
            arm.bs.push_back(-config.curve(cur).self_int);
            auto nb = config.neighbours(cur);
            if (nb.size() != config.points_on(cur).size())
                throw NotStarShapedError("a curve meets another more than once");
            std::erase(nb, prev);
            if (nb.empty())
                break;
            if (nb.size() > 1)
                throw NotStarShapedError("arm branches");
            prev = cur;
            cur = nb.front();
        }
        for (auto b : arm.bs)
            if (b < 2)
                throw NotStarShapedError("arm curve with self-intersection above -2");
        std::tie(arm.n, arm.q) = cf_evaluate(arm.bs);
        star.arms.push_back(std::move(arm));
    }
    if (visited.size() != config.curve_count())
        throw NotStarShapedError("graph is not connected");
    return star;
}

auto det_via_formula(const StarShape & star) -> Integer
{
    auto inv = star_invariants(star);
    Rational prod = 1;
    for (const auto & a : star.arms)
        prod *= Rational(a.n);
    Rational v = prod * inv.e;
    v.canonicalize();
    if (v.get_den() != 1)
        throw InconsistencyError("determinant formula produced a non-integer");
    return abs(v.get_num());
}

auto star_invariants(const StarShape & star) -> StarInvariants
{
    if (star.arms.size() < 3)
        throw NotStarShapedError("fewer than three arms");
    StarInvariants inv;
    inv.e = Rational(Integer(static_cast<long>(star.d)));
    inv.chi = Rational(Integer(static_cast<long>(star.arms.size())) - 2);
    for (const auto & a : star.arms) {
        inv.e -= Rational(a.q, a.n);
        inv.chi -= Rational(Integer(1), a.n);
    }
    inv.e.canonicalize();
    inv.chi.canonicalize();
    if (inv.e == 0)
        throw DomainError("e = 0: the graph is degenerate");
    inv.beta = inv.chi / inv.e;
    return inv;
}

namespace {

auto chain_matrix(const std::vector<long long> & self_ints) -> Matrix<Integer>
{
    const auto s = self_ints.size();
    Matrix<Integer> m(s, s, Integer(0));
    for (std::size_t i = 0; i < s; ++i) {
        m(i, i) = static_cast<long>(self_ints[i]);
        if (i + 1 < s)
            m(i, i + 1) = m(i + 1, i) = 1;
    }
    return m;
}

} // namespace

auto chain_dual_cycles(const std::vector<long long> & self_ints) -> std::vector<RationalVector>
{
    if (self_ints.empty())
        throw std::invalid_argument("empty chain");
    LatticeSolver solver(chain_matrix(self_ints));
    std::vector<RationalVector> out;
    for (std::size_t i = 0; i < self_ints.size(); ++i) {
        IntVector rhs(self_ints.size(), 0);
        rhs[i] = -1;
        out.push_back(solver.solve(rhs));
    }
    return out;
}

auto anticanonical_decomposition(const CurveConfig & config) -> AnticanonicalDecomposition
{
    auto star = star_shape(config);
    auto inv = star_invariants(star);
    auto lat = intersection_matrix(config);
    auto k = canonical_coefficients(lat);
    const auto n = lat.size();

    AnticanonicalDecomposition out;
    out.beta = inv.beta;
    out.lhs.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.lhs[i] = -k[i] - 1;
    out.rhs.assign(n, Rational(0));
    out.rhs[lat.index_of(star.centre)] = inv.beta;
    for (const auto & arm : star.arms) {
        std::vector<long long> selfs;
        for (auto b : arm.bs)
            selfs.push_back(-b);
        auto duals = chain_dual_cycles(selfs);
        const auto & e1 = duals.front();
        const auto & es = duals.back();
        RationalVector y(n, Rational(0));
        for (std::size_t t = 0; t < arm.curves.size(); ++t) {
            y[lat.index_of(arm.curves[t])] = inv.beta * e1[t] - es[t];
        }
        for (std::size_t i = 0; i < n; ++i)
            out.rhs[i] += y[i];
        out.ys.push_back(std::move(y));
    }
    out.holds = out.lhs == out.rhs;
    return out;
}

auto verify_bounds(const CurveConfig & config, std::optional<FamilyParams> params) -> BoundsReport
{
    auto star = star_shape(config);
    BoundsReport rep;
    rep.inv = star_invariants(star);
    auto lat = intersection_matrix(config);
    rep.ordering = lat.ordering;
    rep.k = canonical_coefficients(lat);
    rep.log_canonical = rep.inv.beta == 0;
    auto & v = rep.violations;

    if (rep.inv.chi < 0)
        v.push_back("chi < 0");
    if (rep.inv.e >= 0)
        v.push_back("e >= 0");
    if (rep.inv.beta <= -1 || rep.inv.beta > 0)
        v.push_back("beta outside (-1, 0]");
    if ((rep.inv.chi == 0) != rep.log_canonical)
        v.push_back("chi = 0 and beta = 0 disagree");
    if (params) {
        bool zero = params->p == 0 && params->q == 0 && params->r == 0;
        if (zero != rep.log_canonical)
            v.push_back(zero ? "beta != 0 at (0,0,0)" : "beta = 0 away from (0,0,0)");
    }
    for (std::size_t i = 0; i < rep.k.size(); ++i) {
        const auto & ki = rep.k[i];
        auto who = config.label_of(rep.ordering[i]);
        if (ki < -1 || ki >= 0)
            v.push_back("k outside [-1, 0) at " + who);
        if (ki == -1 && !(rep.log_canonical && rep.ordering[i] == star.centre))
            v.push_back("k = -1 at " + who);
        if (rep.ordering[i] == star.centre && rep.log_canonical && ki != -1)
            v.push_back("log-canonical centre has k != -1");
    }
    return rep;
}

} // namespace qhd
