#include <qhd/discriminant.hpp>
#include <qhd/errors.hpp>

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <numeric>
#include <stdexcept>

namespace qhd {

auto smith_normal_form(const Matrix<Integer> & a) -> SmithForm
{
    const auto m = a.rows(), n = a.cols();
    SmithForm s{Matrix<Integer>::identity(m), a, Matrix<Integer>::identity(n)};
    auto & d = s.d;
    auto row_add = [&](std::size_t dst, std::size_t src, const Integer & f) {
        // row_dst -= f row_src, applied to D and U
        for (std::size_t j = 0; j < n; ++j)
            d(dst, j) -= f * d(src, j);
        for (std::size_t j = 0; j < m; ++j)
            s.u(dst, j) -= f * s.u(src, j);
    };
    auto col_add = [&](std::size_t dst, std::size_t src, const Integer & f) {
        for (std::size_t i = 0; i < m; ++i)
            d(i, dst) -= f * d(i, src);
        for (std::size_t i = 0; i < n; ++i)
            s.v(i, dst) -= f * s.v(i, src);
    };

    for (std::size_t t = 0; t < std::min(m, n); ++t) {
        while (true) {
            // smallest non-zero entry of the remaining block becomes the pivot
            std::size_t pi = m, pj = n;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < n; ++j)
                    if (d(i, j) != 0 && (pi == m || abs(d(i, j)) < abs(d(pi, pj)))) {
                        pi = i;
                        pj = j;
                    }
            if (pi == m)
                return s;
            d.swap_rows(t, pi);
            s.u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            s.v.swap_cols(t, pj);

            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (d(i, t) == 0)
                    continue;
                Integer q = d(i, t) / d(t, t);
                row_add(i, t, q);
                clean = clean && d(i, t) == 0;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (d(t, j) == 0)
                    continue;
                Integer q = d(t, j) / d(t, t);
                col_add(j, t, q);
                clean = clean && d(t, j) == 0;
            }
            if (!clean)
                continue;
            // divisibility: fold a row with a bad entry into the pivot row and go again
            std::size_t bad = m;
            for (std::size_t i = t + 1; i < m && bad == m; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (d(i, j) % d(t, t) != 0) {
                        bad = i;
                        break;
                    }
            if (bad == m)
                break;
            row_add(t, bad, Integer(-1));
        }
        if (d(t, t) < 0) {
            for (std::size_t j = 0; j < n; ++j)
                d(t, j) = -d(t, j);
            for (std::size_t j = 0; j < m; ++j)
                s.u(t, j) = -s.u(t, j);
        }
    }
    return s;
}

auto FiniteAbelianGroup::order() const -> Integer
{
    Integer o = 1;
    for (auto f : factors)
        o *= static_cast<long>(f);
    return o;
}

auto FiniteAbelianGroup::reduce(Element x) const -> Element
{
    if (x.size() != factors.size())
        throw std::invalid_argument("element has the wrong rank");
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] %= factors[i];
        if (x[i] < 0)
            x[i] += factors[i];
    }
    return x;
}

auto FiniteAbelianGroup::add(const Element & a, const Element & b) const -> Element
{
    Element c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        c[i] = (a[i] + b[i]) % factors[i];
    return c;
}

auto FiniteAbelianGroup::elements(std::size_t limit) const -> std::vector<Element>
{
    if (order() > Integer(static_cast<unsigned long>(limit)))
        throw LimitExceededError("group of order " + order().get_str() + " exceeds the enumeration limit " + std::to_string(limit));
    std::vector<Element> out;
    Element x = zero();
    while (true) {
        out.push_back(x);
        std::size_t i = x.size();
        while (i > 0) {
            --i;
            if (++x[i] < factors[i])
                break;
            x[i] = 0;
            if (i == 0)
                return out;
        }
        if (x.empty())
            return out;
    }
}

auto subgroup_limit() -> std::size_t
{
    if (const char * env = std::getenv("QHD_SUBGROUP_LIMIT")) {
        char * end = nullptr;
        auto v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            return static_cast<std::size_t>(v);
    }
    return 1'000'000;
}

namespace {

/// Row-style HNF of the lattice spanned by `rows` together with d_i e_i.
auto hermite(const FiniteAbelianGroup & g, const std::vector<Element> & gens) -> std::vector<std::vector<long long>>
{
    const auto k = g.rank();
    std::vector<std::vector<Integer>> rows;
    for (const auto & x : gens) {
        std::vector<Integer> r;
        for (auto v : g.reduce(x))
            r.emplace_back(static_cast<long>(v));
        rows.push_back(std::move(r));
    }
    for (std::size_t i = 0; i < k; ++i) {
        std::vector<Integer> r(k, Integer(0));
        r[i] = static_cast<long>(g.factors[i]);
        rows.push_back(std::move(r));
    }
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t piv = c;
        while (piv < rows.size() && rows[piv][c] == 0)
            ++piv;
        if (piv == rows.size())
            throw InconsistencyError("lattice containing the relations lost full rank");
        std::swap(rows[c], rows[piv]);
        for (std::size_t r = c + 1; r < rows.size(); ++r) {
            if (rows[r][c] == 0)
                continue;
            Integer gcd, s, t;
            mpz_gcdext(gcd.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), rows[c][c].get_mpz_t(), rows[r][c].get_mpz_t());
            Integer a = rows[c][c] / gcd, b = rows[r][c] / gcd;
            for (std::size_t j = c; j < k; ++j) {
                Integer x = rows[c][j], y = rows[r][j];
                rows[c][j] = s * x + t * y;
                rows[r][j] = a * y - b * x;
            }
        }
        if (rows[c][c] < 0)
            for (std::size_t j = c; j < k; ++j)
                rows[c][j] = -rows[c][j];
    }
    for (std::size_t j = 1; j < k; ++j)
        for (std::size_t i = 0; i < j; ++i) {
            Integer q;
            mpz_fdiv_q(q.get_mpz_t(), rows[i][j].get_mpz_t(), rows[j][j].get_mpz_t());
            if (q != 0)
                for (std::size_t l = j; l < k; ++l)
                    rows[i][l] -= q * rows[j][l];
        }
    std::vector<std::vector<long long>> out(k, std::vector<long long>(k, 0));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            out[i][j] = to_long(rows[i][j]);
    return out;
}

auto from_hnf(const FiniteAbelianGroup & g, std::vector<std::vector<long long>> hnf) -> Subgroup
{
    Subgroup h;
    Integer index = 1;
    for (std::size_t i = 0; i < hnf.size(); ++i) {
        index *= static_cast<long>(hnf[i][i]);
        auto x = g.reduce(hnf[i]);
        if (x != g.zero())
            h.generators.push_back(std::move(x));
    }
    h.order = g.order() / index;
    h.hnf = std::move(hnf);
    h.ambient = g.factors;
    return h;
}

auto divisors(long long n) -> std::vector<long long>
{
    std::vector<long long> out;
    for (long long d = 1; d * d <= n; ++d)
        if (n % d == 0) {
            out.push_back(d);
            if (d * d != n)
                out.push_back(n / d);
        }
    std::sort(out.begin(), out.end());
    return out;
}

/// Is x in the row lattice of the upper-triangular basis b?
auto in_lattice(const std::vector<std::vector<long long>> & b, std::vector<long long> x) -> bool
{
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (x[i] % b[i][i] != 0)
            return false;
        long long c = x[i] / b[i][i];
        if (c != 0)
            for (std::size_t j = i; j < b.size(); ++j)
                x[j] -= c * b[i][j];
    }
    return true;
}

} // namespace

auto make_subgroup(const FiniteAbelianGroup & g, const std::vector<Element> & gens) -> Subgroup
{
    return from_hnf(g, hermite(g, gens));
}

auto subgroup_elements(const FiniteAbelianGroup & g, const Subgroup & h, std::size_t limit) -> std::set<Element>
{
    std::set<Element> seen{g.zero()};
    std::deque<Element> queue{g.zero()};
    while (!queue.empty()) {
        auto x = queue.front();
        queue.pop_front();
        for (const auto & gen : h.generators) {
            auto y = g.add(x, gen);
            if (seen.insert(y).second) {
                if (seen.size() > limit)
                    throw LimitExceededError("subgroup exceeds the enumeration limit");
                queue.push_back(std::move(y));
            }
        }
    }
    return seen;
}

auto DiscriminantForm::pairing_scaled(const Element & a, const Element & b) const -> long long
{
    const auto k = group.rank();
    __int128 s = 0;
    for (std::size_t i = 0; i < k; ++i) {
        if (a[i] == 0)
            continue;
        __int128 row = 0;
        for (std::size_t j = 0; j < k; ++j)
            row += static_cast<__int128>(scaled_gram[i * k + j]) * b[j];
        s += (row % exponent) * a[i];
        s %= exponent;
    }
    auto r = static_cast<long long>(s % exponent);
    return r < 0 ? r + exponent : r;
}

auto DiscriminantForm::pairing(const Element & a, const Element & b) const -> Rational
{
    Rational q(Integer(static_cast<long>(pairing_scaled(a, b))), Integer(static_cast<long>(exponent)));
    q.canonicalize();
    return q;
}

auto DiscriminantForm::from_intersections(const IntVector & w) const -> Element
{
    if (w.size() != to_group_rows.cols())
        throw std::invalid_argument("intersection vector has the wrong length");
    Element x(group.rank());
    for (std::size_t i = 0; i < group.rank(); ++i) {
        Integer s = 0;
        for (std::size_t j = 0; j < w.size(); ++j)
            if (w[j] != 0)
                s += to_group_rows(i, j) * static_cast<long>(w[j]);
        s %= static_cast<long>(group.factors[i]);
        if (s < 0)
            s += static_cast<long>(group.factors[i]);
        x[i] = to_long(s);
    }
    return x;
}

auto discriminant_form(const IntersectionLattice & lattice) -> DiscriminantForm { return discriminant_form(lattice.matrix); }

auto discriminant_form(const Matrix<Integer> & form) -> DiscriminantForm
{
    const auto n = form.rows();
    LatticeSolver solver(form);
    auto snf = smith_normal_form(form);

    DiscriminantForm out;
    out.form = form;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i)
        if (snf.d(i, i) != 1) {
            keep.push_back(i);
            out.group.factors.push_back(to_long(snf.d(i, i)));
        }
    out.to_group_rows = Matrix<Integer>(keep.size(), n);
    for (std::size_t r = 0; r < keep.size(); ++r)
        for (std::size_t j = 0; j < n; ++j)
            out.to_group_rows(r, j) = snf.u(keep[r], j);

    // generator i is the dual element with intersections U^-1 e_i
    LatticeSolver u_solver(snf.u);
    std::vector<RationalVector> w;
    for (auto i : keep) {
        IntVector e(n, 0);
        e[i] = 1;
        auto col = u_solver.solve(e);
        w.push_back(col);
        out.lifts.push_back(solver.solve(col));
    }
    const auto k = keep.size();
    out.exponent = k == 0 ? 1 : out.group.factors.back();
    out.gram = Matrix<Rational>(k, k);
    out.scaled_gram.assign(k * k, 0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            Rational v = mod_one(dot(w[i], out.lifts[j]));
            out.gram(i, j) = v;
            Rational scaled = v * Rational(Integer(static_cast<long>(out.exponent)));
            scaled.canonicalize();
            if (scaled.get_den() != 1)
                throw InconsistencyError("pairing denominator does not divide the exponent");
            out.scaled_gram[i * k + j] = to_long(scaled.get_num());
        }
    return out;
}

auto enumerate_subgroups(const FiniteAbelianGroup & g, const Integer & order, std::size_t limit, Execution exec) -> std::vector<Subgroup>
{
    const Integer total = g.order();
    if (order <= 0 || total % order != 0)
        throw std::invalid_argument("subgroup order " + order.get_str() + " does not divide " + total.get_str());
    if (total > Integer(static_cast<unsigned long>(limit)))
        throw LimitExceededError("group of order " + total.get_str() + " exceeds the enumeration limit " + std::to_string(limit));
    const auto k = g.rank();
    const long long index = to_long(total / order);

    // diagonals h with h_i | d_i and product = index
    std::vector<std::vector<long long>> diagonals;
    std::vector<long long> h(k);
    auto pick = [&](auto & self, std::size_t i, long long rest) -> void {
        if (i == k) {
            if (rest == 1)
                diagonals.push_back(h);
            return;
        }
        for (auto dv : divisors(g.factors[i]))
            if (rest % dv == 0) {
                h[i] = dv;
                self(self, i + 1, rest / dv);
            }
    };
    pick(pick, 0, index);

    std::vector<Subgroup> found;
    std::size_t budget = 0;
    for (const auto & diag : diagonals) {
        // off-diagonal entry (i, j), i < j, ranges over [0, h_j)
        std::vector<std::pair<std::size_t, std::size_t>> slots;
        long long count = 1;
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t i = 0; i < j; ++i) {
                slots.emplace_back(i, j);
                count *= diag[j];
                if (static_cast<std::size_t>(count) > limit)
                    throw LimitExceededError("subgroup enumeration exceeds the limit " + std::to_string(limit));
            }
        budget += static_cast<std::size_t>(count);
        if (budget > limit)
            throw LimitExceededError("subgroup enumeration exceeds the limit " + std::to_string(limit));

        auto candidate = [&](long long idx) -> std::optional<std::vector<std::vector<long long>>> {
            std::vector<std::vector<long long>> b(k, std::vector<long long>(k, 0));
            for (std::size_t i = 0; i < k; ++i)
                b[i][i] = diag[i];
            for (const auto & [i, j] : slots) {
                b[i][j] = idx % diag[j];
                idx /= diag[j];
            }
            for (std::size_t i = 0; i < k; ++i) {
                std::vector<long long> rel(k, 0);
                rel[i] = g.factors[i];
                if (!in_lattice(b, rel))
                    return std::nullopt;
            }
            return b;
        };

        if (exec == Execution::Parallel) {
            std::vector<std::vector<Subgroup>> local(static_cast<std::size_t>(omp_get_max_threads()));
#pragma omp parallel for schedule(static)
            for (long long idx = 0; idx < count; ++idx)
                if (auto b = candidate(idx))
                    local[static_cast<std::size_t>(omp_get_thread_num())].push_back(from_hnf(g, std::move(*b)));
            for (auto & l : local)
                for (auto & s : l)
                    found.push_back(std::move(s));
        } else {
            for (long long idx = 0; idx < count; ++idx)
                if (auto b = candidate(idx))
                    found.push_back(from_hnf(g, std::move(*b)));
        }
    }
    std::sort(found.begin(), found.end());
    return found;
}

auto is_isotropic(const DiscriminantForm & form, const Subgroup & h) -> bool
{
    for (std::size_t i = 0; i < h.generators.size(); ++i)
        for (std::size_t j = i; j < h.generators.size(); ++j)
            if (form.pairing_scaled(h.generators[i], h.generators[j]) != 0)
                return false;
    return true;
}

auto orthogonal_complement_order(const DiscriminantForm & form, const Subgroup & h, std::size_t limit) -> std::size_t
{
    std::size_t count = 0;
    for (const auto & x : form.group.elements(limit))
        if (std::all_of(h.generators.begin(), h.generators.end(), [&](const Element & y) { return form.pairing_scaled(x, y) == 0; }))
            ++count;
    return count;
}

auto self_isotropic_subgroups(const DiscriminantForm & form, std::size_t limit, Execution exec) -> std::vector<Subgroup>
{
    const Integer total = form.group.order();
    if (!is_perfect_square(total))
        return {};
    Integer root = sqrt(total);
    auto all = enumerate_subgroups(form.group, root, limit, exec);
    std::vector<char> keep(all.size(), 0);
    const auto n = static_cast<long long>(all.size());
    const std::size_t expected = static_cast<std::size_t>(to_long(root));
    std::string failure;
#pragma omp parallel for schedule(dynamic) if (exec == Execution::Parallel)
    for (long long i = 0; i < n; ++i) {
        const auto & h = all[static_cast<std::size_t>(i)];
        if (!is_isotropic(form, h))
            continue;
        if (orthogonal_complement_order(form, h, limit) != expected) {
#pragma omp critical
            failure = "isotropic subgroup of order sqrt|D| is not its own orthogonal complement";
            continue;
        }
        keep[static_cast<std::size_t>(i)] = 1;
    }
    if (!failure.empty())
        throw InconsistencyError(failure);
    std::vector<Subgroup> out;
    for (std::size_t i = 0; i < all.size(); ++i)
        if (keep[i])
            out.push_back(std::move(all[i]));
    return out;
}

auto model_subgroup(const DiscriminantForm & form, const IntersectionLattice & gamma, const BlowDownRecord & record) -> Subgroup
{
    if (record.pic_basis.empty())
        throw DomainError("blow-down record carries no Pic classes");
    const auto n = gamma.size();
    std::vector<const IntVector *> cls(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto it = record.pic_basis.find(gamma.ordering[i]);
        if (it == record.pic_basis.end())
            throw DomainError("record has no class for curve " + std::to_string(gamma.ordering[i].value));
        cls[i] = &it->second;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (Integer(static_cast<long>(pic_pairing(*cls[i], *cls[j]))) != gamma.matrix(i, j))
                throw InconsistencyError("Pic classes do not reproduce the intersection matrix");

    const auto dim = cls.front()->size();
    std::vector<Element> gens;
    for (std::size_t x = 0; x < dim; ++x) {
        IntVector w(n);
        for (std::size_t i = 0; i < n; ++i)
            w[i] = x == 0 ? (*cls[i])[0] : -(*cls[i])[x];
        gens.push_back(form.from_intersections(w));
    }
    auto h = make_subgroup(form.group, gens);
    if (h.order * h.order != form.group.order() || !is_isotropic(form, h))
        throw InconsistencyError("model subgroup is not self-isotropic");
    return h;
}

auto is_basic(const FiniteAbelianGroup & g, const Subgroup & h, const std::vector<Subgroup> & basics) -> bool
{
    auto fits = [&](const Subgroup & s) { return s.ambient == g.factors; };
    if (!fits(h))
        throw std::invalid_argument("subgroup does not live in the given group");
    for (const auto & b : basics) {
        if (!fits(b))
            throw std::invalid_argument("basic subgroup does not live in the given group");
        if (b == h)
            return true;
    }
    return false;
}

} // namespace qhd
