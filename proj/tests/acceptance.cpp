// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "oracles.hpp"

#include <qhd/birational.hpp>
#include <qhd/discriminant.hpp>
#include <qhd/errors.hpp>
#include <qhd/lattice.hpp>
#include <qhd/search.hpp>

#include <chrono>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

using namespace qhd;

namespace {

constexpr Family families[] = {Family::W, Family::N, Family::M};

auto grid(int max) -> std::vector<FamilyParams>
{
    std::vector<FamilyParams> out;
    for (auto f : families)
        for (int p = 0; p <= max; ++p)
            for (int q = 0; q <= max; ++q)
                for (int r = 0; r <= max; ++r)
                    out.push_back({f, p, q, r});
    return out;
}

auto zero(const FamilyParams & fp) -> bool { return fp.p == 0 && fp.q == 0 && fp.r == 0; }

/// Collects failures for one criterion; prints the verdict line.
struct Criterion {
    int number;
    std::string title;
    std::vector<std::string> failures;
    std::vector<std::string> notes;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void check(bool ok, const std::string & what)
    {
        if (!ok)
            failures.push_back(what);
    }

    auto report() const -> bool
    {
        auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << "criterion " << number << ": " << (failures.empty() ? "PASS" : "FAIL") << "  " << title << "  (" << std::fixed
                  << std::setprecision(1) << secs << " s)\n";
        for (const auto & n : notes)
            std::cout << "    " << n << '\n';
        for (std::size_t i = 0; i < failures.size() && i < 10; ++i)
            std::cout << "    failure: " << failures[i] << '\n';
        if (failures.size() > 10)
            std::cout << "    ... " << failures.size() - 10 << " more\n";
        return failures.empty();
    }
};

auto label(const CurveConfig & g, const std::string & l) -> CurveId { return *g.find_label(l); }

auto placement(const CurveConfig & g, std::vector<std::vector<std::string>> sets) -> Placement
{
    Placement pl;
    for (const auto & s : sets) {
        std::vector<CurveId> ids;
        for (const auto & l : s)
            ids.push_back(label(g, l));
        std::sort(ids.begin(), ids.end());
        pl.candidates.push_back(candidate_for(g, ids));
    }
    return pl;
}

/// Intersection matrix of a sub-configuration, by total intersection numbers.
auto sub_matrix(const CurveConfig & cfg, const std::vector<CurveId> & ids) -> Matrix<Integer>
{
    Matrix<Integer> m(ids.size(), ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i)
        for (std::size_t j = 0; j < ids.size(); ++j)
            m(i, j) = static_cast<long>(total_intersection(cfg, ids[i], ids[j]));
    return m;
}

/// Leading principal minors by cofactor expansion: negative definite iff they alternate from negative.
auto negative_definite_by_minors(const Matrix<Integer> & m) -> bool
{
    for (std::size_t k = 1; k <= m.rows(); ++k) {
        Matrix<Integer> lead(k, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                lead(i, j) = m(i, j);
        auto d = oracle::laplace_det(lead);
        if (k % 2 == 1 ? d >= 0 : d <= 0)
            return false;
    }
    return true;
}

auto criterion1(const std::map<std::string, ClassificationResult> & results) -> bool
{
    Criterion c{1, "classification counts over {0..3}^3"};
    std::size_t matched = 0, raw_diff = 0;
    std::string raw_examples;
    for (const auto & [name, r] : results) {
        auto expected = expected_count(r.params);
        c.check(r.count == expected, name + ": " + std::to_string(r.count) + " surfaces, expected " + std::to_string(expected));
        matched += r.count == expected;
        if (r.placements.size() != expected) {
            ++raw_diff;
            if (raw_diff <= 3)
                raw_examples += " " + name;
        }
    }
    c.notes.push_back("distinct surfaces match the expected count at " + std::to_string(matched) + "/" + std::to_string(results.size()) + " graphs");
    c.notes.push_back("raw verified placements differ from it at " + std::to_string(raw_diff) + " graphs (e.g." + raw_examples +
                      "), each a pair of placements with one model subgroup");
    return c.report();
}

auto criterion2() -> bool
{
    Criterion c{2, "chi, e, beta and k_i bounds over {0..5}^3"};
    for (const auto & fp : grid(5)) {
        auto cfg = make_family(fp);
        auto name = to_string(fp);
        auto inv = star_invariants(star_shape(cfg));
        auto lat = intersection_matrix(cfg);
        auto k = canonical_coefficients(lat);
        auto centre = lat.index_of(label(cfg, "E0"));
        c.check(inv.chi >= 0, name + ": chi < 0");
        c.check((inv.chi == 0) == zero(fp), name + ": chi = 0 off the log-canonical case or vice versa");
        c.check(inv.e < 0, name + ": e >= 0");
        c.check(inv.beta > -1 && inv.beta <= 0, name + ": beta outside (-1, 0]");
        c.check((inv.beta == 0) == zero(fp), name + ": beta = 0 off the log-canonical case or vice versa");
        for (std::size_t i = 0; i < k.size(); ++i) {
            c.check(k[i] >= -1 && k[i] < 0, name + ": k outside [-1, 0) at " + cfg.label_of(lat.ordering[i]));
            c.check((k[i] == -1) == (zero(fp) && i == centre), name + ": k = -1 at the wrong curve");
        }
        c.check(verify_bounds(cfg, fp).ok(), name + ": library bound report disagrees");
    }
    return c.report();
}

auto criterion3() -> bool
{
    Criterion c{3, "determinant formula, elimination and squareness over {0..5}^3"};
    for (const auto & fp : grid(5)) {
        auto cfg = make_family(fp);
        auto det = det_direct(intersection_matrix(cfg).matrix);
        c.check(abs(det) == det_via_formula(star_shape(cfg)), to_string(fp) + ": formula and elimination differ");
        c.check(is_perfect_square(abs(det)), to_string(fp) + ": |det| is not a square");
    }
    const std::pair<Family, long> spots[] = {{Family::W, 81}, {Family::N, 64}, {Family::M, 36}};
    for (auto [f, want] : spots) {
        auto cfg = make_family({f, 0, 0, 0});
        Integer lap = abs(oracle::laplace_det(intersection_matrix(cfg).matrix));
        c.check(lap == want && det_via_formula(star_shape(cfg)) == want, family_name(f) + "(0,0,0): expected " + std::to_string(want));
    }
    c.notes.push_back("spot values 81, 64, 36 cross-checked by cofactor expansion");
    return c.report();
}

auto criterion4() -> bool
{
    Criterion c{4, "-(K+E) = sum Y_k + beta E0 exactly over {0..5}^3"};
    for (const auto & fp : grid(5)) {
        auto cfg = make_family(fp);
        auto lat = intersection_matrix(cfg);
        auto k = canonical_coefficients(lat);
        auto star = star_shape(cfg);
        auto beta = star_invariants(star).beta;
        // right side assembled here from the chain duals of each arm
        RationalVector rhs(lat.size(), Rational(0));
        rhs[lat.index_of(star.centre)] = beta;
        for (const auto & arm : star.arms) {
            std::vector<long long> selfs;
            for (auto b : arm.bs)
                selfs.push_back(-b);
            auto es = chain_dual_cycles(selfs);
            for (std::size_t i = 0; i < arm.curves.size(); ++i)
                rhs[lat.index_of(arm.curves[i])] += beta * es.front()[i] - es.back()[i];
        }
        RationalVector lhs(lat.size());
        for (std::size_t i = 0; i < lat.size(); ++i)
            lhs[i] = -k[i] - 1;
        c.check(lhs == rhs, to_string(fp) + ": identity fails");
        c.check(anticanonical_decomposition(cfg).holds, to_string(fp) + ": library identity check fails");
    }
    return c.report();
}

auto criterion5(const std::map<std::string, ClassificationResult> & results) -> bool
{
    Criterion c{5, "discriminant groups and model subgroups"};
    std::size_t largest = 0;
    for (const auto & fp : grid(5)) {
        auto lat = intersection_matrix(make_family(fp));
        auto form = discriminant_form(lat);
        c.check(form.group.order() == abs(det_direct(lat.matrix)), to_string(fp) + ": |D| != |det|");
        auto hs = self_isotropic_subgroups(form);
        c.check(!hs.empty(), to_string(fp) + ": no self-isotropic subgroup");
        largest = std::max<std::size_t>(largest, to_long(form.group.order()));
    }
    c.notes.push_back("|D| = |det| and self-isotropic subgroups exist on all " + std::to_string(grid(5).size()) +
                      " graphs of {0..5}^3 (largest |D| = " + std::to_string(largest) + ")");

    std::size_t checked = 0, pairs = 0;
    for (const auto & [name, r] : results) {
        auto form = discriminant_form(intersection_matrix(make_family(r.params)));
        auto hs = self_isotropic_subgroups(form);
        for (const auto & h : r.placement_subgroups) {
            c.check(std::find(hs.begin(), hs.end(), h) != hs.end(), name + ": model subgroup not among the self-isotropic ones");
            ++checked;
        }
        if (expected_count(r.params) == 2) {
            ++pairs;
            c.check(r.subgroups.size() == 2 && !(r.subgroups[0] == r.subgroups[1]), name + ": the two surfaces share a subgroup");
        }
    }
    c.notes.push_back(std::to_string(checked) + " model subgroups over {0..3}^3 found in the enumerated lists; " + std::to_string(pairs) +
                      " symmetric graphs carry two distinct subgroups");
    return c.report();
}

auto criterion6(const std::map<std::string, ClassificationResult> & results) -> bool
{
    Criterion c{6, "blow-up/blow-down calculus"};
    std::mt19937 rng(1);
    int done = 0;
    for (int trial = 0; done < 1000 && trial < 100000; ++trial) {
        auto cfg = oracle::random_config(rng);
        auto ids = cfg.curve_ids();
        auto f = ids[static_cast<std::size_t>(trial) % ids.size()];
        cfg.curve(f).self_int = -1;
        std::pair<CurveConfig, BlowDownStep> res;
        try {
            res = contract(cfg, f);
        } catch (const UnsupportedContractionError &) {
            continue;
        }
        ++done;
        auto back = blow_up(res.first, res.second.new_point.id);
        bool same = back.curves() == cfg.curves() && back.points().size() == cfg.points().size();
        for (auto a : cfg.curve_ids())
            for (auto b : cfg.curve_ids())
                same = same && total_intersection(back, a, b) == total_intersection(cfg, a, b);
        c.check(same, "random configuration " + std::to_string(trial) + " does not round-trip");
    }
    c.check(done == 1000, "only " + std::to_string(done) + " random round trips");

    std::size_t records = 0, steps = 0;
    for (const auto & [name, r] : results) {
        auto gamma_size = make_family(r.params).curve_count();
        for (const auto & pl : r.placements) {
            const auto & rec = *pl.verified;
            ++records;
            c.check(rec.steps.size() == gamma_size - 1, name + ": record has " + std::to_string(rec.steps.size()) + " steps");
            c.check(!first_nonsingular_blowup(rec), name + ": a reversed step blows up a non-singular point");
            auto cur = rec.initial;
            for (const auto & s : rec.steps) {
                auto next = contract(cur, s.contracted).first;
                for (auto a : next.curve_ids()) {
                    auto ma = total_intersection(cur, a, s.contracted);
                    c.check(next.curve(a).self_int - cur.curve(a).self_int == ma * ma, name + ": self-intersection update");
                    for (auto b : next.curve_ids())
                        if (a != b)
                            c.check(total_intersection(next, a, b) - total_intersection(cur, a, b) == ma * total_intersection(cur, b, s.contracted),
                                    name + ": intersection update");
                }
                cur = std::move(next);
                ++steps;
            }
            c.check(cur == rec.final, name + ": replayed contractions end elsewhere");
        }
    }
    c.notes.push_back("1000 random round trips; " + std::to_string(steps) + " contraction steps in " + std::to_string(records) + " accepted records");
    return c.report();
}

auto criterion7() -> bool
{
    Criterion c{7, "non-negative-definite configurations are rejected"};
    // (-2)-(-1)-(-2): a -1 joining the ends P2 and R2 of two chains on W(0,0,0)
    auto w = make_family({Family::W, 0, 0, 0});
    auto first = placement(w, {{"P1", "Q2"}, {"P2", "R2"}, {"Q1", "R1"}});
    // -2 chain of three with a -1 on the middle: P3 instead of P4 on W(0,0,2)
    auto w2 = make_family({Family::W, 0, 0, 2});
    auto second = placement(w2, {{"P1", "Q2"}, {"P3", "R1"}, {"Q1", "R2"}});

    struct Case {
        std::string name;
        const CurveConfig * gamma;
        Placement pl;
        std::vector<std::string> sub;
    };
    for (const auto & k : {Case{"W(0,0,0) with P2-X-R2", &w, first, {"P2", "X2", "R2"}}, Case{"W(0,0,2) with P3-X-R1", &w2, second, {"P2", "P3", "P4", "X2"}}}) {
        std::vector<CurveId> extras;
        auto z = materialize(*k.gamma, k.pl, &extras);
        std::vector<CurveId> ids;
        for (const auto & l : k.sub)
            ids.push_back(label(z, l));
        auto m = sub_matrix(z, ids);
        c.check(!is_negative_definite(m) && !negative_definite_by_minors(m), k.name + ": sub-configuration is negative definite");
        auto v = verify_placement(*k.gamma, k.pl);
        c.check(!v.verified, k.name + ": placement accepted");
        c.check(!v.rejection.empty(), k.name + ": no failure reason");
        c.notes.push_back(k.name + ": det of the sub-configuration " + oracle::laplace_det(m).get_str() + "; rejected: " + v.rejection);
    }
    return c.report();
}

auto criterion8() -> bool
{
    Criterion c{8, "nef filter leaves sweeps unchanged over {0..2}^3"};
    SearchOptions with;
    with.nef_filter = true;
    for (auto f : families) {
        auto a = sweep(f, 2, 2, 2);
        auto b = sweep(f, 2, 2, 2, with);
        c.check(a.size() == b.size(), family_name(f) + ": different sweep sizes");
        for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
            bool same = a[i].count == b[i].count && a[i].placements.size() == b[i].placements.size() &&
                        std::equal(a[i].subgroups.begin(), a[i].subgroups.end(), b[i].subgroups.begin(), b[i].subgroups.end());
            for (std::size_t j = 0; same && j < a[i].placements.size(); ++j)
                for (std::size_t k = 0; same && k < a[i].placements[j].candidates.size(); ++k)
                    same = a[i].placements[j].candidates[k].attachments == b[i].placements[j].candidates[k].attachments;
            c.check(same, to_string(a[i].params) + ": filtered and unfiltered results differ");
        }
    }
    return c.report();
}

} // namespace

int main()
{
    std::map<std::string, ClassificationResult> results;
    for (auto f : families)
        for (auto & r : sweep(f, 3, 3, 3))
            results.emplace(to_string(r.params), std::move(r));

    bool ok = true;
    ok &= criterion1(results);
    ok &= criterion2();
    ok &= criterion3();
    ok &= criterion4();
    ok &= criterion5(results);
    ok &= criterion6(results);
    ok &= criterion7();
    ok &= criterion8();
    std::cout << (ok ? "all criteria pass\n" : "some criteria fail\n");
    return ok ? 0 : 1;
}
