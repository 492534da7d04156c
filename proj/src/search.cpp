#include <qhd/errors.hpp>
#include <qhd/search.hpp>

#include <algorithm>
#include <stdexcept>

namespace qhd {

namespace {

auto attachment_vector(const IntersectionLattice & lat, const std::vector<CurveId> & attachments) -> IntVector
{
    IntVector v(lat.size(), 0);
    for (auto id : attachments)
        v[lat.index_of(id)] = 1;
    return v;
}

/// c_a . c_b = sum of c_a over the attachments of b.
auto pairing_with(const IntersectionLattice & lat, const CandidateClass & a, const CandidateClass & b) -> Rational
{
    Rational s = 0;
    for (auto id : b.attachments)
        s += a.rational_class[lat.index_of(id)];
    return s;
}

} // namespace

auto candidate_for(const CurveConfig & gamma, std::vector<CurveId> attachments) -> CandidateClass
{
    std::sort(attachments.begin(), attachments.end());
    auto lat = intersection_matrix(gamma);
    auto sol = solve_class(lat, attachment_vector(lat, attachments));
    return {std::move(attachments), std::move(sol.c), std::move(sol.self_pairing)};
}

auto candidate_classes(const CurveConfig & gamma) -> std::vector<CandidateClass>
{
    auto lat = intersection_matrix(gamma);
    LatticeSolver solver(lat.matrix);
    RationalVector rhs(lat.size());
    for (std::size_t i = 0; i < lat.size(); ++i)
        rhs[i] = Rational(-2 - lat.matrix(i, i));
    auto k = solver.solve(rhs);
    const auto n = lat.size();
    const auto & inv = solver.inverse();

    std::vector<CandidateClass> out;
    auto consider = [&](const std::vector<std::size_t> & s) {
        Rational weight = 0;
        for (auto j : s)
            weight -= k[j];
        if (weight != 1)
            return;
        // c = M^-1 v is the sum of the inverse's columns over s, and c^T M c = sum_{j in s} c_j
        RationalVector c(n, Rational(0));
        for (std::size_t i = 0; i < n; ++i)
            for (auto j : s)
                c[i] += inv(i, j);
        Rational self = 0;
        for (auto j : s)
            self += c[j];
        if (self != -1)
            return;
        CandidateClass cc;
        for (auto j : s)
            cc.attachments.push_back(lat.ordering[j]);
        cc.rational_class = std::move(c);
        cc.self_pairing = self;
        out.push_back(std::move(cc));
    };
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            consider({a, b});
            for (std::size_t c = b + 1; c < n; ++c)
                consider({a, b, c});
        }
    std::sort(out.begin(), out.end(), [](const auto & x, const auto & y) { return x.attachments < y.attachments; });
    return out;
}

auto expected_extras(const CurveConfig & gamma) -> long long
{
    long long blowups = 9 - k_squared(gamma);
    return 4 + blowups - static_cast<long long>(gamma.curve_count());
}

auto enumerate_placements(const CurveConfig & gamma, const std::vector<CandidateClass> & candidates, std::size_t m, std::size_t limit)
    -> std::vector<Placement>
{
    auto lat = intersection_matrix(gamma);
    const auto c = candidates.size();
    std::vector<std::vector<char>> disjoint(c, std::vector<char>(c, 0));
    for (std::size_t a = 0; a < c; ++a)
        for (std::size_t b = 0; b < c; ++b)
            disjoint[a][b] = a != b && pairing_with(lat, candidates[a], candidates[b]) == 0;

    std::vector<Placement> out;
    std::vector<std::size_t> chosen;
    std::size_t visited = 0;
    auto extend = [&](auto & self, std::size_t from) -> void {
        if (++visited > limit)
            throw LimitExceededError("placement enumeration exceeds the limit " + std::to_string(limit));
        if (chosen.size() == m) {
            Placement pl;
            for (auto i : chosen)
                pl.candidates.push_back(candidates[i]);
            out.push_back(std::move(pl));
            return;
        }
        for (std::size_t i = from; i < c; ++i) {
            if (!std::all_of(chosen.begin(), chosen.end(), [&](std::size_t j) { return disjoint[j][i]; }))
                continue;
            chosen.push_back(i);
            self(self, i + 1);
            chosen.pop_back();
        }
    };
    extend(extend, 0);
    return out;
}

auto materialize(const CurveConfig & gamma, const Placement & placement, std::vector<CurveId> * extras) -> CurveConfig
{
    CurveConfig cfg = gamma;
    int k = 0;
    for (const auto & cand : placement.candidates) {
        auto x = cfg.add_curve(-1, "X" + std::to_string(++k));
        for (auto a : cand.attachments)
            cfg.connect(a, x);
        if (extras)
            extras->push_back(x);
    }
    return cfg;
}

auto verify_placement(const CurveConfig & gamma, Placement placement, ContractionPolicy policy) -> Placement
{
    std::vector<CurveId> extras;
    auto cfg = materialize(gamma, placement, &extras);
    auto res = full_blow_down(cfg, {extras.begin(), extras.end()}, policy);
    placement.verified.reset();
    if (!res.ok()) {
        placement.rejection = res.failure->reason;
    } else if (!is_four_lines_general_position(*res.model)) {
        placement.rejection = "blow-down ends at " + std::to_string(res.model->config.curve_count()) + " curves that are not four lines in general position";
    } else {
        placement.rejection.clear();
        placement.verified = std::move(res.model->record);
    }
    return placement;
}

auto nef_filter(const IntersectionLattice & lattice, const RationalVector & n, const CandidateClass & candidate) -> bool
{
    const auto & m = lattice.matrix;
    Rational s = 0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (candidate.rational_class[i] == 0)
            continue;
        Rational row = 0;
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0)
                row += Rational(m(i, j)) * n[j];
        s += row * candidate.rational_class[i];
    }
    return s >= 0;
}

auto default_nef_certificates(const CurveConfig & gamma) -> std::vector<RationalVector>
{
    auto star = star_shape(gamma);
    auto lat = intersection_matrix(gamma);
    const auto n = lat.size();
    const auto centre = lat.index_of(star.centre);
    std::vector<RationalVector> candidates;
    RationalVector e0(n, Rational(0));
    e0[centre] = 1;
    candidates.push_back(e0);
    for (const auto & arm : star.arms) {
        RationalVector v = e0;
        v[centre] = Rational(Integer(static_cast<long>(arm.bs.front())));
        v[lat.index_of(arm.curves.front())] = 1;
        candidates.push_back(std::move(v));
    }
    std::vector<RationalVector> out;
    for (auto & v : candidates) {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            Rational s = 0;
            for (std::size_t j = 0; j < n; ++j)
                s += Rational(lat.matrix(i, j)) * v[j];
            ok = s >= 0;
        }
        if (ok)
            out.push_back(std::move(v));
    }
    return out;
}

auto search_placements(const CurveConfig & gamma, const SearchOptions & opts) -> ClassificationResult
{
    ClassificationResult res;
    auto lat = intersection_matrix(gamma);
    auto cands = candidate_classes(gamma);
    if (opts.nef_filter) {
        auto certs = default_nef_certificates(gamma);
        std::erase_if(cands, [&](const CandidateClass & c) {
            return !std::all_of(certs.begin(), certs.end(), [&](const RationalVector & nv) { return nef_filter(lat, nv, c); });
        });
    }
    res.candidate_count = cands.size();
    long long m = opts.extras ? static_cast<long long>(*opts.extras) : expected_extras(gamma);
    if (m < 0)
        return res;
    auto placements = enumerate_placements(gamma, cands, static_cast<std::size_t>(m));
    res.tried = placements.size();

    const auto total = static_cast<long long>(placements.size());
#pragma omp parallel for schedule(dynamic) if (opts.exec == Execution::Parallel)
    for (long long i = 0; i < total; ++i) {
        auto & pl = placements[static_cast<std::size_t>(i)];
        pl = verify_placement(gamma, std::move(pl), opts.policy);
    }
    for (auto & pl : placements)
        if (pl.verified)
            res.placements.push_back(std::move(pl));

    if (!res.placements.empty()) {
        auto form = discriminant_form(lat);
        res.group = form.group;
        for (const auto & pl : res.placements)
            res.placement_subgroups.push_back(model_subgroup(form, lat, *pl.verified));
        res.subgroups = res.placement_subgroups;
        std::sort(res.subgroups.begin(), res.subgroups.end());
        res.subgroups.erase(std::unique(res.subgroups.begin(), res.subgroups.end()), res.subgroups.end());
    } else {
        res.group = discriminant_form(lat).group;
    }
    res.count = res.subgroups.size();
    return res;
}

auto classify(const FamilyParams & params, const SearchOptions & opts) -> ClassificationResult
{
    auto res = search_placements(make_family(params), opts);
    res.params = params;
    return res;
}

auto expected_count(const FamilyParams & params) -> std::size_t
{
    const int p = params.p, q = params.q, r = params.r;
    switch (params.family) {
    case Family::W: return p == q && q == r ? 2 : 1;
    case Family::N: return p == q + 2 && r == 0 ? 2 : 1;
    case Family::M: return p == r + 1 ? 2 : 1;
    }
    return 1;
}

auto sweep(Family family, int p_max, int q_max, int r_max, const SearchOptions & opts) -> std::vector<ClassificationResult>
{
    if (p_max < 0 || q_max < 0 || r_max < 0)
        throw std::invalid_argument("sweep bounds must be non-negative");
    std::vector<FamilyParams> grid;
    for (int p = 0; p <= p_max; ++p)
        for (int q = 0; q <= q_max; ++q)
            for (int r = 0; r <= r_max; ++r)
                grid.push_back({family, p, q, r});
    std::vector<ClassificationResult> out(grid.size());
    SearchOptions inner = opts;
    inner.exec = Execution::Serial; // parallelism goes over the grid instead
    const auto n = static_cast<long long>(grid.size());
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic) if (opts.exec == Execution::Parallel)
    for (long long i = 0; i < n; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = classify(grid[static_cast<std::size_t>(i)], inner);
        } catch (...) {
#pragma omp critical
            if (!error)
                error = std::current_exception();
        }
    }
    if (error)
        std::rethrow_exception(error);
    return out;
}

} // namespace qhd
