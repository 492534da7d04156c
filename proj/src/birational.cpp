#include <qhd/birational.hpp>
#include <qhd/errors.hpp>

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace qhd {

namespace {

auto has_singularity_at(const Curve & c, PointId p) -> bool
{
    return std::any_of(c.singularities.begin(), c.singularities.end(), [&](const Singularity & s) { return s.point == p; });
}

} // namespace

auto contract(const CurveConfig & config, CurveId f) -> std::pair<CurveConfig, BlowDownStep>
{
    if (!config.has_curve(f))
        throw std::invalid_argument("cannot contract missing curve " + std::to_string(f.value));
    const Curve & fc = config.curve(f);
    if (fc.self_int != -1)
        throw std::invalid_argument("curve " + config.label_of(f) + " has self-intersection " + std::to_string(fc.self_int) + ", not -1");
    if (!fc.singularities.empty())
        throw UnsupportedContractionError("curve " + config.label_of(f) + " is singular");

    auto on_f = config.points_on(f);
    std::map<CurveId, int> mult;
    std::map<CurveId, int> distinct;
    for (auto pid : on_f) {
        const auto & pt = config.point(pid);
        for (auto c : pt.incident) {
            if (c == f)
                continue;
            if (has_singularity_at(config.curve(c), pid))
                throw UnsupportedContractionError("curve " + config.label_of(c) + " is singular on " + config.label_of(f));
            mult[c] += pt.multiplicity(c, f);
            distinct[c] += 1;
        }
    }

    CurveConfig out = config;
    auto record = std::make_shared<ExceptionalRecord>();
    record->curve = fc;

    IncidencePoint p;
    p.id = config.next_point_id();
    for (const auto & [c, m] : mult)
        p.incident.push_back(c);
    for (std::size_t i = 0; i < p.incident.size(); ++i)
        for (std::size_t j = i + 1; j < p.incident.size(); ++j) {
            auto a = p.incident[i], b = p.incident[j];
            int local = mult[a] * mult[b];
            for (auto pid : on_f) {
                const auto & pt = config.point(pid);
                if (pt.contains(a) && pt.contains(b))
                    local += pt.multiplicity(a, b);
            }
            p.set_multiplicity(a, b, local);
        }

    for (auto pid : on_f) {
        record->points.push_back(config.point(pid));
        out.remove_point(pid);
    }
    out.remove_curve(f);
    for (const auto & [c, m] : mult) {
        auto & curve = out.curve(c);
        curve.self_int += m * m;
        if (m >= 2)
            curve.singularities.push_back({p.id, distinct[c] >= 2 ? SingularityKind::NodeLike : SingularityKind::CuspLike, m});
    }
    p.exceptional = std::move(record);

    BlowDownStep step{f, p, mult};
    out.insert_point(std::move(p));
    return {std::move(out), std::move(step)};
}

auto blow_up(const CurveConfig & config, PointId point, std::optional<std::string> label) -> CurveConfig
{
    if (!config.has_point(point))
        throw std::invalid_argument("cannot blow up missing point " + std::to_string(point.value));
    const IncidencePoint & p = config.point(point);
    CurveConfig out = config;

    if (p.exceptional) {
        // undo a contraction exactly
        const auto & rec = *p.exceptional;
        out.remove_point(point);
        out.insert_curve(rec.curve);
        std::map<CurveId, int> mult;
        for (const auto & pt : rec.points) {
            for (auto c : pt.incident)
                if (c != rec.curve.id)
                    mult[c] += pt.multiplicity(c, rec.curve.id);
            out.insert_point(pt);
        }
        for (const auto & [c, m] : mult) {
            auto & curve = out.curve(c);
            curve.self_int -= m * m;
            std::erase_if(curve.singularities, [&](const Singularity & s) { return s.point == point; });
        }
        return out;
    }

    for (auto c : p.incident)
        if (has_singularity_at(config.curve(c), point))
            throw UnsupportedContractionError("blow-up of a singular branch without a contraction record");

    auto f = out.add_curve(-1, std::move(label));
    out.remove_point(point);
    const auto k = p.incident.size();
    for (auto c : p.incident)
        out.curve(c).self_int -= 1;

    // branches that stay tangent after the blow-up share a point on f
    std::vector<std::size_t> parent(k);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (p.multiplicity(p.incident[i], p.incident[j]) >= 2)
                parent[find(i)] = find(j);

    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < k; ++i)
        groups[find(i)].push_back(i);
    std::vector<std::vector<std::size_t>> ordered;
    for (auto & [root, members] : groups)
        ordered.push_back(members);
    std::sort(ordered.begin(), ordered.end());

    for (const auto & members : ordered) {
        std::vector<CurveId> incident;
        for (auto i : members)
            incident.push_back(p.incident[i]);
        incident.push_back(f);
        std::vector<std::tuple<CurveId, CurveId, int>> mults;
        for (std::size_t a = 0; a < members.size(); ++a)
            for (std::size_t b = a + 1; b < members.size(); ++b) {
                int residual = p.multiplicity(p.incident[members[a]], p.incident[members[b]]) - 1;
                if (residual < 1)
                    throw std::invalid_argument("tangency orders at the point are not consistent");
                mults.emplace_back(p.incident[members[a]], p.incident[members[b]], residual);
            }
        out.add_point(incident, mults);
    }
    return out;
}

auto blow_up_on_curve(const CurveConfig & config, CurveId curve, std::optional<std::string> label) -> CurveConfig
{
    if (!config.has_curve(curve))
        throw std::invalid_argument("cannot blow up on missing curve " + std::to_string(curve.value));
    CurveConfig out = config;
    auto f = out.add_curve(-1, std::move(label));
    out.curve(curve).self_int -= 1;
    out.connect(curve, f);
    return out;
}

auto elementary_modification(const CurveConfig & config, BlowUpSite site, const std::vector<CurveId> & contract_ids) -> CurveConfig
{
    CurveConfig cur = std::holds_alternative<PointId>(site) ? blow_up(config, std::get<PointId>(site))
                                                             : blow_up_on_curve(config, std::get<CurveId>(site));
    for (auto id : contract_ids)
        cur = contract(cur, id).first;
    return cur;
}

auto is_snc_contractible(const CurveConfig & config, CurveId f) -> bool
{
    if (!config.has_curve(f))
        return false;
    const auto & fc = config.curve(f);
    if (fc.self_int != -1 || !fc.singularities.empty())
        return false;
    std::vector<CurveId> nbs;
    for (auto pid : config.points_on(f)) {
        const auto & pt = config.point(pid);
        if (pt.incident.size() < 2)
            continue;
        if (pt.incident.size() > 2)
            return false;
        auto other = pt.incident[0] == f ? pt.incident[1] : pt.incident[0];
        if (pt.multiplicity(f, other) != 1 || has_singularity_at(config.curve(other), pid))
            return false;
        if (std::find(nbs.begin(), nbs.end(), other) != nbs.end())
            return false;
        nbs.push_back(other);
    }
    if (nbs.size() > 2)
        return false;
    if (nbs.size() == 2 && total_intersection(config, nbs[0], nbs[1]) != 0)
        return false;
    return true;
}

namespace {

auto contractible(const CurveConfig & config, const ContractionPolicy & policy) -> std::vector<CurveId>
{
    std::vector<CurveId> out;
    for (const auto & [id, c] : config.curves())
        if (c.self_int == -1 && (!policy.snc_only || is_snc_contractible(config, id)))
            out.push_back(id);
    return out;
}

auto all_lines(const CurveConfig & config) -> bool
{
    return std::all_of(config.curves().begin(), config.curves().end(),
                       [](const auto & kv) { return kv.second.self_int == 1 && kv.second.singularities.empty(); });
}

auto stall_reason(const CurveConfig & config) -> std::string
{
    std::string reason = "stalled with " + std::to_string(config.curve_count()) + " curves and no contractible -1 curve";
    std::string below;
    std::string blocked;
    for (const auto & [id, c] : config.curves()) {
        if (c.self_int < -1)
            below += (below.empty() ? "" : ", ") + config.label_of(id) + "(" + std::to_string(c.self_int) + ")";
        else if (c.self_int == -1)
            blocked += (blocked.empty() ? "" : ", ") + config.label_of(id);
    }
    if (!blocked.empty())
        reason += "; -1 curves that would break normal crossings: " + blocked;
    if (!below.empty())
        reason += "; curves below -1: " + below;
    return reason;
}

} // namespace

auto full_blow_down(const CurveConfig & config, const std::set<CurveId> & extras, ContractionPolicy policy) -> BlowDownResult
{
    BlowDownRecord rec;
    rec.initial = config;
    CurveConfig cur = config;
    while (true) {
        auto cands = contractible(cur, policy);
        if (cands.empty())
            break;
        auto pick = cands.front();
        if (policy.extras_first) {
            auto it = std::find_if(cands.begin(), cands.end(), [&](CurveId c) { return extras.contains(c); });
            if (it != cands.end())
                pick = *it;
        }
        try {
            auto [next, step] = contract(cur, pick);
            cur = std::move(next);
            rec.steps.push_back(std::move(step));
        } catch (const UnsupportedContractionError & e) {
            rec.final = cur;
            return {std::nullopt, BlowDownFailure{std::string("refused contraction: ") + e.what(), std::move(rec)}};
        }
    }
    rec.final = cur;
    if (cur.curve_count() > 4)
        return {std::nullopt, BlowDownFailure{stall_reason(cur), std::move(rec)}};
    rec.pic_basis = track_pic(rec);
    PlaneModel pm{cur, std::move(rec)};
    return {std::move(pm), std::nullopt};
}

auto explore_contraction_orders(const CurveConfig & config, ContractionPolicy policy, std::size_t state_limit) -> OrderExploration
{
    OrderExploration res;
    res.all_success = true;
    std::unordered_set<std::string> seen;

    std::function<void(const CurveConfig &, std::vector<int> &)> visit = [&](const CurveConfig & cur, std::vector<int> & gone) {
        auto sorted = gone;
        std::sort(sorted.begin(), sorted.end());
        std::string key;
        for (auto v : sorted)
            key += std::to_string(v) + ',';
        if (!seen.insert(key).second)
            return;
        if (seen.size() > state_limit)
            throw LimitExceededError("contraction-order exploration exceeded " + std::to_string(state_limit) + " states");
        auto cands = contractible(cur, policy);
        bool terminal = true;
        for (auto c : cands) {
            CurveConfig next;
            try {
                next = contract(cur, c).first;
            } catch (const UnsupportedContractionError &) {
                continue;
            }
            terminal = false;
            gone.push_back(c.value);
            visit(next, gone);
            gone.pop_back();
        }
        if (terminal) {
            bool ok = is_four_lines_general_position(cur);
            ++res.terminal_states;
            res.any_success = res.any_success || ok;
            res.all_success = res.all_success && ok;
        }
    };
    std::vector<int> gone;
    visit(config, gone);
    return res;
}

auto is_four_lines_general_position(const CurveConfig & config) -> bool
{
    if (config.curve_count() != 4 || !all_lines(config))
        return false;
    auto ids = config.curve_ids();
    for (std::size_t i = 0; i < ids.size(); ++i)
        for (std::size_t j = i + 1; j < ids.size(); ++j)
            if (total_intersection(config, ids[i], ids[j]) != 1)
                return false;
    std::size_t double_points = 0;
    for (const auto & [pid, pt] : config.points()) {
        if (pt.incident.size() < 2)
            continue; // remembered contraction of a curve meeting at most one line
        if (pt.incident.size() != 2 || pt.multiplicity(pt.incident[0], pt.incident[1]) != 1)
            return false;
        ++double_points;
    }
    return double_points == 6;
}

auto is_four_lines_general_position(const PlaneModel & pm) -> bool { return is_four_lines_general_position(pm.config); }

auto k_squared(const CurveConfig & config) -> long long { return 10 - static_cast<long long>(config.curve_count()); }

auto k_squared(const BlowDownRecord & record) -> long long { return 9 - static_cast<long long>(record.steps.size()); }

auto pic_pairing(const IntVector & a, const IntVector & b) -> long long
{
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("Pic vectors of different length");
    long long s = a[0] * b[0];
    for (std::size_t i = 1; i < a.size(); ++i)
        s -= a[i] * b[i];
    return s;
}

auto track_pic(const BlowDownRecord & record) -> std::map<CurveId, IntVector>
{
    if (!all_lines(record.final))
        return {};
    const auto b = record.steps.size();
    std::map<CurveId, IntVector> cls;
    for (const auto & [id, c] : record.final.curves()) {
        IntVector v(b + 1, 0);
        v[0] = 1;
        cls[id] = v;
    }
    for (std::size_t j = b; j-- > 0;) {
        const auto & step = record.steps[j];
        IntVector v(b + 1, 0);
        v[j + 1] = 1;
        cls[step.contracted] = v;
        for (const auto & [c, m] : step.multiplicities)
            cls.at(c)[j + 1] -= m;
    }
    return cls;
}

auto first_nonsingular_blowup(const BlowDownRecord & record) -> std::optional<std::size_t>
{
    CurveConfig cur = record.final;
    for (std::size_t j = record.steps.size(); j-- > 0;) {
        auto pid = record.steps[j].new_point.id;
        const auto & pt = cur.point(pid);
        bool singular = pt.incident.size() >= 2 ||
                        std::any_of(pt.incident.begin(), pt.incident.end(), [&](CurveId c) { return has_singularity_at(cur.curve(c), pid); });
        if (!singular)
            return j;
        cur = blow_up(cur, pid);
    }
    return std::nullopt;
}

auto replay_blow_ups(const BlowDownRecord & record) -> CurveConfig
{
    CurveConfig cur = record.final;
    for (std::size_t j = record.steps.size(); j-- > 0;)
        cur = blow_up(cur, record.steps[j].new_point.id);
    return cur;
}

} // namespace qhd
