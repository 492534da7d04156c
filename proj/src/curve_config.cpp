#include <qhd/curve_config.hpp>

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qhd {

auto IncidencePoint::contains(CurveId c) const -> bool
{
    return std::find(incident.begin(), incident.end(), c) != incident.end();
}

auto IncidencePoint::multiplicity(CurveId a, CurveId b) const -> int
{
    if (auto it = local_mults.find({a, b}); it != local_mults.end())
        return it->second;
    if (auto it = local_mults.find({b, a}); it != local_mults.end())
        return it->second;
    return 1;
}

void IncidencePoint::set_multiplicity(CurveId a, CurveId b, int m)
{
    local_mults.erase({b, a});
    local_mults.erase({a, b});
    local_mults[{std::min(a, b), std::max(a, b)}] = m;
}

auto operator==(const IncidencePoint & a, const IncidencePoint & b) -> bool
{
    if (a.id != b.id || a.incident != b.incident || a.local_mults != b.local_mults)
        return false;
    if (!a.exceptional || !b.exceptional)
        return !a.exceptional && !b.exceptional;
    return *a.exceptional == *b.exceptional;
}

auto CurveConfig::add_curve(int self_int, std::optional<std::string> label) -> CurveId
{
    CurveId id = next_curve_id();
    curves_.emplace(id, Curve{id, self_int, std::move(label), {}});
    return id;
}

void CurveConfig::insert_curve(Curve curve)
{
    if (curves_.contains(curve.id))
        throw std::invalid_argument("duplicate curve id " + std::to_string(curve.id.value));
    curves_.emplace(curve.id, std::move(curve));
}

auto CurveConfig::add_point(std::vector<CurveId> incident, const std::vector<std::tuple<CurveId, CurveId, int>> & mults) -> PointId
{
    IncidencePoint pt;
    pt.id = next_point_id();
    pt.incident = std::move(incident);
    for (std::size_t i = 0; i < pt.incident.size(); ++i)
        for (std::size_t j = i + 1; j < pt.incident.size(); ++j)
            pt.set_multiplicity(pt.incident[i], pt.incident[j], 1);
    for (const auto & [a, b, m] : mults)
        pt.set_multiplicity(a, b, m);
    auto id = pt.id;
    points_.emplace(id, std::move(pt));
    return id;
}

void CurveConfig::insert_point(IncidencePoint point)
{
    if (points_.contains(point.id))
        throw std::invalid_argument("duplicate point id " + std::to_string(point.id.value));
    points_.emplace(point.id, std::move(point));
}

auto CurveConfig::connect(CurveId a, CurveId b) -> PointId { return add_point({a, b}); }

void CurveConfig::remove_curve(CurveId id) { curves_.erase(id); }

void CurveConfig::remove_point(PointId id) { points_.erase(id); }

auto CurveConfig::curve(CurveId id) const -> const Curve &
{
    auto it = curves_.find(id);
    if (it == curves_.end())
        throw std::out_of_range("unknown curve id " + std::to_string(id.value));
    return it->second;
}

auto CurveConfig::curve(CurveId id) -> Curve &
{
    auto it = curves_.find(id);
    if (it == curves_.end())
        throw std::out_of_range("unknown curve id " + std::to_string(id.value));
    return it->second;
}

auto CurveConfig::point(PointId id) const -> const IncidencePoint &
{
    auto it = points_.find(id);
    if (it == points_.end())
        throw std::out_of_range("unknown point id " + std::to_string(id.value));
    return it->second;
}

auto CurveConfig::point(PointId id) -> IncidencePoint &
{
    auto it = points_.find(id);
    if (it == points_.end())
        throw std::out_of_range("unknown point id " + std::to_string(id.value));
    return it->second;
}

auto CurveConfig::curve_ids() const -> std::vector<CurveId>
{
    std::vector<CurveId> ids;
    ids.reserve(curves_.size());
    for (const auto & [id, _] : curves_)
        ids.push_back(id);
    return ids;
}

auto CurveConfig::next_curve_id() const -> CurveId
{
    return curves_.empty() ? CurveId{0} : CurveId{curves_.rbegin()->first.value + 1};
}

auto CurveConfig::next_point_id() const -> PointId
{
    return points_.empty() ? PointId{0} : PointId{points_.rbegin()->first.value + 1};
}

auto CurveConfig::find_label(const std::string & label) const -> std::optional<CurveId>
{
    for (const auto & [id, c] : curves_)
        if (c.label && *c.label == label)
            return id;
    return std::nullopt;
}

auto CurveConfig::label_of(CurveId id) const -> std::string
{
    const auto & c = curve(id);
    return c.label ? *c.label : "#" + std::to_string(id.value);
}

auto CurveConfig::points_on(CurveId id) const -> std::vector<PointId>
{
    std::vector<PointId> out;
    for (const auto & [pid, pt] : points_)
        if (pt.contains(id))
            out.push_back(pid);
    return out;
}

auto CurveConfig::neighbours(CurveId id) const -> std::vector<CurveId>
{
    std::set<CurveId> out;
    for (const auto & [pid, pt] : points_)
        if (pt.contains(id))
            for (auto c : pt.incident)
                if (c != id)
                    out.insert(c);
    return {out.begin(), out.end()};
}

auto family_name(Family f) -> std::string
{
    switch (f) {
    case Family::W: return "W";
    case Family::N: return "N";
    case Family::M: return "M";
    }
    return "?";
}

auto parse_family(const std::string & name) -> Family
{
    if (name == "W" || name == "w")
        return Family::W;
    if (name == "N" || name == "n")
        return Family::N;
    if (name == "M" || name == "m")
        return Family::M;
    throw std::invalid_argument("unknown family '" + name + "' (expected W, N or M)");
}

auto to_string(const FamilyParams & params) -> std::string
{
    std::ostringstream os;
    os << family_name(params.family) << '(' << params.p << ',' << params.q << ',' << params.r << ')';
    return os.str();
}

auto cf_expand(long long n, long long q) -> std::vector<long long>
{
    if (q <= 0 || q >= n)
        throw std::invalid_argument("continued fraction needs 0 < q < n");
    if (std::gcd(n, q) != 1)
        throw std::invalid_argument("continued fraction needs gcd(n, q) = 1");
    // n/q = b - 1/(q/(b q - n)) with b = ceil(n/q)
    std::vector<long long> bs;
    while (q > 0) {
        long long b = (n + q - 1) / q;
        bs.push_back(b);
        long long rest = b * q - n;
        n = q;
        q = rest;
    }
    return bs;
}

auto cf_evaluate(const std::vector<long long> & bs) -> std::pair<Integer, Integer>
{
    if (bs.empty())
        throw std::invalid_argument("empty continued fraction");
    for (auto b : bs)
        if (b < 2)
            throw std::invalid_argument("continued fraction entries must be >= 2");
    // evaluate from the tail: value = b_s, then b_i - 1/value
    Integer num = static_cast<long>(bs.back());
    Integer den = 1;
    for (auto it = bs.rbegin() + 1; it != bs.rend(); ++it) {
        Integer next_num = Integer(static_cast<long>(*it)) * num - den;
        den = num;
        num = next_num;
    }
    Integer g;
    mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return {num / g, den / g};
}

namespace {

struct ArmSpec {
    std::string name;
    std::vector<int> self_ints;
};

auto twos(int count) -> std::vector<int> { return std::vector<int>(static_cast<std::size_t>(count), -2); }

auto arm(std::string name, std::vector<int> head, int tail_twos) -> ArmSpec
{
    auto tail = twos(tail_twos);
    head.insert(head.end(), tail.begin(), tail.end());
    return {std::move(name), std::move(head)};
}

auto family_layout(const FamilyParams & fp) -> std::pair<int, std::vector<ArmSpec>>
{
    const int p = fp.p, q = fp.q, r = fp.r;
    switch (fp.family) {
    case Family::W:
        return {1, {arm("P", {-(p + 2)}, r + 1), arm("Q", {-(q + 2)}, p + 1), arm("R", {-(r + 2)}, q + 1)}};
    case Family::N:
        return {0, {arm("Q", {-(q + 2), -(p + 2)}, r + 1), arm("R", {-(r + 2)}, q + 2), arm("P", {}, p + 1)}};
    case Family::M:
        return {-1, {arm("R", {}, r + 2), arm("P", {}, p + 1), arm("Q", {-(q + 2), -(r + 2), -(p + 2)}, q + 2)}};
    }
    throw std::invalid_argument("unknown family");
}

} // namespace

auto family_arm_names(Family f) -> std::vector<std::string>
{
    std::vector<std::string> names;
    for (const auto & a : family_layout({f, 0, 0, 0}).second)
        names.push_back(a.name);
    return names;
}

auto make_family(const FamilyParams & params) -> CurveConfig
{
    if (params.p < 0 || params.q < 0 || params.r < 0)
        throw std::invalid_argument("family parameters must be non-negative");
    auto [centre_self, arms] = family_layout(params);
    CurveConfig config;
    auto centre = config.add_curve(centre_self, "E0");
    for (const auto & a : arms) {
        auto prev = centre;
        for (std::size_t k = 0; k < a.self_ints.size(); ++k) {
            auto c = config.add_curve(a.self_ints[k], a.name + std::to_string(k + 1));
            config.connect(prev, c);
            prev = c;
        }
    }
    return config;
}

auto total_intersection(const CurveConfig & config, CurveId a, CurveId b) -> long long
{
    if (a == b)
        return config.curve(a).self_int;
    config.curve(b);
    long long total = 0;
    for (const auto & [pid, pt] : config.points())
        if (pt.contains(a) && pt.contains(b))
            total += pt.multiplicity(a, b);
    return total;
}

auto validate(const CurveConfig & config) -> std::vector<std::string>
{
    std::vector<std::string> violations;
    auto name = [](auto id) { return std::to_string(id.value); };

    std::set<std::string> labels;
    for (const auto & [id, c] : config.curves()) {
        if (c.label && !labels.insert(*c.label).second)
            violations.push_back("duplicate label '" + *c.label + "'");
        for (const auto & s : c.singularities)
            if (!config.has_point(s.point) || !config.point(s.point).contains(id))
                violations.push_back("curve " + name(id) + " carries a singularity at point " + name(s.point) + " it does not pass through");
    }

    for (const auto & [pid, pt] : config.points()) {
        const auto where = "point " + name(pid);
        // a point with fewer than two curves only survives as the memory of a contraction
        if (pt.incident.size() < 2 && !pt.exceptional)
            violations.push_back(where + " has fewer than two incident curves");
        std::set<CurveId> seen;
        for (auto c : pt.incident) {
            if (!config.has_curve(c))
                violations.push_back(where + " references missing curve " + name(c));
            if (!seen.insert(c).second)
                violations.push_back(where + " lists curve " + name(c) + " more than once");
        }
        for (const auto & [key, m] : pt.local_mults) {
            auto [a, b] = key;
            if (a == b || !seen.contains(a) || !seen.contains(b))
                violations.push_back(where + " has a multiplicity entry for a pair that is not incident");
            if (m <= 0)
                violations.push_back(where + " has a non-positive multiplicity");
            if (a < b) {
                if (auto it = pt.local_mults.find({b, a}); it != pt.local_mults.end() && it->second != m)
                    violations.push_back(where + " has asymmetric multiplicities for curves " + name(a) + " and " + name(b));
            }
        }
        std::vector<CurveId> inc(seen.begin(), seen.end());
        for (std::size_t i = 0; i < inc.size(); ++i)
            for (std::size_t j = i + 1; j < inc.size(); ++j)
                if (!pt.local_mults.contains({inc[i], inc[j]}) && !pt.local_mults.contains({inc[j], inc[i]}))
                    violations.push_back(where + " lacks a multiplicity for curves " + name(inc[i]) + " and " + name(inc[j]));
    }
    return violations;
}

} // namespace qhd
