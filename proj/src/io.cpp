#include <qhd/io.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace qhd {

namespace {

auto kind_name(SingularityKind k) -> std::string { return k == SingularityKind::NodeLike ? "node-like" : "cusp-like"; }

auto parse_kind(const std::string & s) -> SingularityKind
{
    if (s == "node-like")
        return SingularityKind::NodeLike;
    if (s == "cusp-like")
        return SingularityKind::CuspLike;
    throw FormatError("unknown singularity kind '" + s + "'");
}

template <typename T>
auto field(const Json & j, const char * key, const char * where) -> T
{
    if (!j.is_object() || !j.contains(key))
        throw FormatError(std::string(where) + " lacks \"" + key + "\"");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception &) {
        throw FormatError(std::string(where) + ": \"" + key + "\" has the wrong type");
    }
}

} // namespace

auto to_json(const IncidencePoint & pt) -> Json
{
    Json incident = Json::array();
    for (auto c : pt.incident)
        incident.push_back(c.value);
    Json mults = Json::array();
    for (std::size_t i = 0; i < pt.incident.size(); ++i)
        for (std::size_t j = i + 1; j < pt.incident.size(); ++j)
            mults.push_back({pt.incident[i].value, pt.incident[j].value, pt.multiplicity(pt.incident[i], pt.incident[j])});
    return {{"id", pt.id.value}, {"incident", incident}, {"mults", mults}};
}

auto to_json(const CurveConfig & config) -> Json
{
    Json curves = Json::array();
    for (const auto & [id, c] : config.curves()) {
        Json jc = {{"id", id.value}, {"self", c.self_int}, {"label", c.label ? Json(*c.label) : Json(nullptr)}};
        if (!c.singularities.empty()) {
            Json sing = Json::array();
            for (const auto & s : c.singularities)
                sing.push_back({{"point", s.point.value}, {"kind", kind_name(s.kind)}, {"multiplicity", s.multiplicity}});
            jc["singularities"] = sing;
        }
        curves.push_back(std::move(jc));
    }
    Json points = Json::array();
    for (const auto & [id, pt] : config.points())
        points.push_back(to_json(pt));
    return {{"curves", curves}, {"points", points}};
}

auto config_from_json(const Json & j) -> CurveConfig
{
    if (!j.is_object())
        throw FormatError("graph must be a JSON object");
    auto curves = field<Json>(j, "curves", "graph");
    auto points = j.contains("points") ? field<Json>(j, "points", "graph") : Json::array();
    if (!curves.is_array() || !points.is_array())
        throw FormatError("\"curves\" and \"points\" must be arrays");

    CurveConfig cfg;
    for (const auto & jc : curves) {
        Curve c;
        c.id = CurveId{field<int>(jc, "id", "curve")};
        c.self_int = field<int>(jc, "self", "curve");
        if (jc.contains("label") && !jc.at("label").is_null())
            c.label = field<std::string>(jc, "label", "curve");
        if (jc.contains("singularities"))
            for (const auto & js : field<Json>(jc, "singularities", "curve"))
                c.singularities.push_back({PointId{field<int>(js, "point", "singularity")}, parse_kind(field<std::string>(js, "kind", "singularity")),
                                           field<int>(js, "multiplicity", "singularity")});
        if (cfg.has_curve(c.id))
            throw FormatError("duplicate curve id " + std::to_string(c.id.value));
        cfg.insert_curve(std::move(c));
    }
    for (const auto & jp : points) {
        IncidencePoint pt;
        pt.id = PointId{field<int>(jp, "id", "point")};
        for (auto v : field<std::vector<int>>(jp, "incident", "point"))
            pt.incident.push_back(CurveId{v});
        for (std::size_t a = 0; a < pt.incident.size(); ++a)
            for (std::size_t b = a + 1; b < pt.incident.size(); ++b)
                if (pt.incident[a] != pt.incident[b])
                    pt.set_multiplicity(pt.incident[a], pt.incident[b], 1);
        if (jp.contains("mults"))
            for (const auto & jm : field<Json>(jp, "mults", "point")) {
                if (!jm.is_array() || jm.size() != 3 || !jm[0].is_number_integer() || !jm[1].is_number_integer() || !jm[2].is_number_integer())
                    throw FormatError("multiplicity entries must be [curve, curve, m]");
                CurveId a{jm[0].get<int>()}, b{jm[1].get<int>()};
                auto key = std::pair{std::min(a, b), std::max(a, b)};
                auto it = pt.local_mults.find(key);
                if (it != pt.local_mults.end() && it->second != 1 && it->second != jm[2].get<int>())
                    throw FormatError("conflicting multiplicities at point " + std::to_string(pt.id.value));
                pt.local_mults[key] = jm[2].get<int>();
            }
        if (cfg.has_point(pt.id))
            throw FormatError("duplicate point id " + std::to_string(pt.id.value));
        cfg.insert_point(std::move(pt));
    }
    auto violations = validate(cfg);
    if (!violations.empty())
        throw FormatError("invalid configuration: " + violations.front());
    return cfg;
}

auto to_json(const RationalVector & v) -> Json
{
    Json out = Json::array();
    for (const auto & q : v)
        out.push_back(to_string(q));
    return out;
}

auto to_json(const BlowDownRecord & record) -> Json
{
    Json steps = Json::array();
    for (const auto & s : record.steps) {
        Json mult = Json::array();
        for (const auto & [c, m] : s.multiplicities)
            mult.push_back({c.value, m});
        steps.push_back({{"contracted", s.contracted.value},
                         {"label", record.initial.has_curve(s.contracted) ? record.initial.label_of(s.contracted) : ""},
                         {"new_point", to_json(s.new_point)},
                         {"multiplicities", mult}});
    }
    Json pic = Json::array();
    for (const auto & [id, v] : record.pic_basis)
        pic.push_back({{"curve", id.value}, {"class", v}});
    return {{"initial", to_json(record.initial)},
            {"final", to_json(record.final)},
            {"steps", steps},
            {"pic_basis", pic},
            {"k_squared", k_squared(record)}};
}

auto to_json(const FiniteAbelianGroup & g) -> Json { return {{"invariant_factors", g.factors}, {"order", g.order().get_str()}}; }

auto to_json(const Subgroup & h) -> Json { return {{"order", h.order.get_str()}, {"generators", h.generators}, {"hnf", h.hnf}}; }

auto placement_from_json(const CurveConfig & gamma, const Json & j) -> Placement
{
    auto extras = field<Json>(j, "extras", "placement");
    if (!extras.is_array())
        throw FormatError("\"extras\" must be an array");
    Placement pl;
    for (const auto & e : extras) {
        std::vector<CurveId> attach;
        for (auto v : field<std::vector<int>>(e, "attach", "extra")) {
            if (!gamma.has_curve(CurveId{v}))
                throw FormatError("placement attaches to unknown curve " + std::to_string(v));
            attach.push_back(CurveId{v});
        }
        if (std::set<CurveId>(attach.begin(), attach.end()).size() != attach.size())
            throw FormatError("placement attaches twice to the same curve");
        pl.candidates.push_back(candidate_for(gamma, attach));
    }
    return pl;
}

auto placement_to_json(const CurveConfig & gamma, const Placement & pl) -> Json
{
    Json extras = Json::array();
    for (const auto & c : pl.candidates) {
        Json ids = Json::array(), labels = Json::array();
        for (auto a : c.attachments) {
            ids.push_back(a.value);
            labels.push_back(gamma.label_of(a));
        }
        extras.push_back({{"attach", ids}, {"labels", labels}, {"self_pairing", to_string(c.self_pairing)}});
    }
    Json out = {{"extras", extras}, {"verified", pl.verified.has_value()}};
    if (!pl.rejection.empty())
        out["rejection"] = pl.rejection;
    return out;
}

auto to_json(const CurveConfig & gamma, const ClassificationResult & r) -> Json
{
    Json placements = Json::array();
    for (std::size_t i = 0; i < r.placements.size(); ++i) {
        auto jp = placement_to_json(gamma, r.placements[i]);
        if (i < r.placement_subgroups.size())
            jp["subgroup"] = to_json(r.placement_subgroups[i]);
        placements.push_back(std::move(jp));
    }
    Json subgroups = Json::array();
    for (const auto & h : r.subgroups)
        subgroups.push_back(to_json(h));
    auto expected = expected_count(r.params);
    return {{"family", family_name(r.params.family)},
            {"p", r.params.p},
            {"q", r.params.q},
            {"r", r.params.r},
            {"count", r.count},
            {"expected", expected},
            {"match", r.count == expected},
            {"verified_placements", r.placements.size()},
            {"candidates", r.candidate_count},
            {"placements_tried", r.tried},
            {"group", to_json(r.group)},
            {"placements", placements},
            {"subgroups", subgroups}};
}

auto read_json_file(const std::string & path) -> Json
{
    std::ifstream in(path);
    if (!in)
        throw FormatError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error & e) {
        throw FormatError(path + ": " + e.what());
    }
}

auto dump(const Json & j) -> std::string { return j.dump(2) + "\n"; }

} // namespace qhd
