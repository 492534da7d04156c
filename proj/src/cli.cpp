#include <qhd/cli.hpp>
#include <qhd/errors.hpp>
#include <qhd/io.hpp>
#include <qhd/lattice.hpp>
#include <qhd/search.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>

namespace qhd::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

auto labels_of(const CurveConfig & gamma, const std::vector<CurveId> & ids) -> std::string
{
    std::string s = "{";
    for (std::size_t i = 0; i < ids.size(); ++i)
        s += (i ? "," : "") + gamma.label_of(ids[i]);
    return s + "}";
}

auto placement_text(const CurveConfig & gamma, const Placement & pl) -> std::string
{
    std::string s;
    for (std::size_t i = 0; i < pl.candidates.size(); ++i)
        s += (i ? " " : "") + labels_of(gamma, pl.candidates[i].attachments);
    return s.empty() ? "(none)" : s;
}

auto factors_text(const FiniteAbelianGroup & g) -> std::string
{
    if (g.factors.empty())
        return "trivial";
    std::string s;
    for (std::size_t i = 0; i < g.factors.size(); ++i)
        s += (i ? " x " : "") + ("Z/" + std::to_string(g.factors[i]));
    return s;
}

auto element_text(const Element & x) -> std::string
{
    std::string s = "(";
    for (std::size_t i = 0; i < x.size(); ++i)
        s += (i ? "," : "") + std::to_string(x[i]);
    return s + ")";
}

auto subgroup_text(const Subgroup & h) -> std::string
{
    std::string s = "order " + h.order.get_str() + ", generated by";
    if (h.generators.empty())
        return s + " 0";
    for (const auto & g : h.generators)
        s += " " + element_text(g);
    return s;
}

auto load_graph(const std::string & path) -> CurveConfig { return config_from_json(read_json_file(path)); }

void write_output(const std::string & text, const std::string & path, std::ostream & out)
{
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path);
    if (!f)
        throw UsageError("cannot write " + path);
    f << text;
}

auto cmd_gen(const std::string & family, int p, int q, int r, const std::string & output, std::ostream & out) -> int
{
    FamilyParams fp{parse_family(family), p, q, r};
    if (p < 0 || q < 0 || r < 0)
        throw UsageError("p, q, r must be non-negative");
    write_output(dump(to_json(make_family(fp))), output, out);
    return 0;
}

auto cmd_invariants(const std::string & path, bool json, std::ostream & out) -> int
{
    auto cfg = load_graph(path);
    auto lat = intersection_matrix(cfg);
    auto det = det_direct(lat.matrix);
    if (det == 0)
        throw SingularLatticeError();
    auto k = canonical_coefficients(lat);
    Json j;
    j["curves"] = cfg.curve_count();
    j["det_direct"] = det.get_str();
    j["det_is_square"] = is_perfect_square(abs(det));
    j["k_squared"] = k_squared(cfg);
    Json kv = Json::object();
    for (std::size_t i = 0; i < k.size(); ++i)
        kv[cfg.label_of(lat.ordering[i])] = to_string(k[i]);
    j["k"] = kv;
    j["negative_definite"] = is_negative_definite(lat.matrix);

    std::optional<std::string> star_error;
    try {
        auto star = star_shape(cfg);
        auto inv = star_invariants(star);
        auto rep = verify_bounds(cfg);
        auto dec = anticanonical_decomposition(cfg);
        j["det_formula"] = det_via_formula(star).get_str();
        j["e"] = to_string(inv.e);
        j["chi"] = to_string(inv.chi);
        j["beta"] = to_string(inv.beta);
        j["log_canonical"] = rep.log_canonical;
        j["bounds_ok"] = rep.ok();
        j["bound_violations"] = rep.violations;
        j["anticanonical_identity"] = dec.holds;
    } catch (const NotStarShapedError & e) {
        star_error = e.what();
        j["star"] = e.what();
    }
    if (json) {
        out << dump(j);
        return 0;
    }
    auto row = [&](const std::string & key, const std::string & value) { out << std::left << std::setw(20) << key << value << '\n'; };
    row("curves", std::to_string(cfg.curve_count()));
    row("det (direct)", det.get_str());
    if (!star_error)
        row("|det| (formula)", j["det_formula"].get<std::string>());
    row("|det| is a square", j["det_is_square"].get<bool>() ? "yes" : "no");
    row("K^2", std::to_string(k_squared(cfg)));
    row("negative definite", j["negative_definite"].get<bool>() ? "yes" : "no");
    if (star_error) {
        row("star invariants", "n/a (" + *star_error + ")");
    } else {
        row("e", j["e"].get<std::string>());
        row("chi", j["chi"].get<std::string>());
        row("beta", j["beta"].get<std::string>() + (j["log_canonical"].get<bool>() ? "  (log-canonical)" : ""));
        row("-(K+E) identity", j["anticanonical_identity"].get<bool>() ? "holds" : "FAILS");
        std::string bounds = j["bounds_ok"].get<bool>() ? "all hold" : "violated:";
        for (const auto & v : j["bound_violations"])
            bounds += " [" + v.get<std::string>() + "]";
        row("bounds", bounds);
    }
    out << "k:\n";
    for (std::size_t i = 0; i < k.size(); ++i)
        out << "  " << std::left << std::setw(8) << cfg.label_of(lat.ordering[i]) << to_string(k[i]) << '\n';
    return 0;
}

auto cmd_disc(const std::string & path, bool self_iso, bool parallel, bool json, std::ostream & out) -> int
{
    auto cfg = load_graph(path);
    auto form = discriminant_form(intersection_matrix(cfg));
    const auto k = form.group.rank();
    Json j;
    j["group"] = to_json(form.group);
    Json gram = Json::array();
    for (std::size_t a = 0; a < k; ++a) {
        Json rowj = Json::array();
        for (std::size_t b = 0; b < k; ++b)
            rowj.push_back(to_string(form.gram(a, b)));
        gram.push_back(rowj);
    }
    j["pairing"] = gram;
    std::vector<Subgroup> subs;
    if (self_iso) {
        subs = self_isotropic_subgroups(form, subgroup_limit(), parallel ? Execution::Parallel : Execution::Serial);
        Json js = Json::array();
        for (const auto & h : subs)
            js.push_back(to_json(h));
        j["self_isotropic"] = js;
    }
    if (json) {
        out << dump(j);
        return 0;
    }
    out << "group     " << factors_text(form.group) << "  (order " << form.group.order().get_str() << ")\n";
    out << "pairing\n";
    for (const auto & rowj : gram) {
        out << " ";
        for (const auto & v : rowj)
            out << ' ' << std::setw(10) << v.get<std::string>();
        out << '\n';
    }
    if (self_iso) {
        out << "self-isotropic subgroups: " << subs.size() << '\n';
        for (const auto & h : subs)
            out << "  " << subgroup_text(h) << '\n';
    }
    return 0;
}

auto cmd_blowdown(const std::string & path, const std::string & placement_path, bool json, std::ostream & out) -> int
{
    auto gamma = load_graph(path);
    auto pl = placement_from_json(gamma, read_json_file(placement_path));
    auto verified = verify_placement(gamma, pl);
    if (json) {
        Json j = placement_to_json(gamma, verified);
        if (verified.verified)
            j["record"] = to_json(*verified.verified);
        out << dump(j);
        return 0;
    }
    out << "placement " << placement_text(gamma, verified) << '\n';
    if (!verified.verified) {
        out << "rejected: " << verified.rejection << '\n';
        return 0;
    }
    const auto & rec = *verified.verified;
    std::vector<CurveId> extras;
    auto full = materialize(gamma, verified, &extras);
    out << "accepted: " << rec.steps.size() << " contractions to four lines in general position\n";
    for (std::size_t i = 0; i < rec.steps.size(); ++i) {
        const auto & s = rec.steps[i];
        out << "  " << std::setw(3) << i + 1 << "  contract " << std::left << std::setw(6) << full.label_of(s.contracted) << std::right << " meeting";
        for (const auto & [c, m] : s.multiplicities)
            out << ' ' << full.label_of(c) << (m > 1 ? "^" + std::to_string(m) : "");
        out << '\n';
    }
    out << "Pic classes (l; e1..e" << rec.steps.size() << "):\n";
    for (const auto & [id, v] : rec.pic_basis) {
        out << "  " << std::left << std::setw(6) << full.label_of(id) << std::right;
        for (auto x : v)
            out << ' ' << std::setw(2) << x;
        out << '\n';
    }
    return 0;
}

auto cmd_search(const std::string & path, std::optional<std::size_t> extras, bool nef, bool parallel, bool json, std::ostream & out) -> int
{
    auto gamma = load_graph(path);
    SearchOptions opts;
    opts.nef_filter = nef;
    opts.extras = extras;
    opts.exec = parallel ? Execution::Parallel : Execution::Serial;
    auto res = search_placements(gamma, opts);
    if (json) {
        Json j = {{"candidates", res.candidate_count},
                  {"placements_tried", res.tried},
                  {"count", res.count},
                  {"group", to_json(res.group)}};
        Json pls = Json::array();
        for (std::size_t i = 0; i < res.placements.size(); ++i) {
            auto jp = placement_to_json(gamma, res.placements[i]);
            jp["subgroup"] = to_json(res.placement_subgroups[i]);
            pls.push_back(jp);
        }
        j["placements"] = pls;
        out << dump(j);
        return 0;
    }
    out << "candidates " << res.candidate_count << ", placements tried " << res.tried << ", verified " << res.placements.size()
        << ", distinct surfaces " << res.count << '\n';
    if (res.placements.empty())
        out << "no placements found\n";
    for (std::size_t i = 0; i < res.placements.size(); ++i) {
        const auto & h = res.placement_subgroups[i];
        auto pos = std::lower_bound(res.subgroups.begin(), res.subgroups.end(), h) - res.subgroups.begin();
        out << "  " << placement_text(gamma, res.placements[i]) << "   surface " << pos + 1 << ": " << subgroup_text(h) << '\n';
    }
    return 0;
}

auto cmd_sweep(const std::string & family, int max, bool nef, bool parallel, bool json, std::ostream & out) -> int
{
    if (max < 0)
        throw UsageError("--max must be non-negative");
    auto fam = parse_family(family);
    SearchOptions opts;
    opts.nef_filter = nef;
    opts.exec = parallel ? Execution::Parallel : Execution::Serial;
    auto results = sweep(fam, max, max, max, opts);
    std::size_t mismatches = 0;
    Json rows = Json::array();
    for (const auto & r : results) {
        rows.push_back(to_json(make_family(r.params), r));
        mismatches += r.count != expected_count(r.params);
    }
    if (json) {
        out << dump({{"results", rows}, {"mismatches", mismatches}});
        return 0;
    }
    out << std::left << std::setw(12) << "graph" << std::right << std::setw(6) << "count" << std::setw(9) << "expected" << std::setw(7) << "match"
        << std::setw(8) << "placed" << "  " << std::left << std::setw(16) << "D" << "placements\n";
    for (const auto & r : results) {
        auto gamma = make_family(r.params);
        auto exp = expected_count(r.params);
        out << std::left << std::setw(12) << to_string(r.params) << std::right << std::setw(6) << r.count << std::setw(9) << exp << std::setw(7)
            << (r.count == exp ? "yes" : "NO") << std::setw(8) << r.placements.size() << "  " << std::left << std::setw(16) << factors_text(r.group);
        for (std::size_t i = 0; i < r.placements.size(); ++i)
            out << (i ? " | " : "") << placement_text(gamma, r.placements[i]);
        out << '\n';
    }
    out << results.size() << " graphs, " << mismatches << " mismatches against the expected counts\n";
    return 0;
}

} // namespace

auto run(const std::vector<std::string> & args, std::ostream & out, std::ostream & err) -> int
{
    CLI::App app{"Rational homology disk smoothings: graphs, invariants and blow-down search"};
    app.name("qhd");
    app.require_subcommand(1);
    bool json = false;
    bool parallel = false;
    app.add_flag("--json", json, "Print JSON instead of text");
    app.add_flag("--parallel", parallel, "Use OpenMP where available");

    std::string family, file, output, placement;
    int p = 0, q = 0, r = 0, max = 1;
    bool self_iso = false, nef = false;
    std::optional<std::size_t> extras;

    auto * gen = app.add_subcommand("gen", "Write the graph of W, N or M (p, q, r)");
    gen->add_option("family", family, "W, N or M")->required();
    gen->add_option("p", p)->required();
    gen->add_option("q", q)->required();
    gen->add_option("r", r)->required();
    gen->add_option("-o,--output", output, "Output file (default stdout)");

    auto * inv = app.add_subcommand("invariants", "Determinants, canonical coefficients and star invariants");
    inv->add_option("file", file, "Graph JSON")->required();

    auto * disc = app.add_subcommand("disc", "Discriminant group and pairing");
    disc->add_option("file", file, "Graph JSON")->required();
    disc->add_flag("--self-isotropic", self_iso, "List self-isotropic subgroups");

    auto * bd = app.add_subcommand("blowdown", "Verify one placement of -1 curves");
    bd->add_option("file", file, "Graph JSON")->required();
    bd->add_option("--placement", placement, "Placement JSON")->required();

    auto * search = app.add_subcommand("search", "All verified placements of -1 curves");
    search->add_option("file", file, "Graph JSON")->required();
    search->add_option("--extras", extras, "Number of -1 curves (default from K^2)");
    search->add_flag("--nef-filter", nef, "Prune candidates with nef certificates");

    auto * sw = app.add_subcommand("sweep", "Classify a family over 0..max in each parameter");
    sw->add_option("family", family, "W, N or M")->required();
    sw->add_option("--max", max, "Largest parameter")->required();
    sw->add_flag("--nef-filter", nef, "Prune candidates with nef certificates");

    for (auto * sub : {gen, inv, disc, bd, search, sw}) {
        sub->add_flag("--json", json, "Print JSON instead of text");
        sub->add_flag("--parallel", parallel, "Use OpenMP where available");
    }

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError & e) {
        err << "qhd: " << e.what() << '\n';
        return 2;
    }

    try {
        if (*gen)
            return cmd_gen(family, p, q, r, output, out);
        if (*inv)
            return cmd_invariants(file, json, out);
        if (*disc)
            return cmd_disc(file, self_iso, parallel, json, out);
        if (*bd)
            return cmd_blowdown(file, placement, json, out);
        if (*search)
            return cmd_search(file, extras, nef, parallel, json, out);
        if (*sw)
            return cmd_sweep(family, max, nef, parallel, json, out);
    } catch (const DomainError & e) {
        err << "qhd: " << e.what() << '\n';
        return 1;
    } catch (const InconsistencyError & e) {
        err << "qhd: internal inconsistency: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument & e) {
        err << "qhd: " << e.what() << '\n';
        return 2;
    } catch (const UsageError & e) {
        err << "qhd: " << e.what() << '\n';
        return 2;
    }
    err << "qhd: no subcommand\n";
    return 2;
}

} // namespace qhd::cli
