#include <qhd/cli.hpp>
#include <qhd/io.hpp>

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace qhd;
namespace fs = std::filesystem;

namespace {

struct Run {
    int status;
    std::string out;
    std::string err;
};

auto run(std::vector<std::string> args) -> Run
{
    std::ostringstream out, err;
    int status = cli::run(args, out, err);
    return {status, out.str(), err.str()};
}

auto scratch() -> fs::path
{
    static fs::path dir = [] {
        auto d = fs::temp_directory_path() / ("qhd_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

auto write(const std::string & name, const std::string & text) -> std::string
{
    auto path = scratch() / name;
    std::ofstream(path) << text;
    return path.string();
}

auto gen(const std::string & fam, int p, int q, int r) -> std::string
{
    auto path = (scratch() / (fam + std::to_string(p) + std::to_string(q) + std::to_string(r) + ".json")).string();
    REQUIRE(run({"gen", fam, std::to_string(p), std::to_string(q), std::to_string(r), "-o", path}).status == 0);
    return path;
}

const char * single_minus_one = R"({"curves":[{"id":0,"self":-1,"label":"C"}],"points":[]})";

const char * singular_chain = R"({"curves":[{"id":0,"self":-2},{"id":1,"self":-1},{"id":2,"self":-2}],
  "points":[{"id":0,"incident":[0,1]},{"id":1,"incident":[1,2]}]})";

} // namespace

TEST_CASE("gen output round-trips byte for byte")
{
    for (const auto * fam : {"W", "N", "M"}) {
        auto r = run({"gen", fam, "1", "2", "0"});
        REQUIRE(r.status == 0);
        auto parsed = config_from_json(Json::parse(r.out));
        CHECK(dump(to_json(parsed)) == r.out);
        CHECK(parsed == make_family({parse_family(fam), 1, 2, 0}));
    }
    auto path = gen("W", 0, 0, 0);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == run({"gen", "W", "0", "0", "0"}).out);
}

TEST_CASE("rationals are written as a/b")
{
    auto r = run({"invariants", gen("W", 1, 0, 0), "--json"});
    REQUIRE(r.status == 0);
    auto j = Json::parse(r.out);
    CHECK(j["k"]["E0"].get<std::string>().find('/') != std::string::npos);
    CHECK(parse_rational(j["beta"].get<std::string>()) < 0);
}

TEST_CASE("invariants flags the log-canonical graph")
{
    auto path = gen("W", 0, 0, 0);
    auto text = run({"invariants", path});
    REQUIRE(text.status == 0);
    CHECK(text.out.find("log-canonical") != std::string::npos);
    CHECK(text.out.find("81") != std::string::npos);

    auto j = Json::parse(run({"invariants", path, "--json"}).out);
    CHECK(j["log_canonical"] == true);
    CHECK(j["beta"] == "0/1");
    CHECK(j["det_direct"] == "81");
    CHECK(j["det_formula"] == "81");
    CHECK(j["bounds_ok"] == true);
    CHECK(j["anticanonical_identity"] == true);
    CHECK(j["k"]["E0"] == "-1/1");

    auto other = Json::parse(run({"--json", "invariants", gen("M", 3, 2, 1)}).out);
    CHECK(other["log_canonical"] == false);
}

TEST_CASE("disc on a unimodular graph gives the trivial group")
{
    auto path = write("one.json", single_minus_one);
    auto r = run({"disc", path, "--self-isotropic"});
    REQUIRE(r.status == 0);
    CHECK(r.out.find("trivial") != std::string::npos);
    auto j = Json::parse(run({"disc", path, "--self-isotropic", "--json"}).out);
    CHECK(j["group"]["order"] == "1");
    CHECK(j["self_isotropic"].size() == 1);
}

TEST_CASE("disc on W(0,0,0)")
{
    auto j = Json::parse(run({"disc", gen("W", 0, 0, 0), "--self-isotropic", "--json", "--parallel"}).out);
    CHECK(j["group"]["invariant_factors"] == Json::array({3, 27}));
    CHECK(j["self_isotropic"].size() == 2);
    for (const auto & h : j["self_isotropic"])
        CHECK(h["order"] == "9");
}

TEST_CASE("blowdown accepts the basic placement and rejects a chain-end pairing")
{
    auto w = gen("W", 0, 0, 0);
    auto good = write("good.json", R"({"extras":[{"attach":[1,4]},{"attach":[2,5]},{"attach":[3,6]}]})");
    auto r = run({"blowdown", w, "--placement", good});
    REQUIRE(r.status == 0);
    CHECK(r.out.find("accepted: 6 contractions") != std::string::npos);
    auto j = Json::parse(run({"blowdown", w, "--placement", good, "--json"}).out);
    CHECK(j["verified"] == true);
    CHECK(j["record"]["steps"].size() == 6);
    CHECK(j["record"]["k_squared"] == 3);
    CHECK(j["record"]["pic_basis"].size() == 10);

    // P2 -- R2 joins two chain ends
    auto bad = write("bad.json", R"({"extras":[{"attach":[1,4]},{"attach":[2,6]},{"attach":[3,5]}]})");
    auto rb = run({"blowdown", w, "--placement", bad});
    CHECK(rb.status == 0);
    CHECK(rb.out.find("rejected") != std::string::npos);
}

TEST_CASE("search lists both W(1,1,1) surfaces")
{
    auto r = run({"search", gen("W", 1, 1, 1)});
    REQUIRE(r.status == 0);
    CHECK(r.out.find("distinct surfaces 2") != std::string::npos);
    auto j = Json::parse(run({"search", gen("W", 1, 1, 1), "--json", "--nef-filter"}).out);
    CHECK(j["count"] == 2);
    CHECK(j["placements"].size() == 2);

    auto none = run({"search", write("one.json", single_minus_one)});
    CHECK(none.status == 0);
    CHECK(none.out.find("no placements found") != std::string::npos);
}

TEST_CASE("sweep W --max 1")
{
    auto r = run({"sweep", "W", "--max", "1"});
    REQUIRE(r.status == 0);
    CHECK(r.out.find("0 mismatches") != std::string::npos);
    auto j = Json::parse(run({"sweep", "W", "--max", "1", "--json"}).out);
    REQUIRE(j["results"].size() == 8);
    for (const auto & row : j["results"]) {
        // (1,1,1) is in range too
        bool sym = row["p"] == row["q"] && row["q"] == row["r"];
        CHECK(row["count"] == (sym ? 2 : 1));
        CHECK(row["match"] == true);
    }
    // text table is deterministic
    CHECK(run({"sweep", "W", "--max", "1"}).out == r.out);
    CHECK(run({"sweep", "W", "--max", "1", "--parallel"}).out == r.out);
}

TEST_CASE("exit statuses")
{
    auto w = gen("W", 0, 0, 0);
    auto singular = write("singular.json", singular_chain);
    auto malformed = write("malformed.json", "{\"curves\": [");
    auto wrong_type = write("wrong_type.json", R"({"curves":[{"id":"zero","self":-1}]})");
    auto dangling = write("dangling.json", R"({"curves":[{"id":0,"self":-1}],"points":[{"id":0,"incident":[0,7]}]})");
    auto unknown_curve = write("unknown.json", R"({"extras":[{"attach":[1,99]}]})");

    struct Case {
        std::vector<std::string> args;
        int status;
    };
    std::vector<Case> cases{
        {{}, 2},
        {{"frobnicate"}, 2},
        {{"gen", "X", "0", "0", "0"}, 2},
        {{"gen", "W", "-1", "0", "0"}, 2},
        {{"gen", "W", "0", "0"}, 2},
        {{"gen", "W", "a", "0", "0"}, 2},
        {{"invariants", (scratch() / "missing.json").string()}, 2},
        {{"invariants", malformed}, 2},
        {{"invariants", wrong_type}, 2},
        {{"invariants", dangling}, 2},
        {{"invariants", singular}, 1},
        {{"disc", singular}, 1},
        {{"search", singular}, 1},
        {{"blowdown", w}, 2},
        {{"blowdown", w, "--placement", unknown_curve}, 2},
        {{"sweep", "W"}, 2},
        {{"sweep", "W", "--max", "-1"}, 2},
        {{"sweep", "Q", "--max", "1"}, 2},
        {{"invariants", w}, 0},
        {{"--help"}, 0},
    };
    for (const auto & c : cases) {
        auto r = run(c.args);
        std::string joined;
        for (const auto & a : c.args)
            joined += a + ' ';
        INFO("args: ", joined);
        CHECK(r.status == c.status);
        if (c.status != 0)
            CHECK_FALSE(r.err.empty());
    }

    ::setenv("QHD_SUBGROUP_LIMIT", "10", 1);
    CHECK(run({"disc", w, "--self-isotropic"}).status == 1);
    ::unsetenv("QHD_SUBGROUP_LIMIT");
    CHECK(run({"disc", w, "--self-isotropic"}).status == 0);
}
