#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "procoh/scenario.hpp"

using namespace procoh;

namespace {

std::string g_cli;  // path to the procoh binary, from argv

struct CliResult {
    int code = -1;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    REQUIRE(!g_cli.empty());
    std::string cmd = g_cli + " " + args + " 2>&1";
    FILE* f = popen(cmd.c_str(), "r");
    REQUIRE(f != nullptr);
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
    int status = pclose(f);
    return {WEXITSTATUS(status), out};
}

std::filesystem::path write_temp(const std::string& name,
                                 const std::string& content) {
    std::filesystem::path path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << content;
    return path;
}

}  // namespace

TEST_CASE("built-in scenarios") {
    Scenario g3 = builtin_scenario("gl2", 3);
    CHECK(g3.name == "gl2-p3");
    CHECK(g3.p == 3);
    CHECK(g3.ext.congruence);
    CHECK(g3.ext.rank == 4);
    CHECK(g3.fusion.size() == 4);
    CHECK(g3.expected_stable.size() == 4);
    // every differential is pinned to zero, so the run collapses
    CHECK(!g3.collapse);
    CHECK(scenario_collapses(g3));

    Scenario g5 = builtin_scenario("gl2", 5);
    CHECK(g5.p == 5);
    CHECK(!scenario_collapses(g5));
    CHECK(g5.expected_stable.size() == 8);

    Scenario ex = builtin_scenario("extraspecial3", 0);
    CHECK(ex.p == 3);
    CHECK(ex.ext.rank == 2);
    CHECK(ex.collapse);
    CHECK(scenario_collapses(ex));
    CHECK(!ex.expected_final_ring.empty());

    CHECK_THROWS_AS(builtin_scenario("gl2", 4), Error);
    CHECK_THROWS_AS(builtin_scenario("gl2", 11), Error);
    CHECK_THROWS_AS(builtin_scenario("nope", 3), Error);
}

TEST_CASE("scenario JSON round trip") {
    std::string text = R"({
      "name": "toy",
      "p": 3,
      "extension": {"type": "abelian", "sigma1": [[1, 1], [0, 1]]},
      "naming": "extraspecial",
      "collapse": true,
      "fusion": [{"name": "f", "domain": "kernel", "h1": [[1, 0], [0, 1]]}],
      "assumptions": [{"text": "collapse at page two", "tag": "assumption"}],
      "expected": {
        "stable_bidegrees": [[0, 1], [1, 0]],
        "depth": 4
      }
    })";
    std::filesystem::path path = write_temp("procoh_toy_scenario.json", text);
    Scenario s = load_scenario(path.string());
    CHECK(s.name == "toy");
    CHECK(s.p == 3);
    CHECK(!s.ext.congruence);
    CHECK(s.ext.rank == 2);
    CHECK(s.collapse);
    REQUIRE(s.fusion.size() == 1);
    CHECK(s.fusion[0].domain == FusionGenerator::Domain::kernel_only);
    CHECK(s.fusion[0].has_explicit_h1);
    REQUIRE(s.assumptions.size() == 1);
    CHECK(s.assumptions[0].tag == "assumption");
    CHECK(s.expected_stable ==
          std::vector<std::pair<int, int>>{{0, 1}, {1, 0}});
    CHECK(s.verify_depth == 4);

    // resolve_scenario prefers built-in names, falls back to paths
    CHECK(resolve_scenario("extraspecial3", 0).name == "extraspecial3");
    CHECK(resolve_scenario(path.string(), 0).name == "toy");
}

TEST_CASE("scenario loading rejects bad input") {
    CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), Error);

    std::filesystem::path garbled =
        write_temp("procoh_garbled_scenario.json", "not json at all");
    CHECK_THROWS_AS(load_scenario(garbled.string()), Error);

    std::filesystem::path missing = write_temp(
        "procoh_missing_scenario.json", R"({"name": "x", "p": 3})");
    CHECK_THROWS_AS(load_scenario(missing.string()), Error);

    std::filesystem::path even = write_temp(
        "procoh_even_scenario.json",
        R"({"name": "x", "p": 4,
            "extension": {"type": "abelian", "sigma1": []}})");
    CHECK_THROWS_AS(load_scenario(even.string()), Error);
}

TEST_CASE("jordan-table command matches the closed forms") {
    CliResult r = run_cli("jordan-table --p 3 --k 3");
    CHECK(r.code == 0);
    CHECK(r.out.find("n=0: 1") != std::string::npos);
    for (int n = 1; n <= 6; ++n)
        CHECK(r.out.find("n=" + std::to_string(n) + ": 0") != std::string::npos);

    r = run_cli("jordan-table --p 5 --k 3");
    CHECK(r.code == 0);
    for (int n = 0; n <= 6; ++n)
        CHECK(r.out.find("n=" + std::to_string(n) + ": 1") != std::string::npos);

    CHECK(run_cli("jordan-table --p 5 --k 7").code == 2);
    CHECK(run_cli("jordan-table --p 6 --k 2").code == 2);
    CHECK(run_cli("jordan-table --p 5").code == 2);
}

TEST_CASE("exit codes for scenario commands") {
    CHECK(run_cli("run --scenario gl2 --p 3 --verify").code == 0);
    CHECK(run_cli("run --scenario gl2 --p 11").code == 2);
    CHECK(run_cli("run --scenario /nonexistent.json").code == 2);
    CHECK(run_cli("bogus-subcommand").code == 2);
}

TEST_CASE("e2 json export mirrors the text table") {
    CliResult r = run_cli("e2 --scenario gl2 --p 3 --format json");
    REQUIRE(r.code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j["p"] == 3);
    CHECK(j["cells"]["0,1"] ==
          std::vector<std::string>{"y1", "y2"});
    CHECK(j["cells"]["1,2"].empty());
    CHECK(j["cells"]["2,0"] == std::vector<std::string>{"v"});

    CliResult t = run_cli("e2 --scenario gl2 --p 3");
    CHECK(t.out.find("n=0 m=1: y1, y2") != std::string::npos);
}

TEST_CASE("reports are byte-identical across runs") {
    for (const char* args :
         {"run --scenario gl2 --p 5", "e2 --scenario extraspecial3",
          "stable --scenario gl2 --p 3"}) {
        CliResult a = run_cli(args);
        CliResult b = run_cli(args);
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
        CHECK(!a.out.empty());
    }
}

TEST_CASE("provenance lists the consumed assumptions verbatim") {
    CliResult r = run_cli("run --scenario gl2 --p 3");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("[paper-asserted] d_2(y4) = 0") != std::string::npos);
    CHECK(r.out.find("[paper-asserted] d_r(y1) = d_r(uv) = d_r(v^2) = 0 "
                     "for all r >= 2") != std::string::npos);

    CliResult ex = run_cli("run --scenario extraspecial3");
    REQUIRE(ex.code == 0);
    CHECK(ex.out.find("[paper-asserted] the spectral sequence collapses at "
                      "the second page") != std::string::npos);
}

int main(int argc, char** argv) {
    std::vector<char*> pass{argv[0]};
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (g_cli.empty() && !a.empty() && a[0] != '-')
            g_cli = a;
        else
            pass.push_back(argv[i]);
    }
    doctest::Context ctx(static_cast<int>(pass.size()), pass.data());
    return ctx.run();
}
