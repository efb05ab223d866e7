// Command-line behaviour. The first argument is the path of gffads-cli.
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gffads/errors.hpp"
#include "gffads/suites.hpp"

namespace {

std::string cli;

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    Run r;
    std::string cmd = "'" + cli + "' " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::vector<std::vector<std::string>> csv(const std::string& s) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

std::string writeFile(const std::string& name, const std::string& body) {
    std::ofstream(name) << body;
    return name;
}

} // namespace

TEST_CASE("compute prints one JSON object") {
    auto r = run("compute gamma x=5");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["quantity"] == "gamma");
    CHECK(j["value"][0].get<double>() == doctest::Approx(24.0).epsilon(1e-14));
    auto c = run("compute gamma --param x=0.5 --format csv");
    REQUIRE(c.code == 0);
    auto rows = csv(c.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0][0] == "value_re");
    CHECK(std::stod(rows[1][0]) == doctest::Approx(std::sqrt(3.14159265358979323846)).epsilon(1e-14));
}

TEST_CASE("bonus locality outside the triangle is consistent with zero") {
    auto r = run("compute bonusLocality a=0.3 b=1 c=1.4");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(std::abs(j["value"][0].get<double>()) < 1e-5);
    CHECK(run("compute bonusLocality a=0.405 b=1 c=1.4").code == 2);
}

TEST_CASE("ads2pt at two points of equal chordal distance") {
    // (z, z', x) = (1, 2, 1) and (2, 4, 2): a dilation pair
    auto r = run("compute ads2pt nu=0.5 z=1 zp=2 x1=1 z2=2 zp2=4 y1=2");
    REQUIRE(r.code == 0);
    auto j = nlohmann::json::parse(r.out);
    double v = j["value"][0].get<double>(), ref = j["reference"][0].get<double>();
    CHECK(std::abs(v - ref) < 1e-9 * std::abs(ref));
}

TEST_CASE("scans") {
    auto e = run("scan gff2pt --axis x1:1:2:0");
    CHECK(e.code == 0);
    CHECK(csv(e.out).size() == 1);
    // power weight of order 1/2: slope -3 in x1 at equal time
    auto s = run("scan gff2pt --axis x1:1:8:4:log h1=power:0.5");
    REQUIRE(s.code == 0);
    auto rows = csv(s.out);
    REQUIRE(rows.size() == 5);
    for (std::size_t i = 2; i < rows.size(); ++i) {
        double x0 = std::stod(rows[i - 1][0]), x1 = std::stod(rows[i][0]);
        double v0 = std::stod(rows[i - 1][1]), v1 = std::stod(rows[i][1]);
        CHECK(std::log(v1 / v0) / std::log(x1 / x0) == doctest::Approx(-3.0).epsilon(1e-8));
    }
    auto b = run("scan boundaryLimit --axis z:0.1:0.001:5:log nu=0.5 --format json");
    REQUIRE(b.code == 0);
    auto j = nlohmann::json::parse(b.out);
    double prev = 1e300;
    for (const auto& row : j["rows"]) {
        double d = std::abs(row["value"][0].get<double>() - row["reference"][0].get<double>());
        CHECK(d < prev);
        prev = d;
    }
}

TEST_CASE("usage and configuration errors exit with 2") {
    CHECK(run("compute nope").code == 2);
    CHECK(run("compute gamma x=5 y=1").code == 2);
    CHECK(run("compute gamma x=5 --format xml").code == 2);
    CHECK(run("verify nope").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("scan gff2pt --axis x1:1:2").code == 2);
    auto bad = writeFile("cli_bad.json", "{ \"seed\": 1, ");
    CHECK(run("verify specfun --config " + bad).code == 2);
    auto unknown = writeFile("cli_unknown.json", "{\"sed\": 1}");
    CHECK(run("verify specfun --config " + unknown).code == 2);
    auto guard = writeFile("cli_guard.json", "{\"locality\": {\"a\": 0.401, \"b\": 1.0, \"c\": 1.4}}");
    CHECK(run("verify locality --config " + guard).code == 2);
    CHECK(run("verify specfun --config missing.json").code == 2);
}

TEST_CASE("verify is reproducible") {
    auto t0 = std::chrono::steady_clock::now();
    auto a = run("verify specfun --seed 7");
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(a.code == 0);
    CHECK(secs < 10);
    auto b = run("verify specfun --seed 7");
    CHECK(a.out == b.out);
    auto j = nlohmann::json::parse(a.out);
    CHECK(j["suite"] == "specfun");
    CHECK(j["pass"] == true);
    CHECK(!j["records"].empty());
    for (const auto& rec : j["records"]) CHECK(!rec.contains("runtime"));
    auto c = run("verify specfun --seed 7 --format csv");
    CHECK(c.code == 0);
    CHECK(csv(c.out).size() == j["records"].size() + 1);
    auto t = nlohmann::json::parse(run("verify specfun --timings").out);
    CHECK(t.contains("runtime"));
}

TEST_CASE("configuration round trip") {
    gffads::SuiteConfig c;
    c.seed = 99;
    c.locality_a = 0.25;
    c.fock_nodes = 320;
    c.tolerances["ccr"] = 5e-4;
    auto d = gffads::SuiteConfig::fromJson(c.toJson());
    CHECK(d.seed == 99);
    CHECK(d.locality_a == 0.25);
    CHECK(d.fock_nodes == 320);
    CHECK(d.tolerance("ccr") == 5e-4);
    CHECK(d.tolerance("gamma") == c.tolerance("gamma"));
    CHECK_THROWS_AS(gffads::SuiteConfig::fromJson(nlohmann::json::parse("{\"fock\": {\"nodes\": 4}}")).validate(),
                    gffads::ConfigError);
    gffads::SuiteConfig g;
    g.locality_a = 0.401;
    CHECK_THROWS_AS(g.validate(), gffads::LightConeProximity);
}

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: test_cli <path to gffads-cli> [doctest options]\n");
        return 2;
    }
    cli = argv[1];
    doctest::Context ctx;
    ctx.applyCommandLine(argc - 1, argv + 1);
    return ctx.run();
}
