#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result obl_run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = obl::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(OBL_DATA_DIR) + "/" + name; }

fs::path scratch() {
    const auto d = fs::temp_directory_path() / "obl_test_cli";
    fs::create_directories(d);
    return d;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    for (std::string line; std::getline(is, line);) {
        std::vector<std::string> f;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
        rows.push_back(f);
    }
    return rows;
}

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++n;
    return n;
}

/// Section of an SVG between `<g id="name"` and its closing tag.
std::string layer(const std::string& svg, const std::string& name) {
    const auto a = svg.find("<g id=\"" + name + "\"");
    if (a == std::string::npos) return {};
    return svg.substr(a, svg.find("</g>", a) - a);
}

const std::regex decimal(R"([0-9]\.[0-9]|[0-9][eE][-+]?[0-9])");

}  // namespace

TEST_CASE("orbit on the square returns to its start after four steps") {
    const auto r = obl_run({"orbit", "--table", data("square.json"), "--point", "3/10,-2/5", "--steps", "4", "--mode",
                            "exact"});
    REQUIRE(r.code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 6);
    CHECK(rows[0] == std::vector<std::string>{"k", "x", "y", "tx", "ty"});
    CHECK(rows[5][1] == rows[1][1]);
    CHECK(rows[5][2] == rows[1][2]);
    CHECK(rows[1][1] == "3/10");
    CHECK(rows[2][1] == "17/10");
    CHECK_FALSE(std::regex_search(r.out, decimal));
}

TEST_CASE("scan4 verdicts and --expect") {
    CHECK(obl_run({"scan4", "--table", data("quad.json"), "--expect", "empty-interior"}).code == 0);
    CHECK(obl_run({"scan4", "--table", data("quad.json"), "--expect", "open-period-4-set"}).code == 1);
    CHECK(obl_run({"scan4", "--table", data("square.json"), "--expect", "open-period-4-set"}).code == 0);
    CHECK(obl_run({"scan4", "--table", data("parallelogram.json"), "--expect", "open-period-4-set"}).code == 0);

    const auto r = obl_run({"scan4", "--table", data("square.json")});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["verdict"] == "open-period-4-set");
    CHECK(j["region"].is_array());
    CHECK(j["region"].size() == 2);
    CHECK_FALSE(j["zero_translation"].empty());
    CHECK_FALSE(std::regex_search(r.out, decimal));
}

TEST_CASE("verify reports the twelve-term match") {
    const auto r = obl_run({"verify", "--suite", "all"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["all_pass"].get<bool>());
    bool seen = false;
    for (const auto& c : j["checks"])
        if (c["name"] == "compatibility_polynomial") {
            seen = true;
            CHECK(c["terms"].size() == 12);
        }
    CHECK(seen);
    CHECK(obl_run({"verify", "--suite", "bogus"}).code == 2);
}

TEST_CASE("exit codes") {
    CHECK(obl_run({}).code == 2);
    CHECK(obl_run({"frobnicate"}).code == 2);
    CHECK(obl_run({"orbit", "--point", "0,0"}).code == 2);
    CHECK(obl_run({"step", "--table", data("missing.json"), "--point", "3,0"}).code == 2);
    CHECK(obl_run({"step", "--table", data("square.json"), "--point", "1/2,x"}).code == 2);
    // Interior point.
    CHECK(obl_run({"step", "--table", data("square.json"), "--point", "1/2,1/2"}).code == 2);
    // On the extension of the bottom edge.
    CHECK(obl_run({"step", "--table", data("square.json"), "--point=-1,0"}).code == 3);
    CHECK(obl_run({"measure", "--table", data("square.json"), "--samples", "0"}).code == 2);

    const auto r = obl_run({"step", "--table", data("square.json"), "--point", "3,1/2"});
    REQUIRE(r.code == 0);
    CHECK(r.out == "-1,3/2\n");
}

TEST_CASE("float tables and exact mode") {
    const auto circ = obl_run({"step", "--table", data("circle.json"), "--point", "2,0"});
    CHECK(circ.code == 0);
    CHECK(obl_run({"step", "--table", data("circle.json"), "--point", "2,0", "--mode", "exact"}).code == 2);

    const auto dec = obl_run({"step", "--table", data("square.json"), "--point", "0.3,-0.4", "--mode", "exact"});
    REQUIRE(dec.code == 0);
    CHECK(dec.out == "17/10,2/5\n");
    CHECK_FALSE(std::regex_search(dec.out, decimal));
}

TEST_CASE("measure reports and --expect") {
    const std::vector<std::string> args{"measure", "--table",  data("square.json"), "--region", "disk",
                                        "--center", "0.5,-0.5", "--radius",         "0.1",      "--samples",
                                        "200",      "--expect", "positive"};
    const auto r = obl_run(args);
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["fraction"] == "1");
    CHECK(j["periodic"] == 200);
    CHECK_FALSE(std::regex_search(r.out, decimal));

    const auto f = obl_run({"measure", "--table", data("quad.json"), "--mode", "float", "--samples", "20000", "--tol",
                            "1e-9", "--expect", "zero"});
    CHECK(f.code == 0);
    CHECK(nlohmann::json::parse(f.out)["fraction"] == 0.0);
    CHECK(obl_run({"measure", "--table", data("quad.json"), "--mode", "float", "--samples", "2000", "--expect",
                   "positive"})
              .code == 1);
}

TEST_CASE("family-check") {
    const auto r = obl_run({"family-check", "--square", "0.3,-0.5", "--radius", "0.05", "--grid", "5",
                            "--expect-integral"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    for (const auto& u : j["u"]) CHECK(std::abs(u.get<double>() - 1.0) <= 1e-8);
    CHECK(j["theta_residual_max"] == 0.0);

    // The grid centre (1/2, -1/2) lies on both lines where the determinant vanishes.
    const auto d = nlohmann::json::parse(
        obl_run({"family-check", "--square", "0.5,-0.5", "--radius", "0.05", "--grid", "3"}).out);
    CHECK(d["case"][4] == "deg_D");
    CHECK(d["v"][4].is_null());
    CHECK(d["case"][1] == "generic");
}

TEST_CASE("every subcommand is byte-identical on repeat") {
    const std::vector<std::vector<std::string>> runs{
        {"orbit", "--table", data("quad.json"), "--point", "7/3,-5/7", "--steps", "40"},
        {"scan4", "--table", data("parallelogram.json")},
        {"measure", "--table", data("square.json"), "--samples", "3000", "--seed", "5"},
        {"measure", "--table", data("ellipse.json"), "--samples", "3000", "--seed", "5"},
        {"family-check", "--square", "0.3,-0.5", "--radius", "0.05", "--grid", "7", "--family", "warped"},
        {"verify"},
        {"render", "--table", data("square.json"), "--singular", "2"},
    };
    for (const auto& args : runs) {
        INFO(args[0]);
        const auto a = obl_run(args);
        const auto b = obl_run(args);
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
        CHECK_FALSE(a.out.empty());
    }
}

TEST_CASE("render") {
    const auto dir = scratch();
    const auto orb = (dir / "orbit.csv").string();
    const auto scan = (dir / "scan.json").string();
    const auto svg = (dir / "out.svg").string();
    REQUIRE(obl_run({"orbit", "--table", data("square.json"), "--point", "3/10,-2/5", "--out", orb}).code == 0);
    REQUIRE(obl_run({"scan4", "--table", data("square.json"), "--out", scan}).code == 0);

    SUBCASE("orbit of length 5") {
        const auto r = obl_run({"render", "--table", data("square.json"), "--orbit", orb});
        REQUIRE(r.code == 0);
        const auto g = layer(r.out, "orbit");
        const auto at = g.find("points=\"");
        REQUIRE(at != std::string::npos);
        const auto pts = g.substr(at + 8, g.find('"', at + 8) - at - 8);
        CHECK(count(pts, " ") + 1 == 5);
        CHECK(count(g, "<circle") == 5);
        CHECK(count(g, "<rect") == 5);
        CHECK(count(r.out, "tangency points") == 1);
    }
    SUBCASE("scan cells and singular lines") {
        REQUIRE(obl_run({"render", "--table", data("square.json"), "--scan", scan, "--singular", "1", "--out", svg})
                    .code == 0);
        std::ifstream f(svg);
        const std::string s((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
        const auto cells = nlohmann::json::parse(std::ifstream(scan))["zero_translation"].size();
        CHECK(count(layer(s, "cells"), "<polygon") == cells);
        CHECK(count(layer(s, "singular"), "<line") > 0);
        CHECK(count(layer(s, "table"), "<polygon") == 1);
        // Cells are drawn beneath the table.
        CHECK(s.find("id=\"cells\"") < s.find("id=\"table\""));
    }
    SUBCASE("table only") {
        const auto r = obl_run({"render", "--table", data("square.json")});
        REQUIRE(r.code == 0);
        CHECK(count(r.out, "<polygon") == 1);
        CHECK(layer(r.out, "orbit").empty());
        CHECK(layer(r.out, "cells").empty());
        CHECK(layer(r.out, "singular").empty());
        CHECK(count(layer(r.out, "legend"), "<text") == 1);

        const auto e = obl_run({"render", "--table", data("ellipse.json")});
        CHECK(count(e.out, "<ellipse") == 1);
    }
    SUBCASE("malformed inputs") {
        const auto bad = (dir / "bad.csv").string();
        std::ofstream(bad) << "nonsense\n";
        CHECK(obl_run({"render", "--table", data("square.json"), "--orbit", bad}).code == 2);
        CHECK(obl_run({"render", "--table", data("square.json"), "--scan", bad}).code == 2);
        CHECK(obl_run({"render", "--table", data("ellipse.json"), "--singular", "1"}).code == 2);
    }
}
