#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sbfem/study.hpp"

using namespace sbfem;

namespace {

struct Outcome {
    int code;
    std::string out, err;
};

Outcome run_config(const RunConfig& c)
{
    std::ostringstream out, err;
    int code = run(c, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<double>> data_rows(const std::string& csv)
{
    std::vector<std::vector<double>> rows;
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);  // header
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ','))
            row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST_CASE("integer lists")
{
    CHECK(parse_int_list("3") == std::vector<int>{3});
    CHECK(parse_int_list("1..4") == std::vector<int>{1, 2, 3, 4});
    CHECK(parse_int_list("1,3,5") == std::vector<int>{1, 3, 5});
    CHECK_THROWS_AS(parse_int_list("4..1"), ConfigError);
    CHECK_THROWS_AS(parse_int_list("a"), ConfigError);
    CHECK_THROWS_AS(parse_int_list(""), ConfigError);
}

TEST_CASE("config JSON")
{
    RunConfig c = parse_config_json(R"({"command": "convergence", "mesh": "hex", "k": [1, 2], "levels": "1..3",
                                        "problem": "exp3d", "threads": 1, "facet_order": 12})");
    CHECK(c.command == "convergence");
    CHECK(c.mesh == "hex");
    CHECK(c.k == std::vector<int>{1, 2});
    CHECK(c.levels == std::vector<int>{1, 2, 3});
    CHECK(c.problem == "exp3d");
    CHECK(c.threads == 1);
    CHECK(c.quadrature.facet_order == 12);
    RunConfig single = parse_config_json(R"({"command": "solve", "k": 2, "level": 1})");
    CHECK(single.k == std::vector<int>{2});
    CHECK(single.levels == std::vector<int>{1});
    CHECK_THROWS_AS(parse_config_json(R"({"command": "solve", "colour": 1})"), ConfigError);
    CHECK_THROWS_AS(parse_config_json("{"), ConfigError);
    CHECK_THROWS_AS(parse_config_json(R"({"k": "two"})"), ConfigError);
}

TEST_CASE("modes of the single square")
{
    RunConfig c;
    c.command = "modes";
    c.mesh = "single-square";
    c.k = {1};
    Outcome o = run_config(c);
    REQUIRE(o.code == 0);
    CHECK(o.out.rfind("re,im,selected\n", 0) == 0);
    std::vector<double> selected;
    auto rows = data_rows(o.out);
    CHECK(rows.size() == 8);
    for (const auto& r : rows)
        if (r[2] == 1.0)
            selected.push_back(r[0]);
    REQUIRE(selected.size() == 4);
    const double expected[] = {0, 1, 1, 2};
    for (int i = 0; i < 4; ++i)
        CHECK(std::abs(selected[i] - expected[i]) < 1e-8);
}

TEST_CASE("solve with constant data reports zero errors")
{
    RunConfig c;
    c.command = "solve";
    c.mesh = "quad";
    c.levels = {1};
    c.k = {1};
    c.problem = "const";
    Outcome o = run_config(c);
    REQUIRE(o.code == 0);
    auto rows = data_rows(o.out);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0][2] == 25);
    CHECK(rows[0][3] < 1e-12);
    CHECK(rows[0][4] < 1e-12);
}

TEST_CASE("exit codes")
{
    RunConfig c;
    c.command = "convergence";
    c.levels = {1};
    CHECK(run_config(c).code == 2);
    c.command = "teleport";
    CHECK(run_config(c).code == 2);
    c.command = "solve";
    c.k = {0};
    CHECK(run_config(c).code == 2);
    c.k = {1};
    c.mesh = "torus";
    Outcome o = run_config(c);
    CHECK(o.code == 1);
    CHECK(o.err.find('\n') == o.err.size() - 1);
    c.mesh = "quad";
    c.problem = "exp3d";
    CHECK(run_config(c).code == 1);
}

TEST_CASE("output is deterministic across thread counts")
{
    RunConfig c;
    c.command = "convergence";
    c.mesh = "polygon1";
    c.levels = {0, 1, 2};
    c.k = {2};
    c.threads = 1;
    Outcome a = run_config(c);
    c.threads = 4;
    Outcome b = run_config(c);
    Outcome again = run_config(c);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(b.out == again.out);
    CHECK(a.out.find("# rate_l2=") != std::string::npos);
}
