#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sepbell/cli.hpp"
#include "sepbell/expression.hpp"

using namespace sepbell;

namespace {

struct RunResult {
    int code = 0;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
    return std::string("cli_test_") + name;
}

} // namespace

TEST_CASE("ineq build emits parseable documents") {
    const auto sep = run_cli({"ineq", "build", "sep", "--parties", "ABC"});
    REQUIRE(sep.code == 0);
    const auto parsed = expression_from_json(sep.out);
    REQUIRE(std::holds_alternative<BellExpression>(parsed));
    CHECK(std::get<BellExpression>(parsed).terms.size() == 4);

    const auto zg = run_cli({"ineq", "build", "zg", "--d", "3", "--swapped"});
    REQUIRE(zg.code == 0);
    CHECK(std::get<BellExpression>(expression_from_json(zg.out)).scenario.n_outcomes == 3);

    const auto mono = run_cli({"ineq", "build", "monogamy", "--preset", "full4_4party"});
    REQUIRE(mono.code == 0);
    CHECK(std::get<MonogamyExpression>(expression_from_json(mono.out)).summands.size() == 4);
}

TEST_CASE("bound lr and ns run end to end through files") {
    const std::string ineq_path = temp_path("eq2.json");
    REQUIRE(run_cli({"ineq", "build", "sep", "--out", ineq_path}).code == 0);

    const std::string opt_path = temp_path("opt.json");
    const auto lr = run_cli({"bound", "lr", "--ineq", ineq_path, "--optimizer-out", opt_path});
    REQUIRE(lr.code == 0);
    const auto lr_json = nlohmann::json::parse(lr.out);
    CHECK(lr_json["value"].get<double>() == doctest::Approx(0.0));
    CHECK(lr_json["method"] == "brute_force");
    CHECK(lr_json["optimizer_path"] == opt_path);
    {
        std::ifstream f(opt_path);
        REQUIRE(f.good());
        std::stringstream ss;
        ss << f.rdbuf();
        CHECK_NOTHROW(behavior_from_json(ss.str()));
    }

    const auto ns = run_cli({"bound", "ns", "--ineq", ineq_path, "--optimizer-out", opt_path});
    REQUIRE(ns.code == 0);
    const auto ns_json = nlohmann::json::parse(ns.out);
    CHECK(ns_json["value"].get<double>() == doctest::Approx(-1.0).epsilon(1e-7));
    CHECK(ns_json["method"] == "lp");

    const auto exact = run_cli({"bound", "ns", "--preset", "primary_ABC_ABD", "--exact",
                                "--optimizer-out", opt_path});
    REQUIRE(exact.code == 0);
    const auto exact_json = nlohmann::json::parse(exact.out);
    CHECK(exact_json["exact"] == "0");

    std::remove(ineq_path.c_str());
    std::remove(opt_path.c_str());
}

TEST_CASE("monogamy check passes for the primary preset") {
    const auto r = run_cli({"monogamy", "check", "primary_ABC_ABD"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("at most one summand violable") != std::string::npos);
}

TEST_CASE("quantum eval prints the known values") {
    const auto qubit = run_cli({"quantum", "eval", "--n", "3"});
    REQUIRE(qubit.code == 0);
    CHECK(std::stod(qubit.out) == doctest::Approx(-1.0).epsilon(1e-9));

    const auto qudit = run_cli({"quantum", "eval", "--d", "2"});
    REQUIRE(qudit.code == 0);
    CHECK(std::stod(qudit.out) == doctest::Approx(-0.25).epsilon(1e-9));

    CHECK(run_cli({"quantum", "eval"}).code == 2);
    CHECK(run_cli({"quantum", "eval", "--n", "3", "--d", "2"}).code == 2);
}

TEST_CASE("figure3 writes the sweep as CSV") {
    const std::string csv_path = temp_path("fig3.csv");
    const auto r = run_cli({"figure3", "--dmin", "2", "--dmax", "6", "--out", csv_path});
    REQUIRE(r.code == 0);
    std::ifstream f(csv_path);
    REQUIRE(f.good());
    std::string header;
    std::getline(f, header);
    CHECK(header == "d,value");
    int rows = 0;
    for (std::string line; std::getline(f, line);) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == 5);
    std::remove(csv_path.c_str());
}

TEST_CASE("verify chains validates the built-ins and rejects broken files") {
    const auto builtin = run_cli({"verify", "chains"});
    REQUIRE(builtin.code == 0);
    CHECK(builtin.out.find("INVALID") == std::string::npos);

    const std::string proof_path = temp_path("proof.txt");
    {
        std::ofstream f(proof_path);
        f << "SEP C2 ; A1B2 ; D2\nTARGET +A1B2C2 / +A1B2D2 / -C2D1\n"; // wrong bridge
    }
    const auto broken = run_cli({"verify", "chains", "--file", proof_path});
    CHECK(broken.code == 1);
    CHECK(broken.out.find("INVALID") != std::string::npos);
    std::remove(proof_path.c_str());
}

TEST_CASE("usage and input errors exit 2 with JSON on stderr") {
    const auto unknown = run_cli({"bound", "ns", "--preset", "not_a_preset"});
    CHECK(unknown.code == 2);
    const auto err = nlohmann::json::parse(unknown.err);
    CHECK(err.contains("error"));

    CHECK(run_cli({"nonsense"}).code == 2);
    CHECK(run_cli({"bound", "ns"}).code == 2); // neither --ineq nor --preset
    CHECK(run_cli({"bound", "ns", "--ineq", "missing_file.json"}).code == 2);
}
