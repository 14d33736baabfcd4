#include "spanforge/cli.hpp"
#include "spanforge/serialize.hpp"
#include "spanforge/version.hpp"

#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

using namespace spanforge;

namespace {

struct Run {
    int code = 0;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "spanforge");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Run r;
    r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

// t = e_0 in R^2; x_0 = 1 makes e_0 available, x_0 = 0 makes e_1 available.
const std::string kProgram =
    R"({"dim": 2, "num_vars": 1, "target": [1, 0], "labeled": [{"vec": [1, 0], "var": 0, "val": 1}, {"vec": [0, 1], "var": 0, "val": 0}]})";
const std::string kHighLevel = R"({"n": 2, "m": 2, "target": [1, 0]})";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("evaluate a low-level program") {
    const auto yes = run({"evaluate", "--program", kProgram, "--input", "1", "--format", "json"});
    REQUIRE(yes.code == 0);
    CHECK(Json::parse(yes.out)["results"]["decision"] == true);
    const auto no = run({"evaluate", "--program", kProgram, "--input", "0", "--format", "json"});
    CHECK(Json::parse(no.out)["results"]["decision"] == false);
}

TEST_CASE("evaluate through compilation") {
    const auto r = run({"evaluate", "--highlevel", kHighLevel, "--input", "[[0.5, 0], [0, 0.25]]",
                        "--mode", "sparse", "--bits", "2", "--knnz", "1", "--lnnz", "1", "--format",
                        "json"});
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["results"]["decision_highlevel"] == true);
    CHECK(j["results"]["decision_compiled"] == true);
}

TEST_CASE("witness sides") {
    const auto pos = run({"witness", "--program", kProgram, "--input", "1", "--format", "json"});
    REQUIRE(pos.code == 0);
    CHECK(Json::parse(pos.out)["results"]["size"] == 1.0);
    const auto infeasible =
        run({"witness", "--program", kProgram, "--input", "1", "--side", "negative"});
    CHECK(infeasible.code == 2);
    CHECK_FALSE(infeasible.err.empty());
    const auto bad_side = run({"witness", "--program", kProgram, "--input", "1", "--side", "both"});
    CHECK(bad_side.code == 1);
}

TEST_CASE("malformed input exits with status 1") {
    CHECK(run({"evaluate", "--program", "{broken", "--input", "1"}).code == 1);
    CHECK(run({"evaluate", "--program", kProgram, "--input", "10"}).code == 1);
    CHECK(run({"evaluate", "--program", kProgram, "--input", "2"}).code == 1);
    CHECK(run({"evaluate", "--program", kProgram}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"compile", "--highlevel", kHighLevel, "--mode", "diagonal"}).code == 1);
    const auto missing_seed = run({"rank-experiment", "--n", "2", "--trials", "5"});
    CHECK(missing_seed.code == 1);
    CHECK(missing_seed.err.find("seed") != std::string::npos);
    CHECK(run({"wishart-experiment", "--kind", "mystery", "--seed", "1"}).code == 1);
    CHECK(run({"ratio-experiment", "--sizes", "4,x", "--seed", "1"}).code == 1);
}

TEST_CASE("compile emits the program and its encoder") {
    const auto r = run({"compile", "--highlevel", kHighLevel, "--mode", "dense", "--bits", "1",
                        "--format", "json"});
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["results"]["program"]["encoder"]["mode"] == "dense");
}

TEST_CASE("reports embed the version and calibration") {
    const auto csv = run({"lowerbound-suite", "--format", "csv"});
    REQUIRE(csv.code == 0);
    CHECK(csv.out.find(std::string("# version=") + kVersion) != std::string::npos);
    CHECK(csv.out.find("# calibration.delta=") != std::string::npos);
    const auto json = run({"lowerbound-suite", "--format", "json"});
    const Json j = Json::parse(json.out);
    CHECK(j["version"] == kVersion);
    CHECK(j["calibration"] == calibration_json());
}

TEST_CASE("seeded experiments are byte-identical across reruns") {
    const std::vector<std::vector<std::string>> commands{
        {"rank-experiment", "--n", "3", "--m", "3", "--r", "2", "--trials", "20", "--seed", "4"},
        {"wishart-experiment", "--kind", "trace", "--n", "3", "--m", "8", "--trials", "200", "--seed", "4"},
        {"wishart-experiment", "--kind", "c-bounded", "--sizes", "2,4", "--trials", "200", "--seed", "4"},
        {"ratio-experiment", "--sizes", "4,8", "--trials", "30", "--seed", "4"},
    };
    for (const auto& c : commands) {
        for (const std::string format : {"csv", "json"}) {
            auto args = c;
            args.push_back("--format");
            args.push_back(format);
            const auto a = run(args), b = run(args);
            CHECK_MESSAGE(a.code == 0, c[0] << ": " << a.err);
            CHECK(a.out == b.out);
        }
    }
}

TEST_CASE("rank experiment configuration file") {
    const auto r = run({"rank-experiment", "--config",
                        R"({"n": 2, "m": 2, "r": 1, "trials": 10, "master_seed": 3})", "--format",
                        "json"});
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["config"]["n"] == 2);
    CHECK(j["config"]["trials"] == 10);
}

}
