#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "tockcheck/cli.hpp"

using namespace tockcheck;
using nlohmann::json;

namespace {

const std::string model = TOCKCHECK_CORPUS_DIR "/intelliwelder/intelliwelder.twmodel";

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args)
{
    args.insert(args.begin(), "tockcheck");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli_main(int(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

json verdicts(const json& report)
{
    json v = json::object();
    for (const auto& r : report["results"]) v[r["name"].get<std::string>()] = r["result"];
    return v;
}

/// Drops the timing fields, which legitimately vary between runs.
json untimed(json report)
{
    for (auto& r : report["results"]) {
        r.erase("compile_seconds");
        r.erase("verify_seconds");
        r.erase("total_seconds");
    }
    report["config"].erase("jobs");
    return report;
}

std::filesystem::path scratch_dir()
{
    auto dir = std::filesystem::temp_directory_path() / "tockcheck_cli_test";
    std::filesystem::create_directories(dir);
    return dir;
}

void write(const std::filesystem::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("exit codes follow the verdicts")
{
    CHECK(run({"check", model}).code == 0);
    CHECK(run({"check", model, "--core-int", "-1..1"}).code == 1);
    CHECK(run({"check", model, "--core-int", "0..0"}).code == 0);

    const Run missing = run({"check", "/nonexistent/model.twmodel"});
    CHECK(missing.code == 2);
    CHECK(missing.err.find("model.twmodel") != std::string::npos);

    CHECK(run({"check", model, "--core-int", "2..1"}).code == 2);
    CHECK(run({"check", model, "--core-int", "zero"}).code == 2);
    CHECK(run({"check", model, "--format", "xml"}).code == 2);
    CHECK(run({"check", model, "--config", "no_such_config"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"check", model, "--max-states", "50"}).code == 2);
}

TEST_CASE("table and json report the same verdicts")
{
    for (const std::string range : {"0..2", "-1..1"}) {
        CAPTURE(range);
        const Run table = run({"check", model, "--core-int", range});
        const Run js = run({"check", model, "--core-int", range, "--format", "json"});
        REQUIRE(js.code == table.code);
        const json report = json::parse(js.out);
        CHECK(report["command"] == "check");
        CHECK(report["exit_code"] == js.code);
        CHECK(report["config"]["ranges"]["core_int"]["lo"] == std::stoi(range.substr(0, range.find(".."))));
        const json v = verdicts(report);
        for (const auto& [name, result] : v.items()) {
            std::istringstream lines(table.out);
            std::string line;
            bool found = false;
            while (std::getline(lines, line)) {
                std::istringstream words(line);
                std::string first, kind, verdict;
                words >> first >> kind >> verdict;
                if (first == name) {
                    CHECK(verdict == result.get<std::string>());
                    found = true;
                }
            }
            CHECK_MESSAGE(found, name);
        }
    }
}

TEST_CASE("json verdict matrix and counterexamples")
{
    const json nominal = json::parse(run({"check", model, "--format", "json"}).out);
    const json nv = verdicts(nominal);
    for (const auto& [name, result] : nv.items()) CHECK_MESSAGE(result == "pass", name);
    CHECK(nominal["summary"]["passed"] == 7);

    const json broken = json::parse(run({"check", model, "--core-int", "-1..1", "--format", "json"}).out);
    const json bv = verdicts(broken);
    for (const auto& [name, result] : bv.items()) {
        CHECK_MESSAGE(result == (name == "A7" ? "pass" : "fail"), name);
    }
    const json a5 = broken["results"][4];
    REQUIRE(a5["name"] == "A5");
    CHECK(a5["counterexample"] == json({"EXAX.move.in.-1.-1", "EXAX.out_of_sync.out", "tick"}));
    CHECK(broken["results"][6]["counterexample"].is_null());
}

TEST_CASE("results do not depend on the number of jobs")
{
    const json one = untimed(json::parse(run({"check", model, "--core-int", "-1..1", "--format", "json"}).out));
    for (const std::string jobs : {"2", "4", "8"}) {
        const json many =
            untimed(json::parse(run({"check", model, "--core-int", "-1..1", "--format", "json", "--jobs", jobs}).out));
        CHECK(many == one);
    }
}

TEST_CASE("seed is echoed and does not change results")
{
    const json a = json::parse(run({"check", model, "--format", "json", "--seed", "42"}).out);
    const json b = json::parse(run({"check", model, "--format", "json"}).out);
    CHECK(a["config"]["seed"] == 42);
    CHECK(b["config"]["seed"].is_null());
    CHECK(verdicts(a) == verdicts(b));
}

TEST_CASE("assertion file defaults to the sibling of the model")
{
    const std::string explicit_path = TOCKCHECK_CORPUS_DIR "/intelliwelder/intelliwelder.twassert";
    const json a = untimed(json::parse(run({"check", model, "--format", "json"}).out));
    const json b = untimed(json::parse(run({"check", model, "--assert", explicit_path, "--format", "json"}).out));
    CHECK(a == b);

    const auto dir = scratch_dir();
    std::filesystem::copy_file(model, dir / "lonely.twmodel", std::filesystem::copy_options::overwrite_existing);
    const Run r = run({"check", (dir / "lonely.twmodel").string()});
    CHECK(r.code == 2);
    CHECK(r.err.find("lonely.twassert") != std::string::npos);
}

TEST_CASE("trace of A5 lists every event with machine states")
{
    const Run r = run({"trace", model, "A5", "--core-int", "-1..1"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("EXAX.move.in.-1.-1") != std::string::npos);
    CHECK(r.out.find("EXAX.out_of_sync.out") != std::string::npos);
    CHECK(r.out.find("tick") != std::string::npos);
    CHECK(r.out.find("EXAX=wait_for_move") != std::string::npos);

    const json j = json::parse(run({"trace", model, "A5", "--core-int", "-1..1", "--format", "json"}).out);
    REQUIRE(j["steps"].size() == 3);
    CHECK(j["steps"][0]["event"] == "EXAX.move.in.-1.-1");
    CHECK(j["steps"][2]["event"] == "tick");
    CHECK(j["steps"][1]["machines"][0]["machine"] == "EXAX");
}

TEST_CASE("trace of a passing assertion")
{
    const Run r = run({"trace", model, "A7"});
    CHECK(r.code == 1);
    CHECK(r.out.find("assertion A7 passes; no counterexample") != std::string::npos);
    CHECK(run({"trace", model, "A99"}).code == 2);
}

TEST_CASE("trace of a machine that terminates at once is a lone tick")
{
    const auto dir = scratch_dir();
    write(dir / "toy.twmodel", "model toy\nmachine M {\n  initial s\n  state s\n  final F\n  transition s -> F\n}\n");
    write(dir / "toy.twassert", "assertion T1: M does not terminate.\n");
    const json j = json::parse(run({"trace", (dir / "toy.twmodel").string(), "T1", "--format", "json"}).out);
    REQUIRE(j["steps"].size() == 1);
    CHECK(j["steps"][0]["event"] == "tick");
    CHECK(j["steps"][0]["machines"].empty());
}

TEST_CASE("stats are deterministic and flag unreachable states")
{
    const Run a = run({"stats", model});
    const Run b = run({"stats", model});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("warning: state UR.moveL is unreachable") != std::string::npos);

    const json j = json::parse(run({"stats", model, "--format", "json"}).out);
    REQUIRE(j["processes"].size() == 6);
    CHECK(j["processes"][5]["name"] == "Controller");
    CHECK(j["processes"][5]["kind"] == "controller");
    CHECK(j["processes"][5]["states"] == 4734);
}

TEST_CASE("state limit from the environment")
{
    ::setenv("TOCKCHECK_MAX_STATES", "50", 1);
    const Run limited = run({"check", model, "--format", "json"});
    const Run overridden = run({"check", model, "--max-states", "100000"});
    ::setenv("TOCKCHECK_MAX_STATES", "bogus", 1);
    const Run bogus = run({"check", model});
    ::unsetenv("TOCKCHECK_MAX_STATES");

    CHECK(limited.code == 2);
    const json j = json::parse(limited.out);
    CHECK(j["config"]["max_states"] == 50);
    CHECK(j["summary"]["errors"] == 3);
    CHECK(overridden.code == 0);
    CHECK(bogus.code == 2);
}
