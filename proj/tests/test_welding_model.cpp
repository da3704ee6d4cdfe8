#include "doctest.h"

#include "tockcheck/assertions.hpp"
#include "tockcheck/welding.hpp"

#include <iostream>

using namespace tockcheck;

namespace {

std::map<std::string, bool> verdicts(const WeldingConfig& cfg)
{
    const ModelFile model = welding_model(cfg);
    const AssertionFile file = welding_assertions();
    std::map<std::string, bool> out;
    for (const AssertionDecl* a : file.assertions()) {
        AssertionResult r = run_assertion(model, file, *a);
        out[a->name] = r.verdict.passed;
        if (!r.verdict.passed) {
            REQUIRE(r.verdict.counterexample);
        }
        MESSAGE(a->name << " " << r.verdict.passed << " states=" << r.verdict.stats.states
                        << (r.verdict.counterexample ? " cex=" + to_string(*r.verdict.counterexample) : ""));
    }
    return out;
}

}  // namespace

TEST_CASE("big distance predicate")
{
    CHECK_FALSE(check_big_dist(1, -1, 1));
    CHECK(check_big_dist(2, 0, 1));
    CHECK(check_big_dist(0, -2, 1));
    CHECK_FALSE(check_big_dist(0, 0, 1));
}

TEST_CASE("nominal core_int range passes every assertion")
{
    auto v = verdicts({});
    REQUIRE(v.size() == 7);
    for (const auto& [name, ok] : v) CHECK_MESSAGE(ok, name);
}

TEST_CASE("negative timing values break everything but A7")
{
    WeldingConfig cfg;
    cfg.core_int = {-1, 1};
    auto v = verdicts(cfg);
    for (const auto& [name, ok] : v) CHECK_MESSAGE(ok == (name == "A7"), name);
}

TEST_CASE("single-value core_int range")
{
    WeldingConfig cfg;
    cfg.core_int = {0, 0};
    auto v = verdicts(cfg);
    for (const auto& [name, ok] : v) CHECK_MESSAGE(ok, name);
}

TEST_CASE("composed controller stays small")
{
    WeldingSystem sys = build_system({});
    ExploreOptions eo;
    eo.timed_priority = true;
    Lts lts = explode(sys.composed.process, *sys.env, eo);
    MESSAGE("composed states " << lts.state_count());
    CHECK(lts.state_count() < 1'000'000);
}
