#include <algorithm>

#include "doctest.h"
#include "oracle.hpp"
#include "tockcheck/assertions.hpp"
#include "tockcheck/checker.hpp"
#include "tockcheck/welding.hpp"

using namespace tockcheck;

namespace {

constexpr int oracle_depth = 8;

Lts build(const TermPtr& t, const Environment& env) { return explode(t, env, {.timed_priority = true}); }

bool spec_has(const Lts& spec, const Trace& t)
{
    return oracle::timed_traces(spec, static_cast<int>(t.size())).count(t) != 0;
}

void check_counterexample(const Lts& spec, const Lts& impl, const Verdict& v)
{
    REQUIRE(v.counterexample);
    const Trace& t = *v.counterexample;
    REQUIRE_FALSE(t.empty());
    CHECK(replay(impl, t));
    CHECK_FALSE(spec_has(spec, t));
    CHECK(spec_has(spec, Trace(t.begin(), t.end() - 1)));
}

EventLabel ev(const char* c) { return EventLabel::visible(c); }

Trace trace(std::initializer_list<EventLabel> es) { return Trace(es); }

}  // namespace

TEST_CASE("traces refinement agrees with brute-force trace inclusion")
{
    Environment env = oracle::abc_environment();
    oracle::TermGen gen(20241019);
    int passes = 0, fails = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto [spec, impl] = oracle::refinement_pair(gen);
        const Lts s = build(spec, env);
        const Lts m = build(impl, env);
        const Verdict v = traces_refines(s, m);
        const bool expected = oracle::brute_force_refines(s, m, oracle_depth);
        INFO("pair " << i << ": spec " << spec->to_string() << " impl " << impl->to_string());
        REQUIRE(v.passed == expected);
        if (v.passed) {
            ++passes;
        } else {
            ++fails;
            check_counterexample(s, m, v);
        }
    }
    CHECK(passes > 100);
    CHECK(fails > 100);
}

TEST_CASE("refinement is reflexive and transitive on sampled terms")
{
    Environment env = oracle::abc_environment();
    oracle::TermGen gen(7);
    int chains = 0;
    for (int i = 0; i < 300; ++i) {
        const Lts a = build(gen.term(1 + gen.pick(8)), env);
        const Lts b = build(gen.term(1 + gen.pick(8)), env);
        const Lts c = build(gen.term(1 + gen.pick(8)), env);
        CHECK(traces_refines(a, a).passed);
        if (traces_refines(a, b).passed && traces_refines(b, c).passed) {
            ++chains;
            CHECK(traces_refines(a, c).passed);
        }
    }
    CHECK(chains > 0);
}

TEST_CASE("verdicts and counterexamples are deterministic")
{
    Environment env = oracle::abc_environment();
    oracle::TermGen gen(99);
    for (int i = 0; i < 100; ++i) {
        TermPtr spec = gen.term(6);
        TermPtr impl = gen.term(6);
        const Verdict v1 = traces_refines(build(spec, env), build(impl, env));
        const Verdict v2 = traces_refines(build(spec, env), build(impl, env));
        CHECK(v1.passed == v2.passed);
        CHECK(v1.counterexample == v2.counterexample);
        CHECK(v1.stats.states == v2.stats.states);
    }
}

TEST_CASE("chaos is the top of the traces order")
{
    Environment env = oracle::abc_environment();
    oracle::TermGen gen(3);
    const Lts top = build(term::chaos(EventSet::all()), env);
    for (int i = 0; i < 50; ++i) {
        TermPtr t = gen.term(8);
        // Chaos never terminates, so compare against the tick-free part.
        CHECK(traces_refines(top, build(term::sequential(t, term::stop()), env)).passed);
    }
}

TEST_CASE("timelock freedom")
{
    Environment env = oracle::abc_environment();
    CHECK(timelock_free(build(term::tock_run(), env)).passed);
    auto blocked = term::parallel(term::deadline(EventSet::channels({"a"}), 0), EventSet::channels({"a"}), term::stop());
    Verdict v = timelock_free(build(blocked, env));
    CHECK_FALSE(v.passed);
    REQUIRE(v.counterexample);
    CHECK(v.counterexample->empty());
    auto hidden = term::hide(term::prefix(ev("a"), term::tock_run()), EventSet::channels({"a"}));
    CHECK(timelock_free(build(hidden, env)).passed);
}

TEST_CASE("termination")
{
    Environment env;
    CHECK(does_not_terminate(build(term::stop(), env)).passed);
    Verdict v = does_not_terminate(build(term::skip(), env));
    CHECK_FALSE(v.passed);
    CHECK(v.counterexample == trace({EventLabel::tick()}));
}

TEST_CASE("constraining a process to avoid events")
{
    Environment env = oracle::abc_environment();
    auto a = EventSet::channels({"a"});
    CHECK(oracle::visible_traces(build(constrain_skip(term::prefix(ev("a"), term::stop()), a), env), 3) ==
          std::set<Trace>{{}});
    auto choice = term::external_choice({term::prefix(ev("a"), term::stop()), term::prefix(ev("b"), term::stop())});
    CHECK(oracle::visible_traces(build(constrain_skip(choice, a), env), 3) == std::set<Trace>{{}, {ev("b")}});
}

TEST_CASE("deadline specification over the EXAX alphabet")
{
    Environment env;
    env.alphabet().declare({"EXAX.move", Direction::in, {}});
    env.alphabet().declare({"EXAX.go_to_posCall", Direction::none, {}});
    env.alphabet().declare({"EXAX.done", Direction::out, {}});
    const EventLabel move = EventLabel::visible("EXAX.move", {}, Direction::in);
    const EventLabel call = EventLabel::visible("EXAX.go_to_posCall");
    auto spec = build_deadline_spec(env, "SpecA1", EventSet::all(), EventSet({{"EXAX.move", Direction::in, std::nullopt}}),
                                    EventSet::channels({"EXAX.go_to_posCall"}), 0);
    const Lts lts = build(spec, env);
    const auto tock = EventLabel::tock();
    CHECK(replay(lts, trace({move, call, tock})));
    CHECK_FALSE(replay(lts, trace({move, tock})));
    CHECK(replay(lts, trace({tock, tock, tock, tock})));
    CHECK(replay(lts, trace({call, tock, move, call, move, call, tock})));
}

TEST_CASE("welding counterexamples")
{
    WeldingConfig cfg;
    cfg.core_int = {-1, 1};
    const ModelFile model = welding_model(cfg);
    const AssertionFile file = welding_assertions();

    SUBCASE("A1 fails on a negative budget without any go_to_pos call")
    {
        auto r = run_assertion(model, file, *file.assertion("A1"));
        REQUIRE_FALSE(r.verdict.passed);
        const Trace& t = *r.verdict.counterexample;
        REQUIRE(t.size() >= 2);
        CHECK(t.front().channel() == "EXAX.move");
        CHECK(t.front().payload().back() == -1);
        for (const auto& e : t) CHECK_FALSE((e.is_visible() && e.channel() == "EXAX.go_to_posCall"));
        CHECK((t.back().is_tock() || t.back().channel() == "EXAX.out_of_sync"));
        CHECK(replay(*r.impl, t));
    }

    SUBCASE("A5 reports out_of_sync and then termination")
    {
        auto r = run_assertion(model, file, *file.assertion("A5"));
        REQUIRE_FALSE(r.verdict.passed);
        const Trace& t = *r.verdict.counterexample;
        CHECK(t.back().is_tick());
        CHECK(std::any_of(t.begin(), t.end(), [](const EventLabel& e) { return e.is_visible() && e.channel() == "EXAX.out_of_sync"; }));
        CHECK(replay(*r.impl, t));
    }
}
