#include "doctest.h"
#include "oracle.hpp"
#include "tockcheck/lts.hpp"
#include "tockcheck/semantics.hpp"

using namespace tockcheck;

namespace {

EventLabel ev(const char* c) { return EventLabel::visible(c); }

bool has(const std::vector<Step>& steps, const EventLabel& l)
{
    for (const auto& s : steps) {
        if (s.label == l) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("event labels")
{
    CHECK(EventLabel::visible("EXAX.move", {1, -1}, Direction::in).to_string() == "EXAX.move.in.1.-1");
    CHECK_THROWS_AS(EventLabel::visible(""), std::invalid_argument);
    CHECK_THROWS_AS(EventLabel::visible("a..b"), std::invalid_argument);
    CHECK(EventLabel::tock().to_string() == "tock");
    EventSet s({{"EXAX.move", Direction::in, std::nullopt}});
    CHECK(s.contains(EventLabel::visible("EXAX.move", {0, 2}, Direction::in)));
    CHECK_FALSE(s.contains(EventLabel::visible("EXAX.move", {0, 2}, Direction::out)));
    CHECK_FALSE(EventSet::all().contains(EventLabel::tock()));
}

TEST_CASE("alphabet enumeration covers every payload")
{
    Alphabet a;
    a.declare({"m", Direction::in, {{0, 2}, {-1, 1}}});
    CHECK(a.events().size() == 9);
    CHECK_THROWS(a.declare({"m", Direction::in, {{0, 1}}}));
    a.declare({"m", Direction::in, {{0, 2}, {-1, 1}}});
    CHECK(a.channels().size() == 1);
}

TEST_CASE("prefix is patient")
{
    Environment env;
    auto p = term::prefix(ev("a"), term::stop());
    auto steps = step(p, env);
    REQUIRE(steps.size() == 2);
    CHECK(has(steps, ev("a")));
    CHECK(has(steps, EventLabel::tock()));
    for (const auto& s : steps) {
        if (s.label.is_tock()) CHECK(structurally_equal(s.target, p));
        else CHECK(s.target->kind() == TermKind::stop);
    }
}

TEST_CASE("zero deadline refuses tock")
{
    Environment env;
    env.alphabet().declare({"EXAX.go_to_posCall", Direction::none, {}});
    auto d = term::deadline(EventSet::channels({"EXAX.go_to_posCall"}), 0);
    auto steps = step(d, env);
    REQUIRE(steps.size() == 1);
    CHECK(steps[0].label == ev("EXAX.go_to_posCall"));
    CHECK(steps[0].target->kind() == TermKind::skip);

    auto d1 = term::deadline(EventSet::channels({"EXAX.go_to_posCall"}), 2);
    auto s1 = step(d1, env);
    CHECK(has(s1, EventLabel::tock()));
    CHECK_THROWS(term::deadline(EventSet::channels({"a"}), -1));
}

TEST_CASE("hiding erases the hidden event from traces")
{
    auto env = oracle::abc_environment();
    auto p = term::hide(term::prefix(ev("a"), term::prefix(ev("b"), term::stop())), EventSet::channels({"a"}));
    auto lts = explode(p, env, {.timed_priority = true});
    auto got = oracle::visible_traces(lts, 3);
    std::set<Trace> want{{}, {ev("b")}};
    CHECK(got == want);

    // Independent check: traces of the unhidden process with a erased.
    auto raw = explode(p->operand(0), env);
    std::set<Trace> erased;
    for (const auto& t : oracle::visible_traces(raw, 3)) erased.insert(oracle::erase(t, EventSet::channels({"a"})));
    CHECK(erased == want);
}

TEST_CASE("timed priority")
{
    Lts l;
    auto s0 = l.add_state();
    auto s1 = l.add_state();
    l.add_edge(s0, EventLabel::tau(), s1);
    l.add_edge(s0, EventLabel::tock(), s0);
    l.add_edge(s1, ev("a"), s1);
    l.add_edge(s1, EventLabel::tock(), s1);
    auto p = apply_timed_priority(l);
    REQUIRE(p.edges(s0).size() == 1);
    CHECK(p.edges(s0)[0].label == LabelTable::tau);
    CHECK(p.edges(s1).size() == 2);
    CHECK(identical(apply_timed_priority(p), p));

    SUBCASE("hiding makes a prefix urgent")
    {
        Environment env;
        env.alphabet().declare({"a", Direction::none, {}});
        auto h = term::hide(term::prefix(ev("a"), term::stop()), EventSet::channels({"a"}));
        auto before = explode(h, env);
        auto after = apply_timed_priority(before);
        CHECK(before.has_edge(before.initial(), LabelTable::tock));
        CHECK_FALSE(after.has_edge(after.initial(), LabelTable::tock));
        CHECK(after.has_edge(after.initial(), LabelTable::tau));
    }
}

TEST_CASE("explode")
{
    Environment env;
    env.alphabet().declare({"a", Direction::none, {}});
    env.alphabet().declare({"b", Direction::none, {}});

    auto stop = explode(term::stop(), env);
    CHECK(stop.state_count() == 1);
    CHECK(stop.transition_count() == 1);
    CHECK(stop.edges(0)[0] == Edge{LabelTable::tock, 0});

    auto p = explode(term::prefix(ev("a"), term::prefix(ev("b"), term::skip())), env);
    CHECK(p.state_count() == 4);
    // a, b, tick plus one tock self-loop in each of the four states.
    CHECK(p.transition_count() == 7);

    auto chaos = explode(term::chaos(EventSet::channels({"a"})), env);
    auto tr = oracle::timed_traces(chaos, 3);
    CHECK(tr.count({ev("a"), ev("a"), EventLabel::tock()}) == 1);
    CHECK(tr.count({EventLabel::tock(), ev("a")}) == 1);
    bool reaches_stop = false;
    for (StateId s = 0; s < chaos.state_count(); ++s) {
        for (const auto& e : chaos.edges(s)) {
            if (e.label == LabelTable::tau && chaos.edges(e.target).size() == 1 &&
                chaos.edges(e.target)[0].label == LabelTable::tock)
                reaches_stop = true;
        }
    }
    CHECK(reaches_stop);

    CHECK_THROWS_AS(explode(term::named("Missing"), env), LinkageError);
    CHECK_THROWS_AS(explode(term::tock_run(), env, {.max_states = 0}), ExplorationOverflow);
}

TEST_CASE("recursion through named definitions")
{
    Environment env;
    env.alphabet().declare({"a", Direction::none, {}});
    env.define("P", term::prefix(ev("a"), term::named("P")));
    auto lts = explode(term::named("P"), env);
    CHECK(lts.state_count() == 1);
    env.define("Q", term::named("Q"));
    CHECK_THROWS(explode(term::named("Q"), env));
}

TEST_CASE("external choice: tau does not resolve, tock needs every branch")
{
    Environment env;
    env.alphabet().declare({"a", Direction::none, {}});
    env.alphabet().declare({"b", Direction::none, {}});
    auto c = term::external_choice({term::prefix(ev("a"), term::stop()),
                                    term::internal_choice({term::prefix(ev("b"), term::stop()), term::stop()})});
    auto steps = step(c, env);
    CHECK(has(steps, ev("a")));
    CHECK(has(steps, EventLabel::tau()));
    for (const auto& s : steps) {
        if (s.label.is_tau()) CHECK(s.target->kind() == TermKind::external_choice);
    }
    auto urgent = term::external_choice({term::prefix(ev("a"), term::stop()), term::deadline(EventSet::channels({"b"}), 0)});
    CHECK_FALSE(has(step(urgent, env), EventLabel::tock()));
}

TEST_CASE("parallel synchronises on tick")
{
    Environment env;
    auto p = term::parallel(term::skip(), EventSet{}, term::skip());
    auto steps = step(p, env);
    CHECK(has(steps, EventLabel::tick()));
    auto q = term::parallel(term::skip(), EventSet{}, term::stop());
    CHECK_FALSE(has(step(q, env), EventLabel::tick()));
}

TEST_CASE("explode is deterministic")
{
    auto env = oracle::abc_environment();
    oracle::TermGen gen(7);
    for (int i = 0; i < 50; ++i) {
        auto t = gen.term(8);
        CHECK(identical(explode(t, env, {.timed_priority = true}), explode(t, env, {.timed_priority = true})));
    }
}
