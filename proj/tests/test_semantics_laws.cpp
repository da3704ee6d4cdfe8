#include "doctest.h"
#include "laws.hpp"

using namespace tockcheck;

namespace {

constexpr int corpus_size = 1000;

}  // namespace

TEST_CASE("hiding erases the hidden events from every trace")
{
    Environment env = oracle::abc_environment();
    oracle::TermGen gen(11);
    for (int i = 0; i < corpus_size; ++i) {
        TermPtr p = gen.term(1 + gen.pick(8));
        EventSet a = gen.events();
        REQUIRE(laws::hiding_erasure(p, a, env) == "");
    }
}

TEST_CASE("an exception behaves as its body until the first event of its set, then as the handler")
{
    Environment env = oracle::abc_environment();
    oracle::TermGen gen(12);
    for (int i = 0; i < corpus_size; ++i) {
        TermPtr p = gen.term(1 + gen.pick(6));
        TermPtr q = gen.term(1 + gen.pick(4));
        EventSet a = gen.events();
        REQUIRE(laws::exception_transfer(p, a, q, env) == "");

        std::set<Trace> before_a, p_before_a;
        for (const auto& t : laws::vis(term::exception(p, a, q), env, laws::depth)) {
            if (!laws::has_any(t, a)) before_a.insert(t);
        }
        for (const auto& t : laws::vis(p, env, laws::depth)) {
            if (!laws::has_any(t, a)) p_before_a.insert(t);
        }
        CHECK(before_a == p_before_a);
    }
}

TEST_CASE("processes without deadlines or hiding always have a next step")
{
    Environment env = oracle::abc_environment();
    oracle::TermGen gen(13);
    int checked = 0;
    for (int i = 0; i < corpus_size; ++i) {
        const auto outcome = laws::patience(gen.term(1 + gen.pick(8)), env);
        if (!outcome) continue;
        ++checked;
        REQUIRE(*outcome == "");
    }
    CHECK(checked > 200);
}

TEST_CASE("timed priority is idempotent and agrees with prioritised exploration")
{
    Environment env = oracle::abc_environment();
    oracle::TermGen gen(14);
    for (int i = 0; i < corpus_size; ++i) REQUIRE(laws::priority_idempotence(gen.term(1 + gen.pick(8)), env) == "");
}

TEST_CASE("exploration is deterministic")
{
    Environment env = oracle::abc_environment();
    oracle::TermGen a(15), b(15);
    for (int i = 0; i < corpus_size; ++i) {
        TermPtr p = a.term(1 + a.pick(8));
        TermPtr q = b.term(1 + b.pick(8));
        REQUIRE(identical(explode(p, env), explode(q, env)));
    }
}
