#include <map>
#include <set>

#include "doctest.h"
#include "oracle.hpp"
#include "tockcheck/checker.hpp"
#include "tockcheck/machine.hpp"
#include "tockcheck/welding.hpp"

using namespace tockcheck;
using namespace tockcheck::ex;

namespace {

Action assign(std::string target, Expr v) { return {Action::Kind::assign, std::move(target), {std::move(v)}, {}}; }
Action emit(std::string e) { return {Action::Kind::emit, std::move(e), {}, {}}; }

Transition tr(std::string src, std::string dst, std::optional<std::string> on, std::optional<Expr> guard = std::nullopt,
              std::vector<Action> actions = {})
{
    Transition t;
    t.source = std::move(src);
    t.target = std::move(dst);
    if (on) t.trigger = Trigger{*on, std::nullopt, {}};
    t.guard = std::move(guard);
    t.actions = std::move(actions);
    return t;
}

StateDecl node(std::string name, StateDecl::Kind k = StateDecl::Kind::state) { return {k, std::move(name), {}, {}, {}}; }

Lts compile_alone(const ModelFile& model, const std::string& name, std::map<std::string, long long> bindings = {},
                  bool priority = true)
{
    Environment env;
    auto c = compile_machine(model, *model.machine(name), bindings, env);
    ExploreOptions eo;
    eo.timed_priority = priority;
    return explode(c.process, env, eo);
}

bool is_channel(const EventLabel& e, const std::string& ch) { return e.is_visible() && e.channel() == ch; }

std::size_t count(const Trace& t, const std::string& ch)
{
    std::size_t n = 0;
    for (const auto& e : t) n += is_channel(e, ch);
    return n;
}

/// Synchronous product of two transition systems built directly from edges:
/// shared channels, tock and tick synchronise, everything else interleaves.
Lts product(const Lts& a, const std::vector<ChannelDecl>& ca, const Lts& b, const std::vector<ChannelDecl>& cb)
{
    auto in = [](const std::vector<ChannelDecl>& cs, const EventLabel& e) {
        for (const auto& c : cs) {
            if (c.name == e.channel() && c.direction == e.direction()) return true;
        }
        return false;
    };
    auto shared = [&](const EventLabel& e) { return !e.is_visible() ? !e.is_tau() : in(ca, e) && in(cb, e); };
    Lts out;
    std::map<std::pair<StateId, StateId>, StateId> ids;
    std::vector<std::pair<StateId, StateId>> work;
    auto id = [&](StateId x, StateId y) {
        auto [it, fresh] = ids.emplace(std::pair{x, y}, 0);
        if (fresh) {
            it->second = out.add_state();
            work.push_back({x, y});
        }
        return it->second;
    };
    id(a.initial(), b.initial());
    while (!work.empty()) {
        auto [x, y] = work.back();
        work.pop_back();
        StateId from = ids.at({x, y});
        for (const auto& e : a.edges(x)) {
            const auto& l = a.label(e.label);
            if (!shared(l)) {
                out.add_edge(from, l, id(e.target, y));
                continue;
            }
            for (const auto& f : b.edges(y)) {
                if (b.label(f.label) == l) out.add_edge(from, l, id(e.target, f.target));
            }
        }
        for (const auto& f : b.edges(y)) {
            const auto& l = b.label(f.label);
            if (!shared(l)) out.add_edge(from, l, id(x, f.target));
        }
    }
    return out;
}

ModelFile pair_model(bool async)
{
    ModelFile f;
    Machine p;
    p.name = "P";
    p.events = {{"go", Direction::in, std::nullopt, {}}, {"x", Direction::out, std::nullopt, {}}};
    p.initial = "idle";
    p.nodes = {node("idle")};
    p.transitions = {tr("idle", "idle", "go", std::nullopt, {emit("x")})};
    Machine q;
    q.name = "Q";
    q.events = {{"y", Direction::in, std::nullopt, {}}};
    q.variables = {{"n", TypeRef::ranged(0, 2), ex::integer(0), VarKind::local, {}}};
    q.initial = "s";
    q.nodes = {node("s"), node("t", StateDecl::Kind::final)};
    q.transitions = {
        tr("s", "s", "y", ex::name("n") < ex::integer(2), {assign("n", ex::name("n") + ex::integer(1))}),
        tr("s", "t", "y", ex::name("n") >= ex::integer(2)),
    };
    f.machines = {p, q};
    Controller c;
    c.name = "C";
    c.machines = {{"P", {}, {}}, {"Q", {}, {}}};
    c.connections = {{{"P", "x", {}}, {"Q", "y", {}}, async, {}}};
    f.controllers = {c};
    return f;
}

}  // namespace

TEST_CASE("expression evaluation")
{
    CHECK(eval_expr(call("abs", {integer(-1)}) > integer(1), {}) == 0);
    CHECK(eval_expr(name("curr_waypoint") >= name("n_waypoints"), {{"curr_waypoint", 1}, {"n_waypoints", 1}}) == 1);
    const Expr g = eq(name("sys_state"), name("working")) || eq(name("sys_state"), name("EXAX_finished"));
    int hits = 0;
    for (int v = 0; v < 5; ++v) hits += eval_expr(g, {{"sys_state", v}, {"working", 1}, {"EXAX_finished", 3}}) != 0;
    CHECK(hits == 2);
    CHECK_THROWS_AS(eval_expr(name("missing"), {}), EvalError);
    CHECK_THROWS_AS(eval_expr(integer(1 << 20) + integer(1 << 20), {}), EvalError);
}

TEST_CASE("a machine with one idle state only lets time pass")
{
    ModelFile f;
    Machine m;
    m.name = "M";
    m.initial = "s";
    m.nodes = {node("s")};
    f.machines = {m};
    Lts lts = compile_alone(f, "M");
    CHECK(lts.state_count() == 1);
    REQUIRE(lts.edges(0).size() == 1);
    CHECK(lts.edges(0)[0].label == LabelTable::tock);
    CHECK(oracle::timed_traces(lts, 2) == std::set<Trace>{{}, {EventLabel::tock()}, {EventLabel::tock(), EventLabel::tock()}});
}

TEST_CASE("EXAX goes through two waypoints before done")
{
    const ModelFile model = welding_model({});
    Lts lts = compile_alone(model, "EXAX", {{"n_waypoints", 1}});
    auto traces = oracle::visible_traces(lts, 6);
    std::size_t complete = 0;
    for (const auto& t : traces) {
        CHECK(count(t, "EXAX.out_of_sync") == 0);
        std::size_t calls = 0;
        for (const auto& e : t) {
            if (is_channel(e, "EXAX.go_to_posCall")) ++calls;
            if (is_channel(e, "EXAX.done")) {
                CHECK(calls == 2);
                calls = 0;
                ++complete;
            }
        }
    }
    CHECK(complete > 0);
}

TEST_CASE("a negative time budget makes EXAX report and terminate")
{
    WeldingConfig cfg;
    cfg.core_int = {-1, 1};
    const ModelFile model = welding_model(cfg);
    Lts lts = compile_alone(model, "EXAX", {{"n_waypoints", 1}});
    for (int d = -1; d <= 1; ++d) {
        Trace t{EventLabel::visible("EXAX.move", {d, -1}, Direction::in)};
        auto path = replay(lts, t);
        REQUIRE(path);
        const auto& edges = lts.edges(path->back());
        REQUIRE(edges.size() == 1);
        CHECK(lts.label(edges[0].label) == EventLabel::visible("EXAX.out_of_sync", {}, Direction::out));
        t.push_back(lts.label(edges[0].label));
        t.push_back(EventLabel::tick());
        CHECK(replay(lts, t));
    }
}

TEST_CASE("junction without an enabled branch is a compile error")
{
    ModelFile f;
    Machine m;
    m.name = "M";
    m.variables = {{"x", TypeRef::ranged(0, 1), ex::integer(0), VarKind::local, {}}};
    m.events = {{"e", Direction::in, std::nullopt, {}}};
    m.initial = "s";
    m.nodes = {node("s"), node("j", StateDecl::Kind::junction)};
    m.transitions = {tr("s", "j", "e"), tr("j", "s", std::nullopt, ex::name("x") > ex::integer(0))};
    f.machines = {m};
    Environment env;
    try {
        compile_machine(f, f.machines[0], {}, env);
        FAIL("expected a compile error");
    } catch (const CompileError& e) {
        CHECK(std::string(e.what()).find("j") != std::string::npos);
        CHECK(std::string(e.what()).find("x") != std::string::npos);
    }
}

TEST_CASE("assignments outside a variable's range are compile errors")
{
    ModelFile f;
    Machine m;
    m.name = "M";
    m.variables = {{"x", TypeRef::ranged(0, 1), ex::integer(0), VarKind::local, {}}};
    m.events = {{"e", Direction::in, std::nullopt, {}}};
    m.initial = "s";
    m.nodes = {node("s")};
    m.transitions = {tr("s", "s", "e", std::nullopt, {assign("x", ex::name("x") + ex::integer(1))})};
    f.machines = {m};
    Environment env;
    CHECK_THROWS_AS(compile_machine(f, f.machines[0], {}, env), CompileError);

    f.machines[0].variables[0].type = TypeRef::ranged(0, 40);
    CHECK_THROWS_AS(compile_machine(f, f.machines[0], {}, env), CompileError);
}

TEST_CASE("compilation is deterministic")
{
    const ModelFile model = welding_model({});
    CHECK(identical(compile_alone(model, "UR", {{"n_waypoints", 3}}), compile_alone(model, "UR", {{"n_waypoints", 3}})));
}

TEST_CASE("no tock while an entry action is pending")
{
    const ModelFile model = welding_model({});
    Lts lts = compile_alone(model, "EXAX", {{"n_waypoints", 1}});
    for (StateId s = 0; s < lts.state_count(); ++s) {
        bool call = false, tock = false;
        for (const auto& e : lts.edges(s)) {
            call |= is_channel(lts.label(e.label), "EXAX.go_to_posCall");
            tock |= e.label == LabelTable::tock;
        }
        CHECK_FALSE((call && tock));
    }
}

TEST_CASE("synchronous connection matches an independent product")
{
    const ModelFile f = pair_model(false);
    Environment env;
    ComposeOptions co;
    co.run_to_completion = false;
    auto sys = compose_controller(f, f.controllers[0], env, co);
    Lts composed = explode(sys.process, env);

    Environment e2;
    CompileOptions po;
    po.renames["x"] = {"Q.y", Direction::in};
    auto p = compile_machine(f, *f.machine("P"), {}, e2, po);
    auto q = compile_machine(f, *f.machine("Q"), {}, e2);
    Lts reference = product(explode(p.process, e2), p.channels, explode(q.process, e2), q.channels);
    CHECK(oracle::timed_traces(composed, 6) == oracle::timed_traces(reference, 6));
}

TEST_CASE("duplicate inputs are rejected")
{
    ModelFile f = pair_model(false);
    f.controllers[0].connections.push_back({{"P", "x", {}}, {"Q", "y", {}}, true, {}});
    Environment env;
    CHECK_THROWS_AS(compose_controller(f, f.controllers[0], env), CompositionError);
}

TEST_CASE("async sender is never blocked")
{
    auto timelocks = [](bool async) {
        ModelFile f = pair_model(async);
        // Q stops listening once it has terminated; only a buffer keeps P going.
        Environment env;
        ComposeOptions co;
        co.run_to_completion = false;
        auto sys = compose_controller(f, f.controllers[0], env, co);
        ExploreOptions eo;
        eo.timed_priority = true;
        return !timelock_free(explode(sys.process, env, eo)).passed;
    };
    CHECK(timelocks(false));
    CHECK_FALSE(timelocks(true));
}

TEST_CASE("out_of_sync from EXAX reaches System through the relay")
{
    WeldingConfig cfg;
    cfg.core_int = {-1, 1};
    WeldingSystem sys = build_system(cfg);
    ExploreOptions eo;
    eo.timed_priority = true;
    Lts lts = explode(sys.composed.process, *sys.env, eo);
    auto t = find_event(lts, EventSet({{"System.out_of_sync", std::nullopt, std::nullopt}}));
    REQUIRE(t);
    CHECK(count(*t, "EXAX.move") + count(*t, "UR.move") >= 1);
}
