#include "tockcheck/welding.hpp"

#include <stdexcept>

namespace tockcheck {

namespace {

using namespace ex;

TypeRef T(const std::string& name) { return TypeRef::named(name); }

Expr N(const std::string& name) { return ex::name(name); }

Action assign(std::string target, Expr value) { return {Action::Kind::assign, std::move(target), {std::move(value)}, {}}; }

Action emit(std::string event) { return {Action::Kind::emit, std::move(event), {}, {}}; }

Action emit(std::string event, Expr payload) { return {Action::Kind::emit, std::move(event), {std::move(payload)}, {}}; }

Action call_op(std::string op, std::vector<Expr> args) { return {Action::Kind::call, std::move(op), std::move(args), {}}; }

StateDecl state(std::string name, std::vector<Action> entry = {}, std::vector<Action> exit = {})
{
    return {StateDecl::Kind::state, std::move(name), std::move(entry), std::move(exit), {}};
}

StateDecl junction(std::string name) { return {StateDecl::Kind::junction, std::move(name), {}, {}, {}}; }

StateDecl final_state(std::string name) { return {StateDecl::Kind::final, std::move(name), {}, {}, {}}; }

struct On {
    std::string event;
    std::optional<std::string> binder;
};

Transition tr(std::string src, std::string dst, std::optional<On> on, std::optional<Expr> guard,
              std::vector<Action> actions = {})
{
    Transition t;
    t.source = std::move(src);
    t.target = std::move(dst);
    if (on) t.trigger = Trigger{on->event, on->binder, {}};
    t.guard = std::move(guard);
    t.actions = std::move(actions);
    return t;
}

EventDecl input(std::string name, std::optional<TypeRef> type = std::nullopt)
{
    return {std::move(name), Direction::in, std::move(type), {}};
}

EventDecl output(std::string name, std::optional<TypeRef> type = std::nullopt)
{
    return {std::move(name), Direction::out, std::move(type), {}};
}

VarDecl var(std::string name, TypeRef type, std::optional<Expr> init = std::nullopt, VarKind kind = VarKind::local)
{
    return {std::move(name), std::move(type), std::move(init), kind, {}};
}

TypeDecl range_type(std::string name, int lo, int hi)
{
    TypeDecl t;
    t.name = std::move(name);
    t.range = {lo, hi};
    return t;
}

Param param(std::string name, TypeRef type) { return {std::move(name), std::move(type), {}}; }

Endpoint at(std::string node, std::string member) { return {std::move(node), std::move(member), {}}; }

Connection connect(Endpoint from, Endpoint to, bool async = false) { return {std::move(from), std::move(to), async, {}}; }

const std::optional<Expr> always;

Machine system_machine()
{
    Machine m;
    m.name = "System";
    m.variables = {var("sys_state", T("SysState"), N("wait_for_start"), VarKind::shared)};
    m.events = {input("start_system"), input("UR_done"), input("EXAX_done"), input("out_of_sync")};
    m.initial = "wait_for_start";
    m.nodes = {
        state("wait_for_start", {assign("sys_state", N("wait_for_start"))}),
        state("working", {assign("sys_state", N("working"))}),
        state("UR_finished", {assign("sys_state", N("UR_finished"))}),
        state("EXAX_finished", {assign("sys_state", N("EXAX_finished"))}),
        final_state("F"),
    };
    const std::vector<Action> stop_all{assign("sys_state", N("final"))};
    m.transitions = {
        tr("wait_for_start", "working", On{"start_system"}, always),
        tr("working", "UR_finished", On{"UR_done"}, always),
        tr("working", "EXAX_finished", On{"EXAX_done"}, always),
        tr("UR_finished", "wait_for_start", On{"EXAX_done"}, always),
        tr("EXAX_finished", "wait_for_start", On{"UR_done"}, always),
        tr("working", "F", On{"out_of_sync"}, always, stop_all),
        tr("UR_finished", "F", On{"out_of_sync"}, always, stop_all),
        tr("EXAX_finished", "F", On{"out_of_sync"}, always, stop_all),
    };
    return m;
}

Machine exax_machine()
{
    Machine m;
    m.name = "EXAX";
    m.requires_ = {"exax_ops"};
    m.constants = {{"n_waypoints", T("exax_wp"), std::nullopt, {}}};
    m.variables = {var("exax_move", T("EXAXMoveCmd")), var("curr_waypoint", T("exax_wp"), integer(0))};
    m.events = {input("move", T("EXAXMoveCmd")), output("done"), output("out_of_sync")};
    m.initial = "wait_for_move";
    m.nodes = {
        state("wait_for_move"),
        junction("j_time"),
        state("by_position", {call_op("go_to_pos", {N("exax_move.dist"), N("exax_move.time")})}),
        junction("j_waypoint"),
        final_state("F"),
    };
    m.transitions = {
        tr("wait_for_move", "j_time", On{"move", "exax_move"}, always),
        tr("j_time", "F", std::nullopt, N("exax_move.time") < integer(0), {emit("out_of_sync")}),
        tr("j_time", "by_position", std::nullopt, N("exax_move.time") >= integer(0)),
        tr("by_position", "j_waypoint", std::nullopt, always),
        tr("j_waypoint", "wait_for_move", std::nullopt, N("curr_waypoint") >= N("n_waypoints"),
           {assign("curr_waypoint", integer(0)), emit("done")}),
        tr("j_waypoint", "wait_for_move", std::nullopt, N("curr_waypoint") < N("n_waypoints"),
           {assign("curr_waypoint", N("curr_waypoint") + integer(1))}),
    };
    return m;
}

Machine ur_machine()
{
    Machine m;
    m.name = "UR";
    m.requires_ = {"ur_ops"};
    m.constants = {{"n_waypoints", T("ur_wp"), std::nullopt, {}}};
    m.variables = {
        var("ur_move", T("URMoveCmd")),
        var("curr_waypoint", T("ur_wp"), integer(0)),
        var("choosing", TypeRef::boolean(), boolean(false)),
        var("big_dist", TypeRef::boolean(), boolean(false)),
    };
    m.events = {input("move", T("URMoveCmd")), output("done"), output("out_of_sync")};
    m.initial = "wait_for_move";
    const Expr d1 = N("ur_move.dist1");
    const Expr d2 = N("ur_move.dist2");
    const std::vector<Action> chosen{assign("choosing", boolean(false))};
    m.nodes = {
        state("wait_for_move"),
        junction("j_time"),
        state("choose_cmd", {assign("choosing", boolean(true))}),
        junction("j_blending"),
        junction("j_offset"),
        junction("j_sharp"),
        state("big_dist_check", {assign("big_dist", ex::call("check_big_dist", {d1, d2}))}),
        junction("j_dist"),
        state("moveJ", {call_op("moveJ", {d1, d2})}, chosen),
        state("moveP", {call_op("moveP", {d1, d2})}, chosen),
        state("moveL", {call_op("moveL", {d1, d2})}, chosen),
        state("moveL_with_t", {call_op("moveL_with_t", {d1, d2, N("ur_move.time")})}, chosen),
        junction("j_waypoint"),
        final_state("F"),
    };
    const Expr done_choosing = !N("choosing");
    m.transitions = {
        tr("wait_for_move", "j_time", On{"move", "ur_move"}, always),
        tr("j_time", "F", std::nullopt, N("ur_move.time") < integer(0), {emit("out_of_sync")}),
        tr("j_time", "choose_cmd", std::nullopt, N("ur_move.time") >= integer(0)),
        tr("choose_cmd", "j_blending", std::nullopt, always),
        tr("j_blending", "j_offset", std::nullopt, N("ur_move.blending")),
        tr("j_blending", "big_dist_check", std::nullopt, !N("ur_move.blending")),
        tr("j_offset", "moveJ", std::nullopt, !N("ur_move.large_offset")),
        tr("j_offset", "j_sharp", std::nullopt, N("ur_move.large_offset")),
        tr("j_sharp", "moveP", std::nullopt, !N("ur_move.sharp_corner")),
        tr("j_sharp", "moveL_with_t", std::nullopt, N("ur_move.sharp_corner")),
        tr("big_dist_check", "j_dist", std::nullopt, always),
        tr("j_dist", "moveL", std::nullopt, N("big_dist")),
        tr("j_dist", "moveL_with_t", std::nullopt, !N("big_dist")),
        tr("moveJ", "j_waypoint", std::nullopt, always),
        tr("moveP", "j_waypoint", std::nullopt, always),
        tr("moveL", "j_waypoint", std::nullopt, always),
        tr("moveL_with_t", "j_waypoint", std::nullopt, always),
        tr("j_waypoint", "wait_for_move", std::nullopt, done_choosing && N("curr_waypoint") >= N("n_waypoints"),
           {assign("curr_waypoint", integer(0)), emit("done")}),
        tr("j_waypoint", "wait_for_move", std::nullopt, done_choosing && N("curr_waypoint") < N("n_waypoints"),
           {assign("curr_waypoint", N("curr_waypoint") + integer(1))}),
    };
    return m;
}

Machine relay_machine()
{
    Machine m;
    m.name = "relay";
    m.events = {input("exax_out_of_sync"), input("ur_out_of_sync"), output("out_of_sync")};
    m.initial = "idle";
    m.nodes = {state("idle")};
    m.transitions = {
        tr("idle", "idle", On{"exax_out_of_sync"}, always, {emit("out_of_sync")}),
        tr("idle", "idle", On{"ur_out_of_sync"}, always, {emit("out_of_sync")}),
    };
    return m;
}

Machine state_check_machine()
{
    Machine m;
    m.name = "state_check";
    m.variables = {
        var("sys_state", T("SysState"), N("wait_for_start"), VarKind::external),
        var("ur_move", T("URMoveCmd")),
        var("exax_move", T("EXAXMoveCmd")),
    };
    m.events = {
        input("ur_move_in", T("URMoveCmd")),
        input("exax_move_in", T("EXAXMoveCmd")),
        output("ur_move_out", T("URMoveCmd")),
        output("exax_move_out", T("EXAXMoveCmd")),
    };
    m.initial = "checker";
    m.nodes = {state("checker")};
    auto in_state = [](const char* s) { return eq(N("sys_state"), N(s)); };
    m.transitions = {
        tr("checker", "checker", On{"ur_move_in", "ur_move"}, in_state("working") || in_state("EXAX_finished"),
           {emit("ur_move_out", N("ur_move"))}),
        tr("checker", "checker", On{"exax_move_in", "exax_move"}, in_state("working") || in_state("UR_finished"),
           {emit("exax_move_out", N("exax_move"))}),
    };
    return m;
}

ModelFile base_model()
{
    ModelFile f;
    f.name = "intelliwelder";
    f.types = {
        range_type("core_int", 0, 2),
        range_type("dist_t", -1, 1),
        range_type("ur_wp", 0, 3),
        range_type("exax_wp", 0, 1),
    };
    TypeDecl sys;
    sys.kind = TypeDecl::Kind::enumeration;
    sys.name = "SysState";
    sys.literals = {"wait_for_start", "working", "UR_finished", "EXAX_finished", "final"};
    f.types.push_back(sys);
    TypeDecl ur;
    ur.kind = TypeDecl::Kind::record;
    ur.name = "URMoveCmd";
    ur.fields = {{"blending", TypeRef::boolean(), {}}, {"large_offset", TypeRef::boolean(), {}},
                 {"sharp_corner", TypeRef::boolean(), {}}, {"dist1", T("dist_t"), {}},
                 {"dist2", T("dist_t"), {}},           {"time", T("core_int"), {}}};
    f.types.push_back(ur);
    TypeDecl exax;
    exax.kind = TypeDecl::Kind::record;
    exax.name = "EXAXMoveCmd";
    exax.fields = {{"dist", T("dist_t"), {}}, {"time", T("core_int"), {}}};
    f.types.push_back(exax);

    f.constants = {
        {"n_waypoints_ur", std::nullopt, integer(3), {}},
        {"n_waypoints_exax", std::nullopt, integer(1), {}},
        {"big_dist_threshold", std::nullopt, integer(1), {}},
    };

    FunctionDecl big;
    big.name = "check_big_dist";
    big.params = {param("d1", T("dist_t")), param("d2", T("dist_t"))};
    big.result = TypeRef::boolean();
    big.body = ex::call("abs", {N("d1")}) > N("big_dist_threshold") || ex::call("abs", {N("d2")}) > N("big_dist_threshold");
    f.functions = {big};

    InterfaceDecl events;
    events.name = "events";
    events.events = {{"start_system", Direction::none, std::nullopt, {}},
                     {"next_UR_move", Direction::none, T("URMoveCmd"), {}},
                     {"next_EXAX_move", Direction::none, T("EXAXMoveCmd"), {}}};
    InterfaceDecl ur_ops;
    ur_ops.name = "ur_ops";
    const std::vector<Param> two{param("dist1", T("dist_t")), param("dist2", T("dist_t"))};
    auto with_time = two;
    with_time.push_back(param("time", T("core_int")));
    ur_ops.operations = {{"moveJ", two, {}}, {"moveP", two, {}}, {"moveL", two, {}}, {"moveL_with_t", with_time, {}}};
    InterfaceDecl exax_ops;
    exax_ops.name = "exax_ops";
    exax_ops.operations = {{"go_to_pos", {param("dist", T("dist_t")), param("time", T("core_int"))}, {}}};
    f.interfaces = {events, ur_ops, exax_ops};

    f.platforms = {{"IntelliWelderPlatform", {"events", "ur_ops", "exax_ops"}, {}}};

    f.machines = {system_machine(), exax_machine(), ur_machine(), relay_machine(), state_check_machine()};

    Controller c;
    c.name = "Controller";
    c.platform = "IntelliWelderPlatform";
    c.machines = {
        {"System", {}, {}},
        {"EXAX", {{"n_waypoints", N("n_waypoints_exax"), {}}}, {}},
        {"UR", {{"n_waypoints", N("n_waypoints_ur"), {}}}, {}},
        {"relay", {}, {}},
        {"state_check", {}, {}},
    };
    c.connections = {
        connect(at("platform", "start_system"), at("System", "start_system"), true),
        connect(at("platform", "next_UR_move"), at("state_check", "ur_move_in"), true),
        connect(at("platform", "next_EXAX_move"), at("state_check", "exax_move_in"), true),
        connect(at("state_check", "ur_move_out"), at("UR", "move")),
        connect(at("state_check", "exax_move_out"), at("EXAX", "move")),
        connect(at("UR", "done"), at("System", "UR_done")),
        connect(at("EXAX", "done"), at("System", "EXAX_done")),
        connect(at("EXAX", "out_of_sync"), at("relay", "exax_out_of_sync")),
        connect(at("UR", "out_of_sync"), at("relay", "ur_out_of_sync")),
        connect(at("relay", "out_of_sync"), at("System", "out_of_sync")),
    };
    c.shares = {{at("System", "sys_state"), at("state_check", "sys_state"), {}}};
    f.controllers = {c};

    f.configs = {
        {"nominal", {{"core_int", IntRange{0, 2}, std::nullopt, {}}}, {}},
        {"realistic", {{"core_int", IntRange{-1, 1}, std::nullopt, {}}}, {}},
    };
    return f;
}

EventSet set_of(std::initializer_list<EventPattern> ps) { return EventSet(std::vector<EventPattern>(ps)); }

EventPattern chan(std::string name, std::optional<Direction> d = std::nullopt) { return {std::move(name), d, std::nullopt}; }

}  // namespace

void WeldingConfig::validate() const
{
    if (core_int.lo > core_int.hi) throw std::invalid_argument("core_int range is empty");
    if (n_waypoints_ur < 0 || n_waypoints_ur > 3) throw std::invalid_argument("n_waypoints_ur must be within 0..3");
    if (n_waypoints_exax < 0 || n_waypoints_exax > 1) throw std::invalid_argument("n_waypoints_exax must be within 0..1");
}

ModelConfig WeldingConfig::overrides() const
{
    ModelConfig c;
    c.ranges["core_int"] = core_int;
    c.constants["n_waypoints_ur"] = n_waypoints_ur;
    c.constants["n_waypoints_exax"] = n_waypoints_exax;
    c.constants["big_dist_threshold"] = big_dist_threshold;
    return c;
}

bool check_big_dist(int d1, int d2, int threshold) { return std::abs(d1) > threshold || std::abs(d2) > threshold; }

ModelFile welding_model(const WeldingConfig& cfg)
{
    cfg.validate();
    return apply_config(base_model(), cfg.overrides());
}

AssertionFile welding_assertions()
{
    AssertionFile f;
    const EventSet ur_calls = set_of({chan("UR.moveJCall"), chan("UR.movePCall"), chan("UR.moveLCall"), chan("UR.moveL_with_tCall")});
    f.statements = {
        SpecDecl{"SpecA1", set_of({chan("EXAX.move", Direction::in)}), set_of({chan("EXAX.go_to_posCall")}), 0, EventSet::all(), {}},
        AssertionDecl{AssertionDecl::Kind::refines, "A1", ProcExpr::ref("SpecA1"), ProcExpr::ref("EXAX"), {}},
        ProcessDecl{"EXAX2", ProcExpr::hide(ProcExpr::ref("EXAX"), set_of({chan("EXAX.go_to_posCall")})), {}},
        AssertionDecl{AssertionDecl::Kind::timelock_free, "A2", std::nullopt, ProcExpr::ref("EXAX2"), {}},
        SpecDecl{"SpecA3", set_of({chan("UR.move", Direction::in)}), ur_calls, 0, EventSet::all(), {}},
        AssertionDecl{AssertionDecl::Kind::refines, "A3", ProcExpr::ref("SpecA3"), ProcExpr::ref("UR"), {}},
        ProcessDecl{"UR2", ProcExpr::hide(ProcExpr::ref("UR"), ur_calls), {}},
        AssertionDecl{AssertionDecl::Kind::timelock_free, "A4", std::nullopt, ProcExpr::ref("UR2"), {}},
        AssertionDecl{AssertionDecl::Kind::does_not_terminate, "A5", std::nullopt, ProcExpr::ref("EXAX"), {}},
        AssertionDecl{AssertionDecl::Kind::does_not_terminate, "A6", std::nullopt, ProcExpr::ref("UR"), {}},
        ProcessDecl{"SysConstrained", ProcExpr::constrain(ProcExpr::ref("System"), set_of({chan("System.out_of_sync")})), {}},
        ProcessDecl{"SysTerminates", ProcExpr::hide(ProcExpr::ref("SysConstrained"), EventSet::all()), {}},
        ProcessDecl{"Stop", ProcExpr::stop(), {}},
        AssertionDecl{AssertionDecl::Kind::refines, "A7", ProcExpr::ref("Stop"), ProcExpr::ref("SysTerminates"), {}},
    };
    return f;
}

WeldingSystem build_system(const WeldingConfig& cfg)
{
    const ModelFile model = welding_model(cfg);
    WeldingSystem out;
    out.env = std::make_shared<Environment>();
    out.composed = compose_controller(model, model.controllers.at(0), *out.env);
    for (const auto& ref : model.controllers.at(0).machines) {
        CompileOptions co;
        co.prefix = "standalone." + ref.machine;
        out.machines.emplace(ref.machine,
                             compile_machine(model, *model.machine(ref.machine), evaluate_bindings(model, ref), *out.env, co));
    }
    return out;
}

}  // namespace tockcheck
