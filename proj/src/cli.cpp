#include "tockcheck/cli.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "tockcheck/dsl.hpp"
#include "tockcheck/machine.hpp"

namespace tockcheck {

using nlohmann::json;

std::string_view to_string(ReportRow::Result r)
{
    switch (r) {
    case ReportRow::Result::pass: return "pass";
    case ReportRow::Result::fail: return "fail";
    case ReportRow::Result::error: return "error";
    }
    return "?";
}

int RunReport::exit_code() const
{
    int code = 0;
    for (const auto& r : rows) {
        if (r.result == ReportRow::Result::error) return 2;
        if (r.result == ReportRow::Result::fail) code = 1;
    }
    return code;
}

namespace {

ReportRow row_of(const AssertionResult& r, double total)
{
    ReportRow row;
    row.name = r.name;
    row.kind = r.kind;
    row.total_seconds = total;
    row.compile_seconds = r.verdict.stats.compile_seconds;
    row.verify_seconds = r.verdict.stats.verify_seconds;
    row.states = r.verdict.stats.states;
    row.transitions = r.verdict.stats.transitions;
    if (r.error) {
        row.result = ReportRow::Result::error;
        row.error = r.error;
    } else {
        row.result = r.verdict.passed ? ReportRow::Result::pass : ReportRow::Result::fail;
        row.counterexample = r.verdict.counterexample;
    }
    return row;
}

}  // namespace

void describe_config(const ModelFile& model, RunReport& report)
{
    for (const auto& t : model.types) {
        if (t.kind == TypeDecl::Kind::range) report.ranges[t.name] = t.range;
    }
    for (const auto& c : model.constants) {
        if (c.value) {
            try {
                report.constants[c.name] = eval_expr(*c.value, report.constants);
            } catch (const EvalError&) {
                // Constants that are not plain integers are left out of the echo.
            }
        }
    }
}

RunReport run_checks(const ModelFile& model, const AssertionFile& file, const CheckOptions& options)
{
    RunReport report;
    report.max_states = options.max_states;
    report.jobs = std::max(1u, options.jobs);
    describe_config(model, report);

    const auto assertions = file.assertions();
    std::vector<AssertionResult> results(assertions.size());
    std::vector<double> totals(assertions.size());
    std::atomic<std::size_t> next{0};
    RunOptions ro;
    ro.max_states = options.max_states;
    auto worker = [&] {
        for (std::size_t i = next++; i < assertions.size(); i = next++) {
            const auto start = std::chrono::steady_clock::now();
            results[i] = run_assertion_safely(model, file, *assertions[i], ro);
            totals[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        }
    };
    const unsigned n = std::min<unsigned>(report.jobs, std::max<std::size_t>(1, assertions.size()));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::set<std::string> seen;
    for (std::size_t i = 0; i < results.size(); ++i) {
        report.rows.push_back(row_of(results[i], totals[i]));
        for (const auto& s : results[i].unreachable_states) {
            if (seen.insert(s).second) report.warnings.push_back("state " + s + " is unreachable");
        }
    }
    return report;
}

namespace {

std::string fixed(double v, int digits = 3)
{
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

std::string config_line(const std::map<std::string, IntRange>& ranges, const std::map<std::string, long long>& constants)
{
    std::string out;
    for (const auto& [k, r] : ranges) out += (out.empty() ? "" : ", ") + k + " = " + std::to_string(r.lo) + ".." + std::to_string(r.hi);
    for (const auto& [k, v] : constants) out += (out.empty() ? "" : ", ") + k + " = " + std::to_string(v);
    return out.empty() ? "(none)" : out;
}

/// Left-aligned columns separated by two spaces.
std::string columns(const std::vector<std::vector<std::string>>& rows, const std::vector<bool>& right)
{
    std::vector<std::size_t> width;
    for (const auto& r : rows) {
        width.resize(std::max(width.size(), r.size()));
        for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
    }
    std::ostringstream os;
    for (const auto& r : rows) {
        std::string line;
        for (std::size_t i = 0; i < r.size(); ++i) {
            const std::string pad(width[i] - r[i].size(), ' ');
            line += (i ? "  " : "") + (i < right.size() && right[i] ? pad + r[i] : r[i] + pad);
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        os << line << "\n";
    }
    return os.str();
}

json ranges_json(const std::map<std::string, IntRange>& ranges)
{
    json j = json::object();
    for (const auto& [k, r] : ranges) j[k] = {{"lo", r.lo}, {"hi", r.hi}};
    return j;
}

json trace_json(const Trace& t)
{
    json j = json::array();
    for (const auto& e : t) j.push_back(e.to_string());
    return j;
}

}  // namespace

std::string format_table(const RunReport& report)
{
    std::ostringstream os;
    os << "model:      " << report.model_path << "\n";
    os << "assertions: " << report.assertions_path << "\n";
    os << "config:     " << config_line(report.ranges, report.constants) << "\n\n";
    std::vector<std::vector<std::string>> rows{
        {"Assertion", "Kind", "Result", "Compile(s)", "Verify(s)", "Total(s)", "States", "Transitions"}};
    std::size_t passed = 0;
    for (const auto& r : report.rows) {
        passed += r.result == ReportRow::Result::pass;
        rows.push_back({r.name, std::string(to_string(r.kind)), std::string(to_string(r.result)), fixed(r.compile_seconds),
                        fixed(r.verify_seconds), fixed(r.total_seconds), std::to_string(r.states),
                        std::to_string(r.transitions)});
    }
    os << columns(rows, {false, false, false, true, true, true, true, true});
    for (const auto& r : report.rows) {
        if (r.error) os << "\nerror in " << r.name << ": " << *r.error << "\n";
    }
    os << "\n" << passed << "/" << report.rows.size() << " assertions pass\n";
    for (const auto& w : report.warnings) os << "warning: " << w << "\n";
    return os.str();
}

json to_json(const RunReport& report)
{
    json j;
    j["command"] = "check";
    j["model"] = report.model_path;
    j["assertions"] = report.assertions_path;
    j["config"] = {{"ranges", ranges_json(report.ranges)},
                   {"constants", report.constants},
                   {"max_states", report.max_states},
                   {"jobs", report.jobs},
                   {"seed", report.seed ? json(*report.seed) : json(nullptr)}};
    json rows = json::array();
    std::size_t counts[3] = {0, 0, 0};
    for (const auto& r : report.rows) {
        ++counts[static_cast<int>(r.result)];
        rows.push_back({{"name", r.name},
                        {"kind", std::string(to_string(r.kind))},
                        {"result", std::string(to_string(r.result))},
                        {"compile_seconds", r.compile_seconds},
                        {"verify_seconds", r.verify_seconds},
                        {"total_seconds", r.total_seconds},
                        {"states", r.states},
                        {"transitions", r.transitions},
                        {"counterexample", r.counterexample ? trace_json(*r.counterexample) : json(nullptr)},
                        {"error", r.error ? json(*r.error) : json(nullptr)}});
    }
    j["results"] = rows;
    j["summary"] = {{"passed", counts[0]}, {"failed", counts[1]}, {"errors", counts[2]}};
    j["warnings"] = report.warnings;
    j["exit_code"] = report.exit_code();
    return j;
}

StatsReport collect_stats(const ModelFile& model, std::size_t max_states)
{
    StatsReport report;
    RunReport echo;
    describe_config(model, echo);
    report.ranges = echo.ranges;
    report.constants = echo.constants;
    ExploreOptions eo;
    eo.max_states = max_states;
    eo.timed_priority = true;
    for (const auto& m : model.machines) {
        std::map<std::string, long long> bindings;
        for (const auto& c : model.controllers) {
            if (const MachineRef* ref = c.instance(m.name)) {
                bindings = evaluate_bindings(model, *ref);
                break;
            }
        }
        Environment env;
        CompiledMachine cm = compile_machine(model, m, bindings, env);
        const Lts lts = explode(cm.process, env, eo);
        report.rows.push_back({m.name, "machine", lts.state_count(), lts.transition_count(), cm.configurations});
        for (const auto& s : cm.unreachable_states) report.warnings.push_back("state " + m.name + "." + s + " is unreachable");
    }
    for (const auto& c : model.controllers) {
        Environment env;
        ComposedSystem sys = compose_controller(model, c, env);
        const Lts lts = explode(sys.process, env, eo);
        std::size_t configurations = 0;
        for (const auto& m : sys.machines) configurations += m.configurations;
        report.rows.push_back({c.name, "controller", lts.state_count(), lts.transition_count(), configurations});
    }
    return report;
}

std::string format_table(const StatsReport& report)
{
    std::ostringstream os;
    os << "model:  " << report.model_path << "\n";
    os << "config: " << config_line(report.ranges, report.constants) << "\n\n";
    std::vector<std::vector<std::string>> rows{{"Process", "Kind", "Configurations", "States", "Transitions"}};
    for (const auto& r : report.rows) {
        rows.push_back({r.name, r.kind, std::to_string(r.configurations), std::to_string(r.states), std::to_string(r.transitions)});
    }
    os << columns(rows, {false, false, true, true, true});
    for (const auto& w : report.warnings) os << "warning: " << w << "\n";
    return os.str();
}

json to_json(const StatsReport& report)
{
    json rows = json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"name", r.name},
                        {"kind", r.kind},
                        {"configurations", r.configurations},
                        {"states", r.states},
                        {"transitions", r.transitions}});
    }
    return {{"command", "stats"},
            {"model", report.model_path},
            {"config", {{"ranges", ranges_json(report.ranges)}, {"constants", report.constants}}},
            {"processes", rows},
            {"warnings", report.warnings}};
}

std::vector<TraceStep> replay_counterexample(const AssertionResult& result)
{
    std::vector<TraceStep> out;
    if (!result.verdict.counterexample || !result.impl || !result.env) return out;
    const Trace& trace = *result.verdict.counterexample;
    auto path = replay(*result.impl, trace);
    if (!path) throw std::runtime_error("counterexample of " + result.name + " does not replay");
    const auto& terms = result.impl->terms();
    for (std::size_t i = 0; i < path->size(); ++i) {
        TraceStep step{i == 0 ? EventLabel::tau() : trace[i - 1], {}};
        if ((*path)[i] < terms.size()) step.machines = configurations_of(terms[(*path)[i]], *result.env);
        out.push_back(std::move(step));
    }
    return out;
}

// ---- command line -----------------------------------------------------------

namespace {

struct CommonArgs {
    std::string model;
    std::string assertions;
    std::string core_int;
    std::string config;
    std::string format = "table";
    std::optional<std::size_t> max_states;
    unsigned jobs = 1;
    std::optional<long long> seed;
};

struct ToolError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

IntRange parse_range(const std::string& text)
{
    static const std::regex re(R"(\s*(-?\d{1,9})\s*\.\.\s*(-?\d{1,9})\s*)");
    std::smatch m;
    if (!std::regex_match(text, m, re)) throw ToolError("expected LO..HI, got '" + text + "'");
    IntRange r{std::stoi(m[1]), std::stoi(m[2])};
    if (r.lo > r.hi) throw ToolError("empty range '" + text + "'");
    return r;
}

std::size_t state_limit(const CommonArgs& a)
{
    if (a.max_states) return *a.max_states;
    if (const char* env = std::getenv("TOCKCHECK_MAX_STATES"); env && *env) {
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(env, &used);
            if (used == std::string(env).size() && v > 0) return v;
        } catch (const std::exception&) {
        }
        throw ToolError(std::string("TOCKCHECK_MAX_STATES must be a positive integer, got '") + env + "'");
    }
    return default_state_limit;
}

ModelFile configured_model(const CommonArgs& a)
{
    ModelFile model = load_model(a.model);
    ModelConfig cfg;
    if (!a.config.empty()) {
        const ConfigDecl* d = model.config(a.config);
        if (!d) throw ToolError("model has no config '" + a.config + "'");
        cfg.merge(config_from(*d));
    }
    if (!a.core_int.empty()) cfg.ranges["core_int"] = parse_range(a.core_int);
    try {
        return apply_config(std::move(model), cfg);
    } catch (const std::invalid_argument& e) {
        throw ToolError(e.what());
    }
}

std::string assertion_path(const CommonArgs& a)
{
    if (!a.assertions.empty()) return a.assertions;
    std::filesystem::path p(a.model);
    p.replace_extension(".twassert");
    if (!std::filesystem::exists(p)) throw ToolError("no assertion file given and " + p.string() + " does not exist");
    return p.string();
}

void add_common(CLI::App* app, CommonArgs& a, bool assertions)
{
    app->add_option("model", a.model, "Model file (.twmodel)")->required();
    if (assertions) app->add_option("--assert", a.assertions, "Assertion file (.twassert); defaults to the model's sibling");
    app->add_option("--core-int", a.core_int, "Range of the core_int type, LO..HI");
    app->add_option("--config", a.config, "Apply a named config block of the model");
    app->add_option("--format", a.format, "Output format")->check(CLI::IsMember({"table", "json"}));
    app->add_option("--max-states", a.max_states, "State limit per exploration (also TOCKCHECK_MAX_STATES)")
        ->check(CLI::PositiveNumber);
    app->add_option("--jobs", a.jobs, "Assertions checked in parallel")->check(CLI::PositiveNumber);
    app->add_option("--seed", a.seed, "Seed recorded in the report for randomised tooling");
}

int cmd_check(const CommonArgs& a, std::ostream& out)
{
    const ModelFile model = configured_model(a);
    const std::string apath = assertion_path(a);
    const AssertionFile file = load_assertions(apath, model);
    RunReport report = run_checks(model, file, {state_limit(a), a.jobs});
    report.model_path = a.model;
    report.assertions_path = apath;
    report.seed = a.seed;
    if (a.format == "json") out << to_json(report).dump(2) << "\n";
    else out << format_table(report);
    return report.exit_code();
}

int cmd_trace(const CommonArgs& a, const std::string& name, std::ostream& out)
{
    const ModelFile model = configured_model(a);
    const AssertionFile file = load_assertions(assertion_path(a), model);
    const AssertionDecl* decl = file.assertion(name);
    if (!decl) throw ToolError("no assertion named '" + name + "'");
    RunOptions ro;
    ro.max_states = state_limit(a);
    const AssertionResult r = run_assertion_safely(model, file, *decl, ro);
    if (r.error) throw ToolError(*r.error);
    if (r.verdict.passed) {
        if (a.format == "json") {
            out << json{{"command", "trace"}, {"assertion", name}, {"result", "pass"}, {"steps", json::array()}}.dump(2) << "\n";
        } else {
            out << "assertion " << name << " passes; no counterexample\n";
        }
        return 1;
    }
    const auto steps = replay_counterexample(r);
    auto render = [](const std::vector<ConfigInfo>& ms) {
        if (ms.empty()) return std::string("(terminated)");
        std::string s;
        for (const auto& c : ms) {
            s += (s.empty() ? "" : "  ") + c.machine + "=" + c.location;
            if (!c.valuation.empty()) s += " " + c.valuation;
        }
        return s;
    };
    if (a.format == "json") {
        json js = json::array();
        for (std::size_t i = 1; i < steps.size(); ++i) {
            json ms = json::array();
            for (const auto& c : steps[i].machines) {
                ms.push_back({{"machine", c.machine}, {"state", c.location}, {"variables", c.valuation}});
            }
            js.push_back({{"event", steps[i].event.to_string()}, {"machines", ms}});
        }
        out << json{{"command", "trace"}, {"assertion", name}, {"kind", std::string(to_string(r.kind))}, {"result", "fail"},
                    {"steps", js}}
                   .dump(2)
            << "\n";
        return 0;
    }
    out << "counterexample for " << name << " (" << to_string(r.kind) << "), " << (steps.size() - 1) << " events\n";
    std::vector<std::vector<std::string>> rows{{"#", "event", "machines afterwards"}};
    rows.push_back({"0", "(start)", render(steps.at(0).machines)});
    for (std::size_t i = 1; i < steps.size(); ++i) {
        rows.push_back({std::to_string(i), steps[i].event.to_string(), render(steps[i].machines)});
    }
    out << columns(rows, {true, false, false});
    return 0;
}

int cmd_stats(const CommonArgs& a, std::ostream& out)
{
    const ModelFile model = configured_model(a);
    StatsReport report = collect_stats(model, state_limit(a));
    report.model_path = a.model;
    if (a.format == "json") out << to_json(report).dump(2) << "\n";
    else out << format_table(report);
    return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"tockcheck: discrete-time refinement checker for state-machine models", "tockcheck"};
    app.require_subcommand(1);
    CommonArgs check_args, trace_args, stats_args;
    std::string trace_name;
    auto* check = app.add_subcommand("check", "Run every assertion and print a result table");
    add_common(check, check_args, true);
    auto* trace = app.add_subcommand("trace", "Print and replay the counterexample of one assertion");
    add_common(trace, trace_args, true);
    trace->add_option("assertion", trace_name, "Assertion name")->required();
    auto* stats = app.add_subcommand("stats", "Print state-space statistics per machine and controller");
    add_common(stats, stats_args, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    try {
        if (*check) return cmd_check(check_args, out);
        if (*trace) return cmd_trace(trace_args, trace_name, out);
        return cmd_stats(stats_args, out);
    } catch (const DslError& e) {
        for (const auto& d : e.diagnostics()) err << d.to_string() << "\n";
    } catch (const std::exception& e) {
        err << "tockcheck: " << e.what() << "\n";
    }
    return 2;
}

}  // namespace tockcheck
