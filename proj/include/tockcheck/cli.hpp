#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tockcheck/assertions.hpp"
#include "tockcheck/model.hpp"

namespace tockcheck {

struct CheckOptions {
    std::size_t max_states = default_state_limit;
    unsigned jobs = 1;
};

struct ReportRow {
    std::string name;
    AssertionDecl::Kind kind = AssertionDecl::Kind::refines;
    enum class Result { pass, fail, error } result = Result::pass;
    double compile_seconds = 0;
    double verify_seconds = 0;
    double total_seconds = 0;
    std::size_t states = 0;
    std::size_t transitions = 0;
    std::optional<Trace> counterexample;
    std::optional<std::string> error;
};

struct RunReport {
    std::string model_path;
    std::string assertions_path;
    /// Range types and constants after configuration, for the echo.
    std::map<std::string, IntRange> ranges;
    std::map<std::string, long long> constants;
    std::size_t max_states = default_state_limit;
    unsigned jobs = 1;
    std::optional<long long> seed;
    std::vector<ReportRow> rows;
    std::vector<std::string> warnings;

    /// 0 when every assertion passes, 1 when one fails, 2 on a tool error.
    int exit_code() const;
};

std::string_view to_string(ReportRow::Result r);

/// Runs every assertion of `file` (in parallel with `jobs` workers); rows
/// stay in declaration order.
RunReport run_checks(const ModelFile& model, const AssertionFile& file, const CheckOptions& options = {});

/// Fills the configuration echo of `report` from `model`.
void describe_config(const ModelFile& model, RunReport& report);

std::string format_table(const RunReport& report);
nlohmann::json to_json(const RunReport& report);

/// State-space figures for one process.
struct StatsRow {
    std::string name;
    std::string kind;  // "machine" or "controller"
    std::size_t states = 0;
    std::size_t transitions = 0;
    std::size_t configurations = 0;
};

struct StatsReport {
    std::string model_path;
    std::map<std::string, IntRange> ranges;
    std::map<std::string, long long> constants;
    std::vector<StatsRow> rows;
    std::vector<std::string> warnings;
};

StatsReport collect_stats(const ModelFile& model, std::size_t max_states = default_state_limit);
std::string format_table(const StatsReport& report);
nlohmann::json to_json(const StatsReport& report);

/// One step of a replayed counterexample: the event and, for every machine,
/// the control state and variable values reached after it.
struct TraceStep {
    EventLabel event;
    std::vector<ConfigInfo> machines;
};

/// Replays `result`'s counterexample on its implementation. Element 0 holds
/// the initial configuration and a tau label.
std::vector<TraceStep> replay_counterexample(const AssertionResult& result);

/// Full command-line driver: `tockcheck check|trace|stats ...`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tockcheck
