#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "tockcheck/expr.hpp"
#include "tockcheck/model.hpp"
#include "tockcheck/semantics.hpp"
#include "tockcheck/term.hpp"

namespace tockcheck {

class CompileError : public std::runtime_error {
public:
    CompileError(const std::string& what, SourceSpan span = {}) : std::runtime_error(what), span_(std::move(span)) {}
    const SourceSpan& span() const { return span_; }

private:
    SourceSpan span_;
};

struct ChannelName {
    std::string channel;
    Direction direction = Direction::none;
    friend bool operator==(const ChannelName&, const ChannelName&) = default;
    friend auto operator<=>(const ChannelName&, const ChannelName&) = default;
};

struct CompileOptions {
    /// Prefix of generated definition names; the machine name when empty.
    std::string prefix;
    /// Replaces the label of a machine event (keyed by its local name, or
    /// `set_<var>` for shared-variable writes) with another channel.
    std::map<std::string, ChannelName> renames;
    int max_range_width = 16;
    std::size_t max_configurations = 1'000'000;
};

struct CompiledMachine {
    std::string name;
    TermPtr process;
    /// Channels the process can perform, after renaming.
    std::vector<ChannelDecl> channels;
    /// States (including final states) that no reachable configuration enters.
    std::vector<std::string> unreachable_states;
    std::size_t configurations = 0;
};

/// Constant values for one machine instance: each `with` binding evaluated.
std::map<std::string, long long> evaluate_bindings(const ModelFile& model, const MachineRef& ref);

/// Compiles `m` into definitions in `env` and returns a reference to its
/// initial configuration. Each reachable (location, valuation) pair becomes
/// one definition. Outputs, operation calls and shared-variable writes in
/// actions are urgent; junctions and assignments take no time.
CompiledMachine compile_machine(const ModelFile& model, const Machine& m, const std::map<std::string, long long>& bindings,
                                Environment& env, const CompileOptions& options = {});

class CompositionError : public std::runtime_error {
public:
    CompositionError(const std::string& what, SourceSpan span = {}) : std::runtime_error(what), span_(std::move(span)) {}
    const SourceSpan& span() const { return span_; }

private:
    SourceSpan span_;
};

/// A process together with the channels it can perform.
struct Component {
    TermPtr process;
    std::vector<ChannelDecl> channels;
};

/// Left-nested parallel composition; each step synchronises on the channels
/// the new component shares with those already composed. Events of `low` are
/// only offered when nothing else but tock is enabled.
TermPtr compose(const std::vector<Component>& components, const EventSet& low);

/// One-slot overwrite buffer from `in` to `out` over `fields`, defined in
/// `env` under names starting with `name`.
Component make_buffer(Environment& env, const std::string& name, const ChannelName& in, const ChannelName& out,
                      const std::vector<IntRange>& fields);

struct ComposeOptions {
    int max_range_width = 16;
    std::size_t max_configurations = 1'000'000;
    /// Platform inputs only while every machine is idle.
    bool run_to_completion = true;
};

struct ComposedSystem {
    std::string name;
    TermPtr process;
    std::vector<CompiledMachine> machines;
    std::vector<ChannelDecl> channels;
    EventSet boundary_inputs;
    std::size_t buffers = 0;
};

/// Compiles every machine of `controller` with its bindings, routes events
/// along the connections and shares, and composes the result.
ComposedSystem compose_controller(const ModelFile& model, const Controller& controller, Environment& env,
                                  const ComposeOptions& options = {});

}  // namespace tockcheck
