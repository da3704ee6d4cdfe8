#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tockcheck/event.hpp"

namespace tockcheck {

/// Location of a parsed construct. Spans never take part in equality, so two
/// models that differ only in layout compare equal.
struct SourceSpan {
    std::string file;
    int line = 1;
    int column = 1;
    int length = 0;

    friend bool operator==(const SourceSpan&, const SourceSpan&) { return true; }
};

struct TypeRef {
    enum class Kind { boolean, range, named };
    Kind kind = Kind::boolean;
    IntRange range;    // Kind::range
    std::string name;  // Kind::named
    SourceSpan span;

    static TypeRef boolean() { return {}; }
    static TypeRef ranged(int lo, int hi) { return {Kind::range, {lo, hi}, {}, {}}; }
    static TypeRef named(std::string n) { return {Kind::named, {}, std::move(n), {}}; }

    friend bool operator==(const TypeRef&, const TypeRef&) = default;
};

struct Expr {
    enum class Op {
        integer,
        boolean,
        name,  // variable, field path (`m.time`), constant or enum literal
        neg,
        not_,
        add,
        sub,
        eq,
        ne,
        lt,
        le,
        gt,
        ge,
        and_,
        or_,
        call,  // `abs` or a model function; callee in `name`
    };
    Op op = Op::integer;
    long long value = 0;
    std::string name;
    std::vector<Expr> args;
    SourceSpan span;

    friend bool operator==(const Expr&, const Expr&) = default;
};

struct Action {
    enum class Kind {
        assign,  // target := args[0]
        emit,    // target! or target!args[0]
        call,    // target(args...)
    };
    Kind kind = Kind::assign;
    std::string target;
    std::vector<Expr> args;
    SourceSpan span;

    friend bool operator==(const Action&, const Action&) = default;
};

enum class VarKind { local, shared, external };

struct VarDecl {
    std::string name;
    TypeRef type;
    std::optional<Expr> init;
    VarKind kind = VarKind::local;
    SourceSpan span;
    friend bool operator==(const VarDecl&, const VarDecl&) = default;
};

struct ConstDecl {
    std::string name;
    std::optional<TypeRef> type;
    std::optional<Expr> value;
    SourceSpan span;
    friend bool operator==(const ConstDecl&, const ConstDecl&) = default;
};

struct EventDecl {
    std::string name;
    Direction direction = Direction::none;
    std::optional<TypeRef> type;
    SourceSpan span;
    friend bool operator==(const EventDecl&, const EventDecl&) = default;
};

struct Param {
    std::string name;
    TypeRef type;
    SourceSpan span;
    friend bool operator==(const Param&, const Param&) = default;
};

struct OperationDecl {
    std::string name;
    std::vector<Param> params;
    SourceSpan span;
    friend bool operator==(const OperationDecl&, const OperationDecl&) = default;
};

struct StateDecl {
    enum class Kind { state, junction, final };
    Kind kind = Kind::state;
    std::string name;
    std::vector<Action> entry;
    std::vector<Action> exit;
    SourceSpan span;
    friend bool operator==(const StateDecl&, const StateDecl&) = default;
};

struct Trigger {
    std::string event;
    std::optional<std::string> binder;
    SourceSpan span;
    friend bool operator==(const Trigger&, const Trigger&) = default;
};

struct Transition {
    std::string source;
    std::string target;
    std::optional<Trigger> trigger;
    std::optional<Expr> guard;
    std::vector<Action> actions;
    SourceSpan span;
    friend bool operator==(const Transition&, const Transition&) = default;
};

struct Machine {
    std::string name;
    std::vector<std::string> requires_;
    std::vector<ConstDecl> constants;
    std::vector<VarDecl> variables;
    std::vector<EventDecl> events;
    std::string initial;
    std::vector<StateDecl> nodes;
    std::vector<Transition> transitions;
    SourceSpan span;
    SourceSpan initial_span;

    const StateDecl* node(const std::string& n) const;
    const EventDecl* event(const std::string& n) const;
    const VarDecl* variable(const std::string& n) const;
    friend bool operator==(const Machine&, const Machine&) = default;
};

struct Field {
    std::string name;
    TypeRef type;
    SourceSpan span;
    friend bool operator==(const Field&, const Field&) = default;
};

struct TypeDecl {
    enum class Kind { range, enumeration, record };
    Kind kind = Kind::range;
    std::string name;
    IntRange range;
    std::vector<std::string> literals;
    std::vector<Field> fields;
    SourceSpan span;
    friend bool operator==(const TypeDecl&, const TypeDecl&) = default;
};

struct FunctionDecl {
    std::string name;
    std::vector<Param> params;
    TypeRef result;
    Expr body;
    SourceSpan span;
    friend bool operator==(const FunctionDecl&, const FunctionDecl&) = default;
};

struct InterfaceDecl {
    std::string name;
    std::vector<EventDecl> events;
    std::vector<OperationDecl> operations;
    SourceSpan span;
    friend bool operator==(const InterfaceDecl&, const InterfaceDecl&) = default;
};

struct PlatformDecl {
    std::string name;
    std::vector<std::string> provides;
    SourceSpan span;
    friend bool operator==(const PlatformDecl&, const PlatformDecl&) = default;
};

struct Binding {
    std::string name;
    Expr value;
    SourceSpan span;
    friend bool operator==(const Binding&, const Binding&) = default;
};

struct MachineRef {
    std::string machine;
    std::vector<Binding> bindings;
    SourceSpan span;
    friend bool operator==(const MachineRef&, const MachineRef&) = default;
};

/// `node.member`; node `platform` names the controller's platform.
struct Endpoint {
    std::string node;
    std::string member;
    SourceSpan span;
    std::string to_string() const { return node + "." + member; }
    friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

struct Connection {
    Endpoint from;
    Endpoint to;
    bool async = false;
    SourceSpan span;
    friend bool operator==(const Connection&, const Connection&) = default;
};

struct Share {
    Endpoint from;
    Endpoint to;
    SourceSpan span;
    friend bool operator==(const Share&, const Share&) = default;
};

struct Controller {
    std::string name;
    std::optional<std::string> platform;
    std::vector<MachineRef> machines;
    std::vector<Connection> connections;
    std::vector<Share> shares;
    SourceSpan span;

    const MachineRef* instance(const std::string& machine) const;
    friend bool operator==(const Controller&, const Controller&) = default;
};

struct ConfigEntry {
    std::string name;
    std::optional<IntRange> range;  // `name = lo..hi` retypes a range type
    std::optional<long long> value; // `name = v` rebinds a model constant
    SourceSpan span;
    friend bool operator==(const ConfigEntry&, const ConfigEntry&) = default;
};

struct ConfigDecl {
    std::string name;
    std::vector<ConfigEntry> entries;
    SourceSpan span;
    friend bool operator==(const ConfigDecl&, const ConfigDecl&) = default;
};

struct ModelFile {
    std::string name;
    std::vector<TypeDecl> types;
    std::vector<ConstDecl> constants;
    std::vector<FunctionDecl> functions;
    std::vector<InterfaceDecl> interfaces;
    std::vector<PlatformDecl> platforms;
    std::vector<Machine> machines;
    std::vector<Controller> controllers;
    std::vector<ConfigDecl> configs;

    const TypeDecl* type(const std::string& n) const;
    const Machine* machine(const std::string& n) const;
    const Controller* controller(const std::string& n) const;
    const InterfaceDecl* interface(const std::string& n) const;
    const PlatformDecl* platform(const std::string& n) const;
    const FunctionDecl* function(const std::string& n) const;
    const ConfigDecl* config(const std::string& n) const;
    friend bool operator==(const ModelFile&, const ModelFile&) = default;
};

/// Overrides applied to a model before compilation.
struct ModelConfig {
    std::map<std::string, IntRange> ranges;
    std::map<std::string, long long> constants;

    /// Later entries win.
    void merge(const ModelConfig& other);
};

ModelConfig config_from(const ConfigDecl& decl);

/// Copy of `model` with range types and global constants rebound. Throws
/// std::invalid_argument for names that are not a range type or constant.
ModelFile apply_config(ModelFile model, const ModelConfig& config);

}  // namespace tockcheck
