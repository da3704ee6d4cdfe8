#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tockcheck/checker.hpp"
#include "tockcheck/lts.hpp"
#include "tockcheck/model.hpp"

namespace tockcheck {

/// Process expression of an assertion file.
struct ProcExpr {
    enum class Kind { name, stop, skip, hide, constrain };
    Kind kind = Kind::name;
    std::string name;
    std::vector<ProcExpr> operand;  // hide / constrain: exactly one
    EventSet events;                // hide / constrain
    SourceSpan span;

    static ProcExpr ref(std::string n);
    static ProcExpr stop();
    static ProcExpr skip();
    static ProcExpr hide(ProcExpr p, EventSet s);
    static ProcExpr constrain(ProcExpr p, EventSet s);

    friend bool operator==(const ProcExpr&, const ProcExpr&) = default;
};

/// `spec N = watch W require R within n over A.`: anything over A until an
/// event of W; then an event of R must follow within n tocks; repeat.
struct SpecDecl {
    std::string name;
    EventSet watch;
    EventSet require;
    int within = 0;
    EventSet over;
    SourceSpan span;
    friend bool operator==(const SpecDecl&, const SpecDecl&) = default;
};

struct ProcessDecl {
    std::string name;
    ProcExpr body;
    SourceSpan span;
    friend bool operator==(const ProcessDecl&, const ProcessDecl&) = default;
};

struct AssertionDecl {
    enum class Kind { refines, timelock_free, does_not_terminate };
    Kind kind = Kind::refines;
    std::string name;
    std::optional<ProcExpr> spec;  // refines only
    ProcExpr impl;
    SourceSpan span;
    friend bool operator==(const AssertionDecl&, const AssertionDecl&) = default;
};

std::string_view to_string(AssertionDecl::Kind k);

using Statement = std::variant<SpecDecl, ProcessDecl, AssertionDecl>;

struct AssertionFile {
    std::vector<Statement> statements;

    std::vector<const AssertionDecl*> assertions() const;
    const AssertionDecl* assertion(const std::string& name) const;
    const SpecDecl* spec(const std::string& name) const;
    const ProcessDecl* process(const std::string& name) const;
    friend bool operator==(const AssertionFile&, const AssertionFile&) = default;
};

struct RunOptions {
    std::size_t max_states = default_state_limit;
};

/// Everything produced while checking one assertion. The environment and
/// the implementation's transition system stay alive for trace replay.
struct AssertionResult {
    std::string name;
    AssertionDecl::Kind kind = AssertionDecl::Kind::refines;
    Verdict verdict;
    std::optional<std::string> error;  // tool error; verdict is meaningless then
    std::shared_ptr<Environment> env;
    std::shared_ptr<const Lts> impl;
    /// Model states that can never be entered, per machine (`M.state`).
    std::vector<std::string> unreachable_states;
};

/// Resolves process names against a model: a machine name compiles that
/// machine alone (constants bound as in the first controller using it), a
/// controller name gives the composed controller, and names declared in the
/// assertion file resolve to their definitions.
class ProcessResolver {
public:
    ProcessResolver(const ModelFile& model, const AssertionFile& file, Environment& env);

    TermPtr resolve(const ProcExpr& p);
    const std::vector<std::string>& unreachable_states() const { return unreachable_; }

private:
    TermPtr resolve_name(const std::string& name, const SourceSpan& span, int depth);
    TermPtr resolve(const ProcExpr& p, int depth);

    const ModelFile& model_;
    const AssertionFile& file_;
    Environment& env_;
    std::map<std::string, TermPtr> cache_;
    std::vector<std::string> unreachable_;
};

/// Throws on name-resolution and compilation problems; check failures are
/// reported in the verdict.
AssertionResult run_assertion(const ModelFile& model, const AssertionFile& file, const AssertionDecl& assertion,
                              const RunOptions& options = {});

/// Like run_assertion, but tool errors are captured in `error`.
AssertionResult run_assertion_safely(const ModelFile& model, const AssertionFile& file, const AssertionDecl& assertion,
                                     const RunOptions& options = {});

/// Machine configurations inside a process term, in the order they occur.
std::vector<ConfigInfo> configurations_of(const TermPtr& t, const Environment& env);

}  // namespace tockcheck
