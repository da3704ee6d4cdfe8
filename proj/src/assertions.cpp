#include "tockcheck/assertions.hpp"

#include <chrono>

#include "tockcheck/machine.hpp"

namespace tockcheck {

ProcExpr ProcExpr::ref(std::string n)
{
    ProcExpr p;
    p.name = std::move(n);
    return p;
}

ProcExpr ProcExpr::stop()
{
    ProcExpr p;
    p.kind = Kind::stop;
    return p;
}

ProcExpr ProcExpr::skip()
{
    ProcExpr p;
    p.kind = Kind::skip;
    return p;
}

ProcExpr ProcExpr::hide(ProcExpr inner, EventSet s)
{
    ProcExpr p;
    p.kind = Kind::hide;
    p.operand.push_back(std::move(inner));
    p.events = std::move(s);
    return p;
}

ProcExpr ProcExpr::constrain(ProcExpr inner, EventSet s)
{
    ProcExpr p = hide(std::move(inner), std::move(s));
    p.kind = Kind::constrain;
    return p;
}

std::string_view to_string(AssertionDecl::Kind k)
{
    switch (k) {
    case AssertionDecl::Kind::refines: return "refines";
    case AssertionDecl::Kind::timelock_free: return "timelock-free";
    case AssertionDecl::Kind::does_not_terminate: return "does-not-terminate";
    }
    return "?";
}

std::vector<const AssertionDecl*> AssertionFile::assertions() const
{
    std::vector<const AssertionDecl*> out;
    for (const auto& s : statements) {
        if (auto* a = std::get_if<AssertionDecl>(&s)) out.push_back(a);
    }
    return out;
}

namespace {

template <typename T>
const T* find_statement(const std::vector<Statement>& xs, const std::string& name)
{
    for (const auto& s : xs) {
        if (auto* d = std::get_if<T>(&s); d && d->name == name) return d;
    }
    return nullptr;
}

constexpr int max_process_depth = 64;

}  // namespace

const AssertionDecl* AssertionFile::assertion(const std::string& name) const
{
    return find_statement<AssertionDecl>(statements, name);
}
const SpecDecl* AssertionFile::spec(const std::string& name) const { return find_statement<SpecDecl>(statements, name); }
const ProcessDecl* AssertionFile::process(const std::string& name) const
{
    return find_statement<ProcessDecl>(statements, name);
}

ProcessResolver::ProcessResolver(const ModelFile& model, const AssertionFile& file, Environment& env)
    : model_(model), file_(file), env_(env)
{
}

TermPtr ProcessResolver::resolve(const ProcExpr& p) { return resolve(p, 0); }

TermPtr ProcessResolver::resolve(const ProcExpr& p, int depth)
{
    switch (p.kind) {
    case ProcExpr::Kind::name: return resolve_name(p.name, p.span, depth);
    case ProcExpr::Kind::stop: return term::stop();
    case ProcExpr::Kind::skip: return term::skip();
    case ProcExpr::Kind::hide: return term::hide(resolve(p.operand.at(0), depth), p.events);
    case ProcExpr::Kind::constrain: return constrain_skip(resolve(p.operand.at(0), depth), p.events);
    }
    return term::stop();
}

TermPtr ProcessResolver::resolve_name(const std::string& name, const SourceSpan& span, int depth)
{
    if (auto it = cache_.find(name); it != cache_.end()) return it->second;
    if (depth > max_process_depth) throw CompileError("process '" + name + "' is defined in terms of itself", span);
    TermPtr out;
    if (const ProcessDecl* d = file_.process(name)) {
        out = resolve(d->body, depth + 1);
    } else if (const SpecDecl* s = file_.spec(name)) {
        out = build_deadline_spec(env_, "spec." + name, s->over, s->watch, s->require, s->within);
    } else if (const Machine* m = model_.machine(name)) {
        std::map<std::string, long long> bindings;
        for (const auto& c : model_.controllers) {
            if (const MachineRef* ref = c.instance(name)) {
                bindings = evaluate_bindings(model_, *ref);
                break;
            }
        }
        auto compiled = compile_machine(model_, *m, bindings, env_);
        for (const auto& s : compiled.unreachable_states) unreachable_.push_back(name + "." + s);
        out = compiled.process;
    } else if (const Controller* c = model_.controller(name)) {
        auto composed = compose_controller(model_, *c, env_);
        for (const auto& m : composed.machines) {
            for (const auto& s : m.unreachable_states) unreachable_.push_back(m.name + "." + s);
        }
        out = composed.process;
    } else {
        throw CompileError("unknown process '" + name + "'", span);
    }
    cache_[name] = out;
    return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

}  // namespace

AssertionResult run_assertion(const ModelFile& model, const AssertionFile& file, const AssertionDecl& a,
                              const RunOptions& options)
{
    AssertionResult r;
    r.name = a.name;
    r.kind = a.kind;
    r.env = std::make_shared<Environment>();
    const auto start = Clock::now();

    ProcessResolver resolver(model, file, *r.env);
    TermPtr impl = resolver.resolve(a.impl);
    TermPtr spec = a.kind == AssertionDecl::Kind::refines ? resolver.resolve(*a.spec) : nullptr;
    r.unreachable_states = resolver.unreachable_states();

    ExploreOptions eo;
    eo.max_states = options.max_states;
    eo.timed_priority = true;
    eo.keep_terms = true;
    auto impl_lts = std::make_shared<Lts>(explode(impl, *r.env, eo));
    r.impl = impl_lts;
    std::optional<Lts> spec_lts;
    if (spec) {
        eo.keep_terms = false;
        spec_lts = explode(spec, *r.env, eo);
    }
    const double compile = since(start);

    switch (a.kind) {
    case AssertionDecl::Kind::refines: {
        RefinementOptions ro;
        ro.max_product_states = options.max_states;
        r.verdict = traces_refines(*spec_lts, *impl_lts, ro);
        break;
    }
    case AssertionDecl::Kind::timelock_free: r.verdict = timelock_free(*impl_lts); break;
    case AssertionDecl::Kind::does_not_terminate: r.verdict = does_not_terminate(*impl_lts); break;
    }
    r.verdict.stats.compile_seconds = compile;
    return r;
}

AssertionResult run_assertion_safely(const ModelFile& model, const AssertionFile& file, const AssertionDecl& a,
                                     const RunOptions& options)
{
    try {
        return run_assertion(model, file, a, options);
    } catch (const ResourceError& e) {
        AssertionResult r;
        r.name = a.name;
        r.kind = a.kind;
        r.error = e.what();
        r.verdict.stats = e.partial();
        return r;
    } catch (const std::exception& e) {
        AssertionResult r;
        r.name = a.name;
        r.kind = a.kind;
        r.error = e.what();
        return r;
    }
}

std::vector<ConfigInfo> configurations_of(const TermPtr& t, const Environment& env)
{
    std::vector<ConfigInfo> out;
    std::vector<TermPtr> stack{t};
    while (!stack.empty()) {
        TermPtr x = stack.back();
        stack.pop_back();
        if (x->kind() == TermKind::named_ref) {
            if (const Definition* d = env.find(x->name()); d && d->config) out.push_back(*d->config);
            continue;
        }
        const auto& ops = x->operands();
        for (auto it = ops.rbegin(); it != ops.rend(); ++it) stack.push_back(*it);
    }
    return out;
}

}  // namespace tockcheck
