#include "tockcheck/expr.hpp"

#include <cstdlib>

namespace tockcheck {

TypeSystem::TypeSystem(const ModelFile& model) : model_(&model)
{
    for (const auto& t : model.types) {
        if (t.kind != TypeDecl::Kind::enumeration) continue;
        for (std::size_t i = 0; i < t.literals.size(); ++i) literals_.emplace(t.literals[i], static_cast<long long>(i));
    }
}

const TypeDecl* TypeSystem::resolve(const TypeRef& t) const
{
    if (t.kind != TypeRef::Kind::named) return nullptr;
    const TypeDecl* d = model_->type(t.name);
    if (!d) throw std::invalid_argument("unknown type '" + t.name + "'");
    return d;
}

std::vector<IntRange> TypeSystem::domains(const TypeRef& t) const
{
    switch (t.kind) {
    case TypeRef::Kind::boolean: return {{0, 1}};
    case TypeRef::Kind::range: return {t.range};
    case TypeRef::Kind::named: break;
    }
    const TypeDecl* d = resolve(t);
    switch (d->kind) {
    case TypeDecl::Kind::range: return {d->range};
    case TypeDecl::Kind::enumeration: return {{0, static_cast<int>(d->literals.size()) - 1}};
    case TypeDecl::Kind::record: break;
    }
    std::vector<IntRange> out;
    for (const auto& f : d->fields) {
        auto sub = domains(f.type);
        out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
}

std::vector<std::string> TypeSystem::paths(const TypeRef& t) const
{
    const TypeDecl* d = resolve(t);
    if (!d || d->kind != TypeDecl::Kind::record) return {""};
    std::vector<std::string> out;
    for (const auto& f : d->fields) {
        for (const auto& p : paths(f.type)) out.push_back("." + f.name + p);
    }
    return out;
}

bool TypeSystem::is_record(const TypeRef& t) const
{
    const TypeDecl* d = resolve(t);
    return d && d->kind == TypeDecl::Kind::record;
}

std::optional<long long> TypeSystem::enum_literal(const std::string& name) const
{
    auto it = literals_.find(name);
    if (it == literals_.end()) return std::nullopt;
    return it->second;
}

std::string TypeSystem::render(const TypeRef& t, std::size_t leaf, long long v) const
{
    if (t.kind == TypeRef::Kind::boolean) return v ? "true" : "false";
    const TypeDecl* d = resolve(t);
    if (!d) return std::to_string(v);
    if (d->kind == TypeDecl::Kind::enumeration && v >= 0 && v < static_cast<long long>(d->literals.size())) {
        return d->literals[static_cast<std::size_t>(v)];
    }
    if (d->kind == TypeDecl::Kind::record) {
        for (const auto& f : d->fields) {
            const std::size_t n = domains(f.type).size();
            if (leaf < n) return render(f.type, leaf, v);
            leaf -= n;
        }
    }
    return std::to_string(v);
}

std::optional<Value> MapScope::lookup(const std::string& name) const
{
    auto it = values_.find(name);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

namespace {

constexpr int max_call_depth = 64;

long long checked(long long v, const Expr& e)
{
    if (v > eval_bound || v < -eval_bound) {
        throw EvalError("intermediate value " + std::to_string(v) + " is out of range", e.span);
    }
    return v;
}

class EmptyScope : public Scope {
public:
    std::optional<Value> lookup(const std::string&) const override { return std::nullopt; }
};

}  // namespace

Evaluator::Evaluator(const TypeSystem& types) : types_(&types)
{
    EmptyScope none;
    for (const auto& c : types.model().constants) {
        if (!c.value) throw EvalError("constant '" + c.name + "' has no value", c.span);
        constants_[c.name] = scalar(*c.value, none);
    }
}

Value Evaluator::eval(const Expr& e, const Scope& scope) const { return eval(e, scope, 0); }

long long Evaluator::scalar(const Expr& e, const Scope& scope) const { return scalar(e, scope, 0); }

long long Evaluator::scalar(const Expr& e, const Scope& scope, int depth) const
{
    Value v = eval(e, scope, depth);
    if (v.size() != 1) throw EvalError("expected a scalar value", e.span);
    return v[0];
}

Value Evaluator::eval(const Expr& e, const Scope& scope, int depth) const
{
    using Op = Expr::Op;
    auto arg = [&](std::size_t i) { return scalar(e.args.at(i), scope, depth); };
    switch (e.op) {
    case Op::integer: return {checked(e.value, e)};
    case Op::boolean: return {e.value != 0 ? 1 : 0};
    case Op::name: {
        if (auto v = scope.lookup(e.name)) return *v;
        if (auto it = constants_.find(e.name); it != constants_.end()) return {it->second};
        if (auto lit = types_->enum_literal(e.name)) return {*lit};
        throw EvalError("unbound name '" + e.name + "'", e.span);
    }
    case Op::neg: return {checked(-arg(0), e)};
    case Op::not_: return {arg(0) == 0 ? 1 : 0};
    case Op::add: return {checked(arg(0) + arg(1), e)};
    case Op::sub: return {checked(arg(0) - arg(1), e)};
    case Op::eq: return {eval(e.args.at(0), scope, depth) == eval(e.args.at(1), scope, depth) ? 1 : 0};
    case Op::ne: return {eval(e.args.at(0), scope, depth) != eval(e.args.at(1), scope, depth) ? 1 : 0};
    case Op::lt: return {arg(0) < arg(1) ? 1 : 0};
    case Op::le: return {arg(0) <= arg(1) ? 1 : 0};
    case Op::gt: return {arg(0) > arg(1) ? 1 : 0};
    case Op::ge: return {arg(0) >= arg(1) ? 1 : 0};
    case Op::and_: return {arg(0) != 0 && arg(1) != 0 ? 1 : 0};
    case Op::or_: return {arg(0) != 0 || arg(1) != 0 ? 1 : 0};
    case Op::call: break;
    }

    if (e.name == "abs") {
        if (e.args.size() != 1) throw EvalError("abs takes one argument", e.span);
        return {checked(std::llabs(arg(0)), e)};
    }
    const FunctionDecl* f = types_->model().function(e.name);
    if (!f) throw EvalError("unknown function '" + e.name + "'", e.span);
    if (f->params.size() != e.args.size()) {
        throw EvalError("function '" + e.name + "' takes " + std::to_string(f->params.size()) + " arguments", e.span);
    }
    if (depth >= max_call_depth) throw EvalError("call depth exceeded in '" + e.name + "'", e.span);
    MapScope locals;
    for (std::size_t i = 0; i < f->params.size(); ++i) {
        Value v = eval(e.args[i], scope, depth);
        const auto doms = types_->domains(f->params[i].type);
        if (doms.size() != v.size()) throw EvalError("argument shape mismatch for '" + f->params[i].name + "'", e.args[i].span);
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (!doms[k].contains(v[k])) {
                throw EvalError("argument " + std::to_string(v[k]) + " is outside the type of '" + f->params[i].name + "'",
                                e.args[i].span);
            }
        }
        const auto paths = types_->paths(f->params[i].type);
        locals.set(f->params[i].name, v);
        if (paths.size() > 1 || !paths[0].empty()) {
            for (std::size_t k = 0; k < paths.size(); ++k) locals.set(f->params[i].name + paths[k], {v[k]});
        }
    }
    return eval(f->body, locals, depth + 1);
}

long long eval_expr(const Expr& e, const std::map<std::string, long long>& valuation)
{
    static const ModelFile empty;
    static const TypeSystem types(empty);
    Evaluator ev(types);
    MapScope scope;
    for (const auto& [k, v] : valuation) scope.set(k, {v});
    return ev.scalar(e, scope);
}

void collect_names(const Expr& e, std::vector<std::string>& out)
{
    if (e.op == Expr::Op::name) out.push_back(e.name);
    for (const auto& a : e.args) collect_names(a, out);
}

namespace ex {

Expr integer(long long v)
{
    if (v < 0) return unary(Expr::Op::neg, integer(-v));
    Expr e;
    e.value = v;
    return e;
}

Expr boolean(bool b)
{
    Expr e;
    e.op = Expr::Op::boolean;
    e.value = b ? 1 : 0;
    return e;
}

Expr name(std::string n)
{
    Expr e;
    e.op = Expr::Op::name;
    e.name = std::move(n);
    return e;
}

Expr unary(Expr::Op op, Expr a)
{
    Expr e;
    e.op = op;
    e.args.push_back(std::move(a));
    return e;
}

Expr binary(Expr::Op op, Expr a, Expr b)
{
    Expr e;
    e.op = op;
    e.args.push_back(std::move(a));
    e.args.push_back(std::move(b));
    return e;
}

Expr call(std::string f, std::vector<Expr> args)
{
    Expr e;
    e.op = Expr::Op::call;
    e.name = std::move(f);
    e.args = std::move(args);
    return e;
}

}  // namespace ex

}  // namespace tockcheck
