#include <map>
#include <set>

#include "tockcheck/dsl.hpp"
#include "tockcheck/expr.hpp"

namespace tockcheck {

namespace {

class Validator {
public:
    explicit Validator(const ModelFile& f) : f_(f) {}

    std::vector<Diagnostic> run()
    {
        declarations();
        for (const auto& fn : f_.functions) function(fn);
        for (const auto& m : f_.machines) machine(m);
        for (const auto& c : f_.controllers) controller(c);
        for (const auto& c : f_.configs) config(c);
        return std::move(out_);
    }

private:
    void error(const SourceSpan& span, std::string msg) { out_.push_back({span, std::move(msg), {}}); }

    template <typename T, typename Name>
    void unique(const std::vector<T>& xs, const char* what, Name name_of)
    {
        std::set<std::string> seen;
        for (const auto& x : xs) {
            const std::string& n = name_of(x);
            if (!seen.insert(n).second) error(x.span, std::string("duplicate ") + what + " '" + n + "'");
            if (is_reserved_word(n)) error(x.span, "'" + n + "' is a reserved word");
        }
    }

    void declarations()
    {
        auto by_name = [](const auto& x) -> const std::string& { return x.name; };
        unique(f_.types, "type", by_name);
        unique(f_.constants, "constant", by_name);
        unique(f_.functions, "function", by_name);
        unique(f_.interfaces, "interface", by_name);
        unique(f_.platforms, "platform", by_name);
        unique(f_.machines, "machine", by_name);
        unique(f_.controllers, "controller", by_name);
        unique(f_.configs, "config", by_name);
        std::set<std::string> literal_seen;
        for (const auto& t : f_.types) {
            if (t.kind == TypeDecl::Kind::range && t.range.lo > t.range.hi) {
                error(t.span, "type '" + t.name + "' has an empty range");
            }
            for (const auto& l : t.literals) {
                if (!literal_seen.insert(l).second) error(t.span, "duplicate enum literal '" + l + "'");
                globals_.insert(l);
            }
            if (t.kind == TypeDecl::Kind::enumeration && t.literals.empty()) error(t.span, "enum '" + t.name + "' is empty");
            unique(t.fields, "field", [](const Field& x) -> const std::string& { return x.name; });
            for (const auto& fd : t.fields) type_ref(fd.type);
        }
        for (const auto& c : f_.constants) {
            if (c.type) type_ref(*c.type);
            if (!c.value) error(c.span, "constant '" + c.name + "' has no value");
            else expression(*c.value, globals_, "constant '" + c.name + "'");
            globals_.insert(c.name);
        }
        for (const auto& i : f_.interfaces) {
            for (const auto& e : i.events) {
                if (e.type) type_ref(*e.type);
            }
            for (const auto& op : i.operations) {
                for (const auto& p : op.params) type_ref(p.type);
            }
        }
        for (const auto& p : f_.platforms) {
            for (const auto& i : p.provides) {
                if (!f_.interface(i)) error(p.span, "platform '" + p.name + "' provides unknown interface '" + i + "'");
            }
        }
    }

    const TypeDecl* type_ref(const TypeRef& t)
    {
        if (t.kind == TypeRef::Kind::range && t.range.lo > t.range.hi) error(t.span, "empty range");
        if (t.kind != TypeRef::Kind::named) return nullptr;
        const TypeDecl* d = f_.type(t.name);
        if (!d) error(t.span, "unknown type '" + t.name + "'");
        return d;
    }

    /// Names a value of type `t` makes visible under `base`.
    void bind(std::set<std::string>& scope, const std::string& base, const TypeRef& t, int depth = 0)
    {
        scope.insert(base);
        if (t.kind != TypeRef::Kind::named || depth > 8) return;
        const TypeDecl* d = f_.type(t.name);
        if (!d) return;
        for (const auto& fd : d->fields) bind(scope, base + "." + fd.name, fd.type, depth + 1);
    }

    void expression(const Expr& e, const std::set<std::string>& scope, const std::string& where)
    {
        if (e.op == Expr::Op::name && !scope.count(e.name) && !globals_.count(e.name)) {
            error(e.span, "undeclared name '" + e.name + "' in " + where);
        }
        if (e.op == Expr::Op::call && e.name != "abs" && !f_.function(e.name)) {
            error(e.span, "unknown function '" + e.name + "' in " + where);
        } else if (e.op == Expr::Op::call) {
            const std::size_t arity = e.name == "abs" ? 1 : f_.function(e.name)->params.size();
            if (e.args.size() != arity) {
                error(e.span, "'" + e.name + "' expects " + std::to_string(arity) + " argument(s)");
            }
        }
        for (const auto& a : e.args) expression(a, scope, where);
    }

    void function(const FunctionDecl& fn)
    {
        std::set<std::string> scope;
        for (const auto& p : fn.params) {
            type_ref(p.type);
            bind(scope, p.name, p.type);
        }
        type_ref(fn.result);
        expression(fn.body, scope, "function '" + fn.name + "'");
    }

    std::optional<IntRange> scalar_range(const TypeRef& t) const
    {
        if (t.kind == TypeRef::Kind::boolean) return IntRange{0, 1};
        if (t.kind == TypeRef::Kind::range) return t.range;
        const TypeDecl* d = f_.type(t.name);
        if (d && d->kind == TypeDecl::Kind::range) return d->range;
        return std::nullopt;
    }

    static std::optional<long long> literal(const Expr& e)
    {
        if (e.op == Expr::Op::integer) return e.value;
        if (e.op == Expr::Op::neg && e.args.size() == 1 && e.args[0].op == Expr::Op::integer) return -e.args[0].value;
        return std::nullopt;
    }

    void machine(const Machine& m)
    {
        const std::string where = "machine '" + m.name + "'";
        auto by_name = [](const auto& x) -> const std::string& { return x.name; };
        unique(m.constants, "constant", by_name);
        unique(m.variables, "variable", by_name);
        unique(m.events, "event", by_name);
        unique(m.nodes, "state", by_name);

        std::map<std::string, const OperationDecl*> ops;
        for (const auto& r : m.requires_) {
            const InterfaceDecl* i = f_.interface(r);
            if (!i) {
                error(m.span, where + " requires unknown interface '" + r + "'");
                continue;
            }
            for (const auto& op : i->operations) ops[op.name] = &op;
        }

        std::set<std::string> scope;
        for (const auto& c : m.constants) {
            if (c.type) type_ref(*c.type);
            if (c.value) expression(*c.value, scope, where);
            scope.insert(c.name);
        }
        for (const auto& v : m.variables) {
            type_ref(v.type);
            bind(scope, v.name, v.type);
        }
        for (const auto& v : m.variables) {
            if (!v.init) continue;
            expression(*v.init, scope, where);
            auto r = scalar_range(v.type);
            auto x = literal(*v.init);
            if (r && x && !r->contains(*x)) {
                error(v.init->span, "initial value " + std::to_string(*x) + " of '" + v.name + "' is outside " +
                                        std::to_string(r->lo) + ".." + std::to_string(r->hi));
            }
        }
        for (const auto& e : m.events) {
            if (e.type) type_ref(*e.type);
        }

        if (m.initial.empty()) error(m.span, where + " has no initial state");
        else if (!m.node(m.initial)) error(m.initial_span, "unknown initial state '" + m.initial + "'");

        auto check_actions = [&](const std::vector<Action>& as, const std::set<std::string>& sc) {
            for (const auto& a : as) {
                for (const auto& x : a.args) expression(x, sc, where);
                switch (a.kind) {
                case Action::Kind::assign:
                    if (!m.variable(a.target)) error(a.span, "assignment to undeclared variable '" + a.target + "'");
                    else if (m.variable(a.target)->kind == VarKind::external) {
                        error(a.span, "assignment to external variable '" + a.target + "'");
                    }
                    break;
                case Action::Kind::emit: {
                    const EventDecl* e = m.event(a.target);
                    if (!e) error(a.span, "undeclared event '" + a.target + "'");
                    else if (e->direction == Direction::in) error(a.span, "'" + a.target + "' is an input");
                    else if (e->type.has_value() != !a.args.empty()) {
                        error(a.span, "payload of '" + a.target + "' does not match its declaration");
                    }
                    break;
                }
                case Action::Kind::call: {
                    auto it = ops.find(a.target);
                    if (it == ops.end()) error(a.span, "unknown operation '" + a.target + "'");
                    else if (it->second->params.size() != a.args.size()) {
                        error(a.span, "'" + a.target + "' expects " + std::to_string(it->second->params.size()) +
                                          " argument(s)");
                    }
                    break;
                }
                }
            }
        };

        for (const auto& s : m.nodes) {
            if (s.kind != StateDecl::Kind::state && (!s.entry.empty() || !s.exit.empty())) {
                error(s.span, "'" + s.name + "' cannot have entry or exit actions");
            }
            check_actions(s.entry, scope);
            check_actions(s.exit, scope);
        }
        for (const auto& t : m.transitions) {
            const StateDecl* src = m.node(t.source);
            if (!src) error(t.span, "unknown state '" + t.source + "'");
            else if (src->kind == StateDecl::Kind::final) error(t.span, "final state '" + t.source + "' has a transition");
            else if (src->kind == StateDecl::Kind::junction && t.trigger) {
                error(t.span, "junction '" + t.source + "' cannot wait for an event");
            }
            if (!m.node(t.target)) error(t.span, "unknown state '" + t.target + "'");
            if (t.trigger) {
                const EventDecl* e = m.event(t.trigger->event);
                if (!e) error(t.trigger->span, "undeclared event '" + t.trigger->event + "'");
                else if (e->direction == Direction::out) error(t.trigger->span, "'" + e->name + "' is an output");
                if (t.trigger->binder) {
                    if (!m.variable(*t.trigger->binder)) {
                        error(t.trigger->span, "undeclared variable '" + *t.trigger->binder + "'");
                    } else if (e && !e->type) {
                        error(t.trigger->span, "'" + e->name + "' carries no value");
                    }
                }
            }
            if (t.guard) expression(*t.guard, scope, where);
            check_actions(t.actions, scope);
        }
    }

    bool endpoint(const Controller& c, const Endpoint& ep, bool source)
    {
        if (ep.node == "platform") {
            if (!c.platform) {
                error(ep.span, "controller '" + c.name + "' has no platform");
                return false;
            }
            const PlatformDecl* p = f_.platform(*c.platform);
            if (!p) return false;
            for (const auto& i : p->provides) {
                const InterfaceDecl* d = f_.interface(i);
                if (!d) continue;
                for (const auto& e : d->events) {
                    if (e.name == ep.member) return true;
                }
            }
            error(ep.span, "platform '" + *c.platform + "' provides no event '" + ep.member + "'");
            return false;
        }
        if (!c.instance(ep.node)) {
            error(ep.span, "'" + ep.node + "' is not a machine of controller '" + c.name + "'");
            return false;
        }
        const Machine* m = f_.machine(ep.node);
        if (!m) return false;
        const EventDecl* e = m->event(ep.member);
        if (!e) {
            error(ep.span, "machine '" + m->name + "' has no event '" + ep.member + "'");
            return false;
        }
        if (source && e->direction == Direction::in) error(ep.span, "'" + ep.to_string() + "' is an input");
        if (!source && e->direction == Direction::out) error(ep.span, "'" + ep.to_string() + "' is an output");
        return true;
    }

    void controller(const Controller& c)
    {
        if (c.platform && !f_.platform(*c.platform)) error(c.span, "unknown platform '" + *c.platform + "'");
        std::set<std::string> seen;
        for (const auto& r : c.machines) {
            if (!seen.insert(r.machine).second) error(r.span, "machine '" + r.machine + "' appears twice");
            const Machine* m = f_.machine(r.machine);
            if (!m) {
                error(r.span, "unknown machine '" + r.machine + "'");
                continue;
            }
            for (const auto& b : r.bindings) {
                bool found = false;
                for (const auto& k : m->constants) found |= k.name == b.name;
                if (!found) error(b.span, "machine '" + m->name + "' has no constant '" + b.name + "'");
                expression(b.value, {}, "controller '" + c.name + "'");
            }
        }
        std::set<std::string> inputs;
        for (const auto& k : c.connections) {
            endpoint(c, k.from, true);
            if (endpoint(c, k.to, false) && !inputs.insert(k.to.to_string()).second) {
                error(k.span, "input '" + k.to.to_string() + "' is connected twice");
            }
        }
        for (const auto& s : c.shares) {
            for (const Endpoint* ep : {&s.from, &s.to}) {
                const Machine* m = c.instance(ep->node) ? f_.machine(ep->node) : nullptr;
                const VarDecl* v = m ? m->variable(ep->member) : nullptr;
                if (!v) error(ep->span, "'" + ep->to_string() + "' is not a variable of this controller");
            }
        }
    }

    void config(const ConfigDecl& c)
    {
        for (const auto& e : c.entries) {
            const TypeDecl* t = f_.type(e.name);
            bool constant = false;
            for (const auto& k : f_.constants) constant |= k.name == e.name;
            if (e.range && !(t && t->kind == TypeDecl::Kind::range)) {
                error(e.span, "'" + e.name + "' is not a range type");
            } else if (e.range && e.range->lo > e.range->hi) {
                error(e.span, "empty range for '" + e.name + "'");
            } else if (e.value && !constant) {
                error(e.span, "'" + e.name + "' is not a constant");
            }
        }
    }

    const ModelFile& f_;
    std::set<std::string> globals_;
    std::vector<Diagnostic> out_;
};

void known_names(const ProcExpr& p, const std::set<std::string>& names, std::vector<Diagnostic>& out)
{
    if (p.kind == ProcExpr::Kind::name && !names.count(p.name)) {
        out.push_back({p.span, "unknown process '" + p.name + "'", {}});
    }
    for (const auto& o : p.operand) known_names(o, names, out);
}

}  // namespace

std::vector<Diagnostic> validate_model(const ModelFile& model) { return Validator(model).run(); }

std::vector<Diagnostic> validate_assertions(const AssertionFile& file, const ModelFile* model)
{
    std::vector<Diagnostic> out;
    std::set<std::string> names, statement_names;
    if (model) {
        for (const auto& m : model->machines) names.insert(m.name);
        for (const auto& c : model->controllers) names.insert(c.name);
    }
    for (const auto& s : file.statements) {
        std::visit(
            [&](const auto& d) {
                if (!statement_names.insert(d.name).second) out.push_back({d.span, "duplicate name '" + d.name + "'", {}});
                if (!std::is_same_v<std::decay_t<decltype(d)>, AssertionDecl>) names.insert(d.name);
            },
            s);
    }
    if (!model) return out;
    for (const auto& s : file.statements) {
        if (const auto* p = std::get_if<ProcessDecl>(&s)) known_names(p->body, names, out);
        if (const auto* a = std::get_if<AssertionDecl>(&s)) {
            known_names(a->impl, names, out);
            if (a->spec) known_names(*a->spec, names, out);
        }
    }
    return out;
}

}  // namespace tockcheck
