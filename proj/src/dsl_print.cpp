#include <sstream>

#include "tockcheck/dsl.hpp"

namespace tockcheck {

namespace {

int level(const Expr& e)
{
    switch (e.op) {
    case Expr::Op::or_: return 1;
    case Expr::Op::and_: return 2;
    case Expr::Op::not_: return 3;
    case Expr::Op::eq:
    case Expr::Op::ne:
    case Expr::Op::lt:
    case Expr::Op::le:
    case Expr::Op::gt:
    case Expr::Op::ge: return 4;
    case Expr::Op::add:
    case Expr::Op::sub: return 5;
    case Expr::Op::neg: return 6;
    default: return 7;
    }
}

const char* symbol(Expr::Op op)
{
    switch (op) {
    case Expr::Op::or_: return " or ";
    case Expr::Op::and_: return " and ";
    case Expr::Op::eq: return " == ";
    case Expr::Op::ne: return " != ";
    case Expr::Op::lt: return " < ";
    case Expr::Op::le: return " <= ";
    case Expr::Op::gt: return " > ";
    case Expr::Op::ge: return " >= ";
    case Expr::Op::add: return " + ";
    case Expr::Op::sub: return " - ";
    default: return " ? ";
    }
}

void print(std::ostream& os, const Expr& e, int min_level)
{
    const int l = level(e);
    const bool parens = l < min_level;
    if (parens) os << "(";
    switch (e.op) {
    case Expr::Op::integer:
        if (e.value < 0) os << "-" << -e.value;
        else os << e.value;
        break;
    case Expr::Op::boolean: os << (e.value ? "true" : "false"); break;
    case Expr::Op::name: os << e.name; break;
    case Expr::Op::neg:
        os << "-";
        print(os, e.args.at(0), 6);
        break;
    case Expr::Op::not_:
        os << "not ";
        print(os, e.args.at(0), 3);
        break;
    case Expr::Op::call:
        os << e.name << "(";
        for (std::size_t i = 0; i < e.args.size(); ++i) {
            if (i) os << ", ";
            print(os, e.args[i], 1);
        }
        os << ")";
        break;
    default: {
        // Binary: left-associative except comparisons, which do not chain.
        const int left = l == 4 ? 5 : l;
        print(os, e.args.at(0), left);
        os << symbol(e.op);
        print(os, e.args.at(1), l + 1);
    }
    }
    if (parens) os << ")";
}

std::string type(const TypeRef& t)
{
    switch (t.kind) {
    case TypeRef::Kind::boolean: return "bool";
    case TypeRef::Kind::range: return "int[" + std::to_string(t.range.lo) + ".." + std::to_string(t.range.hi) + "]";
    case TypeRef::Kind::named: return t.name;
    }
    return "?";
}

std::string action(const Action& a)
{
    std::string out = a.target;
    switch (a.kind) {
    case Action::Kind::assign: return out + " := " + print_expr(a.args.at(0));
    case Action::Kind::emit: return a.args.empty() ? out + "!" : out + "!(" + print_expr(a.args[0]) + ")";
    case Action::Kind::call:
        out += "(";
        for (std::size_t i = 0; i < a.args.size(); ++i) out += (i ? ", " : "") + print_expr(a.args[i]);
        return out + ")";
    }
    return out;
}

std::string actions(const std::vector<Action>& as)
{
    std::string out;
    for (std::size_t i = 0; i < as.size(); ++i) out += (i ? "; " : "") + action(as[i]);
    return out;
}

std::string params(const std::vector<Param>& ps)
{
    std::string out = "(";
    for (std::size_t i = 0; i < ps.size(); ++i) out += (i ? ", " : "") + ps[i].name + ": " + type(ps[i].type);
    return out + ")";
}

std::string const_decl(const ConstDecl& c)
{
    std::string out = "const " + c.name;
    if (c.type) out += ": " + type(*c.type);
    if (c.value) out += " = " + print_expr(*c.value);
    return out;
}

std::string event_decl(const EventDecl& e, bool in_machine)
{
    std::string kw = "event";
    if (in_machine && e.direction == Direction::in) kw = "input";
    if (in_machine && e.direction == Direction::out) kw = "output";
    std::string out = kw + " " + e.name;
    if (e.type) out += ": " + type(*e.type);
    return out;
}

std::string join(const std::vector<std::string>& xs)
{
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + xs[i];
    return out;
}

void machine(std::ostream& os, const Machine& m)
{
    os << "machine " << m.name << " {\n";
    if (!m.requires_.empty()) os << "  requires " << join(m.requires_) << "\n";
    for (const auto& c : m.constants) os << "  " << const_decl(c) << "\n";
    for (const auto& v : m.variables) {
        os << "  " << (v.kind == VarKind::shared ? "shared " : v.kind == VarKind::external ? "extern " : "") << "var "
           << v.name << ": " << type(v.type);
        if (v.init) os << " = " << print_expr(*v.init);
        os << "\n";
    }
    for (const auto& e : m.events) os << "  " << event_decl(e, true) << "\n";
    if (!m.initial.empty()) os << "  initial " << m.initial << "\n";
    for (const auto& s : m.nodes) {
        const char* kw = s.kind == StateDecl::Kind::state ? "state" : s.kind == StateDecl::Kind::junction ? "junction" : "final";
        os << "  " << kw << " " << s.name;
        if (!s.entry.empty()) os << "\n    entry " << actions(s.entry);
        if (!s.exit.empty()) os << "\n    exit " << actions(s.exit);
        os << "\n";
    }
    for (const auto& t : m.transitions) {
        os << "  transition " << t.source << " -> " << t.target;
        if (t.trigger) {
            os << "\n    on " << t.trigger->event;
            if (t.trigger->binder) os << "?" << *t.trigger->binder;
        }
        if (t.guard) os << "\n    when " << print_expr(*t.guard);
        if (!t.actions.empty()) os << "\n    do " << actions(t.actions);
        os << "\n";
    }
    os << "}\n";
}

std::string pattern(const EventPattern& p)
{
    std::string out = p.channel;
    if (p.direction && *p.direction != Direction::none) out += "." + std::string(to_string(*p.direction));
    if (p.payload) {
        for (int v : *p.payload) out += "." + std::to_string(v);
    }
    return out;
}

std::string proc(const ProcExpr& p)
{
    switch (p.kind) {
    case ProcExpr::Kind::name: return p.name;
    case ProcExpr::Kind::stop: return "STOP";
    case ProcExpr::Kind::skip: return "SKIP";
    case ProcExpr::Kind::hide: return proc(p.operand.at(0)) + " hide " + print_event_set(p.events);
    case ProcExpr::Kind::constrain: return proc(p.operand.at(0)) + " constrain " + print_event_set(p.events);
    }
    return "?";
}

}  // namespace

std::string print_expr(const Expr& e)
{
    std::ostringstream os;
    print(os, e, 1);
    return os.str();
}

std::string print_event_set(const EventSet& s)
{
    if (s.universal()) return "Events";
    if (s.patterns().empty()) return "{| |}";
    std::string out = "{| ";
    for (std::size_t i = 0; i < s.patterns().size(); ++i) out += (i ? ", " : "") + pattern(s.patterns()[i]);
    return out + " |}";
}

std::string print_model(const ModelFile& f)
{
    std::ostringstream os;
    bool first = true;
    auto section = [&] {
        if (!first) os << "\n";
        first = false;
    };
    if (!f.name.empty()) {
        section();
        os << "model " << f.name << "\n";
    }
    if (!f.types.empty()) {
        section();
        for (const auto& t : f.types) {
            switch (t.kind) {
            case TypeDecl::Kind::range:
                os << "type " << t.name << " = " << type(TypeRef::ranged(t.range.lo, t.range.hi)) << "\n";
                break;
            case TypeDecl::Kind::enumeration: os << "enum " << t.name << " { " << join(t.literals) << " }\n"; break;
            case TypeDecl::Kind::record:
                os << "record " << t.name << " {";
                for (std::size_t i = 0; i < t.fields.size(); ++i) {
                    os << (i ? "," : "") << "\n  " << t.fields[i].name << ": " << type(t.fields[i].type);
                }
                os << (t.fields.empty() ? "}\n" : "\n}\n");
                break;
            }
        }
    }
    if (!f.constants.empty()) {
        section();
        for (const auto& c : f.constants) os << const_decl(c) << "\n";
    }
    if (!f.functions.empty()) {
        section();
        for (const auto& fn : f.functions) {
            os << "function " << fn.name << params(fn.params) << ": " << type(fn.result) << " =\n  "
               << print_expr(fn.body) << "\n";
        }
    }
    for (const auto& i : f.interfaces) {
        section();
        os << "interface " << i.name << " {\n";
        for (const auto& e : i.events) os << "  " << event_decl(e, false) << "\n";
        for (const auto& op : i.operations) os << "  operation " << op.name << params(op.params) << "\n";
        os << "}\n";
    }
    if (!f.platforms.empty()) {
        section();
        for (const auto& p : f.platforms) os << "platform " << p.name << " provides " << join(p.provides) << "\n";
    }
    for (const auto& m : f.machines) {
        section();
        machine(os, m);
    }
    for (const auto& c : f.controllers) {
        section();
        os << "controller " << c.name;
        if (c.platform) os << " on " << *c.platform;
        os << " {\n";
        for (const auto& r : c.machines) {
            os << "  machine " << r.machine;
            for (std::size_t i = 0; i < r.bindings.size(); ++i) {
                os << (i ? ", " : " with ") << r.bindings[i].name << " = " << print_expr(r.bindings[i].value);
            }
            os << "\n";
        }
        for (const auto& k : c.connections) {
            os << "  connect " << k.from.to_string() << " -> " << k.to.to_string() << (k.async ? " async" : "") << "\n";
        }
        for (const auto& k : c.shares) os << "  share " << k.from.to_string() << " -> " << k.to.to_string() << "\n";
        os << "}\n";
    }
    if (!f.configs.empty()) {
        section();
        for (const auto& c : f.configs) {
            os << "config " << c.name << " {";
            for (std::size_t i = 0; i < c.entries.size(); ++i) {
                const auto& e = c.entries[i];
                os << (i ? ", " : " ") << e.name << " = ";
                if (e.range) os << e.range->lo << ".." << e.range->hi;
                else if (e.value) os << *e.value;
            }
            os << (c.entries.empty() ? "}\n" : " }\n");
        }
    }
    return os.str();
}

std::string print_assertions(const AssertionFile& file)
{
    std::ostringstream os;
    for (const auto& s : file.statements) {
        if (const auto* d = std::get_if<SpecDecl>(&s)) {
            os << "spec " << d->name << " =\n  watch " << print_event_set(d->watch) << "\n  require "
               << print_event_set(d->require) << "\n  within " << d->within << " over " << print_event_set(d->over)
               << ".\n";
        } else if (const auto* p = std::get_if<ProcessDecl>(&s)) {
            os << "process " << p->name << " = " << proc(p->body) << ".\n";
        } else if (const auto* a = std::get_if<AssertionDecl>(&s)) {
            os << "assertion " << a->name << ": " << proc(a->impl);
            switch (a->kind) {
            case AssertionDecl::Kind::refines: os << " refines " << proc(*a->spec) << " in the traces model"; break;
            case AssertionDecl::Kind::timelock_free: os << " is timelock-free"; break;
            case AssertionDecl::Kind::does_not_terminate: os << " does not terminate"; break;
            }
            os << ".\n";
        }
    }
    return os.str();
}

}  // namespace tockcheck
