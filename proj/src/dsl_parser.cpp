#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "dsl_lexer.hpp"
#include "tockcheck/dsl.hpp"

namespace tockcheck {

std::string Diagnostic::to_string() const
{
    std::ostringstream os;
    os << span.file << ":" << span.line << ":" << span.column << ": " << message;
    if (!expected.empty()) {
        os << " (expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) os << (i ? ", " : "") << expected[i];
        os << ")";
    }
    return os.str();
}

namespace {

std::string summarise(const std::vector<Diagnostic>& ds)
{
    std::string out;
    for (const auto& d : ds) out += (out.empty() ? "" : "\n") + d.to_string();
    return out;
}

}  // namespace

DslError::DslError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(summarise(diagnostics)), diagnostics_(std::move(diagnostics))
{
}

bool is_reserved_word(std::string_view w)
{
    static const std::set<std::string_view> words{"and", "or", "not", "true", "false", "Events", "STOP", "SKIP"};
    return words.count(w) != 0;
}

namespace dsl {
namespace {

/// Thrown after a syntax error has been recorded; caught where the parser
/// can resynchronise.
struct Abandon {};

class Parser {
public:
    Parser(std::string_view text, std::string file) : file_(std::move(file))
    {
        tokens_ = lex(text, file_, diagnostics_);
    }

    std::vector<Diagnostic>& diagnostics() { return diagnostics_; }

    ModelFile model()
    {
        ModelFile f;
        static const std::set<std::string> sync{"model",     "type",     "enum",    "record",     "const", "function",
                                                "interface", "platform", "machine", "controller", "config"};
        while (!at_end()) {
            const std::size_t start = pos_;
            try {
                top_level(f);
            } catch (const Abandon&) {
                recover(sync, start);
            }
        }
        return f;
    }

    AssertionFile assertions()
    {
        AssertionFile f;
        static const std::set<std::string> sync{"spec", "process", "assertion", "timed"};
        while (!at_end()) {
            const std::size_t start = pos_;
            try {
                f.statements.push_back(statement());
            } catch (const Abandon&) {
                recover(sync, start);
                if (at(".")) ++pos_;
            }
        }
        return f;
    }

private:
    // ---- token helpers -------------------------------------------------

    const Token& peek(std::size_t k = 0) const { return tokens_[std::min(pos_ + k, tokens_.size() - 1)]; }
    bool at_end() const { return peek().kind == TokenKind::end; }
    bool at(std::string_view p) const { return peek().kind == TokenKind::punct && peek().text == p; }
    bool at_word(std::string_view w, std::size_t k = 0) const
    {
        return peek(k).kind == TokenKind::ident && peek(k).text == w;
    }

    SourceSpan span_of(const Token& t) const
    {
        int len = t.kind == TokenKind::end ? 0 : static_cast<int>(t.text.size());
        return {file_, t.line, t.column, len};
    }
    SourceSpan here() const { return span_of(peek()); }

    [[noreturn]] void fail(std::vector<std::string> expected)
    {
        std::string msg = "unexpected " + peek().describe();
        diagnostics_.push_back({here(), msg, std::move(expected)});
        throw Abandon{};
    }

    [[noreturn]] void fail_message(const std::string& msg, const SourceSpan& span)
    {
        diagnostics_.push_back({span, msg, {}});
        throw Abandon{};
    }

    void expect(std::string_view p)
    {
        if (!at(p)) fail({"'" + std::string(p) + "'"});
        ++pos_;
    }

    void expect_word(std::string_view w)
    {
        if (!at_word(w)) fail({"'" + std::string(w) + "'"});
        ++pos_;
    }

    bool accept(std::string_view p)
    {
        if (!at(p)) return false;
        ++pos_;
        return true;
    }

    bool accept_word(std::string_view w)
    {
        if (!at_word(w)) return false;
        ++pos_;
        return true;
    }

    /// A plain (undotted) name.
    std::string name(const char* what = "name")
    {
        if (peek().kind != TokenKind::ident || is_reserved_word(peek().text)) fail({what});
        if (peek().text.find('.') != std::string::npos) {
            fail_message("'" + peek().text + "' is not a simple name", here());
        }
        return tokens_[pos_++].text;
    }

    /// A name that may contain dots.
    std::string dotted(const char* what = "name")
    {
        if (peek().kind != TokenKind::ident || is_reserved_word(peek().text)) fail({what});
        return tokens_[pos_++].text;
    }

    long long signed_integer()
    {
        const bool negative = accept("-");
        if (peek().kind != TokenKind::integer) fail({"integer"});
        long long v = tokens_[pos_++].value;
        return negative ? -v : v;
    }

    void recover(const std::set<std::string>& sync, std::size_t start)
    {
        if (pos_ == start && !at_end()) ++pos_;
        int depth = 0;
        while (!at_end()) {
            const Token& t = peek();
            if (t.kind == TokenKind::punct) {
                if (t.text == "{") ++depth;
                if (t.text == "}") {
                    if (depth == 0) return;
                    --depth;
                }
            } else if (depth == 0 && t.kind == TokenKind::ident && sync.count(t.text)) {
                return;
            }
            ++pos_;
        }
    }

    /// Parses `{ member* }`, resynchronising on the given member keywords.
    template <typename F>
    void block(const std::set<std::string>& sync, F member)
    {
        expect("{");
        while (!at("}")) {
            if (at_end()) fail({"'}'"});
            const std::size_t start = pos_;
            try {
                member();
            } catch (const Abandon&) {
                recover(sync, start);
            }
        }
        ++pos_;
    }

    // ---- model ----------------------------------------------------------

    void top_level(ModelFile& f)
    {
        const SourceSpan span = here();
        if (accept_word("model")) {
            f.name = name("model name");
        } else if (accept_word("type")) {
            TypeDecl t;
            t.span = span;
            t.name = name("type name");
            expect("=");
            expect_word("int");
            t.range = range_brackets();
            f.types.push_back(std::move(t));
        } else if (accept_word("enum")) {
            TypeDecl t;
            t.kind = TypeDecl::Kind::enumeration;
            t.span = span;
            t.name = name("enum name");
            expect("{");
            do {
                t.literals.push_back(name("enum literal"));
            } while (accept(","));
            expect("}");
            f.types.push_back(std::move(t));
        } else if (accept_word("record")) {
            TypeDecl t;
            t.kind = TypeDecl::Kind::record;
            t.span = span;
            t.name = name("record name");
            expect("{");
            if (!at("}")) {
                do {
                    Field fd;
                    fd.span = here();
                    fd.name = name("field name");
                    expect(":");
                    fd.type = type_ref();
                    t.fields.push_back(std::move(fd));
                } while (accept(","));
            }
            expect("}");
            f.types.push_back(std::move(t));
        } else if (accept_word("const")) {
            f.constants.push_back(const_decl(span));
        } else if (accept_word("function")) {
            FunctionDecl fn;
            fn.span = span;
            fn.name = name("function name");
            fn.params = params();
            expect(":");
            fn.result = type_ref();
            expect("=");
            fn.body = expr();
            f.functions.push_back(std::move(fn));
        } else if (accept_word("interface")) {
            InterfaceDecl i;
            i.span = span;
            i.name = name("interface name");
            block({"event", "operation"}, [&] {
                const SourceSpan s = here();
                if (accept_word("event")) {
                    EventDecl e;
                    e.span = s;
                    e.name = name("event name");
                    if (accept(":")) e.type = type_ref();
                    i.events.push_back(std::move(e));
                } else if (accept_word("operation")) {
                    OperationDecl op;
                    op.span = s;
                    op.name = name("operation name");
                    op.params = params();
                    i.operations.push_back(std::move(op));
                } else {
                    fail({"'event'", "'operation'", "'}'"});
                }
            });
            f.interfaces.push_back(std::move(i));
        } else if (accept_word("platform")) {
            PlatformDecl p;
            p.span = span;
            p.name = name("platform name");
            expect_word("provides");
            do {
                p.provides.push_back(name("interface name"));
            } while (accept(","));
            f.platforms.push_back(std::move(p));
        } else if (accept_word("machine")) {
            f.machines.push_back(machine(span));
        } else if (accept_word("controller")) {
            f.controllers.push_back(controller(span));
        } else if (accept_word("config")) {
            ConfigDecl c;
            c.span = span;
            c.name = name("config name");
            expect("{");
            if (!at("}")) {
                do {
                    ConfigEntry e;
                    e.span = here();
                    e.name = name("type or constant name");
                    expect("=");
                    long long lo = signed_integer();
                    if (accept("..")) {
                        long long hi = signed_integer();
                        e.range = IntRange{int(lo), int(hi)};
                    } else {
                        e.value = lo;
                    }
                    c.entries.push_back(std::move(e));
                } while (accept(","));
            }
            expect("}");
            f.configs.push_back(std::move(c));
        } else {
            fail({"'model'", "'type'", "'enum'", "'record'", "'const'", "'function'", "'interface'", "'platform'",
                  "'machine'", "'controller'", "'config'"});
        }
    }

    IntRange range_brackets()
    {
        expect("[");
        long long lo = signed_integer();
        expect("..");
        long long hi = signed_integer();
        expect("]");
        return {int(lo), int(hi)};
    }

    TypeRef type_ref()
    {
        const SourceSpan span = here();
        TypeRef t;
        if (accept_word("bool")) {
            t = TypeRef::boolean();
        } else if (accept_word("int")) {
            IntRange r = range_brackets();
            t = TypeRef::ranged(r.lo, r.hi);
        } else {
            if (peek().kind != TokenKind::ident || is_reserved_word(peek().text)) fail({"'bool'", "'int'", "type name"});
            t = TypeRef::named(name("type name"));
        }
        t.span = span;
        return t;
    }

    std::vector<Param> params()
    {
        std::vector<Param> out;
        expect("(");
        if (!at(")")) {
            do {
                Param p;
                p.span = here();
                p.name = name("parameter name");
                expect(":");
                p.type = type_ref();
                out.push_back(std::move(p));
            } while (accept(","));
        }
        expect(")");
        return out;
    }

    ConstDecl const_decl(const SourceSpan& span)
    {
        ConstDecl c;
        c.span = span;
        c.name = name("constant name");
        if (accept(":")) c.type = type_ref();
        if (accept("=")) c.value = expr();
        return c;
    }

    Machine machine(const SourceSpan& span)
    {
        Machine m;
        m.span = span;
        m.name = name("machine name");
        static const std::set<std::string> sync{"requires", "const",    "var",   "shared",    "extern",
                                                "input",    "output",   "event", "initial",   "state",
                                                "junction", "final",    "transition"};
        block(sync, [&] { machine_member(m); });
        return m;
    }

    void machine_member(Machine& m)
    {
        const SourceSpan span = here();
        if (accept_word("requires")) {
            do {
                m.requires_.push_back(name("interface name"));
            } while (accept(","));
        } else if (accept_word("const")) {
            m.constants.push_back(const_decl(span));
        } else if (at_word("var") || at_word("shared") || at_word("extern")) {
            VarDecl v;
            v.span = span;
            if (accept_word("shared")) v.kind = VarKind::shared;
            else if (accept_word("extern")) v.kind = VarKind::external;
            expect_word("var");
            v.name = name("variable name");
            expect(":");
            v.type = type_ref();
            if (accept("=")) v.init = expr();
            m.variables.push_back(std::move(v));
        } else if (at_word("input") || at_word("output") || at_word("event")) {
            EventDecl e;
            e.span = span;
            e.direction = at_word("input") ? Direction::in : at_word("output") ? Direction::out : Direction::none;
            ++pos_;
            e.name = name("event name");
            if (accept(":")) e.type = type_ref();
            m.events.push_back(std::move(e));
        } else if (accept_word("initial")) {
            m.initial_span = span;
            m.initial = name("state name");
        } else if (at_word("state") || at_word("junction") || at_word("final")) {
            StateDecl s;
            s.span = span;
            s.kind = at_word("state") ? StateDecl::Kind::state
                   : at_word("junction") ? StateDecl::Kind::junction
                                         : StateDecl::Kind::final;
            ++pos_;
            s.name = name("state name");
            if (accept_word("entry")) s.entry = actions();
            if (accept_word("exit")) s.exit = actions();
            m.nodes.push_back(std::move(s));
        } else if (accept_word("transition")) {
            Transition t;
            t.span = span;
            t.source = name("state name");
            expect("->");
            t.target = name("state name");
            if (at_word("on")) {
                Trigger tr;
                tr.span = here();
                ++pos_;
                tr.event = name("event name");
                if (accept("?")) tr.binder = name("variable name");
                t.trigger = std::move(tr);
            }
            if (accept_word("when")) t.guard = expr();
            if (accept_word("do")) t.actions = actions();
            m.transitions.push_back(std::move(t));
        } else {
            fail({"'requires'", "'const'", "'var'", "'shared'", "'extern'", "'input'", "'output'", "'event'",
                  "'initial'", "'state'", "'junction'", "'final'", "'transition'", "'}'"});
        }
    }

    std::vector<Action> actions()
    {
        std::vector<Action> out;
        do {
            out.push_back(action());
        } while (accept(";"));
        return out;
    }

    Action action()
    {
        Action a;
        a.span = here();
        a.target = dotted("action");
        if (accept(":=")) {
            a.kind = Action::Kind::assign;
            a.args.push_back(expr());
        } else if (accept("!")) {
            a.kind = Action::Kind::emit;
            if (accept("(")) {
                a.args.push_back(expr());
                expect(")");
            }
        } else if (accept("(")) {
            a.kind = Action::Kind::call;
            if (!at(")")) {
                do {
                    a.args.push_back(expr());
                } while (accept(","));
            }
            expect(")");
        } else {
            fail({"':='", "'!'", "'('"});
        }
        return a;
    }

    Controller controller(const SourceSpan& span)
    {
        Controller c;
        c.span = span;
        c.name = name("controller name");
        if (accept_word("on")) c.platform = name("platform name");
        block({"machine", "connect", "share"}, [&] {
            const SourceSpan s = here();
            if (accept_word("machine")) {
                MachineRef r;
                r.span = s;
                r.machine = name("machine name");
                if (accept_word("with")) {
                    do {
                        Binding b;
                        b.span = here();
                        b.name = name("constant name");
                        expect("=");
                        b.value = expr();
                        r.bindings.push_back(std::move(b));
                    } while (accept(","));
                }
                c.machines.push_back(std::move(r));
            } else if (accept_word("connect")) {
                Connection k;
                k.span = s;
                k.from = endpoint();
                expect("->");
                k.to = endpoint();
                k.async = accept_word("async");
                c.connections.push_back(std::move(k));
            } else if (accept_word("share")) {
                Share k;
                k.span = s;
                k.from = endpoint();
                expect("->");
                k.to = endpoint();
                c.shares.push_back(std::move(k));
            } else {
                fail({"'machine'", "'connect'", "'share'", "'}'"});
            }
        });
        return c;
    }

    Endpoint endpoint()
    {
        const SourceSpan span = here();
        std::string text = dotted("endpoint");
        auto dot = text.find('.');
        if (dot == std::string::npos) fail_message("expected 'node.event', found '" + text + "'", span);
        return {text.substr(0, dot), text.substr(dot + 1), span};
    }

    // ---- expressions ----------------------------------------------------

    Expr node(Expr::Op op, std::vector<Expr> args, const SourceSpan& span)
    {
        Expr e;
        e.op = op;
        e.args = std::move(args);
        e.span = span;
        return e;
    }

    Expr expr()
    {
        Expr l = conjunction();
        while (at_word("or")) {
            const SourceSpan s = here();
            ++pos_;
            l = node(Expr::Op::or_, {std::move(l), conjunction()}, s);
        }
        return l;
    }

    Expr conjunction()
    {
        Expr l = negation();
        while (at_word("and")) {
            const SourceSpan s = here();
            ++pos_;
            l = node(Expr::Op::and_, {std::move(l), negation()}, s);
        }
        return l;
    }

    Expr negation()
    {
        if (at_word("not")) {
            const SourceSpan s = here();
            ++pos_;
            return node(Expr::Op::not_, {negation()}, s);
        }
        return comparison();
    }

    Expr comparison()
    {
        Expr l = additive();
        static const std::vector<std::pair<std::string_view, Expr::Op>> ops{
            {"==", Expr::Op::eq}, {"!=", Expr::Op::ne}, {"<", Expr::Op::lt},
            {"<=", Expr::Op::le}, {">", Expr::Op::gt},  {">=", Expr::Op::ge}};
        for (const auto& [text, op] : ops) {
            if (at(text)) {
                const SourceSpan s = here();
                ++pos_;
                return node(op, {std::move(l), additive()}, s);
            }
        }
        return l;
    }

    Expr additive()
    {
        Expr l = unary();
        while (at("+") || at("-")) {
            const SourceSpan s = here();
            const auto op = at("+") ? Expr::Op::add : Expr::Op::sub;
            ++pos_;
            l = node(op, {std::move(l), unary()}, s);
        }
        return l;
    }

    Expr unary()
    {
        if (at("-")) {
            const SourceSpan s = here();
            ++pos_;
            return node(Expr::Op::neg, {unary()}, s);
        }
        return primary();
    }

    Expr primary()
    {
        const SourceSpan span = here();
        Expr e;
        e.span = span;
        if (peek().kind == TokenKind::integer) {
            e.op = Expr::Op::integer;
            e.value = tokens_[pos_++].value;
            return e;
        }
        if (accept_word("true") || accept_word("false")) {
            e.op = Expr::Op::boolean;
            e.value = tokens_[pos_ - 1].text == "true";
            return e;
        }
        if (accept("(")) {
            Expr inner = expr();
            expect(")");
            return inner;
        }
        if (peek().kind == TokenKind::ident && !is_reserved_word(peek().text)) {
            e.name = tokens_[pos_++].text;
            if (accept("(")) {
                e.op = Expr::Op::call;
                if (!at(")")) {
                    do {
                        e.args.push_back(expr());
                    } while (accept(","));
                }
                expect(")");
            } else {
                e.op = Expr::Op::name;
            }
            return e;
        }
        fail({"expression"});
    }

    // ---- assertions ----------------------------------------------------

    Statement statement()
    {
        const SourceSpan span = here();
        if (accept_word("spec")) {
            SpecDecl s;
            s.span = span;
            s.name = name("spec name");
            expect("=");
            expect_word("watch");
            s.watch = event_set();
            expect_word("require");
            s.require = event_set();
            expect_word("within");
            if (peek().kind != TokenKind::integer) fail({"integer"});
            s.within = static_cast<int>(tokens_[pos_++].value);
            expect_word("over");
            s.over = event_set();
            expect(".");
            return s;
        }
        if (accept_word("process")) {
            ProcessDecl p;
            p.span = span;
            p.name = name("process name");
            expect("=");
            p.body = proc_expr();
            expect(".");
            return p;
        }
        accept_word("timed");
        if (accept_word("assertion")) {
            AssertionDecl a;
            a.span = span;
            a.name = name("assertion name");
            expect(":");
            a.impl = proc_expr();
            if (accept_word("refines")) {
                a.kind = AssertionDecl::Kind::refines;
                a.spec = proc_expr();
                expect_word("in");
                expect_word("the");
                expect_word("traces");
                expect_word("model");
            } else if (at_word("is") && at_word("timelock", 1)) {
                a.kind = AssertionDecl::Kind::timelock_free;
                pos_ += 2;
                expect("-");
                expect_word("free");
            } else if (accept_word("does")) {
                a.kind = AssertionDecl::Kind::does_not_terminate;
                expect_word("not");
                expect_word("terminate");
            } else {
                diagnostics_.push_back({here(), "unknown assertion kind " + peek().describe(),
                                        {"'refines'", "'is timelock-free'", "'does not terminate'"}});
                throw Abandon{};
            }
            expect(".");
            return a;
        }
        fail({"'spec'", "'process'", "'assertion'"});
    }

    ProcExpr proc_expr()
    {
        ProcExpr p = proc_primary();
        while (at_word("hide") || at_word("constrain")) {
            const SourceSpan s = here();
            const bool hide = at_word("hide");
            ++pos_;
            EventSet set = event_set();
            p = hide ? ProcExpr::hide(std::move(p), std::move(set)) : ProcExpr::constrain(std::move(p), std::move(set));
            p.span = s;
        }
        return p;
    }

    ProcExpr proc_primary()
    {
        const SourceSpan span = here();
        ProcExpr p;
        if (accept_word("STOP")) {
            p = ProcExpr::stop();
        } else if (accept_word("SKIP")) {
            p = ProcExpr::skip();
        } else if (accept("(")) {
            p = proc_expr();
            expect(")");
            return p;
        } else {
            p = ProcExpr::ref(name("process name"));
        }
        p.span = span;
        return p;
    }

    EventSet event_set()
    {
        if (accept_word("Events")) return EventSet::all();
        expect("{|");
        std::vector<EventPattern> ps;
        if (!at("|}")) {
            do {
                std::string text = dotted("event");
                EventPattern p;
                auto dot = text.rfind('.');
                std::string last = dot == std::string::npos ? "" : text.substr(dot + 1);
                if (last == "in" || last == "out") {
                    p.channel = text.substr(0, dot);
                    p.direction = last == "in" ? Direction::in : Direction::out;
                } else {
                    p.channel = text;
                }
                ps.push_back(std::move(p));
            } while (accept(","));
        }
        expect("|}");
        return EventSet(std::move(ps));
    }

    std::string file_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::vector<Diagnostic> diagnostics_;
};

}  // namespace
}  // namespace dsl

Parsed<ModelFile> parse_model(std::string_view text, const ParseOptions& options)
{
    dsl::Parser p(text, options.file);
    Parsed<ModelFile> out;
    out.value = p.model();
    out.diagnostics = std::move(p.diagnostics());
    if (out.diagnostics.empty() && options.validate) out.diagnostics = validate_model(out.value);
    return out;
}

Parsed<AssertionFile> parse_assertions(std::string_view text, const ModelFile* model, const ParseOptions& options)
{
    dsl::Parser p(text, options.file);
    Parsed<AssertionFile> out;
    out.value = p.assertions();
    out.diagnostics = std::move(p.diagnostics());
    if (out.diagnostics.empty() && options.validate) out.diagnostics = validate_assertions(out.value, model);
    return out;
}

namespace {

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

ModelFile load_model(const std::filesystem::path& path)
{
    auto r = parse_model(read_file(path), {.file = path.string()});
    if (!r.ok()) throw DslError(std::move(r.diagnostics));
    return std::move(r.value);
}

AssertionFile load_assertions(const std::filesystem::path& path, const ModelFile& model)
{
    auto r = parse_assertions(read_file(path), &model, {.file = path.string()});
    if (!r.ok()) throw DslError(std::move(r.diagnostics));
    return std::move(r.value);
}

}  // namespace tockcheck
