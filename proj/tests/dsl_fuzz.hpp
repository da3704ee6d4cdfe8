#pragma once

#include <random>
#include <string>

#include "tockcheck/dsl.hpp"
#include "tockcheck/expr.hpp"

namespace dsl_fuzz {

using namespace tockcheck;

/// Random syntactically valid models and assertion files.
class Fuzz {
public:
    explicit Fuzz(std::uint64_t seed) : rng_(seed) {}

    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
    bool coin() { return pick(2) == 0; }

    std::string ident()
    {
        static const std::string letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_";
        std::string s = "x";
        const int n = 1 + pick(6);
        for (int i = 0; i < n; ++i) s += letters[pick(int(letters.size()))];
        if (pick(4) == 0) s += std::to_string(pick(100));
        return s;
    }

    std::string dotted() { return pick(3) == 0 ? ident() + "." + ident() : ident(); }

    TypeRef type()
    {
        switch (pick(3)) {
        case 0: return TypeRef::boolean();
        case 1: {
            int lo = pick(7) - 3;
            return TypeRef::ranged(lo, lo + pick(5));
        }
        default: return TypeRef::named(ident());
        }
    }

    Expr expr(int depth = 3)
    {
        if (depth == 0 || pick(3) == 0) {
            switch (pick(4)) {
            case 0: return ex::integer(pick(50));
            case 1: return ex::boolean(coin());
            default: return ex::name(dotted());
            }
        }
        static const Expr::Op binary[] = {Expr::Op::add, Expr::Op::sub, Expr::Op::eq, Expr::Op::ne, Expr::Op::lt,
                                          Expr::Op::le,  Expr::Op::gt,  Expr::Op::ge, Expr::Op::and_, Expr::Op::or_};
        switch (pick(5)) {
        case 0: return ex::unary(Expr::Op::neg, expr(depth - 1));
        case 1: return ex::unary(Expr::Op::not_, expr(depth - 1));
        case 2: {
            std::vector<Expr> args;
            for (int i = pick(3); i > 0; --i) args.push_back(expr(depth - 1));
            return ex::call(ident(), std::move(args));
        }
        default: return ex::binary(binary[pick(10)], expr(depth - 1), expr(depth - 1));
        }
    }

    Action action()
    {
        Action a;
        a.target = dotted();
        switch (pick(3)) {
        case 0: a.kind = Action::Kind::assign; a.args = {expr()}; break;
        case 1:
            a.kind = Action::Kind::emit;
            if (coin()) a.args = {expr()};
            break;
        default:
            a.kind = Action::Kind::call;
            for (int i = pick(3); i > 0; --i) a.args.push_back(expr(2));
        }
        return a;
    }

    std::vector<Action> actions(int max)
    {
        std::vector<Action> out;
        for (int i = pick(max + 1); i > 0; --i) out.push_back(action());
        return out;
    }

    std::vector<Param> params()
    {
        std::vector<Param> ps;
        for (int i = pick(3); i > 0; --i) ps.push_back({ident(), type(), {}});
        return ps;
    }

    template <typename F>
    auto many(int max, F f)
    {
        std::vector<decltype(f())> out;
        for (int i = pick(max + 1); i > 0; --i) out.push_back(f());
        return out;
    }

    Endpoint endpoint() { return {ident(), ident(), {}}; }

    ModelFile model()
    {
        ModelFile f;
        if (coin()) f.name = ident();
        f.types = many(4, [&] {
            TypeDecl t;
            t.name = ident();
            switch (pick(3)) {
            case 0: t.range = {pick(5) - 2, pick(5) + 2}; break;
            case 1:
                t.kind = TypeDecl::Kind::enumeration;
                t.literals = {ident()};
                for (int i = pick(3); i > 0; --i) t.literals.push_back(ident());
                break;
            default:
                t.kind = TypeDecl::Kind::record;
                t.fields = many(3, [&] { return Field{ident(), type(), {}}; });
            }
            return t;
        });
        f.constants = many(3, [&] {
            ConstDecl c{ident(), std::nullopt, std::nullopt, {}};
            if (coin()) c.type = type();
            if (pick(4)) c.value = expr(2);
            return c;
        });
        f.functions = many(2, [&] { return FunctionDecl{ident(), params(), type(), expr(), {}}; });
        f.interfaces = many(2, [&] {
            InterfaceDecl i;
            i.name = ident();
            i.events = many(3, [&] {
                return EventDecl{ident(), Direction::none, coin() ? std::optional(type()) : std::nullopt, {}};
            });
            i.operations = many(2, [&] { return OperationDecl{ident(), params(), {}}; });
            return i;
        });
        f.platforms = many(1, [&] {
            PlatformDecl p{ident(), {ident()}, {}};
            for (int i = pick(2); i > 0; --i) p.provides.push_back(ident());
            return p;
        });
        f.machines = many(3, [&] { return machine(); });
        f.controllers = many(2, [&] {
            Controller c;
            c.name = ident();
            if (coin()) c.platform = ident();
            c.machines = many(3, [&] {
                MachineRef r{ident(), {}, {}};
                r.bindings = many(2, [&] { return Binding{ident(), expr(2), {}}; });
                return r;
            });
            c.connections = many(3, [&] { return Connection{endpoint(), endpoint(), coin(), {}}; });
            c.shares = many(1, [&] { return Share{endpoint(), endpoint(), {}}; });
            return c;
        });
        f.configs = many(2, [&] {
            ConfigDecl c{ident(), {}, {}};
            c.entries = many(3, [&] {
                ConfigEntry e{ident(), std::nullopt, std::nullopt, {}};
                int lo = pick(9) - 4;
                if (coin()) e.range = IntRange{lo, lo + pick(4)};
                else e.value = lo;
                return e;
            });
            return c;
        });
        return f;
    }

    Machine machine()
    {
        Machine m;
        m.name = ident();
        m.requires_ = many(2, [&] { return ident(); });
        m.constants = many(2, [&] {
            ConstDecl c{ident(), std::nullopt, std::nullopt, {}};
            if (coin()) c.type = type();
            if (coin()) c.value = expr(2);
            return c;
        });
        m.variables = many(3, [&] {
            VarDecl v{ident(), type(), std::nullopt, static_cast<VarKind>(pick(3)), {}};
            if (coin()) v.init = expr(2);
            return v;
        });
        m.events = many(3, [&] {
            return EventDecl{ident(), static_cast<Direction>(pick(3)), coin() ? std::optional(type()) : std::nullopt, {}};
        });
        if (pick(4)) m.initial = ident();
        m.nodes = many(4, [&] {
            StateDecl s{static_cast<StateDecl::Kind>(pick(3)), ident(), {}, {}, {}};
            s.entry = actions(2);
            s.exit = actions(2);
            return s;
        });
        m.transitions = many(4, [&] {
            Transition t;
            t.source = ident();
            t.target = ident();
            if (coin()) t.trigger = Trigger{ident(), coin() ? std::optional(ident()) : std::nullopt, {}};
            if (coin()) t.guard = expr();
            t.actions = actions(3);
            return t;
        });
        return m;
    }

    EventSet events()
    {
        if (pick(5) == 0) return EventSet::all();
        return EventSet(many(3, [&] {
            EventPattern p{dotted(), std::nullopt, std::nullopt};
            if (coin()) p.direction = coin() ? Direction::in : Direction::out;
            return p;
        }));
    }

    ProcExpr proc(int depth = 2)
    {
        ProcExpr p;
        switch (pick(5)) {
        case 0: p = ProcExpr::stop(); break;
        case 1: p = ProcExpr::skip(); break;
        default: p = ProcExpr::ref(ident());
        }
        for (int i = depth > 0 ? pick(3) : 0; i > 0; --i) {
            p = coin() ? ProcExpr::hide(std::move(p), events()) : ProcExpr::constrain(std::move(p), events());
        }
        return p;
    }

    AssertionFile assertions()
    {
        AssertionFile f;
        for (int i = pick(6); i > 0; --i) {
            switch (pick(3)) {
            case 0: f.statements.push_back(SpecDecl{ident(), events(), events(), pick(4), events(), {}}); break;
            case 1: f.statements.push_back(ProcessDecl{ident(), proc(), {}}); break;
            default: {
                AssertionDecl a;
                a.name = ident();
                a.kind = static_cast<AssertionDecl::Kind>(pick(3));
                a.impl = proc();
                if (a.kind == AssertionDecl::Kind::refines) a.spec = proc();
                f.statements.push_back(std::move(a));
            }
            }
        }
        return f;
    }

private:
    std::mt19937_64 rng_;
};

}  // namespace dsl_fuzz
