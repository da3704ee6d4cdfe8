#include "tockcheck/machine.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace tockcheck {

namespace {

using Valuation = std::vector<int>;
using Live = std::vector<char>;

struct Slot {
    std::string name;
    IntRange range;
    int initial = 0;
    const VarDecl* var = nullptr;
    std::size_t leaf = 0;
};

/// Program point: a stable state, or position `pos` in the action segment of
/// transition `index` (index == transitions.size() is the initial pseudo
/// transition).
struct Point {
    enum class Kind { stable, seq };
    Kind kind = Kind::stable;
    std::size_t index = 0;
    std::size_t pos = 0;
    friend auto operator<=>(const Point&, const Point&) = default;
};

class MachineCompiler {
public:
    MachineCompiler(const ModelFile& model, const Machine& m, const std::map<std::string, long long>& bindings,
                    Environment& env, const CompileOptions& options)
        : model_(model),
          m_(m),
          env_(env),
          options_(options),
          types_(model),
          eval_(types_),
          prefix_(options.prefix.empty() ? m.name : options.prefix)
    {
        bind_constants(bindings);
        layout();
        index_structure();
        liveness();
        declare_channels();
    }

    CompiledMachine run()
    {
        CompiledMachine out;
        out.name = m_.name;
        const std::size_t init = m_.transitions.size();
        out.process = resolve({Point::Kind::seq, init, 0}, initial_valuation(), m_.initial_span);
        while (!work_.empty()) {
            auto [p, v, name] = work_.front();
            work_.pop_front();
            build(p, v, name);
        }
        for (std::size_t i = 0; i < m_.nodes.size(); ++i) {
            if (m_.nodes[i].kind != StateDecl::Kind::junction && !reached_[i]) out.unreachable_states.push_back(m_.nodes[i].name);
        }
        out.channels = channels_;
        out.configurations = configs_.size();
        return out;
    }

private:
    // ---- setup -------------------------------------------------------------

    void bind_constants(const std::map<std::string, long long>& bindings)
    {
        for (const auto& c : m_.constants) {
            long long v;
            if (auto it = bindings.find(c.name); it != bindings.end()) {
                v = it->second;
            } else if (c.value) {
                v = eval_.scalar(*c.value, consts_scope());
            } else {
                throw CompileError("constant '" + c.name + "' of machine '" + m_.name + "' is not bound", c.span);
            }
            if (c.type) {
                const auto d = types_.domains(*c.type);
                if (d.size() != 1 || !d[0].contains(v)) {
                    throw CompileError("constant '" + c.name + "' = " + std::to_string(v) + " is outside its type", c.span);
                }
            }
            consts_.set(c.name, {v});
        }
        for (const auto& [k, v] : bindings) {
            if (!std::any_of(m_.constants.begin(), m_.constants.end(), [&](const ConstDecl& c) { return c.name == k; })) {
                throw CompileError("machine '" + m_.name + "' has no constant '" + k + "'", m_.span);
            }
        }
    }

    const MapScope& consts_scope() const { return consts_; }

    void layout()
    {
        for (const auto& var : m_.variables) {
            const auto doms = types_.domains(var.type);
            const auto paths = types_.paths(var.type);
            Value init;
            if (var.init) {
                init = eval_.eval(*var.init, consts_);
                if (init.size() != doms.size()) throw CompileError("initial value of '" + var.name + "' has the wrong shape", var.span);
            }
            const std::size_t first = slots_.size();
            for (std::size_t k = 0; k < doms.size(); ++k) {
                if (doms[k].size() > options_.max_range_width) {
                    throw CompileError("range of '" + var.name + paths[k] + "' is wider than " +
                                           std::to_string(options_.max_range_width),
                                       var.span);
                }
                Slot s{var.name + paths[k], doms[k], 0, &var, k};
                if (var.init) {
                    if (!doms[k].contains(init[k])) {
                        throw CompileError("initial value of '" + s.name + "' is outside its range", var.span);
                    }
                    s.initial = static_cast<int>(init[k]);
                } else {
                    s.initial = doms[k].contains(0) ? 0 : doms[k].lo;
                }
                slots_.push_back(s);
                if (!paths[k].empty()) names_[s.name] = {slots_.size() - 1, 1};
            }
            names_[var.name] = {first, slots_.size() - first};
            // Intermediate record paths (`a.b` of `a.b.c`).
            for (std::size_t k = 0; k < paths.size(); ++k) {
                for (std::size_t dot = paths[k].find('.', 1); dot != std::string::npos; dot = paths[k].find('.', dot + 1)) {
                    const std::string key = var.name + paths[k].substr(0, dot);
                    auto [it, inserted] = names_.emplace(key, std::make_pair(first + k, std::size_t{1}));
                    if (!inserted) it->second.second = first + k + 1 - it->second.first;
                }
            }
        }
    }

    void index_structure()
    {
        for (std::size_t i = 0; i < m_.nodes.size(); ++i) node_index_[m_.nodes[i].name] = i;
        auto node_of = [&](const std::string& n, const SourceSpan& span) {
            auto it = node_index_.find(n);
            if (it == node_index_.end()) throw CompileError("unknown state or junction '" + n + "'", span);
            return it->second;
        };
        outgoing_.assign(m_.nodes.size(), {});
        for (std::size_t t = 0; t < m_.transitions.size(); ++t) {
            const auto& tr = m_.transitions[t];
            const std::size_t src = node_of(tr.source, tr.span);
            const std::size_t dst = node_of(tr.target, tr.span);
            if (m_.nodes[src].kind == StateDecl::Kind::final) {
                throw CompileError("final state '" + tr.source + "' has an outgoing transition", tr.span);
            }
            if (m_.nodes[src].kind == StateDecl::Kind::junction && tr.trigger) {
                throw CompileError("transition out of junction '" + tr.source + "' has a trigger", tr.span);
            }
            outgoing_[src].push_back(t);
            targets_.push_back(dst);
            std::vector<const Action*> seg;
            for (const auto& a : m_.nodes[src].exit) seg.push_back(&a);
            for (const auto& a : tr.actions) seg.push_back(&a);
            for (const auto& a : m_.nodes[dst].entry) seg.push_back(&a);
            segments_.push_back(std::move(seg));
            exit_len_.push_back(m_.nodes[src].exit.size());
        }
        const std::size_t init = node_of(m_.initial, m_.initial_span);
        targets_.push_back(init);
        std::vector<const Action*> seg;
        for (const auto& a : m_.nodes[init].entry) seg.push_back(&a);
        segments_.push_back(std::move(seg));
        exit_len_.push_back(0);
        reached_.assign(m_.nodes.size(), 0);
    }

    // ---- liveness ------------------------------------------------------------

    void uses(const Expr& e, Live& live) const
    {
        std::vector<std::string> names;
        collect_names(e, names);
        for (const auto& n : names) {
            if (auto it = names_.find(n); it != names_.end()) {
                for (std::size_t k = 0; k < it->second.second; ++k) live[it->second.first + k] = 1;
            }
        }
    }

    void kill(const std::string& name, Live& live) const
    {
        if (auto it = names_.find(name); it != names_.end()) {
            for (std::size_t k = 0; k < it->second.second; ++k) live[it->second.first + k] = 0;
        }
    }

    void liveness()
    {
        const std::size_t n = slots_.size();
        node_live_.assign(m_.nodes.size(), Live(n, 0));
        seq_live_.resize(segments_.size());
        for (std::size_t t = 0; t < segments_.size(); ++t) seq_live_[t].assign(segments_[t].size() + 1, Live(n, 0));
        bool changed = true;
        auto merge = [&](Live& into, const Live& from) {
            for (std::size_t k = 0; k < n; ++k) {
                if (from[k] && !into[k]) {
                    into[k] = 1;
                    changed = true;
                }
            }
        };
        while (changed) {
            changed = false;
            for (std::size_t t = 0; t < segments_.size(); ++t) {
                auto& L = seq_live_[t];
                merge(L.back(), node_live_[targets_[t]]);
                for (std::size_t pos = segments_[t].size(); pos-- > 0;) {
                    const Action& a = *segments_[t][pos];
                    Live l = L[pos + 1];
                    if (a.kind == Action::Kind::assign && !is_shared_write(a)) kill(a.target, l);
                    for (const auto& e : a.args) uses(e, l);
                    merge(L[pos], l);
                }
            }
            for (std::size_t i = 0; i < m_.nodes.size(); ++i) {
                for (std::size_t t : outgoing_[i]) {
                    const auto& tr = m_.transitions[t];
                    Live l = seq_live_[t][0];
                    if (tr.guard) uses(*tr.guard, l);
                    if (tr.trigger && tr.trigger->binder) kill(*tr.trigger->binder, l);
                    merge(node_live_[i], l);
                }
            }
        }
    }

    // ---- channels ------------------------------------------------------------

    ChannelName channel_for(const std::string& local, Direction d) const
    {
        if (auto it = options_.renames.find(local); it != options_.renames.end()) return it->second;
        return {m_.name + "." + local, d};
    }

    void add_channel(const std::string& local, Direction d, std::vector<IntRange> fields)
    {
        const ChannelName c = channel_for(local, d);
        ChannelDecl decl{c.channel, c.direction, std::move(fields)};
        env_.alphabet().declare(decl);
        if (std::find(channels_.begin(), channels_.end(), decl) == channels_.end()) channels_.push_back(decl);
    }

    const OperationDecl* operation(const std::string& name) const
    {
        for (const auto& iface : m_.requires_) {
            const InterfaceDecl* d = model_.interface(iface);
            if (!d) throw CompileError("machine '" + m_.name + "' requires unknown interface '" + iface + "'", m_.span);
            for (const auto& op : d->operations) {
                if (op.name == name) return &op;
            }
        }
        return nullptr;
    }

    std::vector<IntRange> operation_fields(const OperationDecl& op) const
    {
        std::vector<IntRange> out;
        for (const auto& p : op.params) {
            auto d = types_.domains(p.type);
            out.insert(out.end(), d.begin(), d.end());
        }
        return out;
    }

    void declare_channels()
    {
        for (const auto& e : m_.events) add_channel(e.name, e.direction, e.type ? types_.domains(*e.type) : std::vector<IntRange>{});
        std::set<std::string> called;
        for (const auto& seg : segments_) {
            for (const Action* a : seg) {
                if (a->kind == Action::Kind::call && called.insert(a->target).second) {
                    const OperationDecl* op = operation(a->target);
                    if (!op) throw CompileError("'" + a->target + "' is not an operation required by '" + m_.name + "'", a->span);
                    add_channel(a->target + "Call", Direction::none, operation_fields(*op));
                }
            }
        }
        for (const auto& v : m_.variables) {
            if (v.kind == VarKind::shared) add_channel("set_" + v.name, Direction::out, types_.domains(v.type));
            if (v.kind == VarKind::external) add_channel("set_" + v.name, Direction::in, types_.domains(v.type));
        }
    }

    // ---- evaluation ----------------------------------------------------------

    class ValuationScope : public Scope {
    public:
        ValuationScope(const MachineCompiler& c, const Valuation& v) : c_(c), v_(v) {}
        std::optional<Value> lookup(const std::string& name) const override
        {
            if (auto it = c_.names_.find(name); it != c_.names_.end()) {
                Value out;
                for (std::size_t k = 0; k < it->second.second; ++k) out.push_back(v_[it->second.first + k]);
                return out;
            }
            return c_.consts_.lookup(name);
        }

    private:
        const MachineCompiler& c_;
        const Valuation& v_;
    };

    std::string render(const Valuation& v) const
    {
        std::ostringstream os;
        for (std::size_t k = 0; k < slots_.size(); ++k) {
            if (k) os << ", ";
            os << slots_[k].name << "=" << types_.render(slots_[k].var->type, slots_[k].leaf, v[k]);
        }
        return os.str();
    }

    [[noreturn]] void fail(const std::string& what, const Valuation& v, const SourceSpan& span) const
    {
        throw CompileError("machine '" + m_.name + "': " + what + (slots_.empty() ? "" : " (with " + render(v) + ")"), span);
    }

    Value evaluate(const Expr& e, const Valuation& v) const
    {
        try {
            return eval_.eval(e, ValuationScope(*this, v));
        } catch (const EvalError& err) {
            fail(err.what(), v, e.span);
        }
    }

    bool holds(const std::optional<Expr>& guard, const Valuation& v) const
    {
        if (!guard) return true;
        Value r = evaluate(*guard, v);
        if (r.size() != 1) fail("guard is not a boolean", v, guard->span);
        return r[0] != 0;
    }

    void assign(const std::string& target, const Value& value, Valuation& v, const SourceSpan& span) const
    {
        auto it = names_.find(target);
        if (it == names_.end()) fail("assignment to undeclared variable '" + target + "'", v, span);
        if (it->second.second != value.size()) fail("assignment to '" + target + "' has the wrong shape", v, span);
        for (std::size_t k = 0; k < value.size(); ++k) {
            const Slot& s = slots_[it->second.first + k];
            if (!s.range.contains(value[k])) {
                fail("value " + std::to_string(value[k]) + " assigned to '" + s.name + "' is outside [" +
                         std::to_string(s.range.lo) + ".." + std::to_string(s.range.hi) + "]",
                     v, span);
            }
        }
        for (std::size_t k = 0; k < value.size(); ++k) v[it->second.first + k] = static_cast<int>(value[k]);
    }

    Valuation initial_valuation() const
    {
        Valuation v;
        for (const auto& s : slots_) v.push_back(s.initial);
        return v;
    }

    bool is_shared_write(const Action& a) const
    {
        if (a.kind != Action::Kind::assign) return false;
        const VarDecl* var = m_.variable(a.target.substr(0, a.target.find('.')));
        return var && var->kind == VarKind::shared;
    }

    // ---- configurations --------------------------------------------------------

    TermPtr config_ref(const Point& p, Valuation v)
    {
        const Live& live = p.kind == Point::Kind::stable ? node_live_[p.index] : seq_live_[p.index][p.pos];
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (!live[k]) v[k] = slots_[k].initial;
        }
        auto key = std::make_pair(p, v);
        auto it = configs_.find(key);
        if (it == configs_.end()) {
            if (configs_.size() >= options_.max_configurations) {
                throw CompileError("machine '" + m_.name + "' has more than " + std::to_string(options_.max_configurations) +
                                   " configurations");
            }
            std::string name = prefix_ + "#" + std::to_string(configs_.size());
            it = configs_.emplace(key, name).first;
            work_.push_back({p, v, name});
        }
        return term::named(it->second);
    }

    /// Runs instantaneous steps (assignments, junctions, triggerless
    /// transitions) from `p` until a point that needs a definition.
    TermPtr resolve(Point p, Valuation v, const SourceSpan& span)
    {
        std::set<std::pair<Point, Valuation>> seen;
        while (true) {
            if (!seen.emplace(p, v).second) fail("instantaneous loop through '" + location(p) + "'", v, span);
            if (p.kind == Point::Kind::seq) {
                const auto& seg = segments_[p.index];
                while (p.pos < seg.size() && seg[p.pos]->kind == Action::Kind::assign && !is_shared_write(*seg[p.pos])) {
                    const Action& a = *seg[p.pos];
                    assign(a.target, evaluate(a.args.at(0), v), v, a.span);
                    ++p.pos;
                }
                if (p.pos < seg.size()) return config_ref(p, std::move(v));
                p = {Point::Kind::stable, targets_[p.index], 0};
                continue;
            }
            const StateDecl& node = m_.nodes[p.index];
            if (node.kind == StateDecl::Kind::junction) {
                std::optional<std::size_t> chosen;
                for (std::size_t t : outgoing_[p.index]) {
                    if (holds(m_.transitions[t].guard, v)) {
                        chosen = t;
                        break;
                    }
                }
                if (!chosen) fail("no guard of junction '" + node.name + "' holds", v, node.span);
                p = {Point::Kind::seq, *chosen, 0};
                continue;
            }
            reached_[p.index] = 1;
            if (node.kind == StateDecl::Kind::state) {
                std::optional<std::size_t> chosen;
                for (std::size_t t : outgoing_[p.index]) {
                    if (!m_.transitions[t].trigger && holds(m_.transitions[t].guard, v)) {
                        chosen = t;
                        break;
                    }
                }
                if (chosen) {
                    p = {Point::Kind::seq, *chosen, 0};
                    continue;
                }
            }
            return config_ref(p, std::move(v));
        }
    }

    std::string location(const Point& p) const
    {
        if (p.kind == Point::Kind::stable) return m_.nodes[p.index].name;
        const std::size_t target = targets_[p.index];
        if (p.index == m_.transitions.size()) return "entry " + m_.nodes[target].name;
        const auto& tr = m_.transitions[p.index];
        if (p.pos < exit_len_[p.index]) return "exit " + tr.source;
        if (p.pos < exit_len_[p.index] + tr.actions.size()) return tr.source + " -> " + tr.target;
        return "entry " + tr.target;
    }

    EventLabel label(const std::string& local, Direction d, std::vector<int> payload) const
    {
        const ChannelName c = channel_for(local, d);
        return EventLabel::visible(c.channel, std::move(payload), c.direction);
    }

    std::vector<int> payload_in(const Value& value, const std::vector<IntRange>& fields, const std::string& what,
                                const Valuation& v, const SourceSpan& span) const
    {
        if (value.size() != fields.size()) fail("payload of '" + what + "' has the wrong shape", v, span);
        std::vector<int> out;
        for (std::size_t k = 0; k < value.size(); ++k) {
            if (!fields[k].contains(value[k])) {
                fail("payload value " + std::to_string(value[k]) + " of '" + what + "' is outside its type", v, span);
            }
            out.push_back(static_cast<int>(value[k]));
        }
        return out;
    }

    void build(const Point& p, const Valuation& v, const std::string& name)
    {
        TermPtr body = p.kind == Point::Kind::stable ? stable_body(p, v) : action_body(p, v);
        env_.define(name, std::move(body), ConfigInfo{m_.name, location(p), render(v)});
    }

    TermPtr action_body(const Point& p, const Valuation& v)
    {
        const Action& a = *segments_[p.index][p.pos];
        Valuation next = v;
        EventLabel e;
        switch (a.kind) {
        case Action::Kind::emit: {
            const EventDecl* decl = m_.event(a.target);
            if (!decl || decl->direction != Direction::out) fail("'" + a.target + "' is not an output event", v, a.span);
            const auto fields = decl->type ? types_.domains(*decl->type) : std::vector<IntRange>{};
            Value value;
            for (const auto& arg : a.args) {
                Value part = evaluate(arg, v);
                value.insert(value.end(), part.begin(), part.end());
            }
            e = label(a.target, Direction::out, payload_in(value, fields, a.target, v, a.span));
            break;
        }
        case Action::Kind::call: {
            const OperationDecl* op = operation(a.target);
            if (!op) fail("'" + a.target + "' is not a required operation", v, a.span);
            if (op->params.size() != a.args.size()) fail("wrong number of arguments to '" + a.target + "'", v, a.span);
            Value value;
            for (const auto& arg : a.args) {
                Value part = evaluate(arg, v);
                value.insert(value.end(), part.begin(), part.end());
            }
            e = label(a.target + "Call", Direction::none, payload_in(value, operation_fields(*op), a.target, v, a.span));
            break;
        }
        case Action::Kind::assign: {
            Value value = evaluate(a.args.at(0), v);
            assign(a.target, value, next, a.span);
            const std::string var = a.target.substr(0, a.target.find('.'));
            const auto& [first, count] = names_.at(var);
            std::vector<int> payload(next.begin() + static_cast<long>(first), next.begin() + static_cast<long>(first + count));
            e = label("set_" + var, Direction::out, std::move(payload));
            break;
        }
        }
        TermPtr rest = resolve({Point::Kind::seq, p.index, p.pos + 1}, std::move(next), a.span);
        return term::sequential(term::deadline(EventSet::single(e), 0), std::move(rest));
    }

    TermPtr stable_body(const Point& p, const Valuation& v)
    {
        const StateDecl& node = m_.nodes[p.index];
        if (node.kind == StateDecl::Kind::final) return term::skip();
        std::vector<TermPtr> branches;
        for (std::size_t t : outgoing_[p.index]) {
            const auto& tr = m_.transitions[t];
            if (!tr.trigger) continue;
            const EventDecl* decl = m_.event(tr.trigger->event);
            if (!decl || decl->direction != Direction::in) {
                fail("trigger '" + tr.trigger->event + "' is not an input event", v, tr.trigger->span);
            }
            const auto fields = decl->type ? types_.domains(*decl->type) : std::vector<IntRange>{};
            for_each_point(fields, [&](const std::vector<int>& payload) {
                Valuation bound = v;
                if (tr.trigger->binder) {
                    assign(*tr.trigger->binder, Value(payload.begin(), payload.end()), bound, tr.trigger->span);
                }
                if (!holds(tr.guard, bound)) return;
                TermPtr next = resolve({Point::Kind::seq, t, 0}, std::move(bound), tr.span);
                branches.push_back(term::prefix(label(decl->name, Direction::in, payload), std::move(next)));
            });
        }
        for (const auto& var : m_.variables) {
            if (var.kind != VarKind::external) continue;
            for_each_point(types_.domains(var.type), [&](const std::vector<int>& value) {
                Valuation w = v;
                assign(var.name, Value(value.begin(), value.end()), w, var.span);
                TermPtr next = resolve(p, std::move(w), var.span);
                branches.push_back(term::prefix(label("set_" + var.name, Direction::in, value), std::move(next)));
            });
        }
        return term::external_choice(std::move(branches));
    }

    struct Work {
        Point p;
        Valuation v;
        std::string name;
    };

    const ModelFile& model_;
    const Machine& m_;
    Environment& env_;
    const CompileOptions& options_;
    TypeSystem types_;
    Evaluator eval_;
    std::string prefix_;
    MapScope consts_;

    std::vector<Slot> slots_;
    std::map<std::string, std::pair<std::size_t, std::size_t>> names_;
    std::map<std::string, std::size_t> node_index_;
    std::vector<std::vector<std::size_t>> outgoing_;
    std::vector<std::size_t> targets_;
    std::vector<std::vector<const Action*>> segments_;
    std::vector<std::size_t> exit_len_;
    std::vector<Live> node_live_;
    std::vector<std::vector<Live>> seq_live_;
    std::vector<char> reached_;
    std::vector<ChannelDecl> channels_;

    std::map<std::pair<Point, Valuation>, std::string> configs_;
    std::deque<Work> work_;
};

}  // namespace

std::map<std::string, long long> evaluate_bindings(const ModelFile& model, const MachineRef& ref)
{
    TypeSystem types(model);
    Evaluator ev(types);
    MapScope none;
    std::map<std::string, long long> out;
    for (const auto& b : ref.bindings) {
        try {
            out[b.name] = ev.scalar(b.value, none);
        } catch (const EvalError& e) {
            throw CompileError(std::string("binding '") + b.name + "': " + e.what(), b.span);
        }
    }
    return out;
}

CompiledMachine compile_machine(const ModelFile& model, const Machine& m, const std::map<std::string, long long>& bindings,
                                Environment& env, const CompileOptions& options)
{
    try {
        return MachineCompiler(model, m, bindings, env, options).run();
    } catch (const EvalError& e) {
        throw CompileError("machine '" + m.name + "': " + e.what(), e.span());
    } catch (const std::invalid_argument& e) {
        throw CompileError("machine '" + m.name + "': " + e.what(), m.span);
    }
}

}  // namespace tockcheck
