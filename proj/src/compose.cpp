#include <algorithm>
#include <set>

#include "tockcheck/machine.hpp"

namespace tockcheck {

namespace {

std::set<ChannelName> names_of(const std::vector<ChannelDecl>& cs)
{
    std::set<ChannelName> out;
    for (const auto& c : cs) out.insert({c.name, c.direction});
    return out;
}

EventPattern pattern(const ChannelName& c) { return {c.channel, c.direction, std::nullopt}; }

}  // namespace

TermPtr compose(const std::vector<Component>& components, const EventSet& low)
{
    if (components.empty()) throw CompositionError("nothing to compose");
    TermPtr acc = components[0].process;
    std::set<ChannelName> seen = names_of(components[0].channels);
    for (std::size_t i = 1; i < components.size(); ++i) {
        const auto mine = names_of(components[i].channels);
        std::vector<EventPattern> sync;
        for (const auto& c : mine) {
            if (seen.count(c)) sync.push_back(pattern(c));
        }
        acc = term::parallel(acc, EventSet(std::move(sync)), components[i].process);
        seen.insert(mine.begin(), mine.end());
    }
    if (!low.empty()) acc = term::prioritise(acc, low);
    return acc;
}

Component make_buffer(Environment& env, const std::string& name, const ChannelName& in, const ChannelName& out,
                      const std::vector<IntRange>& fields)
{
    Component c;
    c.channels = {ChannelDecl{in.channel, in.direction, fields}, ChannelDecl{out.channel, out.direction, fields}};
    for (const auto& d : c.channels) env.alphabet().declare(d);

    std::vector<std::vector<int>> values;
    for_each_point(fields, [&](const std::vector<int>& v) { values.push_back(v); });
    auto full = [&](const std::vector<int>& v) {
        std::string n = name + ".full";
        for (int x : v) n += "." + std::to_string(x);
        return n;
    };
    const std::string empty = name + ".empty";
    std::vector<TermPtr> accept;
    for (const auto& w : values) {
        accept.push_back(term::prefix(EventLabel::visible(in.channel, w, in.direction), term::named(full(w))));
    }
    env.define(empty, term::external_choice(accept));
    for (const auto& v : values) {
        auto branches = accept;
        branches.push_back(term::prefix(EventLabel::visible(out.channel, v, out.direction), term::named(empty)));
        env.define(full(v), term::external_choice(std::move(branches)));
    }
    c.process = term::named(empty);
    return c;
}

namespace {

class Composer {
public:
    Composer(const ModelFile& model, const Controller& ctrl, Environment& env, const ComposeOptions& options)
        : model_(model), ctrl_(ctrl), env_(env), options_(options), types_(model)
    {
    }

    ComposedSystem run()
    {
        ComposedSystem out;
        out.name = ctrl_.name;
        check_instances();
        route_connections();
        route_shares();

        std::vector<Component> components;
        for (const auto& ref : ctrl_.machines) {
            CompileOptions co;
            co.prefix = ctrl_.name + "." + ref.machine;
            co.renames = renames_[ref.machine];
            co.max_range_width = options_.max_range_width;
            co.max_configurations = options_.max_configurations;
            auto compiled = compile_machine(model_, *model_.machine(ref.machine), evaluate_bindings(model_, ref), env_, co);
            components.push_back({compiled.process, compiled.channels});
            out.machines.push_back(std::move(compiled));
        }
        for (std::size_t i = 0; i < buffers_.size(); ++i) {
            const auto& b = buffers_[i];
            components.push_back(make_buffer(env_, ctrl_.name + ".buffer" + std::to_string(i), b.in, b.out, b.fields));
        }
        out.buffers = buffers_.size();
        for (const auto& c : components) {
            for (const auto& d : c.channels) {
                if (std::find(out.channels.begin(), out.channels.end(), d) == out.channels.end()) out.channels.push_back(d);
            }
        }
        out.boundary_inputs = EventSet(boundary_);
        out.process = compose(components, options_.run_to_completion ? out.boundary_inputs : EventSet{});
        return out;
    }

private:
    struct Buffer {
        ChannelName in;
        ChannelName out;
        std::vector<IntRange> fields;
    };

    void check_instances()
    {
        std::set<std::string> names;
        for (const auto& ref : ctrl_.machines) {
            if (!model_.machine(ref.machine)) throw CompositionError("unknown machine '" + ref.machine + "'", ref.span);
            if (!names.insert(ref.machine).second) {
                throw CompositionError("machine '" + ref.machine + "' appears twice in '" + ctrl_.name + "'", ref.span);
            }
        }
    }

    const Machine& machine_at(const Endpoint& e) const
    {
        if (!ctrl_.instance(e.node)) {
            throw CompositionError("'" + e.node + "' is not a machine of controller '" + ctrl_.name + "'", e.span);
        }
        return *model_.machine(e.node);
    }

    const EventDecl& platform_event(const Endpoint& e) const
    {
        if (!ctrl_.platform) throw CompositionError("controller '" + ctrl_.name + "' has no platform", e.span);
        const PlatformDecl* p = model_.platform(*ctrl_.platform);
        if (!p) throw CompositionError("unknown platform '" + *ctrl_.platform + "'", ctrl_.span);
        for (const auto& iname : p->provides) {
            const InterfaceDecl* iface = model_.interface(iname);
            if (!iface) throw CompositionError("unknown interface '" + iname + "'", p->span);
            for (const auto& ev : iface->events) {
                if (ev.name == e.member) return ev;
            }
        }
        throw CompositionError("platform has no event '" + e.member + "'", e.span);
    }

    const EventDecl& machine_event(const Endpoint& e, Direction want) const
    {
        const Machine& m = machine_at(e);
        const EventDecl* ev = m.event(e.member);
        if (!ev) throw CompositionError("machine '" + m.name + "' has no event '" + e.member + "'", e.span);
        if (ev->direction != want) {
            throw CompositionError("'" + e.to_string() + "' is not an " + std::string(to_string(want)) + "put event", e.span);
        }
        return *ev;
    }

    std::vector<IntRange> fields(const EventDecl& e) const
    {
        return e.type ? types_.domains(*e.type) : std::vector<IntRange>{};
    }

    void route_connections()
    {
        std::map<std::string, const Connection*> fed;
        // Sender endpoint -> canonical label of its synchronous receivers.
        std::map<std::string, ChannelName> canonical;
        for (const auto& c : ctrl_.connections) {
            if (c.to.node == "platform") {
                machine_event(c.from, Direction::out);
                continue;
            }
            const EventDecl& to = machine_event(c.to, Direction::in);
            const ChannelName to_name{c.to.node + "." + c.to.member, Direction::in};
            if (auto [it, inserted] = fed.emplace(c.to.to_string(), &c); !inserted) {
                throw CompositionError("input '" + c.to.to_string() + "' is connected to both '" + it->second->from.to_string() +
                                           "' and '" + c.from.to_string() + "'",
                                       c.span);
            }
            if (c.from.node == "platform") {
                if (fields(platform_event(c.from)) != fields(to)) {
                    throw CompositionError("payload types differ across '" + c.from.to_string() + "' -> '" +
                                               c.to.to_string() + "'",
                                           c.span);
                }
                boundary_.push_back({to_name.channel, to_name.direction, std::nullopt});
                continue;
            }
            const EventDecl& from = machine_event(c.from, Direction::out);
            if (fields(from) != fields(to)) {
                throw CompositionError("payload types differ across '" + c.from.to_string() + "' -> '" + c.to.to_string() + "'",
                                       c.span);
            }
            if (c.async) {
                buffers_.push_back({{c.from.node + "." + c.from.member, Direction::out}, to_name, fields(to)});
                continue;
            }
            auto [it, first] = canonical.emplace(c.from.to_string(), to_name);
            renames_[c.from.node][c.from.member] = it->second;
            if (!first) renames_[c.to.node][c.to.member] = it->second;
        }
    }

    void route_shares()
    {
        std::map<std::string, ChannelName> canonical;
        std::set<std::string> readers;
        for (const auto& s : ctrl_.shares) {
            const Machine& w = machine_at(s.from);
            const Machine& r = machine_at(s.to);
            const VarDecl* wv = w.variable(s.from.member);
            const VarDecl* rv = r.variable(s.to.member);
            if (!wv || wv->kind != VarKind::shared) {
                throw CompositionError("'" + s.from.to_string() + "' is not a shared variable", s.span);
            }
            if (!rv || rv->kind != VarKind::external) {
                throw CompositionError("'" + s.to.to_string() + "' is not an external variable", s.span);
            }
            if (types_.domains(wv->type) != types_.domains(rv->type)) {
                throw CompositionError("types differ across share '" + s.from.to_string() + "' -> '" + s.to.to_string() + "'",
                                       s.span);
            }
            if (!readers.insert(s.to.to_string()).second) {
                throw CompositionError("'" + s.to.to_string() + "' is shared from two writers", s.span);
            }
            const ChannelName reader{s.to.node + ".set_" + s.to.member, Direction::in};
            auto [it, first] = canonical.emplace(s.from.to_string(), reader);
            renames_[s.from.node]["set_" + s.from.member] = it->second;
            if (!first) renames_[s.to.node]["set_" + s.to.member] = it->second;
        }
    }

    const ModelFile& model_;
    const Controller& ctrl_;
    Environment& env_;
    const ComposeOptions& options_;
    TypeSystem types_;
    std::map<std::string, std::map<std::string, ChannelName>> renames_;
    std::vector<Buffer> buffers_;
    std::vector<EventPattern> boundary_;
};

}  // namespace

ComposedSystem compose_controller(const ModelFile& model, const Controller& controller, Environment& env,
                                  const ComposeOptions& options)
{
    try {
        return Composer(model, controller, env, options).run();
    } catch (const std::invalid_argument& e) {
        throw CompositionError(e.what(), controller.span);
    }
}

}  // namespace tockcheck
