#include "tockcheck/checker.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <map>
#include <unordered_map>

namespace tockcheck {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Breadth-first tree over the states of one Lts, used to rebuild traces.
struct SearchTree {
    struct Node {
        std::size_t parent;
        LabelId via;
    };
    std::vector<Node> nodes;

    Trace trace_to(const Lts& lts, std::size_t n) const
    {
        Trace t;
        while (n != 0) {
            if (nodes[n].via != LabelTable::tau) t.push_back(lts.label(nodes[n].via));
            n = nodes[n].parent;
        }
        std::reverse(t.begin(), t.end());
        return t;
    }
};

/// Reachable states in breadth-first order, with the tree that found them.
struct Reach {
    std::vector<StateId> order;
    std::vector<std::size_t> node_of;  // state -> tree node, or npos
    SearchTree tree;
};

constexpr std::size_t npos = static_cast<std::size_t>(-1);

Reach reach(const Lts& lts)
{
    Reach r;
    r.node_of.assign(lts.state_count(), npos);
    r.node_of[lts.initial()] = 0;
    r.order.push_back(lts.initial());
    r.tree.nodes.push_back({0, LabelTable::tau});
    for (std::size_t i = 0; i < r.order.size(); ++i) {
        const StateId s = r.order[i];
        for (const auto& e : lts.edges(s)) {
            if (r.node_of[e.target] != npos) continue;
            r.node_of[e.target] = r.tree.nodes.size();
            r.tree.nodes.push_back({r.node_of[s], e.label});
            r.order.push_back(e.target);
        }
    }
    return r;
}

std::size_t reachable_transitions(const Lts& lts, const Reach& r)
{
    std::size_t n = 0;
    for (StateId s : r.order) n += lts.edges(s).size();
    return n;
}

/// Tau-closed subsets of spec states, built on demand.
class Determinizer {
public:
    Determinizer(const Lts& spec, std::size_t limit) : spec_(spec), limit_(limit) {}

    std::size_t initial() { return intern(closure({spec_.initial()})); }

    /// Successor subset after `label`, or npos when spec refuses it.
    std::size_t after(std::size_t subset, LabelId label)
    {
        const auto key = std::make_pair(subset, label);
        if (auto it = after_.find(key); it != after_.end()) return it->second;
        std::vector<StateId> next;
        for (StateId s : subsets_[subset]) {
            for (const auto& e : spec_.edges(s)) {
                if (e.label == label) next.push_back(e.target);
            }
        }
        const std::size_t id = next.empty() ? npos : intern(closure(std::move(next)));
        after_.emplace(key, id);
        return id;
    }

    std::size_t size() const { return subsets_.size(); }

private:
    std::vector<StateId> closure(std::vector<StateId> seed)
    {
        std::vector<char> seen(spec_.state_count(), 0);
        std::vector<StateId> out;
        for (StateId s : seed) {
            if (!seen[s]) {
                seen[s] = 1;
                out.push_back(s);
            }
        }
        for (std::size_t i = 0; i < out.size(); ++i) {
            for (const auto& e : spec_.edges(out[i])) {
                if (e.label == LabelTable::tau && !seen[e.target]) {
                    seen[e.target] = 1;
                    out.push_back(e.target);
                }
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    std::size_t intern(std::vector<StateId> set)
    {
        auto [it, inserted] = ids_.emplace(std::move(set), subsets_.size());
        if (inserted) {
            if (subsets_.size() >= limit_) {
                throw ResourceError("specification determinisation exceeded " + std::to_string(limit_) + " subsets",
                                    CheckStats{subsets_.size(), 0, 0, 0});
            }
            subsets_.push_back(it->first);
        }
        return it->second;
    }

    const Lts& spec_;
    std::size_t limit_;
    std::vector<std::vector<StateId>> subsets_;
    std::map<std::vector<StateId>, std::size_t> ids_;
    std::map<std::pair<std::size_t, LabelId>, std::size_t> after_;
};

}  // namespace

Verdict traces_refines(const Lts& spec, const Lts& impl, const RefinementOptions& options)
{
    const auto start = Clock::now();
    Verdict v;

    // Impl label id -> spec label id (npos: spec never mentions it).
    std::vector<std::size_t> to_spec(impl.labels().size(), npos);
    for (LabelId l = 0; l < impl.labels().size(); ++l) {
        if (auto id = spec.labels().find(impl.label(l))) to_spec[l] = *id;
    }

    Determinizer det(spec, options.max_spec_subsets);
    struct Node {
        StateId impl;
        std::size_t subset;
    };
    std::vector<Node> nodes;
    SearchTree tree;
    std::unordered_map<std::uint64_t, std::size_t> seen;
    auto key = [](StateId s, std::size_t subset) { return (static_cast<std::uint64_t>(subset) << 32) | s; };
    auto visit = [&](StateId s, std::size_t subset, std::size_t parent, LabelId via) {
        if (!seen.emplace(key(s, subset), nodes.size()).second) return;
        if (nodes.size() >= options.max_product_states) {
            throw ResourceError("refinement product exceeded " + std::to_string(options.max_product_states) + " states",
                                CheckStats{nodes.size(), 0, 0, seconds_since(start)});
        }
        nodes.push_back({s, subset});
        tree.nodes.push_back({parent, via});
    };

    visit(impl.initial(), det.initial(), 0, LabelTable::tau);
    std::size_t transitions = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Node n = nodes[i];
        for (const auto& e : impl.edges(n.impl)) {
            ++transitions;
            if (e.label == LabelTable::tau) {
                visit(e.target, n.subset, i, e.label);
                continue;
            }
            const std::size_t spec_label = to_spec[e.label];
            const std::size_t next = spec_label == npos ? npos : det.after(n.subset, static_cast<LabelId>(spec_label));
            if (next == npos) {
                Trace t = tree.trace_to(impl, i);
                t.push_back(impl.label(e.label));
                v.passed = false;
                v.counterexample = std::move(t);
                v.stats = {nodes.size(), transitions, 0.0, seconds_since(start)};
                return v;
            }
            visit(e.target, next, i, e.label);
        }
    }
    v.stats = {nodes.size(), transitions, 0.0, seconds_since(start)};
    return v;
}

Verdict timelock_free(const Lts& lts)
{
    const auto start = Clock::now();
    const Reach r = reach(lts);

    std::vector<std::vector<StateId>> preds(lts.state_count());
    std::vector<char> good(lts.state_count(), 0);
    std::vector<StateId> work;
    for (StateId s : r.order) {
        for (const auto& e : lts.edges(s)) {
            if (e.label == LabelTable::tock) {
                if (!good[s]) {
                    good[s] = 1;
                    work.push_back(s);
                }
            } else if (e.label != LabelTable::tick) {
                preds[e.target].push_back(s);
            }
        }
    }
    while (!work.empty()) {
        const StateId s = work.back();
        work.pop_back();
        for (StateId p : preds[s]) {
            if (!good[p]) {
                good[p] = 1;
                work.push_back(p);
            }
        }
    }

    Verdict v;
    v.stats = {r.order.size(), reachable_transitions(lts, r), 0.0, 0.0};
    for (StateId s : r.order) {
        if (!good[s]) {
            v.passed = false;
            v.counterexample = r.tree.trace_to(lts, r.node_of[s]);
            break;
        }
    }
    v.stats.verify_seconds = seconds_since(start);
    return v;
}

Verdict does_not_terminate(const Lts& lts)
{
    const auto start = Clock::now();
    const Reach r = reach(lts);
    Verdict v;
    v.stats = {r.order.size(), reachable_transitions(lts, r), 0.0, 0.0};
    for (StateId s : r.order) {
        if (lts.has_edge(s, LabelTable::tick)) {
            Trace t = r.tree.trace_to(lts, r.node_of[s]);
            t.push_back(EventLabel::tick());
            v.passed = false;
            v.counterexample = std::move(t);
            break;
        }
    }
    v.stats.verify_seconds = seconds_since(start);
    return v;
}

Verdict response_before_tock(const Lts& lts, const EventSet& trigger, const EventSet& response)
{
    const auto start = Clock::now();
    std::vector<char> is_trigger(lts.labels().size(), 0);
    std::vector<char> is_response(lts.labels().size(), 0);
    for (LabelId l = 0; l < lts.labels().size(); ++l) {
        is_trigger[l] = trigger.contains(lts.label(l));
        is_response[l] = response.contains(lts.label(l));
    }
    // Product with a two-state monitor: pending = a trigger awaits its response.
    struct Node {
        StateId s;
        bool pending;
    };
    std::vector<Node> nodes;
    SearchTree tree;
    std::vector<std::size_t> index(lts.state_count() * 2, npos);
    auto visit = [&](StateId s, bool pending, std::size_t parent, LabelId via) {
        auto& slot = index[s * 2 + (pending ? 1 : 0)];
        if (slot != npos) return;
        slot = nodes.size();
        nodes.push_back({s, pending});
        tree.nodes.push_back({parent, via});
    };
    visit(lts.initial(), false, 0, LabelTable::tau);
    std::size_t transitions = 0;
    Verdict v;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Node n = nodes[i];
        for (const auto& e : lts.edges(n.s)) {
            ++transitions;
            if (e.label == LabelTable::tock && n.pending) {
                Trace t = tree.trace_to(lts, i);
                t.push_back(EventLabel::tock());
                v.passed = false;
                v.counterexample = std::move(t);
                v.stats = {nodes.size(), transitions, 0.0, seconds_since(start)};
                return v;
            }
            bool pending = n.pending;
            if (is_response[e.label]) pending = false;
            else if (is_trigger[e.label]) pending = true;
            visit(e.target, pending, i, e.label);
        }
    }
    v.stats = {nodes.size(), transitions, 0.0, seconds_since(start)};
    return v;
}

std::optional<Trace> find_event(const Lts& lts, const EventSet& target)
{
    const Reach r = reach(lts);
    for (StateId s : r.order) {
        for (const auto& e : lts.edges(s)) {
            if (target.contains(lts.label(e.label))) {
                Trace t = r.tree.trace_to(lts, r.node_of[s]);
                t.push_back(lts.label(e.label));
                return t;
            }
        }
    }
    return std::nullopt;
}

TermPtr constrain_skip(TermPtr t, EventSet events) { return term::parallel(std::move(t), std::move(events), term::skip()); }

TermPtr build_deadline_spec(Environment& env, const std::string& name, EventSet alphabet, EventSet watch,
                            EventSet required, int budget)
{
    auto def = term::sequential(
        term::exception(term::chaos(std::move(alphabet)), std::move(watch), term::deadline(std::move(required), budget)),
        term::named(name));
    env.define(name, std::move(def));
    return term::named(name);
}

}  // namespace tockcheck
