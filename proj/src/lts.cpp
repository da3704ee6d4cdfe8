#include "tockcheck/lts.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <string>

namespace tockcheck {

LabelTable::LabelTable()
{
    intern(EventLabel::tau());
    intern(EventLabel::tock());
    intern(EventLabel::tick());
}

LabelId LabelTable::intern(const EventLabel& e)
{
    auto [it, inserted] = ids_.emplace(e, static_cast<LabelId>(labels_.size()));
    if (inserted) labels_.push_back(e);
    return it->second;
}

std::optional<LabelId> LabelTable::find(const EventLabel& e) const
{
    auto it = ids_.find(e);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

StateId Lts::add_state()
{
    out_.emplace_back();
    return static_cast<StateId>(out_.size() - 1);
}

void Lts::add_edge(StateId from, const EventLabel& label, StateId to) { add_edge(from, labels_.intern(label), to); }

void Lts::add_edge(StateId from, LabelId label, StateId to) { out_[from].push_back(Edge{label, to}); }

std::size_t Lts::transition_count() const
{
    std::size_t n = 0;
    for (const auto& es : out_) n += es.size();
    return n;
}

bool Lts::has_edge(StateId s, LabelId label) const
{
    const auto& es = out_[s];
    return std::any_of(es.begin(), es.end(), [&](const Edge& e) { return e.label == label; });
}

ExplorationOverflow::ExplorationOverflow(std::size_t limit, std::size_t frontier)
    : std::runtime_error("state limit of " + std::to_string(limit) + " exceeded with " + std::to_string(frontier) +
                         " states still on the frontier"),
      limit_(limit),
      frontier_(frontier)
{
}

Lts explode(const TermPtr& t, const Environment& env, const ExploreOptions& options)
{
    env.check_linked(t);
    Lts lts;
    StepContext ctx(env);
    std::unordered_map<TermPtr, StateId, TermHash, TermEqual> ids;
    std::vector<TermPtr> terms;

    auto intern = [&](const TermPtr& term) -> StateId {
        auto [it, inserted] = ids.emplace(term, static_cast<StateId>(terms.size()));
        if (inserted) {
            if (terms.size() >= options.max_states) {
                throw ExplorationOverflow(options.max_states, terms.size() - lts.state_count());
            }
            terms.push_back(term);
        }
        return it->second;
    };

    intern(t);
    for (std::size_t next = 0; next < terms.size(); ++next) {
        const StateId s = lts.add_state();
        auto steps = step(terms[next], ctx);
        if (options.timed_priority) prioritise_tock(steps);
        for (const auto& st : steps) {
            const StateId target = intern(st.target);
            lts.add_edge(s, st.label, target);
        }
    }
    if (options.keep_terms) lts.mutable_terms() = std::move(terms);
    return lts;
}

Lts apply_timed_priority(const Lts& lts)
{
    Lts out = lts;
    for (StateId s = 0; s < out.state_count(); ++s) {
        auto& es = out.mutable_edges(s);
        const bool urgent = std::any_of(es.begin(), es.end(), [](const Edge& e) {
            return e.label == LabelTable::tau || e.label == LabelTable::tick;
        });
        if (!urgent) continue;
        es.erase(std::remove_if(es.begin(), es.end(), [](const Edge& e) { return e.label == LabelTable::tock; }),
                 es.end());
    }
    return out;
}

bool identical(const Lts& a, const Lts& b)
{
    if (a.state_count() != b.state_count() || a.initial() != b.initial()) return false;
    for (StateId s = 0; s < a.state_count(); ++s) {
        const auto& ea = a.edges(s);
        const auto& eb = b.edges(s);
        if (ea.size() != eb.size()) return false;
        for (std::size_t i = 0; i < ea.size(); ++i) {
            if (ea[i].target != eb[i].target || a.label(ea[i].label) != b.label(eb[i].label)) return false;
        }
    }
    return true;
}

std::optional<std::vector<StateId>> replay(const Lts& lts, const Trace& trace)
{
    std::vector<LabelId> ids;
    for (const auto& e : trace) {
        if (e.is_tau()) continue;
        auto id = lts.labels().find(e);
        if (!id) return std::nullopt;
        ids.push_back(*id);
    }
    using Node = std::pair<StateId, std::size_t>;
    std::map<Node, Node> parent;
    std::deque<Node> queue;
    const Node start{lts.initial(), 0};
    parent.emplace(start, start);
    queue.push_back(start);
    std::optional<Node> goal;
    while (!queue.empty()) {
        const Node n = queue.front();
        queue.pop_front();
        if (n.second == ids.size()) {
            goal = n;
            break;
        }
        for (const auto& e : lts.edges(n.first)) {
            Node m;
            if (e.label == LabelTable::tau) {
                m = {e.target, n.second};
            } else if (e.label == ids[n.second]) {
                m = {e.target, n.second + 1};
            } else {
                continue;
            }
            if (parent.emplace(m, n).second) queue.push_back(m);
        }
    }
    if (!goal) return std::nullopt;
    std::vector<StateId> states(ids.size() + 1, lts.initial());
    for (Node n = *goal; n != start;) {
        const Node p = parent.at(n);
        if (p.second != n.second) states[n.second] = n.first;
        n = p;
    }
    return states;
}

}  // namespace tockcheck
