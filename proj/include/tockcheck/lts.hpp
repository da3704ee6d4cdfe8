#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "tockcheck/event.hpp"
#include "tockcheck/semantics.hpp"
#include "tockcheck/term.hpp"

namespace tockcheck {

using StateId = std::uint32_t;
using LabelId = std::uint32_t;

/// Interned labels. Ids 0, 1, 2 are always tau, tock and tick.
class LabelTable {
public:
    static constexpr LabelId tau = 0;
    static constexpr LabelId tock = 1;
    static constexpr LabelId tick = 2;

    LabelTable();
    LabelId intern(const EventLabel& e);
    std::optional<LabelId> find(const EventLabel& e) const;
    const EventLabel& at(LabelId id) const { return labels_[id]; }
    std::size_t size() const { return labels_.size(); }

private:
    std::vector<EventLabel> labels_;
    std::unordered_map<EventLabel, LabelId> ids_;
};

struct Edge {
    LabelId label;
    StateId target;
    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Explicit labelled transition system. State 0 is the initial state when
/// the system was produced by `explode`.
class Lts {
public:
    StateId add_state();
    void add_edge(StateId from, const EventLabel& label, StateId to);
    void add_edge(StateId from, LabelId label, StateId to);

    StateId initial() const { return initial_; }
    void set_initial(StateId s) { initial_ = s; }
    std::size_t state_count() const { return out_.size(); }
    std::size_t transition_count() const;
    const std::vector<Edge>& edges(StateId s) const { return out_[s]; }
    std::vector<Edge>& mutable_edges(StateId s) { return out_[s]; }

    LabelTable& labels() { return labels_; }
    const LabelTable& labels() const { return labels_; }
    const EventLabel& label(LabelId id) const { return labels_.at(id); }

    /// Source term of each state when exploration kept them.
    const std::vector<TermPtr>& terms() const { return terms_; }
    std::vector<TermPtr>& mutable_terms() { return terms_; }

    bool has_edge(StateId s, LabelId label) const;

private:
    StateId initial_ = 0;
    std::vector<std::vector<Edge>> out_;
    LabelTable labels_;
    std::vector<TermPtr> terms_;
};

class ExplorationOverflow : public std::runtime_error {
public:
    ExplorationOverflow(std::size_t limit, std::size_t frontier);
    std::size_t limit() const { return limit_; }
    std::size_t frontier() const { return frontier_; }

private:
    std::size_t limit_;
    std::size_t frontier_;
};

inline constexpr std::size_t default_state_limit = 10'000'000;

struct ExploreOptions {
    std::size_t max_states = default_state_limit;
    /// Apply maximal progress while exploring, so states only reachable
    /// through a pre-empted tock are never generated.
    bool timed_priority = false;
    bool keep_terms = false;
};

/// Breadth-first closure of `step` from `t`. States are numbered in
/// discovery order and each state's edges are sorted, so the result is a
/// deterministic function of the input.
Lts explode(const TermPtr& t, const Environment& env, const ExploreOptions& options = {});

/// Maximal progress: drop tock from every state that can perform tau or tick.
Lts apply_timed_priority(const Lts& lts);

/// Same states, edges and labels (by value) in the same order.
bool identical(const Lts& a, const Lts& b);

/// States reached after each event of `trace`, following tau moves between
/// events and taking the first path in state order. Empty when the trace is
/// not a trace of `lts`. Element 0 is the initial state.
std::optional<std::vector<StateId>> replay(const Lts& lts, const Trace& trace);

}  // namespace tockcheck
