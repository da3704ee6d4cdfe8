#pragma once

#include <compare>
#include <memory>
#include <string>
#include <vector>

#include "tockcheck/event.hpp"

namespace tockcheck {

enum class TermKind : std::uint8_t {
    stop,
    skip,
    prefix,
    external_choice,
    internal_choice,
    sequential,
    hide,
    exception,
    parallel,
    chaos,
    deadline,
    tock_run,
    named_ref,
    prioritise,
};

class Term;
using TermPtr = std::shared_ptr<const Term>;

/// An immutable process term. Build terms with the factory functions in
/// namespace `term`; they canonicalise choice operands (sorted, deduplicated)
/// so structurally equal processes compare equal.
class Term {
public:
    TermKind kind() const { return kind_; }
    std::size_t hash() const { return hash_; }

    /// Prefix event.
    const EventLabel& event() const { return event_; }
    /// Operands, in constructor order (choice operands in canonical order).
    const std::vector<TermPtr>& operands() const { return operands_; }
    const TermPtr& operand(std::size_t i) const { return operands_[i]; }
    /// Hide / exception / parallel / chaos / deadline / prioritise event set.
    const EventSet& events() const { return *events_; }
    const std::shared_ptr<const EventSet>& events_ptr() const { return events_; }
    /// Deadline budget in tocks.
    int budget() const { return number_; }
    /// Chaos that has committed to staying live (no stall step pending).
    bool chaos_stable() const { return number_ != 0; }
    const std::string& name() const { return name_; }

    std::string to_string() const;

    struct Private;
    Term(const Private&, TermKind kind, EventLabel event, std::vector<TermPtr> operands,
         std::shared_ptr<const EventSet> events, int number, std::string name);

private:
    TermKind kind_;
    EventLabel event_;
    std::vector<TermPtr> operands_;
    std::shared_ptr<const EventSet> events_;
    int number_ = 0;
    std::string name_;
    std::size_t hash_ = 0;
};

/// Total structural order; pointer-identical terms short-circuit.
std::strong_ordering compare(const Term& a, const Term& b);
bool structurally_equal(const TermPtr& a, const TermPtr& b);

struct TermHash {
    std::size_t operator()(const TermPtr& t) const noexcept { return t->hash(); }
};
struct TermEqual {
    bool operator()(const TermPtr& a, const TermPtr& b) const { return structurally_equal(a, b); }
};

/// Number of constructor nodes (named references count as one).
std::size_t term_size(const TermPtr& t);

namespace term {

TermPtr stop();
TermPtr skip();
/// `e -> p`. Tick is not a valid prefix event.
TermPtr prefix(EventLabel e, TermPtr p);
/// Empty choice is Stop; a single operand is returned as-is.
TermPtr external_choice(std::vector<TermPtr> ps);
/// Throws on an empty operand list; a single operand is returned as-is.
TermPtr internal_choice(std::vector<TermPtr> ps);
TermPtr sequential(TermPtr first, TermPtr second);
TermPtr hide(TermPtr p, EventSet hidden);
/// `p [| a |> q`: behaves as p until p performs an event of `a`, then as q.
TermPtr exception(TermPtr p, EventSet a, TermPtr q);
TermPtr parallel(TermPtr left, EventSet sync, TermPtr right);
TermPtr interleave(TermPtr left, TermPtr right);
TermPtr chaos(EventSet a);
TermPtr deadline(EventSet a, int budget);
TermPtr tock_run();
TermPtr named(std::string name);
/// Events of `low` are only offered in states where nothing but `low` events
/// and tock is enabled.
TermPtr prioritise(TermPtr p, EventSet low);

/// Chaos in its committed phase (internal; produced by stepping `chaos`).
TermPtr chaos_live(std::shared_ptr<const EventSet> a);

}  // namespace term

}  // namespace tockcheck
