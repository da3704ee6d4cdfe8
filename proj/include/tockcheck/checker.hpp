#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "tockcheck/event.hpp"
#include "tockcheck/lts.hpp"
#include "tockcheck/semantics.hpp"
#include "tockcheck/term.hpp"

namespace tockcheck {

struct CheckStats {
    std::size_t states = 0;
    std::size_t transitions = 0;
    double compile_seconds = 0.0;
    double verify_seconds = 0.0;
};

/// Outcome of one check. A failing verdict always carries a counterexample:
/// the tau-erased trace with tock and tick kept.
struct Verdict {
    bool passed = true;
    std::optional<Trace> counterexample;
    CheckStats stats;
};

class ResourceError : public std::runtime_error {
public:
    ResourceError(const std::string& what, CheckStats partial)
        : std::runtime_error(what), partial_(partial)
    {
    }
    const CheckStats& partial() const { return partial_; }

private:
    CheckStats partial_;
};

struct RefinementOptions {
    std::size_t max_spec_subsets = 1'000'000;
    std::size_t max_product_states = default_state_limit;
};

/// Traces refinement `spec [T= impl` with tock and tick observable. Both
/// systems should already have timed priority applied. On failure the
/// counterexample is a shortest (breadth-first) trace of impl whose last
/// event spec cannot perform.
Verdict traces_refines(const Lts& spec, const Lts& impl, const RefinementOptions& options = {});

/// Passes when every reachable state can reach a tock through events other
/// than tock and tick. Termination refuses time forever, so a state whose
/// only way on is tick is a timelock.
Verdict timelock_free(const Lts& lts);

/// Passes when no tick is reachable; otherwise the counterexample ends in tick.
Verdict does_not_terminate(const Lts& lts);

/// Passes when, after any `trigger` event, a `response` event happens
/// before the next tock. Counterexamples end with the offending tock.
Verdict response_before_tock(const Lts& lts, const EventSet& trigger, const EventSet& response);

/// Shortest trace reaching an event of `target`, when one exists.
std::optional<Trace> find_event(const Lts& lts, const EventSet& target);

/// `t [| events |] SKIP`: the behaviours of t that never perform `events`.
TermPtr constrain_skip(TermPtr t, EventSet events);

/// Defines `name` in `env` as
///   Def = (CHAOS(alphabet) [| watch |> ADeadline(required, budget)) ; Def
/// and returns a reference to it. Any behaviour is allowed until a `watch`
/// event; then one of `required` must follow within `budget` tocks.
TermPtr build_deadline_spec(Environment& env, const std::string& name, EventSet alphabet, EventSet watch,
                            EventSet required, int budget = 0);

}  // namespace tockcheck
