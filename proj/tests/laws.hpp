#pragma once

#include <optional>

#include "oracle.hpp"
#include "tockcheck/lts.hpp"
#include "tockcheck/semantics.hpp"

namespace laws {

using namespace tockcheck;

inline constexpr int depth = 6;
// Generated terms have no recursion, so this depth sees every visible trace.
inline constexpr int full_depth = 24;

/// Empty when the law holds, otherwise a description of the violating input.
using Outcome = std::string;

inline bool contains_kind(const TermPtr& t, TermKind k)
{
    if (t->kind() == k) return true;
    for (const auto& o : t->operands()) {
        if (contains_kind(o, k)) return true;
    }
    return false;
}

inline std::set<Trace> vis(const TermPtr& t, const Environment& env, int d)
{
    return oracle::visible_traces(explode(t, env), d);
}

inline bool has_any(const Trace& t, const EventSet& a)
{
    for (const auto& e : t) {
        if (a.contains(e)) return true;
    }
    return false;
}

/// traces(P \ A) is traces(P) with the events of A erased.
inline Outcome hiding_erasure(const TermPtr& p, const EventSet& a, const Environment& env)
{
    std::set<Trace> expected;
    for (const auto& t : vis(p, env, full_depth)) {
        Trace e = oracle::erase(t, a);
        if (e.size() <= depth) expected.insert(std::move(e));
    }
    if (vis(term::hide(p, a), env, depth) == expected) return {};
    return p->to_string() + " \\ " + a.to_string();
}

/// P [| A |> Q runs P until its first A-event, then continues as Q.
inline Outcome exception_transfer(const TermPtr& p, const EventSet& a, const TermPtr& q, const Environment& env)
{
    const auto exc = vis(term::exception(p, a, q), env, depth);
    const auto ps = vis(p, env, depth);
    const auto qs = vis(q, env, depth);
    std::set<Trace> expected;
    for (const auto& t : ps) {
        std::size_t k = 0;
        while (k < t.size() && !a.contains(t[k])) ++k;
        if (k == t.size()) {
            expected.insert(t);
        } else if (k + 1 == t.size()) {
            for (const auto& u : qs) {
                if (t.size() + u.size() > depth) continue;
                Trace v = t;
                v.insert(v.end(), u.begin(), u.end());
                expected.insert(std::move(v));
            }
        }
    }
    if (exc == expected) return {};
    return p->to_string() + " [| " + a.to_string() + " |> " + q->to_string();
}

/// Without deadlines or hiding, every reachable state has an outgoing step.
/// Returns nullopt when the law does not apply to `p`.
inline std::optional<Outcome> patience(const TermPtr& p, const Environment& env)
{
    if (contains_kind(p, TermKind::deadline) || contains_kind(p, TermKind::hide)) return std::nullopt;
    const Lts lts = explode(p, env, {.timed_priority = true});
    for (StateId s = 0; s < lts.state_count(); ++s) {
        if (lts.edges(s).empty()) return p->to_string() + " is stuck in state " + std::to_string(s);
    }
    return Outcome{};
}

/// Timed priority applied twice equals once, and matches prioritised exploration.
inline Outcome priority_idempotence(const TermPtr& p, const Environment& env)
{
    const Lts once = apply_timed_priority(explode(p, env));
    if (!identical(apply_timed_priority(once), once)) return p->to_string() + ": not idempotent";
    const Lts direct = explode(p, env, {.timed_priority = true});
    if (oracle::timed_traces(direct, depth) != oracle::timed_traces(once, depth)) {
        return p->to_string() + ": differs from prioritised exploration";
    }
    return {};
}

}  // namespace laws
