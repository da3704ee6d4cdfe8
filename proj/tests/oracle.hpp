#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "tockcheck/lts.hpp"
#include "tockcheck/term.hpp"

namespace oracle {

using namespace tockcheck;

/// States reachable from `from` through tau edges only, including `from`.
inline std::set<StateId> tau_closure(const Lts& lts, std::set<StateId> from)
{
    std::vector<StateId> work(from.begin(), from.end());
    while (!work.empty()) {
        StateId s = work.back();
        work.pop_back();
        for (const auto& e : lts.edges(s)) {
            if (e.label == LabelTable::tau && from.insert(e.target).second) work.push_back(e.target);
        }
    }
    return from;
}

/// Every tau-erased trace of length <= depth, found by expanding traces one
/// event at a time. `observe` decides which non-tau labels appear in traces;
/// the others are treated as silent.
template <typename Observe>
std::set<Trace> traces(const Lts& lts, int depth, Observe observe)
{
    std::set<Trace> out;
    std::map<Trace, std::set<StateId>> level;
    auto close = [&](std::set<StateId> s) {
        std::vector<StateId> work(s.begin(), s.end());
        while (!work.empty()) {
            StateId x = work.back();
            work.pop_back();
            for (const auto& e : lts.edges(x)) {
                const auto& l = lts.label(e.label);
                if ((l.is_tau() || !observe(l)) && s.insert(e.target).second) work.push_back(e.target);
            }
        }
        return s;
    };
    level[{}] = close({lts.initial()});
    for (int d = 0; d <= depth; ++d) {
        std::map<Trace, std::set<StateId>> next;
        for (const auto& [t, states] : level) {
            out.insert(t);
            if (d == depth) continue;
            for (StateId s : states) {
                for (const auto& e : lts.edges(s)) {
                    const auto& l = lts.label(e.label);
                    if (l.is_tau() || !observe(l)) continue;
                    Trace u = t;
                    u.push_back(l);
                    next[u].insert(e.target);
                }
            }
        }
        for (auto& [t, states] : next) states = close(states);
        level = std::move(next);
    }
    return out;
}

/// Traces with tock and tick observable.
inline std::set<Trace> timed_traces(const Lts& lts, int depth)
{
    return traces(lts, depth, [](const EventLabel&) { return true; });
}

/// Traces over visible events only; tock and tick are erased.
inline std::set<Trace> visible_traces(const Lts& lts, int depth)
{
    return traces(lts, depth, [](const EventLabel& l) { return l.is_visible(); });
}

/// Trace inclusion checked by enumerating timed traces up to `depth`.
inline bool brute_force_refines(const Lts& spec, const Lts& impl, int depth)
{
    const auto s = timed_traces(spec, depth);
    const auto i = timed_traces(impl, depth);
    return std::includes(s.begin(), s.end(), i.begin(), i.end());
}

inline Trace erase(const Trace& t, const EventSet& a)
{
    Trace out;
    for (const auto& e : t) {
        if (!a.contains(e)) out.push_back(e);
    }
    return out;
}

/// Random process terms over channels a, b, c with no recursion.
class TermGen {
public:
    explicit TermGen(std::uint64_t seed, int alphabet = 3) : rng_(seed), alphabet_(alphabet) {}

    EventLabel event() { return EventLabel::visible(std::string(1, char('a' + pick(alphabet_)))); }

    EventSet events()
    {
        std::vector<EventPattern> ps;
        for (int i = 0; i < alphabet_; ++i) {
            if (pick(2) == 0) ps.push_back({std::string(1, char('a' + i)), std::nullopt, std::nullopt});
        }
        return EventSet(std::move(ps));
    }

    /// A term of at most `size` constructor nodes.
    TermPtr term(int size)
    {
        if (size <= 1) {
            switch (pick(4)) {
            case 0: return term::stop();
            case 1: return term::skip();
            case 2: return term::prefix(event(), term::stop());
            default: return term::prefix(event(), term::skip());
            }
        }
        const int rest = size - 1;
        const int left = 1 + pick(std::max(1, rest - 1));
        const int right = std::max(1, rest - left);
        switch (pick(10)) {
        case 0:
        case 1: return term::prefix(event(), term(rest));
        case 2: return term::external_choice({term(left), term(right)});
        case 3: return term::internal_choice({term(left), term(right)});
        case 4: return term::sequential(term(left), term(right));
        case 5: return term::hide(term(rest), events());
        case 6: return term::exception(term(left), events(), term(right));
        case 7: return term::parallel(term(left), events(), term(right));
        case 8: return term::deadline(events(), pick(2));
        default: return term::prefix(EventLabel::tock(), term(rest));
        }
    }

    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

private:
    std::mt19937_64 rng_;
    int alphabet_;
};

/// A (spec, impl) pair for the refinement oracle: the spec is unrelated, a
/// nondeterministic widening of the implementation, or a hiding of it.
inline std::pair<TermPtr, TermPtr> refinement_pair(TermGen& gen)
{
    TermPtr impl = gen.term(1 + gen.pick(8));
    TermPtr spec;
    switch (gen.pick(3)) {
    case 0: spec = gen.term(1 + gen.pick(8)); break;
    case 1: spec = term::internal_choice({impl, gen.term(1 + gen.pick(4))}); break;
    default: spec = term::hide(impl, gen.events()); break;
    }
    return {spec, impl};
}

inline Environment abc_environment(int alphabet = 3)
{
    Environment env;
    for (int i = 0; i < alphabet; ++i) env.alphabet().declare({std::string(1, char('a' + i)), Direction::none, {}});
    return env;
}

}  // namespace oracle
