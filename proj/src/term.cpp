#include "tockcheck/term.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "term_detail.hpp"

namespace tockcheck {

struct Term::Private {};

namespace {

std::size_t compute_hash(TermKind kind, const EventLabel& event, const std::vector<TermPtr>& ops,
                         const std::shared_ptr<const EventSet>& events, int number,
                         const std::string& name)
{
    std::size_t h = hash_combine(0x7a3bu, static_cast<std::size_t>(kind));
    if (kind == TermKind::prefix) h = hash_combine(h, event.hash());
    for (const auto& o : ops) h = hash_combine(h, o->hash());
    if (events) h = hash_combine(h, events->hash());
    h = hash_combine(h, static_cast<std::size_t>(number));
    if (!name.empty()) h = hash_combine(h, std::hash<std::string>{}(name));
    return h;
}

TermPtr make(TermKind kind, EventLabel event, std::vector<TermPtr> ops,
             std::shared_ptr<const EventSet> events, int number = 0, std::string name = {})
{
    return std::make_shared<const Term>(Term::Private{}, kind, std::move(event), std::move(ops),
                                        std::move(events), number, std::move(name));
}

std::shared_ptr<const EventSet> share(EventSet s)
{
    return std::make_shared<const EventSet>(std::move(s));
}

std::vector<TermPtr> canonical_operands(std::vector<TermPtr> ps)
{
    std::sort(ps.begin(), ps.end(), [](const TermPtr& a, const TermPtr& b) { return compare(*a, *b) < 0; });
    ps.erase(std::unique(ps.begin(), ps.end(), [](const TermPtr& a, const TermPtr& b) { return structurally_equal(a, b); }),
             ps.end());
    return ps;
}

}  // namespace

Term::Term(const Private&, TermKind kind, EventLabel event, std::vector<TermPtr> operands,
           std::shared_ptr<const EventSet> events, int number, std::string name)
    : kind_(kind),
      event_(std::move(event)),
      operands_(std::move(operands)),
      events_(std::move(events)),
      number_(number),
      name_(std::move(name))
{
    hash_ = compute_hash(kind_, event_, operands_, events_, number_, name_);
}

std::strong_ordering compare(const Term& a, const Term& b)
{
    if (&a == &b) return std::strong_ordering::equal;
    if (auto c = a.kind() <=> b.kind(); c != 0) return c;
    if (auto c = a.hash() <=> b.hash(); c != 0) return c;
    if (auto c = a.budget() <=> b.budget(); c != 0) return c;
    if (a.kind() == TermKind::prefix) {
        if (auto c = a.event() <=> b.event(); c != 0) return c;
    }
    if (auto c = a.name() <=> b.name(); c != 0) return c;
    if (a.events_ptr() != b.events_ptr()) {
        if (!a.events_ptr() || !b.events_ptr()) return a.events_ptr() ? std::strong_ordering::greater : std::strong_ordering::less;
        if (auto c = a.events() <=> b.events(); c != 0) return c;
    }
    if (auto c = a.operands().size() <=> b.operands().size(); c != 0) return c;
    for (std::size_t i = 0; i < a.operands().size(); ++i) {
        if (auto c = compare(*a.operand(i), *b.operand(i)); c != 0) return c;
    }
    return std::strong_ordering::equal;
}

bool structurally_equal(const TermPtr& a, const TermPtr& b)
{
    if (a == b) return true;
    if (a->hash() != b->hash()) return false;
    return compare(*a, *b) == 0;
}

std::size_t term_size(const TermPtr& t)
{
    std::size_t n = 1;
    for (const auto& o : t->operands()) n += term_size(o);
    return n;
}

std::string Term::to_string() const
{
    auto sub = [](const TermPtr& t) { return t->to_string(); };
    auto join = [&](const char* sep) {
        std::string s = "(";
        for (std::size_t i = 0; i < operands_.size(); ++i) {
            if (i) s += sep;
            s += sub(operands_[i]);
        }
        return s + ")";
    };
    switch (kind_) {
    case TermKind::stop: return "STOP";
    case TermKind::skip: return "SKIP";
    case TermKind::tock_run: return "TOCKS";
    case TermKind::prefix: return event_.to_string() + " -> " + sub(operands_[0]);
    case TermKind::external_choice: return join(" [] ");
    case TermKind::internal_choice: return join(" |~| ");
    case TermKind::sequential: return "(" + sub(operands_[0]) + " ; " + sub(operands_[1]) + ")";
    case TermKind::hide: return "(" + sub(operands_[0]) + " \\ " + events_->to_string() + ")";
    case TermKind::exception:
        return "(" + sub(operands_[0]) + " [| " + events_->to_string() + " |> " + sub(operands_[1]) + ")";
    case TermKind::parallel:
        if (events_->empty()) return "(" + sub(operands_[0]) + " ||| " + sub(operands_[1]) + ")";
        return "(" + sub(operands_[0]) + " [| " + events_->to_string() + " |] " + sub(operands_[1]) + ")";
    case TermKind::chaos: return (chaos_stable() ? "CHAOS'(" : "CHAOS(") + events_->to_string() + ")";
    case TermKind::deadline: return "ADeadline(" + events_->to_string() + ", " + std::to_string(number_) + ")";
    case TermKind::named_ref: return name_;
    case TermKind::prioritise: return "prioritise(" + sub(operands_[0]) + ", " + events_->to_string() + ")";
    }
    return "?";
}

namespace term {

TermPtr stop()
{
    static const TermPtr s = make(TermKind::stop, {}, {}, nullptr);
    return s;
}

TermPtr skip()
{
    static const TermPtr s = make(TermKind::skip, {}, {}, nullptr);
    return s;
}

TermPtr tock_run()
{
    static const TermPtr s = make(TermKind::tock_run, {}, {}, nullptr);
    return s;
}

TermPtr prefix(EventLabel e, TermPtr p)
{
    if (e.is_tick()) throw std::invalid_argument("tick cannot be used as a prefix event");
    return make(TermKind::prefix, std::move(e), {std::move(p)}, nullptr);
}

TermPtr external_choice(std::vector<TermPtr> ps)
{
    ps = canonical_operands(std::move(ps));
    if (ps.empty()) return stop();
    if (ps.size() == 1) return ps.front();
    return make(TermKind::external_choice, {}, std::move(ps), nullptr);
}

TermPtr internal_choice(std::vector<TermPtr> ps)
{
    if (ps.empty()) throw std::invalid_argument("internal choice needs at least one operand");
    ps = canonical_operands(std::move(ps));
    if (ps.size() == 1) return ps.front();
    return make(TermKind::internal_choice, {}, std::move(ps), nullptr);
}

TermPtr sequential(TermPtr first, TermPtr second)
{
    return make(TermKind::sequential, {}, {std::move(first), std::move(second)}, nullptr);
}

TermPtr hide(TermPtr p, EventSet hidden) { return detail::hide(std::move(p), share(std::move(hidden))); }

TermPtr exception(TermPtr p, EventSet a, TermPtr q)
{
    return detail::exception(std::move(p), share(std::move(a)), std::move(q));
}

TermPtr parallel(TermPtr left, EventSet sync, TermPtr right)
{
    return detail::parallel(std::move(left), share(std::move(sync)), std::move(right));
}

TermPtr interleave(TermPtr left, TermPtr right) { return parallel(std::move(left), EventSet{}, std::move(right)); }

TermPtr chaos(EventSet a) { return detail::chaos(share(std::move(a))); }

TermPtr chaos_live(std::shared_ptr<const EventSet> a)
{
    return make(TermKind::chaos, {}, {}, std::move(a), 1);
}

TermPtr deadline(EventSet a, int budget) { return detail::deadline(share(std::move(a)), budget); }

TermPtr named(std::string name)
{
    if (name.empty()) throw std::invalid_argument("process name must not be empty");
    return make(TermKind::named_ref, {}, {}, nullptr, 0, std::move(name));
}

TermPtr prioritise(TermPtr p, EventSet low) { return detail::prioritise(std::move(p), share(std::move(low))); }

namespace detail {

TermPtr hide(TermPtr p, SharedSet hidden)
{
    return make(TermKind::hide, {}, {std::move(p)}, std::move(hidden));
}

TermPtr exception(TermPtr p, SharedSet a, TermPtr q)
{
    return make(TermKind::exception, {}, {std::move(p), std::move(q)}, std::move(a));
}

TermPtr parallel(TermPtr left, SharedSet sync, TermPtr right)
{
    return make(TermKind::parallel, {}, {std::move(left), std::move(right)}, std::move(sync));
}

TermPtr deadline(SharedSet a, int budget)
{
    if (budget < 0) throw std::invalid_argument("deadline budget must be non-negative");
    return make(TermKind::deadline, {}, {}, std::move(a), budget);
}

TermPtr chaos(SharedSet a) { return make(TermKind::chaos, {}, {}, std::move(a), 0); }

TermPtr prioritise(TermPtr p, SharedSet low)
{
    return make(TermKind::prioritise, {}, {std::move(p)}, std::move(low));
}

}  // namespace detail

}  // namespace term

}  // namespace tockcheck
