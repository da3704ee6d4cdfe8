#include "tockcheck/semantics.hpp"

#include <algorithm>
#include <unordered_set>

#include "term_detail.hpp"

namespace tockcheck {

void Environment::define(const std::string& name, TermPtr body, std::optional<ConfigInfo> info)
{
    definitions_[name] = Definition{std::move(body), std::move(info)};
}

const Definition& Environment::lookup(const std::string& name) const
{
    auto it = definitions_.find(name);
    if (it == definitions_.end()) throw LinkageError(name);
    return it->second;
}

const Definition* Environment::find(const std::string& name) const
{
    auto it = definitions_.find(name);
    return it == definitions_.end() ? nullptr : &it->second;
}

void Environment::check_linked(const TermPtr& root) const
{
    std::unordered_set<std::string> seen;
    std::vector<TermPtr> stack{root};
    while (!stack.empty()) {
        TermPtr t = stack.back();
        stack.pop_back();
        if (t->kind() == TermKind::named_ref) {
            if (!seen.insert(t->name()).second) continue;
            stack.push_back(lookup(t->name()).body);
            continue;
        }
        for (const auto& o : t->operands()) stack.push_back(o);
    }
}

const std::vector<EventLabel>& StepContext::enumerate(const std::shared_ptr<const EventSet>& set)
{
    auto it = cache_.find(set.get());
    if (it != cache_.end()) return it->second.second;
    auto [pos, inserted] = cache_.emplace(set.get(), std::make_pair(set, env_->alphabet().enumerate(*set)));
    return pos->second.second;
}

namespace {

constexpr int max_unfold_depth = 512;

class Stepper {
public:
    explicit Stepper(StepContext& ctx) : ctx_(ctx) {}

    std::vector<Step> run(const TermPtr& t)
    {
        std::vector<Step> out;
        collect(t, out, 0);
        std::sort(out.begin(), out.end(), [](const Step& a, const Step& b) {
            if (auto c = a.label <=> b.label; c != 0) return c < 0;
            return compare(*a.target, *b.target) < 0;
        });
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

private:
    void collect(const TermPtr& t, std::vector<Step>& out, int depth)
    {
        switch (t->kind()) {
        case TermKind::stop:
        case TermKind::tock_run:
            out.push_back({EventLabel::tock(), t});
            return;
        case TermKind::skip:
            out.push_back({EventLabel::tick(), term::stop()});
            out.push_back({EventLabel::tock(), t});
            return;
        case TermKind::prefix:
            if (t->event().is_tock()) {
                out.push_back({EventLabel::tock(), t->operand(0)});
            } else {
                out.push_back({t->event(), t->operand(0)});
                out.push_back({EventLabel::tock(), t});
            }
            return;
        case TermKind::external_choice: return external_choice(t, out, depth);
        case TermKind::internal_choice:
            for (const auto& o : t->operands()) out.push_back({EventLabel::tau(), o});
            return;
        case TermKind::sequential: {
            const auto& first = t->operand(0);
            for (auto& s : sub(first, depth)) {
                if (s.label.is_tick()) {
                    out.push_back({EventLabel::tau(), t->operand(1)});
                } else {
                    out.push_back({std::move(s.label), s.target == first ? t : term::sequential(s.target, t->operand(1))});
                }
            }
            return;
        }
        case TermKind::hide: {
            const auto& inner = t->operand(0);
            for (auto& s : sub(inner, depth)) {
                EventLabel l = t->events().contains(s.label) ? EventLabel::tau() : std::move(s.label);
                out.push_back({std::move(l), s.target == inner ? t : term::detail::hide(s.target, t->events_ptr())});
            }
            return;
        }
        case TermKind::exception: {
            const auto& inner = t->operand(0);
            for (auto& s : sub(inner, depth)) {
                if (s.label.is_tick()) {
                    out.push_back({EventLabel::tick(), term::stop()});
                } else if (t->events().contains(s.label)) {
                    out.push_back({std::move(s.label), t->operand(1)});
                } else {
                    out.push_back({std::move(s.label),
                                   s.target == inner ? t : term::detail::exception(s.target, t->events_ptr(), t->operand(1))});
                }
            }
            return;
        }
        case TermKind::parallel: return parallel(t, out, depth);
        case TermKind::chaos:
            if (!t->chaos_stable()) {
                out.push_back({EventLabel::tau(), term::stop()});
                out.push_back({EventLabel::tau(), term::chaos_live(t->events_ptr())});
            } else {
                const auto restart = term::detail::chaos(t->events_ptr());
                for (const auto& e : ctx_.enumerate(t->events_ptr())) out.push_back({e, restart});
                out.push_back({EventLabel::tock(), t});
            }
            return;
        case TermKind::deadline:
            for (const auto& e : ctx_.enumerate(t->events_ptr())) out.push_back({e, term::skip()});
            if (t->budget() > 0) {
                out.push_back({EventLabel::tock(), term::detail::deadline(t->events_ptr(), t->budget() - 1)});
            }
            return;
        case TermKind::named_ref: {
            if (depth > max_unfold_depth) {
                throw std::runtime_error("unguarded recursion through '" + t->name() + "'");
            }
            const auto& body = ctx_.env().lookup(t->name()).body;
            for (auto& s : sub(body, depth + 1)) {
                out.push_back({std::move(s.label), structurally_equal(s.target, body) ? t : s.target});
            }
            return;
        }
        case TermKind::prioritise: {
            const auto& inner = t->operand(0);
            auto steps = sub(inner, depth);
            const auto& low = t->events();
            const bool urgent = std::any_of(steps.begin(), steps.end(), [&](const Step& s) {
                return !s.label.is_tock() && !low.contains(s.label);
            });
            for (auto& s : steps) {
                if (urgent && low.contains(s.label)) continue;
                out.push_back({std::move(s.label), s.target == inner ? t : term::detail::prioritise(s.target, t->events_ptr())});
            }
            return;
        }
        }
    }

    std::vector<Step> sub(const TermPtr& t, int depth)
    {
        std::vector<Step> out;
        collect(t, out, depth);
        return out;
    }

    void external_choice(const TermPtr& t, std::vector<Step>& out, int depth)
    {
        const auto& ops = t->operands();
        std::vector<std::vector<TermPtr>> tock_targets(ops.size());
        bool all_tock = true;
        for (std::size_t i = 0; i < ops.size(); ++i) {
            for (auto& s : sub(ops[i], depth)) {
                if (s.label.is_tau()) {
                    auto replaced = ops;
                    replaced[i] = s.target;
                    out.push_back({EventLabel::tau(), term::external_choice(std::move(replaced))});
                } else if (s.label.is_tock()) {
                    tock_targets[i].push_back(s.target);
                } else {
                    out.push_back({std::move(s.label), s.target});
                }
            }
            all_tock = all_tock && !tock_targets[i].empty();
        }
        if (!all_tock) return;
        // Time passes in every branch at once; each combination of branch
        // successors is a separate outcome.
        std::vector<std::size_t> idx(ops.size(), 0);
        while (true) {
            bool unchanged = true;
            std::vector<TermPtr> combo(ops.size());
            for (std::size_t i = 0; i < ops.size(); ++i) {
                combo[i] = tock_targets[i][idx[i]];
                unchanged = unchanged && combo[i] == ops[i];
            }
            out.push_back({EventLabel::tock(), unchanged ? t : term::external_choice(std::move(combo))});
            std::size_t i = 0;
            while (i < ops.size() && ++idx[i] == tock_targets[i].size()) {
                idx[i] = 0;
                ++i;
            }
            if (i == ops.size()) break;
        }
    }

    void parallel(const TermPtr& t, std::vector<Step>& out, int depth)
    {
        const auto& left = t->operand(0);
        const auto& right = t->operand(1);
        const auto& sync = t->events();
        auto rebuild = [&](const TermPtr& l, const TermPtr& r) {
            if (l == left && r == right) return t;
            return term::detail::parallel(l, t->events_ptr(), r);
        };
        auto synchronised = [&](const EventLabel& e) { return e.is_tock() || e.is_tick() || sync.contains(e); };

        auto ls = sub(left, depth);
        auto rs = sub(right, depth);
        std::vector<const Step*> rsync;
        for (const auto& s : ls) {
            if (!synchronised(s.label)) out.push_back({s.label, rebuild(s.target, right)});
        }
        for (const auto& s : rs) {
            if (!synchronised(s.label)) {
                out.push_back({s.label, rebuild(left, s.target)});
            } else {
                rsync.push_back(&s);
            }
        }
        for (const auto& l : ls) {
            if (!synchronised(l.label)) continue;
            for (const auto* r : rsync) {
                if (r->label != l.label) continue;
                if (l.label.is_tick()) {
                    out.push_back({EventLabel::tick(), term::stop()});
                } else {
                    out.push_back({l.label, rebuild(l.target, r->target)});
                }
            }
        }
    }

    StepContext& ctx_;
};

}  // namespace

std::vector<Step> step(const TermPtr& t, StepContext& ctx) { return Stepper(ctx).run(t); }

std::vector<Step> step(const TermPtr& t, const Environment& env)
{
    StepContext ctx(env);
    return step(t, ctx);
}

void prioritise_tock(std::vector<Step>& steps)
{
    const bool urgent = std::any_of(steps.begin(), steps.end(),
                                    [](const Step& s) { return s.label.is_tau() || s.label.is_tick(); });
    if (!urgent) return;
    steps.erase(std::remove_if(steps.begin(), steps.end(), [](const Step& s) { return s.label.is_tock(); }),
                steps.end());
}

}  // namespace tockcheck
