#include "tockcheck/event.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace tockcheck {

std::string_view to_string(Direction d)
{
    switch (d) {
    case Direction::in: return "in";
    case Direction::out: return "out";
    case Direction::none: break;
    }
    return "";
}

bool is_dotted_identifier(std::string_view s)
{
    if (s.empty()) return false;
    bool at_start = true;
    for (char c : s) {
        if (c == '.') {
            if (at_start) return false;
            at_start = true;
            continue;
        }
        const bool alpha = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
        const bool digit = c >= '0' && c <= '9';
        if (at_start && !alpha) return false;
        if (!alpha && !digit) return false;
        at_start = false;
    }
    return !at_start;
}

EventLabel EventLabel::visible(std::string channel, std::vector<int> payload, Direction direction)
{
    if (!is_dotted_identifier(channel)) {
        throw std::invalid_argument("invalid channel name '" + channel + "'");
    }
    EventLabel e(Kind::visible);
    e.channel_ = std::move(channel);
    e.payload_ = std::move(payload);
    e.direction_ = direction;
    return e;
}

std::string EventLabel::to_string() const
{
    switch (kind_) {
    case Kind::tau: return "tau";
    case Kind::tock: return "tock";
    case Kind::tick: return "tick";
    case Kind::visible: break;
    }
    std::string s = channel_;
    if (direction_ != Direction::none) {
        s += '.';
        s += tockcheck::to_string(direction_);
    }
    for (int v : payload_) {
        s += '.';
        s += std::to_string(v);
    }
    return s;
}

std::size_t EventLabel::hash() const
{
    std::size_t h = static_cast<std::size_t>(kind_);
    if (kind_ != Kind::visible) return h;
    h = hash_combine(h, std::hash<std::string>{}(channel_));
    h = hash_combine(h, static_cast<std::size_t>(direction_));
    for (int v : payload_) h = hash_combine(h, std::hash<int>{}(v));
    return h;
}

std::string to_string(const Trace& trace)
{
    std::string s = "<";
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (i) s += ", ";
        s += trace[i].to_string();
    }
    return s + ">";
}

bool EventPattern::matches(const EventLabel& e) const
{
    if (!e.is_visible() || e.channel() != channel) return false;
    if (direction && *direction != e.direction()) return false;
    if (payload && *payload != e.payload()) return false;
    return true;
}

std::string EventPattern::to_string() const
{
    std::string s = channel;
    if (direction && *direction != Direction::none) {
        s += '.';
        s += tockcheck::to_string(*direction);
    }
    if (payload) {
        for (int v : *payload) s += "." + std::to_string(v);
    }
    return s;
}

EventSet::EventSet(std::vector<EventPattern> patterns) : patterns_(std::move(patterns))
{
    std::sort(patterns_.begin(), patterns_.end());
    patterns_.erase(std::unique(patterns_.begin(), patterns_.end()), patterns_.end());
}

EventSet EventSet::all()
{
    EventSet s;
    s.universal_ = true;
    return s;
}

EventSet EventSet::channels(std::initializer_list<std::string_view> names)
{
    std::vector<EventPattern> ps;
    for (auto n : names) ps.push_back(EventPattern{std::string(n), std::nullopt, std::nullopt});
    return EventSet(std::move(ps));
}

EventSet EventSet::single(const EventLabel& e)
{
    if (!e.is_visible()) throw std::invalid_argument("event sets hold visible events only");
    return EventSet({EventPattern{e.channel(), e.direction(), e.payload()}});
}

bool EventSet::contains(const EventLabel& e) const
{
    if (!e.is_visible()) return false;
    if (universal_) return true;
    for (const auto& p : patterns_) {
        if (p.matches(e)) return true;
    }
    return false;
}

EventSet EventSet::unite(const EventSet& other) const
{
    if (universal_ || other.universal_) return all();
    auto ps = patterns_;
    ps.insert(ps.end(), other.patterns_.begin(), other.patterns_.end());
    return EventSet(std::move(ps));
}

std::string EventSet::to_string() const
{
    if (universal_) return "Events";
    std::string s = "{|";
    for (std::size_t i = 0; i < patterns_.size(); ++i) {
        s += i ? ", " : " ";
        s += patterns_[i].to_string();
    }
    return s + (patterns_.empty() ? "|}" : " |}");
}

std::size_t EventSet::hash() const
{
    std::size_t h = universal_ ? 0x51ed27u : 0x2f1u;
    for (const auto& p : patterns_) {
        h = hash_combine(h, std::hash<std::string>{}(p.channel));
        h = hash_combine(h, p.direction ? static_cast<std::size_t>(*p.direction) + 1 : 0);
        if (p.payload) {
            for (int v : *p.payload) h = hash_combine(h, std::hash<int>{}(v));
        }
    }
    return h;
}

std::size_t ChannelDecl::payload_count() const
{
    std::size_t n = 1;
    for (const auto& f : fields) n *= static_cast<std::size_t>(std::max(0, f.size()));
    return n;
}

std::vector<EventLabel> ChannelDecl::events() const
{
    std::vector<EventLabel> out;
    out.reserve(payload_count());
    for_each_point(fields, [&](const std::vector<int>& p) {
        out.push_back(EventLabel::visible(name, p, direction));
    });
    return out;
}

void Alphabet::declare(ChannelDecl channel)
{
    if (const auto* existing = find(channel.name, channel.direction)) {
        if (existing->fields != channel.fields) {
            throw std::invalid_argument("channel '" + channel.name + "' redeclared with a different payload domain");
        }
        return;
    }
    channels_.push_back(std::move(channel));
}

const ChannelDecl* Alphabet::find(std::string_view name, Direction d) const
{
    for (const auto& c : channels_) {
        if (c.name == name && c.direction == d) return &c;
    }
    return nullptr;
}

std::vector<EventLabel> Alphabet::enumerate(const EventSet& set) const
{
    std::vector<EventLabel> out;
    for (const auto& c : channels_) {
        if (!set.universal()) {
            const bool relevant = std::any_of(set.patterns().begin(), set.patterns().end(),
                                              [&](const EventPattern& p) { return p.channel == c.name; });
            if (!relevant) continue;
        }
        for (auto& e : c.events()) {
            if (set.contains(e)) out.push_back(std::move(e));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace tockcheck
