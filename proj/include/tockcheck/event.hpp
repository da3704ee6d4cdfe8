#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tockcheck {

enum class Direction : std::uint8_t { none, in, out };

std::string_view to_string(Direction d);

/// A transition label: a visible channel event, or one of the distinguished
/// events tau (internal), tock (one unit of time) and tick (termination).
class EventLabel {
public:
    enum class Kind : std::uint8_t { tau, tock, tick, visible };

    EventLabel() = default;

    static EventLabel tau() { return EventLabel(Kind::tau); }
    static EventLabel tock() { return EventLabel(Kind::tock); }
    static EventLabel tick() { return EventLabel(Kind::tick); }
    /// Throws std::invalid_argument when `channel` is not a dotted identifier.
    static EventLabel visible(std::string channel, std::vector<int> payload = {},
                              Direction direction = Direction::none);

    Kind kind() const { return kind_; }
    bool is_visible() const { return kind_ == Kind::visible; }
    bool is_tau() const { return kind_ == Kind::tau; }
    bool is_tock() const { return kind_ == Kind::tock; }
    bool is_tick() const { return kind_ == Kind::tick; }

    const std::string& channel() const { return channel_; }
    Direction direction() const { return direction_; }
    const std::vector<int>& payload() const { return payload_; }

    /// CSP-style rendering, e.g. `EXAX.move.in.1.-1`, `tock`.
    std::string to_string() const;
    std::size_t hash() const;

    friend bool operator==(const EventLabel&, const EventLabel&) = default;
    friend std::strong_ordering operator<=>(const EventLabel&, const EventLabel&) = default;

private:
    explicit EventLabel(Kind k) : kind_(k) {}

    Kind kind_ = Kind::tau;
    std::string channel_;
    Direction direction_ = Direction::none;
    std::vector<int> payload_;
};

bool is_dotted_identifier(std::string_view s);

using Trace = std::vector<EventLabel>;

std::string to_string(const Trace& trace);

/// Matches visible events by channel, optionally narrowed by direction and an
/// exact payload. `{| EXAX.move.in |}` is {channel EXAX.move, direction in}.
struct EventPattern {
    std::string channel;
    std::optional<Direction> direction;
    std::optional<std::vector<int>> payload;

    bool matches(const EventLabel& e) const;
    std::string to_string() const;

    friend bool operator==(const EventPattern&, const EventPattern&) = default;
    friend std::strong_ordering operator<=>(const EventPattern&, const EventPattern&) = default;
};

/// A finite union of event patterns, or the universal set of visible events.
/// Never contains tau, tock or tick.
class EventSet {
public:
    EventSet() = default;
    explicit EventSet(std::vector<EventPattern> patterns);

    static EventSet all();
    static EventSet channels(std::initializer_list<std::string_view> names);
    static EventSet single(const EventLabel& e);

    bool contains(const EventLabel& e) const;
    bool empty() const { return !universal_ && patterns_.empty(); }
    bool universal() const { return universal_; }
    const std::vector<EventPattern>& patterns() const { return patterns_; }

    EventSet unite(const EventSet& other) const;

    std::string to_string() const;
    std::size_t hash() const;

    friend bool operator==(const EventSet&, const EventSet&) = default;
    friend std::strong_ordering operator<=>(const EventSet&, const EventSet&) = default;

private:
    bool universal_ = false;
    std::vector<EventPattern> patterns_;  // sorted, unique
};

struct IntRange {
    int lo = 0;
    int hi = 0;

    int size() const { return hi - lo + 1; }
    bool contains(long long v) const { return v >= lo && v <= hi; }
    friend bool operator==(const IntRange&, const IntRange&) = default;
};

/// A channel together with the finite domain of each payload field.
struct ChannelDecl {
    std::string name;
    Direction direction = Direction::none;
    std::vector<IntRange> fields;

    std::size_t payload_count() const;
    std::vector<EventLabel> events() const;
    friend bool operator==(const ChannelDecl&, const ChannelDecl&) = default;
};

/// Every visible event in scope, as channel declarations.
class Alphabet {
public:
    /// Re-declaring an identical channel is a no-op; a conflicting domain throws.
    void declare(ChannelDecl channel);
    const std::vector<ChannelDecl>& channels() const { return channels_; }
    const ChannelDecl* find(std::string_view name, Direction d) const;

    /// Concrete events of this alphabet that belong to `set`, in sorted order.
    std::vector<EventLabel> enumerate(const EventSet& set) const;
    std::vector<EventLabel> events() const { return enumerate(EventSet::all()); }

private:
    std::vector<ChannelDecl> channels_;
};

/// Iterate over every point of a product of integer ranges.
template <typename F>
void for_each_point(const std::vector<IntRange>& ranges, F&& f)
{
    std::vector<int> point;
    point.reserve(ranges.size());
    for (const auto& r : ranges) {
        if (r.size() <= 0) return;
        point.push_back(r.lo);
    }
    while (true) {
        f(const_cast<const std::vector<int>&>(point));
        std::size_t i = ranges.size();
        while (i > 0) {
            --i;
            if (point[i] < ranges[i].hi) {
                ++point[i];
                break;
            }
            point[i] = ranges[i].lo;
            if (i == 0) return;
        }
        if (ranges.empty()) return;
    }
}

inline std::size_t hash_combine(std::size_t seed, std::size_t v)
{
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace tockcheck

template <>
struct std::hash<tockcheck::EventLabel> {
    std::size_t operator()(const tockcheck::EventLabel& e) const noexcept { return e.hash(); }
};
