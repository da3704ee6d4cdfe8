#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "tockcheck/event.hpp"
#include "tockcheck/term.hpp"

namespace tockcheck {

class LinkageError : public std::runtime_error {
public:
    explicit LinkageError(const std::string& missing)
        : std::runtime_error("undefined process '" + missing + "'"), missing_(missing)
    {
    }
    const std::string& missing() const { return missing_; }

private:
    std::string missing_;
};

/// Where a compiled state-machine configuration sits, for trace replay.
struct ConfigInfo {
    std::string machine;
    std::string location;
    std::string valuation;
};

struct Definition {
    TermPtr body;
    std::optional<ConfigInfo> config;
};

/// Named process definitions plus the alphabet they range over. Filled in
/// while compiling; treated as read-only once exploration starts.
class Environment {
public:
    void define(const std::string& name, TermPtr body, std::optional<ConfigInfo> info = std::nullopt);
    bool defined(const std::string& name) const { return definitions_.count(name) != 0; }
    /// Throws LinkageError for unknown names.
    const Definition& lookup(const std::string& name) const;
    const Definition* find(const std::string& name) const;
    std::size_t size() const { return definitions_.size(); }

    Alphabet& alphabet() { return alphabet_; }
    const Alphabet& alphabet() const { return alphabet_; }

    /// Throws LinkageError naming the first reference without a definition,
    /// searching `t` and every definition reachable from it.
    void check_linked(const TermPtr& t) const;

private:
    std::unordered_map<std::string, Definition> definitions_;
    Alphabet alphabet_;
};

struct Step {
    EventLabel label;
    TermPtr target;

    friend bool operator==(const Step& a, const Step& b)
    {
        return a.label == b.label && structurally_equal(a.target, b.target);
    }
};

/// Per-exploration caches for event-set enumeration. Not shared between
/// threads; the Environment it points at is.
class StepContext {
public:
    explicit StepContext(const Environment& env) : env_(&env) {}

    const Environment& env() const { return *env_; }
    const std::vector<EventLabel>& enumerate(const std::shared_ptr<const EventSet>& set);

private:
    const Environment* env_;
    std::unordered_map<const EventSet*, std::pair<std::shared_ptr<const EventSet>, std::vector<EventLabel>>> cache_;
};

/// Untimed-priority transitions of `t`: each (label, successor) pair once,
/// sorted by label then successor.
std::vector<Step> step(const TermPtr& t, StepContext& ctx);
std::vector<Step> step(const TermPtr& t, const Environment& env);

/// Removes tock from a step set when tau or tick is also enabled.
void prioritise_tock(std::vector<Step>& steps);

}  // namespace tockcheck
