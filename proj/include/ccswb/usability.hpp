// Client usability: is there any server that satisfies a client?
#pragma once

#include "ccswb/lts.hpp"

#include <map>
#include <optional>

namespace ccswb {

enum class Mode { Exact, Bounded };
std::string mode_name(Mode m);

// Default recursion depth when the region that has not yet succeeded
// contains a visible cycle.
inline constexpr int kDefaultBound = 8;

class UsabilityAnalyzer {
public:
    // bound forces Bounded mode; without it the mode is Exact when the part
    // of the LTS that cannot report success is free of visible cycles.
    explicit UsabilityAnalyzer(LtsPtr lts, std::optional<int> bound = std::nullopt);

    Mode mode() const { return bound_ ? Mode::Bounded : Mode::Exact; }
    const Lts& lts() const { return *lts_; }

    // Some server satisfies every client state of xs at once (the internal
    // sum of xs). The empty set is trivially usable.
    bool usable_set(const StateSet& xs);
    bool usable_state(StateId s) { return lts_->can_ok(s) || usable_set({s}); }
    // A server satisfying the internal sum of xs; requires usable_set(xs).
    Term witness(const StateSet& xs);

private:
    bool usable_closed(const StateSet& c, int budget);
    Term witness_closed(const StateSet& c, int budget);
    bool action_usable(const StateSet& c, ActionId a, int budget);

    LtsPtr lts_;
    std::optional<int> bound_;
    std::map<std::pair<StateSet, int>, bool> memo_;
};

struct UsabilityReport {
    bool usable;
    Mode mode;
    std::optional<Term> witness;  // present when usable
};

UsabilityReport usable(const Term& r, const Env& env, std::optional<int> bound = std::nullopt);

}  // namespace ccswb
