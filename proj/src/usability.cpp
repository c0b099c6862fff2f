#include "ccswb/usability.hpp"

namespace ccswb {

std::string mode_name(Mode m) { return m == Mode::Exact ? "exact" : "bounded"; }

UsabilityAnalyzer::UsabilityAnalyzer(LtsPtr lts, std::optional<int> bound)
    : lts_(std::move(lts)), bound_(bound) {
    if (!bound_ && !lts_->nonok_visible_acyclic()) bound_ = kDefaultBound;
}

bool UsabilityAnalyzer::usable_set(const StateSet& xs) {
    return usable_closed(lts_->u_closure(xs), bound_ ? *bound_ : -1);
}

bool UsabilityAnalyzer::action_usable(const StateSet& c, ActionId a, int budget) {
    StateSet d = lts_->u_closure(lts_->u_step(c, a));
    if (d.empty()) return true;
    if (budget == 0) return false;
    return usable_closed(d, budget < 0 ? budget : budget - 1);
}

bool UsabilityAnalyzer::usable_closed(const StateSet& c, int budget) {
    if (c.empty()) return true;
    auto key = std::make_pair(c, budget);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool ok = true;
    for (auto s : c)
        if (lts_->diverges_unsuccessfully(s)) ok = false;
    std::map<ActionId, bool> verdicts;
    for (auto s : c) {
        if (!ok) break;
        if (!lts_->stable(s)) continue;
        bool some = false;
        for (auto a : lts_->ready(s)) {
            auto it = verdicts.find(a);
            if (it == verdicts.end()) it = verdicts.emplace(a, action_usable(c, a, budget)).first;
            if (it->second) {
                some = true;
                break;
            }
        }
        if (!some) ok = false;
    }
    memo_[key] = ok;
    return ok;
}

Term UsabilityAnalyzer::witness(const StateSet& xs) {
    StateSet c = lts_->u_closure(xs);
    int budget = bound_ ? *bound_ : -1;
    if (!usable_closed(c, budget)) throw Error("witness requested for an unusable client");
    return witness_closed(c, budget);
}

Term UsabilityAnalyzer::witness_closed(const StateSet& c, int budget) {
    if (c.empty()) return Term::nil();
    // Offer the complement of every usable action some stable state needs.
    std::vector<ActionId> needed;
    for (auto s : c)
        if (lts_->stable(s))
            needed.insert(needed.end(), lts_->ready(s).begin(), lts_->ready(s).end());
    std::sort(needed.begin(), needed.end());
    needed.erase(std::unique(needed.begin(), needed.end()), needed.end());
    std::vector<Term> parts;
    for (auto a : needed) {
        if (!action_usable(c, a, budget)) continue;
        StateSet d = lts_->u_closure(lts_->u_step(c, a));
        Term cont = d.empty() ? Term::nil() : witness_closed(d, budget < 0 ? budget : budget - 1);
        parts.push_back(Term::act(action_of(a).complement(), cont));
    }
    return Term::sum(std::move(parts));
}

UsabilityReport usable(const Term& r, const Env& env, std::optional<int> bound) {
    UsabilityAnalyzer an(build_lts(r, env), bound);
    StateId root = an.lts().root();
    if (an.usable_state(root)) {
        Term w = an.lts().can_ok(root) ? Term::nil() : an.witness({root});
        return {true, an.mode(), w};
    }
    return {false, an.mode(), std::nullopt};
}

}  // namespace ccswb
