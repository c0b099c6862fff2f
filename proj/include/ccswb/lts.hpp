// Labelled transition systems generated by terms.
#pragma once

#include "ccswb/syntax.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ccswb {

class StateCapExceeded : public Error {
public:
    explicit StateCapExceeded(std::size_t cap);
    std::size_t cap() const { return cap_; }

private:
    std::size_t cap_;
};

// Actions are interned process wide. Id 2k is a plain name, 2k+1 its
// complement, so complementation is xor 1.
using ActionId = int;
ActionId intern(const Action& a);
const Action& action_of(ActionId id);
inline ActionId co_id(ActionId id) { return id ^ 1; }
std::vector<Action> to_actions(const std::vector<ActionId>& ids);  // sorted by Action

using StateId = int;
using StateSet = std::vector<StateId>;  // sorted, unique

struct Edge {
    Label::Kind kind;
    ActionId action = -1;  // Visible only
    StateId target;
};

std::vector<std::pair<Term, Label>> transitions(const Term& t, const Env& env);

class Lts {
public:
    StateId root() const { return 0; }
    std::size_t size() const { return states_.size(); }
    const Term& term(StateId s) const { return states_[s]; }
    const std::vector<Edge>& edges(StateId s) const { return edges_[s]; }
    bool can_ok(StateId s) const { return ok_[s]; }
    bool stable(StateId s) const { return stable_[s]; }
    // Ready set: visible actions enabled in s, sorted by id.
    const std::vector<ActionId>& ready(StateId s) const { return ready_[s]; }
    bool diverges(StateId s) const { return diverges_[s]; }
    // s is not ok and can reach a tau cycle through states that are not ok.
    bool diverges_unsuccessfully(StateId s) const { return udiverges_[s]; }
    bool visible_acyclic() const { return visible_acyclic_; }
    bool nonok_visible_acyclic() const { return nonok_visible_acyclic_; }
    // Actions labelling some edge, sorted by Action.
    const std::vector<ActionId>& alphabet() const { return alphabet_; }
    std::size_t edge_count() const;

    StateSet tau_closure(const StateSet& xs) const;
    StateSet step(const StateSet& xs, ActionId a) const;
    StateSet after(const StateSet& xs, ActionId a) const { return tau_closure(step(tau_closure(xs), a)); }
    // Same as above but every state visited, endpoints included, is not ok.
    StateSet u_closure(const StateSet& xs) const;
    StateSet u_step(const StateSet& xs, ActionId a) const;
    StateSet u_after(const StateSet& xs, ActionId a) const { return u_closure(u_step(u_closure(xs), a)); }

    StateSet weak_after(const std::vector<ActionId>& trace) const;
    StateSet unsuccessful_after(const std::vector<ActionId>& trace) const;

    void write_dot(std::ostream& os) const;

private:
    friend std::shared_ptr<const Lts> build_lts(const Term&, const Env&, std::optional<std::size_t>);
    void analyse();

    std::vector<Term> states_;
    std::vector<std::vector<Edge>> edges_;
    std::vector<bool> ok_, stable_, diverges_, udiverges_;
    std::vector<std::vector<ActionId>> ready_;
    std::vector<ActionId> alphabet_;
    bool visible_acyclic_ = true;
    bool nonok_visible_acyclic_ = true;
};

using LtsPtr = std::shared_ptr<const Lts>;

// Cap from CCSWB_STATE_CAP, else 100000.
std::size_t default_state_cap();
LtsPtr build_lts(const Term& t, const Env& env, std::optional<std::size_t> cap = std::nullopt);

bool converges(const Term& t, const Env& env);
bool converges_along(const Lts& l, const std::vector<ActionId>& trace);

// Ready sets of the stable states of a state set, each sorted, family sorted and unique.
using Family = std::vector<std::vector<ActionId>>;
Family ready_family(const Lts& l, const StateSet& xs);
Family acc(const Lts& l, const std::vector<ActionId>& trace);
Family acc_ut(const Lts& l, const std::vector<ActionId>& trace);

std::vector<ActionId> to_ids(const std::vector<Action>& trace);

}  // namespace ccswb
