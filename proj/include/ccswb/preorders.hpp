// Behavioural characterisations of the server, client and peer preorders.
#pragma once

#include "ccswb/testing.hpp"
#include "ccswb/usability.hpp"

#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ccswb {

enum class Kind { Svr, Clt, P2p };
std::string kind_name(Kind k);
std::optional<Kind> parse_kind(const std::string& s);

// The trace tree of one process: one node per trace s with a nonempty
// weak derivative set, carrying everything the preorders look at.
class Profile {
public:
    struct Node {
        std::vector<ActionId> trace;
        StateSet after;   // p after s
        StateSet uafter;  // p after s without passing a success state
        bool conv;        // p converges along s
        bool conv_here;   // every state of `after` converges
        bool usable_here; // uafter is empty or usable
        bool usbut;       // usable along the unsuccessful trace s
        Family acc, acc_ut;
        // Actions a with nonempty unsuccessful set after sa that is not
        // usable along sa: the complement of the usable actions after s.
        std::vector<ActionId> excluded;
        std::vector<std::pair<ActionId, int>> children;  // sorted by Action
        bool expanded = false;
    };

    explicit Profile(LtsPtr lts, std::optional<int> bound = std::nullopt);

    Mode mode() const { return limit_ ? Mode::Bounded : Mode::Exact; }
    std::optional<int> limit() const { return limit_; }
    const Lts& lts() const { return *lts_; }
    const LtsPtr& lts_ptr() const { return lts_; }
    UsabilityAnalyzer& usability() { return usability_; }

    const Node& node(int i) { expand(i); return nodes_[static_cast<std::size_t>(i)]; }
    int child(int i, ActionId a);
    // Node of a trace, or -1 when the trace cannot be performed.
    int find(const std::vector<ActionId>& trace);
    std::size_t size() const { return nodes_.size(); }

private:
    int make_node(std::vector<ActionId> trace, StateSet after, StateSet uafter, const Node* parent);
    void expand(int i);

    LtsPtr lts_;
    std::optional<int> limit_;
    UsabilityAnalyzer usability_;
    std::deque<Node> nodes_;
};

using ProfilePtr = std::shared_ptr<Profile>;
ProfilePtr make_profile(const Term& t, const Env& env, std::optional<int> bound = std::nullopt,
                        std::optional<std::size_t> state_cap = std::nullopt);

enum class ClauseKind { UsabilityFlow, Convergence, AcceptanceMatch, UnsuccessfulTrace, TraceFlow };
std::string clause_name(ClauseKind k);

struct FailingClause {
    ClauseKind kind;
    std::string relation;             // "svr", "clt", "usmpo", "sbad", "sbad'"
    std::vector<ActionId> trace;
    std::vector<ActionId> ready;      // the unmatched B, AcceptanceMatch only
    std::vector<ActionId> excluded;   // actions outside uaut at the trace
};

std::string describe(const FailingClause& c);

enum class WitnessStatus { None, Verified, Gap };

struct RefinementVerdict {
    Kind kind;
    bool holds;
    Mode mode;
    std::optional<FailingClause> clause;
    std::optional<Term> witness;
    WitnessStatus witness_status = WitnessStatus::None;
    bool witness_from_search = false;
};

struct LeqOptions {
    std::optional<int> bound;
    bool synthesize = true;
    // Depth of the enumerative fallback when the designed witness does not verify.
    int search_depth = 2;
    std::optional<std::size_t> state_cap;
};

// Decision on prebuilt profiles; the witness fields are left empty.
std::optional<FailingClause> first_failure(Kind k, Profile& p, Profile& q);
std::optional<FailingClause> first_failure_sbad(Profile& r1, Profile& r2, bool relaxed);

// Designed distinguishing test for a failed comparison, unverified.
std::optional<Term> design_witness(Kind k, Profile& p, Profile& q, const FailingClause& c);
// Test(kind, p, t): the subject p passes the test t.
bool passes(Kind k, const Lts& p, const Lts& t);
bool distinguishes(Kind k, const Lts& p, const Lts& q, const Term& t, const Env& env);

RefinementVerdict leq(Kind k, Profile& p, Profile& q, const Env& env, const LeqOptions& opt = {});
RefinementVerdict leq(Kind k, const Term& p, const Term& q, const Env& env, const LeqOptions& opt = {});
RefinementVerdict leq_svr(const Term& p, const Term& q, const Env& env, const LeqOptions& opt = {});
RefinementVerdict leq_clt(const Term& p, const Term& q, const Env& env, const LeqOptions& opt = {});
RefinementVerdict leq_p2p(const Term& p, const Term& q, const Env& env, const LeqOptions& opt = {});
// The preorder closed under sums: compares f.1 + p with f.1 + q for a fresh f.
RefinementVerdict leq_plus(Kind k, const Term& p, const Term& q, const Env& env, const LeqOptions& opt = {});
std::pair<Term, Term> plus_context(const Term& p, const Term& q, const Env& env);

bool diag_sbad(const Term& r1, const Term& r2, const Env& env, std::optional<int> bound = std::nullopt);
bool diag_sbad_prime(const Term& r1, const Term& r2, const Env& env, std::optional<int> bound = std::nullopt);

// Usable actions of r after s, restricted to the given alphabet.
std::vector<Action> uaut(const Term& r, const std::vector<Action>& trace, const std::vector<Action>& alphabet,
                         const Env& env);

}  // namespace ccswb
