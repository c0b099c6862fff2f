#include "ccswb/preorders.hpp"
#include "ccswb/oracle.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace ccswb {

std::string kind_name(Kind k) {
    switch (k) {
        case Kind::Svr: return "svr";
        case Kind::Clt: return "clt";
        case Kind::P2p: return "p2p";
    }
    return "?";
}

std::optional<Kind> parse_kind(const std::string& s) {
    if (s == "svr" || s == "server") return Kind::Svr;
    if (s == "clt" || s == "client") return Kind::Clt;
    if (s == "p2p" || s == "peer") return Kind::P2p;
    return std::nullopt;
}

std::string clause_name(ClauseKind k) {
    switch (k) {
        case ClauseKind::UsabilityFlow: return "UsabilityFlow";
        case ClauseKind::Convergence: return "Convergence";
        case ClauseKind::AcceptanceMatch: return "AcceptanceMatch";
        case ClauseKind::UnsuccessfulTrace: return "UnsuccessfulTrace";
        case ClauseKind::TraceFlow: return "TraceFlow";
    }
    return "?";
}

namespace {

std::string trace_str(const std::vector<ActionId>& s) {
    if (s.empty()) return "eps";
    std::string out;
    for (auto a : s) {
        if (!out.empty()) out += ".";
        out += action_of(a).str();
    }
    return out;
}

std::string set_str(const std::vector<ActionId>& xs) {
    std::string out = "{";
    for (const auto& a : to_actions(xs)) {
        if (out.size() > 1) out += ",";
        out += a.str();
    }
    return out + "}";
}

}  // namespace

std::string describe(const FailingClause& c) {
    std::string out = clause_name(c.kind) + "(" + trace_str(c.trace);
    if (c.kind == ClauseKind::AcceptanceMatch) out += ", B=" + set_str(c.ready);
    return out + ") in " + c.relation;
}

// ---------------------------------------------------------------- profiles

Profile::Profile(LtsPtr lts, std::optional<int> bound)
    : lts_(std::move(lts)), limit_(bound), usability_(lts_, bound) {
    if (!limit_ && !lts_->visible_acyclic()) limit_ = kDefaultBound;
    const Lts& l = *lts_;
    make_node({}, l.tau_closure({l.root()}), l.u_closure({l.root()}), nullptr);
}

int Profile::make_node(std::vector<ActionId> trace, StateSet after, StateSet uafter, const Node* parent) {
    Node n;
    n.trace = std::move(trace);
    n.conv_here = std::none_of(after.begin(), after.end(), [&](StateId s) { return lts_->diverges(s); });
    if (parent) {
        n.usable_here = uafter.empty() || usability_.usable_set(uafter);
    } else {
        n.usable_here = usability_.usable_state(lts_->root());
    }
    n.conv = n.conv_here && (!parent || parent->conv);
    n.usbut = n.usable_here && (!parent || parent->usbut);
    n.acc = ready_family(*lts_, after);
    n.acc_ut = ready_family(*lts_, uafter);
    n.after = std::move(after);
    n.uafter = std::move(uafter);
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size() - 1);
}

void Profile::expand(int i) {
    if (nodes_[static_cast<std::size_t>(i)].expanded) return;
    std::vector<ActionId> acts;
    {
        const Node& n = nodes_[static_cast<std::size_t>(i)];
        for (auto s : n.after)
            for (const auto& e : lts_->edges(s))
                if (e.kind == Label::Kind::Visible) acts.push_back(e.action);
    }
    std::sort(acts.begin(), acts.end(), [](ActionId a, ActionId b) { return action_of(a) < action_of(b); });
    acts.erase(std::unique(acts.begin(), acts.end()), acts.end());
    std::vector<std::pair<ActionId, int>> kids;
    std::vector<ActionId> excluded;
    for (auto a : acts) {
        const Node& n = nodes_[static_cast<std::size_t>(i)];
        StateSet after = lts_->after(n.after, a);
        if (after.empty()) continue;
        StateSet uafter = lts_->u_after(n.uafter, a);
        auto trace = n.trace;
        trace.push_back(a);
        int k = make_node(std::move(trace), std::move(after), std::move(uafter), &n);
        const Node& child = nodes_[static_cast<std::size_t>(k)];
        const Node& parent = nodes_[static_cast<std::size_t>(i)];
        if (!child.uafter.empty() && !(parent.usbut && child.usable_here)) excluded.push_back(a);
        kids.emplace_back(a, k);
    }
    std::sort(excluded.begin(), excluded.end());
    Node& n = nodes_[static_cast<std::size_t>(i)];
    n.children = std::move(kids);
    n.excluded = std::move(excluded);
    n.expanded = true;
}

int Profile::child(int i, ActionId a) {
    const Node& n = node(i);
    for (const auto& [b, k] : n.children)
        if (b == a) return k;
    return -1;
}

int Profile::find(const std::vector<ActionId>& trace) {
    int cur = 0;
    for (auto a : trace) {
        cur = child(cur, a);
        if (cur < 0) return -1;
    }
    return cur;
}

ProfilePtr make_profile(const Term& t, const Env& env, std::optional<int> bound,
                        std::optional<std::size_t> state_cap) {
    return std::make_shared<Profile>(build_lts(t, env, state_cap), bound);
}

// ---------------------------------------------------------------- decision

namespace {

// Position of one process in the joint exploration of two trace trees. A
// missing node means the trace cannot be performed; the cumulative
// predicates are then inherited from the last node on the way.
struct Cursor {
    Profile* prof;
    int node;
    bool conv;
    bool usbut;

    bool has() const { return node >= 0; }
    const Profile::Node* get() const { return node >= 0 ? &prof->node(node) : nullptr; }
    bool has_uafter() const { return node >= 0 && !prof->node(node).uafter.empty(); }
    const Family& acc() const {
        static const Family none;
        return node >= 0 ? prof->node(node).acc : none;
    }
    const Family& acc_ut() const {
        static const Family none;
        return node >= 0 ? prof->node(node).acc_ut : none;
    }
    const std::vector<ActionId>& excluded() const {
        static const std::vector<ActionId> none;
        return node >= 0 ? prof->node(node).excluded : none;
    }

    Cursor step(ActionId a) const {
        if (node < 0) return *this;
        int k = prof->child(node, a);
        if (k < 0) return {prof, -1, conv, usbut};
        const auto& n = prof->node(k);
        return {prof, k, n.conv, n.usbut};
    }

    static Cursor root(Profile& p) {
        const auto& n = p.node(0);
        return {&p, 0, n.conv, n.usbut};
    }
};

bool subset(const std::vector<ActionId>& a, const std::vector<ActionId>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::vector<ActionId> minus(const std::vector<ActionId>& a, const std::vector<ActionId>& b) {
    std::vector<ActionId> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// Some A in accL with A minus excluded inside B.
bool matched(const Family& accL, const std::vector<ActionId>& excluded, const std::vector<ActionId>& b) {
    for (const auto& a : accL)
        if (subset(minus(a, excluded), b)) return true;
    return false;
}

enum class Step { Stop, Continue };
using Check = std::function<Step(const Cursor&, const Cursor&, const std::vector<ActionId>&,
                                 std::optional<FailingClause>&)>;

std::optional<int> joint_limit(const Profile& a, const Profile& b) {
    if (a.limit() && b.limit()) return std::min(*a.limit(), *b.limit());
    return a.limit() ? a.limit() : b.limit();
}

std::optional<FailingClause> walk(Profile& l, Profile& r, const Check& check) {
    std::optional<int> limit = joint_limit(l, r);
    struct Item {
        Cursor l, r;
        std::vector<ActionId> trace;
    };
    std::deque<Item> queue{{Cursor::root(l), Cursor::root(r), {}}};
    while (!queue.empty()) {
        Item it = std::move(queue.front());
        queue.pop_front();
        std::optional<FailingClause> fail;
        if (check(it.l, it.r, it.trace, fail) == Step::Stop) {
            if (fail) return fail;
            continue;
        }
        if (limit && static_cast<int>(it.trace.size()) >= *limit) continue;
        std::vector<ActionId> acts;
        for (const Cursor* c : {&it.l, &it.r})
            if (c->has())
                for (const auto& [a, k] : c->get()->children) acts.push_back(a);
        std::sort(acts.begin(), acts.end(), [](ActionId a, ActionId b) { return action_of(a) < action_of(b); });
        acts.erase(std::unique(acts.begin(), acts.end()), acts.end());
        for (auto a : acts) {
            Cursor cl = it.l.step(a), cr = it.r.step(a);
            if (!cl.has() && !cr.has()) continue;
            auto trace = it.trace;
            trace.push_back(a);
            queue.push_back({cl, cr, std::move(trace)});
        }
    }
    return std::nullopt;
}

FailingClause clause(ClauseKind k, const char* rel, const std::vector<ActionId>& s, const Cursor& l,
                     std::vector<ActionId> b = {}) {
    return {k, rel, s, std::move(b), l.excluded()};
}

std::optional<FailingClause> check_svr(Profile& p, Profile& q) {
    return walk(p, q, [](const Cursor& l, const Cursor& r, const std::vector<ActionId>& s,
                         std::optional<FailingClause>& fail) {
        if (!l.conv) return Step::Stop;
        if (!r.conv) {
            fail = clause(ClauseKind::Convergence, "svr", s, l);
            return Step::Stop;
        }
        if (r.has() && !l.has()) {
            fail = clause(ClauseKind::TraceFlow, "svr", s, l);
            return Step::Stop;
        }
        for (const auto& b : r.acc())
            if (!matched(l.acc(), {}, b)) {
                fail = clause(ClauseKind::AcceptanceMatch, "svr", s, l, b);
                return Step::Stop;
            }
        return Step::Continue;
    });
}

std::optional<FailingClause> check_clt(Profile& p, Profile& q) {
    return walk(p, q, [](const Cursor& l, const Cursor& r, const std::vector<ActionId>& s,
                         std::optional<FailingClause>& fail) {
        if (!l.usbut) return Step::Stop;
        if (!r.usbut) {
            fail = clause(ClauseKind::UsabilityFlow, "clt", s, l);
            return Step::Stop;
        }
        if (r.has_uafter() && !l.has_uafter()) {
            fail = clause(ClauseKind::UnsuccessfulTrace, "clt", s, l);
            return Step::Stop;
        }
        for (const auto& b : r.acc_ut())
            if (!matched(l.acc_ut(), l.excluded(), b)) {
                fail = clause(ClauseKind::AcceptanceMatch, "clt", s, l, b);
                return Step::Stop;
            }
        return Step::Continue;
    });
}

std::optional<FailingClause> check_usmpo(Profile& p, Profile& q) {
    return walk(p, q, [](const Cursor& l, const Cursor& r, const std::vector<ActionId>& s,
                         std::optional<FailingClause>& fail) {
        if (!(l.conv && l.usbut)) return Step::Stop;
        if (!r.conv) {
            fail = clause(ClauseKind::Convergence, "usmpo", s, l);
            return Step::Stop;
        }
        if (r.has() && !l.has()) {
            fail = clause(ClauseKind::TraceFlow, "usmpo", s, l);
            return Step::Stop;
        }
        for (const auto& b : r.acc())
            if (!matched(l.acc(), l.excluded(), b)) {
                fail = clause(ClauseKind::AcceptanceMatch, "usmpo", s, l, b);
                return Step::Stop;
            }
        return Step::Continue;
    });
}

}  // namespace

std::optional<FailingClause> first_failure(Kind k, Profile& p, Profile& q) {
    switch (k) {
        case Kind::Svr: return check_svr(p, q);
        case Kind::Clt: return check_clt(p, q);
        case Kind::P2p:
            if (auto f = check_clt(p, q)) return f;
            return check_usmpo(p, q);
    }
    return std::nullopt;
}

std::optional<FailingClause> first_failure_sbad(Profile& r1, Profile& r2, bool relaxed) {
    const char* rel = relaxed ? "sbad'" : "sbad";
    return walk(r1, r2, [&](const Cursor& l, const Cursor& r, const std::vector<ActionId>& s,
                            std::optional<FailingClause>& fail) {
        if (!l.conv) return Step::Stop;
        if (!r.conv) {
            fail = clause(ClauseKind::Convergence, rel, s, l);
            return Step::Stop;
        }
        static const std::vector<ActionId> none;
        for (const auto& b : r.acc_ut())
            if (!matched(l.acc_ut(), relaxed ? l.excluded() : none, b)) {
                fail = clause(ClauseKind::AcceptanceMatch, rel, s, l, b);
                return Step::Stop;
            }
        return Step::Continue;
    });
}

// ---------------------------------------------------------------- witnesses

namespace {

Term one_plus(Term t) { return Term::sum({Term::unit(), std::move(t)}); }

Term co_prefix(ActionId a, Term body) { return Term::act(action_of(a).complement(), std::move(body)); }

// Some action of a outside b and outside the excluded set.
std::optional<ActionId> escape(const std::vector<ActionId>& a, const std::vector<ActionId>& b,
                               const std::vector<ActionId>& excluded) {
    for (auto x : minus(minus(a, excluded), b)) return x;
    return std::nullopt;
}

// Client distinguishing two servers.
std::optional<Term> design_svr(Profile& p, const FailingClause& c) {
    const auto& s = c.trace;
    std::size_t n = s.size();
    Term cur;
    switch (c.kind) {
        case ClauseKind::Convergence: cur = Term::tau(Term::unit()); break;
        case ClauseKind::TraceFlow: cur = Term::nil(); break;
        case ClauseKind::AcceptanceMatch: {
            int node = p.find(s);
            if (node < 0) return std::nullopt;
            std::vector<Term> parts;
            for (const auto& a : p.node(node).acc) {
                auto x = escape(a, c.ready, {});
                if (!x) return std::nullopt;
                parts.push_back(co_prefix(*x, Term::unit()));
            }
            cur = Term::sum(std::move(parts));
            break;
        }
        default: return std::nullopt;
    }
    for (std::size_t k = n; k-- > 0;) {
        int node = p.find(std::vector<ActionId>(s.begin(), s.begin() + static_cast<long>(k)));
        if (node < 0) return std::nullopt;
        const auto& nd = p.node(node);
        bool escape_needed = false;
        for (auto st : nd.after)
            if (p.lts().stable(st) && !std::binary_search(p.lts().ready(st).begin(), p.lts().ready(st).end(), s[k]))
                escape_needed = true;
        Term next = co_prefix(s[k], cur);
        cur = escape_needed ? Term::sum({Term::tau(Term::unit()), next}) : next;
    }
    return cur;
}

// Witness server of a set of client states, 0 when the set is empty.
Term server_for(Profile& r, const StateSet& xs) {
    if (xs.empty()) return Term::nil();
    return r.usability().witness(xs);
}

// Server distinguishing two clients.
std::optional<Term> design_clt(Profile& r1, Profile& r2, const FailingClause& c) {
    const auto& s = c.trace;
    std::size_t n = s.size();
    auto level = [&](Profile& pr, std::size_t k) -> StateSet {
        int node = pr.find(std::vector<ActionId>(s.begin(), s.begin() + static_cast<long>(k)));
        return node < 0 ? StateSet{} : pr.node(node).uafter;
    };
    std::optional<Term> cur;
    std::size_t top = n;
    for (std::size_t k = 0; k <= n && !cur; ++k) {
        StateSet x1 = level(r1, k), x2 = level(r2, k);
        if (x1.empty() && !x2.empty()) {
            cur = Term::div();
        } else if (!x2.empty() && !r2.usability().usable_set(x2)) {
            if (!x1.empty() && !r1.usability().usable_set(x1)) return std::nullopt;
            cur = server_for(r1, x1);
        }
        if (cur) top = k;
    }
    if (!cur) {
        if (c.kind != ClauseKind::AcceptanceMatch) return std::nullopt;
        int node = r1.find(s);
        if (node < 0) return std::nullopt;
        const auto& nd = r1.node(node);
        StateSet closed = r1.lts().u_closure(nd.uafter);
        std::vector<ActionId> offered;
        for (const auto& a : nd.acc_ut) {
            auto x = escape(a, c.ready, nd.excluded);
            if (!x) return std::nullopt;
            offered.push_back(*x);
        }
        std::sort(offered.begin(), offered.end());
        offered.erase(std::unique(offered.begin(), offered.end()), offered.end());
        std::vector<Term> parts;
        for (auto a : offered) {
            StateSet d = r1.lts().u_closure(r1.lts().u_step(closed, a));
            if (!d.empty() && !r1.usability().usable_set(d)) return std::nullopt;
            parts.push_back(co_prefix(a, server_for(r1, d)));
        }
        cur = Term::sum(std::move(parts));
        top = n;
    }
    for (std::size_t j = top; j-- > 0;) {
        StateSet x1 = level(r1, j);
        if (!x1.empty() && !r1.usability().usable_set(x1)) return std::nullopt;
        cur = Term::sum({server_for(r1, x1), co_prefix(s[j], *cur)});
    }
    return cur;
}

// Peer distinguishing two peers when the peer-specific clauses fail.
std::optional<Term> design_usmpo(Profile& p, const FailingClause& c) {
    const auto& s = c.trace;
    std::size_t n = s.size();
    auto rest = [&](std::size_t k) -> std::optional<Term> {
        int node = p.find(std::vector<ActionId>(s.begin(), s.begin() + static_cast<long>(k)));
        StateSet x = node < 0 ? StateSet{} : p.node(node).uafter;
        if (!x.empty() && !p.usability().usable_set(x)) return std::nullopt;
        return server_for(p, x);
    };
    Term cur;
    if (c.kind == ClauseKind::Convergence) {
        auto r = rest(n);
        if (!r) return std::nullopt;
        cur = Term::tau(one_plus(*r));
    } else if (c.kind == ClauseKind::AcceptanceMatch || c.kind == ClauseKind::TraceFlow) {
        int node = p.find(s);
        std::vector<Term> parts;
        if (node >= 0 && c.kind == ClauseKind::AcceptanceMatch) {
            const auto& nd = p.node(node);
            std::vector<ActionId> offered;
            for (const auto& a : nd.acc) {
                auto x = escape(a, c.ready, nd.excluded);
                if (!x) return std::nullopt;
                offered.push_back(*x);
            }
            std::sort(offered.begin(), offered.end());
            offered.erase(std::unique(offered.begin(), offered.end()), offered.end());
            for (auto a : offered) {
                auto trace = s;
                trace.push_back(a);
                int k = p.find(trace);
                StateSet x = k < 0 ? StateSet{} : p.node(k).uafter;
                if (x.empty()) {
                    parts.push_back(co_prefix(a, Term::unit()));
                } else {
                    if (!p.usability().usable_set(x)) return std::nullopt;
                    parts.push_back(co_prefix(a, one_plus(server_for(p, x))));
                }
            }
        }
        cur = Term::sum(std::move(parts));
    } else {
        return std::nullopt;
    }
    for (std::size_t k = n; k-- > 0;) {
        auto r = rest(k);
        if (!r) return std::nullopt;
        cur = Term::sum({Term::tau(one_plus(*r)), co_prefix(s[k], cur)});
    }
    return cur;
}

}  // namespace

std::optional<Term> design_witness(Kind k, Profile& p, Profile& q, const FailingClause& c) {
    switch (k) {
        case Kind::Svr: return design_svr(p, c);
        case Kind::Clt: return design_clt(p, q, c);
        case Kind::P2p:
            if (c.relation == "clt") {
                auto w = design_clt(p, q, c);
                if (!w) return std::nullopt;
                return one_plus(*w);
            }
            return design_usmpo(p, c);
    }
    return std::nullopt;
}

bool passes(Kind k, const Lts& p, const Lts& t) {
    switch (k) {
        case Kind::Svr: return must(p, t).holds;
        case Kind::Clt: return must(t, p).holds;
        case Kind::P2p: return must_sc(p, t).holds;
    }
    return false;
}

bool distinguishes(Kind k, const Lts& p, const Lts& q, const Term& t, const Env& env) {
    auto tl = build_lts(t, env);
    return passes(k, p, *tl) && !passes(k, q, *tl);
}

RefinementVerdict leq(Kind k, Profile& p, Profile& q, const Env& env, const LeqOptions& opt) {
    RefinementVerdict v{k, true, Mode::Exact, std::nullopt, std::nullopt};
    if (p.mode() == Mode::Bounded || q.mode() == Mode::Bounded || p.usability().mode() == Mode::Bounded ||
        q.usability().mode() == Mode::Bounded)
        v.mode = Mode::Bounded;
    v.clause = first_failure(k, p, q);
    v.holds = !v.clause;
    if (v.holds || !opt.synthesize) return v;
    std::optional<Term> w = design_witness(k, p, q, *v.clause);
    if (w && distinguishes(k, p.lts(), q.lts(), *w, env)) {
        v.witness = w;
        v.witness_status = WitnessStatus::Verified;
        return v;
    }
    EnumSpec spec;
    std::vector<Term> mine{p.lts().term(0), q.lts().term(0)};
    std::set<Action> acts;
    for (const auto& t : mine)
        for (const auto& a : actions_of(t, env)) acts.insert(a.complement());
    spec.guards = std::vector<Action>(acts.begin(), acts.end());
    spec.max_depth = opt.search_depth;
    spec.allow_div = true;
    if (auto found = search_distinguishing(k, p.lts(), q.lts(), enumerate_terms(spec), env)) {
        v.witness = found;
        v.witness_status = WitnessStatus::Verified;
        v.witness_from_search = true;
        return v;
    }
    v.witness_status = WitnessStatus::Gap;
    return v;
}

RefinementVerdict leq(Kind k, const Term& p, const Term& q, const Env& env, const LeqOptions& opt) {
    auto pp = make_profile(p, env, opt.bound, opt.state_cap);
    auto qp = make_profile(q, env, opt.bound, opt.state_cap);
    return leq(k, *pp, *qp, env, opt);
}

RefinementVerdict leq_svr(const Term& p, const Term& q, const Env& env, const LeqOptions& opt) {
    return leq(Kind::Svr, p, q, env, opt);
}
RefinementVerdict leq_clt(const Term& p, const Term& q, const Env& env, const LeqOptions& opt) {
    return leq(Kind::Clt, p, q, env, opt);
}
RefinementVerdict leq_p2p(const Term& p, const Term& q, const Env& env, const LeqOptions& opt) {
    return leq(Kind::P2p, p, q, env, opt);
}

std::pair<Term, Term> plus_context(const Term& p, const Term& q, const Env& env) {
    Action f = fresh_action({p, q}, env);
    Term guard = Term::act(f, Term::unit());
    return {Term::sum({guard, p}), Term::sum({guard, q})};
}

RefinementVerdict leq_plus(Kind k, const Term& p, const Term& q, const Env& env, const LeqOptions& opt) {
    auto [pl, ql] = plus_context(p, q, env);
    return leq(k, pl, ql, env, opt);
}

bool diag_sbad(const Term& r1, const Term& r2, const Env& env, std::optional<int> bound) {
    auto a = make_profile(r1, env, bound), b = make_profile(r2, env, bound);
    return !first_failure_sbad(*a, *b, false);
}

bool diag_sbad_prime(const Term& r1, const Term& r2, const Env& env, std::optional<int> bound) {
    auto a = make_profile(r1, env, bound), b = make_profile(r2, env, bound);
    return !first_failure_sbad(*a, *b, true);
}

std::vector<Action> uaut(const Term& r, const std::vector<Action>& trace, const std::vector<Action>& alphabet,
                         const Env& env) {
    auto prof = make_profile(r, env);
    int node = prof->find(to_ids(trace));
    std::vector<ActionId> excluded = node < 0 ? std::vector<ActionId>{} : prof->node(node).excluded;
    std::vector<Action> out;
    for (const auto& a : alphabet)
        if (!std::binary_search(excluded.begin(), excluded.end(), intern(a))) out.push_back(a);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace ccswb
