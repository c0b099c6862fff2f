#include "ccswb/lts.hpp"
#include "graph.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <functional>
#include <mutex>
#include <unordered_map>

namespace ccswb {

StateCapExceeded::StateCapExceeded(std::size_t cap)
    : Error("state cap of " + std::to_string(cap) + " exceeded"), cap_(cap) {}

namespace {

struct ActionTable {
    std::mutex mu;
    std::map<std::string, int> index;
    std::deque<Action> actions;
};

ActionTable& table() {
    static ActionTable t;
    return t;
}

}  // namespace

ActionId intern(const Action& a) {
    auto& t = table();
    std::lock_guard lock(t.mu);
    auto [it, fresh] = t.index.emplace(a.name, static_cast<int>(t.index.size()));
    if (fresh) {
        t.actions.push_back(Action{a.name, false});
        t.actions.push_back(Action{a.name, true});
    }
    return 2 * it->second + (a.co ? 1 : 0);
}

const Action& action_of(ActionId id) {
    auto& t = table();
    std::lock_guard lock(t.mu);
    return t.actions.at(static_cast<std::size_t>(id));
}

std::vector<Action> to_actions(const std::vector<ActionId>& ids) {
    std::vector<Action> out;
    for (auto id : ids) out.push_back(action_of(id));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<ActionId> to_ids(const std::vector<Action>& trace) {
    std::vector<ActionId> out;
    for (const auto& a : trace) out.push_back(intern(a));
    return out;
}

std::vector<std::pair<Term, Label>> transitions(const Term& t, const Env& env) {
    std::vector<std::pair<Term, Label>> out;
    std::function<void(const Term&)> go = [&](const Term& u) {
        switch (u.kind()) {
            case TermKind::Nil: break;
            case TermKind::Unit: out.emplace_back(Term::nil(), Label::ok()); break;
            case TermKind::Div: out.emplace_back(Term::div(), Label::tau()); break;
            case TermKind::Prefix:
                out.emplace_back(u.body(), u.guard() ? Label::visible(*u.guard()) : Label::tau());
                break;
            case TermKind::Sum:
                for (const auto& s : u.summands()) go(s);
                break;
            case TermKind::Const: go(env.body(u.name())); break;
        }
    };
    go(t);
    return out;
}

std::size_t default_state_cap() {
    if (const char* v = std::getenv("CCSWB_STATE_CAP")) {
        char* end = nullptr;
        unsigned long long n = std::strtoull(v, &end, 10);
        if (end && *end == '\0' && n > 0) return static_cast<std::size_t>(n);
    }
    return 100000;
}

LtsPtr build_lts(const Term& t, const Env& env, std::optional<std::size_t> cap) {
    std::size_t limit = cap ? *cap : default_state_cap();
    auto l = std::make_shared<Lts>();
    std::unordered_map<Term, StateId, TermHash> ids;
    auto id_of = [&](const Term& u) {
        auto [it, fresh] = ids.emplace(u, static_cast<StateId>(l->states_.size()));
        if (fresh) {
            if (l->states_.size() >= limit) throw StateCapExceeded(limit);
            l->states_.push_back(u);
            l->edges_.emplace_back();
        }
        return it->second;
    };
    id_of(t);
    for (std::size_t i = 0; i < l->states_.size(); ++i) {
        Term cur = l->states_[i];
        std::vector<Edge> es;
        for (auto& [target, label] : transitions(cur, env)) {
            Edge e{label.kind, label.is_visible() ? intern(label.action) : -1, id_of(target)};
            es.push_back(e);
        }
        std::sort(es.begin(), es.end(), [](const Edge& a, const Edge& b) {
            return std::tie(a.kind, a.action, a.target) < std::tie(b.kind, b.action, b.target);
        });
        es.erase(std::unique(es.begin(), es.end(),
                             [](const Edge& a, const Edge& b) {
                                 return a.kind == b.kind && a.action == b.action && a.target == b.target;
                             }),
                 es.end());
        l->edges_[i] = std::move(es);
    }
    l->analyse();
    return l;
}

namespace {

// States that can reach a marked state along allowed edges.
std::vector<bool> backward_reach(std::size_t n, const std::vector<bool>& marked,
                                 const std::function<void(StateId, std::vector<StateId>&)>& succ) {
    std::vector<std::vector<StateId>> pred(n);
    std::vector<StateId> tmp;
    for (std::size_t s = 0; s < n; ++s) {
        tmp.clear();
        succ(static_cast<StateId>(s), tmp);
        for (auto t : tmp) pred[t].push_back(static_cast<StateId>(s));
    }
    std::vector<bool> out = marked;
    std::vector<StateId> work;
    for (std::size_t s = 0; s < n; ++s)
        if (marked[s]) work.push_back(static_cast<StateId>(s));
    while (!work.empty()) {
        StateId s = work.back();
        work.pop_back();
        for (auto p : pred[s])
            if (!out[p]) {
                out[p] = true;
                work.push_back(p);
            }
    }
    return out;
}

}  // namespace

void Lts::analyse() {
    std::size_t n = states_.size();
    ok_.assign(n, false);
    stable_.assign(n, true);
    ready_.assign(n, {});
    std::vector<ActionId> alpha;
    for (std::size_t s = 0; s < n; ++s) {
        for (const auto& e : edges_[s]) {
            if (e.kind == Label::Kind::Ok) ok_[s] = true;
            if (e.kind == Label::Kind::Tau) stable_[s] = false;
            if (e.kind == Label::Kind::Visible) {
                ready_[s].push_back(e.action);
                alpha.push_back(e.action);
            }
        }
        std::sort(ready_[s].begin(), ready_[s].end());
        ready_[s].erase(std::unique(ready_[s].begin(), ready_[s].end()), ready_[s].end());
    }
    std::sort(alpha.begin(), alpha.end());
    alpha.erase(std::unique(alpha.begin(), alpha.end()), alpha.end());
    std::sort(alpha.begin(), alpha.end(),
              [](ActionId a, ActionId b) { return action_of(a) < action_of(b); });
    alphabet_ = alpha;

    auto tau_succ = [&](StateId s, std::vector<StateId>& out) {
        for (const auto& e : edges_[s])
            if (e.kind == Label::Kind::Tau) out.push_back(e.target);
    };
    auto utau_succ = [&](StateId s, std::vector<StateId>& out) {
        if (ok_[s]) return;
        for (const auto& e : edges_[s])
            if (e.kind == Label::Kind::Tau && !ok_[e.target]) out.push_back(e.target);
    };
    diverges_ = backward_reach(n, detail::tarjan(n, tau_succ).cyclic, tau_succ);
    udiverges_ = backward_reach(n, detail::tarjan(n, utau_succ).cyclic, utau_succ);

    // A visible cycle exists iff some visible edge stays inside one strongly
    // connected component.
    auto all_succ = [&](StateId s, std::vector<StateId>& out) {
        for (const auto& e : edges_[s])
            if (e.kind != Label::Kind::Ok) out.push_back(e.target);
    };
    auto nonok_succ = [&](StateId s, std::vector<StateId>& out) {
        if (ok_[s]) return;
        for (const auto& e : edges_[s])
            if (e.kind != Label::Kind::Ok && !ok_[e.target]) out.push_back(e.target);
    };
    auto visible_cycle = [&](const std::function<void(StateId, std::vector<StateId>&)>& succ,
                             bool nonok_only) {
        detail::Scc c = detail::tarjan(n, succ);
        for (std::size_t s = 0; s < n; ++s) {
            if (nonok_only && ok_[s]) continue;
            for (const auto& e : edges_[s]) {
                if (e.kind != Label::Kind::Visible) continue;
                if (nonok_only && ok_[e.target]) continue;
                if (c.comp[s] == c.comp[e.target]) return true;
            }
        }
        return false;
    };
    visible_acyclic_ = !visible_cycle(all_succ, false);
    nonok_visible_acyclic_ = !visible_cycle(nonok_succ, true);
}

std::size_t Lts::edge_count() const {
    std::size_t n = 0;
    for (const auto& es : edges_) n += es.size();
    return n;
}

StateSet Lts::tau_closure(const StateSet& xs) const {
    std::vector<bool> seen(size(), false);
    std::vector<StateId> work;
    for (auto x : xs)
        if (!seen[x]) {
            seen[x] = true;
            work.push_back(x);
        }
    StateSet out;
    while (!work.empty()) {
        StateId s = work.back();
        work.pop_back();
        out.push_back(s);
        for (const auto& e : edges_[s])
            if (e.kind == Label::Kind::Tau && !seen[e.target]) {
                seen[e.target] = true;
                work.push_back(e.target);
            }
    }
    std::sort(out.begin(), out.end());
    return out;
}

StateSet Lts::step(const StateSet& xs, ActionId a) const {
    StateSet out;
    for (auto s : xs)
        for (const auto& e : edges_[s])
            if (e.kind == Label::Kind::Visible && e.action == a) out.push_back(e.target);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

StateSet Lts::u_closure(const StateSet& xs) const {
    std::vector<bool> seen(size(), false);
    std::vector<StateId> work;
    for (auto x : xs)
        if (!ok_[x] && !seen[x]) {
            seen[x] = true;
            work.push_back(x);
        }
    StateSet out;
    while (!work.empty()) {
        StateId s = work.back();
        work.pop_back();
        out.push_back(s);
        for (const auto& e : edges_[s])
            if (e.kind == Label::Kind::Tau && !ok_[e.target] && !seen[e.target]) {
                seen[e.target] = true;
                work.push_back(e.target);
            }
    }
    std::sort(out.begin(), out.end());
    return out;
}

StateSet Lts::u_step(const StateSet& xs, ActionId a) const {
    StateSet out;
    for (auto s : xs) {
        if (ok_[s]) continue;
        for (const auto& e : edges_[s])
            if (e.kind == Label::Kind::Visible && e.action == a && !ok_[e.target]) out.push_back(e.target);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

StateSet Lts::weak_after(const std::vector<ActionId>& trace) const {
    StateSet cur = tau_closure({root()});
    for (auto a : trace) cur = after(cur, a);
    return cur;
}

StateSet Lts::unsuccessful_after(const std::vector<ActionId>& trace) const {
    StateSet cur = u_closure({root()});
    for (auto a : trace) cur = u_after(cur, a);
    return cur;
}

void Lts::write_dot(std::ostream& os) const {
    auto esc = [](const std::string& s) {
        std::string o;
        for (char c : s) {
            if (c == '"' || c == '\\') o += '\\';
            o += c;
        }
        return o;
    };
    os << "digraph lts {\n  rankdir=LR;\n";
    for (std::size_t s = 0; s < size(); ++s) {
        os << "  s" << s << " [label=\"" << esc(pretty(states_[s])) << "\""
           << (ok_[s] ? ", shape=doublecircle" : ", shape=circle") << "];\n";
    }
    for (std::size_t s = 0; s < size(); ++s)
        for (const auto& e : edges_[s]) {
            std::string lbl = e.kind == Label::Kind::Tau  ? "tau"
                              : e.kind == Label::Kind::Ok ? "ok"
                                                          : action_of(e.action).str();
            os << "  s" << s << " -> s" << e.target << " [label=\"" << esc(lbl) << "\"];\n";
        }
    os << "}\n";
}

bool converges(const Term& t, const Env& env) { return !build_lts(t, env)->diverges(0); }

bool converges_along(const Lts& l, const std::vector<ActionId>& trace) {
    StateSet cur = l.tau_closure({l.root()});
    for (std::size_t k = 0;; ++k) {
        for (auto s : cur)
            if (l.diverges(s)) return false;
        if (k == trace.size()) return true;
        cur = l.after(cur, trace[k]);
    }
}

Family ready_family(const Lts& l, const StateSet& xs) {
    Family f;
    for (auto s : xs)
        if (l.stable(s)) f.push_back(l.ready(s));
    std::sort(f.begin(), f.end());
    f.erase(std::unique(f.begin(), f.end()), f.end());
    return f;
}

Family acc(const Lts& l, const std::vector<ActionId>& trace) { return ready_family(l, l.weak_after(trace)); }

Family acc_ut(const Lts& l, const std::vector<ActionId>& trace) {
    return ready_family(l, l.unsuccessful_after(trace));
}

}  // namespace ccswb
