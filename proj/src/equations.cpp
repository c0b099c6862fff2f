#include "ccswb/equations.hpp"

#include "ccswb/oracle.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

namespace ccswb {

std::string theory_name(Theory t) {
    switch (t) {
        case Theory::Std: return "std";
        case Theory::Svr: return "svr";
        case Theory::Clt: return "clt";
        case Theory::P2p: return "p2p";
        case Theory::Derived: return "derived";
    }
    return "?";
}

std::optional<Theory> parse_theory(const std::string& s) {
    for (auto t : {Theory::Std, Theory::Svr, Theory::Clt, Theory::P2p, Theory::Derived})
        if (theory_name(t) == s) return t;
    return std::nullopt;
}

// ------------------------------------------------------------------ axioms

namespace {

void collect_vars(const Term& t, std::map<std::string, SortTag>& vars, bool& mu) {
    switch (t.kind()) {
        case TermKind::Const:
            vars[t.name()] = t.name().back() == 't' ? SortTag::NoOk : SortTag::Any;
            break;
        case TermKind::Prefix:
            if (t.guard() && t.guard()->name == "mu") mu = true;
            collect_vars(t.body(), vars, mu);
            break;
        case TermKind::Sum:
            for (const auto& s : t.summands()) collect_vars(s, vars, mu);
            break;
        default: break;
    }
}

AxiomSchema make_schema(const std::string& name, const std::string& lhs, const std::string& rhs, Direction d,
                        std::vector<Kind> kinds, std::vector<std::string> strict = {}) {
    static const Env pattern_env = [] {
        Env e;
        for (const char* v : {"X", "Y", "Z", "X1", "X2", "X3", "Xt", "Yt"}) e.define(v, Term::constant(v), true);
        return e;
    }();
    AxiomSchema s{name, parse_term(lhs, pattern_env), parse_term(rhs, pattern_env), d, std::move(kinds), {}, false,
                  std::move(strict)};
    collect_vars(s.lhs, s.vars, s.uses_mu);
    collect_vars(s.rhs, s.vars, s.uses_mu);
    return s;
}

// sum_{i<=n} tau.<prefix>X_i<suffix>
std::string tau_sum(int n, const std::string& prefix, const std::string& suffix) {
    std::string out;
    for (int i = 1; i <= n; ++i) {
        if (i > 1) out += " + ";
        out += "tau.(" + prefix + "X" + std::to_string(i) + suffix + ")";
    }
    return out;
}

std::vector<AxiomSchema> build_schemas() {
    const std::vector<Kind> all{Kind::Svr, Kind::Clt, Kind::P2p};
    const std::vector<Kind> cp{Kind::Clt, Kind::P2p};
    const auto Eq = Direction::Eq;
    const auto Leq = Direction::Leq;
    std::vector<AxiomSchema> v;
    v.push_back(make_schema("S1a", "mu.Xt + mu.Y", "mu.(tau.Xt + tau.Y)", Eq, all));
    v.push_back(make_schema("S1b", "tau.X", "tau.tau.X", Leq, all));
    v.push_back(make_schema("S2", "Xt + tau.Y", "tau.(Xt + Y) + tau.Y", Eq, all, {"Y"}));
    v.push_back(make_schema("S3", "mu.X + tau.(mu.Y + Z)", "tau.(mu.X + mu.Y + Z)", Eq, all, {"Z"}));
    v.push_back(make_schema("S4", "tau.X + tau.Y", "X", Leq, all));
    v.push_back(make_schema("S5", "div", "X", Leq, all));
    v.push_back(make_schema("SVR1", "1", "0", Eq, {Kind::Svr}));
    v.push_back(make_schema("Za", "tau.0", "div", Leq, cp));
    v.push_back(make_schema("Zb", "mu.0", "0", Leq, cp));
    v.push_back(make_schema("CLT1a", "X", "1", Leq, {Kind::Clt}));
    v.push_back(make_schema("CLT1b", "1", "X + 1", Leq, {Kind::Clt}));
    v.push_back(make_schema("CLT1c", "0", "mu.1", Leq, {Kind::Clt}));
    v.push_back(make_schema("P2P1", "0", "1", Leq, {Kind::P2p}));
    v.push_back(make_schema("P2P2", "mu.(1 + X)", "1 + mu.X", Leq, {Kind::P2p}));
    v.push_back(make_schema("P2P3", "mu.(1 + X) + mu.(1 + Y)", "mu.(1 + tau.X + tau.Y)", Leq, {Kind::P2p}));
    for (int n = 1; n <= 3; ++n)
        v.push_back(make_schema("D1", tau_sum(n, "", ""), "tau.(" + tau_sum(n, "", "") + ")", Eq, all));
    v.push_back(make_schema("D2", "Xt + tau.(Xt + Y)", "tau.(Xt + Y)", Eq, all, {"Y"}));
    v.push_back(make_schema("D3", "mu.X + div", "div", Eq, all));
    v.push_back(make_schema("D4a", "tau.Xt + tau.Y", "tau.Xt + tau.Y + tau.(Xt + Y)", Eq, all));
    v.push_back(make_schema("D5a", "tau.X + tau.(X + Yt + Z)", "tau.X + tau.(X + Yt) + tau.(X + Yt + Z)", Eq, all,
                            {"Z"}));
    v.push_back(make_schema("DZ1", "mu.0", "mu.X", Leq, cp));
    v.push_back(make_schema("DP1", "1 + mu.X", "1 + mu.(X + 1)", Eq, cp));
    for (int n = 1; n <= 3; ++n)
        v.push_back(make_schema("DP2", "tau.(1 + " + tau_sum(n, "", "") + ")", tau_sum(n, "1 + ", ""), Eq, cp));
    v.push_back(make_schema("DP3", "mu.X", "mu.(1 + tau.X)", Leq, cp));
    v.push_back(make_schema("D4b", "tau.(Xt + 1) + tau.(Yt + 1)",
                            "tau.(Xt + 1) + tau.(Yt + 1) + tau.(Xt + Yt + 1)", Eq, cp));
    v.push_back(make_schema("D5b", "tau.X + tau.(X + (Yt + 1) + Z)",
                            "tau.X + tau.(X + (Yt + 1)) + tau.(X + (Yt + 1) + Z)", Eq, cp));
    return v;
}

bool in_theory(const std::string& name, Theory t) {
    static const std::set<std::string> std_names{"S1a", "S1b", "S2", "S3", "S4", "S5"};
    static const std::set<std::string> clt_extra{"Za", "Zb", "CLT1a", "CLT1b", "CLT1c"};
    static const std::set<std::string> p2p_extra{"Za", "Zb", "P2P1", "P2P2", "P2P3"};
    switch (t) {
        case Theory::Std: return std_names.count(name) != 0;
        case Theory::Svr: return std_names.count(name) != 0 || name == "SVR1";
        case Theory::Clt: return std_names.count(name) != 0 || clt_extra.count(name) != 0;
        case Theory::P2p: return std_names.count(name) != 0 || p2p_extra.count(name) != 0;
        case Theory::Derived: return name[0] == 'D';
    }
    return false;
}

Term substitute(const Term& t, const Substitution& sub) {
    switch (t.kind()) {
        case TermKind::Const: return sub.vars.at(t.name());
        case TermKind::Prefix: {
            Term body = substitute(t.body(), sub);
            if (t.guard() && t.guard()->name == "mu") return Term::prefix(sub.mu, body);
            return Term::prefix(t.guard(), body);
        }
        case TermKind::Sum: {
            std::vector<Term> parts;
            for (const auto& s : t.summands()) parts.push_back(substitute(s, sub));
            return Term::sum(std::move(parts));
        }
        default: return t;
    }
}

}  // namespace

const std::vector<AxiomSchema>& axiom_schemas() {
    static const std::vector<AxiomSchema> all = build_schemas();
    return all;
}

std::vector<AxiomSchema> schemas_of(Theory t) {
    std::vector<AxiomSchema> out;
    for (const auto& s : axiom_schemas()) {
        if (!in_theory(s.name, t)) continue;
        AxiomSchema c = s;
        Kind only = t == Theory::Svr ? Kind::Svr : t == Theory::Clt ? Kind::Clt : Kind::P2p;
        if (t == Theory::Svr || t == Theory::Clt || t == Theory::P2p) c.kinds = {only};
        out.push_back(std::move(c));
    }
    return out;
}

const AxiomSchema& schema(const std::string& name) {
    for (const auto& s : axiom_schemas())
        if (s.name == name) return s;
    throw Error("unknown axiom " + name);
}

SortTag sort_of(const AxiomSchema& s, const std::string& v, Sorts sorts) {
    if (sorts == Sorts::Strict && std::count(s.strict.begin(), s.strict.end(), v)) return SortTag::NoOk;
    return s.vars.at(v);
}

std::optional<AxiomInstance> instantiate(const AxiomSchema& s, const Substitution& sub, Sorts sorts) {
    for (const auto& [v, tag] : s.vars) {
        auto it = sub.vars.find(v);
        if (it == sub.vars.end()) throw Error("axiom " + s.name + ": variable " + v + " unbound");
        if (sort_of(s, v, sorts) == SortTag::NoOk && can_ok(it->second, Env{})) return std::nullopt;
    }
    return AxiomInstance{s.name, substitute(s.lhs, sub), substitute(s.rhs, sub), s.direction, s.kinds};
}

std::vector<AxiomInstance> instantiate_axioms(Theory t, const std::vector<std::string>& alphabet, int depth,
                                              std::size_t samples, std::uint64_t seed, Sorts sorts) {
    EnumSpec spec;
    spec.alphabet = alphabet;
    spec.allow_div = true;
    std::vector<Term> pool;
    for (int d = 0; d <= depth; ++d) {
        spec.max_depth = d;
        auto part = d <= 1 ? enumerate_terms(spec) : sample_terms(spec, 150, seed + static_cast<std::uint64_t>(d));
        pool.insert(pool.end(), part.begin(), part.end());
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    std::vector<Term> nook;
    for (const auto& p : pool)
        if (!can_ok(p, Env{})) nook.push_back(p);

    std::vector<std::optional<Action>> mus{std::nullopt};
    for (const auto& a : alphabet) {
        mus.push_back(Action{a, false});
        mus.push_back(Action{a, true});
    }

    std::mt19937_64 rng(seed);
    std::vector<AxiomInstance> out;
    for (const auto& s : schemas_of(t)) {
        std::set<std::pair<Term, Term>> seen;
        std::size_t made = 0;
        for (std::size_t attempt = 0; made < samples && attempt < samples * 20; ++attempt) {
            Substitution sub;
            for (const auto& [v, tag] : s.vars) {
                const auto& from = sort_of(s, v, sorts) == SortTag::NoOk ? nook : pool;
                sub.vars[v] = from[rng() % from.size()];
            }
            sub.mu = mus[rng() % mus.size()];
            auto inst = instantiate(s, sub, sorts);
            if (!inst || !seen.insert({inst->lhs, inst->rhs}).second) continue;
            out.push_back(std::move(*inst));
            ++made;
        }
    }
    return out;
}

InstanceVerdict check_instance(const AxiomInstance& inst, const Env& env) {
    LeqOptions quick;
    quick.synthesize = false;
    for (auto k : inst.kinds) {
        for (bool reverse : {false, true}) {
            if (reverse && inst.direction == Direction::Leq) continue;
            const Term& l = reverse ? inst.rhs : inst.lhs;
            const Term& r = reverse ? inst.lhs : inst.rhs;
            if (leq_plus(k, l, r, env, quick).holds) continue;
            auto full = leq_plus(k, l, r, env);
            return {false, k, reverse, full.witness};
        }
    }
    return {true, std::nullopt, false, std::nullopt};
}

// --------------------------------------------------------- saturated families

bool LabelSet::contains(const LabelSet& o) const {
    if (o.ok && !ok) return false;
    return std::includes(acts.begin(), acts.end(), o.acts.begin(), o.acts.end());
}

LabelSet LabelSet::merged(const LabelSet& o) const {
    LabelSet r;
    std::set_union(acts.begin(), acts.end(), o.acts.begin(), o.acts.end(), std::back_inserter(r.acts));
    r.ok = ok || o.ok;
    return r;
}

std::string LabelSet::str() const {
    std::string out = "{";
    bool first = true;
    for (const auto& a : acts) {
        out += (first ? "" : ",") + a.str();
        first = false;
    }
    if (ok) out += first ? "ok" : ",ok";
    return out + "}";
}

SaturatedFamily saturate(std::vector<LabelSet> family) {
    std::sort(family.begin(), family.end());
    family.erase(std::unique(family.begin(), family.end()), family.end());
    if (family.empty()) return family;
    // Z is added when X <= Z <= Y for members X, Y of the union closure,
    // except that Z may drop success only if Y does not report it.
    LabelSet top, top_plain;
    for (const auto& m : family) {
        top = top.merged(m);
        if (!m.ok) top_plain = top_plain.merged(m);
    }
    std::set<LabelSet> out;
    auto span = [&](const LabelSet& x, const LabelSet& upper, bool with_ok) {
        std::vector<Action> free;
        std::set_difference(upper.acts.begin(), upper.acts.end(), x.acts.begin(), x.acts.end(),
                            std::back_inserter(free));
        if (free.size() > 24) throw Error("saturation of a family over too many labels");
        for (std::uint32_t mask = 0; mask < (1u << free.size()); ++mask) {
            LabelSet z = x;
            z.ok = with_ok;
            for (std::size_t i = 0; i < free.size(); ++i)
                if (mask & (1u << i)) z.acts.push_back(free[i]);
            std::sort(z.acts.begin(), z.acts.end());
            out.insert(std::move(z));
        }
    };
    for (const auto& x : family) {
        if (top.ok) span(x, top, true);
        if (!x.ok) span(x, top_plain, false);
    }
    return {out.begin(), out.end()};
}

std::vector<LabelSet> saturation_gaps(const std::vector<LabelSet>& family) {
    std::set<LabelSet> have(family.begin(), family.end());
    std::vector<LabelSet> out;
    for (const auto& z : saturate(family))
        if (!have.count(z)) out.push_back(z);
    return out;
}

// ------------------------------------------------------------ normal forms

Pnf Pnf::tau_inf(bool unit) {
    Pnf n;
    n.kind = Kind::TauInf;
    n.unit = unit;
    return n;
}

Pnf Pnf::nil() { return Pnf{}; }

Pnf Pnf::one() {
    Pnf n;
    n.unit = true;
    return n;
}

namespace {

using PK = Pnf::Kind;

Pnf plus(const Pnf& n, const Pnf& m);

Pnf stripped(Pnf n) {
    n.unit = false;
    return n;
}

// 1 + n, propagating success one level down as the normal form demands.
Pnf add_unit(Pnf n) {
    n.unit = true;
    for (auto& [a, c] : n.children) c = add_unit(std::move(c));
    if (n.kind == PK::TauSum) {
        for (auto& m : n.family) m.ok = true;
        std::sort(n.family.begin(), n.family.end());
        n.family.erase(std::unique(n.family.begin(), n.family.end()), n.family.end());
    }
    return n;
}

Pnf tau_prefix(const Pnf& n) {
    switch (n.kind) {
        case PK::TauInf:
            if (n.unit) throw NoNormalForm("tau.(1 + div) has no divergence-free representative");
            return n;
        case PK::PrefixSum: {
            Pnf r;
            r.kind = PK::TauSum;
            LabelSet m;
            for (const auto& [a, c] : n.children) m.acts.push_back(a);
            m.ok = n.unit;
            r.family = {m};
            r.children = n.children;
            return r;
        }
        case PK::TauSum: {
            // With a 1 summand every member already holds success, so
            // tau.(1 + sum tau.x) = sum tau.(1 + x) reduces to dropping it.
            return stripped(n);
        }
    }
    return n;
}

// A derivative r with mu.n + mu.m = mu.r.
Pnf unify(const Pnf& n, const Pnf& m) {
    if (n == m) return n;
    if (n.unit && m.unit) return add_unit(plus(tau_prefix(stripped(n)), tau_prefix(stripped(m))));
    return plus(tau_prefix(n), tau_prefix(m));
}

// Merges the derivatives of `from` into `into`. Unifying two different
// derivatives of a label c moves each into the other's branch, which is only
// sound when no branch offering c reports success, or a 1 summand follows.
void merge_children(std::map<Action, Pnf>& into, const std::map<Action, Pnf>& from,
                    const std::vector<LabelSet>& branches, bool guarded) {
    for (const auto& [a, c] : from) {
        auto it = into.find(a);
        if (it == into.end()) {
            into.emplace(a, c);
            continue;
        }
        if (it->second == c) continue;
        if (!guarded)
            for (const auto& m : branches)
                if (m.ok && std::binary_search(m.acts.begin(), m.acts.end(), a))
                    throw NoNormalForm("different " + a.str() + "-derivatives beside a branch that reports success");
        it->second = unify(it->second, c);
    }
}

// Both arguments lack a 1 summand and neither is divergent. `guarded` is set
// when the sum will receive a 1 summand.
Pnf plus_core(const Pnf& n, const Pnf& m, bool guarded) {
    if (n.kind == PK::PrefixSum && m.kind == PK::PrefixSum) {
        Pnf r = n;
        merge_children(r.children, m.children, {}, guarded);
        return r;
    }
    if (n.kind == PK::TauSum && m.kind == PK::TauSum) {
        Pnf r = n;
        std::vector<LabelSet> fam = n.family;
        fam.insert(fam.end(), m.family.begin(), m.family.end());
        merge_children(r.children, m.children, fam, guarded);
        r.family = saturate(std::move(fam));
        return r;
    }
    const Pnf& p = n.kind == PK::PrefixSum ? n : m;
    const Pnf& t = n.kind == PK::PrefixSum ? m : n;
    if (p.children.empty()) return t;
    // p + sum tau.n_B = tau.(p + n_B1) + sum tau.n_B. Without a 1 summand
    // around, n_B1 must not report success.
    auto b1 = std::find_if(t.family.begin(), t.family.end(), [&](const LabelSet& m) { return guarded || !m.ok; });
    if (b1 == t.family.end())
        throw NoNormalForm("prefixes beside an internal choice whose every branch reports success");
    Pnf r = t;
    LabelSet joined = *b1;
    for (const auto& [a, c] : p.children) joined.acts.push_back(a);
    std::sort(joined.acts.begin(), joined.acts.end());
    joined.acts.erase(std::unique(joined.acts.begin(), joined.acts.end()), joined.acts.end());
    std::vector<LabelSet> fam = t.family;
    fam.push_back(std::move(joined));
    merge_children(r.children, p.children, fam, guarded);
    r.family = saturate(std::move(fam));
    return r;
}

Pnf plus(const Pnf& n, const Pnf& m) {
    if (n.kind == PK::TauInf || m.kind == PK::TauInf) return Pnf::tau_inf(n.unit || m.unit);
    bool u = n.unit || m.unit;
    Pnf r = plus_core(stripped(n), stripped(m), u);
    return u ? add_unit(std::move(r)) : r;
}

Pnf nf(const Term& t);

// tau.(sum_{a in A} a.x_a [+ 1]) with distinct actions is already a single
// member; reading it off directly keeps the leaves as written.
std::optional<Pnf> member_of(const Term& body) {
    Pnf r;
    r.kind = PK::TauSum;
    LabelSet m;
    for (const auto& s : summands_of(body)) {
        if (s.kind() == TermKind::Unit) {
            m.ok = true;
        } else if (s.kind() == TermKind::Prefix && s.guard()) {
            if (r.children.count(*s.guard())) return std::nullopt;
            r.children.emplace(*s.guard(), nf(s.body()));
            m.acts.push_back(*s.guard());
        } else {
            return std::nullopt;
        }
    }
    std::sort(m.acts.begin(), m.acts.end());
    r.family = {m};
    return r;
}

Pnf nf(const Term& t) {
    switch (t.kind()) {
        case TermKind::Nil: return Pnf::nil();
        case TermKind::Unit: return Pnf::one();
        case TermKind::Div: return Pnf::tau_inf();
        case TermKind::Const: throw NotCCSf(pretty(t));
        case TermKind::Prefix: {
            if (t.guard()) {
                Pnf r;
                r.children.emplace(*t.guard(), nf(t.body()));
                return r;
            }
            if (auto m = member_of(t.body())) return *m;
            return tau_prefix(nf(t.body()));
        }
        case TermKind::Sum: {
            Pnf acc;
            for (const auto& s : t.summands()) acc = plus(acc, nf(s));
            return acc;
        }
    }
    return Pnf::nil();
}

Term erase_units(const Term& t) {
    switch (t.kind()) {
        case TermKind::Unit: return Term::nil();
        case TermKind::Prefix: return Term::prefix(t.guard(), erase_units(t.body()));
        case TermKind::Sum: {
            std::vector<Term> parts;
            for (const auto& s : t.summands()) parts.push_back(erase_units(s));
            return Term::sum(std::move(parts));
        }
        default: return t;
    }
}

// x + 1 = 1 everywhere.
Term absorb_units(const Term& t) {
    switch (t.kind()) {
        case TermKind::Prefix: return Term::prefix(t.guard(), absorb_units(t.body()));
        case TermKind::Sum: {
            std::vector<Term> parts;
            for (const auto& s : t.summands()) {
                if (s.kind() == TermKind::Unit) return Term::unit();
                parts.push_back(absorb_units(s));
            }
            return Term::sum(std::move(parts));
        }
        default: return t;
    }
}

Cnf to_cnf(const Pnf& n) {
    Cnf r;
    if (n.unit) {
        r.kind = Cnf::Kind::Unit;
        return r;
    }
    switch (n.kind) {
        case PK::TauInf: r.kind = Cnf::Kind::TauInf; break;
        case PK::PrefixSum:
            r.kind = Cnf::Kind::PrefixSum;
            for (const auto& [a, c] : n.children) r.children.emplace(a, to_cnf(c));
            break;
        case PK::TauSum: {
            std::set<Action> used;
            for (const auto& m : n.family) {
                if (m.ok) {
                    r.tau_unit = true;
                    continue;
                }
                r.family.push_back(m);
                used.insert(m.acts.begin(), m.acts.end());
            }
            if (r.family.empty()) {
                r = Cnf{};
                r.kind = Cnf::Kind::TauUnit;
                break;
            }
            r.kind = Cnf::Kind::TauSum;
            for (const auto& a : used) r.children.emplace(a, to_cnf(n.children.at(a)));
            break;
        }
    }
    return r;
}

void require_ccsf(const Term& t) {
    if (!is_ccsf(t)) throw NotCCSf(pretty(t));
}

std::string path_str(const std::vector<std::string>& path) {
    if (path.empty()) return "root";
    std::string out;
    for (const auto& p : path) out += (out.empty() ? "" : "/") + p;
    return out;
}

void check_family(const SaturatedFamily& fam, const std::vector<std::string>& path, NfReport& rep) {
    auto at = path_str(path);
    if (fam.empty()) rep.violations.push_back(at + ": empty family");
    if (!std::is_sorted(fam.begin(), fam.end()) || std::adjacent_find(fam.begin(), fam.end()) != fam.end())
        rep.violations.push_back(at + ": family not in canonical order");
    for (const auto& m : fam)
        if (!std::is_sorted(m.acts.begin(), m.acts.end()) ||
            std::adjacent_find(m.acts.begin(), m.acts.end()) != m.acts.end())
            rep.violations.push_back(at + ": member " + m.str() + " not in canonical order");
    for (const auto& g : saturation_gaps(fam)) rep.violations.push_back(at + ": unsaturated, missing " + g.str());
}

template <class N>
void check_leaves(const N& n, const std::vector<std::string>& path, NfReport& rep) {
    std::set<Action> labels;
    for (const auto& m : n.family) labels.insert(m.acts.begin(), m.acts.end());
    for (const auto& a : labels)
        if (!n.children.count(a)) rep.violations.push_back(path_str(path) + ": no leaf for " + a.str());
    for (const auto& [a, c] : n.children)
        if (!labels.count(a)) rep.violations.push_back(path_str(path) + ": leaf " + a.str() + " in no member");
}

void check_pnf_at(const Pnf& n, std::vector<std::string>& path, NfReport& rep) {
    if (n.kind == PK::TauInf) {
        if (!n.children.empty() || !n.family.empty()) rep.violations.push_back(path_str(path) + ": divergent node with structure");
        return;
    }
    if (n.kind == PK::TauSum) check_family(n.family, path, rep), check_leaves(n, path, rep);
    else if (!n.family.empty()) rep.violations.push_back(path_str(path) + ": prefix sum with a family");
    for (const auto& [a, c] : n.children) {
        if (n.unit && !c.unit)
            rep.violations.push_back(path_str(path) + ": reports success but " + a.str() + "-derivative does not");
        path.push_back(a.str());
        check_pnf_at(c, path, rep);
        path.pop_back();
    }
}

void check_cnf_at(const Cnf& n, std::vector<std::string>& path, NfReport& rep) {
    using CK = Cnf::Kind;
    if (n.kind != CK::PrefixSum && n.kind != CK::TauSum) {
        if (!n.children.empty() || !n.family.empty() || n.tau_unit)
            rep.violations.push_back(path_str(path) + ": constant node with structure");
        return;
    }
    if (n.kind == CK::TauSum) {
        check_family(n.family, path, rep);
        check_leaves(n, path, rep);
        for (const auto& m : n.family)
            if (m.ok) rep.violations.push_back(path_str(path) + ": member " + m.str() + " holds success");
    } else if (!n.family.empty() || n.tau_unit) {
        rep.violations.push_back(path_str(path) + ": prefix sum with a family");
    }
    for (const auto& [a, c] : n.children) {
        path.push_back(a.str());
        check_cnf_at(c, path, rep);
        path.pop_back();
    }
}

}  // namespace

Pnf normalize_pnf(const Term& t) {
    require_ccsf(t);
    return nf(t);
}

Pnf normalize_snf(const Term& t) {
    require_ccsf(t);
    return nf(erase_units(t));
}

Cnf normalize_cnf(const Term& t) {
    require_ccsf(t);
    return to_cnf(nf(absorb_units(t)));
}

Term to_term(const Pnf& n) {
    std::vector<Term> parts;
    if (n.unit) parts.push_back(Term::unit());
    switch (n.kind) {
        case PK::TauInf: parts.push_back(Term::div()); break;
        case PK::PrefixSum:
            for (const auto& [a, c] : n.children) parts.push_back(Term::act(a, to_term(c)));
            break;
        case PK::TauSum:
            for (const auto& m : n.family) {
                std::vector<Term> inner;
                if (m.ok) inner.push_back(Term::unit());
                for (const auto& a : m.acts) inner.push_back(Term::act(a, to_term(n.children.at(a))));
                parts.push_back(Term::tau(Term::sum(std::move(inner))));
            }
            break;
    }
    return Term::sum(std::move(parts));
}

Term to_term(const Cnf& n) {
    switch (n.kind) {
        case Cnf::Kind::TauInf: return Term::div();
        case Cnf::Kind::Unit: return Term::unit();
        case Cnf::Kind::TauUnit: return Term::tau(Term::unit());
        case Cnf::Kind::PrefixSum: {
            std::vector<Term> parts;
            for (const auto& [a, c] : n.children) parts.push_back(Term::act(a, to_term(c)));
            return Term::sum(std::move(parts));
        }
        case Cnf::Kind::TauSum: {
            std::vector<Term> parts;
            for (const auto& m : n.family) {
                std::vector<Term> inner;
                for (const auto& a : m.acts) inner.push_back(Term::act(a, to_term(n.children.at(a))));
                parts.push_back(Term::tau(Term::sum(std::move(inner))));
            }
            if (n.tau_unit) parts.push_back(Term::tau(Term::unit()));
            return Term::sum(std::move(parts));
        }
    }
    return Term::nil();
}

NfReport check_pnf(const Pnf& n) {
    NfReport rep;
    std::vector<std::string> path;
    check_pnf_at(n, path, rep);
    rep.valid = rep.violations.empty();
    return rep;
}

NfReport check_cnf(const Cnf& n) {
    NfReport rep;
    std::vector<std::string> path;
    check_cnf_at(n, path, rep);
    rep.valid = rep.violations.empty();
    return rep;
}

Term simplify_unusable(const Term& t, const Env& env) {
    require_ccsf(t);
    switch (t.kind()) {
        case TermKind::Prefix: {
            if (!usable(t.body(), env).usable) return Term::prefix(t.guard(), Term::nil());
            return Term::prefix(t.guard(), simplify_unusable(t.body(), env));
        }
        case TermKind::Sum: {
            std::vector<Term> parts;
            for (const auto& s : t.summands()) parts.push_back(simplify_unusable(s, env));
            return Term::sum(std::move(parts));
        }
        default: return t;
    }
}

}  // namespace ccswb
