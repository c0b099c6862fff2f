#include "ccswb/report.hpp"

#include <sstream>

namespace ccswb {

std::string trace_string(const std::vector<ActionId>& trace) {
    if (trace.empty()) return "eps";
    std::string out;
    for (auto a : trace) out += (out.empty() ? "" : ".") + action_of(a).str();
    return out;
}

namespace {

Json action_list(const std::vector<ActionId>& xs) {
    Json j = Json::array();
    for (const auto& a : to_actions(xs)) j.push_back(a.str());
    return j;
}

Json trace_list(const std::vector<ActionId>& trace) {
    Json j = Json::array();
    for (auto a : trace) j.push_back(action_of(a).str());
    return j;
}

std::string state_pair(const ProductState& s, const Lts& left, const Lts& right) {
    return pretty(left.term(s.left)) + " || " + pretty(right.term(s.right));
}

}  // namespace

std::string family_string(const Family& f) {
    std::string out = "{";
    for (const auto& set : f) {
        if (out.size() > 1) out += ", ";
        out += "{";
        bool first = true;
        for (const auto& a : to_actions(set)) {
            out += (first ? "" : ",") + a.str();
            first = false;
        }
        out += "}";
    }
    return out + "}";
}

Json to_json(const Evidence& e, const Lts& left, const Lts& right) {
    Json path = Json::array();
    for (const auto& s : e.states) path.push_back(state_pair(s, left, right));
    Json j{{"shape", e.shape == EvidenceShape::Lasso ? "lasso" : "deadlock"}, {"path", path}};
    if (e.loop_start) j["loop_start"] = *e.loop_start;
    return j;
}

Json to_json(const MustVerdict& v, const Lts& server, const Lts& client) {
    Json j{{"holds", v.holds}};
    if (v.evidence) j["evidence"] = to_json(*v.evidence, server, client);
    return j;
}

Json to_json(const MustScVerdict& v, const Lts& p, const Lts& r) {
    Json j{{"holds", v.holds}};
    if (v.failing) j["unsatisfied"] = *v.failing == Side::Left ? "left" : "right";
    if (v.evidence) j["evidence"] = to_json(*v.evidence, p, r);
    return j;
}

Json to_json(const FailingClause& c) {
    Json j{{"clause", clause_name(c.kind)}, {"relation", c.relation}, {"trace", trace_list(c.trace)}};
    if (c.kind == ClauseKind::AcceptanceMatch) j["ready"] = action_list(c.ready);
    if (!c.excluded.empty()) j["excluded"] = action_list(c.excluded);
    return j;
}

std::string witness_status_name(WitnessStatus s) {
    switch (s) {
        case WitnessStatus::None: return "none";
        case WitnessStatus::Verified: return "verified";
        case WitnessStatus::Gap: return "gap";
    }
    return "?";
}

Json to_json(const RefinementVerdict& v) {
    Json j{{"kind", kind_name(v.kind)}, {"holds", v.holds}, {"mode", mode_name(v.mode)}};
    if (v.clause) j["failing_clause"] = to_json(*v.clause);
    if (!v.holds) {
        j["witness_status"] = witness_status_name(v.witness_status);
        if (v.witness) j["witness"] = pretty(*v.witness);
        j["witness_from_search"] = v.witness_from_search;
    }
    return j;
}

Json to_json(const UsabilityReport& r) {
    Json j{{"usable", r.usable}, {"mode", mode_name(r.mode)}};
    if (r.witness) j["witness"] = pretty(*r.witness);
    return j;
}

Json to_json(const Lts& l) {
    Json states = Json::array();
    for (StateId s = 0; s < static_cast<StateId>(l.size()); ++s) {
        Json edges = Json::array();
        for (const auto& e : l.edges(s)) {
            std::string label = e.kind == Label::Kind::Tau  ? "tau"
                                : e.kind == Label::Kind::Ok ? "ok"
                                                            : action_of(e.action).str();
            edges.push_back({{"label", label}, {"target", e.target}});
        }
        states.push_back({{"id", s}, {"term", pretty(l.term(s))}, {"ok", l.can_ok(s)}, {"edges", edges}});
    }
    return Json{{"states", l.size()},
                {"transitions", l.edge_count()},
                {"visible_acyclic", l.visible_acyclic()},
                {"lts", states}};
}

namespace {

Json family_json(const SaturatedFamily& fam) {
    Json j = Json::array();
    for (const auto& m : fam) {
        Json set = Json::array();
        for (const auto& a : m.acts) set.push_back(a.str());
        if (m.ok) set.push_back("ok");
        j.push_back(set);
    }
    return j;
}

template <class N>
Json children_json(const std::map<Action, N>& kids) {
    Json j = Json::object();
    for (const auto& [a, c] : kids) j[a.str()] = to_json(c);
    return j;
}

}  // namespace

Json to_json(const Pnf& n) {
    switch (n.kind) {
        case Pnf::Kind::TauInf: return Json{{"form", "div"}, {"unit", n.unit}};
        case Pnf::Kind::PrefixSum:
            return Json{{"form", "prefix_sum"}, {"unit", n.unit}, {"children", children_json(n.children)}};
        case Pnf::Kind::TauSum:
            return Json{{"form", "tau_sum"},
                        {"unit", n.unit},
                        {"family", family_json(n.family)},
                        {"leaves", children_json(n.children)}};
    }
    return {};
}

Json to_json(const Cnf& n) {
    switch (n.kind) {
        case Cnf::Kind::TauInf: return Json{{"form", "div"}};
        case Cnf::Kind::Unit: return Json{{"form", "unit"}};
        case Cnf::Kind::TauUnit: return Json{{"form", "tau_unit"}};
        case Cnf::Kind::PrefixSum: return Json{{"form", "prefix_sum"}, {"children", children_json(n.children)}};
        case Cnf::Kind::TauSum:
            return Json{{"form", "tau_sum"},
                        {"family", family_json(n.family)},
                        {"leaves", children_json(n.children)},
                        {"tau_unit", n.tau_unit}};
    }
    return {};
}

Json to_json(const NfReport& r) { return Json{{"valid", r.valid}, {"violations", r.violations}}; }

Json to_json(const AxiomInstance& inst, const InstanceVerdict& v) {
    Json kinds = Json::array();
    for (auto k : inst.kinds) kinds.push_back(kind_name(k));
    Json j{{"axiom", inst.axiom},
           {"instance",
            {{"lhs", pretty(inst.lhs)},
             {"rhs", pretty(inst.rhs)},
             {"direction", inst.direction == Direction::Eq ? "=" : "<="},
             {"kinds", kinds}}},
           {"verdict", v.holds ? "holds" : "fails"}};
    if (!v.holds) {
        j["failing_kind"] = kind_name(*v.failing_kind);
        j["right_to_left"] = v.reverse;
        if (v.witness) j["witness"] = pretty(*v.witness);
    }
    return j;
}

Json to_json(const CrossSummary& s) {
    Json fails = Json::array();
    for (const auto& r : s.failures) {
        Json f{{"left", pretty(r.left)}, {"right", pretty(r.right)}, {"decided", r.decided}};
        if (r.witness) f["witness"] = pretty(*r.witness);
        fails.push_back(f);
    }
    return Json{{"pairs", s.pairs},
                {"holds", s.holds},
                {"refuted", s.refuted},
                {"disagreements", s.disagreements},
                {"unverified_refutations", s.unverified_refutations},
                {"search_fallbacks", s.search_fallbacks},
                {"failures", fails}};
}

std::string verdict_line(bool holds, Mode mode, std::optional<int> bound) {
    std::string out = holds ? "holds (" : "fails (";
    out += mode_name(mode);
    if (mode == Mode::Bounded && bound) out += ", k=" + std::to_string(*bound);
    return out + ")";
}

namespace {

void describe_pnf(const Pnf& n, int indent, std::ostringstream& os) {
    std::string pad(static_cast<std::size_t>(indent), ' ');
    switch (n.kind) {
        case Pnf::Kind::TauInf: os << pad << "div" << (n.unit ? " + 1" : "") << "\n"; return;
        case Pnf::Kind::PrefixSum: os << pad << "prefix sum" << (n.unit ? " + 1" : "") << "\n"; break;
        case Pnf::Kind::TauSum: {
            os << pad << "tau sum" << (n.unit ? " + 1" : "") << ", family {";
            for (std::size_t i = 0; i < n.family.size(); ++i) os << (i ? "," : "") << n.family[i].str();
            os << "}\n";
            break;
        }
    }
    for (const auto& [a, c] : n.children) {
        os << pad << "  " << a.str() << " -> " << pretty(to_term(c)) << "\n";
        if (c.kind != Pnf::Kind::PrefixSum || !c.children.empty()) describe_pnf(c, indent + 4, os);
    }
}

void describe_cnf(const Cnf& n, int indent, std::ostringstream& os) {
    std::string pad(static_cast<std::size_t>(indent), ' ');
    switch (n.kind) {
        case Cnf::Kind::TauInf: os << pad << "div\n"; return;
        case Cnf::Kind::Unit: os << pad << "1\n"; return;
        case Cnf::Kind::TauUnit: os << pad << "tau.1\n"; return;
        case Cnf::Kind::PrefixSum: os << pad << "prefix sum\n"; break;
        case Cnf::Kind::TauSum: {
            os << pad << "tau sum" << (n.tau_unit ? " + tau.1" : "") << ", family {";
            for (std::size_t i = 0; i < n.family.size(); ++i) os << (i ? "," : "") << n.family[i].str();
            os << "}\n";
            break;
        }
    }
    for (const auto& [a, c] : n.children) {
        os << pad << "  " << a.str() << " -> " << pretty(to_term(c)) << "\n";
        if (c.kind == Cnf::Kind::TauSum || (c.kind == Cnf::Kind::PrefixSum && !c.children.empty()))
            describe_cnf(c, indent + 4, os);
    }
}

}  // namespace

std::string describe(const Pnf& n) {
    std::ostringstream os;
    describe_pnf(n, 0, os);
    return os.str();
}

std::string describe(const Cnf& n) {
    std::ostringstream os;
    describe_cnf(n, 0, os);
    return os.str();
}

}  // namespace ccswb
