// ccswb: command-line front end of the must-testing workbench.
#include "ccswb/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

using namespace ccswb;

namespace {

constexpr int kAnswered = 0;
constexpr int kUsage = 1;
constexpr int kCap = 2;
constexpr int kDisagreement = 3;

struct Options {
    std::string file;
    bool json = false;
    std::string dot;
    std::optional<int> bound;
    std::optional<std::size_t> state_cap;
    std::uint64_t seed = 1;
};

struct Loaded {
    Program prog;
};

Loaded load(const Options& o) {
    Loaded l;
    if (o.file.empty()) return l;
    std::ifstream in(o.file);
    if (!in) throw Error("cannot open " + o.file);
    std::stringstream ss;
    ss << in.rdbuf();
    l.prog = parse_program(ss.str());
    return l;
}

// A definition name denotes its query term, anything else is parsed.
Term resolve(const std::string& arg, const Env& env) {
    if (env.has(arg)) return env.query(arg);
    return parse_term(arg, env);
}

std::vector<std::string> split_alphabet(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s + ",") {
        if (c == ',' || c == ' ') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    return out;
}

std::vector<Action> parse_trace(const std::string& s) {
    std::vector<Action> out;
    std::string cur;
    for (char c : s + ".") {
        if (c == '.' || c == ' ') {
            if (cur.empty() || cur == "eps") {
                cur.clear();
                continue;
            }
            bool co = cur[0] == '~';
            std::string name = co ? cur.substr(1) : cur;
            if (!valid_action_name(name)) throw Error("bad action in trace: " + cur);
            out.push_back(Action{name, co});
            cur.clear();
        } else {
            cur += c;
        }
    }
    return out;
}

void write_dot_file(const std::string& path, const std::function<void(std::ostream&)>& fn) {
    if (path.empty()) return;
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    fn(out);
}

void print(const Options& o, const Json& j, const std::string& human) {
    if (o.json)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << human;
}

// ------------------------------------------------------------------ commands

int cmd_parse(const Options& o) {
    auto l = load(o);
    Json defs = Json::array();
    std::string human;
    for (const auto& [name, t] : l.prog.defs) {
        bool rec = l.prog.env.recursive(name);
        defs.push_back({{"name", name},
                        {"term", pretty(l.prog.env.body(name))},
                        {"recursive", rec},
                        {"finite", is_ccsf(t)}});
        human += "def " + name + " = " + pretty(l.prog.env.body(name)) + (rec ? "    # recursive" : "") + "\n";
    }
    print(o, Json{{"definitions", defs}}, human);
    return kAnswered;
}

int cmd_lts(const Options& o, const std::string& p) {
    auto l = load(o);
    auto lts = build_lts(resolve(p, l.prog.env), l.prog.env);
    write_dot_file(o.dot, [&](std::ostream& os) { lts->write_dot(os); });
    std::ostringstream human;
    human << lts->size() << " states, " << lts->edge_count() << " transitions\n";
    for (StateId s = 0; s < static_cast<StateId>(lts->size()); ++s) {
        human << "  s" << s << (lts->can_ok(s) ? " [ok]" : "") << "  " << pretty(lts->term(s)) << "\n";
        for (const auto& e : lts->edges(s)) {
            std::string lbl = e.kind == Label::Kind::Tau  ? "tau"
                              : e.kind == Label::Kind::Ok ? "ok"
                                                          : action_of(e.action).str();
            human << "      --" << lbl << "--> s" << e.target << "\n";
        }
    }
    print(o, to_json(*lts), human.str());
    return kAnswered;
}

int cmd_must(const Options& o, const std::string& s, const std::string& c) {
    auto l = load(o);
    const Env& env = l.prog.env;
    auto sl = build_lts(resolve(s, env), env);
    auto cl = build_lts(resolve(c, env), env);
    write_dot_file(o.dot, [&](std::ostream& os) { write_dot(os, compose(sl, cl)); });
    auto v = must(*sl, *cl);
    std::string human = v.holds ? "holds (exact)\n" : "fails (exact)\n";
    if (v.evidence) human += describe(*v.evidence, *sl, *cl) + "\n";
    Json j = to_json(v, *sl, *cl);
    j["mode"] = "exact";
    print(o, j, human);
    return kAnswered;
}

int cmd_mustsc(const Options& o, const std::string& p, const std::string& r) {
    auto l = load(o);
    const Env& env = l.prog.env;
    auto pl = build_lts(resolve(p, env), env);
    auto rl = build_lts(resolve(r, env), env);
    write_dot_file(o.dot, [&](std::ostream& os) { write_dot(os, compose(pl, rl)); });
    auto v = must_sc(*pl, *rl);
    std::string human = v.holds ? "holds (exact)\n" : "fails (exact)\n";
    if (v.failing) human += std::string(*v.failing == Side::Left ? "left" : "right") + " peer not satisfied\n";
    if (v.evidence) human += describe(*v.evidence, *pl, *rl) + "\n";
    Json j = to_json(v, *pl, *rl);
    j["mode"] = "exact";
    print(o, j, human);
    return kAnswered;
}

int cmd_usable(const Options& o, const std::string& p) {
    auto l = load(o);
    const Env& env = l.prog.env;
    auto lts = build_lts(resolve(p, env), env);
    write_dot_file(o.dot, [&](std::ostream& os) { lts->write_dot(os); });
    UsabilityAnalyzer an(lts, o.bound);
    UsabilityReport rep{false, an.mode(), std::nullopt};
    if (an.usable_state(lts->root())) {
        rep.usable = true;
        rep.witness = lts->can_ok(lts->root()) ? Term::nil() : an.witness({lts->root()});
    }
    std::string human = std::string(rep.usable ? "usable (" : "unusable (") + mode_name(rep.mode) +
                        (rep.mode == Mode::Bounded ? ", k=" + std::to_string(o.bound.value_or(kDefaultBound)) : "") +
                        ")\n";
    if (rep.witness) human += "witness server: " + pretty(*rep.witness) + "\n";
    print(o, to_json(rep), human);
    return kAnswered;
}

int cmd_accsets(const Options& o, const std::string& p, const std::string& trace, bool unsuccessful) {
    auto l = load(o);
    const Env& env = l.prog.env;
    auto lts = build_lts(resolve(p, env), env);
    auto ids = to_ids(parse_trace(trace));
    Family f = unsuccessful ? acc_ut(*lts, ids) : acc(*lts, ids);
    Json fam = Json::array();
    for (const auto& set : f) {
        Json s = Json::array();
        for (const auto& a : to_actions(set)) s.push_back(a.str());
        fam.push_back(s);
    }
    Json j{{"trace", trace_string(ids)}, {"unsuccessful", unsuccessful}, {"family", fam}};
    print(o, j, std::string(unsuccessful ? "acc_ut(" : "acc(") + trace_string(ids) + ") = " + family_string(f) + "\n");
    return kAnswered;
}

int cmd_refines(const Options& o, const std::string& kind, const std::string& lhs, const std::string& rhs,
                bool precongruence) {
    auto k = parse_kind(kind);
    if (!k) throw CLI::ValidationError("--kind", "expected svr, clt or p2p");
    auto l = load(o);
    const Env& env = l.prog.env;
    Term p = resolve(lhs, env), q = resolve(rhs, env);
    LeqOptions opt;
    opt.bound = o.bound;
    opt.state_cap = o.state_cap;
    auto v = precongruence ? leq_plus(*k, p, q, env, opt) : leq(*k, p, q, env, opt);
    std::string human = verdict_line(v.holds, v.mode, v.mode == Mode::Bounded ? std::optional<int>(o.bound.value_or(kDefaultBound)) : std::nullopt) + "\n";
    if (v.clause) human += "failing clause: " + describe(*v.clause) + "\n";
    if (!v.holds) {
        if (v.witness)
            human += "witness: " + pretty(*v.witness) + " (" + witness_status_name(v.witness_status) +
                     (v.witness_from_search ? ", found by search" : "") + ")\n";
        else
            human += "witness: none (" + witness_status_name(v.witness_status) + ")\n";
    }
    Json j = to_json(v);
    j["precongruence"] = precongruence;
    print(o, j, human);
    return kAnswered;
}

int cmd_normalize(const Options& o, const std::string& p, const std::string& theory) {
    auto th = parse_theory(theory);
    if (!th || (*th != Theory::Svr && *th != Theory::Clt && *th != Theory::P2p))
        throw CLI::ValidationError("--theory", "expected svr, clt or p2p");
    auto l = load(o);
    const Env& env = l.prog.env;
    Term t = resolve(p, env);
    Json j{{"theory", theory}, {"input", pretty(t)}};
    std::string human;
    try {
        if (*th == Theory::Clt) {
            Cnf n = normalize_cnf(t);
            auto rep = check_cnf(n);
            j["normal_form"] = pretty(to_term(n));
            j["structure"] = to_json(n);
            j["check"] = to_json(rep);
            human = "cnf: " + pretty(to_term(n)) + "\n" + describe(n);
            for (const auto& v : rep.violations) human += "violation: " + v + "\n";
        } else {
            Pnf n = *th == Theory::Svr ? normalize_snf(t) : normalize_pnf(t);
            auto rep = check_pnf(n);
            j["normal_form"] = pretty(to_term(n));
            j["structure"] = to_json(n);
            j["check"] = to_json(rep);
            human = (*th == Theory::Svr ? "snf: " : "pnf: ") + pretty(to_term(n)) + "\n" + describe(n);
            for (const auto& v : rep.violations) human += "violation: " + v + "\n";
        }
    } catch (const NoNormalForm& e) {
        j["normal_form"] = nullptr;
        j["reason"] = e.what();
        human = std::string(e.what()) + "\n";
    }
    print(o, j, human);
    return kAnswered;
}

int cmd_check_axioms(const Options& o, const std::string& theory, std::size_t samples, int depth,
                     const std::string& alphabet, bool strict) {
    auto th = parse_theory(theory);
    if (!th) throw CLI::ValidationError("--theory", "expected std, svr, clt, p2p or derived");
    auto insts = instantiate_axioms(*th, split_alphabet(alphabet), depth, samples, o.seed,
                                    strict ? Sorts::Strict : Sorts::Declared);
    std::map<std::string, std::pair<std::size_t, std::size_t>> tally;  // checked, failed
    std::vector<std::string> order;
    std::size_t failed = 0;
    for (const auto& inst : insts) {
        auto v = check_instance(inst);
        if (!tally.count(inst.axiom)) order.push_back(inst.axiom);
        auto& [n, f] = tally[inst.axiom];
        ++n;
        if (!v.holds) {
            ++f;
            ++failed;
        }
        if (o.json)
            std::cout << to_json(inst, v).dump() << "\n";
        else if (!v.holds)
            std::cout << "FAIL " << inst.axiom << ": " << pretty(inst.lhs)
                      << (inst.direction == Direction::Eq ? " = " : " <= ") << pretty(inst.rhs) << " under "
                      << kind_name(*v.failing_kind) << (v.reverse ? " (right to left)" : "")
                      << (v.witness ? ", witness " + pretty(*v.witness) : "") << "\n";
    }
    if (!o.json) {
        for (const auto& name : order) {
            auto [n, f] = tally[name];
            std::cout << name << ": " << n - f << "/" << n << " hold\n";
        }
        std::cout << insts.size() << " instances, " << failed << " failed\n";
    }
    return failed ? kDisagreement : kAnswered;
}

struct SweepArgs {
    std::string kind = "clt";
    int depth = 1;
    int width = 2;
    std::string alphabet = "a,b";
    bool co = false;
    bool div = false;
    std::size_t terms = 0;  // 0: enumerate the corpus, else sample this many terms
    std::size_t pairs = 0;  // 0: every ordered pair, up to the cap
    std::size_t cap = 200000;
    std::size_t bank_samples = 200;
    std::string jsonl;
    unsigned jobs = 1;
};

std::vector<Term> bank_tests(const std::vector<std::string>& alphabet, std::size_t samples, std::uint64_t seed) {
    EnumSpec t;
    t.alphabet = alphabet;
    t.max_depth = 1;
    t.allow_div = true;
    auto tests = enumerate_terms(t);
    t.max_depth = 3;
    for (auto& s : sample_terms(t, samples, seed)) tests.push_back(std::move(s));
    return tests;
}

int cmd_sweep(const Options& o, const SweepArgs& a) {
    auto k = parse_kind(a.kind);
    if (!k) throw CLI::ValidationError("--kind", "expected svr, clt or p2p");
    EnumSpec spec;
    spec.alphabet = split_alphabet(a.alphabet);
    spec.polarity = a.co ? EnumSpec::Polarity::Both : EnumSpec::Polarity::Plain;
    spec.max_depth = a.depth;
    spec.max_width = a.width;
    spec.allow_div = a.div;
    auto corpus = a.terms ? sample_terms(spec, a.terms, o.seed) : enumerate_terms(spec);
    std::vector<std::pair<Term, Term>> pairs;
    bool sampled = a.pairs > 0 || corpus.size() * corpus.size() > a.cap;
    if (sampled)
        pairs = sample_pairs(corpus, a.pairs > 0 ? a.pairs : a.cap, o.seed);
    else
        pairs = all_pairs(corpus);

    unsigned jobs = std::max(1u, a.jobs);
    std::vector<CrossSummary> sums(jobs);
    std::vector<std::ostringstream> logs(jobs);
    auto work = [&](unsigned w) {
        std::vector<std::pair<Term, Term>> mine;
        for (std::size_t i = w; i < pairs.size(); i += jobs) mine.push_back(pairs[i]);
        Env env;
        TestBank bank(*k, bank_tests(spec.alphabet, a.bank_samples, o.seed), env);
        sums[w] = cross_validate(*k, mine, bank, env, a.jsonl.empty() ? nullptr : &logs[w]);
    };
    if (jobs == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    CrossSummary total;
    for (auto& s : sums) {
        total.pairs += s.pairs;
        total.holds += s.holds;
        total.refuted += s.refuted;
        total.disagreements += s.disagreements;
        total.unverified_refutations += s.unverified_refutations;
        total.search_fallbacks += s.search_fallbacks;
        for (auto& f : s.failures) total.failures.push_back(std::move(f));
    }
    if (!a.jsonl.empty()) {
        std::ofstream out(a.jsonl);
        if (!out) throw Error("cannot write " + a.jsonl);
        for (auto& l : logs) out << l.str();
    }
    Json j = to_json(total);
    j["kind"] = a.kind;
    j["corpus"] = corpus.size();
    j["sampled"] = sampled;
    std::ostringstream human;
    human << kind_name(*k) << ": " << corpus.size() << " terms, " << total.pairs << (sampled ? " sampled" : "")
          << " pairs, " << total.holds << " hold, " << total.refuted << " refuted, " << total.disagreements
          << " disagreements, " << total.unverified_refutations << " unverified refutations\n";
    for (const auto& f : total.failures)
        human << "  " << (f.decided ? "holds" : "fails") << ": " << pretty(f.left) << "  vs  " << pretty(f.right)
              << (f.witness ? "  witness " + pretty(*f.witness) : "") << "\n";
    print(o, j, human.str());
    return total.failures.empty() ? kAnswered : kDisagreement;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Must-testing workbench for servers, clients and peers"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    std::optional<int> bound;
    std::optional<std::size_t> state_cap;
    app.add_flag("--json", o.json, "Machine-readable output");
    app.add_option("--dot", o.dot, "Write the graph in DOT format to FILE");
    app.add_option("--bound", bound, "Force Bounded mode with this depth");
    app.add_option("--state-cap", state_cap, "Maximum number of LTS states");
    app.add_option("--seed", o.seed, "Seed for sampling");

    auto add_file = [&](CLI::App* c) { c->add_option("file", o.file, "Definition file"); };
    std::string p, q, trace, kind = "clt", theory = "p2p";
    bool precong = false, unsuccessful = false, strict = false;

    auto* parse = app.add_subcommand("parse", "Parse a definition file");
    parse->add_option("file", o.file)->required();

    auto* lts = app.add_subcommand("lts", "Build the LTS of a term");
    add_file(lts);
    lts->add_option("-p,--process", p)->required();

    auto* mustc = app.add_subcommand("must", "Decide server must client");
    add_file(mustc);
    mustc->add_option("-s,--server", p)->required();
    mustc->add_option("-c,--client", q)->required();

    auto* mustsc = app.add_subcommand("mustsc", "Decide mutual satisfaction of two peers");
    add_file(mustsc);
    mustsc->add_option("-l,--left", p)->required();
    mustsc->add_option("-r,--right", q)->required();

    auto* usablec = app.add_subcommand("usable", "Decide client usability");
    add_file(usablec);
    usablec->add_option("-p,--process", p)->required();

    auto* acc = app.add_subcommand("accsets", "Acceptance sets after a trace");
    add_file(acc);
    acc->add_option("-p,--process", p)->required();
    acc->add_option("--trace", trace, "Dot-separated actions, e.g. b.~a");
    acc->add_flag("--unsuccessful", unsuccessful, "Unsuccessful acceptance sets");

    auto* ref = app.add_subcommand("refines", "Decide a refinement preorder");
    add_file(ref);
    ref->add_option("--kind", kind)->check(CLI::IsMember({"svr", "clt", "p2p"}));
    ref->add_option("-l,--left", p)->required();
    ref->add_option("-r,--right", q)->required();
    ref->add_flag("--precongruence", precong, "Compare under a fresh-action sum context");

    auto* norm = app.add_subcommand("normalize", "Normal form of a finite term");
    add_file(norm);
    norm->add_option("-p,--process", p)->required();
    norm->add_option("--theory", theory)->check(CLI::IsMember({"svr", "clt", "p2p"}));

    std::size_t samples = 200;
    int ax_depth = 3;
    std::string ax_alphabet = "a,b", ax_theory = "std";
    auto* ax = app.add_subcommand("check-axioms", "Check axiom instances semantically");
    ax->add_option("--theory", ax_theory)->check(CLI::IsMember({"std", "svr", "clt", "p2p", "derived"}));
    ax->add_option("--samples", samples, "Instances per axiom");
    ax->add_option("--depth", ax_depth);
    ax->add_option("--alphabet", ax_alphabet);
    ax->add_flag("--strict", strict, "Require success-free values for the variables that need them");

    SweepArgs sw;
    auto* sweep = app.add_subcommand("sweep", "Cross-validate a preorder against test search");
    sweep->add_option("--kind", sw.kind)->check(CLI::IsMember({"svr", "clt", "p2p"}));
    sweep->add_option("--depth", sw.depth);
    sweep->add_option("--width", sw.width);
    sweep->add_option("--alphabet", sw.alphabet);
    sweep->add_flag("--co", sw.co, "Include co-actions in the corpus");
    sweep->add_flag("--div", sw.div, "Include div in the corpus");
    sweep->add_option("--terms", sw.terms, "Sample this many corpus terms instead of enumerating");
    sweep->add_option("--sample", sw.pairs, "Number of seeded pairs instead of all pairs");
    sweep->add_option("--cap", sw.cap, "Sample this many pairs when all pairs exceed it");
    sweep->add_option("--bank", sw.bank_samples, "Sampled tests seeding the test bank");
    sweep->add_option("--jsonl", sw.jsonl, "Write one JSON record per pair");
    sweep->add_option("--jobs", sw.jobs, "Worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kAnswered : kUsage;
    }
    o.bound = bound;
    o.state_cap = state_cap;
    if (state_cap) setenv("CCSWB_STATE_CAP", std::to_string(*state_cap).c_str(), 1);

    try {
        if (*parse) return cmd_parse(o);
        if (*lts) return cmd_lts(o, p);
        if (*mustc) return cmd_must(o, p, q);
        if (*mustsc) return cmd_mustsc(o, p, q);
        if (*usablec) return cmd_usable(o, p);
        if (*acc) return cmd_accsets(o, p, trace, unsuccessful);
        if (*ref) return cmd_refines(o, kind, p, q, precong);
        if (*norm) return cmd_normalize(o, p, theory);
        if (*ax) return cmd_check_axioms(o, ax_theory, samples, ax_depth, ax_alphabet, strict);
        if (*sweep) return cmd_sweep(o, sw);
    } catch (const StateCapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kCap;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
