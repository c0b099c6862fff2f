#include "ccswb/oracle.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace ccswb {

std::vector<Action> EnumSpec::guard_actions() const {
    if (guards) return *guards;
    std::vector<Action> out;
    for (const auto& n : alphabet) {
        if (polarity != Polarity::Co) out.push_back(Action{n, false});
        if (polarity != Polarity::Plain) out.push_back(Action{n, true});
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

std::vector<Term> atoms(const EnumSpec& spec) {
    std::vector<Term> out;
    if (spec.allow_unit) out.push_back(Term::unit());
    if (spec.allow_div) out.push_back(Term::div());
    return out;
}

// All sums of at most `width` distinct elements of `summands`.
void sums_of(const std::vector<Term>& summands, int width, std::vector<Term>& out) {
    std::vector<std::size_t> pick;
    std::function<void(std::size_t)> go = [&](std::size_t from) {
        std::vector<Term> parts;
        for (auto i : pick) parts.push_back(summands[i]);
        out.push_back(Term::sum(std::move(parts)));
        if (static_cast<int>(pick.size()) == width) return;
        for (std::size_t i = from; i < summands.size(); ++i) {
            pick.push_back(i);
            go(i + 1);
            pick.pop_back();
        }
    };
    go(0);
}

}  // namespace

std::vector<Term> enumerate_terms(const EnumSpec& spec) {
    std::vector<Action> guards = spec.guard_actions();
    std::vector<Term> level;
    sums_of(atoms(spec), spec.max_width, level);
    for (int d = 1; d <= spec.max_depth; ++d) {
        std::vector<Term> summands = atoms(spec);
        for (const auto& body : level) {
            if (spec.include_tau) summands.push_back(Term::tau(body));
            for (const auto& g : guards) summands.push_back(Term::act(g, body));
        }
        std::sort(summands.begin(), summands.end());
        summands.erase(std::unique(summands.begin(), summands.end()), summands.end());
        std::vector<Term> next;
        sums_of(summands, spec.max_width, next);
        level = std::move(next);
    }
    std::sort(level.begin(), level.end(), [](const Term& a, const Term& b) {
        int da = depth(a), db = depth(b);
        if (da != db) return da < db;
        return a < b;
    });
    level.erase(std::unique(level.begin(), level.end()), level.end());
    return level;
}

std::vector<Term> sample_terms(const EnumSpec& spec, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
    std::vector<Action> guards = spec.guard_actions();
    std::vector<Term> at = atoms(spec);
    std::function<Term(int)> gen = [&](int d) {
        int width = static_cast<int>(pick(static_cast<std::size_t>(spec.max_width) + 1));
        if (width == 0 && d == spec.max_depth) width = 1;
        std::vector<Term> parts;
        for (int i = 0; i < width; ++i) {
            bool leaf = d == 0 || (!at.empty() && pick(4) == 0);
            if (leaf) {
                if (!at.empty()) parts.push_back(at[pick(at.size())]);
                continue;
            }
            std::size_t g = pick(guards.size() + (spec.include_tau ? 1 : 0));
            Term body = gen(d - 1);
            parts.push_back(g < guards.size() ? Term::act(guards[g], body) : Term::tau(body));
        }
        return Term::sum(std::move(parts));
    };
    std::vector<Term> out;
    std::unordered_set<Term, TermHash> seen;
    for (std::size_t attempts = 0; out.size() < count && attempts < count * 50; ++attempts) {
        Term t = gen(spec.max_depth);
        if (seen.insert(t).second) out.push_back(t);
    }
    return out;
}

EnumSpec test_spec_for(const Term& p, const Term& q, const Env& env, int depth) {
    std::set<Action> acts;
    for (const auto& t : {p, q})
        for (const auto& a : actions_of(t, env)) acts.insert(a.complement());
    EnumSpec spec;
    spec.guards = std::vector<Action>(acts.begin(), acts.end());
    spec.max_depth = depth;
    spec.allow_div = true;
    return spec;
}

std::optional<Term> search_distinguishing(Kind k, const Lts& p, const Lts& q, const std::vector<Term>& tests,
                                          const Env& env) {
    for (const auto& t : tests) {
        auto tl = build_lts(t, env);
        if (passes(k, p, *tl) && !passes(k, q, *tl)) return t;
    }
    return std::nullopt;
}

std::optional<Term> refute_by_search(Kind k, const Term& p, const Term& q, const Env& env, const EnumSpec& spec) {
    auto pl = build_lts(p, env), ql = build_lts(q, env);
    return search_distinguishing(k, *pl, *ql, enumerate_terms(spec), env);
}

namespace {

class ServerEnumerator {
public:
    ServerEnumerator(const Lts& client, std::size_t cap) : client_(client), cap_(cap) {}

    // Every candidate server for the client states xs, or nullopt past the cap.
    std::optional<std::vector<Term>> servers(const StateSet& xs, int depth) {
        std::vector<Term> out{Term::nil()};
        if (depth == 0) return out;
        std::vector<std::pair<ActionId, std::vector<Term>>> options;
        for (ActionId a : client_.alphabet()) {
            StateSet next = client_.after(xs, a);
            if (next.empty()) continue;
            auto subs = servers(next, depth - 1);
            if (!subs) return std::nullopt;
            options.emplace_back(a, std::move(*subs));
        }
        // Each action is either not offered or offered with one continuation.
        for (const auto& [a, subs] : options) {
            std::vector<Term> grown;
            for (const auto& base : out) {
                grown.push_back(base);
                for (const auto& s : subs) {
                    grown.push_back(Term::choice(base, Term::act(action_of(co_id(a)), s)));
                    if (grown.size() > cap_) return std::nullopt;
                }
            }
            out = std::move(grown);
        }
        return out;
    }

private:
    const Lts& client_;
    std::size_t cap_;
};

}  // namespace

ServerSearch search_server(const Term& client, const Env& env, int depth, std::size_t cap) {
    auto cl = build_lts(client, env);
    ServerSearch res;
    ServerEnumerator en(*cl, cap);
    auto servers = en.servers(cl->tau_closure({cl->root()}), depth);
    if (!servers) {
        res.exhausted = false;
        return res;
    }
    for (const auto& s : *servers) {
        ++res.tried;
        if (must(*build_lts(s, env), *cl).holds) {
            res.server = s;
            return res;
        }
    }
    return res;
}

// ---------------------------------------------------------------- test bank

TestBank::TestBank(Kind k, std::vector<Term> tests, const Env& env) : kind_(k), env_(env) {
    for (const auto& t : tests) add(t);
}

void TestBank::add(const Term& t) {
    tests_.push_back(t);
    lts_.push_back(build_lts(t, env_));
}

TestBank::Signature TestBank::signature(const Lts& subject) const {
    Signature sig((tests_.size() + 63) / 64, 0);
    for (std::size_t i = 0; i < tests_.size(); ++i)
        if (passes(kind_, subject, *lts_[i])) sig[i / 64] |= std::uint64_t{1} << (i % 64);
    return sig;
}

std::optional<std::size_t> TestBank::separating(const Signature& p, const Signature& q) const {
    for (std::size_t w = 0; w < p.size(); ++w) {
        std::uint64_t qw = w < q.size() ? q[w] : 0;
        std::uint64_t diff = p[w] & ~qw;
        if (diff) return w * 64 + static_cast<std::size_t>(__builtin_ctzll(diff));
    }
    return std::nullopt;
}

void write_json_line(std::ostream& os, const CrossRecord& r) {
    nlohmann::json j{{"kind", kind_name(r.kind)},
                     {"left", pretty(r.left)},
                     {"right", pretty(r.right)},
                     {"decided", r.decided},
                     {"agree", r.agree}};
    if (r.witness) j["witness"] = pretty(*r.witness);
    os << j.dump() << "\n";
}

CrossSummary cross_validate(Kind k, const std::vector<std::pair<Term, Term>>& pairs, TestBank& bank,
                            const Env& env, std::ostream* jsonl) {
    struct Subject {
        ProfilePtr prof;
        TestBank::Signature sig;
        std::size_t covered = 0;  // tests already folded into sig
    };
    std::unordered_map<Term, Subject, TermHash> subjects;
    auto subject = [&](const Term& t) -> Subject& {
        auto it = subjects.find(t);
        if (it == subjects.end()) it = subjects.emplace(t, Subject{make_profile(t, env), {}, 0}).first;
        return it->second;
    };
    auto signature = [&](Subject& s) -> const TestBank::Signature& {
        if (s.covered < bank.size()) {
            s.sig.resize((bank.size() + 63) / 64, 0);
            for (std::size_t i = s.covered; i < bank.size(); ++i) {
                if (passes(k, s.prof->lts(), bank.test_lts(i))) s.sig[i / 64] |= std::uint64_t{1} << (i % 64);
            }
            s.covered = bank.size();
        }
        return s.sig;
    };

    CrossSummary sum;
    std::vector<CrossRecord> records;
    std::unordered_set<Term, TermHash> banked;
    for (std::size_t i = 0; i < bank.size(); ++i) banked.insert(bank.test(i));

    // First pass: decide every pair and collect witnesses for refutations.
    for (const auto& [l, r] : pairs) {
        Subject& sl = subject(l);
        Subject& sr = subject(r);
        CrossRecord rec{k, l, r, true, std::nullopt, false, true};
        auto fail = first_failure(k, *sl.prof, *sr.prof);
        rec.decided = !fail;
        if (fail) {
            auto w = design_witness(k, *sl.prof, *sr.prof, *fail);
            if (w && distinguishes(k, sl.prof->lts(), sr.prof->lts(), *w, env)) {
                rec.witness = w;
                rec.witness_verified = true;
                if (banked.insert(*w).second) bank.add(*w);
            }
        }
        records.push_back(std::move(rec));
    }
    // Second pass: holding pairs against the final bank, leftover
    // refutations against the bank as a search fallback.
    for (auto& rec : records) {
        Subject& sl = subject(rec.left);
        Subject& sr = subject(rec.right);
        ++sum.pairs;
        if (rec.decided) {
            ++sum.holds;
            if (auto i = bank.separating(signature(sl), signature(sr))) {
                rec.agree = false;
                rec.witness = bank.test(*i);
            }
        } else {
            ++sum.refuted;
            if (!rec.witness_verified) {
                ++sum.search_fallbacks;
                if (auto i = bank.separating(signature(sl), signature(sr))) {
                    rec.witness = bank.test(*i);
                    rec.witness_verified = true;
                }
            }
            if (!rec.witness_verified) {
                ++sum.unverified_refutations;
                rec.agree = false;
            }
        }
        if (!rec.agree) {
            if (rec.decided || rec.witness) ++sum.disagreements;
            sum.failures.push_back(rec);
        }
        if (jsonl) write_json_line(*jsonl, rec);
    }
    return sum;
}

std::vector<std::pair<Term, Term>> all_pairs(const std::vector<Term>& corpus) {
    std::vector<std::pair<Term, Term>> out;
    out.reserve(corpus.size() * corpus.size());
    for (const auto& a : corpus)
        for (const auto& b : corpus) out.emplace_back(a, b);
    return out;
}

std::vector<std::pair<Term, Term>> sample_pairs(const std::vector<Term>& corpus, std::size_t count,
                                                std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::pair<Term, Term>> out;
    if (corpus.empty()) return out;
    for (std::size_t i = 0; i < count; ++i)
        out.emplace_back(corpus[rng() % corpus.size()], corpus[rng() % corpus.size()]);
    return out;
}

}  // namespace ccswb
