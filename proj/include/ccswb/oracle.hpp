// Enumerative oracles: exhaustive term generation and brute-force search
// for distinguishing tests.
#pragma once

#include "ccswb/preorders.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ccswb {

struct EnumSpec {
    enum class Polarity { Both, Plain, Co };

    std::vector<std::string> alphabet;
    Polarity polarity = Polarity::Both;
    // When set, exactly these actions are used as visible guards.
    std::optional<std::vector<Action>> guards;
    bool include_tau = true;
    int max_depth = 1;
    bool allow_unit = true;
    bool allow_div = false;
    int max_width = 2;

    std::vector<Action> guard_actions() const;
};

// Every term of prefix depth at most max_depth whose sums have at most
// max_width distinct summands, in a fixed order (by depth, then canonical
// order), without duplicates.
std::vector<Term> enumerate_terms(const EnumSpec& spec);

// Seeded random terms drawn from the same grammar, distinct.
std::vector<Term> sample_terms(const EnumSpec& spec, std::size_t count, std::uint64_t seed);

// Tests relevant for comparing p and q: guards are the complements of the
// actions of both, plus tau, leaves 0, 1 and div.
EnumSpec test_spec_for(const Term& p, const Term& q, const Env& env, int depth);

// First enumerated test t with Test(p, t) and not Test(q, t).
std::optional<Term> refute_by_search(Kind k, const Term& p, const Term& q, const Env& env, const EnumSpec& spec);
std::optional<Term> search_distinguishing(Kind k, const Lts& p, const Lts& q, const std::vector<Term>& tests,
                                          const Env& env);

struct ServerSearch {
    std::optional<Term> server;  // first server found that satisfies the client
    std::size_t tried = 0;
    bool exhausted = true;  // false when the cap stopped the search early
};

// Searches servers of prefix depth at most `depth` satisfying `client`. Only
// deterministic servers built from 0 and the complements of actions the
// client can perform after the trace so far are generated: any other server
// satisfying the client can be pruned to one of these.
ServerSearch search_server(const Term& client, const Env& env, int depth, std::size_t cap = 2000000);

// Pass/fail signatures of subjects against a fixed bank of tests; two
// subjects are separated by the bank iff their signatures are not nested.
class TestBank {
public:
    TestBank(Kind k, std::vector<Term> tests, const Env& env);
    Kind kind() const { return kind_; }
    std::size_t size() const { return tests_.size(); }
    const Term& test(std::size_t i) const { return tests_[i]; }
    const Lts& test_lts(std::size_t i) const { return *lts_[i]; }
    void add(const Term& t);

    using Signature = std::vector<std::uint64_t>;
    Signature signature(const Lts& subject) const;
    // Index of the first test passed by p's signature but not by q's.
    std::optional<std::size_t> separating(const Signature& p, const Signature& q) const;

private:
    Kind kind_;
    Env env_;
    std::vector<Term> tests_;
    std::vector<LtsPtr> lts_;
};

struct CrossRecord {
    Kind kind;
    Term left, right;
    bool decided;  // semantic verdict
    std::optional<Term> witness;
    bool witness_verified = false;
    bool agree;
};

void write_json_line(std::ostream& os, const CrossRecord& r);

struct CrossSummary {
    std::size_t pairs = 0;
    std::size_t holds = 0;
    std::size_t refuted = 0;
    std::size_t disagreements = 0;
    std::size_t unverified_refutations = 0;
    std::size_t search_fallbacks = 0;
    std::vector<CrossRecord> failures;  // disagreements and unverified refutations
};

// Decides kind on each pair and checks the verdict against the test bank:
// holding pairs must not be separated, refuted pairs need a verified witness.
// Designed witnesses are added to the bank as they are found.
CrossSummary cross_validate(Kind k, const std::vector<std::pair<Term, Term>>& pairs, TestBank& bank,
                            const Env& env, std::ostream* jsonl = nullptr);

// Every ordered pair of a corpus.
std::vector<std::pair<Term, Term>> all_pairs(const std::vector<Term>& corpus);
std::vector<std::pair<Term, Term>> sample_pairs(const std::vector<Term>& corpus, std::size_t count,
                                                std::uint64_t seed);

}  // namespace ccswb
