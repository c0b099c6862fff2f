#include "ccswb/lts.hpp"

#include <doctest.h>

#include <algorithm>
#include <sstream>

using namespace ccswb;

namespace {

std::vector<Term> terms_of(const Lts& l, const StateSet& xs) {
    std::vector<Term> out;
    for (auto s : xs) out.push_back(l.term(s));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<ActionId> ids(std::initializer_list<const char*> acts) {
    std::vector<Action> out;
    for (const char* a : acts) out.push_back(parse_term(std::string(a) + ".0").guard().value());
    return to_ids(out);
}

}  // namespace

TEST_CASE("single-step transitions") {
    auto one = transitions(Term::unit(), Env{});
    REQUIRE(one.size() == 1);
    CHECK(one[0].second.is_ok());
    CHECK(one[0].first == Term::nil());

    auto sum = transitions(parse_term("a.1 + b.0"), Env{});
    CHECK(sum.size() == 2);

    auto prog = parse_program("def A = ~a.A\n");
    auto rec = transitions(prog.env.query("A"), prog.env);
    REQUIRE(rec.size() == 1);
    CHECK(rec[0].second == Label::visible({"a", true}));
    CHECK(rec[0].first == prog.env.query("A"));
}

TEST_CASE("state spaces") {
    auto l = build_lts(parse_term("a.b.0"), Env{});
    CHECK(l->size() == 3);
    CHECK(l->edge_count() == 2);
    auto prog = parse_program("def A = ~a.A\n");
    auto a = build_lts(prog.env.query("A"), prog.env);
    CHECK(a->size() == 1);
    CHECK(a->edge_count() == 1);
    auto d = build_lts(Term::div(), Env{});
    CHECK(d->size() == 1);
    CHECK(d->diverges(0));
}

TEST_CASE("state cap is an error") {
    CHECK_THROWS_AS(build_lts(parse_term("a.b.c.0"), Env{}, 2), StateCapExceeded);
}

TEST_CASE("weak and unsuccessful derivatives") {
    auto q = build_lts(parse_term("tau.a.b.0 + tau.a.c.0"), Env{});
    CHECK(terms_of(*q, q->weak_after(ids({"a"}))) == std::vector<Term>{parse_term("b.0"), parse_term("c.0")});
    auto a1 = build_lts(parse_term("a.1"), Env{});
    CHECK(a1->weak_after(ids({"b"})).empty());
    CHECK(a1->unsuccessful_after(ids({"a"})).empty());
    auto r = build_lts(parse_term("c.(a.1 + b.0)"), Env{});
    CHECK(terms_of(*r, r->unsuccessful_after(ids({"c", "b"}))) == std::vector<Term>{Term::nil()});
    auto g = build_lts(parse_term("b.(tau.(1 + a.0) + tau.a.tau.1)"), Env{});
    // The unstable b-derivative is itself unsuccessful; of the two tau branches only a.tau.1 remains.
    auto reached = terms_of(*g, g->unsuccessful_after(ids({"b"})));
    auto expect = std::vector<Term>{parse_term("a.tau.1"), parse_term("tau.(1 + a.0) + tau.a.tau.1")};
    std::sort(expect.begin(), expect.end());
    CHECK(reached == expect);
}

TEST_CASE("convergence") {
    CHECK_FALSE(converges(Term::div(), Env{}));
    CHECK(converges(parse_term("tau.tau.0"), Env{}));
    CHECK_FALSE(converges(parse_term("1 + div"), Env{}));
    auto l = build_lts(parse_term("a.(b.d.0 + b.1)"), Env{});
    CHECK(converges_along(*l, ids({"a", "c"})));
    CHECK(converges_along(*l, {}));
}

TEST_CASE("unsuccessful divergence") {
    CHECK(build_lts(Term::div(), Env{})->diverges_unsuccessfully(0));
    CHECK_FALSE(build_lts(parse_term("1 + div"), Env{})->diverges_unsuccessfully(0));
    CHECK_FALSE(build_lts(parse_term("tau.(1 + div)"), Env{})->diverges_unsuccessfully(0));
}

TEST_CASE("acceptance sets") {
    auto q = build_lts(parse_term("tau.a.b.0 + tau.a.c.0"), Env{});
    CHECK(acc(*q, ids({"a"})) == Family{ids({"b"}), ids({"c"})});
    auto r1 = build_lts(parse_term("b.a.1"), Env{});
    CHECK(acc_ut(*r1, ids({"b"})) == Family{ids({"a"})});
    // b.(c.0 + 1) reports success after b, so {c} is a plain acceptance set only.
    auto r2 = build_lts(parse_term("b.(c.0 + 1)"), Env{});
    auto f = acc(*r2, ids({"b"}));
    CHECK(std::find(f.begin(), f.end(), ids({"c"})) != f.end());
    CHECK(acc_ut(*r2, ids({"b"})).empty());
    auto r = build_lts(parse_term("c.(a.1 + b.0)"), Env{});
    auto ab = ids({"a", "b"});
    std::sort(ab.begin(), ab.end());
    CHECK(acc_ut(*r, ids({"c"})) == Family{ab});
}

TEST_CASE("acc_ut members are acc members") {
    for (const char* s : {"c.(a.1 + b.0)", "tau.a.b.0 + tau.a.c.1", "b.(tau.(1 + a.0) + tau.a.tau.1)"}) {
        auto l = build_lts(parse_term(s), Env{});
        for (const auto& tr : {std::vector<ActionId>{}, ids({"a"}), ids({"b"}), ids({"c"})}) {
            auto all = acc(*l, tr);
            for (const auto& set : acc_ut(*l, tr)) CHECK(std::find(all.begin(), all.end(), set) != all.end());
        }
    }
}

TEST_CASE("dot export marks success states") {
    std::ostringstream os;
    build_lts(parse_term("a.1"), Env{})->write_dot(os);
    CHECK(os.str().find("doublecircle") != std::string::npos);
    CHECK(os.str().find("label=\"a\"") != std::string::npos);
}
