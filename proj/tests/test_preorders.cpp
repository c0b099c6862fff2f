#include "ccswb/oracle.hpp"

#include <doctest.h>

using namespace ccswb;

namespace {

Term T(const char* s) { return parse_term(s); }

bool clt(const char* p, const char* q) { return leq_clt(T(p), T(q), Env{}).holds; }
bool svr(const char* p, const char* q) { return leq_svr(T(p), T(q), Env{}).holds; }
bool p2p(const char* p, const char* q) { return leq_p2p(T(p), T(q), Env{}).holds; }
bool plus(Kind k, const char* p, const char* q) { return leq_plus(k, T(p), T(q), Env{}).holds; }

std::vector<Action> acts(std::initializer_list<const char*> xs) {
    std::vector<Action> out;
    for (const char* x : xs) out.push_back(Action{x, false});
    return out;
}

}  // namespace

TEST_CASE("client preorder") {
    CHECK(clt("b.a.1", "b.(c.0 + 1)"));
    CHECK(clt("a.1 + b.0", "a.1"));
    CHECK_FALSE(clt("a.1", "a.0"));
    CHECK(clt("a.(b.0 + c.1) + a.(b.1 + c.0)", "0"));
    CHECK(clt("c.(a.1 + b.0)", "c.a.1"));
    CHECK(clt("a.(b.d.0 + b.1)", "a.c.d.1"));
    CHECK_FALSE(clt("b.(tau.(1 + a.0) + tau.a.tau.1)", "b.0"));
    CHECK(clt("1 + b.0", "1"));
}

TEST_CASE("server preorder") {
    CHECK(svr("tau.a.b.0 + tau.a.c.0", "tau.a.(b.0 + c.0) + tau.a.c.0"));
    CHECK_FALSE(svr("tau.a.(b.0 + c.0) + tau.a.c.0", "tau.a.b.0 + tau.a.c.0"));
    CHECK(svr("a.1", "a.0"));
    CHECK_FALSE(svr("a.0", "b.0"));
    CHECK_FALSE(svr("a.1 + b.0", "a.1"));
}

TEST_CASE("peer preorder") {
    CHECK(p2p("a.0", "b.0"));
    CHECK_FALSE(p2p("1 + b.0", "1"));
    CHECK(p2p("0", "b.0"));
}

TEST_CASE("precongruence") {
    CHECK_FALSE(plus(Kind::P2p, "0", "b.0"));
    CHECK_FALSE(plus(Kind::P2p, "a.1", "a.tau.1"));
    CHECK_FALSE(plus(Kind::P2p, "a.1", "1"));
    CHECK_FALSE(plus(Kind::P2p, "1", "tau.0 + 1"));
    CHECK_FALSE(plus(Kind::Clt, "1 + tau.a.1", "tau.(1 + a.1) + tau.a.1"));
    for (const char* r : {"0", "a.0", "tau.a.1 + b.0", "div", "a.(b.0 + c.1)"}) CHECK(plus(Kind::Clt, r, "1"));
}

TEST_CASE("the pedagogical relations") {
    CHECK_FALSE(diag_sbad(T("c.(a.1 + b.0)"), T("c.a.1"), Env{}));
    CHECK(diag_sbad_prime(T("c.(a.1 + b.0)"), T("c.a.1"), Env{}));
    CHECK_FALSE(diag_sbad_prime(T("a.(b.d.0 + b.1)"), T("a.c.d.1"), Env{}));
}

TEST_CASE("usable actions") {
    auto u = uaut(T("c.(a.1 + b.0)"), acts({"c"}), acts({"a", "b"}), Env{});
    CHECK(u == acts({"a"}));
    CHECK(uaut(Term::unit(), acts({"a"}), acts({"a", "b"}), Env{}) == acts({"a", "b"}));
    auto g = uaut(T("b.(tau.(1 + a.0) + tau.a.tau.1)"), acts({"b"}), acts({"a"}), Env{});
    CHECK(g == acts({"a"}));
}

TEST_CASE("usability along unsuccessful traces") {
    auto r = make_profile(T("c.(a.1 + b.0)"), Env{});
    int cb = r->find(to_ids(acts({"c", "b"})));
    REQUIRE(cb >= 0);
    CHECK_FALSE(r->node(cb).usbut);
    auto r1 = make_profile(T("a.(b.d.0 + b.1)"), Env{});
    CHECK_FALSE(r1->node(0).usbut);
    auto one = make_profile(Term::unit(), Env{});
    CHECK(one->node(0).usbut);
}

TEST_CASE("peer convergence") {
    auto nil_a = make_profile(T("a.0"), Env{});
    CHECK(nil_a->node(0).conv);
    CHECK_FALSE(nil_a->node(0).usbut);
    auto dv = make_profile(T("1 + div"), Env{});
    CHECK_FALSE(dv->node(0).conv);
    auto ca = make_profile(T("~a.1"), Env{});
    CHECK(ca->node(0).conv);
    CHECK(ca->node(0).usbut);
}

TEST_CASE("refutations carry verified witnesses") {
    auto v = leq_clt(T("a.1"), T("a.0"), Env{});
    REQUIRE_FALSE(v.holds);
    CHECK(v.witness_status == WitnessStatus::Verified);
    REQUIRE(v.witness);
    CHECK(distinguishes(Kind::Clt, *build_lts(T("a.1"), Env{}), *build_lts(T("a.0"), Env{}), *v.witness, Env{}));

    auto s = leq_svr(T("tau.a.(b.0 + c.0) + tau.a.c.0"), T("tau.a.b.0 + tau.a.c.0"), Env{});
    REQUIRE(s.witness);
    CHECK(s.witness_status == WitnessStatus::Verified);
    CHECK(must(T("tau.a.(b.0 + c.0) + tau.a.c.0"), *s.witness, Env{}).holds);
    CHECK_FALSE(must(T("tau.a.b.0 + tau.a.c.0"), *s.witness, Env{}).holds);

    auto p = leq_p2p(T("1 + b.0"), T("1"), Env{});
    REQUIRE(p.witness);
    CHECK(p.witness_status == WitnessStatus::Verified);
}

TEST_CASE("search finds the textbook witnesses") {
    auto spec = [](const char* p, const char* q) { return test_spec_for(T(p), T(q), Env{}, 2); };
    auto w = refute_by_search(Kind::Clt, T("a.1"), T("a.0"), Env{}, spec("a.1", "a.0"));
    REQUIRE(w);
    CHECK(must(*w, T("a.1"), Env{}).holds);
    CHECK_FALSE(must(*w, T("a.0"), Env{}).holds);
    auto pw = refute_by_search(Kind::P2p, T("1 + b.0"), T("1"), Env{}, spec("1 + b.0", "1"));
    REQUIRE(pw);
    CHECK(must_sc(T("1 + b.0"), *pw, Env{}).holds);
    CHECK_FALSE(must_sc(T("1"), *pw, Env{}).holds);
    CHECK_FALSE(refute_by_search(Kind::Clt, T("a.1 + b.0"), T("a.1"), Env{}, spec("a.1 + b.0", "a.1")));
}

TEST_CASE("cyclic processes are compared in bounded mode") {
    auto prog = parse_program("def A = ~a.A\ndef B = ~a.~a.B\n");
    auto v = leq(Kind::Svr, prog.env.query("A"), prog.env.query("B"), prog.env);
    CHECK(v.mode == Mode::Bounded);
    CHECK(v.holds);
}
