#include "ccswb/oracle.hpp"

#include <doctest.h>

using namespace ccswb;

namespace {

bool usable_of(const char* s) { return usable(parse_term(s), Env{}).usable; }

}  // namespace

TEST_CASE("usability verdicts") {
    CHECK_FALSE(usable_of("0"));
    auto one = usable(Term::unit(), Env{});
    CHECK(one.usable);
    CHECK(*one.witness == Term::nil());
    CHECK_FALSE(usable_of("b.d.0 + b.1"));
    CHECK_FALSE(usable_of("a.(b.0 + c.1) + a.(b.1 + c.0)"));
    CHECK_FALSE(usable_of("a.0"));
    CHECK(usable_of("a.1 + b.0"));
    CHECK(usable_of("tau.(1 + a.1) + tau.a.1"));
}

TEST_CASE("finite clients are decided exactly") {
    CHECK(usable(parse_term("a.(b.1 + c.0)"), Env{}).mode == Mode::Exact);
    CHECK(usable(parse_term("a.(b.1 + c.0)"), Env{}, 3).mode == Mode::Bounded);
}

TEST_CASE("witness servers satisfy their clients") {
    for (const char* s : {"a.(b.1 + c.0)", "tau.a.1 + tau.b.1", "a.1 + a.b.1", "~a.(b.1 (+) c.1)", "div + 1",
                          "tau.(a.1 + b.0) + tau.c.1"}) {
        auto rep = usable(parse_term(s), Env{});
        REQUIRE_MESSAGE(rep.usable, s);
        CHECK_MESSAGE(must(*rep.witness, parse_term(s), Env{}).holds, s);
    }
}

TEST_CASE("server search confirms unusable clients") {
    auto none = search_server(parse_term("a.0"), Env{}, 4);
    CHECK(none.exhausted);
    CHECK_FALSE(none.server);
    auto some = search_server(parse_term("a.(b.1 + c.0)"), Env{}, 4);
    REQUIRE(some.server);
    CHECK(must(*some.server, parse_term("a.(b.1 + c.0)"), Env{}).holds);
}

TEST_CASE("recursive clients") {
    auto prog = parse_program("def C = a.C + b.1\ndef L = a.L\n");
    auto c = usable(prog.env.query("C"), prog.env);
    CHECK(c.usable);
    CHECK(c.mode == Mode::Bounded);
    CHECK(must(*c.witness, prog.env.query("C"), prog.env).holds);
    CHECK_FALSE(usable(prog.env.query("L"), prog.env).usable);
}
