// Parallel composition and the must-testing predicates.
#pragma once

#include "ccswb/lts.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ccswb {

struct ProductState {
    StateId left;
    StateId right;
    friend bool operator==(const ProductState&, const ProductState&) = default;
};

// Reachable part of left || right. Every product edge is a tau: a tau of
// either side or a synchronisation of complementary actions.
struct Product {
    LtsPtr left, right;
    std::vector<ProductState> states;  // states[0] is the root
    std::vector<std::vector<int>> succ;
    bool left_ok(int i) const { return left->can_ok(states[i].left); }
    bool right_ok(int i) const { return right->can_ok(states[i].right); }
};

Product compose(const LtsPtr& left, const LtsPtr& right);
// States are labelled `p || r`; states where r can report success are double circled.
void write_dot(std::ostream& os, const Product& prod);

enum class EvidenceShape { DeadlockEnd, Lasso };

struct Evidence {
    EvidenceShape shape;
    std::vector<ProductState> states;
    std::optional<std::size_t> loop_start;  // Lasso only
};

struct MustVerdict {
    bool holds;
    std::optional<Evidence> evidence;
};

// p must r: every maximal computation of p || r passes a state where r can
// report success.
MustVerdict must(const Lts& p, const Lts& r);
MustVerdict must(const Term& p, const Term& r, const Env& env);

enum class Side { Left, Right };

struct MustScVerdict {
    bool holds;
    std::optional<Evidence> evidence;  // pairs oriented as (p, r)
    std::optional<Side> failing;       // Left: p fails to satisfy r's demand
};

// Both parties succeed on every maximal computation.
MustScVerdict must_sc(const Lts& p, const Lts& r);
MustScVerdict must_sc(const Term& p, const Term& r, const Env& env);

class NotAcyclic : public Error {
public:
    NotAcyclic() : Error("product is not acyclic") {}
};

class BoundExceeded : public Error {
public:
    explicit BoundExceeded(std::size_t bound)
        : Error("more than " + std::to_string(bound) + " computations") {}
};

struct Computation {
    std::vector<ProductState> states;
    bool successful;  // some state has the right component ok
};

// All maximal computations of an acyclic product, in depth-first order.
std::vector<Computation> enumerate_computations(const Lts& p, const Lts& r, std::size_t bound = 100000);

std::string describe(const Evidence& e, const Lts& left, const Lts& right);

}  // namespace ccswb
