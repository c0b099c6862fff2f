// Axiom systems for the three preorders and normal forms of finite terms.
#pragma once

#include "ccswb/preorders.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ccswb {

class NotCCSf : public Error {
public:
    explicit NotCCSf(const std::string& what) : Error("not a finite term: " + what) {}
};

// Raised when a term has no representative in the normal-form grammar.
class NoNormalForm : public Error {
public:
    explicit NoNormalForm(const std::string& what) : Error("no normal form: " + what) {}
};

// ------------------------------------------------------------------ axioms

enum class SortTag { Any, NoOk };
enum class Direction { Leq, Eq };
enum class Theory { Std, Svr, Clt, P2p, Derived };

std::string theory_name(Theory t);
std::optional<Theory> parse_theory(const std::string& s);

// Patterns are terms whose upper-case constants are variables and whose
// action `mu` stands for any action or tau. Variables ending in `t` (Xt, Yt)
// carry SortTag::NoOk.
struct AxiomSchema {
    std::string name;
    Term lhs, rhs;
    Direction direction;
    std::vector<Kind> kinds;  // preorders under which the law is sound
    std::map<std::string, SortTag> vars;
    bool uses_mu = false;
    // Plain variables that must still be success-free for the law to hold
    // under the client and peer preorders.
    std::vector<std::string> strict;
};

// Declared: the sorts as declared by each schema. Strict: additionally the `strict` variables
// of each schema are success-free.
enum class Sorts { Declared, Strict };
SortTag sort_of(const AxiomSchema& s, const std::string& var, Sorts sorts);

// Every schema of every theory, in a fixed order.
const std::vector<AxiomSchema>& axiom_schemas();
std::vector<AxiomSchema> schemas_of(Theory t);
const AxiomSchema& schema(const std::string& name);

struct Substitution {
    std::map<std::string, Term> vars;
    std::optional<Action> mu;  // nullopt is tau
};

struct AxiomInstance {
    std::string axiom;
    Term lhs, rhs;
    Direction direction;
    std::vector<Kind> kinds;
};

// Ground instance, or nullopt when a NoOk variable is bound to a term that
// can report success.
std::optional<AxiomInstance> instantiate(const AxiomSchema& s, const Substitution& sub,
                                         Sorts sorts = Sorts::Declared);

// `samples` seeded sort-valid instances of every schema of the theory, with
// variables drawn from terms over the alphabet up to the given depth.
std::vector<AxiomInstance> instantiate_axioms(Theory t, const std::vector<std::string>& alphabet, int depth,
                                              std::size_t samples, std::uint64_t seed,
                                              Sorts sorts = Sorts::Declared);

struct InstanceVerdict {
    bool holds;
    std::optional<Kind> failing_kind;
    bool reverse = false;  // failure was right-to-left on an equation
    std::optional<Term> witness;
};

// Checks the instance under leq_plus for every kind it is declared for.
InstanceVerdict check_instance(const AxiomInstance& inst, const Env& env = Env{});

// --------------------------------------------------------- saturated families

// A finite subset of Act together with the success label.
struct LabelSet {
    std::vector<Action> acts;  // sorted, unique
    bool ok = false;

    bool contains(const LabelSet& o) const;
    LabelSet merged(const LabelSet& o) const;
    std::string str() const;
    friend auto operator<=>(const LabelSet&, const LabelSet&) = default;
    friend bool operator==(const LabelSet&, const LabelSet&) = default;
};

using SaturatedFamily = std::vector<LabelSet>;  // sorted, unique

SaturatedFamily saturate(std::vector<LabelSet> family);
// Sets required by saturation that are absent from the family.
std::vector<LabelSet> saturation_gaps(const std::vector<LabelSet>& family);

// ------------------------------------------------------------ normal forms

struct Pnf {
    enum class Kind { TauInf, PrefixSum, TauSum };
    Kind kind = Kind::PrefixSum;
    bool unit = false;
    // PrefixSum: the derivative per action. TauSum: the shared leaf per label.
    std::map<Action, Pnf> children;
    SaturatedFamily family;  // TauSum only

    static Pnf tau_inf(bool unit = false);
    static Pnf nil();
    static Pnf one();

    friend bool operator==(const Pnf&, const Pnf&) = default;
};

struct Cnf {
    enum class Kind { TauInf, Unit, TauUnit, PrefixSum, TauSum };
    Kind kind = Kind::PrefixSum;
    std::map<Action, Cnf> children;
    SaturatedFamily family;  // TauSum only, no member holds the success label
    bool tau_unit = false;   // TauSum only: an extra tau.1 summand

    friend bool operator==(const Cnf&, const Cnf&) = default;
};

struct NfReport {
    bool valid = true;
    std::vector<std::string> violations;
};

Pnf normalize_pnf(const Term& t);
// The server theory: success is erased first, then the peer construction applies.
Pnf normalize_snf(const Term& t);
Cnf normalize_cnf(const Term& t);

Term to_term(const Pnf& n);
Term to_term(const Cnf& n);

NfReport check_pnf(const Pnf& n);
NfReport check_cnf(const Cnf& n);

// Replaces every prefix whose continuation is not usable by the same prefix
// of 0. Sound for the client and peer preorders.
Term simplify_unusable(const Term& t, const Env& env = Env{});

}  // namespace ccswb
