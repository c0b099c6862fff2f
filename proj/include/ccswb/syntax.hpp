// Terms of finite-state CCS with an explicit success action.
#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ccswb {

// Base for every error the library raises on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line, int col);
    int line() const { return line_; }
    int column() const { return col_; }
    const std::string& detail() const { return detail_; }

private:
    std::string detail_;
    int line_;
    int col_;
};

struct Action {
    std::string name;
    bool co = false;

    Action complement() const { return Action{name, !co}; }
    std::string str() const { return co ? "~" + name : name; }

    friend auto operator<=>(const Action&, const Action&) = default;
    friend bool operator==(const Action&, const Action&) = default;
};

bool valid_action_name(const std::string& name);

struct Label {
    enum class Kind { Tau, Ok, Visible };
    Kind kind = Kind::Tau;
    Action action;

    static Label tau() { return {Kind::Tau, {}}; }
    static Label ok() { return {Kind::Ok, {}}; }
    static Label visible(Action a) { return {Kind::Visible, std::move(a)}; }

    bool is_tau() const { return kind == Kind::Tau; }
    bool is_ok() const { return kind == Kind::Ok; }
    bool is_visible() const { return kind == Kind::Visible; }
    std::string str() const;

    friend auto operator<=>(const Label&, const Label&) = default;
    friend bool operator==(const Label&, const Label&) = default;
};

enum class TermKind { Nil, Unit, Div, Const, Prefix, Sum };

class Term;

struct TermNode {
    TermKind kind;
    std::optional<Action> guard;  // Prefix only; nullopt is tau
    std::string name;             // Const only
    std::vector<Term> kids;       // Prefix: one body, Sum: summands
    std::size_t hash = 0;
};

// Immutable hash-consed-by-value term handle. Sums are kept flat, sorted and
// duplicate free, so structural equality coincides with equality modulo
// associativity, commutativity, idempotence and 0 as unit.
class Term {
public:
    Term();  // 0

    static Term nil();
    static Term unit();
    static Term div();
    static Term constant(const std::string& name);
    static Term prefix(std::optional<Action> guard, Term body);
    static Term act(const Action& a, Term body) { return prefix(a, std::move(body)); }
    static Term tau(Term body) { return prefix(std::nullopt, std::move(body)); }
    static Term sum(std::vector<Term> summands);
    static Term choice(Term l, Term r) { return sum({std::move(l), std::move(r)}); }
    static Term internal_choice(Term l, Term r);

    TermKind kind() const { return node_->kind; }
    const std::optional<Action>& guard() const { return node_->guard; }
    bool tau_guard() const { return kind() == TermKind::Prefix && !node_->guard; }
    const Term& body() const { return node_->kids.front(); }
    const std::vector<Term>& summands() const { return node_->kids; }
    const std::string& name() const { return node_->name; }
    std::size_t hash() const { return node_->hash; }

    friend bool operator==(const Term& a, const Term& b);
    friend std::strong_ordering operator<=>(const Term& a, const Term& b);

private:
    explicit Term(std::shared_ptr<const TermNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const TermNode> node_;
};

struct TermHash {
    std::size_t operator()(const Term& t) const { return t.hash(); }
};

// Summands of t viewed as a sum (a non-sum is a single summand, 0 is none).
std::vector<Term> summands_of(const Term& t);

class Env {
public:
    bool has(const std::string& name) const { return defs_.count(name) != 0; }
    const Term& body(const std::string& name) const;
    bool recursive(const std::string& name) const { return recursive_.count(name) != 0; }
    // The term a definition name denotes: its inlined body, or the constant
    // itself when the name is recursive.
    Term query(const std::string& name) const;
    const std::vector<std::string>& names() const { return order_; }

    void define(const std::string& name, Term body, bool recursive);

private:
    std::map<std::string, Term> defs_;
    std::set<std::string> recursive_;
    std::vector<std::string> order_;
};

struct Program {
    Env env;
    // Definitions in file order, each paired with its query term.
    std::vector<std::pair<std::string, Term>> defs;
};

Program parse_program(const std::string& text);
// Parses a single term; names are resolved against env.
Term parse_term(const std::string& text, const Env& env = Env{});

std::string pretty(const Term& t);
bool is_ccsf(const Term& t);
bool can_ok(const Term& t, const Env& env);
std::set<Action> actions_of(const Term& t, const Env& env);
// Prefix depth, counting tau prefixes; constants count as leaves.
int depth(const Term& t);
Action fresh_action(const std::vector<Term>& terms, const Env& env);

}  // namespace ccswb
