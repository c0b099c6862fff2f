#include "ccswb/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace ccswb {

ParseError::ParseError(const std::string& msg, int line, int col)
    : Error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
      detail_(msg),
      line_(line),
      col_(col) {}

bool valid_action_name(const std::string& name) {
    if (name.empty() || !std::islower(static_cast<unsigned char>(name[0]))) return false;
    for (char c : name) {
        auto u = static_cast<unsigned char>(c);
        if (!(std::islower(u) || std::isdigit(u) || c == '_')) return false;
    }
    return name != "tau" && name != "div";
}

std::string Label::str() const {
    switch (kind) {
        case Kind::Tau: return "tau";
        case Kind::Ok: return "ok";
        case Kind::Visible: return action.str();
    }
    return "?";
}

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::shared_ptr<const TermNode> make_node(TermKind k, std::optional<Action> g, std::string name,
                                          std::vector<Term> kids) {
    auto n = std::make_shared<TermNode>();
    n->kind = k;
    n->guard = std::move(g);
    n->name = std::move(name);
    n->kids = std::move(kids);
    std::size_t h = static_cast<std::size_t>(k) * 1315423911u;
    if (n->guard) {
        h = mix(h, std::hash<std::string>{}(n->guard->name));
        h = mix(h, n->guard->co ? 7 : 3);
    }
    if (!n->name.empty()) h = mix(h, std::hash<std::string>{}(n->name));
    for (const auto& kid : n->kids) h = mix(h, kid.hash());
    n->hash = h;
    return n;
}

const Term& shared_nil() {
    static const Term t = Term::nil();
    return t;
}

}  // namespace

Term::Term() : node_(shared_nil().node_) {}

Term Term::nil() {
    static const std::shared_ptr<const TermNode> n = make_node(TermKind::Nil, {}, {}, {});
    return Term(n);
}

Term Term::unit() {
    static const std::shared_ptr<const TermNode> n = make_node(TermKind::Unit, {}, {}, {});
    return Term(n);
}

Term Term::div() {
    static const std::shared_ptr<const TermNode> n = make_node(TermKind::Div, {}, {}, {});
    return Term(n);
}

Term Term::constant(const std::string& name) { return Term(make_node(TermKind::Const, {}, name, {})); }

Term Term::prefix(std::optional<Action> guard, Term body) {
    return Term(make_node(TermKind::Prefix, std::move(guard), {}, {std::move(body)}));
}

Term Term::sum(std::vector<Term> summands) {
    std::vector<Term> flat;
    for (auto& s : summands) {
        if (s.kind() == TermKind::Sum) {
            for (const auto& k : s.summands()) flat.push_back(k);
        } else if (s.kind() != TermKind::Nil) {
            flat.push_back(std::move(s));
        }
    }
    std::sort(flat.begin(), flat.end());
    flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
    if (flat.empty()) return nil();
    if (flat.size() == 1) return flat.front();
    return Term(make_node(TermKind::Sum, {}, {}, std::move(flat)));
}

Term Term::internal_choice(Term l, Term r) { return sum({tau(std::move(l)), tau(std::move(r))}); }

bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    if (a.hash() != b.hash()) return false;
    return (a <=> b) == std::strong_ordering::equal;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    const TermNode& x = *a.node_;
    const TermNode& y = *b.node_;
    if (auto c = x.kind <=> y.kind; c != 0) return c;
    if (auto c = x.guard <=> y.guard; c != 0) return c;
    if (auto c = x.name <=> y.name; c != 0) return c;
    std::size_t n = std::min(x.kids.size(), y.kids.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (auto c = x.kids[i] <=> y.kids[i]; c != 0) return c;
    }
    return x.kids.size() <=> y.kids.size();
}

std::vector<Term> summands_of(const Term& t) {
    if (t.kind() == TermKind::Sum) return t.summands();
    if (t.kind() == TermKind::Nil) return {};
    return {t};
}

const Term& Env::body(const std::string& name) const {
    auto it = defs_.find(name);
    if (it == defs_.end()) throw Error("unbound constant " + name);
    return it->second;
}

Term Env::query(const std::string& name) const {
    if (recursive(name)) return Term::constant(name);
    return body(name);
}

void Env::define(const std::string& name, Term body, bool recursive) {
    if (!defs_.count(name)) order_.push_back(name);
    defs_[name] = std::move(body);
    if (recursive) recursive_.insert(name);
    else recursive_.erase(name);
}

// ---------------------------------------------------------------- parsing

namespace {

enum class Tok { Def, Name, Act, Tau, Div, Zero, One, Dot, Plus, IChoice, LParen, RParen, Tilde, Eq, End };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int col;
};

std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        int l = line, cl = col;
        auto single = [&](Tok k) {
            out.push_back({k, std::string(1, c), l, cl});
            advance(1);
        };
        if (c == '(' && src.compare(i, 3, "(+)") == 0) {
            out.push_back({Tok::IChoice, "(+)", l, cl});
            advance(3);
            continue;
        }
        switch (c) {
            case '.': single(Tok::Dot); continue;
            case '+': single(Tok::Plus); continue;
            case '(': single(Tok::LParen); continue;
            case ')': single(Tok::RParen); continue;
            case '~': single(Tok::Tilde); continue;
            case '=': single(Tok::Eq); continue;
            case '0': single(Tok::Zero); continue;
            case '1': single(Tok::One); continue;
            default: break;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
                ++j;
            std::string word = src.substr(i, j - i);
            Tok k;
            if (word == "def") k = Tok::Def;
            else if (word == "tau") k = Tok::Tau;
            else if (word == "div") k = Tok::Div;
            else if (std::isupper(static_cast<unsigned char>(word[0]))) k = Tok::Name;
            else if (valid_action_name(word)) k = Tok::Act;
            else throw ParseError("invalid identifier '" + word + "'", l, cl);
            out.push_back({k, word, l, cl});
            advance(j - i);
            continue;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", l, cl);
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

struct NameRef {
    std::string name;
    int line;
    int col;
};

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    const Token& peek() const { return toks_[pos_]; }
    Token take() { return toks_[pos_++]; }
    bool at(Tok k) const { return peek().kind == k; }

    Token expect(Tok k, const char* what) {
        if (!at(k)) fail(std::string("expected ") + what);
        return take();
    }

    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = peek();
        std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
        throw ParseError(msg + ", found " + found, t.line, t.col);
    }

    Term term() {
        std::vector<Term> parts{choice()};
        while (at(Tok::Plus)) {
            take();
            parts.push_back(choice());
        }
        return parts.size() == 1 ? parts.front() : Term::sum(std::move(parts));
    }

    Term choice() {
        Term t = prefixed();
        while (at(Tok::IChoice)) {
            take();
            t = Term::internal_choice(t, prefixed());
        }
        return t;
    }

    Term prefixed() {
        if (at(Tok::Tau)) {
            take();
            expect(Tok::Dot, "'.' after tau");
            return Term::tau(prefixed());
        }
        if (at(Tok::Act) || at(Tok::Tilde)) {
            bool co = false;
            if (at(Tok::Tilde)) {
                take();
                co = true;
            }
            Token a = expect(Tok::Act, "action name");
            expect(Tok::Dot, "'.' after action");
            return Term::act(Action{a.text, co}, prefixed());
        }
        return atom();
    }

    Term atom() {
        switch (peek().kind) {
            case Tok::Zero: take(); return Term::nil();
            case Tok::One: take(); return Term::unit();
            case Tok::Div: take(); return Term::div();
            case Tok::Name: {
                Token n = take();
                if (n.text == "Div") return Term::div();
                refs_.push_back({n.text, n.line, n.col});
                return Term::constant(n.text);
            }
            case Tok::LParen: {
                take();
                Term t = term();
                expect(Tok::RParen, "')'");
                return t;
            }
            default: fail("expected a term");
        }
    }

    std::vector<NameRef>& refs() { return refs_; }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::vector<NameRef> refs_;
};

// Names reachable from t without passing through a prefix.
void unguarded_names(const Term& t, std::set<std::string>& out) {
    switch (t.kind()) {
        case TermKind::Const: out.insert(t.name()); break;
        case TermKind::Sum:
            for (const auto& s : t.summands()) unguarded_names(s, out);
            break;
        default: break;
    }
}

void all_names(const Term& t, std::set<std::string>& out) {
    switch (t.kind()) {
        case TermKind::Const: out.insert(t.name()); break;
        case TermKind::Prefix: all_names(t.body(), out); break;
        case TermKind::Sum:
            for (const auto& s : t.summands()) all_names(s, out);
            break;
        default: break;
    }
}

Term substitute(const Term& t, const std::map<std::string, Term>& inl) {
    switch (t.kind()) {
        case TermKind::Const: {
            auto it = inl.find(t.name());
            return it == inl.end() ? t : it->second;
        }
        case TermKind::Prefix: return Term::prefix(t.guard(), substitute(t.body(), inl));
        case TermKind::Sum: {
            std::vector<Term> parts;
            for (const auto& s : t.summands()) parts.push_back(substitute(s, inl));
            return Term::sum(std::move(parts));
        }
        default: return t;
    }
}

// Reachability closure over a name graph.
std::set<std::string> reach(const std::string& from, const std::map<std::string, std::set<std::string>>& g) {
    std::set<std::string> seen;
    std::vector<std::string> stack{from};
    while (!stack.empty()) {
        auto n = stack.back();
        stack.pop_back();
        auto it = g.find(n);
        if (it == g.end()) continue;
        for (const auto& m : it->second) {
            if (seen.insert(m).second) stack.push_back(m);
        }
    }
    return seen;
}

}  // namespace

Program parse_program(const std::string& text) {
    Parser p(lex(text));
    struct Raw {
        std::string name;
        Term body;
        int line;
        int col;
    };
    std::vector<Raw> raws;
    std::map<std::string, std::size_t> index;
    while (!p.at(Tok::End)) {
        p.expect(Tok::Def, "'def'");
        Token n = p.expect(Tok::Name, "definition name");
        if (n.text == "Div") throw ParseError("Div is reserved", n.line, n.col);
        if (index.count(n.text)) throw ParseError("duplicate definition of " + n.text, n.line, n.col);
        p.expect(Tok::Eq, "'='");
        Term body = p.term();
        if (!p.at(Tok::End) && !p.at(Tok::Def)) p.fail("expected end of definition");
        index[n.text] = raws.size();
        raws.push_back({n.text, body, n.line, n.col});
    }
    for (const auto& r : p.refs()) {
        if (!index.count(r.name)) throw ParseError("unbound constant " + r.name, r.line, r.col);
    }

    std::map<std::string, std::set<std::string>> uses, unguarded;
    for (const auto& r : raws) {
        all_names(r.body, uses[r.name]);
        unguarded_names(r.body, unguarded[r.name]);
    }
    std::set<std::string> recursive;
    for (const auto& r : raws) {
        if (reach(r.name, uses).count(r.name)) recursive.insert(r.name);
        if (reach(r.name, unguarded).count(r.name))
            throw ParseError("unguarded recursion in " + r.name, r.line, r.col);
    }

    // Inline non-recursive names bottom-up; each pass resolves one more layer.
    std::map<std::string, Term> inl;
    std::vector<std::string> pending;
    for (const auto& r : raws)
        if (!recursive.count(r.name)) pending.push_back(r.name);
    while (!pending.empty()) {
        std::vector<std::string> next;
        for (const auto& n : pending) {
            std::set<std::string> deps;
            all_names(raws[index[n]].body, deps);
            bool ready = true;
            for (const auto& d : deps)
                if (!recursive.count(d) && !inl.count(d)) ready = false;
            if (ready) inl[n] = substitute(raws[index[n]].body, inl);
            else next.push_back(n);
        }
        pending.swap(next);
    }

    Program prog;
    for (const auto& r : raws) {
        bool rec = recursive.count(r.name) != 0;
        Term body = rec ? substitute(r.body, inl) : inl[r.name];
        prog.env.define(r.name, body, rec);
    }
    for (const auto& r : raws) prog.defs.emplace_back(r.name, prog.env.query(r.name));
    return prog;
}

Term parse_term(const std::string& text, const Env& env) {
    Parser p(lex(text));
    Term t = p.term();
    if (!p.at(Tok::End)) p.fail("expected end of term");
    std::map<std::string, Term> inl;
    for (const auto& r : p.refs()) {
        if (!env.has(r.name)) throw ParseError("unbound constant " + r.name, r.line, r.col);
        inl[r.name] = env.query(r.name);
    }
    return substitute(t, inl);
}

// ---------------------------------------------------------------- queries

namespace {

std::string pretty_prec(const Term& t, bool under_prefix) {
    switch (t.kind()) {
        case TermKind::Nil: return "0";
        case TermKind::Unit: return "1";
        case TermKind::Div: return "div";
        case TermKind::Const: return t.name();
        case TermKind::Prefix: {
            std::string g = t.guard() ? t.guard()->str() : "tau";
            return g + "." + pretty_prec(t.body(), true);
        }
        case TermKind::Sum: {
            std::string s;
            for (const auto& k : t.summands()) {
                if (!s.empty()) s += " + ";
                s += pretty_prec(k, false);
            }
            return under_prefix ? "(" + s + ")" : s;
        }
    }
    return "?";
}

}  // namespace

std::string pretty(const Term& t) { return pretty_prec(t, false); }

bool is_ccsf(const Term& t) {
    switch (t.kind()) {
        case TermKind::Const: return false;
        case TermKind::Prefix: return is_ccsf(t.body());
        case TermKind::Sum:
            return std::all_of(t.summands().begin(), t.summands().end(),
                               [](const Term& s) { return is_ccsf(s); });
        default: return true;
    }
}

bool can_ok(const Term& t, const Env& env) {
    switch (t.kind()) {
        case TermKind::Unit: return true;
        case TermKind::Const: return can_ok(env.body(t.name()), env);
        case TermKind::Sum:
            return std::any_of(t.summands().begin(), t.summands().end(),
                               [&](const Term& s) { return can_ok(s, env); });
        default: return false;
    }
}

std::set<Action> actions_of(const Term& t, const Env& env) {
    std::set<Action> out;
    std::set<std::string> seen;
    std::function<void(const Term&)> go = [&](const Term& u) {
        switch (u.kind()) {
            case TermKind::Prefix:
                if (u.guard()) out.insert(*u.guard());
                go(u.body());
                break;
            case TermKind::Sum:
                for (const auto& s : u.summands()) go(s);
                break;
            case TermKind::Const:
                if (seen.insert(u.name()).second) go(env.body(u.name()));
                break;
            default: break;
        }
    };
    go(t);
    return out;
}

int depth(const Term& t) {
    switch (t.kind()) {
        case TermKind::Prefix: return 1 + depth(t.body());
        case TermKind::Sum: {
            int d = 0;
            for (const auto& s : t.summands()) d = std::max(d, depth(s));
            return d;
        }
        default: return 0;
    }
}

Action fresh_action(const std::vector<Term>& terms, const Env& env) {
    std::set<std::string> used;
    for (const auto& t : terms)
        for (const auto& a : actions_of(t, env)) used.insert(a.name);
    for (int i = 0;; ++i) {
        std::string n = "f" + std::to_string(i);
        if (!used.count(n)) return Action{n, false};
    }
}

}  // namespace ccswb
