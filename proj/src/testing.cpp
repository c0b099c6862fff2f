#include "ccswb/testing.hpp"
#include "graph.hpp"

#include <algorithm>
#include <deque>

namespace ccswb {

namespace {

template <typename F>
void product_moves(const Lts& l, const Lts& r, StateId i, StateId j, F&& emit) {
    for (const auto& e : l.edges(i))
        if (e.kind == Label::Kind::Tau) emit(e.target, j);
    for (const auto& e : r.edges(j))
        if (e.kind == Label::Kind::Tau) emit(i, e.target);
    for (const auto& e : l.edges(i)) {
        if (e.kind != Label::Kind::Visible) continue;
        ActionId want = co_id(e.action);
        for (const auto& f : r.edges(j))
            if (f.kind == Label::Kind::Visible && f.action == want) emit(e.target, f.target);
    }
}

}  // namespace

Product compose(const LtsPtr& left, const LtsPtr& right) {
    Product p{left, right, {}, {}};
    std::size_t nr = right->size();
    std::vector<int> index(left->size() * nr, -1);
    auto id_of = [&](StateId i, StateId j) {
        int& slot = index[static_cast<std::size_t>(i) * nr + j];
        if (slot < 0) {
            slot = static_cast<int>(p.states.size());
            p.states.push_back({i, j});
            p.succ.emplace_back();
        }
        return slot;
    };
    id_of(left->root(), right->root());
    for (std::size_t k = 0; k < p.states.size(); ++k) {
        auto [i, j] = p.states[k];
        std::vector<int> out;
        product_moves(*left, *right, i, j, [&](StateId a, StateId b) { out.push_back(id_of(a, b)); });
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        p.succ[k] = std::move(out);
    }
    return p;
}

MustVerdict must(const Lts& p, const Lts& r) {
    if (r.can_ok(r.root())) return {true, std::nullopt};
    // Breadth-first exploration of the region where the client has not yet
    // succeeded. Ids index `region`; parent gives shortest paths.
    std::size_t nr = r.size();
    std::vector<int> index(p.size() * nr, -1);
    std::vector<ProductState> region;
    std::vector<int> parent;
    std::vector<std::vector<int>> succ;
    auto visit = [&](StateId i, StateId j, int from) {
        int& slot = index[static_cast<std::size_t>(i) * nr + j];
        if (slot < 0) {
            slot = static_cast<int>(region.size());
            region.push_back({i, j});
            parent.push_back(from);
            succ.emplace_back();
        }
        return slot;
    };
    visit(p.root(), r.root(), -1);
    int stuck = -1;
    for (std::size_t k = 0; k < region.size(); ++k) {
        auto [i, j] = region[k];
        bool moves = false;
        std::vector<int> out;
        product_moves(p, r, i, j, [&](StateId a, StateId b) {
            moves = true;
            if (!r.can_ok(b)) out.push_back(visit(a, b, static_cast<int>(k)));
        });
        succ[k] = std::move(out);
        if (!moves) {
            stuck = static_cast<int>(k);
            break;
        }
    }
    auto path_to = [&](int k) {
        std::vector<ProductState> path;
        for (int c = k; c >= 0; c = parent[c]) path.push_back(region[c]);
        std::reverse(path.begin(), path.end());
        return path;
    };
    if (stuck >= 0) return {false, Evidence{EvidenceShape::DeadlockEnd, path_to(stuck), std::nullopt}};

    // Lasso: the earliest discovered state on a cycle, then a shortest way
    // back to it.
    std::size_t n = region.size();
    detail::Scc scc = detail::tarjan(n, [&](int s, std::vector<int>& out) {
        out.insert(out.end(), succ[s].begin(), succ[s].end());
    });
    for (std::size_t k = 0; k < n; ++k) {
        if (!scc.cyclic[k]) continue;
        std::vector<int> back(n, -2);
        std::deque<int> q;
        for (int s : succ[k])
            if (back[s] == -2) {
                back[s] = static_cast<int>(k);
                q.push_back(s);
            }
        while (!q.empty() && back[k] == -2) {
            int u = q.front();
            q.pop_front();
            for (int s : succ[u])
                if (back[s] == -2) {
                    back[s] = u;
                    q.push_back(s);
                }
        }
        std::vector<ProductState> states = path_to(static_cast<int>(k));
        std::size_t loop_start = states.size() - 1;
        std::vector<ProductState> loop;
        for (int c = back[k]; c != static_cast<int>(k); c = back[c]) loop.push_back(region[c]);
        std::reverse(loop.begin(), loop.end());
        states.insert(states.end(), loop.begin(), loop.end());
        return {false, Evidence{EvidenceShape::Lasso, states, loop_start}};
    }
    return {true, std::nullopt};
}

MustVerdict must(const Term& p, const Term& r, const Env& env) {
    return must(*build_lts(p, env), *build_lts(r, env));
}

MustScVerdict must_sc(const Lts& p, const Lts& r) {
    MustVerdict a = must(p, r);
    if (!a.holds) return {false, a.evidence, Side::Left};
    MustVerdict b = must(r, p);
    if (!b.holds) {
        Evidence e = *b.evidence;
        for (auto& s : e.states) std::swap(s.left, s.right);
        return {false, e, Side::Right};
    }
    return {true, std::nullopt, std::nullopt};
}

MustScVerdict must_sc(const Term& p, const Term& r, const Env& env) {
    return must_sc(*build_lts(p, env), *build_lts(r, env));
}

std::vector<Computation> enumerate_computations(const Lts& p, const Lts& r, std::size_t bound) {
    // Shares nothing with the region search above: the full product is built
    // and every maximal path is listed.
    auto pl = std::make_shared<Lts>(p);
    auto rl = std::make_shared<Lts>(r);
    Product prod = compose(pl, rl);
    std::size_t n = prod.states.size();
    std::vector<int> colour(n, 0);
    std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
    colour[0] = 1;
    while (!stack.empty()) {
        auto& [v, next] = stack.back();
        if (next < prod.succ[v].size()) {
            int w = prod.succ[v][next++];
            if (colour[w] == 1) throw NotAcyclic();
            if (colour[w] == 0) {
                colour[w] = 1;
                stack.push_back({w, 0});
            }
        } else {
            colour[v] = 2;
            stack.pop_back();
        }
    }

    std::vector<Computation> out;
    std::vector<int> path{0};
    std::vector<std::size_t> next{0};
    while (!path.empty()) {
        int v = path.back();
        if (prod.succ[v].empty()) {
            Computation c{{}, false};
            for (int s : path) {
                c.states.push_back(prod.states[s]);
                if (prod.right_ok(s)) c.successful = true;
            }
            out.push_back(std::move(c));
            if (out.size() > bound) throw BoundExceeded(bound);
            path.pop_back();
            next.pop_back();
            continue;
        }
        if (next.back() < prod.succ[v].size()) {
            int w = prod.succ[v][next.back()++];
            path.push_back(w);
            next.push_back(0);
        } else {
            path.pop_back();
            next.pop_back();
        }
    }
    return out;
}

void write_dot(std::ostream& os, const Product& prod) {
    auto esc = [](const std::string& s) {
        std::string o;
        for (char c : s) {
            if (c == '"' || c == '\\') o += '\\';
            o += c;
        }
        return o;
    };
    os << "digraph product {\n  rankdir=LR;\n";
    for (std::size_t i = 0; i < prod.states.size(); ++i) {
        const auto& s = prod.states[i];
        os << "  s" << i << " [label=\"" << esc(pretty(prod.left->term(s.left)) + " || " + pretty(prod.right->term(s.right)))
           << "\"" << (prod.right_ok(static_cast<int>(i)) ? ", shape=doublecircle" : ", shape=circle") << "];\n";
    }
    for (std::size_t i = 0; i < prod.succ.size(); ++i)
        for (int j : prod.succ[i]) os << "  s" << i << " -> s" << j << " [label=\"tau\"];\n";
    os << "}\n";
}

std::string describe(const Evidence& e, const Lts& left, const Lts& right) {
    std::string out = e.shape == EvidenceShape::Lasso ? "lasso:" : "deadlock:";
    for (std::size_t k = 0; k < e.states.size(); ++k) {
        out += "\n  ";
        if (e.loop_start && *e.loop_start == k) out += "* ";
        out += pretty(left.term(e.states[k].left)) + " || " + pretty(right.term(e.states[k].right));
    }
    return out;
}

}  // namespace ccswb
