// Small graph helpers shared by the semantic modules.
#pragma once

#include <algorithm>
#include <functional>
#include <vector>

namespace ccswb::detail {

struct Scc {
    std::vector<int> comp;
    std::vector<bool> cyclic;  // per state: lies on a cycle
};

// Iterative Tarjan over a successor function.
inline Scc tarjan(std::size_t n, const std::function<void(int, std::vector<int>&)>& succ) {
    std::vector<int> index(n, -1), low(n, 0);
    Scc out{std::vector<int>(n, -1), std::vector<bool>(n, false)};
    std::vector<bool> onstack(n, false);
    std::vector<int> stack;
    std::vector<std::vector<int>> adj(n);
    for (std::size_t s = 0; s < n; ++s) succ(static_cast<int>(s), adj[s]);
    int counter = 0, comps = 0;
    struct Frame {
        int v;
        std::size_t next;
    };
    for (std::size_t start = 0; start < n; ++start) {
        if (index[start] >= 0) continue;
        std::vector<Frame> call{{static_cast<int>(start), 0}};
        index[start] = low[start] = counter++;
        stack.push_back(static_cast<int>(start));
        onstack[start] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.next < adj[f.v].size()) {
                int w = adj[f.v][f.next++];
                if (index[w] < 0) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    onstack[w] = true;
                    call.push_back({w, 0});
                } else if (onstack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            int v = f.v;
            call.pop_back();
            if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
            if (low[v] == index[v]) {
                std::vector<int> members;
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    onstack[w] = false;
                    out.comp[w] = comps;
                    members.push_back(w);
                } while (w != v);
                ++comps;
                bool self = std::find(adj[v].begin(), adj[v].end(), v) != adj[v].end();
                if (members.size() > 1 || self)
                    for (auto m : members) out.cyclic[m] = true;
            }
        }
    }
    return out;
}

}  // namespace ccswb::detail
