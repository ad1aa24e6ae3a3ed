#include "ioident/graph.hpp"

#include "ioident/errors.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace ioident {

namespace {

std::vector<std::vector<int>> adjacency(int n, const std::vector<std::pair<int, int>>& edges,
                                        bool reversed) {
    std::vector<std::vector<int>> adj(n + 1);
    for (const auto& [from, to] : edges) {
        if (reversed)
            adj[to].push_back(from);
        else
            adj[from].push_back(to);
    }
    for (auto& nb : adj) std::sort(nb.begin(), nb.end());
    return adj;
}

std::vector<bool> bfs_from(const std::vector<std::vector<int>>& adj, int start) {
    std::vector<bool> seen(adj.size(), false);
    std::deque<int> queue{start};
    seen[start] = true;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int w : adj[v])
            if (!seen[w]) {
                seen[w] = true;
                queue.push_back(w);
            }
    }
    return seen;
}

} // namespace

std::string ConditionReport::certificate() const {
    std::string out;
    auto append = [&](const char* tag) {
        if (!out.empty()) out += "+";
        out += tag;
    };
    if (thm1()) append("Thm1");
    if (thm2()) append("Thm2");
    if (thm3()) append("Thm3");
    return out.empty() ? "None" : out;
}

bool reachable(int n, const std::vector<std::pair<int, int>>& edges, int from,
               const std::set<int>& targets) {
    if (from < 1 || from > n) throw DimensionError("vertex out of range");
    std::vector<bool> seen = bfs_from(adjacency(n, edges, false), from);
    for (int t : targets)
        if (t >= 1 && t <= n && seen[t]) return true;
    return false;
}

ConditionReport condition_report(const CompartmentModel& cm) {
    ConditionReport r;
    r.single_output = cm.out_scale.size() == 1;
    r.has_input = !cm.in_scale.empty();

    std::vector<std::pair<int, int>> edges;
    edges.reserve(cm.edges.size());
    for (const auto& e : cm.edges) edges.emplace_back(e.from, e.to);

    std::set<int> leak_or_input;
    for (const auto& [v, sym] : cm.leaks) leak_or_input.insert(v);
    for (const auto& [v, sc] : cm.in_scale) leak_or_input.insert(v);
    bool all_reach = true;
    for (int v = 1; v <= cm.n; ++v) all_reach &= reachable(cm.n, edges, v, leak_or_input);
    r.all_reach_leak_or_input = all_reach;

    if (cm.n == 1) {
        r.strongly_connected = true; // one-vertex convention
    } else {
        std::vector<bool> fwd = bfs_from(adjacency(cm.n, edges, false), 1);
        std::vector<bool> bwd = bfs_from(adjacency(cm.n, edges, true), 1);
        bool sc = true;
        for (int v = 1; v <= cm.n; ++v) sc &= fwd[v] && bwd[v];
        r.strongly_connected = sc;
    }
    // strong connectivity with an input puts an input vertex on every path,
    // so the Thm2 condition must hold whenever the Thm3 one does
    if (r.thm3() && !r.thm2())
        throw InternalError("Thm3 conditions hold but the Thm2 condition failed");
    return r;
}

ConditionReport condition_report(const LinearModel& lm) {
    ConditionReport r;
    r.single_output = lm.m() == 1;
    return r;
}

ConditionReport condition_report(const Model& m) {
    return std::visit([](const auto& mm) { return condition_report(mm); }, m);
}

SpanningForest bfs_spanning_forest(int n, const std::vector<std::pair<int, int>>& edges,
                                   const std::set<int>& sources) {
    for (int s : sources)
        if (s < 1 || s > n) throw DimensionError("source vertex out of range");
    if (sources.empty()) throw DimensionError("empty source set");

    std::vector<std::vector<int>> rev = adjacency(n, edges, true);
    std::vector<int> tree_of(n + 1, 0);
    std::map<int, std::vector<int>> tree_members; // source -> vertices in discovery order
    SpanningForest forest;
    std::deque<int> queue;
    for (int s : sources) { // std::set iterates ascending
        tree_of[s] = s;
        tree_members[s].push_back(s);
        queue.push_back(s);
    }
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int w : rev[v]) {
            if (tree_of[w] != 0) continue;
            tree_of[w] = tree_of[v];
            tree_members[tree_of[v]].push_back(w);
            forest.edges.emplace_back(w, v); // original edge w -> v survives
            queue.push_back(w);
        }
    }
    for (int v = 1; v <= n; ++v)
        if (tree_of[v] == 0)
            throw SemanticError("vertex " + std::to_string(v) +
                                " cannot reach any leak or input vertex");

    forest.relabel.assign(n + 1, 0);
    int next = 1;
    for (const auto& [src, members] : tree_members)
        for (int v : members) forest.relabel[v] = next++;
    return forest;
}

} // namespace ioident
