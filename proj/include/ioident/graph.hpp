#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ioident/model.hpp"

namespace ioident {

// Which of the three structural theorem gates a model satisfies. The graph
// conditions only make sense for compartment models; for a general linear
// model they are reported as not-applicable (nullopt).
struct ConditionReport {
    bool single_output = false;
    std::optional<bool> all_reach_leak_or_input; // every vertex reaches Leak ∪ In
    std::optional<bool> strongly_connected;
    std::optional<bool> has_input;

    bool thm1() const { return single_output; }
    bool thm2() const { return all_reach_leak_or_input.value_or(false); }
    bool thm3() const { return strongly_connected.value_or(false) && has_input.value_or(false); }

    // "Thm1+Thm2+Thm3", "Thm1", ..., or "None"
    std::string certificate() const;
};

// true iff some target is reachable from `from` along directed edges
// (every vertex reaches itself). Vertices are 1-based.
bool reachable(int n, const std::vector<std::pair<int, int>>& edges, int from,
               const std::set<int>& targets);

ConditionReport condition_report(const CompartmentModel& cm);
ConditionReport condition_report(const LinearModel& lm);
ConditionReport condition_report(const Model& m);

// Spanning forest rooted at the sources: every vertex keeps exactly one
// outgoing edge of its unique forest path toward a source. The relabeling
// (trees in ascending-source order, vertices in discovery order within a
// tree) makes the pruned compartment matrix upper triangular.
struct SpanningForest {
    std::vector<std::pair<int, int>> edges; // (child, parent), original orientation
    std::vector<int> relabel;               // index v (1-based) -> new label; [0] unused
};

// Multi-source breadth-first search along reversed edges. Throws
// SemanticError naming a vertex that cannot reach any source.
SpanningForest bfs_spanning_forest(int n, const std::vector<std::pair<int, int>>& edges,
                                   const std::set<int>& sources);

} // namespace ioident
