#pragma once

// LLEE-preserving bisimulation collapse: connect-through, the pair
// conditions C1/C2/C3, the three transformations with their level
// adaptations and clean-up, and the driver that iterates them to the
// collapse.

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "bbp/bisim.hpp"
#include "bbp/chart.hpp"
#include "bbp/llee.hpp"

namespace bbp {

enum class PairKind { C1, C2, C3 };

struct PairCondition {
    PairKind kind;
    std::vector<VertexId> chain;  // C2: the loops-back chain from w2 down to w1
    VertexId pivot = 0;           // C3: the vertex both sides loop back to
};

// Redirects all incoming transitions of w1 over to w2 (deduplicating
// against existing transitions), moves the start if needed, and garbage
// collects.  The map sends w1 to w2 and survivors to themselves.
std::pair<Chart, std::map<VertexId, VertexId>> connect_through(const Chart& c, VertexId w1,
                                                               VertexId w2);

// Same redirection on an entry/body-labeling; redirected transitions
// inherit their marking label unless they collide with a transition that
// already existed, whose label wins.
LabeledChart connect_through_labeled(const LabeledChart& lc, VertexId w1, VertexId w2);

// Checks whether the (distinct, bisimilar) pair satisfies the named
// condition for this witness.
bool pair_satisfies(const LabeledChart& lc, const LoopRelations& rel, VertexId w1, VertexId w2,
                    PairKind kind, PairCondition* out = nullptr);

// Deterministic selection: C1 before C2 before C3, then the smallest
// (w1, w2) pair.  Empty when the chart is already collapsed.
std::optional<std::tuple<VertexId, VertexId, PairCondition>> find_collapsible_pair(
    const LabeledChart& lc);

// Constructive selection following the progression argument; used to
// cross-validate the exhaustive search.
std::optional<std::tuple<VertexId, VertexId, PairCondition>> find_collapsible_pair_constructive(
    const LabeledChart& lc);

// One transformation step (level adaptation, connect-through, clean-up).
LabeledChart transform(const LabeledChart& lc, VertexId w1, VertexId w2, const PairCondition& cond);

struct CollapseStep {
    unsigned step;  // 1-based
    VertexId w1, w2;
    PairKind kind;
    LabeledChart before, after;
};

using CollapseObserver = std::function<void(const CollapseStep&)>;

struct CollapseResult {
    LabeledChart witness;
    // Functional bisimulation from the input chart onto the collapse.
    std::map<VertexId, VertexId> map;
    std::vector<CollapseStep> steps;
};

enum class PairStrategy { Exhaustive, Constructive };

CollapseResult collapse_llee(const LabeledChart& lc,
                             PairStrategy strategy = PairStrategy::Exhaustive,
                             const CollapseObserver& observer = nullptr);

}  // namespace bbp
