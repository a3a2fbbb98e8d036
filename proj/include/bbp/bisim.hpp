#pragma once

// Bisimulations between charts: the greatest bisimulation via partition
// refinement, clause-by-clause verification, functional-bisimulation
// recognition, the naive quotient collapse used as an oracle, and chart
// isomorphism.

#include <map>
#include <optional>
#include <set>
#include <utility>

#include "bbp/chart.hpp"
#include "bbp/llee_types.hpp"

namespace bbp {

struct Bisimulation {
    std::set<std::pair<VertexId, VertexId>> pairs;  // (vertex of c1, vertex of c2)
};

// Largest bisimulation between c1 and c2 if they are bisimilar.  Computed
// as the stable partition of the disjoint union (Kanellakis-Smolka
// splitting), restricted to cross pairs.
std::optional<Bisimulation> largest_bisimulation(const Chart& c1, const Chart& c2);

// Largest self-bisimulation equivalence, as vertex -> class representative.
std::map<VertexId, VertexId> bisimilarity_classes(const Chart& c);

bool verify_bisimulation(const Chart& c1, const Chart& c2, const Bisimulation& b);

bool is_functional(const Bisimulation& b, const Chart& c1, const Chart& c2);

// Extracts the function when the bisimulation is functional.
std::optional<std::map<VertexId, VertexId>> functional_map(const Bisimulation& b, const Chart& c1,
                                                           const Chart& c2);

// Quotient by the largest self-bisimulation; the returned map sends each
// vertex to its class representative in the result.
std::pair<Chart, std::map<VertexId, VertexId>> quotient_collapse(const Chart& c);

// Start-, sink- and action-preserving digraph isomorphism.
std::optional<std::map<VertexId, VertexId>> isomorphic(const Chart& c1, const Chart& c2);
// Additionally preserves marking labels.
std::optional<std::map<VertexId, VertexId>> isomorphic_labeled(const LabeledChart& a,
                                                               const LabeledChart& b);

}  // namespace bbp
