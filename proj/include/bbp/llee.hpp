#pragma once

// Loop charts, the loop elimination procedure, LLEE-witness checking and
// the derived loops-back relations and norms.

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bbp/chart.hpp"
#include "bbp/llee_types.hpp"

namespace bbp {

enum class LoopCond { L1, L2, L3 };

struct LoopCheck {
    bool ok = true;
    std::optional<LoopCond> failed;  // first failing condition
};

// L1: an infinite path from the start exists; L2: every cycle passes the
// start vertex; L3: the sink is absent.
LoopCheck is_loop_chart(const Chart& c);

// How the unlabeled elimination procedure picks loop subcharts.
enum class EliminationStrategy {
    Eager,        // vertices ascending, largest valid entry set first
    Lazy,         // vertices descending, smallest sets first, canonical order
    LazyReverse,  // vertices descending, smallest sets first, reverse order
};

struct EliminationStep {
    VertexId vertex;
    std::set<Transition> entries;
    unsigned step;  // 1-based
};

struct EliminationResult {
    bool lee = false;
    // Original chart with each removed transition labeled by its step
    // number; transitions of the residue (and garbage-collected ones)
    // carry 0.
    LabeledChart witness;
    std::vector<EliminationStep> trace;
    std::string diagnosis;  // set when lee is false
};

EliminationResult loop_elimination(const Chart& c,
                                   EliminationStrategy strategy = EliminationStrategy::Eager);

// Witness-guided elimination: repeatedly removes the entry identifier
// <v, level> with minimal level (then minimal vertex).
EliminationResult loop_elimination_guided(const LabeledChart& lc);

enum class ViolationKind { W1, W2aL1, W2aL2, W2aL3, W2b };

struct Violation {
    ViolationKind kind;
    VertexId vertex;    // the entry identifier's vertex (or a W1 cycle vertex)
    unsigned level;     // the entry identifier's level (0 for W1)
    std::string detail;
};

struct WitnessReport {
    bool ok = true;
    std::vector<Violation> violations;
};

// The loop subchart C^[v,level] generated by the level-entries at v:
// entry step first, then body transitions only, halting at v.
Chart loop_subchart_at(const LabeledChart& lc, VertexId v, unsigned level);

WitnessReport check_llee_witness(const LabeledChart& lc);

struct LoopRelations {
    std::set<std::pair<VertexId, VertexId>> body_step;
    // v descends in a loop to w at the given level.
    std::set<std::tuple<VertexId, unsigned, VertexId>> descends_level;
    std::set<std::pair<VertexId, VertexId>> descends;        // (v, w)
    std::set<std::pair<VertexId, VertexId>> loops_back;      // (w, v): w loops back to v
    std::set<std::pair<VertexId, VertexId>> direct_loops_back;
};

// Requires a valid witness.
LoopRelations relations(const LabeledChart& lc);

struct Norms {
    std::map<VertexId, unsigned> enl;   // entry step level
    std::map<VertexId, unsigned> bosn;  // body step norm
    std::map<VertexId, unsigned> lbsn;  // loops-back-to norm
};

Norms norms(const LabeledChart& lc);

}  // namespace bbp
