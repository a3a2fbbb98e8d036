#pragma once

// The entry/body-labeled chart shared by the interpretation, LLEE and
// collapse modules.  Level 0 marks a body transition, levels >= 1 mark
// loop-entry transitions.

#include <utility>
#include <vector>

#include "bbp/chart.hpp"

namespace bbp {

struct LabeledChart {
    Chart chart;
    std::vector<unsigned> levels;  // aligned with chart.transitions()

    unsigned level_of(const Transition& t) const;
    bool is_entry(const Transition& t) const { return level_of(t) > 0; }

    // E(C^): the pairs <v, level> such that a level-entry departs from v.
    std::vector<std::pair<VertexId, unsigned>> entry_identifiers() const;

    // Entry transitions of the given level departing from v.
    std::vector<Transition> entries_at(VertexId v, unsigned level) const;
    std::vector<Transition> body_out(VertexId v) const;

    friend bool operator==(const LabeledChart& a, const LabeledChart& b) {
        return a.chart == b.chart && a.levels == b.levels;
    }
};

LabeledChart make_labeled(Chart c, std::vector<unsigned> levels);

}  // namespace bbp
