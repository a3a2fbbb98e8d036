#pragma once

// Hand-built charts and witnesses used across the test suites: the two
// non-expressible charts, the three connect-through examples with their
// expected outcomes, and the six-vertex witness that collapses onto the
// running example in three steps.

#include "bbp/llee.hpp"

namespace bbp::fixtures {

struct LEdge {
    VertexId src;
    const char* act;
    VertexId tgt;
    unsigned level;
};

LabeledChart make_witness(VertexId start, std::optional<VertexId> tick,
                          const std::vector<LEdge>& edges);

// The two charts that are not bisimilar to any interpretation: the first
// has no sink and a cycle avoiding the start, the second is a double-exit
// graph with a sink.
Chart nonexpressible_no_sink();
Chart nonexpressible_double_exit();

// Connect-through example for condition C1: two isomorphic lassos hanging
// off a common root.  The witness, the pair the transformation uses, the
// expected result, and the pair whose naive connect-through breaks LEE.
struct TransFixture {
    LabeledChart witness;
    VertexId good_w1, good_w2;
    LabeledChart expected;  // transform output, up to labeled isomorphism
    VertexId bad_w1, bad_w2;
};

TransFixture trans1();
TransFixture trans2();
TransFixture trans3();

// The witness showing that the body-path side condition of C3 matters;
// collapses by a C2 step and then a C3 step.
LabeledChart trans3_chain_witness();

// Six-vertex witness whose collapse runs through one transformation of
// each kind and lands on a witness of the running example's chart.
LabeledChart six_vertex_witness();

}  // namespace bbp::fixtures
