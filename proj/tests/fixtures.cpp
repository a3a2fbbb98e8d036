#include "fixtures.hpp"

namespace bbp::fixtures {

LabeledChart make_witness(VertexId start, std::optional<VertexId> tick,
                          const std::vector<LEdge>& edges) {
    RawChart r;
    r.start = start;
    r.tick = tick;
    r.vertices.insert(start);
    if (tick) r.vertices.insert(*tick);
    std::map<Transition, unsigned> level;
    for (const LEdge& e : edges) {
        Transition t{e.src, Action{e.act}, e.tgt};
        r.vertices.insert(e.src);
        r.vertices.insert(e.tgt);
        r.transitions.insert(t);
        level[t] = e.level;
    }
    Chart c = Chart::make(std::move(r));
    std::vector<unsigned> levels;
    for (const Transition& t : c.transitions()) levels.push_back(level.at(t));
    return LabeledChart{std::move(c), std::move(levels)};
}

Chart nonexpressible_no_sink() {
    return make_witness(0, std::nullopt,
                        {{0, "a", 1, 0},
                         {0, "b", 2, 0},
                         {1, "a", 0, 0},
                         {1, "c", 2, 0},
                         {2, "a", 0, 0},
                         {2, "a", 1, 0}})
        .chart;
}

Chart nonexpressible_double_exit() {
    return make_witness(0, 2, {{0, "a", 1, 0}, {1, "a", 0, 0}, {0, "b", 2, 0}, {1, "c", 2, 0}})
        .chart;
}

TransFixture trans1() {
    // 0 = root, 1/2 = loop vertices, 3/4 = loop bodies, 5/6 = tails, 7 = sink.
    LabeledChart witness = make_witness(0, 7,
                                        {{0, "r", 1, 0},
                                         {0, "r", 2, 0},
                                         {1, "a", 3, 2},
                                         {1, "t", 7, 0},
                                         {3, "b", 5, 0},
                                         {3, "c", 1, 0},
                                         {5, "d", 1, 0},
                                         {2, "a", 4, 1},
                                         {2, "t", 7, 0},
                                         {4, "b", 6, 0},
                                         {4, "c", 2, 0},
                                         {6, "d", 2, 0}});
    LabeledChart expected = make_witness(0, 7,
                                         {{0, "r", 2, 0},
                                          {2, "a", 4, 1},
                                          {2, "t", 7, 0},
                                          {4, "b", 6, 0},
                                          {4, "c", 2, 0},
                                          {6, "d", 2, 0}});
    return TransFixture{witness, 1, 2, expected, 5, 6};
}

TransFixture trans2() {
    // 0 = w1 (start), 1 = hat-w2, 2 = u, 3 = w2.
    LabeledChart witness = make_witness(0, std::nullopt,
                                        {{0, "a", 1, 2},
                                         {0, "a", 2, 2},
                                         {1, "b", 2, 1},
                                         {1, "c", 0, 0},
                                         {2, "c", 3, 0},
                                         {2, "b", 1, 0},
                                         {3, "a", 1, 0}});
    LabeledChart expected = make_witness(3, std::nullopt,
                                         {{1, "b", 2, 1},
                                          {1, "c", 3, 2},
                                          {2, "c", 3, 0},
                                          {2, "b", 1, 0},
                                          {3, "a", 1, 0}});
    return TransFixture{witness, 0, 3, expected, 3, 0};
}

TransFixture trans3() {
    // 0 = v (start), 1/2 = hat-w1/hat-w2, 3/4 = u1/u2, 5/6 = w1/w2.
    LabeledChart witness = make_witness(0, std::nullopt,
                                        {{0, "a", 1, 2},
                                         {0, "b", 3, 2},
                                         {0, "a", 2, 2},
                                         {0, "b", 4, 2},
                                         {1, "b", 3, 1},
                                         {1, "c", 0, 0},
                                         {3, "d", 5, 0},
                                         {3, "a", 1, 0},
                                         {5, "a", 1, 0},
                                         {2, "b", 4, 1},
                                         {2, "c", 0, 0},
                                         {4, "d", 6, 0},
                                         {4, "a", 2, 0},
                                         {6, "a", 2, 0}});
    LabeledChart expected = make_witness(0, std::nullopt,
                                         {{0, "b", 3, 2},
                                          {0, "a", 2, 2},
                                          {0, "b", 4, 2},
                                          {3, "d", 5, 0},
                                          {3, "a", 2, 0},
                                          {5, "a", 2, 0},
                                          {2, "b", 4, 1},
                                          {2, "c", 0, 0},
                                          {4, "d", 6, 0},
                                          {4, "a", 2, 0},
                                          {6, "a", 2, 0}});
    return TransFixture{witness, 1, 2, expected, 5, 6};
}

LabeledChart trans3_chain_witness() {
    // 0 = v (start), 1 = hat-w2, 2 = u, 3 = w1, 4 = w2.
    return make_witness(0, std::nullopt,
                        {{0, "a", 1, 2},
                         {0, "b", 2, 2},
                         {0, "c", 4, 2},
                         {1, "b", 2, 0},
                         {1, "c", 4, 1},
                         {1, "a", 0, 0},
                         {2, "d", 3, 0},
                         {2, "e", 0, 0},
                         {3, "f", 0, 0},
                         {4, "f", 1, 0}});
}

LabeledChart six_vertex_witness() {
    // Three bisimilarity classes {0,3,5}, {1,4}, {2}; collapses onto the
    // three-vertex chart of the running example.
    return make_witness(0, std::nullopt,
                        {{0, "a", 1, 0},
                         {1, "a", 2, 3},
                         {1, "c", 3, 3},
                         {2, "b", 1, 0},
                         {2, "b", 3, 2},
                         {3, "a", 4, 0},
                         {4, "a", 2, 0},
                         {4, "c", 5, 1},
                         {5, "a", 4, 0}});
}

}  // namespace bbp::fixtures
