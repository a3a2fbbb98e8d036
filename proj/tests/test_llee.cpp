#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bbp/gen.hpp"
#include "bbp/interp.hpp"
#include "bbp/llee.hpp"
#include "fixtures.hpp"

using namespace bbp;

namespace {

const char* kE0 = "a.((c.a + a.(b + b.a)) * 0)";

Transition t(VertexId s, const char* a, VertexId g) { return {s, Action{a}, g}; }

}  // namespace

TEST_CASE("loop chart conditions on the non-expressible charts") {
    // The sink-free chart has a cycle avoiding the start: L2 fails.
    LoopCheck left = is_loop_chart(fixtures::nonexpressible_no_sink());
    CHECK_FALSE(left.ok);
    CHECK(left.failed == LoopCond::L2);

    // The double-exit chart contains the sink: L3 fails.
    LoopCheck right = is_loop_chart(fixtures::nonexpressible_double_exit());
    CHECK_FALSE(right.ok);
    CHECK(right.failed == LoopCond::L3);

    // A single vertex with a self-loop is a loop chart.
    Chart self = fixtures::make_witness(0, std::nullopt, {{0, "a", 0, 0}}).chart;
    CHECK(is_loop_chart(self).ok);

    // An acyclic chart fails L1.
    Chart line = fixtures::make_witness(0, std::nullopt, {{0, "a", 1, 0}}).chart;
    CHECK(is_loop_chart(line).failed == LoopCond::L1);
}

TEST_CASE("loop elimination on the running example, three recorded runs") {
    Chart c0 = interpret(parse_expr(kE0)).chart;

    SUBCASE("eager strategy removes both entries at once") {
        EliminationResult res = loop_elimination(c0, EliminationStrategy::Eager);
        CHECK(res.lee);
        REQUIRE(res.trace.size() == 1);
        CHECK(res.trace[0].vertex == 1);
        CHECK(res.trace[0].entries == std::set<Transition>{t(1, "a", 2), t(1, "c", 0)});
        CHECK(res.witness.level_of(t(1, "a", 2)) == 1);
        CHECK(res.witness.level_of(t(1, "c", 0)) == 1);
        CHECK(check_llee_witness(res.witness).ok);
    }
    SUBCASE("lazy strategy peels the a-entry first") {
        EliminationResult res = loop_elimination(c0, EliminationStrategy::Lazy);
        CHECK(res.lee);
        REQUIRE(res.trace.size() == 2);
        CHECK(res.trace[0].entries == std::set<Transition>{t(1, "a", 2)});
        CHECK(res.trace[1].entries == std::set<Transition>{t(1, "c", 0)});
        CHECK(res.witness.level_of(t(1, "a", 2)) == 1);
        CHECK(res.witness.level_of(t(1, "c", 0)) == 2);
        CHECK(check_llee_witness(res.witness).ok);
    }
    SUBCASE("reverse lazy strategy peels the c-entry first") {
        EliminationResult res = loop_elimination(c0, EliminationStrategy::LazyReverse);
        CHECK(res.lee);
        REQUIRE(res.trace.size() == 3);
        CHECK(res.trace[0].entries == std::set<Transition>{t(1, "c", 0)});
        CHECK(res.trace[1].entries == std::set<Transition>{t(2, "b", 1)});
        CHECK(res.trace[2].entries == std::set<Transition>{t(2, "b", 0)});
        CHECK(res.witness.level_of(t(1, "c", 0)) == 1);
        CHECK(res.witness.level_of(t(2, "b", 1)) == 2);
        CHECK(res.witness.level_of(t(2, "b", 0)) == 3);
        CHECK(check_llee_witness(res.witness).ok);
    }
}

TEST_CASE("the non-expressible charts stop immediately") {
    for (const Chart& c :
         {fixtures::nonexpressible_no_sink(), fixtures::nonexpressible_double_exit()}) {
        EliminationResult res = loop_elimination(c);
        CHECK_FALSE(res.lee);
        CHECK(res.trace.empty());
        CHECK(res.diagnosis == "no loop subchart");
    }
}

TEST_CASE("acyclic charts satisfy LEE with an empty trace") {
    Chart line = fixtures::make_witness(0, std::nullopt, {{0, "a", 1, 0}, {1, "b", 2, 0}}).chart;
    EliminationResult res = loop_elimination(line);
    CHECK(res.lee);
    CHECK(res.trace.empty());
}

TEST_CASE("guided elimination accepts the labeled interpretation") {
    LabeledInterpretation li = interpret_labeled(parse_expr(kE0));
    EliminationResult res = loop_elimination_guided(li.labeled);
    CHECK(res.lee);
    CHECK(res.trace.size() == 1);
}

TEST_CASE("witness checking on the two families of the running example") {
    // First family: both entries at the star vertex, any positive levels.
    for (unsigned alpha = 1; alpha <= 3; ++alpha)
        for (unsigned beta = 1; beta <= 3; ++beta) {
            LabeledChart lc = fixtures::make_witness(0, std::nullopt,
                                                     {{0, "a", 1, 0},
                                                      {1, "a", 2, beta},
                                                      {1, "c", 0, alpha},
                                                      {2, "b", 1, 0},
                                                      {2, "b", 0, 0}});
            CAPTURE(alpha);
            CAPTURE(beta);
            CHECK(check_llee_witness(lc).ok);
        }
    // Second family: gamma at the star vertex, delta/eps at the third;
    // layered exactly when gamma < delta and gamma < eps.
    for (unsigned gamma = 1; gamma <= 3; ++gamma)
        for (unsigned delta = 1; delta <= 3; ++delta)
            for (unsigned eps = 1; eps <= 3; ++eps) {
                LabeledChart lc = fixtures::make_witness(0, std::nullopt,
                                                         {{0, "a", 1, 0},
                                                          {1, "a", 2, 0},
                                                          {1, "c", 0, gamma},
                                                          {2, "b", 1, delta},
                                                          {2, "b", 0, eps}});
                CAPTURE(gamma);
                CAPTURE(delta);
                CAPTURE(eps);
                CHECK(check_llee_witness(lc).ok == (gamma < delta && gamma < eps));
            }
}

TEST_CASE("a non-layered labeling of the second family is flagged as W2b") {
    // gamma >= delta puts an entry of too-high level inside the loop at
    // the star vertex.
    LabeledChart lc = fixtures::make_witness(0, std::nullopt,
                                             {{0, "a", 1, 0},
                                              {1, "a", 2, 0},
                                              {1, "c", 0, 2},
                                              {2, "b", 1, 2},
                                              {2, "b", 0, 3}});
    WitnessReport rep = check_llee_witness(lc);
    REQUIRE_FALSE(rep.ok);
    bool has_w2b = false;
    for (const Violation& v : rep.violations) has_w2b |= v.kind == ViolationKind::W2b;
    CHECK(has_w2b);
}

TEST_CASE("exhaustive check: the witnesses of the running example form two families") {
    // All labelings with levels up to 3 on the five transitions; a
    // labeling passes iff it is one of the two displayed forms.
    Chart c0 = interpret(parse_expr(kE0)).chart;
    const auto& ts = c0.transitions();  // (0,a,1) (1,a,2) (1,c,0) (2,b,0) (2,b,1)
    REQUIRE(ts.size() == 5);
    unsigned valid = 0;
    std::vector<unsigned> lv(5, 0);
    for (lv[0] = 0; lv[0] <= 3; ++lv[0])
        for (lv[1] = 0; lv[1] <= 3; ++lv[1])
            for (lv[2] = 0; lv[2] <= 3; ++lv[2])
                for (lv[3] = 0; lv[3] <= 3; ++lv[3])
                    for (lv[4] = 0; lv[4] <= 3; ++lv[4]) {
                        bool family_a = lv[0] == 0 && lv[1] >= 1 && lv[2] >= 1 && lv[3] == 0 &&
                                        lv[4] == 0;
                        bool family_b = lv[0] == 0 && lv[1] == 0 && lv[2] >= 1 && lv[3] >= 1 &&
                                        lv[4] >= 1 && lv[2] < lv[3] && lv[2] < lv[4];
                        LabeledChart lc{c0, lv};
                        bool ok = check_llee_witness(lc).ok;
                        CAPTURE(lv[0]);
                        CAPTURE(lv[1]);
                        CAPTURE(lv[2]);
                        CAPTURE(lv[3]);
                        CAPTURE(lv[4]);
                        CHECK(ok == (family_a || family_b));
                        valid += ok;
                    }
    CHECK(valid > 0);
}

TEST_CASE("the all-body labeling of a cyclic chart violates W1") {
    Chart c0 = interpret(parse_expr(kE0)).chart;
    LabeledChart lc{c0, std::vector<unsigned>(c0.transitions().size(), 0)};
    WitnessReport rep = check_llee_witness(lc);
    CHECK_FALSE(rep.ok);
    REQUIRE_FALSE(rep.violations.empty());
    CHECK(rep.violations[0].kind == ViolationKind::W1);
}

TEST_CASE("relations of the running example witness") {
    LabeledInterpretation li = interpret_labeled(parse_expr(kE0));
    LoopRelations rel = relations(li.labeled);
    CHECK(rel.descends_level ==
          std::set<std::tuple<VertexId, unsigned, VertexId>>{{1, 1, 2}, {1, 1, 0}});
    CHECK(rel.loops_back == std::set<std::pair<VertexId, VertexId>>{{2, 1}, {0, 1}});
    CHECK(rel.direct_loops_back == rel.loops_back);
}

TEST_CASE("relations of the first companion witness") {
    LabeledInterpretation li = interpret_labeled(parse_expr("(a.((a.(b + b.a)) * c)) * 0"));
    LoopRelations rel = relations(li.labeled);
    // Vertices: 0 = start, 1 = inner star vertex, 2, 3 its loop body.
    // The outer loop's body halts right away (1 -c-> 0), so vertex 0
    // descends only to 1; vertices 2 and 3 sit in the level-1 loop.
    CHECK(rel.descends ==
          std::set<std::pair<VertexId, VertexId>>{{0, 1}, {1, 2}, {1, 3}});
    CHECK(rel.loops_back == std::set<std::pair<VertexId, VertexId>>{{1, 0}, {2, 1}, {3, 1}});
    CHECK(rel.direct_loops_back == rel.loops_back);
}

TEST_CASE("relations of an acyclic all-body witness are empty") {
    LabeledChart lc = fixtures::make_witness(0, std::nullopt, {{0, "a", 1, 0}, {1, "b", 2, 0}});
    LoopRelations rel = relations(lc);
    CHECK(rel.descends.empty());
    CHECK(rel.loops_back.empty());
    CHECK(rel.direct_loops_back.empty());
    CHECK(rel.body_step == std::set<std::pair<VertexId, VertexId>>{{0, 1}, {1, 2}});
}

TEST_CASE("norms of the running example witness") {
    LabeledInterpretation li = interpret_labeled(parse_expr(kE0));
    Norms nm = norms(li.labeled);
    CHECK(nm.enl.at(1) == 1);
    CHECK(nm.enl.at(0) == 0);
    CHECK(nm.enl.at(2) == 0);
    CHECK(nm.bosn.at(2) == 2);
    CHECK(nm.bosn.at(0) == 1);
    CHECK(nm.bosn.at(1) == 0);
}

TEST_CASE("a vertex without outgoing transitions has zero norms") {
    LabeledChart lc = fixtures::make_witness(0, std::nullopt, {{0, "a", 1, 0}});
    Norms nm = norms(lc);
    CHECK(nm.bosn.at(1) == 0);
    CHECK(nm.lbsn.at(1) == 0);
}

TEST_CASE("elimination succeeds on labeled interpretations of random expressions") {
    for (const ExprPtr& e : sample_exprs({31, 10, 3}, 80)) {
        CAPTURE(format_expr(e));
        CHECK(loop_elimination(interpret(e).chart).lee);
    }
}
