#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bbp/bisim.hpp"
#include "bbp/extract.hpp"
#include "bbp/gen.hpp"
#include "bbp/interp.hpp"
#include "bbp/proof.hpp"
#include "fixtures.hpp"

using namespace bbp;

namespace {

const char* kE0 = "a.((c.a + a.(b + b.a)) * 0)";

}  // namespace

TEST_CASE("relative extraction on the running example witness") {
    LabeledInterpretation li = interpret_labeled(parse_expr(kE0));
    // Vertices: 0 = start, 1 = loop vertex, 2 = third vertex.
    CHECK(expr_equal(extract_relative(li.labeled, 0, 1), parse_expr("0 * a")));
    CHECK(expr_equal(extract_relative(li.labeled, 2, 1), parse_expr("0 * (b + b.(0 * a))")));
    CHECK_THROWS_AS(extract_relative(li.labeled, 1, 0), std::invalid_argument);
}

TEST_CASE("solution extraction on the running example witness") {
    LabeledInterpretation li = interpret_labeled(parse_expr(kE0));
    CHECK(expr_equal(extract_solution(li.labeled, 1),
                     parse_expr("(c.(0 * a) + a.(0 * (b + b.(0 * a)))) * 0")));
    CHECK(expr_equal(extract_solution(li.labeled, 0),
                     parse_expr("0 * (a.((c.(0 * a) + a.(0 * (b + b.(0 * a)))) * 0))")));
    CHECK(expr_equal(extract_solution(li.labeled, 2),
                     parse_expr("0 * (b.(0 * (a.((c.(0 * a) + a.(0 * (b + b.(0 * a)))) * 0)))"
                                " + b.((c.(0 * a) + a.(0 * (b + b.(0 * a)))) * 0))")));
}

TEST_CASE("simplified extraction values match the worked example") {
    LabeledInterpretation li = interpret_labeled(parse_expr(kE0));
    auto simp = [&](VertexId v) { return simplify(extract_solution(li.labeled, v)).first; };
    CHECK(expr_equal(simp(1), parse_expr("(c.a + a.(b + b.a)) * 0")));
    CHECK(expr_equal(simp(0), parse_expr("a.((c.a + a.(b + b.a)) * 0)")));
    CHECK(expr_equal(simp(2),
                     parse_expr("b.(a.((c.a + a.(b + b.a)) * 0)) + b.((c.a + a.(b + b.a)) * 0)")));
}

TEST_CASE("a single body step to the sink extracts as a guarded star") {
    LabeledChart lc = fixtures::make_witness(0, 1, {{0, "a", 1, 0}});
    CHECK(expr_equal(extract_solution(lc, 0), parse_expr("0 * a")));
}

TEST_CASE("a lone body step to the loop vertex gives the degenerate relative form") {
    // Loop vertex 0 with entry to 1; 1 returns to 0 with a single d-step.
    LabeledChart lc = fixtures::make_witness(0, std::nullopt, {{0, "a", 1, 1}, {1, "d", 0, 0}});
    CHECK(expr_equal(extract_relative(lc, 1, 0), parse_expr("0 * d")));
}

TEST_CASE("simplify applies the zero laws with a checkable certificate") {
    SUBCASE("the star law") {
        auto [res, cert] = simplify(star(zero(), act("a")));
        CHECK(format_expr(res) == "a");
        CHECK(check_certificate(cert).ok);
        // The derivation runs through BKS1, B7, B1 and B6.
        std::set<std::string> used;
        for (const ProofStep& st : cert.steps)
            if (const auto* ax = std::get_if<JustAxiom>(&st.just)) used.insert(ax->name);
        CHECK(used == std::set<std::string>{"BKS1", "B7", "B1", "B6"});
    }
    SUBCASE("already-simple expressions yield an empty-ish certificate") {
        auto [res, cert] = simplify(act("a"));
        CHECK(format_expr(res) == "a");
        CHECK(check_certificate(cert).ok);
        CHECK(cert.steps.size() == 1);  // a single reflexivity step
    }
    SUBCASE("nested redexes are rewritten innermost-first to a fixpoint") {
        auto [res, cert] = simplify(star(zero(), sum(act("b"), prod(act("b"), star(zero(), act("a"))))));
        CHECK(format_expr(res) == "b + b.a");
        CHECK(check_certificate(cert).ok);
    }
    SUBCASE("products by zero collapse") {
        auto [res, cert] = simplify(prod(zero(), act("x")));
        CHECK(format_expr(res) == "0");
        CHECK(check_certificate(cert).ok);
    }
}

TEST_CASE("simplification preserves bisimilarity on random expressions") {
    for (const ExprPtr& e : sample_exprs({23, 12, 3}, 150)) {
        CAPTURE(format_expr(e));
        auto [res, cert] = simplify(e);
        CHECK(check_certificate(cert).ok);
        CHECK(cert.goal == Equation{e, res});
        CHECK(largest_bisimulation(interpret(e).chart, interpret(res).chart).has_value());
    }
}

TEST_CASE("extraction is sound: the value's chart is bisimilar to the witness chart") {
    for (const ExprPtr& e : sample_exprs({29, 10, 3}, 60)) {
        CAPTURE(format_expr(e));
        LabeledInterpretation li = interpret_labeled(e);
        ExprPtr s = extract_solution(li.labeled, li.labeled.chart.start());
        CHECK(largest_bisimulation(interpret(s).chart, li.labeled.chart).has_value());
    }
}

TEST_CASE("the relative-solution identity holds as bisimilarity") {
    // Whenever v descends to w, the chart of s(w) is bisimilar to the
    // chart of t(w|v).s(v).
    for (const ExprPtr& e : sample_exprs({41, 9, 2}, 40)) {
        CAPTURE(format_expr(e));
        LabeledInterpretation li = interpret_labeled(e);
        LoopRelations rel = relations(li.labeled);
        ExtractionTable table;
        for (auto& [v, w] : rel.descends) {
            ExprPtr lhs = extract_solution(li.labeled, w, &table);
            ExprPtr rhs = prod(extract_relative(li.labeled, w, v, &table),
                               extract_solution(li.labeled, v, &table));
            CHECK(largest_bisimulation(interpret(lhs).chart, interpret(rhs).chart).has_value());
        }
    }
}
