#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bbp/gen.hpp"
#include "bbp/interp.hpp"
#include "bbp/llee.hpp"

using namespace bbp;

namespace {

const char* kE0 = "a.((c.a + a.(b + b.a)) * 0)";
const char* kE1 = "(a.((a.(b + b.a)) * c)) * 0";
const char* kE2 = "a.((c.a + a.((b.(a.((c.a) * a))) * b)) * 0)";

Transition t(VertexId s, const char* a, VertexId g) { return {s, Action{a}, g}; }

}  // namespace

TEST_CASE("action derivatives of the base cases") {
    CHECK(action_derivatives(zero()).empty());

    auto da = action_derivatives(act("a"));
    REQUIRE(da.size() == 1);
    CHECK(da[0].act.name == "a");
    CHECK(da[0].is_tick());

    // a*b steps back into itself on a and exits on b.
    auto ds = action_derivatives(star(act("a"), act("b")));
    REQUIRE(ds.size() == 2);
    CHECK(ds[0].act.name == "a");
    CHECK(expr_equal(ds[0].target, star(act("a"), act("b"))));
    CHECK(ds[1].act.name == "b");
    CHECK(ds[1].is_tick());
}

TEST_CASE("the running example chart") {
    Interpretation in = interpret(parse_expr(kE0));
    CHECK(in.chart.vertices().size() == 3);
    CHECK_FALSE(in.chart.tick());
    CHECK(in.chart.start() == 0);
    CHECK(in.chart.transitions() == std::vector<Transition>{t(0, "a", 1), t(1, "a", 2),
                                                            t(1, "c", 0), t(2, "b", 0),
                                                            t(2, "b", 1)});
    CHECK(expr_equal(in.expr_of.at(1), parse_expr("(c.a + a.(b + b.a)) * 0")));
    CHECK(expr_equal(in.expr_of.at(2), parse_expr("(b + b.a).((c.a + a.(b + b.a)) * 0)")));
}

TEST_CASE("the companion examples") {
    Interpretation i1 = interpret(parse_expr(kE1));
    CHECK(i1.chart.vertices().size() == 4);
    CHECK_FALSE(i1.chart.tick());

    // The c-derivative of the outer star re-creates the start expression
    // and the two inner entry targets coincide, so the iterated-derivative
    // set has five elements.
    Interpretation i2 = interpret(parse_expr(kE2));
    CHECK(i2.chart.vertices().size() == 5);
    CHECK_FALSE(i2.chart.tick());
    CHECK(expr_equal(i2.expr_of.at(i2.chart.start()), parse_expr(kE2)));
}

TEST_CASE("normedness") {
    CHECK(is_normed(act("a")));
    CHECK_FALSE(is_normed(zero()));
    CHECK_FALSE(is_normed(parse_expr(kE0)));
}

TEST_CASE("the structural normedness recursion agrees with reachability") {
    for (const ExprPtr& e : sample_exprs({3, 12, 3}, 500)) {
        CAPTURE(format_expr(e));
        CHECK(is_normed(e) == normed_struct(e));
    }
}

TEST_CASE("labeled interpretation of the running example") {
    LabeledInterpretation li = interpret_labeled(parse_expr(kE0));
    CHECK(li.labeled.level_of(t(0, "a", 1)) == 0);
    CHECK(li.labeled.level_of(t(1, "a", 2)) == 1);
    CHECK(li.labeled.level_of(t(1, "c", 0)) == 1);
    CHECK(li.labeled.level_of(t(2, "b", 0)) == 0);
    CHECK(li.labeled.level_of(t(2, "b", 1)) == 0);
    auto ids = li.labeled.entry_identifiers();
    CHECK(ids == std::vector<std::pair<VertexId, unsigned>>{{1, 1}});
}

TEST_CASE("labeled interpretation entry levels of the companions") {
    LabeledInterpretation l1 = interpret_labeled(parse_expr(kE1));
    std::multiset<unsigned> levels1;
    for (unsigned lv : l1.labeled.levels)
        if (lv > 0) levels1.insert(lv);
    CHECK(levels1 == std::multiset<unsigned>{1, 2});
    // The level-2 entry departs the start vertex.
    for (std::size_t i = 0; i < l1.labeled.levels.size(); ++i)
        if (l1.labeled.levels[i] == 2) CHECK(l1.labeled.chart.transitions()[i].src == 0);

    LabeledInterpretation l2 = interpret_labeled(parse_expr(kE2));
    std::multiset<unsigned> levels2;
    for (unsigned lv : l2.labeled.levels)
        if (lv > 0) levels2.insert(lv);
    CHECK(levels2 == std::multiset<unsigned>{1, 2, 3, 3});
}

TEST_CASE("erasing labels gives the plain interpretation") {
    for (const ExprPtr& e : sample_exprs({5, 12, 3}, 200)) {
        CAPTURE(format_expr(e));
        CHECK(interpret_labeled(e).labeled.chart == interpret(e).chart);
    }
}

TEST_CASE("the labeled interpretation is always a valid witness") {
    for (const ExprPtr& e : sample_exprs({9, 12, 3}, 200)) {
        CAPTURE(format_expr(e));
        CHECK(check_llee_witness(interpret_labeled(e).labeled).ok);
    }
}
