#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bbp/expr.hpp"
#include "bbp/gen.hpp"

using namespace bbp;

TEST_CASE("single atoms parse") {
    CHECK(parse_expr("a")->kind() == ExprKind::Act);
    CHECK(parse_expr("a")->action().name == "a");
    CHECK(parse_expr("0")->kind() == ExprKind::Zero);
    CHECK(parse_expr(" longname_1 ")->action().name == "longname_1");
}

TEST_CASE("the running example expression parses to the documented tree") {
    ExprPtr e0 = parse_expr("a.((c.a + a.(b + b.a)) * 0)");
    ExprPtr want = prod(act("a"), star(sum(prod(act("c"), act("a")),
                                           prod(act("a"), sum(act("b"), prod(act("b"), act("a"))))),
                                       zero()));
    CHECK(expr_equal(e0, want));
}

TEST_CASE("precedence and associativity") {
    CHECK(expr_equal(parse_expr("a+b+c"), sum(sum(act("a"), act("b")), act("c"))));
    CHECK(expr_equal(parse_expr("a.b.c"), prod(prod(act("a"), act("b")), act("c"))));
    CHECK(expr_equal(parse_expr("a*b*c"), star(star(act("a"), act("b")), act("c"))));
    CHECK(expr_equal(parse_expr("a+b.c*d"), sum(act("a"), prod(act("b"), star(act("c"), act("d"))))));
}

TEST_CASE("malformed input reports a position") {
    CHECK_THROWS_AS(parse_expr(""), ParseError);
    try {
        parse_expr("a+");
        FAIL("expected a syntax error");
    } catch (const ParseError& e) {
        CHECK(e.offset() == 2);
    }
    CHECK_THROWS_AS(parse_expr("(a"), ParseError);
    CHECK_THROWS_AS(parse_expr("a b"), ParseError);
    CHECK_THROWS_AS(parse_expr("A"), ParseError);
}

TEST_CASE("formatting uses minimal parentheses") {
    CHECK(format_expr(zero()) == "0");
    CHECK(format_expr(star(sum(act("a"), act("b")), zero())) == "(a + b) * 0");
    // The right operand of '.' binds tighter than '.', so the star needs
    // no parentheses here; the parser oracle confirms the round trip.
    ExprPtr e = prod(act("a"), star(act("c"), zero()));
    CHECK(format_expr(e) == "a.c * 0");
    CHECK(expr_equal(parse_expr(format_expr(e)), e));
    CHECK(format_expr(prod(act("a"), prod(act("b"), act("c")))) == "a.(b.c)");
    CHECK(format_expr(star(act("a"), star(act("b"), act("c")))) == "a * (b * c)");
    CHECK(format_expr(sum(act("a"), sum(act("b"), act("c")))) == "a + (b + c)");
}

TEST_CASE("parse/format round trip on random expressions") {
    for (const ExprPtr& e : sample_exprs({7, 14, 4}, 400)) {
        CAPTURE(format_expr(e));
        CHECK(expr_equal(parse_expr(format_expr(e)), e));
        CHECK(expr_equal(parse_expr(format_expr_compact(e)), e));
    }
}

TEST_CASE("star height") {
    CHECK(star_height(act("a")) == 0);
    CHECK(star_height(star(act("a"), act("b"))) == 1);
    CHECK(star_height(star(star(act("a"), act("b")), act("c"))) == 2);
    CHECK(star_height(parse_expr("(a.((a.(b+b.a))*c))*0")) == 2);
}

TEST_CASE("star height is monotone under context embedding") {
    for (const ExprPtr& e : sample_exprs({11, 12, 3}, 200)) {
        if (e->left()) {
            CHECK(star_height(e->left()) <= star_height(e));
            CHECK(star_height(e->right()) <= star_height(e));
        }
    }
}

TEST_CASE("big_sum follows the recursive convention") {
    CHECK(expr_equal(big_sum({}), zero()));
    CHECK(expr_equal(big_sum({act("a")}), act("a")));
    CHECK(expr_equal(big_sum({act("a"), act("b"), act("c")}),
                     sum(sum(act("a"), act("b")), act("c"))));
}

TEST_CASE("big_sum of n equal terms has n-1 sum nodes") {
    for (unsigned n = 1; n <= 6; ++n) {
        std::vector<ExprPtr> terms(n, act("a"));
        ExprPtr s = big_sum(terms);
        unsigned sums = 0;
        std::vector<ExprPtr> todo{s};
        while (!todo.empty()) {
            ExprPtr e = todo.back();
            todo.pop_back();
            if (e->kind() == ExprKind::Sum) {
                ++sums;
                todo.push_back(e->left());
                todo.push_back(e->right());
            }
        }
        CHECK(sums == n - 1);
    }
}
