#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bbp/chart.hpp"
#include "bbp/interp.hpp"
#include "fixtures.hpp"

using namespace bbp;

namespace {

RawChart raw_of(const std::vector<fixtures::LEdge>& edges, VertexId start,
                std::optional<VertexId> tick = std::nullopt) {
    RawChart r;
    r.start = start;
    r.tick = tick;
    r.vertices.insert(start);
    if (tick) r.vertices.insert(*tick);
    for (auto& e : edges) {
        r.vertices.insert(e.src);
        r.vertices.insert(e.tgt);
        r.transitions.insert({e.src, Action{e.act}, e.tgt});
    }
    return r;
}

}  // namespace

TEST_CASE("garbage collection removes the unreachable part") {
    RawChart r = raw_of({{1, "a", 2, 0}}, 0);
    r.vertices.insert(0);
    Chart c = garbage_collect(r);
    CHECK(c.vertices() == std::vector<VertexId>{0});
    CHECK(c.transitions().empty());

    // Removing an edge disconnects its target cone (BFS oracle).
    RawChart r2 = raw_of({{0, "a", 1, 0}, {1, "b", 2, 0}, {2, "c", 1, 0}}, 0);
    r2.transitions.erase({0, Action{"a"}, 1});
    Chart c2 = garbage_collect(r2);
    CHECK(c2.vertices() == std::vector<VertexId>{0});
}

TEST_CASE("a connected chart is unchanged by garbage collection") {
    Chart c = interpret(parse_expr("a.((c.a + a.(b + b.a)) * 0)")).chart;
    Chart gc = garbage_collect(c.raw());
    CHECK(c == gc);
}

TEST_CASE("validation rejects bad charts") {
    RawChart no_start;
    CHECK_THROWS_AS(Chart::make(no_start), ChartError);

    RawChart sink_out = raw_of({{0, "a", 1, 0}, {1, "b", 0, 0}}, 0, 1);
    CHECK_THROWS_AS(Chart::make(sink_out), ChartError);

    RawChart disconnected = raw_of({{0, "a", 1, 0}}, 0);
    disconnected.vertices.insert(9);
    CHECK_THROWS_AS(Chart::make(disconnected), ChartError);
}

TEST_CASE("generated subcharts follow paths until the base is revisited") {
    Chart c = interpret(parse_expr("a.((c.a + a.(b + b.a)) * 0)")).chart;
    // v0 = the whole expression, v1 = the star, v2 = the (b+b.a)-prefixed one.
    auto t = [&](VertexId s, const char* a, VertexId g) { return Transition{s, Action{a}, g}; };

    SUBCASE("empty entry set is rejected as not-from-v only when foreign") {
        Chart sub = generated_subchart(c, 1, {});
        CHECK(sub.vertices() == std::vector<VertexId>{1});
        CHECK(sub.transitions().empty());
    }
    SUBCASE("both entries from the loop vertex") {
        Chart sub = generated_subchart(c, 1, {t(1, "a", 2), t(1, "c", 0)});
        CHECK(sub.vertices() == std::vector<VertexId>{0, 1, 2});
        CHECK(sub.transitions() ==
              std::vector<Transition>{t(0, "a", 1), t(1, "a", 2), t(1, "c", 0), t(2, "b", 0),
                                      t(2, "b", 1)});
    }
    SUBCASE("single entry toward the start") {
        Chart sub = generated_subchart(c, 1, {t(1, "c", 0)});
        CHECK(sub.transitions() == std::vector<Transition>{t(0, "a", 1), t(1, "c", 0)});
    }
    SUBCASE("foreign transitions are rejected") {
        CHECK_THROWS_AS(generated_subchart(c, 1, {t(0, "a", 1)}), std::invalid_argument);
    }
}

TEST_CASE("strongly connected components") {
    SUBCASE("acyclic charts have singleton classes") {
        Chart c = garbage_collect(raw_of({{0, "a", 1, 0}, {1, "b", 2, 0}}, 0));
        CHECK(sccs(c).size() == 3);
    }
    SUBCASE("the running example is one class") {
        Chart c = interpret(parse_expr("a.((c.a + a.(b + b.a)) * 0)")).chart;
        auto comps = sccs(c);
        CHECK(comps.size() == 1);
        CHECK(comps[0] == std::vector<VertexId>{0, 1, 2});
    }
    SUBCASE("a single action splits into start and sink") {
        Chart c = interpret(parse_expr("a")).chart;
        CHECK(sccs(c).size() == 2);
    }
    SUBCASE("mutual reachability oracle") {
        Chart c = fixtures::nonexpressible_no_sink();
        auto idx = scc_index(c);
        for (VertexId u : c.vertices())
            for (VertexId v : c.vertices()) {
                bool same = idx.at(u) == idx.at(v);
                bool mutual = has_path(c, u, v) && has_path(c, v, u);
                CHECK(same == mutual);
            }
    }
}

TEST_CASE("chart files round trip") {
    Chart c = interpret(parse_expr("a.((c.a + a.(b + b.a)) * 0)")).chart;
    LoadedChart back = load_chart(save_chart(c));
    CHECK_FALSE(back.levels);
    CHECK(back.chart == c);

    // Labeled round trip keeps the level column.
    LabeledInterpretation li = interpret_labeled(parse_expr("a.((c.a + a.(b + b.a)) * 0)"));
    LoadedChart lback = load_chart(save_chart(li.labeled.chart, li.labeled.levels));
    REQUIRE(lback.levels.has_value());
    CHECK(*lback.levels == li.labeled.levels);
}

TEST_CASE("loader reports format and invariant errors") {
    CHECK_THROWS_WITH_AS(load_chart("start 0\ntick 1\ntrans 1 a 0\ntrans 0 a 1\n"),
                         doctest::Contains("sink has outgoing transition"), ChartError);
    CHECK_THROWS_WITH_AS(load_chart("trans 0 a 1\n"), doctest::Contains("missing start"),
                         ChartError);
    CHECK_THROWS_WITH_AS(load_chart("start 0\ntrans 0 a 1\ntrans 0 b 2 1\n"),
                         doctest::Contains("mixed"), ChartError);
    CHECK_THROWS_WITH_AS(load_chart("start 0\ntrans 0 B 1\n"), doctest::Contains("line 2"),
                         ChartError);
    CHECK_THROWS_WITH_AS(load_chart("start 0\ntrans 1 a 1\n"), doctest::Contains("connected"),
                         ChartError);
}

TEST_CASE("DOT export marks the labeled entries") {
    LabeledInterpretation li = interpret_labeled(parse_expr("a.((c.a + a.(b + b.a)) * 0)"));
    std::string dot = to_dot(li.labeled.chart, li.labeled.levels);
    std::size_t count = 0;
    for (std::size_t pos = dot.find("[1]"); pos != std::string::npos; pos = dot.find("[1]", pos + 1))
        ++count;
    CHECK(count == 2);
    CHECK(dot.find("style=bold") != std::string::npos);
}
