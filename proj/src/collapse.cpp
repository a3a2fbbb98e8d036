#include "bbp/collapse.hpp"

#include <algorithm>
#include <stdexcept>

namespace bbp {

namespace {

struct Edge {
    Transition t;
    unsigned level;
};

std::vector<Edge> edges_of(const LabeledChart& lc) {
    std::vector<Edge> es;
    for (std::size_t i = 0; i < lc.levels.size(); ++i)
        es.push_back({lc.chart.transitions()[i], lc.levels[i]});
    return es;
}

LabeledChart from_edges(const RawChart& shape, const std::map<Transition, unsigned>& level) {
    Chart c = garbage_collect(shape);
    std::vector<unsigned> levels;
    levels.reserve(c.transitions().size());
    for (const Transition& t : c.transitions()) levels.push_back(level.at(t));
    return LabeledChart{std::move(c), std::move(levels)};
}

std::pair<RawChart, std::map<Transition, unsigned>> redirect(const LabeledChart& lc, VertexId w1,
                                                             VertexId w2) {
    RawChart r;
    r.start = lc.chart.start() == w1 ? w2 : lc.chart.start();
    r.tick = lc.chart.tick();
    for (VertexId v : lc.chart.vertices()) r.vertices.insert(v);
    for (auto& [v, text] : lc.chart.labels()) r.labels[v] = text;

    std::map<Transition, unsigned> level;
    // Transitions already present keep their own label; a redirected
    // transition inherits its label only if it does not collide.
    for (const Edge& e : edges_of(lc)) {
        if (e.t.tgt != w1) {
            r.transitions.insert(e.t);
            level.emplace(e.t, e.level);
        }
    }
    for (const Edge& e : edges_of(lc)) {
        if (e.t.tgt != w1) continue;
        Transition moved{e.t.src, e.t.act, w2};
        if (lc.chart.has_transition(moved)) continue;  // existing label wins
        r.transitions.insert(moved);
        level.emplace(moved, e.level);
    }
    return {std::move(r), std::move(level)};
}

}  // namespace

std::pair<Chart, std::map<VertexId, VertexId>> connect_through(const Chart& c, VertexId w1,
                                                               VertexId w2) {
    if (w1 == w2) throw std::invalid_argument("connect_through: vertices must be distinct");
    if (!c.has_vertex(w1) || !c.has_vertex(w2))
        throw std::invalid_argument("connect_through: no such vertex");
    if (c.is_tick(w1) || c.is_tick(w2))
        throw std::invalid_argument("connect_through: cannot connect through the sink");
    LabeledChart plain{c, std::vector<unsigned>(c.transitions().size(), 0)};
    auto [raw, level] = redirect(plain, w1, w2);
    Chart out = garbage_collect(raw);
    std::map<VertexId, VertexId> map;
    for (VertexId v : out.vertices()) map[v] = v;
    map[w1] = w2;
    return {std::move(out), std::move(map)};
}

LabeledChart connect_through_labeled(const LabeledChart& lc, VertexId w1, VertexId w2) {
    if (w1 == w2) throw std::invalid_argument("connect_through: vertices must be distinct");
    if (lc.chart.is_tick(w1) || lc.chart.is_tick(w2))
        throw std::invalid_argument("connect_through: cannot connect through the sink");
    auto [raw, level] = redirect(lc, w1, w2);
    return from_edges(raw, level);
}

namespace {

bool is_normed_vertex(const Chart& c, VertexId v) {
    return c.tick() && reachable(c, v).count(*c.tick()) > 0;
}

std::set<std::pair<VertexId, VertexId>> transitive(std::set<std::pair<VertexId, VertexId>> rel) {
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<std::pair<VertexId, VertexId>> add;
        for (auto& [a, b] : rel)
            for (auto& [c, d] : rel)
                if (b == c && !rel.count({a, d})) add.push_back({a, d});
        for (auto& p : add) changed |= rel.insert(p).second;
    }
    return rel;
}

std::set<VertexId> body_reachable(const LabeledChart& lc, VertexId from) {
    std::set<VertexId> seen{from};
    std::vector<VertexId> todo{from};
    while (!todo.empty()) {
        VertexId v = todo.back();
        todo.pop_back();
        for (const Transition& t : lc.body_out(v))
            if (seen.insert(t.tgt).second) todo.push_back(t.tgt);
    }
    return seen;
}

}  // namespace

bool pair_satisfies(const LabeledChart& lc, const LoopRelations& rel, VertexId w1, VertexId w2,
                    PairKind kind, PairCondition* out) {
    const Chart& c = lc.chart;
    switch (kind) {
        case PairKind::C1: {
            if (reachable(c, w2).count(w1)) return false;
            bool descended_to = false;
            for (auto& [v, w] : rel.descends)
                if (w == w1) descended_to = true;
            if (descended_to && is_normed_vertex(c, w2)) return false;
            if (out) *out = PairCondition{PairKind::C1, {}, 0};
            return true;
        }
        case PairKind::C2: {
            auto lb_plus = transitive(rel.loops_back);
            if (!lb_plus.count({w2, w1})) return false;
            if (out) {
                // A loops-back chain from w2 down to w1 for the report.
                std::vector<VertexId> chain{w2};
                VertexId cur = w2;
                while (cur != w1) {
                    VertexId next = w1;
                    if (!rel.loops_back.count({cur, w1})) {
                        for (auto& [a, b] : rel.loops_back)
                            if (a == cur && lb_plus.count({b, w1})) {
                                next = b;
                                break;
                            }
                    }
                    chain.push_back(next);
                    cur = next;
                }
                *out = PairCondition{PairKind::C2, std::move(chain), 0};
            }
            return true;
        }
        case PairKind::C3: {
            auto lb_plus = transitive(rel.loops_back);
            for (auto& [a, v] : rel.direct_loops_back) {
                if (a != w1) continue;
                if (!lb_plus.count({w2, v})) continue;
                if (body_reachable(lc, w2).count(w1)) return false;
                if (out) *out = PairCondition{PairKind::C3, {}, v};
                return true;
            }
            return false;
        }
    }
    return false;
}

std::optional<std::tuple<VertexId, VertexId, PairCondition>> find_collapsible_pair(
    const LabeledChart& lc) {
    WitnessReport rep = check_llee_witness(lc);
    if (!rep.ok) throw std::invalid_argument("find_collapsible_pair: invalid witness");
    std::map<VertexId, VertexId> classes = bisimilarity_classes(lc.chart);
    std::vector<std::pair<VertexId, VertexId>> candidates;
    for (VertexId v : lc.chart.vertices())
        for (VertexId w : lc.chart.vertices())
            if (v != w && classes.at(v) == classes.at(w)) candidates.push_back({v, w});
    if (candidates.empty()) return std::nullopt;
    LoopRelations rel = relations(lc);
    for (PairKind kind : {PairKind::C1, PairKind::C2, PairKind::C3}) {
        for (auto& [w1, w2] : candidates) {
            PairCondition cond;
            if (pair_satisfies(lc, rel, w1, w2, kind, &cond)) return std::make_tuple(w1, w2, cond);
        }
    }
    throw std::logic_error("no bisimilar pair satisfies C1, C2 or C3");
}

namespace {

unsigned max_entry_level_at(const LabeledChart& lc, VertexId v) {
    unsigned top = 0;
    for (const Transition& t : lc.chart.out(v)) top = std::max(top, lc.level_of(t));
    return top;
}

// Clean-up: demote entry identifiers whose loop subchart no longer has an
// infinite path; one demotion can expose another, so iterate to fixpoint.
LabeledChart clean_up(LabeledChart lc) {
    for (;;) {
        bool changed = false;
        for (auto& [v, level] : lc.entry_identifiers()) {
            Chart sub = loop_subchart_at(lc, v, level);
            if (has_cycle(sub)) continue;
            for (std::size_t i = 0; i < lc.levels.size(); ++i)
                if (lc.levels[i] == level && lc.chart.transitions()[i].src == v) lc.levels[i] = 0;
            changed = true;
            break;
        }
        if (!changed) return lc;
    }
}

}  // namespace

LabeledChart transform(const LabeledChart& lc, VertexId w1, VertexId w2,
                       const PairCondition& cond) {
    LoopRelations rel = relations(lc);
    if (!pair_satisfies(lc, rel, w1, w2, cond.kind, nullptr))
        throw std::invalid_argument("transform: pair does not satisfy the stated condition");

    switch (cond.kind) {
        case PairKind::C1: {
            // Raise entries that descend toward w1 above every level
            // reachable from w2.
            unsigned m = 0;
            std::set<VertexId> from_w2 = reachable(lc.chart, w2);
            for (std::size_t i = 0; i < lc.levels.size(); ++i)
                if (lc.levels[i] > 0 && from_w2.count(lc.chart.transitions()[i].src))
                    m = std::max(m, lc.levels[i]);
            LabeledChart adj = lc;
            for (std::size_t i = 0; i < adj.levels.size(); ++i) {
                if (adj.levels[i] == 0) continue;
                VertexId tgt = adj.chart.transitions()[i].tgt;
                if (reachable(adj.chart, tgt).count(w1)) adj.levels[i] += m;
            }
            return clean_up(connect_through_labeled(adj, w1, w2));
        }
        case PairKind::C2: {
            // The direct predecessor of w1 on the loops-back chain from w2.
            std::optional<VertexId> hat;
            auto lb_star = transitive(rel.loops_back);
            for (auto& [x, y] : rel.direct_loops_back)
                if (y == w1 && (x == w2 || lb_star.count({w2, x}))) {
                    hat = x;
                    break;
                }
            if (!hat) throw std::logic_error("transform II: no direct loops-back predecessor");
            unsigned gamma = max_entry_level_at(lc, w1);
            LabeledChart out = connect_through_labeled(lc, w1, w2);
            for (std::size_t i = 0; i < out.levels.size(); ++i)
                if (out.levels[i] == 0 && out.chart.transitions()[i].src == *hat)
                    out.levels[i] = gamma;
            return clean_up(std::move(out));
        }
        case PairKind::C3: {
            unsigned gamma = max_entry_level_at(lc, cond.pivot);
            LabeledChart adj = lc;
            for (std::size_t i = 0; i < adj.levels.size(); ++i)
                if (adj.levels[i] > 0 && adj.chart.transitions()[i].src == cond.pivot)
                    adj.levels[i] = gamma;
            return clean_up(connect_through_labeled(adj, w1, w2));
        }
    }
    throw std::logic_error("transform: unknown condition");
}

CollapseResult collapse_llee(const LabeledChart& lc, PairStrategy strategy,
                             const CollapseObserver& observer) {
    WitnessReport rep = check_llee_witness(lc);
    if (!rep.ok) throw std::invalid_argument("collapse_llee: invalid witness");
    CollapseResult res;
    res.witness = lc;
    unsigned step = 0;
    for (;;) {
        auto pick = strategy == PairStrategy::Exhaustive
                        ? find_collapsible_pair(res.witness)
                        : find_collapsible_pair_constructive(res.witness);
        if (!pick) break;
        auto& [w1, w2, cond] = *pick;
        LabeledChart next = transform(res.witness, w1, w2, cond);
        ++step;
        CollapseStep info{step, w1, w2, cond.kind, res.witness, next};
        res.steps.push_back(info);
        if (observer) observer(info);
        if (next.chart.vertices().size() >= res.witness.chart.vertices().size())
            throw std::logic_error("collapse_llee: vertex count did not decrease");
        res.witness = std::move(next);
    }
    // The composed functional bisimulation: every input vertex is
    // bisimilar to exactly one vertex of the collapse.
    auto b = largest_bisimulation(lc.chart, res.witness.chart);
    if (!b) throw std::logic_error("collapse_llee: result not bisimilar to input");
    auto phi = functional_map(*b, lc.chart, res.witness.chart);
    if (!phi) throw std::logic_error("collapse_llee: collapse map not functional");
    res.map = std::move(*phi);
    return res;
}

// ── constructive pair selection ──────────────────────────────────────────
//
// Mirrors the progression argument: starting from any distinct bisimilar
// pair, walk along loop-back transitions (tracking anchors a1, v, a2 in
// the same-scc case) until one of C1, C2, C3 holds.

namespace {

struct Progress {
    const LabeledChart& lc;
    const LoopRelations& rel;
    const Norms& nm;
    const std::map<VertexId, VertexId>& classes;
    std::map<VertexId, int> scc;
    std::set<std::pair<VertexId, VertexId>> lb_star;

    bool lbs(VertexId a, VertexId b) const { return a == b || lb_star.count({a, b}); }

    std::optional<VertexId> direct_anchor(VertexId u, VertexId v) const {
        // a with u loops-back* a and a directly-loops-back v.
        for (auto& [a, y] : rel.direct_loops_back)
            if (y == v && lbs(u, a)) return a;
        return std::nullopt;
    }

    // A loop-back step from u whose target has strictly smaller norm.
    Transition lb_step(VertexId u) const {
        for (const Transition& t : lc.body_out(u))
            if (scc.at(t.src) == scc.at(t.tgt) && nm.lbsn.at(t.tgt) < nm.lbsn.at(u)) return t;
        throw std::logic_error("constructive search: no decreasing loop-back step");
    }

    VertexId match(VertexId u2, const Action& a, VertexId target_class) const {
        for (const Transition& t : lc.chart.out(u2))
            if (t.act == a && classes.at(t.tgt) == target_class) return t.tgt;
        throw std::logic_error("constructive search: forth clause failed");
    }

    std::tuple<VertexId, VertexId, PairCondition> diff_scc(VertexId u1, VertexId u2) {
        if (reachable(lc.chart, u2).count(u1)) std::swap(u1, u2);
        for (;;) {
            PairCondition cond;
            if (pair_satisfies(lc, rel, u1, u2, PairKind::C1, &cond)) return {u1, u2, cond};
            Transition step = lb_step(u1);
            VertexId u1p = step.tgt;
            VertexId u2p = match(u2, step.act, classes.at(u1p));
            u1 = u1p;
            u2 = u2p;
        }
    }

    std::tuple<VertexId, VertexId, PairCondition> same_scc(VertexId u1, VertexId u2) {
        // Least upper bound of u1, u2 with respect to loops-back*.
        std::vector<VertexId> ubs;
        for (VertexId w : lc.chart.vertices())
            if (lbs(u1, w) && lbs(u2, w)) ubs.push_back(w);
        if (ubs.empty()) throw std::logic_error("constructive search: no common loop ancestor");
        VertexId v = ubs[0];
        for (VertexId w : ubs)
            if (lbs(w, v)) v = w;
        if (u1 == v) {
            PairCondition cond;
            if (!pair_satisfies(lc, rel, u1, u2, PairKind::C2, &cond))
                throw std::logic_error("constructive search: expected C2");
            return {u1, u2, cond};
        }
        if (u2 == v) {
            PairCondition cond;
            if (!pair_satisfies(lc, rel, u2, u1, PairKind::C2, &cond))
                throw std::logic_error("constructive search: expected C2");
            return {u2, u1, cond};
        }
        VertexId a1 = *direct_anchor(u1, v);
        VertexId a2 = *direct_anchor(u2, v);
        if (body_reachable(lc, a2).count(a1)) {
            std::swap(u1, u2);
            std::swap(a1, a2);
        }
        return walk(u1, u2, a1, a2, v);
    }

    std::tuple<VertexId, VertexId, PairCondition> walk(VertexId u1, VertexId u2, VertexId a1,
                                                       VertexId a2, VertexId v) {
        for (;;) {
            if (u1 == a1) {
                PairCondition cond;
                if (!pair_satisfies(lc, rel, u1, u2, PairKind::C3, &cond))
                    throw std::logic_error("constructive search: expected C3");
                return {u1, u2, cond};
            }
            Transition step = lb_step(u1);
            VertexId u1p = step.tgt;
            VertexId u2p = match(u2, step.act, classes.at(u1p));
            if (scc.at(u1p) != scc.at(u2p)) {
                VertexId x = u1p, y = u2p;
                if (reachable(lc.chart, y).count(x)) std::swap(x, y);
                return diff_scc(x, y);
            }
            if (u2 != a2) {
                // u2 still loops back to a2 transitively; invariant kept.
                u1 = u1p;
                u2 = u2p;
                continue;
            }
            bool entry_step = false;
            for (const Transition& t : lc.chart.out(u2))
                if (t.act == step.act && t.tgt == u2p && lc.level_of(t) > 0) entry_step = true;
            if (entry_step) {
                u1 = u1p;
                u2 = u2p;
                continue;
            }
            if (u2p == v) {
                PairCondition cond;
                if (!pair_satisfies(lc, rel, u2p, u1p, PairKind::C2, &cond))
                    throw std::logic_error("constructive search: expected C2");
                return {u2p, u1p, cond};
            }
            auto a2p = direct_anchor(u2p, v);
            if (!a2p) throw std::logic_error("constructive search: lost the loop anchor");
            u1 = u1p;
            u2 = u2p;
            a2 = *a2p;
        }
    }
};

}  // namespace

std::optional<std::tuple<VertexId, VertexId, PairCondition>> find_collapsible_pair_constructive(
    const LabeledChart& lc) {
    WitnessReport rep = check_llee_witness(lc);
    if (!rep.ok) throw std::invalid_argument("find_collapsible_pair_constructive: invalid witness");
    std::map<VertexId, VertexId> classes = bisimilarity_classes(lc.chart);
    std::optional<std::pair<VertexId, VertexId>> seed;
    for (VertexId v : lc.chart.vertices()) {
        for (VertexId w : lc.chart.vertices())
            if (v != w && classes.at(v) == classes.at(w)) {
                seed = {v, w};
                break;
            }
        if (seed) break;
    }
    if (!seed) return std::nullopt;
    LoopRelations rel = relations(lc);
    Norms nm = norms(lc);
    Progress p{lc, rel, nm, classes, scc_index(lc.chart), transitive(rel.loops_back)};
    auto [u1, u2] = *seed;
    auto result = p.scc.at(u1) == p.scc.at(u2) ? p.same_scc(u1, u2) : p.diff_scc(u1, u2);
    return result;
}

}  // namespace bbp
