#include "bbp/llee.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace bbp {

LoopCheck is_loop_chart(const Chart& c) {
    // L1: a cycle exists (charts are start-vertex connected, so any cycle
    // is reachable and induces an infinite path).
    if (!has_cycle(c)) return {false, LoopCond::L1};
    // L2: no cycle avoids the start vertex.
    {
        std::map<VertexId, std::vector<VertexId>> succ;
        for (const Transition& t : c.transitions())
            if (t.src != c.start() && t.tgt != c.start()) succ[t.src].push_back(t.tgt);
        // Cycle detection on the start-free subgraph.
        std::map<VertexId, int> state;  // 0 new, 1 open, 2 done
        std::function<bool(VertexId)> dfs = [&](VertexId v) {
            state[v] = 1;
            for (VertexId w : succ[v]) {
                if (state[w] == 1) return true;
                if (state[w] == 0 && dfs(w)) return true;
            }
            state[v] = 2;
            return false;
        };
        for (VertexId v : c.vertices())
            if (v != c.start() && state[v] == 0 && dfs(v)) return {false, LoopCond::L2};
    }
    if (c.tick()) return {false, LoopCond::L3};
    return {true, std::nullopt};
}

namespace {

bool subchart_is_loop(const Chart& c, VertexId v, const std::set<Transition>& entries) {
    return is_loop_chart(generated_subchart(c, v, entries)).ok;
}

// Enumerates candidate entry sets at v according to the strategy and
// returns the first whose generated subchart is a loop chart.
std::optional<std::set<Transition>> find_entry_set(const Chart& c, VertexId v,
                                                   EliminationStrategy strategy) {
    std::vector<Transition> out = c.out(v);
    if (out.empty()) return std::nullopt;
    if (out.size() > 12)
        throw std::runtime_error("loop_elimination: more than 12 transitions from one vertex");
    unsigned n = static_cast<unsigned>(out.size());
    std::vector<unsigned> masks;
    for (unsigned m = 1; m < (1u << n); ++m) masks.push_back(m);
    auto popcount = [](unsigned m) { return __builtin_popcount(m); };
    std::sort(masks.begin(), masks.end(), [&](unsigned a, unsigned b) {
        int pa = popcount(a), pb = popcount(b);
        switch (strategy) {
            case EliminationStrategy::Eager:
                if (pa != pb) return pa > pb;
                return a < b;
            case EliminationStrategy::Lazy:
                if (pa != pb) return pa < pb;
                return a < b;
            case EliminationStrategy::LazyReverse:
                if (pa != pb) return pa < pb;
                return a > b;
        }
        return a < b;
    });
    for (unsigned m : masks) {
        std::set<Transition> entries;
        for (unsigned i = 0; i < n; ++i)
            if (m & (1u << i)) entries.insert(out[i]);
        if (subchart_is_loop(c, v, entries)) return entries;
    }
    return std::nullopt;
}

EliminationResult run_elimination(
    const Chart& original,
    const std::function<std::optional<std::pair<VertexId, std::set<Transition>>>(const Chart&)>&
        pick) {
    EliminationResult res;
    std::map<Transition, unsigned> removed_at;
    Chart cur = original;
    unsigned step = 0;
    for (;;) {
        auto choice = pick(cur);
        if (!choice) break;
        ++step;
        res.trace.push_back({choice->first, choice->second, step});
        for (const Transition& t : choice->second) removed_at[t] = step;
        RawChart r = cur.raw();
        for (const Transition& t : choice->second) r.transitions.erase(t);
        cur = garbage_collect(r);
    }
    res.lee = !has_cycle(cur);
    if (!res.lee) res.diagnosis = step == 0 ? "no loop subchart" : "stuck with cycles remaining";

    std::vector<unsigned> levels;
    levels.reserve(original.transitions().size());
    for (const Transition& t : original.transitions()) {
        auto it = removed_at.find(t);
        levels.push_back(it == removed_at.end() ? 0 : it->second);
    }
    res.witness = LabeledChart{original, std::move(levels)};
    return res;
}

}  // namespace

EliminationResult loop_elimination(const Chart& c, EliminationStrategy strategy) {
    auto pick = [strategy](const Chart& cur)
        -> std::optional<std::pair<VertexId, std::set<Transition>>> {
        std::vector<VertexId> vs = cur.vertices();
        if (strategy != EliminationStrategy::Eager) std::reverse(vs.begin(), vs.end());
        for (VertexId v : vs) {
            auto entries = find_entry_set(cur, v, strategy);
            if (entries) return std::make_pair(v, *entries);
        }
        return std::nullopt;
    };
    return run_elimination(c, pick);
}

EliminationResult loop_elimination_guided(const LabeledChart& lc) {
    // Labels travel with the shrinking chart through a map.
    std::map<Transition, unsigned> level;
    for (std::size_t i = 0; i < lc.levels.size(); ++i)
        level[lc.chart.transitions()[i]] = lc.levels[i];
    auto pick = [level](const Chart& cur)
        -> std::optional<std::pair<VertexId, std::set<Transition>>> {
        std::optional<std::pair<unsigned, VertexId>> best;
        for (const Transition& t : cur.transitions()) {
            unsigned lv = level.at(t);
            if (lv == 0) continue;
            std::pair<unsigned, VertexId> key{lv, t.src};
            if (!best || key < *best) best = key;
        }
        if (!best) return std::nullopt;
        std::set<Transition> entries;
        for (const Transition& t : cur.out(best->second))
            if (level.at(t) == best->first) entries.insert(t);
        return std::make_pair(best->second, entries);
    };
    return run_elimination(lc.chart, pick);
}

Chart loop_subchart_at(const LabeledChart& lc, VertexId v, unsigned level) {
    RawChart r;
    r.start = v;
    r.vertices.insert(v);
    std::vector<VertexId> todo;
    for (const Transition& t : lc.entries_at(v, level)) {
        r.transitions.insert(t);
        if (r.vertices.insert(t.tgt).second && t.tgt != v) todo.push_back(t.tgt);
    }
    if (r.transitions.empty()) throw std::invalid_argument("loop_subchart_at: no such entry");
    while (!todo.empty()) {
        VertexId w = todo.back();
        todo.pop_back();
        if (w == v) continue;
        for (const Transition& t : lc.body_out(w)) {
            r.transitions.insert(t);
            if (r.vertices.insert(t.tgt).second && t.tgt != v) todo.push_back(t.tgt);
        }
    }
    if (lc.chart.tick() && r.vertices.count(*lc.chart.tick())) r.tick = lc.chart.tick();
    return Chart::make(std::move(r));
}

WitnessReport check_llee_witness(const LabeledChart& lc) {
    WitnessReport rep;
    // W1: no infinite body path from the start = the body subgraph
    // reachable from the start by body steps is acyclic.
    {
        std::map<VertexId, std::vector<VertexId>> body;
        for (std::size_t i = 0; i < lc.levels.size(); ++i)
            if (lc.levels[i] == 0)
                body[lc.chart.transitions()[i].src].push_back(lc.chart.transitions()[i].tgt);
        std::map<VertexId, int> state;
        std::function<std::optional<VertexId>(VertexId)> dfs =
            [&](VertexId v) -> std::optional<VertexId> {
            state[v] = 1;
            for (VertexId w : body[v]) {
                if (state[w] == 1) return w;
                if (state[w] == 0) {
                    auto r = dfs(w);
                    if (r) return r;
                }
            }
            state[v] = 2;
            return std::nullopt;
        };
        auto cycle = dfs(lc.chart.start());
        if (cycle) {
            rep.ok = false;
            rep.violations.push_back(
                {ViolationKind::W1, *cycle, 0, "body cycle reachable from the start"});
        }
    }
    for (auto& [v, level] : lc.entry_identifiers()) {
        Chart sub = loop_subchart_at(lc, v, level);
        LoopCheck lcheck = is_loop_chart(sub);
        if (!lcheck.ok) {
            ViolationKind k = lcheck.failed == LoopCond::L1   ? ViolationKind::W2aL1
                              : lcheck.failed == LoopCond::L2 ? ViolationKind::W2aL2
                                                              : ViolationKind::W2aL3;
            rep.ok = false;
            std::ostringstream msg;
            msg << "loop subchart at <" << v << "," << level << "> violates L"
                << (lcheck.failed == LoopCond::L1 ? 1 : lcheck.failed == LoopCond::L2 ? 2 : 3);
            rep.violations.push_back({k, v, level, msg.str()});
        }
        for (VertexId w : sub.vertices()) {
            if (w == v) continue;
            for (std::size_t i = 0; i < lc.levels.size(); ++i) {
                if (lc.levels[i] >= level && lc.chart.transitions()[i].src == w) {
                    rep.ok = false;
                    std::ostringstream msg;
                    msg << "vertex " << w << " inside <" << v << "," << level
                        << "> has an entry of level " << lc.levels[i];
                    rep.violations.push_back({ViolationKind::W2b, v, level, msg.str()});
                    break;
                }
            }
        }
    }
    return rep;
}

namespace {

// Guards the memoized closures below; holds for every valid witness.
void require_body_acyclic(const LabeledChart& lc, const char* who) {
    std::map<VertexId, std::vector<VertexId>> body;
    for (std::size_t i = 0; i < lc.levels.size(); ++i)
        if (lc.levels[i] == 0)
            body[lc.chart.transitions()[i].src].push_back(lc.chart.transitions()[i].tgt);
    std::map<VertexId, int> state;
    std::function<bool(VertexId)> dfs = [&](VertexId v) {
        state[v] = 1;
        for (VertexId w : body[v]) {
            if (state[w] == 1) return true;
            if (state[w] == 0 && dfs(w)) return true;
        }
        state[v] = 2;
        return false;
    };
    for (VertexId v : lc.chart.vertices())
        if (state[v] == 0 && dfs(v))
            throw std::logic_error(std::string(who) + ": body subgraph has a cycle");
}

}  // namespace

LoopRelations relations(const LabeledChart& lc) {
    WitnessReport rep = check_llee_witness(lc);
    if (!rep.ok) throw std::invalid_argument("relations: labeling is not a LLEE-witness");
    require_body_acyclic(lc, "relations");
    LoopRelations r;
    for (std::size_t i = 0; i < lc.levels.size(); ++i)
        if (lc.levels[i] == 0)
            r.body_step.insert({lc.chart.transitions()[i].src, lc.chart.transitions()[i].tgt});

    for (auto& [v, level] : lc.entry_identifiers()) {
        // Targets of level-entries, then body closure, never stepping onto v.
        std::set<VertexId> seen;
        std::vector<VertexId> todo;
        for (const Transition& t : lc.entries_at(v, level))
            if (t.tgt != v && seen.insert(t.tgt).second) todo.push_back(t.tgt);
        while (!todo.empty()) {
            VertexId w = todo.back();
            todo.pop_back();
            for (const Transition& t : lc.body_out(w))
                if (t.tgt != v && seen.insert(t.tgt).second) todo.push_back(t.tgt);
        }
        for (VertexId w : seen) {
            r.descends_level.insert({v, level, w});
            r.descends.insert({v, w});
        }
    }

    // w loops back to v iff v descends to w and w reaches v by a nonempty
    // body path.
    std::map<VertexId, std::set<VertexId>> body_reach;  // via >= 1 body step
    std::function<const std::set<VertexId>&(VertexId)> reach = [&](VertexId v) -> const std::set<VertexId>& {
        auto it = body_reach.find(v);
        if (it != body_reach.end()) return it->second;
        auto& acc = body_reach[v];  // body graph is acyclic, recursion terminates
        for (auto& [s, t] : r.body_step) {
            if (s != v) continue;
            acc.insert(t);
            const auto& sub = reach(t);
            acc.insert(sub.begin(), sub.end());
        }
        return acc;
    };
    for (auto& [v, w] : r.descends)
        if (reach(w).count(v)) r.loops_back.insert({w, v});

    for (auto& [w, v] : r.loops_back) {
        bool direct = true;
        for (auto& [w2, u] : r.loops_back) {
            if (w2 != w || u == v) continue;
            if (!r.loops_back.count({v, u})) {
                direct = false;
                break;
            }
        }
        if (direct) r.direct_loops_back.insert({w, v});
    }
    return r;
}

Norms norms(const LabeledChart& lc) {
    WitnessReport rep = check_llee_witness(lc);
    if (!rep.ok) throw std::invalid_argument("norms: labeling is not a LLEE-witness");
    require_body_acyclic(lc, "norms");
    Norms n;
    for (VertexId v : lc.chart.vertices()) {
        unsigned top = 0;
        for (const Transition& t : lc.chart.out(v)) top = std::max(top, lc.level_of(t));
        n.enl[v] = top;
    }
    auto longest = [&](const std::set<std::pair<VertexId, VertexId>>& edges) {
        std::map<VertexId, unsigned> len;
        std::function<unsigned(VertexId)> go = [&](VertexId v) -> unsigned {
            auto it = len.find(v);
            if (it != len.end()) return it->second;
            len[v] = 0;
            unsigned best = 0;
            for (auto& [s, t] : edges)
                if (s == v) best = std::max(best, 1 + go(t));
            len[v] = best;
            return best;
        };
        for (VertexId v : lc.chart.vertices()) go(v);
        return len;
    };
    std::set<std::pair<VertexId, VertexId>> body, lb;
    for (std::size_t i = 0; i < lc.levels.size(); ++i)
        if (lc.levels[i] == 0)
            body.insert({lc.chart.transitions()[i].src, lc.chart.transitions()[i].tgt});
    auto scc = scc_index(lc.chart);
    for (auto& [s, t] : body)
        if (scc.at(s) == scc.at(t)) lb.insert({s, t});
    auto bl = longest(body);
    auto ll = longest(lb);
    for (VertexId v : lc.chart.vertices()) {
        n.bosn[v] = bl[v];
        n.lbsn[v] = ll[v];
    }
    return n;
}

}  // namespace bbp
