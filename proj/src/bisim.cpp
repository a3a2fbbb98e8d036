#include "bbp/bisim.hpp"

#include <algorithm>
#include <functional>

namespace bbp {

namespace {

// Vertex of the disjoint union: (side, id).
using UV = std::pair<int, VertexId>;

struct Union {
    std::vector<UV> verts;
    std::map<UV, std::vector<std::pair<Action, UV>>> out;
    std::set<UV> ticks;
};

Union disjoint_union(const Chart& c1, const Chart& c2) {
    Union u;
    const Chart* cs[2] = {&c1, &c2};
    for (int side = 0; side < 2; ++side) {
        for (VertexId v : cs[side]->vertices()) {
            UV uv{side, v};
            u.verts.push_back(uv);
            if (cs[side]->is_tick(v)) u.ticks.insert(uv);
            for (const Transition& t : cs[side]->out(v))
                u.out[uv].emplace_back(t.act, UV{side, t.tgt});
        }
    }
    return u;
}

// Kanellakis-Smolka style refinement: split every block by the signature
// {(action, block of target)} until stable.
std::map<UV, int> stable_partition(const Union& u) {
    std::map<UV, int> block;
    for (const UV& v : u.verts) block[v] = u.ticks.count(v) ? 0 : 1;
    for (;;) {
        std::map<std::pair<int, std::set<std::pair<Action, int>>>, int> sig_block;
        std::map<UV, int> next;
        for (const UV& v : u.verts) {
            std::set<std::pair<Action, int>> sig;
            auto it = u.out.find(v);
            if (it != u.out.end())
                for (auto& [a, w] : it->second) sig.insert({a, block.at(w)});
            auto key = std::make_pair(block.at(v), std::move(sig));
            auto ins = sig_block.emplace(key, static_cast<int>(sig_block.size()));
            next[v] = ins.first->second;
        }
        if (next == block) return block;
        block = std::move(next);
    }
}

}  // namespace

std::optional<Bisimulation> largest_bisimulation(const Chart& c1, const Chart& c2) {
    Union u = disjoint_union(c1, c2);
    std::map<UV, int> block = stable_partition(u);
    if (block.at({0, c1.start()}) != block.at({1, c2.start()})) return std::nullopt;
    Bisimulation b;
    for (VertexId v : c1.vertices())
        for (VertexId w : c2.vertices())
            if (block.at({0, v}) == block.at({1, w})) b.pairs.insert({v, w});
    return b;
}

std::map<VertexId, VertexId> bisimilarity_classes(const Chart& c) {
    Union u;
    for (VertexId v : c.vertices()) {
        UV uv{0, v};
        u.verts.push_back(uv);
        if (c.is_tick(v)) u.ticks.insert(uv);
        for (const Transition& t : c.out(v)) u.out[uv].emplace_back(t.act, UV{0, t.tgt});
    }
    std::map<UV, int> block = stable_partition(u);
    std::map<int, VertexId> rep;
    std::map<VertexId, VertexId> classes;
    for (VertexId v : c.vertices()) {
        int b = block.at({0, v});
        auto it = rep.find(b);
        if (it == rep.end()) it = rep.emplace(b, v).first;  // vertices ascending: min id
        classes[v] = it->second;
    }
    return classes;
}

bool verify_bisimulation(const Chart& c1, const Chart& c2, const Bisimulation& b) {
    if (!b.pairs.count({c1.start(), c2.start()})) return false;
    for (auto& [v1, v2] : b.pairs) {
        if (!c1.has_vertex(v1) || !c2.has_vertex(v2)) return false;
        if (c1.is_tick(v1) != c2.is_tick(v2)) return false;
        for (const Transition& t : c1.out(v1)) {
            bool matched = false;
            for (const Transition& s : c2.out(v2))
                if (s.act == t.act && b.pairs.count({t.tgt, s.tgt})) {
                    matched = true;
                    break;
                }
            if (!matched) return false;
        }
        for (const Transition& s : c2.out(v2)) {
            bool matched = false;
            for (const Transition& t : c1.out(v1))
                if (t.act == s.act && b.pairs.count({t.tgt, s.tgt})) {
                    matched = true;
                    break;
                }
            if (!matched) return false;
        }
    }
    return true;
}

bool is_functional(const Bisimulation& b, const Chart& c1, const Chart& c2) {
    (void)c2;
    std::map<VertexId, int> count;
    for (auto& [v1, v2] : b.pairs) count[v1]++;
    for (VertexId v : c1.vertices())
        if (count[v] != 1) return false;
    return true;
}

std::optional<std::map<VertexId, VertexId>> functional_map(const Bisimulation& b, const Chart& c1,
                                                           const Chart& c2) {
    if (!is_functional(b, c1, c2)) return std::nullopt;
    std::map<VertexId, VertexId> phi;
    for (auto& [v1, v2] : b.pairs) phi[v1] = v2;
    return phi;
}

std::pair<Chart, std::map<VertexId, VertexId>> quotient_collapse(const Chart& c) {
    std::map<VertexId, VertexId> classes = bisimilarity_classes(c);
    RawChart r;
    r.start = classes.at(c.start());
    for (VertexId v : c.vertices()) r.vertices.insert(classes.at(v));
    if (c.tick()) r.tick = classes.at(*c.tick());
    for (const Transition& t : c.transitions())
        r.transitions.insert(Transition{classes.at(t.src), t.act, classes.at(t.tgt)});
    for (auto& [v, text] : c.labels())
        if (classes.at(v) == v) r.labels[v] = text;
    return {Chart::make(std::move(r)), std::move(classes)};
}

namespace {

struct IsoSearch {
    const Chart& c1;
    const Chart& c2;
    const std::vector<unsigned>* lv1 = nullptr;
    const std::vector<unsigned>* lv2 = nullptr;

    std::map<VertexId, VertexId> fwd, bwd;

    unsigned level1(const Transition& t) const {
        if (!lv1) return 0;
        auto& ts = c1.transitions();
        auto it = std::lower_bound(ts.begin(), ts.end(), t);
        return (*lv1)[static_cast<std::size_t>(it - ts.begin())];
    }
    unsigned level2(const Transition& t) const {
        if (!lv2) return 0;
        auto& ts = c2.transitions();
        auto it = std::lower_bound(ts.begin(), ts.end(), t);
        return (*lv2)[static_cast<std::size_t>(it - ts.begin())];
    }

    std::multiset<std::pair<Action, unsigned>> out_sig(const Chart& c, VertexId v, bool first) const {
        std::multiset<std::pair<Action, unsigned>> s;
        for (const Transition& t : c.out(v)) s.insert({t.act, first ? level1(t) : level2(t)});
        return s;
    }

    bool compatible(VertexId a, VertexId b) const {
        if (c1.is_tick(a) != c2.is_tick(b)) return false;
        if ((a == c1.start()) != (b == c2.start())) return false;
        return out_sig(c1, a, true) == out_sig(c2, b, false);
    }

    bool extend(const std::vector<VertexId>& order, std::size_t i) {
        if (i == order.size()) return check_edges();
        VertexId a = order[i];
        for (VertexId b : c2.vertices()) {
            if (bwd.count(b) || !compatible(a, b)) continue;
            fwd[a] = b;
            bwd[b] = a;
            if (consistent(a) && extend(order, i + 1)) return true;
            fwd.erase(a);
            bwd.erase(b);
        }
        return false;
    }

    // Local consistency for edges whose endpoints are both mapped.
    bool consistent(VertexId a) const {
        for (const Transition& t : c1.out(a)) {
            auto it = fwd.find(t.tgt);
            if (it == fwd.end()) continue;
            Transition img{fwd.at(a), t.act, it->second};
            if (!c2.has_transition(img) || level1(t) != level2(img)) return false;
        }
        for (const Transition& t : c1.transitions()) {
            if (t.tgt != a || !fwd.count(t.src)) continue;
            Transition img{fwd.at(t.src), t.act, fwd.at(a)};
            if (!c2.has_transition(img) || level1(t) != level2(img)) return false;
        }
        return true;
    }

    bool check_edges() const {
        if (fwd.size() != c2.vertices().size()) return false;
        std::set<Transition> image;
        for (const Transition& t : c1.transitions()) {
            Transition img{fwd.at(t.src), t.act, fwd.at(t.tgt)};
            if (!c2.has_transition(img) || level1(t) != level2(img)) return false;
            image.insert(img);
        }
        return image.size() == c2.transitions().size();
    }
};

std::optional<std::map<VertexId, VertexId>> iso_impl(const Chart& c1, const Chart& c2,
                                                     const std::vector<unsigned>* lv1,
                                                     const std::vector<unsigned>* lv2) {
    if (c1.vertices().size() != c2.vertices().size() ||
        c1.transitions().size() != c2.transitions().size() ||
        c1.tick().has_value() != c2.tick().has_value())
        return std::nullopt;
    IsoSearch s{c1, c2, lv1, lv2, {}, {}};
    // Map in BFS order from the start so partial maps stay connected.
    std::vector<VertexId> order;
    for (VertexId v : reachable(c1, c1.start())) order.push_back(v);
    std::sort(order.begin(), order.end());
    std::stable_sort(order.begin(), order.end(),
                     [&](VertexId a, VertexId b) { return (a == c1.start()) > (b == c1.start()); });
    if (!s.extend(order, 0)) return std::nullopt;
    return s.fwd;
}

}  // namespace

std::optional<std::map<VertexId, VertexId>> isomorphic(const Chart& c1, const Chart& c2) {
    return iso_impl(c1, c2, nullptr, nullptr);
}

std::optional<std::map<VertexId, VertexId>> isomorphic_labeled(const LabeledChart& a,
                                                               const LabeledChart& b) {
    return iso_impl(a.chart, b.chart, &a.levels, &b.levels);
}

}  // namespace bbp
