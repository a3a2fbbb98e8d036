#include "bbp/extract.hpp"

#include <algorithm>
#include <stdexcept>

#include "bbp/derivation.hpp"

namespace bbp {

namespace {

// Transitions from w split the way the extraction formulas need them:
// entries looping to w itself, entries to other targets, body transitions
// to a distinguished vertex (the sink or the loop vertex), and remaining
// body transitions.  Within each group summands are ordered by target id,
// then action.
struct SplitOut {
    std::vector<Transition> self_entries;
    std::vector<Transition> other_entries;
    std::vector<Transition> to_special;  // body to `special`
    std::vector<Transition> other_body;
};

SplitOut split_out(const LabeledChart& lc, VertexId w, std::optional<VertexId> special) {
    SplitOut s;
    std::vector<Transition> out = lc.chart.out(w);
    std::stable_sort(out.begin(), out.end(), [](const Transition& a, const Transition& b) {
        if (a.tgt != b.tgt) return a.tgt < b.tgt;
        return a.act < b.act;
    });
    for (const Transition& t : out) {
        if (lc.is_entry(t)) {
            if (t.tgt == w)
                s.self_entries.push_back(t);
            else
                s.other_entries.push_back(t);
        } else if (special && t.tgt == *special) {
            s.to_special.push_back(t);
        } else {
            s.other_body.push_back(t);
        }
    }
    return s;
}

struct Extractor {
    const LabeledChart& lc;
    const LoopRelations rel;
    const Norms nm;
    ExtractionTable table;

    explicit Extractor(const LabeledChart& chart) : lc(chart), rel(relations(chart)), nm(norms(chart)) {}

    bool descends(VertexId v, VertexId w) const { return rel.descends.count({v, w}) > 0; }

    // Asserted at every recursive call: the lexicographic measure
    // (enl(v), bosn(w)) strictly decreases.
    void check_measure(VertexId v, VertexId w, VertexId v2, VertexId w2) const {
        auto m1 = std::make_pair(nm.enl.at(v), nm.bosn.at(w));
        auto m2 = std::make_pair(nm.enl.at(v2), nm.bosn.at(w2));
        if (!(m2 < m1)) throw std::logic_error("extraction measure failed to decrease");
    }

    ExprPtr entry_part(VertexId w, VertexId rel_to) {
        const SplitOut s = split_out(lc, w, std::nullopt);
        std::vector<ExprPtr> parts;
        for (const Transition& t : s.self_entries) parts.push_back(act(t.act.name));
        for (const Transition& t : s.other_entries) {
            check_measure(rel_to, w, w, t.tgt);
            parts.push_back(prod(act(t.act.name), relative(t.tgt, w)));
        }
        return big_sum(parts);
    }

    ExprPtr relative(VertexId w, VertexId v) {
        auto key = std::make_pair(w, v);
        auto it = table.rel.find(key);
        if (it != table.rel.end()) return it->second;
        if (!descends(v, w))
            throw std::invalid_argument("extract_relative: vertex does not descend to the target");
        const SplitOut s = split_out(lc, w, v);
        ExprPtr head = entry_part(w, v);
        std::vector<ExprPtr> tail;
        for (const Transition& t : s.to_special) tail.push_back(act(t.act.name));
        for (const Transition& t : s.other_body) {
            if (lc.chart.is_tick(t.tgt))
                throw std::logic_error("extract_relative: loop body reaches the sink");
            check_measure(v, w, v, t.tgt);
            tail.push_back(prod(act(t.act.name), relative(t.tgt, v)));
        }
        ExprPtr res = star(head, big_sum(tail));
        table.rel.emplace(key, res);
        return res;
    }

    ExprPtr solution(VertexId w) {
        auto it = table.abs.find(w);
        if (it != table.abs.end()) return it->second;
        if (lc.chart.is_tick(w)) throw std::invalid_argument("extract_solution: sink has no value");
        const SplitOut s = split_out(lc, w, lc.chart.tick());
        // The entry part matches the relative form; the recursion over
        // other entries is justified because w descends to their targets.
        std::vector<ExprPtr> head_parts;
        for (const Transition& t : s.self_entries) head_parts.push_back(act(t.act.name));
        for (const Transition& t : s.other_entries)
            head_parts.push_back(prod(act(t.act.name), relative(t.tgt, w)));
        std::vector<ExprPtr> tail;
        for (const Transition& t : s.to_special) tail.push_back(act(t.act.name));
        for (const Transition& t : s.other_body) {
            if (!(nm.bosn.at(t.tgt) < nm.bosn.at(w)))
                throw std::logic_error("extraction measure failed to decrease");
            tail.push_back(prod(act(t.act.name), solution(t.tgt)));
        }
        ExprPtr res = star(big_sum(head_parts), big_sum(tail));
        table.abs.emplace(w, res);
        return res;
    }
};

}  // namespace

ExprPtr extract_relative(const LabeledChart& lc, VertexId w, VertexId v, ExtractionTable* table) {
    Extractor ex(lc);
    if (table) ex.table = *table;
    ExprPtr res = ex.relative(w, v);
    if (table) *table = ex.table;
    return res;
}

ExprPtr extract_solution(const LabeledChart& lc, VertexId w, ExtractionTable* table) {
    Extractor ex(lc);
    if (table) ex.table = *table;
    ExprPtr res = ex.solution(w);
    if (table) *table = ex.table;
    return res;
}

// ── simplifier ───────────────────────────────────────────────────────────

namespace {

// One innermost rewrite with {0*x -> x, x+0 -> x, 0+x -> x, 0.x -> 0};
// returns false when no redex is left at or below the path.
bool simplify_once(Derivation& d, Chain& ch, const TermPath& p) {
    ExprPtr e = *subterm_at(ch.cur(), p);
    if (!e->left()) return false;
    if (simplify_once(d, ch, p + "L")) return true;
    if (simplify_once(d, ch, p + "R")) return true;
    e = *subterm_at(ch.cur(), p);
    switch (e->kind()) {
        case ExprKind::Sum:
            if (e->right()->kind() == ExprKind::Zero) {
                ch.rw_axiom(p, "B6", {{"x", e->left()}});
                return true;
            }
            if (e->left()->kind() == ExprKind::Zero) {
                ch.rw_axiom(p, "B1", {{"x", e->left()}, {"y", e->right()}});
                ch.rw_axiom(p, "B6", {{"x", e->right()}});
                return true;
            }
            return false;
        case ExprKind::Prod:
            if (e->left()->kind() == ExprKind::Zero) {
                ch.rw_axiom(p, "B7", {{"x", e->right()}});
                return true;
            }
            return false;
        case ExprKind::Star:
            if (e->body()->kind() == ExprKind::Zero) {
                // 0*x = 0.(0*x)+x = 0+x = x+0 = x
                const ExprPtr x = e->exit();
                ch.rw_axiom(p, "BKS1", {{"x", zero()}, {"y", x}}, true);
                ch.rw_axiom(p + "L", "B7", {{"x", star(zero(), x)}});
                ch.rw_axiom(p, "B1", {{"x", zero()}, {"y", x}});
                ch.rw_axiom(p, "B6", {{"x", x}});
                return true;
            }
            return false;
        default:
            return false;
    }
}

}  // namespace

std::pair<ExprPtr, Certificate> simplify(const ExprPtr& e) {
    Derivation d;
    Chain ch(d, e);
    while (simplify_once(d, ch, "")) {
    }
    ExprPtr result = ch.cur();
    Certificate cert = d.extract(ch.finish());
    return {result, cert};
}

}  // namespace bbp
