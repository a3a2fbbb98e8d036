#include "bbp/gen.hpp"

#include <algorithm>
#include <stdexcept>

#include "bbp/bisim.hpp"
#include "bbp/collapse.hpp"
#include "bbp/extract.hpp"
#include "bbp/interp.hpp"
#include "bbp/llee.hpp"
#include "bbp/proof.hpp"

namespace bbp {

ExprStream::ExprStream(const ExprGen& cfg) : cfg_(cfg), state_(cfg.seed * 0x9e3779b97f4a7c15ull + 1) {
    if (cfg_.alphabet_size < 1) throw std::invalid_argument("alphabet_size must be positive");
    if (cfg_.max_size < 1) throw std::invalid_argument("max_size must be positive");
}

std::uint64_t ExprStream::rng() {
    // splitmix64
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

namespace {

std::string action_name(unsigned i) {
    std::string name(1, static_cast<char>('a' + i % 26));
    if (i >= 26) name += std::to_string(i / 26);
    return name;
}

}  // namespace

ExprPtr ExprStream::gen(unsigned budget, int mode) {
    // A binary node needs three nodes at least; below that, emit a leaf.
    if (budget <= 2) {
        // mode 1 is zero-heavy
        unsigned leaves = cfg_.alphabet_size + (mode == 1 ? 3 : 1);
        unsigned pick = static_cast<unsigned>(rng() % leaves);
        if (pick >= cfg_.alphabet_size) return zero();
        return act(action_name(pick));
    }
    unsigned roll = static_cast<unsigned>(rng() % 100);
    // mode 2 prefers nested stars
    unsigned star_cut = mode == 2 ? 55 : 30;
    ExprKind k = roll < star_cut                  ? ExprKind::Star
                 : roll < star_cut + 25           ? ExprKind::Sum
                 : roll < star_cut + 50           ? ExprKind::Prod
                                                  : ExprKind::Act;
    if (k == ExprKind::Act) return gen(1, mode);
    unsigned avail = budget - 1;
    unsigned left = 1 + static_cast<unsigned>(rng() % (avail - 1));
    unsigned right = avail - left;
    ExprPtr l = gen(left, mode);
    ExprPtr r = gen(right, mode);
    switch (k) {
        case ExprKind::Sum: return sum(l, r);
        case ExprKind::Prod: return prod(l, r);
        default: return star(l, r);
    }
}

ExprPtr ExprStream::next() {
    int mode = static_cast<int>(rng() % 3);
    unsigned budget = 1 + static_cast<unsigned>(rng() % cfg_.max_size);
    return gen(budget, mode);
}

std::vector<ExprPtr> sample_exprs(const ExprGen& cfg, std::size_t count) {
    ExprStream s(cfg);
    std::vector<ExprPtr> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(s.next());
    return out;
}

std::vector<ExprPtr> shrink_candidates(const ExprPtr& e) {
    std::vector<ExprPtr> out;
    if (e->kind() == ExprKind::Zero) return out;
    out.push_back(zero());
    if (e->left()) {
        out.push_back(e->left());
        out.push_back(e->right());
        for (const ExprPtr& l : shrink_candidates(e->left())) {
            switch (e->kind()) {
                case ExprKind::Sum: out.push_back(sum(l, e->right())); break;
                case ExprKind::Prod: out.push_back(prod(l, e->right())); break;
                default: out.push_back(star(l, e->right())); break;
            }
        }
        for (const ExprPtr& r : shrink_candidates(e->right())) {
            switch (e->kind()) {
                case ExprKind::Sum: out.push_back(sum(e->left(), r)); break;
                case ExprKind::Prod: out.push_back(prod(e->left(), r)); break;
                default: out.push_back(star(e->left(), r)); break;
            }
        }
    }
    return out;
}

ExprPtr shrink(const ExprPtr& e, const std::function<bool(const ExprPtr&)>& fails) {
    ExprPtr cur = e;
    bool progress = true;
    while (progress) {
        progress = false;
        for (const ExprPtr& cand : shrink_candidates(cur)) {
            if (cand->size() >= cur->size()) continue;
            bool bad = false;
            try {
                bad = fails(cand);
            } catch (const std::exception&) {
                bad = true;
            }
            if (bad) {
                cur = cand;
                progress = true;
                break;
            }
        }
    }
    return cur;
}

// ── property suites ──────────────────────────────────────────────────────

namespace {

using Property = std::function<bool(const ExprPtr&)>;

bool prop_roundtrip_format(const ExprPtr& e) {
    return expr_equal(parse_expr(format_expr(e)), e) &&
           expr_equal(parse_expr(format_expr_compact(e)), e);
}

bool prop_normedness(const ExprPtr& e) { return is_normed(e) == normed_struct(e); }

bool prop_llee_witness(const ExprPtr& e) {
    LabeledInterpretation li = interpret_labeled(e);
    if (!check_llee_witness(li.labeled).ok) return false;
    // Underlying-chart agreement with the plain interpretation.
    return li.labeled.chart == interpret(e).chart;
}

bool pairs_subset(const std::set<std::pair<VertexId, VertexId>>& rel,
                  const std::function<bool(VertexId, VertexId)>& pred) {
    for (auto& [a, b] : rel)
        if (!pred(a, b)) return false;
    return true;
}

std::set<std::pair<VertexId, VertexId>> closure(std::set<std::pair<VertexId, VertexId>> rel,
                                                const std::vector<VertexId>& verts) {
    for (VertexId v : verts) rel.insert({v, v});
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

bool prop_lemma_relations(const ExprPtr& e) {
    LabeledInterpretation li = interpret_labeled(e);
    const LabeledChart& lc = li.labeled;
    if (!check_llee_witness(lc).ok) return false;
    LoopRelations rel = relations(lc);
    Norms nm = norms(lc);
    const Chart& c = lc.chart;
    auto scc = scc_index(c);
    const std::vector<VertexId>& verts = c.vertices();

    // (i) the body subgraph is acyclic (norms() already requires this, so
    // reaching here means it holds); spot-check irreflexivity.
    for (auto& [a, b] : rel.body_step)
        if (a == b) return false;

    auto desc_star = closure(rel.descends, verts);
    auto lb_star = closure(rel.loops_back, verts);
    auto lb_plus = rel.loops_back;
    {
        bool changed = true;
        while (changed) {
            changed = false;
            std::vector<std::pair<VertexId, VertexId>> add;
            for (auto& [a, b] : lb_plus)
                for (auto& [x, y] : rel.loops_back)
                    if (b == x && !lb_plus.count({a, y})) add.push_back({a, y});
            for (auto& p : add) changed |= lb_plus.insert(p).second;
        }
    }

    // (ii) same-scc descents invert to loops-back.
    for (VertexId u : verts)
        for (VertexId v : verts)
            if (scc.at(u) == scc.at(v) && desc_star.count({u, v}) && !lb_star.count({v, u}))
                return false;

    // (iii) descending to a vertex that does not loop back makes it unnormed.
    for (auto& [v, w] : rel.descends) {
        bool loops = false;
        for (auto& [a, b] : rel.loops_back)
            if (a == w) loops = true;
        if (!loops) {
            bool normed = c.tick() && reachable(c, w).count(*c.tick());
            if (normed) return false;
        }
    }

    // (iv) same scc iff a common loops-back* target exists.
    for (VertexId u : verts)
        for (VertexId v : verts) {
            bool common = false;
            for (VertexId w : verts)
                if (lb_star.count({u, w}) && lb_star.count({v, w})) common = true;
            if (common != (scc.at(u) == scc.at(v))) return false;
        }

    // (v) loops-back* is a partial order with binary least upper bounds.
    for (VertexId u : verts)
        for (VertexId v : verts)
            if (u != v && lb_star.count({u, v}) && lb_star.count({v, u})) return false;
    for (VertexId u : verts)
        for (VertexId v : verts) {
            std::vector<VertexId> ubs;
            for (VertexId w : verts)
                if (lb_star.count({u, w}) && lb_star.count({v, w})) ubs.push_back(w);
            if (ubs.empty()) continue;
            bool has_least = false;
            for (VertexId w : ubs) {
                bool least = true;
                for (VertexId w2 : ubs)
                    if (!lb_star.count({w, w2})) least = false;
                if (least) has_least = true;
            }
            if (!has_least) return false;
        }

    // (vi) loops-back successors of one vertex are totally ordered.
    for (auto& [w, v1] : rel.loops_back)
        for (auto& [w2, v2] : rel.loops_back) {
            if (w != w2 || v1 == v2) continue;
            if (!rel.loops_back.count({v1, v2}) && !rel.loops_back.count({v2, v1})) return false;
        }

    // (vii) distinct direct subordinates have no common predecessor.
    for (auto& [v1, u] : rel.direct_loops_back)
        for (auto& [v2, u2] : rel.direct_loops_back) {
            if (u != u2 || v1 == v2) continue;
            for (VertexId w : verts)
                if (lb_star.count({w, v1}) && lb_star.count({w, v2})) return false;
        }

    // Lemma 5.2: both norms strictly decrease along their step relations.
    if (!pairs_subset(rel.body_step,
                      [&](VertexId a, VertexId b) { return nm.bosn.at(a) > nm.bosn.at(b); }))
        return false;
    if (!pairs_subset(rel.descends,
                      [&](VertexId a, VertexId b) { return nm.enl.at(a) > nm.enl.at(b); }))
        return false;

    // The unlabeled elimination procedure succeeds on the underlying chart.
    if (!loop_elimination(c).lee) return false;
    return true;
}

bool prop_collapse(const ExprPtr& e) {
    LabeledInterpretation li = interpret_labeled(e);
    bool ok = true;
    CollapseObserver obs = [&](const CollapseStep& st) {
        if (!check_llee_witness(st.after).ok) ok = false;
        auto b = largest_bisimulation(st.before.chart, st.after.chart);
        if (!b || !verify_bisimulation(st.before.chart, st.after.chart, *b)) ok = false;
    };
    CollapseResult res = collapse_llee(li.labeled, PairStrategy::Exhaustive, obs);
    if (!ok) return false;
    if (!check_llee_witness(res.witness).ok) return false;
    // Collapsed: no two distinct bisimilar vertices.
    auto classes = bisimilarity_classes(res.witness.chart);
    for (auto& [v, rep] : classes)
        if (v != rep) return false;
    auto [qc, qmap] = quotient_collapse(li.labeled.chart);
    if (!isomorphic(res.witness.chart, qc)) return false;
    // The composed map is a functional bisimulation.
    Bisimulation b;
    for (auto& [v, w] : res.map) b.pairs.insert({v, w});
    return is_functional(b, li.labeled.chart, res.witness.chart) &&
           verify_bisimulation(li.labeled.chart, res.witness.chart, b);
}

bool prop_roundtrip_pipeline(const ExprPtr& e) {
    LabeledInterpretation li = interpret_labeled(e);
    CollapseResult res = collapse_llee(li.labeled);
    ExprPtr back = extract_solution(res.witness, res.witness.chart.start());
    auto b = largest_bisimulation(interpret(back).chart, li.labeled.chart);
    if (!b) return false;
    auto cert = prove_equal(e, back);
    if (!cert) return false;
    return check_certificate(*cert).ok;
}

bool prop_extraction_sound(const ExprPtr& e) {
    LabeledInterpretation li = interpret_labeled(e);
    ProvableSolution sol = extraction_solution(li.labeled);
    if (!verify_solution(sol)) return false;
    for (auto& [v, cert] : sol.certs)
        if (rsp_count(cert) != 0) return false;
    // Soundness: the principal value interprets to a bisimilar chart.
    auto b = largest_bisimulation(interpret(sol.principal()).chart, li.labeled.chart);
    return b.has_value();
}

bool prop_simplify(const ExprPtr& e) {
    auto [simple, cert] = simplify(e);
    if (!check_certificate(cert).ok) return false;
    if (!(cert.goal == Equation{e, simple})) return false;
    auto b = largest_bisimulation(interpret(e).chart, interpret(simple).chart);
    return b.has_value();
}

const std::map<std::string, Property>& suites() {
    static const std::map<std::string, Property> table = {
        {"roundtrip-format", prop_roundtrip_format},
        {"normedness", prop_normedness},
        {"llee-witness", prop_llee_witness},
        {"lemma-3.8", prop_lemma_relations},
        {"collapse", prop_collapse},
        {"roundtrip", prop_roundtrip_pipeline},
        {"extraction", prop_extraction_sound},
        {"simplify", prop_simplify},
    };
    return table;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> out;
        for (auto& [name, prop] : suites()) out.push_back(name);
        return out;
    }();
    return names;
}

SuiteResult run_suite(const std::string& name, const ExprGen& cfg, unsigned cases) {
    auto it = suites().find(name);
    if (it == suites().end()) throw std::invalid_argument("no such suite: " + name);
    const Property& prop = it->second;
    auto fails = [&](const ExprPtr& e) { return !prop(e); };

    SuiteResult res;
    res.name = name;
    ExprStream stream(cfg);
    for (unsigned i = 0; i < cases; ++i) {
        ExprPtr e = stream.next();
        ++res.cases;
        bool bad = false;
        try {
            bad = fails(e);
        } catch (const std::exception&) {
            bad = true;
        }
        if (bad) {
            ++res.failures;
            res.counterexamples.push_back(format_expr(shrink(e, fails)));
        }
    }
    return res;
}

}  // namespace bbp
