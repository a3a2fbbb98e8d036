#include "bbp/proof.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "bbp/collapse.hpp"

namespace bbp {

ExprPtr solution_shape(const Chart& c, VertexId v, const std::map<VertexId, ExprPtr>& values) {
    std::vector<ExprPtr> ticks, prods;
    for (const Transition& t : c.out(v)) {
        if (c.is_tick(t.tgt))
            ticks.push_back(act(t.act.name));
        else
            prods.push_back(prod(act(t.act.name), values.at(t.tgt)));
    }
    return sum(big_sum(ticks), big_sum(prods));
}

bool verify_solution(const ProvableSolution& sol, std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    for (VertexId v : sol.chart.vertices()) {
        if (sol.chart.is_tick(v)) continue;
        auto val = sol.values.find(v);
        if (val == sol.values.end()) return fail("missing value at vertex " + std::to_string(v));
        auto cert = sol.certs.find(v);
        if (cert == sol.certs.end())
            return fail("missing certificate at vertex " + std::to_string(v));
        CheckResult res = check_certificate(cert->second);
        if (!res.ok)
            return fail("certificate at vertex " + std::to_string(v) + ": " + res.reason);
        Equation want{val->second, solution_shape(sol.chart, v, sol.values)};
        if (!(cert->second.goal == want))
            return fail("certificate at vertex " + std::to_string(v) +
                        " proves the wrong equation");
    }
    return true;
}

// ── shared helpers ───────────────────────────────────────────────────────

namespace {

// Distributes a product whose left factor is a sum tree of actions and
// action-products: (x+y).z via B4, 0.z via B7, (x.y).z via B5.
void distribute(Derivation& d, Chain& ch, const TermPath& p) {
    ExprPtr e = *subterm_at(ch.cur(), p);
    if (e->kind() != ExprKind::Prod) return;
    ExprPtr a = e->left();
    switch (a->kind()) {
        case ExprKind::Sum:
            ch.rw_axiom(p, "B4", {{"x", a->left()}, {"y", a->right()}, {"z", e->right()}});
            distribute(d, ch, p + "L");
            distribute(d, ch, p + "R");
            break;
        case ExprKind::Zero:
            ch.rw_axiom(p, "B7", {{"x", e->right()}});
            break;
        case ExprKind::Prod:
            ch.rw_axiom(p, "B5", {{"x", a->left()}, {"y", a->right()}, {"z", e->right()}});
            break;
        default:
            break;
    }
}

// Turns a sum of products with common right factor z into (sum).z; a
// literal 0 becomes 0.z.
void factor_right(Chain& ch, const TermPath& p, const ExprPtr& z) {
    ExprPtr e = *subterm_at(ch.cur(), p);
    if (e->kind() == ExprKind::Zero) {
        ch.rw_axiom(p, "B7", {{"x", z}}, true);
        return;
    }
    if (e->kind() == ExprKind::Sum) {
        factor_right(ch, p + "L", z);
        e = *subterm_at(ch.cur(), p);
        ExprPtr left = e->left(), right = e->right();
        if (left->kind() != ExprKind::Prod || right->kind() != ExprKind::Prod ||
            !expr_equal(left->right(), z) || !expr_equal(right->right(), z))
            throw std::logic_error("factor_right: summand without the common factor");
        ch.rw_axiom(p, "B4", {{"x", left->left()}, {"y", right->left()}, {"z", z}}, true);
        return;
    }
    if (e->kind() == ExprKind::Prod && expr_equal(e->right(), z)) return;
    throw std::logic_error("factor_right: not a sum of products");
}

ExprPtr ft_shape(const ExprPtr& e) {
    std::vector<ExprPtr> ticks, prods;
    for (const Derivative& dv : action_derivatives(e)) {
        if (dv.is_tick())
            ticks.push_back(act(dv.act.name));
        else
            prods.push_back(prod(act(dv.act.name), dv.target));
    }
    return sum(big_sum(ticks), big_sum(prods));
}

class FtBuilder {
public:
    explicit FtBuilder(Derivation& d) : d_(d) {}

    // Proof of e = ft_shape(e).
    int build(const ExprPtr& e) {
        auto it = memo_.find(e);
        if (it != memo_.end()) return it->second;
        int idx = -1;
        switch (e->kind()) {
            case ExprKind::Zero:
                idx = d_.symm(d_.axiom("B6", {{"x", zero()}}));
                break;
            case ExprKind::Act:
                idx = d_.symm(d_.axiom("B6", {{"x", e}}));
                break;
            case ExprKind::Sum: {
                Chain ch(d_, e);
                ch.rw("L", build(e->left()));
                ch.rw("R", build(e->right()));
                ch.rw("", prove_sum_eq(d_, ch.cur(), ft_shape(e)));
                idx = ch.finish();
                break;
            }
            case ExprKind::Prod: {
                Chain ch(d_, e);
                ch.rw("L", build(e->left()));
                distribute(d_, ch, "");
                ch.rw("", prove_sum_eq(d_, ch.cur(), ft_shape(e)));
                idx = ch.finish();
                break;
            }
            case ExprKind::Star: {
                Chain ch(d_, e);
                ch.rw_axiom("", "BKS1", {{"x", e->body()}, {"y", e->exit()}}, true);
                ch.rw("LL", build(e->body()));
                distribute(d_, ch, "L");
                ch.rw("R", build(e->exit()));
                ch.rw("", prove_sum_eq(d_, ch.cur(), ft_shape(e)));
                idx = ch.finish();
                break;
            }
        }
        memo_.emplace(e, idx);
        return idx;
    }

private:
    Derivation& d_;
    std::unordered_map<ExprPtr, int, ExprHash, ExprEq> memo_;
};

}  // namespace

Certificate derive_ft(const ExprPtr& e) {
    Derivation d;
    FtBuilder ft(d);
    return d.extract(ft.build(e));
}

ProvableSolution identity_solution(const ExprPtr& e) {
    Interpretation in = interpret(e);
    ProvableSolution sol;
    sol.chart = in.chart;
    for (VertexId v : in.chart.vertices()) {
        if (in.chart.is_tick(v)) continue;
        sol.values[v] = in.expr_of.at(v);
    }
    Derivation d;
    FtBuilder ft(d);
    for (auto& [v, x] : sol.values) {
        int idx = ft.build(x);
        int reshaped =
            d.trans(idx, prove_sum_eq(d, ft_shape(x), solution_shape(sol.chart, v, sol.values)));
        sol.certs[v] = d.extract(reshaped);
    }
    return sol;
}

ProvableSolution transfer_solution(const ProvableSolution& sol, const Chart& c1,
                                   const std::map<VertexId, VertexId>& phi) {
    // phi must be a (total) functional bisimulation c1 -> sol.chart.
    Bisimulation b;
    for (auto& [v, w] : phi) b.pairs.insert({v, w});
    if (!is_functional(b, c1, sol.chart) || !verify_bisimulation(c1, sol.chart, b))
        throw std::invalid_argument("transfer_solution: not a functional bisimulation");
    std::string why;
    if (!verify_solution(sol, &why))
        throw std::invalid_argument("transfer_solution: bad solution: " + why);

    ProvableSolution out;
    out.chart = c1;
    for (VertexId v : c1.vertices()) {
        if (c1.is_tick(v)) continue;
        out.values[v] = sol.values.at(phi.at(v));
    }
    Derivation d;
    for (auto& [v, x] : out.values) {
        int idx = d.import(sol.certs.at(phi.at(v)));
        ExprPtr from = solution_shape(sol.chart, phi.at(v), sol.values);
        ExprPtr to = solution_shape(c1, v, out.values);
        int reshaped = d.trans(idx, prove_sum_eq(d, from, to));
        out.certs[v] = d.extract(reshaped);
    }
    return out;
}

// ── extraction and uniqueness certificates ───────────────────────────────

namespace {

// Transitions from w in the grouping the extraction formulas use.
struct Grouped {
    std::vector<Transition> self_entries, other_entries, ticks, body_to, body_other;
};

Grouped group_out(const LabeledChart& lc, VertexId w, std::optional<VertexId> to) {
    Grouped g;
    std::vector<Transition> out = lc.chart.out(w);
    std::stable_sort(out.begin(), out.end(), [](const Transition& a, const Transition& b) {
        if (a.tgt != b.tgt) return a.tgt < b.tgt;
        return a.act < b.act;
    });
    for (const Transition& t : out) {
        if (lc.is_entry(t)) {
            (t.tgt == w ? g.self_entries : g.other_entries).push_back(t);
        } else if (lc.chart.is_tick(t.tgt)) {
            g.ticks.push_back(t);
        } else if (to && t.tgt == *to) {
            g.body_to.push_back(t);
        } else {
            g.body_other.push_back(t);
        }
    }
    return g;
}

// Shared certificate factory for Lemma-style relative equations and the
// per-vertex solution equations, parameterized over the solution values.
class SolutionCerts {
public:
    SolutionCerts(Derivation& d, const LabeledChart& lc, std::map<VertexId, ExprPtr> values,
                  std::map<VertexId, int> value_certs, bool use_rsp)
        : d_(d),
          lc_(lc),
          nm_(norms(lc)),
          values_(std::move(values)),
          value_certs_(std::move(value_certs)),
          use_rsp_(use_rsp) {}

    ExprPtr hat_solution(VertexId w) { return extract_solution(lc_, w, &table_); }
    ExprPtr hat_relative(VertexId w, VertexId v) { return extract_relative(lc_, w, v, &table_); }

    // With use_rsp: proof of sol(w) = t^(w|v).sol(v) via the fixed-point
    // rule; without: proof of s^(w) = t^(w|v).s^(v) using BKS2 only.
    int relative(VertexId w, VertexId v) {
        auto key = std::make_pair(w, v);
        auto it = rel_memo_.find(key);
        if (it != rel_memo_.end()) return it->second;

        const Grouped g = group_out(lc_, w, v);
        if (!g.ticks.empty())
            throw std::logic_error("relative certificate: loop body reaches the sink");
        ExprPtr t_wv = hat_relative(w, v);
        const ExprPtr head = t_wv->body();  // shared entry part
        const ExprPtr tail = t_wv->exit();

        int idx = use_rsp_ ? relative_rsp(w, v, g, head, tail) : relative_bks(w, v, g, head, tail);
        rel_memo_.emplace(key, idx);
        return idx;
    }

    // Proof of sol(w) = rhs where rhs is the solution shape (use_rsp) or
    // of s^(w) = shape (extraction route).
    int solution(VertexId w) {
        auto it = sol_memo_.find(w);
        if (it != sol_memo_.end()) return it->second;
        int idx = use_rsp_ ? solution_rsp(w) : solution_bks(w);
        sol_memo_.emplace(w, idx);
        return idx;
    }

    const std::set<std::string>& events_of(int idx) { return events_[idx]; }

private:
    ExprPtr value(VertexId v) { return use_rsp_ ? values_.at(v) : hat_solution(v); }

    void check_measure(VertexId v, VertexId w, VertexId v2, VertexId w2) const {
        auto m1 = std::make_pair(nm_.enl.at(v), nm_.bosn.at(w));
        auto m2 = std::make_pair(nm_.enl.at(v2), nm_.bosn.at(w2));
        if (!(m2 < m1)) throw std::logic_error("relative certificate: measure did not decrease");
    }

    void note(int idx, const std::string& ev) { events_[idx].insert(ev); }
    void merge(int idx, int from) {
        auto it = events_.find(from);
        if (it != events_.end()) events_[idx].insert(it->second.begin(), it->second.end());
    }

    int relative_rsp(VertexId w, VertexId v, const Grouped& g, const ExprPtr& head,
                     const ExprPtr& tail) {
        Chain ch(d_, values_.at(w));
        ch.by(value_certs_.at(w));

        // Regroup the solution condition into entry and body parts.
        std::vector<ExprPtr> lparts, rparts;
        for (const Transition& t : g.self_entries)
            lparts.push_back(prod(act(t.act.name), values_.at(w)));
        for (const Transition& t : g.other_entries)
            lparts.push_back(prod(act(t.act.name), values_.at(t.tgt)));
        for (const Transition& t : g.body_to) rparts.push_back(prod(act(t.act.name), values_.at(v)));
        for (const Transition& t : g.body_other)
            rparts.push_back(prod(act(t.act.name), values_.at(t.tgt)));
        ExprPtr grouped = sum(big_sum(lparts), big_sum(rparts));
        ch.rw("", prove_sum_eq(d_, ch.cur(), grouped));

        std::string event = "unfold " + std::to_string(w) + "|" + std::to_string(v);

        // Entry group -> head.sol(w).
        std::size_t nl = lparts.size();
        for (std::size_t j = 0; j < g.other_entries.size(); ++j) {
            const Transition& t = g.other_entries[j];
            check_measure(v, w, w, t.tgt);
            TermPath p = "L" + big_sum_path(g.self_entries.size() + j, nl) + "R";
            int sub = relative(t.tgt, w);
            ch.rw(p, sub);
            TermPath q = "L" + big_sum_path(g.self_entries.size() + j, nl);
            ExprPtr el = *subterm_at(ch.cur(), q);
            ch.rw_axiom(q, "B5",
                        {{"x", el->left()}, {"y", el->right()->left()}, {"z", el->right()->right()}},
                        true);
        }
        factor_right(ch, "L", values_.at(w));
        // Body group -> tail.sol(v).
        std::size_t nr = rparts.size();
        for (std::size_t j = 0; j < g.body_other.size(); ++j) {
            const Transition& t = g.body_other[j];
            check_measure(v, w, v, t.tgt);
            TermPath p = "R" + big_sum_path(g.body_to.size() + j, nr) + "R";
            int sub = relative(t.tgt, v);
            ch.rw(p, sub);
            TermPath q = "R" + big_sum_path(g.body_to.size() + j, nr);
            ExprPtr el = *subterm_at(ch.cur(), q);
            ch.rw_axiom(q, "B5",
                        {{"x", el->left()}, {"y", el->right()->left()}, {"z", el->right()->right()}},
                        true);
        }
        factor_right(ch, "R", values_.at(v));

        // The factored entry and body parts are syntactically head and tail.
        ExprPtr premise = ch.cur();
        if (!expr_equal(premise->left()->left(), head) ||
            !expr_equal(premise->right()->left(), tail))
            throw std::logic_error("relative certificate: factored parts differ from extraction");
        int star_idx = d_.rsp(ch.finish());
        int bks = d_.axiom("BKS2", {{"x", head}, {"y", tail}, {"z", values_.at(v)}});
        int idx = d_.trans(star_idx, d_.symm(bks));
        note(idx, event);
        for (const Transition& t : g.other_entries) merge(idx, rel_memo_.at({t.tgt, w}));
        for (const Transition& t : g.body_other) merge(idx, rel_memo_.at({t.tgt, v}));
        return idx;
    }

    int relative_bks(VertexId w, VertexId v, const Grouped& g, const ExprPtr& head,
                     const ExprPtr& tail) {
        // s^(w) = head * F; rewrite F's summands toward tail.sol(v).
        ExprPtr sw = hat_solution(w);
        Chain ch(d_, sw);
        std::size_t n = g.body_to.size() + g.body_other.size();
        // Order of F's products follows group_out's (tgt, action) order on
        // all body transitions jointly; recover per-element positions.
        std::vector<Transition> body;
        for (const Transition& t : lc_.chart.out(w))
            if (!lc_.is_entry(t)) body.push_back(t);
        std::stable_sort(body.begin(), body.end(), [](const Transition& a, const Transition& b) {
            if (a.tgt != b.tgt) return a.tgt < b.tgt;
            return a.act < b.act;
        });
        for (std::size_t k = 0; k < body.size(); ++k) {
            const Transition& t = body[k];
            if (t.tgt == v) continue;
            check_measure(v, w, v, t.tgt);
            TermPath p = "R" + big_sum_path(k, n) + "R";
            ch.rw(p, relative(t.tgt, v));
            TermPath q = "R" + big_sum_path(k, n);
            ExprPtr el = *subterm_at(ch.cur(), q);
            ch.rw_axiom(q, "B5",
                        {{"x", el->left()}, {"y", el->right()->left()}, {"z", el->right()->right()}},
                        true);
        }
        // Reorder into tail's grouping and factor.
        std::vector<ExprPtr> want;
        for (const Transition& t : g.body_to) want.push_back(prod(act(t.act.name), value(v)));
        for (const Transition& t : g.body_other)
            want.push_back(prod(prod(act(t.act.name), hat_relative(t.tgt, v)), value(v)));
        if (n > 0) ch.rw("R", prove_sum_eq(d_, *subterm_at(ch.cur(), "R"), big_sum(want)));
        factor_right(ch, "R", value(v));
        ExprPtr cur = ch.cur();
        if (!expr_equal(cur->exit()->left(), tail))
            throw std::logic_error("relative certificate: factored tail differs from extraction");
        ch.rw_axiom("", "BKS2", {{"x", head}, {"y", tail}, {"z", value(v)}}, true);
        return ch.finish();
    }

    int solution_rsp(VertexId w) {
        const Grouped g = group_out(lc_, w, std::nullopt);
        ExprPtr sw_hat = hat_solution(w);
        Chain ch(d_, values_.at(w));
        ch.by(value_certs_.at(w));
        std::string event = "unfold-top " + std::to_string(w);

        bool has_entries = !g.self_entries.empty() || !g.other_entries.empty();
        // Body-with-ticks part in extraction order, with given values.
        std::vector<ExprPtr> rparts;
        for (const Transition& t : g.ticks) rparts.push_back(act(t.act.name));
        for (const Transition& t : g.body_other)
            rparts.push_back(prod(act(t.act.name), values_.at(t.tgt)));

        int idx;
        if (!has_entries) {
            ch.rw("", prove_sum_eq(d_, ch.cur(), big_sum(rparts)));
            std::size_t n = rparts.size();
            for (std::size_t j = 0; j < g.body_other.size(); ++j) {
                const Transition& t = g.body_other[j];
                int sub = solution(t.tgt);
                TermPath p = big_sum_path(g.ticks.size() + j, n) + "R";
                ch.rw(p, sub);
            }
            ExprPtr f_hat = ch.cur();
            if (!expr_equal(f_hat, sw_hat->exit()))
                throw std::logic_error("solution certificate: tail differs from extraction");
            // 0*F = 0.(0*F)+F = 0+F = F+0 = F, spliced in reverse.
            Chain aux(d_, sw_hat);
            aux.rw_axiom("", "BKS1", {{"x", zero()}, {"y", f_hat}}, true);
            aux.rw_axiom("L", "B7", {{"x", sw_hat}});
            aux.rw_axiom("", "B1", {{"x", zero()}, {"y", f_hat}});
            aux.rw_axiom("", "B6", {{"x", f_hat}});
            idx = d_.trans(ch.finish(), d_.symm(aux.finish()));
            for (const Transition& t : g.body_other) merge(idx, sol_memo_.at(t.tgt));
            return idx;
        }

        std::vector<ExprPtr> lparts;
        for (const Transition& t : g.self_entries)
            lparts.push_back(prod(act(t.act.name), values_.at(w)));
        for (const Transition& t : g.other_entries)
            lparts.push_back(prod(act(t.act.name), values_.at(t.tgt)));
        ExprPtr grouped = sum(big_sum(lparts), big_sum(rparts));
        ch.rw("", prove_sum_eq(d_, ch.cur(), grouped));

        std::size_t nl = lparts.size();
        for (std::size_t j = 0; j < g.other_entries.size(); ++j) {
            const Transition& t = g.other_entries[j];
            TermPath p = "L" + big_sum_path(g.self_entries.size() + j, nl) + "R";
            int sub = relative(t.tgt, w);
            ch.rw(p, sub);
            TermPath q = "L" + big_sum_path(g.self_entries.size() + j, nl);
            ExprPtr el = *subterm_at(ch.cur(), q);
            ch.rw_axiom(q, "B5",
                        {{"x", el->left()}, {"y", el->right()->left()}, {"z", el->right()->right()}},
                        true);
        }
        factor_right(ch, "L", values_.at(w));
        std::size_t nr = rparts.size();
        for (std::size_t j = 0; j < g.body_other.size(); ++j) {
            const Transition& t = g.body_other[j];
            if (!(nm_.bosn.at(t.tgt) < nm_.bosn.at(w)))
                throw std::logic_error("solution certificate: body norm did not decrease");
            int sub = solution(t.tgt);
            TermPath p = "R" + big_sum_path(g.ticks.size() + j, nr) + "R";
            ch.rw(p, sub);
        }
        ExprPtr premise = ch.cur();
        if (!expr_equal(premise->left()->left(), sw_hat->body()) ||
            !expr_equal(premise->right(), sw_hat->exit()))
            throw std::logic_error("solution certificate: parts differ from extraction");
        idx = d_.rsp(ch.finish());
        note(idx, event);
        for (const Transition& t : g.other_entries) merge(idx, rel_memo_.at({t.tgt, w}));
        for (const Transition& t : g.body_other) merge(idx, sol_memo_.at(t.tgt));
        return idx;
    }

    int solution_bks(VertexId w) {
        const Grouped g = group_out(lc_, w, std::nullopt);
        ExprPtr sw = hat_solution(w);
        const ExprPtr head = sw->body();
        Chain ch(d_, sw);
        ch.rw_axiom("", "BKS1", {{"x", head}, {"y", sw->exit()}}, true);
        distribute(d_, ch, "L");
        // The distributed entry part mirrors head's big_sum: replace each
        // t^(u|w).s^(w) by s^(u).
        std::size_t nl = g.self_entries.size() + g.other_entries.size();
        for (std::size_t j = 0; j < g.other_entries.size(); ++j) {
            const Transition& t = g.other_entries[j];
            TermPath p = "L" + big_sum_path(g.self_entries.size() + j, nl) + "R";
            ch.rw(p, d_.symm(relative(t.tgt, w)));
        }
        ch.rw("", prove_sum_eq(d_, ch.cur(), hat_shape(w)));
        return ch.finish();
    }

    // Solution shape at w with this builder's values.
    ExprPtr hat_shape(VertexId w) {
        std::map<VertexId, ExprPtr> vals;
        for (VertexId v : lc_.chart.vertices())
            if (!lc_.chart.is_tick(v)) vals[v] = value(v);
        return solution_shape(lc_.chart, w, vals);
    }

    Derivation& d_;
    const LabeledChart& lc_;
    Norms nm_;
    ExtractionTable table_;
    std::map<VertexId, ExprPtr> values_;
    std::map<VertexId, int> value_certs_;
    bool use_rsp_;
    std::map<std::pair<VertexId, VertexId>, int> rel_memo_;
    std::map<VertexId, int> sol_memo_;
    std::map<int, std::set<std::string>> events_;
};

}  // namespace

ProvableSolution extraction_solution(const LabeledChart& lc) {
    WitnessReport rep = check_llee_witness(lc);
    if (!rep.ok) throw std::invalid_argument("extraction_solution: invalid witness");
    Derivation d;
    SolutionCerts certs(d, lc, {}, {}, /*use_rsp=*/false);
    ProvableSolution sol;
    sol.chart = lc.chart;
    for (VertexId v : lc.chart.vertices()) {
        if (lc.chart.is_tick(v)) continue;
        sol.values[v] = certs.hat_solution(v);
    }
    for (VertexId v : lc.chart.vertices()) {
        if (lc.chart.is_tick(v)) continue;
        sol.certs[v] = d.extract(certs.solution(v));
    }
    return sol;
}

UnifyResult unify_solutions(const LabeledChart& lc, const ProvableSolution& sol) {
    WitnessReport rep = check_llee_witness(lc);
    if (!rep.ok) throw std::invalid_argument("unify_solutions: invalid witness");
    std::string why;
    if (!verify_solution(sol, &why))
        throw std::invalid_argument("unify_solutions: bad solution: " + why);
    if (!(sol.chart == lc.chart))
        throw std::invalid_argument("unify_solutions: solution is for a different chart");

    Derivation d;
    std::map<VertexId, int> value_certs;
    for (auto& [v, cert] : sol.certs) value_certs[v] = d.import(cert);
    SolutionCerts certs(d, lc, sol.values, value_certs, /*use_rsp=*/true);
    UnifyResult res;
    for (VertexId v : lc.chart.vertices()) {
        if (lc.chart.is_tick(v)) continue;
        int idx = certs.solution(v);
        res.certs[v] = d.extract(idx);
        res.unfoldings[v] = static_cast<unsigned>(certs.events_of(idx).size());
    }
    return res;
}

std::optional<Certificate> prove_equal(const ExprPtr& e1, const ExprPtr& e2) {
    LabeledInterpretation li1 = interpret_labeled(e1);
    LabeledInterpretation li2 = interpret_labeled(e2);
    if (!largest_bisimulation(li1.labeled.chart, li2.labeled.chart)) return std::nullopt;

    CollapseResult col = collapse_llee(li1.labeled);
    ProvableSolution ext = extraction_solution(col.witness);

    ProvableSolution sol1 = transfer_solution(ext, li1.labeled.chart, col.map);
    auto b2 = largest_bisimulation(li2.labeled.chart, col.witness.chart);
    if (!b2) throw std::logic_error("prove_equal: collapse not bisimilar to the second chart");
    auto phi2 = functional_map(*b2, li2.labeled.chart, col.witness.chart);
    if (!phi2) throw std::logic_error("prove_equal: collapse map not functional");
    ProvableSolution sol2 = transfer_solution(ext, li2.labeled.chart, *phi2);

    ProvableSolution id1 = identity_solution(e1);
    ProvableSolution id2 = identity_solution(e2);

    UnifyResult u1a = unify_solutions(li1.labeled, id1);
    UnifyResult u1b = unify_solutions(li1.labeled, sol1);
    UnifyResult u2a = unify_solutions(li2.labeled, id2);
    UnifyResult u2b = unify_solutions(li2.labeled, sol2);

    Derivation d;
    int ia = d.import(u1a.certs.at(li1.labeled.chart.start()));
    int ib = d.import(u1b.certs.at(li1.labeled.chart.start()));
    int left = d.trans(ia, d.symm(ib));  // e1 = principal value of the collapse
    int ic = d.import(u2a.certs.at(li2.labeled.chart.start()));
    int id = d.import(u2b.certs.at(li2.labeled.chart.start()));
    int right = d.trans(ic, d.symm(id));  // e2 = the same principal value
    int final_idx = d.trans(left, d.symm(right));
    return d.extract(final_idx);
}

}  // namespace bbp
