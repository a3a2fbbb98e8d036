#include "bbp/derivation.hpp"

#include <sstream>
#include <stdexcept>

namespace bbp {

namespace {

std::string key_of(const ProofStep& st) {
    std::ostringstream k;
    k << format_expr_compact(st.eq.lhs) << "=" << format_expr_compact(st.eq.rhs) << "|";
    if (const auto* ax = std::get_if<JustAxiom>(&st.just)) {
        k << ax->name;
        for (auto& [var, expr] : ax->subst) k << " " << var << "=" << format_expr_compact(expr);
    } else if (std::get_if<JustRefl>(&st.just)) {
        k << "refl";
    } else if (const auto* sy = std::get_if<JustSymm>(&st.just)) {
        k << "symm " << sy->premise;
    } else if (const auto* tr = std::get_if<JustTrans>(&st.just)) {
        k << "trans " << tr->first << " " << tr->second;
    } else if (const auto* cg = std::get_if<JustCong>(&st.just)) {
        k << "cong " << cg->path << " " << cg->premise;
    } else if (const auto* rs = std::get_if<JustRsp>(&st.just)) {
        k << "rsp " << rs->premise;
    }
    return k.str();
}

}  // namespace

int Derivation::add(ProofStep st) {
    std::string key = key_of(st);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    steps_.push_back(std::move(st));
    int idx = static_cast<int>(steps_.size()) - 1;
    memo_.emplace(std::move(key), idx);
    return idx;
}

int Derivation::axiom(const std::string& name, const Subst& subst) {
    auto inst = axiom_instance(name, subst);
    if (!inst) throw std::logic_error("bad axiom instantiation: " + name);
    return add({*inst, JustAxiom{name, subst}});
}

int Derivation::refl(const ExprPtr& e) { return add({Equation{e, e}, JustRefl{}}); }

int Derivation::symm(int premise) {
    const Equation& p = step(premise).eq;
    return add({Equation{p.rhs, p.lhs}, JustSymm{premise}});
}

int Derivation::trans(int first, int second) {
    if (first == second && expr_equal(step(first).eq.lhs, step(first).eq.rhs)) return first;
    Equation out{step(first).eq.lhs, step(second).eq.rhs};
    if (!expr_equal(step(first).eq.rhs, step(second).eq.lhs))
        throw std::logic_error("trans: premises do not chain");
    return add({std::move(out), JustTrans{first, second}});
}

int Derivation::cong(const TermPath& path, int premise, const ExprPtr& whole_lhs) {
    if (path.empty()) return premise;
    const Equation& p = step(premise).eq;
    auto sub = subterm_at(whole_lhs, path);
    if (!sub || !expr_equal(*sub, p.lhs)) throw std::logic_error("cong: premise lhs not at path");
    auto repl = replace_at(whole_lhs, path, p.rhs);
    if (!repl) throw std::logic_error("cong: bad path");
    return add({Equation{whole_lhs, *repl}, JustCong{path, premise}});
}

int Derivation::rsp(int premise) {
    const Equation& p = step(premise).eq;
    if (p.rhs->kind() != ExprKind::Sum || p.rhs->left()->kind() != ExprKind::Prod ||
        !expr_equal(p.rhs->left()->right(), p.lhs))
        throw std::logic_error("rsp: premise not of the fixed-point shape");
    return add({Equation{p.lhs, star(p.rhs->left()->left(), p.rhs->right())}, JustRsp{premise}});
}

int Derivation::import(const Certificate& cert) {
    std::vector<int> renumber(cert.steps.size());
    for (std::size_t i = 0; i < cert.steps.size(); ++i) {
        ProofStep st = cert.steps[i];
        if (auto* sy = std::get_if<JustSymm>(&st.just)) sy->premise = renumber[sy->premise];
        if (auto* tr = std::get_if<JustTrans>(&st.just)) {
            tr->first = renumber[tr->first];
            tr->second = renumber[tr->second];
        }
        if (auto* cg = std::get_if<JustCong>(&st.just)) cg->premise = renumber[cg->premise];
        if (auto* rs = std::get_if<JustRsp>(&st.just)) rs->premise = renumber[rs->premise];
        renumber[i] = add(std::move(st));
    }
    if (cert.steps.empty()) throw std::logic_error("import: empty certificate");
    return renumber.back();
}

Certificate Derivation::extract(int goal) const {
    std::vector<int> needed;
    std::vector<bool> mark(steps_.size(), false);
    std::vector<int> todo{goal};
    while (!todo.empty()) {
        int i = todo.back();
        todo.pop_back();
        if (mark[static_cast<std::size_t>(i)]) continue;
        mark[static_cast<std::size_t>(i)] = true;
        const Justification& j = steps_[static_cast<std::size_t>(i)].just;
        if (const auto* sy = std::get_if<JustSymm>(&j)) todo.push_back(sy->premise);
        if (const auto* tr = std::get_if<JustTrans>(&j)) {
            todo.push_back(tr->first);
            todo.push_back(tr->second);
        }
        if (const auto* cg = std::get_if<JustCong>(&j)) todo.push_back(cg->premise);
        if (const auto* rs = std::get_if<JustRsp>(&j)) todo.push_back(rs->premise);
    }
    std::vector<int> renumber(steps_.size(), -1);
    Certificate cert;
    for (std::size_t i = 0; i < steps_.size(); ++i) {
        if (!mark[i]) continue;
        ProofStep st = steps_[i];
        if (auto* sy = std::get_if<JustSymm>(&st.just)) sy->premise = renumber[sy->premise];
        if (auto* tr = std::get_if<JustTrans>(&st.just)) {
            tr->first = renumber[tr->first];
            tr->second = renumber[tr->second];
        }
        if (auto* cg = std::get_if<JustCong>(&st.just)) cg->premise = renumber[cg->premise];
        if (auto* rs = std::get_if<JustRsp>(&st.just)) rs->premise = renumber[rs->premise];
        renumber[i] = static_cast<int>(cert.steps.size());
        cert.steps.push_back(std::move(st));
    }
    cert.goal = cert.steps[static_cast<std::size_t>(renumber[goal])].eq;
    // The goal must be the final step; it is, because dependencies only
    // point backwards and `goal` has the highest index among marked steps.
    if (renumber[goal] != static_cast<int>(cert.steps.size()) - 1)
        throw std::logic_error("extract: goal is not the last marked step");
    return cert;
}

void Chain::by(int premise) {
    Equation p = d_.step(premise).eq;  // copy: trans() may reallocate the step list
    if (!expr_equal(p.lhs, cur_)) throw std::logic_error("chain: step does not apply");
    proof_ = proof_ < 0 ? premise : d_.trans(proof_, premise);
    cur_ = p.rhs;
}

void Chain::rw(const TermPath& path, int premise) {
    if (path.empty()) {
        by(premise);
        return;
    }
    int c = d_.cong(path, premise, cur_);
    proof_ = proof_ < 0 ? c : d_.trans(proof_, c);
    cur_ = d_.step(c).eq.rhs;
}

void Chain::rw_axiom(const TermPath& path, const std::string& name, const Subst& subst,
                     bool reversed) {
    int ax = d_.axiom(name, subst);
    rw(path, reversed ? d_.symm(ax) : ax);
}

int Chain::finish() { return proof_ < 0 ? d_.refl(start_) : proof_; }

TermPath big_sum_path(std::size_t i, std::size_t n) {
    if (n <= 1) return "";
    if (i == n - 1) return "R";
    return "L" + big_sum_path(i, n - 1);
}

// ── sum normalization ────────────────────────────────────────────────────

namespace {

bool is_sum(const ExprPtr& e) { return e->kind() == ExprKind::Sum; }
bool is_zero(const ExprPtr& e) { return e->kind() == ExprKind::Zero; }

// Normalizes the chain's term (a sum tree) to: right-nested, zero-free,
// sorted, duplicate-free summands; a lone 0 if everything vanishes.
void normalize_sum(Derivation& d, Chain& ch) {
    // Right-comb the whole tree.
    TermPath p;
    for (;;) {
        ExprPtr s = *subterm_at(ch.cur(), p);
        if (!is_sum(s)) break;
        while (is_sum(s->left())) {
            ch.rw_axiom(p, "B2",
                        {{"x", s->left()->left()}, {"y", s->left()->right()}, {"z", s->right()}});
            s = *subterm_at(ch.cur(), p);
        }
        p += 'R';
    }
    // Drop zero summands.
    p.clear();
    for (;;) {
        ExprPtr s = *subterm_at(ch.cur(), p);
        if (!is_sum(s)) break;
        if (is_zero(s->right())) {
            ch.rw_axiom(p, "B6", {{"x", s->left()}});
            if (!p.empty()) p.pop_back();
            continue;
        }
        if (is_zero(s->left())) {
            ch.rw_axiom(p, "B1", {{"x", s->left()}, {"y", s->right()}});
            ch.rw_axiom(p, "B6", {{"x", s->right()}});
            if (!p.empty()) p.pop_back();
            continue;
        }
        p += 'R';
    }
    // Bubble sort the spine by formatted text.
    for (bool swapped = true; swapped;) {
        swapped = false;
        p.clear();
        for (;;) {
            ExprPtr s = *subterm_at(ch.cur(), p);
            if (!is_sum(s)) break;
            ExprPtr x = s->left(), rest = s->right();
            if (is_sum(rest)) {
                ExprPtr y = rest->left();
                if (format_expr(y) < format_expr(x)) {
                    ch.rw_axiom(p, "B2", {{"x", x}, {"y", y}, {"z", rest->right()}}, true);
                    ch.rw_axiom(p + "L", "B1", {{"x", x}, {"y", y}});
                    ch.rw_axiom(p, "B2", {{"x", y}, {"y", x}, {"z", rest->right()}});
                    swapped = true;
                }
            } else if (format_expr(rest) < format_expr(x)) {
                ch.rw_axiom(p, "B1", {{"x", x}, {"y", rest}});
                swapped = true;
            }
            p += 'R';
        }
    }
    // Merge duplicate neighbours.
    p.clear();
    for (;;) {
        ExprPtr s = *subterm_at(ch.cur(), p);
        if (!is_sum(s)) break;
        ExprPtr x = s->left(), rest = s->right();
        if (is_sum(rest) && expr_equal(x, rest->left())) {
            ch.rw_axiom(p, "B2", {{"x", x}, {"y", x}, {"z", rest->right()}}, true);
            ch.rw_axiom(p + "L", "B3", {{"x", x}});
            continue;
        }
        if (!is_sum(rest) && expr_equal(x, rest)) {
            ch.rw_axiom(p, "B3", {{"x", x}});
            if (!p.empty()) p.pop_back();
            continue;
        }
        p += 'R';
    }
}

}  // namespace

int prove_sum_eq(Derivation& d, const ExprPtr& from, const ExprPtr& to) {
    if (expr_equal(from, to)) return d.refl(from);
    Chain a(d, from), b(d, to);
    normalize_sum(d, a);
    normalize_sum(d, b);
    if (!expr_equal(a.cur(), b.cur()))
        throw std::logic_error("prove_sum_eq: summand sets differ: " + format_expr(from) +
                               "  vs  " + format_expr(to));
    int ia = a.finish(), ib = b.finish();
    return d.trans(ia, d.symm(ib));
}

}  // namespace bbp
