#include "bbp/proof_types.hpp"

#include <sstream>

namespace bbp {

std::optional<ExprPtr> subterm_at(const ExprPtr& e, const TermPath& p) {
    ExprPtr cur = e;
    for (char c : p) {
        if (!cur->left() || !cur->right()) return std::nullopt;
        if (c == 'L')
            cur = cur->left();
        else if (c == 'R')
            cur = cur->right();
        else
            return std::nullopt;
    }
    return cur;
}

std::optional<ExprPtr> replace_at(const ExprPtr& e, const TermPath& p, const ExprPtr& repl) {
    if (p.empty()) return repl;
    if (!e->left() || !e->right()) return std::nullopt;
    char c = p[0];
    TermPath rest = p.substr(1);
    ExprPtr l = e->left(), r = e->right();
    if (c == 'L') {
        auto sub = replace_at(l, rest, repl);
        if (!sub) return std::nullopt;
        l = *sub;
    } else if (c == 'R') {
        auto sub = replace_at(r, rest, repl);
        if (!sub) return std::nullopt;
        r = *sub;
    } else {
        return std::nullopt;
    }
    switch (e->kind()) {
        case ExprKind::Sum: return sum(l, r);
        case ExprKind::Prod: return prod(l, r);
        case ExprKind::Star: return star(l, r);
        default: return std::nullopt;
    }
}

namespace {

struct Schema {
    std::vector<std::string> vars;
    Equation (*build)(const Subst&);
};

ExprPtr v(const Subst& s, const char* n) { return s.at(n); }

const std::map<std::string, Schema>& schemas() {
    static const std::map<std::string, Schema> table = {
        {"B1", {{"x", "y"}, [](const Subst& s) {
                    return Equation{sum(v(s, "x"), v(s, "y")), sum(v(s, "y"), v(s, "x"))};
                }}},
        {"B2", {{"x", "y", "z"}, [](const Subst& s) {
                    return Equation{sum(sum(v(s, "x"), v(s, "y")), v(s, "z")),
                                    sum(v(s, "x"), sum(v(s, "y"), v(s, "z")))};
                }}},
        {"B3", {{"x"}, [](const Subst& s) {
                    return Equation{sum(v(s, "x"), v(s, "x")), v(s, "x")};
                }}},
        {"B4", {{"x", "y", "z"}, [](const Subst& s) {
                    return Equation{prod(sum(v(s, "x"), v(s, "y")), v(s, "z")),
                                    sum(prod(v(s, "x"), v(s, "z")), prod(v(s, "y"), v(s, "z")))};
                }}},
        {"B5", {{"x", "y", "z"}, [](const Subst& s) {
                    return Equation{prod(prod(v(s, "x"), v(s, "y")), v(s, "z")),
                                    prod(v(s, "x"), prod(v(s, "y"), v(s, "z")))};
                }}},
        {"B6", {{"x"}, [](const Subst& s) {
                    return Equation{sum(v(s, "x"), zero()), v(s, "x")};
                }}},
        {"B7", {{"x"}, [](const Subst& s) {
                    return Equation{prod(zero(), v(s, "x")), zero()};
                }}},
        {"BKS1", {{"x", "y"}, [](const Subst& s) {
                      return Equation{sum(prod(v(s, "x"), star(v(s, "x"), v(s, "y"))), v(s, "y")),
                                      star(v(s, "x"), v(s, "y"))};
                  }}},
        {"BKS2", {{"x", "y", "z"}, [](const Subst& s) {
                      return Equation{prod(star(v(s, "x"), v(s, "y")), v(s, "z")),
                                      star(v(s, "x"), prod(v(s, "y"), v(s, "z")))};
                  }}},
    };
    return table;
}

}  // namespace

bool is_axiom_name(const std::string& name) { return schemas().count(name) > 0; }

const std::vector<std::string>& axiom_vars(const std::string& name) {
    return schemas().at(name).vars;
}

std::optional<Equation> axiom_instance(const std::string& name, const Subst& subst) {
    auto it = schemas().find(name);
    if (it == schemas().end()) return std::nullopt;
    for (const std::string& var : it->second.vars)
        if (!subst.count(var)) return std::nullopt;
    if (subst.size() != it->second.vars.size()) return std::nullopt;
    return it->second.build(subst);
}

CheckResult check_certificate(const Certificate& cert) {
    auto fail = [](int i, const std::string& why) { return CheckResult{false, i, why}; };
    for (std::size_t i = 0; i < cert.steps.size(); ++i) {
        const ProofStep& st = cert.steps[i];
        const Equation& eq = st.eq;
        if (!eq.lhs || !eq.rhs) return fail(static_cast<int>(i), "malformed equation");
        auto in_range = [&](int j) { return j >= 0 && static_cast<std::size_t>(j) < i; };
        if (const auto* ax = std::get_if<JustAxiom>(&st.just)) {
            auto inst = axiom_instance(ax->name, ax->subst);
            if (!inst) return fail(static_cast<int>(i), "bad axiom instantiation");
            if (!(eq == *inst)) return fail(static_cast<int>(i), "equation is not that instance");
        } else if (std::get_if<JustRefl>(&st.just)) {
            if (!expr_equal(eq.lhs, eq.rhs)) return fail(static_cast<int>(i), "sides differ");
        } else if (const auto* sy = std::get_if<JustSymm>(&st.just)) {
            if (!in_range(sy->premise)) return fail(static_cast<int>(i), "premise out of range");
            const Equation& p = cert.steps[sy->premise].eq;
            if (!expr_equal(eq.lhs, p.rhs) || !expr_equal(eq.rhs, p.lhs))
                return fail(static_cast<int>(i), "not the converse of the premise");
        } else if (const auto* tr = std::get_if<JustTrans>(&st.just)) {
            if (!in_range(tr->first) || !in_range(tr->second))
                return fail(static_cast<int>(i), "premise out of range");
            const Equation& p = cert.steps[tr->first].eq;
            const Equation& q = cert.steps[tr->second].eq;
            if (!expr_equal(p.rhs, q.lhs)) return fail(static_cast<int>(i), "premises do not chain");
            if (!expr_equal(eq.lhs, p.lhs) || !expr_equal(eq.rhs, q.rhs))
                return fail(static_cast<int>(i), "conclusion does not match the chain");
        } else if (const auto* cg = std::get_if<JustCong>(&st.just)) {
            if (!in_range(cg->premise)) return fail(static_cast<int>(i), "premise out of range");
            const Equation& p = cert.steps[cg->premise].eq;
            auto lsub = subterm_at(eq.lhs, cg->path);
            if (!lsub || !expr_equal(*lsub, p.lhs))
                return fail(static_cast<int>(i), "context does not contain the premise lhs");
            auto repl = replace_at(eq.lhs, cg->path, p.rhs);
            if (!repl || !expr_equal(*repl, eq.rhs))
                return fail(static_cast<int>(i), "conclusion is not the one-hole replacement");
        } else if (const auto* rs = std::get_if<JustRsp>(&st.just)) {
            if (!in_range(rs->premise)) return fail(static_cast<int>(i), "premise out of range");
            const Equation& p = cert.steps[rs->premise].eq;
            // Premise must be literally x = (y.x)+z.
            if (p.rhs->kind() != ExprKind::Sum)
                return fail(static_cast<int>(i), "premise rhs is not a sum");
            const ExprPtr& head = p.rhs->left();
            const ExprPtr& tail = p.rhs->right();
            if (head->kind() != ExprKind::Prod)
                return fail(static_cast<int>(i), "premise head is not a product");
            if (!expr_equal(head->right(), p.lhs))
                return fail(static_cast<int>(i), "premise is not of the fixed-point shape");
            if (!expr_equal(eq.lhs, p.lhs) || !expr_equal(eq.rhs, star(head->left(), tail)))
                return fail(static_cast<int>(i), "conclusion is not the star of the premise");
        } else {
            return fail(static_cast<int>(i), "unknown justification");
        }
    }
    if (cert.steps.empty()) return CheckResult{false, -1, "empty certificate"};
    if (!(cert.goal == cert.steps.back().eq))
        return CheckResult{false, -1, "goal differs from the last step"};
    return CheckResult{};
}

unsigned rsp_count(const Certificate& cert) {
    unsigned n = 0;
    for (const ProofStep& st : cert.steps)
        if (std::holds_alternative<JustRsp>(st.just)) ++n;
    return n;
}

// ── serialization ────────────────────────────────────────────────────────

namespace {

void write_equation(std::ostream& out, const Equation& eq) {
    out << format_expr(eq.lhs) << " = " << format_expr(eq.rhs);
}

Equation parse_equation(const std::string& text, int lineno) {
    auto pos = text.find(" = ");
    if (pos == std::string::npos)
        throw std::runtime_error("certificate line " + std::to_string(lineno) + ": missing '='");
    return Equation{parse_expr(text.substr(0, pos)), parse_expr(text.substr(pos + 3))};
}

}  // namespace

std::string save_certificate(const Certificate& cert) {
    std::ostringstream out;
    for (std::size_t i = 0; i < cert.steps.size(); ++i) {
        const ProofStep& st = cert.steps[i];
        out << "step " << i << " ";
        if (const auto* ax = std::get_if<JustAxiom>(&st.just)) {
            out << ax->name;
            for (auto& [var, expr] : ax->subst) out << " " << var << "=" << format_expr_compact(expr);
        } else if (std::get_if<JustRefl>(&st.just)) {
            out << "REFL";
        } else if (const auto* sy = std::get_if<JustSymm>(&st.just)) {
            out << "SYMM " << sy->premise;
        } else if (const auto* tr = std::get_if<JustTrans>(&st.just)) {
            out << "TRANS " << tr->first << " " << tr->second;
        } else if (const auto* cg = std::get_if<JustCong>(&st.just)) {
            out << "CONG " << (cg->path.empty() ? "." : cg->path) << " " << cg->premise;
        } else if (const auto* rs = std::get_if<JustRsp>(&st.just)) {
            out << "RSP " << rs->premise;
        }
        out << " ; ";
        write_equation(out, st.eq);
        out << "\n";
    }
    out << "goal ";
    write_equation(out, cert.goal);
    out << "\n";
    return out.str();
}

Certificate load_certificate(const std::string& text) {
    Certificate cert;
    bool have_goal = false;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto fail = [&](const std::string& why) {
            throw std::runtime_error("certificate line " + std::to_string(lineno) + ": " + why);
        };
        if (have_goal) fail("content after the goal line");
        std::istringstream ls(line);
        std::string kw;
        ls >> kw;
        if (kw == "goal") {
            std::string rest;
            std::getline(ls, rest);
            cert.goal = parse_equation(rest, lineno);
            have_goal = true;
            continue;
        }
        if (kw != "step") fail("expected 'step' or 'goal'");
        long idx = -1;
        std::string rule;
        if (!(ls >> idx >> rule)) fail("malformed step header");
        if (idx != static_cast<long>(cert.steps.size())) fail("step index out of order");
        std::string rest;
        std::getline(ls, rest);
        auto sep = rest.find(" ; ");
        if (sep == std::string::npos) fail("missing ' ; ' separator");
        std::string args = rest.substr(0, sep);
        Equation eq = parse_equation(rest.substr(sep + 3), lineno);

        std::istringstream as(args);
        Justification just;
        if (is_axiom_name(rule)) {
            Subst subst;
            std::string binding;
            while (as >> binding) {
                auto eqpos = binding.find('=');
                if (eqpos == std::string::npos) fail("malformed binding '" + binding + "'");
                subst[binding.substr(0, eqpos)] = parse_expr(binding.substr(eqpos + 1));
            }
            just = JustAxiom{rule, std::move(subst)};
        } else if (rule == "REFL") {
            just = JustRefl{};
        } else if (rule == "SYMM") {
            int p;
            if (!(as >> p)) fail("SYMM needs a premise index");
            just = JustSymm{p};
        } else if (rule == "TRANS") {
            int p, q;
            if (!(as >> p >> q)) fail("TRANS needs two premise indices");
            just = JustTrans{p, q};
        } else if (rule == "CONG") {
            std::string path;
            int p;
            if (!(as >> path >> p)) fail("CONG needs a path and a premise index");
            if (path == ".") path.clear();
            for (char ch : path)
                if (ch != 'L' && ch != 'R') fail("bad context path");
            just = JustCong{path, p};
        } else if (rule == "RSP") {
            int p;
            if (!(as >> p)) fail("RSP needs a premise index");
            just = JustRsp{p};
        } else {
            fail("unknown rule '" + rule + "'");
        }
        cert.steps.push_back({std::move(eq), std::move(just)});
    }
    if (!have_goal) throw std::runtime_error("certificate has no goal line");
    return cert;
}

}  // namespace bbp
