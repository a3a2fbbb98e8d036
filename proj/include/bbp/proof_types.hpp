#pragma once

// The proof system: axiom schemas B1-B7, BKS1, BKS2, the rules of
// equational logic, and the fixed-point rule RSP.  Certificates are flat
// step lists checkable in one linear pass.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bbp/expr.hpp"

namespace bbp {

struct Equation {
    ExprPtr lhs, rhs;

    friend bool operator==(const Equation& a, const Equation& b) {
        return expr_equal(a.lhs, b.lhs) && expr_equal(a.rhs, b.rhs);
    }
};

// Path into a term: 'L'/'R' per step (Star: L = body, R = exit).
using TermPath = std::string;

std::optional<ExprPtr> subterm_at(const ExprPtr& e, const TermPath& p);
std::optional<ExprPtr> replace_at(const ExprPtr& e, const TermPath& p, const ExprPtr& repl);

// Axiom schemas, keyed by name:
//   B1   x+y = y+x           B2  (x+y)+z = x+(y+z)   B3  x+x = x
//   B4   (x+y).z = x.z+y.z   B5  (x.y).z = x.(y.z)   B6  x+0 = x
//   B7   0.x = 0             BKS1 x.(x*y)+y = x*y    BKS2 (x*y).z = x*(y.z)
using Subst = std::map<std::string, ExprPtr>;

bool is_axiom_name(const std::string& name);
const std::vector<std::string>& axiom_vars(const std::string& name);
std::optional<Equation> axiom_instance(const std::string& name, const Subst& subst);

struct JustAxiom {
    std::string name;
    Subst subst;
};
struct JustRefl {};
struct JustSymm {
    int premise;
};
struct JustTrans {
    int first, second;
};
struct JustCong {
    TermPath path;
    int premise;
};
struct JustRsp {
    int premise;  // must be of the exact shape e = (f.e)+g; concludes e = f*g
};

using Justification = std::variant<JustAxiom, JustRefl, JustSymm, JustTrans, JustCong, JustRsp>;

struct ProofStep {
    Equation eq;
    Justification just;
};

struct Certificate {
    std::vector<ProofStep> steps;
    Equation goal;  // must equal the last step's equation
};

struct CheckResult {
    bool ok = true;
    int failed_step = -1;  // -1 when the goal line itself is at fault
    std::string reason;
};

CheckResult check_certificate(const Certificate& cert);

// Counts RSP steps (used by the invariants on the generators).
unsigned rsp_count(const Certificate& cert);

// ── file format ──────────────────────────────────────────────────────────
//
//   step <idx> <RULE> <args...> ; <lhs> = <rhs>
//   goal <lhs> = <rhs>
//
// RULE is one of B1..B7, BKS1, BKS2, REFL, SYMM, TRANS, CONG, RSP.  Args
// are step indices, `x=<expr>` bindings (expressions written without
// spaces), or an L/R context path (`.` for the empty path).

std::string save_certificate(const Certificate& cert);
Certificate load_certificate(const std::string& text);

}  // namespace bbp
