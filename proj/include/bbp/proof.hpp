#pragma once

// Certificate generators for the completeness pipeline: reassembly of an
// expression from its action derivatives, the identity solution of a
// chart interpretation, transfer of solutions over functional
// bisimulations, the extracted solution of a LLEE-witness, uniqueness of
// solutions up to provable equality, and the end-to-end prover.

#include <map>
#include <optional>

#include "bbp/bisim.hpp"
#include "bbp/chart.hpp"
#include "bbp/derivation.hpp"
#include "bbp/extract.hpp"
#include "bbp/interp.hpp"
#include "bbp/proof_types.hpp"

namespace bbp {

// A provable solution: expression values for the non-sink vertices plus a
// per-vertex certificate for the solution condition.
struct ProvableSolution {
    Chart chart;
    std::map<VertexId, ExprPtr> values;
    std::map<VertexId, Certificate> certs;

    ExprPtr principal() const { return values.at(chart.start()); }
};

// The canonical right-hand side of the solution condition at v: the sum
// of the sink actions plus the sum of action-value products, following
// the chart's transition order.
ExprPtr solution_shape(const Chart& c, VertexId v, const std::map<VertexId, ExprPtr>& values);

// Checks every per-vertex certificate and its goal shape.
bool verify_solution(const ProvableSolution& sol, std::string* why = nullptr);

// Certificate for e = (sum of tick actions) + (sum of products over the
// action derivatives of e), built by structural induction.
Certificate derive_ft(const ExprPtr& e);

// The identity function on the vertices of the chart interpretation.
ProvableSolution identity_solution(const ExprPtr& e);

// Pulls a solution of c2 back over a functional bisimulation phi: c1 -> c2.
ProvableSolution transfer_solution(const ProvableSolution& sol, const Chart& c1,
                                   const std::map<VertexId, VertexId>& phi);

// The extracted solution of a LLEE-witness, certified without any use of
// the fixed-point rule.
ProvableSolution extraction_solution(const LabeledChart& lc);

struct UnifyResult {
    std::map<VertexId, Certificate> certs;   // sol(w) = extracted(w)
    std::map<VertexId, unsigned> unfoldings;  // loop unfoldings per certificate
};

// For each non-sink vertex, a certificate that the given solution value
// equals the extracted one; each loop unfolding contributes exactly one
// fixed-point step.
UnifyResult unify_solutions(const LabeledChart& lc, const ProvableSolution& sol);

// Full pipeline: empty when the interpretations are not bisimilar.
std::optional<Certificate> prove_equal(const ExprPtr& e1, const ExprPtr& e2);

}  // namespace bbp
