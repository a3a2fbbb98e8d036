#pragma once

// Chart interpretation of star expressions: the transition system rules,
// iterated derivatives, normedness, and the entry/body-labeled variant
// that yields the canonical LLEE-witness of an interpretation.

#include <optional>
#include <unordered_map>
#include <vector>

#include "bbp/chart.hpp"
#include "bbp/llee_types.hpp"

namespace bbp {

// One derivation step e -a-> target; a null target is the tick.
struct Derivative {
    Action act;
    ExprPtr target;  // null = termination sink

    bool is_tick() const { return target == nullptr; }
};

// All pairs derivable by the transition rules, canonically ordered by
// action name, then (tick first, then target print).
std::vector<Derivative> action_derivatives(const ExprPtr& e);

struct LabeledDerivative {
    Action act;
    ExprPtr target;
    unsigned level;  // 0 = body
};

std::vector<LabeledDerivative> labeled_derivatives(const ExprPtr& e);

struct Interpretation {
    Chart chart;
    std::map<VertexId, ExprPtr> expr_of;

    std::optional<VertexId> vertex_of(const ExprPtr& e) const;
};

struct LabeledInterpretation {
    LabeledChart labeled;
    std::map<VertexId, ExprPtr> expr_of;
};

Interpretation interpret(const ExprPtr& e);
LabeledInterpretation interpret_labeled(const ExprPtr& e);

// Termination sink reachable from e in its chart interpretation.
bool is_normed(const ExprPtr& e);

}  // namespace bbp
