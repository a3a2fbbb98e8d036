#pragma once

// Extraction of star expressions from LLEE-witnesses: the relative form
// t(w|v), the solution form s(w), and the certified simplifier for the
// zero laws.

#include <map>
#include <optional>

#include "bbp/llee.hpp"
#include "bbp/proof_types.hpp"

namespace bbp {

// Memo table shared by the two extraction functions.
struct ExtractionTable {
    std::map<std::pair<VertexId, VertexId>, ExprPtr> rel;  // (w, v) with v descends to w
    std::map<VertexId, ExprPtr> abs;
};

// t(w|v): the behavior from w until v is reached again; requires that v
// descends in a loop to w.
ExprPtr extract_relative(const LabeledChart& lc, VertexId w, VertexId v,
                         ExtractionTable* table = nullptr);

// s(w): the extracted solution value at w (w must not be the sink).
ExprPtr extract_solution(const LabeledChart& lc, VertexId w, ExtractionTable* table = nullptr);

// Exhaustive innermost rewriting with 0*x -> x, x+0 -> x, 0+x -> x,
// 0.x -> 0; the certificate derives e = result.
std::pair<ExprPtr, Certificate> simplify(const ExprPtr& e);

}  // namespace bbp
