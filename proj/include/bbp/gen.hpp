#pragma once

// Random star expressions with structural shrinking, and the named
// property suites that exercise the pipeline invariants.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bbp/expr.hpp"

namespace bbp {

struct ExprGen {
    std::uint64_t seed = 1;
    unsigned max_size = 12;      // tree size bound
    unsigned alphabet_size = 3;  // actions a, b, c, ...
};

class ExprStream {
public:
    explicit ExprStream(const ExprGen& cfg);
    ExprPtr next();

private:
    ExprGen cfg_;
    std::uint64_t state_;
    std::uint64_t rng();
    ExprPtr gen(unsigned budget, int mode);
};

std::vector<ExprPtr> sample_exprs(const ExprGen& cfg, std::size_t count);

// Structural shrink candidates: replace a subterm by 0 or by one of its
// children.
std::vector<ExprPtr> shrink_candidates(const ExprPtr& e);

// Greedy shrinking: smallest expression still failing the property.
ExprPtr shrink(const ExprPtr& e, const std::function<bool(const ExprPtr&)>& fails);

struct SuiteResult {
    std::string name;
    unsigned cases = 0;
    unsigned failures = 0;
    std::vector<std::string> counterexamples;  // shrunk witnesses

    bool ok() const { return failures == 0; }
};

const std::vector<std::string>& suite_names();

// Runs one named property suite over `cases` generated expressions.
SuiteResult run_suite(const std::string& name, const ExprGen& cfg, unsigned cases);

}  // namespace bbp
