#pragma once

// Star expressions: the term language over 0, actions, +, . and the binary
// Kleene star.  Terms are immutable trees with structural sharing; all
// operations on them are pure.

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace bbp {

// An atomic action.  Names match [a-z][a-z0-9_]*.
struct Action {
    std::string name;

    friend bool operator==(const Action& a, const Action& b) { return a.name == b.name; }
    friend bool operator!=(const Action& a, const Action& b) { return a.name != b.name; }
    friend bool operator<(const Action& a, const Action& b) { return a.name < b.name; }
};

bool is_valid_action_name(const std::string& s);

enum class ExprKind { Zero, Act, Sum, Prod, Star };

class StarExpr;
using ExprPtr = std::shared_ptr<const StarExpr>;

// One node of a star expression.  Sum/Prod hold left/right, Star holds
// body/exit in left/right.  Nodes are only created through the factory
// functions below, which also compute the hash.
class StarExpr {
public:
    ExprKind kind() const { return kind_; }
    const Action& action() const { return action_; }
    const ExprPtr& left() const { return left_; }
    const ExprPtr& right() const { return right_; }
    const ExprPtr& body() const { return left_; }
    const ExprPtr& exit() const { return right_; }
    std::size_t hash() const { return hash_; }
    unsigned size() const { return size_; }

    StarExpr(ExprKind k, Action a, ExprPtr l, ExprPtr r);

private:
    ExprKind kind_;
    Action action_;
    ExprPtr left_, right_;
    std::size_t hash_ = 0;
    unsigned size_ = 1;
};

ExprPtr zero();
ExprPtr act(const std::string& name);
ExprPtr sum(ExprPtr l, ExprPtr r);
ExprPtr prod(ExprPtr l, ExprPtr r);
ExprPtr star(ExprPtr body, ExprPtr exit);

bool expr_equal(const ExprPtr& a, const ExprPtr& b);
// Total order used for canonical term sequences; compares formatted text.
bool expr_less(const ExprPtr& a, const ExprPtr& b);

struct ExprHash {
    std::size_t operator()(const ExprPtr& e) const { return e ? e->hash() : 0; }
};
struct ExprEq {
    bool operator()(const ExprPtr& a, const ExprPtr& b) const { return expr_equal(a, b); }
};

// Raised by parse_expr on malformed input; offset is a byte position.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t offset)
        : std::runtime_error(msg + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

// Grammar (all operators left-associative, whitespace insignificant):
//   sum  := prod ('+' prod)*
//   prod := star ('.' star)*
//   star := atom ('*' atom)*
//   atom := '0' | ACTION | '(' sum ')'
ExprPtr parse_expr(const std::string& text);

// Minimal-parenthesization inverse of parse_expr.
std::string format_expr(const ExprPtr& e);
// Same, without any whitespace (used where expressions are embedded in
// space-separated records).
std::string format_expr_compact(const ExprPtr& e);

unsigned star_height(const ExprPtr& e);

// Sum over a term list per the recursive convention: empty -> 0,
// singleton -> the term, otherwise left-nested sums.
ExprPtr big_sum(const std::vector<ExprPtr>& terms);

// Structural normedness recursion.  Equivalent to reachability of the
// termination sink in the chart interpretation; the interp tests validate
// the two against each other.
bool normed_struct(const ExprPtr& e);

}  // namespace bbp
