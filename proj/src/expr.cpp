#include "bbp/expr.hpp"

#include <cctype>

namespace bbp {

bool is_valid_action_name(const std::string& s) {
    if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
    for (char c : s) {
        unsigned char u = static_cast<unsigned char>(c);
        if (!(std::islower(u) || std::isdigit(u) || c == '_')) return false;
    }
    return true;
}

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
}

}  // namespace

StarExpr::StarExpr(ExprKind k, Action a, ExprPtr l, ExprPtr r)
    : kind_(k), action_(std::move(a)), left_(std::move(l)), right_(std::move(r)) {
    std::size_t h = static_cast<std::size_t>(kind_) + 11;
    h = mix(h, std::hash<std::string>{}(action_.name));
    if (left_) {
        h = mix(h, left_->hash());
        size_ += left_->size();
    }
    if (right_) {
        h = mix(h, right_->hash());
        size_ += right_->size();
    }
    hash_ = h;
}

ExprPtr zero() {
    static const ExprPtr z = std::make_shared<StarExpr>(ExprKind::Zero, Action{}, nullptr, nullptr);
    return z;
}

ExprPtr act(const std::string& name) {
    if (!is_valid_action_name(name)) throw std::invalid_argument("invalid action name: " + name);
    return std::make_shared<StarExpr>(ExprKind::Act, Action{name}, nullptr, nullptr);
}

ExprPtr sum(ExprPtr l, ExprPtr r) {
    return std::make_shared<StarExpr>(ExprKind::Sum, Action{}, std::move(l), std::move(r));
}

ExprPtr prod(ExprPtr l, ExprPtr r) {
    return std::make_shared<StarExpr>(ExprKind::Prod, Action{}, std::move(l), std::move(r));
}

ExprPtr star(ExprPtr body, ExprPtr exit) {
    return std::make_shared<StarExpr>(ExprKind::Star, Action{}, std::move(body), std::move(exit));
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->hash() != b->hash() || a->kind() != b->kind()) return false;
    switch (a->kind()) {
        case ExprKind::Zero: return true;
        case ExprKind::Act: return a->action() == b->action();
        default: return expr_equal(a->left(), b->left()) && expr_equal(a->right(), b->right());
    }
}

bool expr_less(const ExprPtr& a, const ExprPtr& b) {
    if (expr_equal(a, b)) return false;
    return format_expr(a) < format_expr(b);
}

// ── parser ───────────────────────────────────────────────────────────────

namespace {

class Parser {
public:
    explicit Parser(const std::string& text) : s_(text) {}

    ExprPtr run() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("empty expression", pos_);
        ExprPtr e = parse_sum();
        skip_ws();
        if (pos_ < s_.size()) throw ParseError("unexpected input", pos_);
        return e;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    ExprPtr parse_sum() {
        ExprPtr e = parse_prod();
        while (eat('+')) e = sum(e, parse_prod());
        return e;
    }

    ExprPtr parse_prod() {
        ExprPtr e = parse_star();
        while (eat('.')) e = prod(e, parse_star());
        return e;
    }

    ExprPtr parse_star() {
        ExprPtr e = parse_atom();
        while (eat('*')) e = star(e, parse_atom());
        return e;
    }

    ExprPtr parse_atom() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("expected expression", pos_);
        char c = s_[pos_];
        if (c == '0') {
            ++pos_;
            return zero();
        }
        if (c == '(') {
            ++pos_;
            ExprPtr e = parse_sum();
            if (!eat(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        if (std::islower(static_cast<unsigned char>(c))) {
            std::size_t begin = pos_;
            ++pos_;
            while (pos_ < s_.size()) {
                unsigned char u = static_cast<unsigned char>(s_[pos_]);
                if (std::islower(u) || std::isdigit(u) || s_[pos_] == '_')
                    ++pos_;
                else
                    break;
            }
            return act(s_.substr(begin, pos_ - begin));
        }
        throw ParseError("expected expression", pos_);
    }
};

// Precedence levels: Sum 0, Prod 1, Star 2, atoms 3.
int level_of(const StarExpr& e) {
    switch (e.kind()) {
        case ExprKind::Sum: return 0;
        case ExprKind::Prod: return 1;
        case ExprKind::Star: return 2;
        default: return 3;
    }
}

void print(const ExprPtr& e, int min_level, bool spaced, std::string& out) {
    if (level_of(*e) < min_level) {
        out += '(';
        print(e, 0, spaced, out);
        out += ')';
        return;
    }
    switch (e->kind()) {
        case ExprKind::Zero:
            out += '0';
            break;
        case ExprKind::Act:
            out += e->action().name;
            break;
        case ExprKind::Sum:
            print(e->left(), 0, spaced, out);
            out += spaced ? " + " : "+";
            print(e->right(), 1, spaced, out);
            break;
        case ExprKind::Prod:
            print(e->left(), 1, spaced, out);
            out += '.';
            print(e->right(), 2, spaced, out);
            break;
        case ExprKind::Star:
            print(e->left(), 2, spaced, out);
            out += spaced ? " * " : "*";
            print(e->right(), 3, spaced, out);
            break;
    }
}

}  // namespace

ExprPtr parse_expr(const std::string& text) { return Parser(text).run(); }

std::string format_expr(const ExprPtr& e) {
    std::string out;
    print(e, 0, true, out);
    return out;
}

std::string format_expr_compact(const ExprPtr& e) {
    std::string out;
    print(e, 0, false, out);
    return out;
}

unsigned star_height(const ExprPtr& e) {
    switch (e->kind()) {
        case ExprKind::Zero:
        case ExprKind::Act: return 0;
        case ExprKind::Sum:
        case ExprKind::Prod: return std::max(star_height(e->left()), star_height(e->right()));
        case ExprKind::Star: return std::max(star_height(e->body()) + 1, star_height(e->exit()));
    }
    return 0;
}

ExprPtr big_sum(const std::vector<ExprPtr>& terms) {
    if (terms.empty()) return zero();
    ExprPtr e = terms[0];
    for (std::size_t i = 1; i < terms.size(); ++i) e = sum(e, terms[i]);
    return e;
}

bool normed_struct(const ExprPtr& e) {
    switch (e->kind()) {
        case ExprKind::Zero: return false;
        case ExprKind::Act: return true;
        case ExprKind::Sum: return normed_struct(e->left()) || normed_struct(e->right());
        case ExprKind::Prod: return normed_struct(e->left()) && normed_struct(e->right());
        case ExprKind::Star: return normed_struct(e->exit());
    }
    return false;
}

}  // namespace bbp
