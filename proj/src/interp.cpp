#include "bbp/interp.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace bbp {

unsigned LabeledChart::level_of(const Transition& t) const {
    auto it = std::lower_bound(chart.transitions().begin(), chart.transitions().end(), t);
    if (it == chart.transitions().end() || !(*it == t))
        throw std::invalid_argument("level_of: no such transition");
    return levels[static_cast<std::size_t>(it - chart.transitions().begin())];
}

std::vector<std::pair<VertexId, unsigned>> LabeledChart::entry_identifiers() const {
    std::set<std::pair<VertexId, unsigned>> ids;
    for (std::size_t i = 0; i < levels.size(); ++i)
        if (levels[i] > 0) ids.insert({chart.transitions()[i].src, levels[i]});
    return {ids.begin(), ids.end()};
}

std::vector<Transition> LabeledChart::entries_at(VertexId v, unsigned level) const {
    std::vector<Transition> res;
    for (std::size_t i = 0; i < levels.size(); ++i)
        if (levels[i] == level && chart.transitions()[i].src == v)
            res.push_back(chart.transitions()[i]);
    return res;
}

std::vector<Transition> LabeledChart::body_out(VertexId v) const {
    std::vector<Transition> res;
    for (std::size_t i = 0; i < levels.size(); ++i)
        if (levels[i] == 0 && chart.transitions()[i].src == v)
            res.push_back(chart.transitions()[i]);
    return res;
}

LabeledChart make_labeled(Chart c, std::vector<unsigned> levels) {
    if (levels.size() != c.transitions().size())
        throw std::invalid_argument("make_labeled: level count mismatch");
    return LabeledChart{std::move(c), std::move(levels)};
}

namespace {

void sort_derivs(std::vector<LabeledDerivative>& ds) {
    std::sort(ds.begin(), ds.end(), [](const LabeledDerivative& a, const LabeledDerivative& b) {
        if (a.act != b.act) return a.act < b.act;
        bool at = a.target == nullptr, bt = b.target == nullptr;
        if (at != bt) return at;  // tick first
        if (at && bt) return false;
        return format_expr(a.target) < format_expr(b.target);
    });
    ds.erase(std::unique(ds.begin(), ds.end(),
                         [](const LabeledDerivative& a, const LabeledDerivative& b) {
                             if (!(a.act == b.act)) return false;
                             bool eq = (a.target == nullptr && b.target == nullptr) ||
                                       (a.target && b.target && expr_equal(a.target, b.target));
                             if (eq && a.level != b.level)
                                 throw std::logic_error(
                                     "labeled TSS produced one transition with two labels");
                             return eq;
                         }),
             ds.end());
}

// The eight labeled rules of the refined transition system.  Erasing the
// levels gives exactly the plain rules.
std::vector<LabeledDerivative> derive(const ExprPtr& e) {
    std::vector<LabeledDerivative> res;
    switch (e->kind()) {
        case ExprKind::Zero:
            break;
        case ExprKind::Act:
            res.push_back({e->action(), nullptr, 0});
            break;
        case ExprKind::Sum:
            for (const ExprPtr& side : {e->left(), e->right()})
                for (auto& d : derive(side)) res.push_back({d.act, d.target, 0});
            break;
        case ExprKind::Prod:
            for (auto& d : derive(e->left())) {
                if (d.target == nullptr)
                    res.push_back({d.act, e->right(), 0});
                else
                    res.push_back({d.act, prod(d.target, e->right()), d.level});
            }
            break;
        case ExprKind::Star: {
            unsigned entry_level = star_height(e->body()) + 1;
            bool body_normed = normed_struct(e->body());
            for (auto& d : derive(e->body())) {
                if (d.target == nullptr)
                    res.push_back({d.act, e, entry_level});
                else
                    res.push_back({d.act, prod(d.target, e), body_normed ? entry_level : 0});
            }
            for (auto& d : derive(e->exit())) res.push_back({d.act, d.target, 0});
            break;
        }
    }
    sort_derivs(res);
    return res;
}

constexpr std::size_t kMaxVertices = 200000;

LabeledInterpretation explore(const ExprPtr& e) {
    std::unordered_map<ExprPtr, VertexId, ExprHash, ExprEq> id_of;
    std::map<VertexId, ExprPtr> expr_of;
    std::optional<VertexId> tick_id;
    RawChart raw;
    std::vector<std::pair<Transition, unsigned>> trans;

    std::deque<ExprPtr> todo;
    auto vertex = [&](const ExprPtr& x) {
        auto it = id_of.find(x);
        if (it != id_of.end()) return it->second;
        VertexId v = static_cast<VertexId>(id_of.size() + (tick_id ? 1 : 0));
        id_of.emplace(x, v);
        expr_of[v] = x;
        raw.vertices.insert(v);
        todo.push_back(x);
        if (id_of.size() + 1 > kMaxVertices) throw std::runtime_error("interpretation too large");
        return v;
    };

    raw.start = vertex(e);
    while (!todo.empty()) {
        ExprPtr cur = todo.front();
        todo.pop_front();
        VertexId v = id_of.at(cur);
        for (const LabeledDerivative& d : derive(cur)) {
            VertexId w;
            if (d.target == nullptr) {
                if (!tick_id) {
                    tick_id = static_cast<VertexId>(id_of.size());
                    raw.vertices.insert(*tick_id);
                    raw.tick = tick_id;
                }
                w = *tick_id;
            } else {
                w = vertex(d.target);
            }
            trans.emplace_back(Transition{v, d.act, w}, d.level);
        }
    }
    for (auto& [t, lv] : trans) raw.transitions.insert(t);
    for (auto& [v, x] : expr_of) raw.labels[v] = format_expr(x);

    Chart chart = Chart::make(std::move(raw));
    std::sort(trans.begin(), trans.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<unsigned> levels;
    levels.reserve(trans.size());
    for (auto& [t, lv] : trans) levels.push_back(lv);

    return LabeledInterpretation{LabeledChart{std::move(chart), std::move(levels)},
                                 std::move(expr_of)};
}

}  // namespace

std::vector<Derivative> action_derivatives(const ExprPtr& e) {
    std::vector<Derivative> res;
    for (auto& d : derive(e)) res.push_back({d.act, d.target});
    return res;
}

std::vector<LabeledDerivative> labeled_derivatives(const ExprPtr& e) { return derive(e); }

std::optional<VertexId> Interpretation::vertex_of(const ExprPtr& e) const {
    for (auto& [v, x] : expr_of)
        if (expr_equal(x, e)) return v;
    return std::nullopt;
}

Interpretation interpret(const ExprPtr& e) {
    LabeledInterpretation li = explore(e);
    return Interpretation{std::move(li.labeled.chart), std::move(li.expr_of)};
}

LabeledInterpretation interpret_labeled(const ExprPtr& e) { return explore(e); }

bool is_normed(const ExprPtr& e) { return interpret(e).chart.tick().has_value(); }

}  // namespace bbp
