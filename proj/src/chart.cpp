#include "bbp/chart.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace bbp {

Chart Chart::make(RawChart raw) {
    if (!raw.vertices.count(raw.start)) throw ChartError("start vertex not declared");
    if (raw.tick) {
        if (*raw.tick == raw.start) throw ChartError("start vertex may not be the sink");
        if (!raw.vertices.count(*raw.tick)) throw ChartError("tick vertex not declared");
    }
    for (const Transition& t : raw.transitions) {
        if (!raw.vertices.count(t.src) || !raw.vertices.count(t.tgt))
            throw ChartError("transition endpoint not declared");
        if (raw.tick && t.src == *raw.tick) throw ChartError("sink has outgoing transition");
    }
    std::set<VertexId> reach = reachable(raw, raw.start);
    if (reach.size() != raw.vertices.size()) throw ChartError("chart is not start-vertex connected");

    Chart c;
    c.vertices_.assign(raw.vertices.begin(), raw.vertices.end());
    c.transitions_.assign(raw.transitions.begin(), raw.transitions.end());
    c.start_ = raw.start;
    c.tick_ = raw.tick;
    c.labels_ = std::move(raw.labels);
    return c;
}

bool Chart::has_vertex(VertexId v) const {
    return std::binary_search(vertices_.begin(), vertices_.end(), v);
}

bool Chart::has_transition(const Transition& t) const {
    return std::binary_search(transitions_.begin(), transitions_.end(), t);
}

std::vector<Transition> Chart::out(VertexId v) const {
    std::vector<Transition> res;
    auto lo = std::lower_bound(transitions_.begin(), transitions_.end(), v,
                               [](const Transition& t, VertexId x) { return t.src < x; });
    for (auto it = lo; it != transitions_.end() && it->src == v; ++it) res.push_back(*it);
    return res;
}

RawChart Chart::raw() const {
    RawChart r;
    r.vertices.insert(vertices_.begin(), vertices_.end());
    r.transitions.insert(transitions_.begin(), transitions_.end());
    r.start = start_;
    r.tick = tick_;
    r.labels = labels_;
    return r;
}

namespace {

std::set<VertexId> reachable_impl(const std::set<Transition>& trans, VertexId from,
                                  const std::set<VertexId>& universe) {
    std::set<VertexId> seen;
    if (!universe.count(from)) return seen;
    std::vector<VertexId> todo{from};
    seen.insert(from);
    while (!todo.empty()) {
        VertexId v = todo.back();
        todo.pop_back();
        for (const Transition& t : trans) {
            if (t.src != v) continue;
            if (seen.insert(t.tgt).second) todo.push_back(t.tgt);
        }
    }
    return seen;
}

}  // namespace

std::set<VertexId> reachable(const RawChart& c, VertexId from) {
    return reachable_impl(c.transitions, from, c.vertices);
}

std::set<VertexId> reachable(const Chart& c, VertexId from) {
    std::set<VertexId> seen;
    if (!c.has_vertex(from)) return seen;
    std::vector<VertexId> todo{from};
    seen.insert(from);
    while (!todo.empty()) {
        VertexId v = todo.back();
        todo.pop_back();
        for (const Transition& t : c.out(v))
            if (seen.insert(t.tgt).second) todo.push_back(t.tgt);
    }
    return seen;
}

bool has_path(const Chart& c, VertexId from, VertexId to) { return reachable(c, from).count(to) > 0; }

Chart garbage_collect(const RawChart& c) {
    if (!c.vertices.count(c.start)) throw ChartError("start vertex not declared");
    std::set<VertexId> keep = reachable_impl(c.transitions, c.start, c.vertices);
    RawChart r;
    r.start = c.start;
    r.vertices = keep;
    if (c.tick && keep.count(*c.tick)) r.tick = c.tick;
    for (const Transition& t : c.transitions)
        if (keep.count(t.src)) r.transitions.insert(t);
    for (auto& [v, text] : c.labels)
        if (keep.count(v)) r.labels[v] = text;
    return Chart::make(std::move(r));
}

Chart generated_subchart(const Chart& c, VertexId v, const std::set<Transition>& entries) {
    if (!c.has_vertex(v)) throw std::invalid_argument("generated_subchart: no such vertex");
    for (const Transition& t : entries)
        if (t.src != v || !c.has_transition(t))
            throw std::invalid_argument("generated_subchart: entry set not from the given vertex");

    RawChart r;
    r.start = v;
    r.vertices.insert(v);
    std::vector<VertexId> todo;
    for (const Transition& t : entries) {
        r.transitions.insert(t);
        if (r.vertices.insert(t.tgt).second && t.tgt != v) todo.push_back(t.tgt);
    }
    while (!todo.empty()) {
        VertexId w = todo.back();
        todo.pop_back();
        if (w == v) continue;  // halt on revisiting v
        for (const Transition& t : c.out(w)) {
            r.transitions.insert(t);
            if (r.vertices.insert(t.tgt).second && t.tgt != v) todo.push_back(t.tgt);
        }
    }
    if (c.tick() && r.vertices.count(*c.tick())) r.tick = c.tick();
    return Chart::make(std::move(r));
}

namespace {

struct TarjanState {
    const Chart& c;
    std::map<VertexId, int> index, low;
    std::map<VertexId, bool> on_stack;
    std::vector<VertexId> stack;
    int counter = 0;
    std::vector<std::vector<VertexId>> comps;

    void visit(VertexId v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (const Transition& t : c.out(v)) {
            if (!index.count(t.tgt)) {
                visit(t.tgt);
                low[v] = std::min(low[v], low[t.tgt]);
            } else if (on_stack[t.tgt]) {
                low[v] = std::min(low[v], index[t.tgt]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<VertexId> comp;
            for (;;) {
                VertexId w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                comp.push_back(w);
                if (w == v) break;
            }
            std::sort(comp.begin(), comp.end());
            comps.push_back(std::move(comp));
        }
    }
};

}  // namespace

std::vector<std::vector<VertexId>> sccs(const Chart& c) {
    TarjanState st{c};
    for (VertexId v : c.vertices())
        if (!st.index.count(v)) st.visit(v);
    std::sort(st.comps.begin(), st.comps.end());
    return st.comps;
}

std::map<VertexId, int> scc_index(const Chart& c) {
    std::map<VertexId, int> idx;
    auto comps = sccs(c);
    for (std::size_t i = 0; i < comps.size(); ++i)
        for (VertexId v : comps[i]) idx[v] = static_cast<int>(i);
    return idx;
}

bool has_cycle(const Chart& c) {
    auto idx = scc_index(c);
    for (const Transition& t : c.transitions()) {
        if (t.src == t.tgt) return true;
        if (idx.at(t.src) == idx.at(t.tgt)) return true;
    }
    return false;
}

// ── serialization ────────────────────────────────────────────────────────

LoadedChart load_chart(const std::string& text) {
    RawChart r;
    bool have_start = false, have_tick = false;
    bool any_level = false, any_plain = false;
    std::vector<std::pair<Transition, unsigned>> labeled;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw ChartError("line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        if (kw == "start") {
            if (have_start) fail("duplicate start line");
            VertexId v;
            if (!(ls >> v)) fail("malformed start line");
            r.start = v;
            r.vertices.insert(v);
            have_start = true;
        } else if (kw == "tick") {
            if (have_tick) fail("duplicate tick line");
            VertexId v;
            if (!(ls >> v)) fail("malformed tick line");
            r.tick = v;
            r.vertices.insert(v);
            have_tick = true;
        } else if (kw == "trans") {
            VertexId s, t;
            std::string a;
            if (!(ls >> s >> a >> t)) fail("malformed trans line");
            if (!is_valid_action_name(a)) fail("invalid action name '" + a + "'");
            unsigned level = 0;
            if (ls >> level)
                any_level = true;
            else
                any_plain = true;
            Transition tr{s, Action{a}, t};
            if (r.transitions.count(tr)) fail("duplicate transition");
            r.transitions.insert(tr);
            r.vertices.insert(s);
            r.vertices.insert(t);
            labeled.emplace_back(tr, level);
        } else {
            fail("unknown keyword '" + kw + "'");
        }
    }
    if (!have_start) throw ChartError("missing start line");
    if (any_level && any_plain) throw ChartError("mixed labeled and unlabeled transitions");

    LoadedChart out{Chart::make(std::move(r)), std::nullopt};
    if (any_level) {
        std::sort(labeled.begin(), labeled.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<unsigned> levels;
        levels.reserve(labeled.size());
        for (auto& [tr, lv] : labeled) levels.push_back(lv);
        out.levels = std::move(levels);
    }
    return out;
}

namespace {

std::string save_impl(const Chart& c, const std::vector<unsigned>* levels) {
    std::ostringstream out;
    out << "start " << c.start() << "\n";
    if (c.tick()) out << "tick " << *c.tick() << "\n";
    for (auto& [v, text] : c.labels()) out << "# label " << v << " " << text << "\n";
    const auto& trans = c.transitions();
    for (std::size_t i = 0; i < trans.size(); ++i) {
        out << "trans " << trans[i].src << " " << trans[i].act.name << " " << trans[i].tgt;
        if (levels) out << " " << (*levels)[i];
        out << "\n";
    }
    return out.str();
}

}  // namespace

std::string save_chart(const Chart& c) { return save_impl(c, nullptr); }

std::string save_chart(const Chart& c, const std::vector<unsigned>& levels) {
    if (levels.size() != c.transitions().size())
        throw std::invalid_argument("save_chart: level count mismatch");
    return save_impl(c, &levels);
}

namespace {

std::string dot_impl(const Chart& c, const std::vector<unsigned>* levels) {
    std::ostringstream out;
    out << "digraph chart {\n";
    out << "  __start [shape=none,label=\"\"];\n";
    out << "  __start -> v" << c.start() << ";\n";
    for (VertexId v : c.vertices()) {
        out << "  v" << v << " [";
        if (c.is_tick(v))
            out << "shape=doublecircle,label=\"\\u221a\"";
        else {
            out << "shape=circle,label=\"" << v;
            auto it = c.labels().find(v);
            if (it != c.labels().end()) out << ": " << it->second;
            out << "\"";
        }
        out << "];\n";
    }
    const auto& trans = c.transitions();
    for (std::size_t i = 0; i < trans.size(); ++i) {
        out << "  v" << trans[i].src << " -> v" << trans[i].tgt << " [label=\"" << trans[i].act.name;
        bool entry = levels && (*levels)[i] > 0;
        if (entry) out << " [" << (*levels)[i] << "]";
        out << "\"";
        if (entry) out << ",style=bold";
        out << "];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace

std::string to_dot(const Chart& c) { return dot_impl(c, nullptr); }

std::string to_dot(const Chart& c, const std::vector<unsigned>& levels) {
    if (levels.size() != c.transitions().size())
        throw std::invalid_argument("to_dot: level count mismatch");
    return dot_impl(c, &levels);
}

}  // namespace bbp
