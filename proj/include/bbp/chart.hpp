#pragma once

// Charts: finite labeled transition graphs with a start vertex and an
// optional termination sink.  A Chart value is always start-vertex
// connected; RawChart is the unvalidated form used while building.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "bbp/expr.hpp"

namespace bbp {

using VertexId = std::uint32_t;

struct Transition {
    VertexId src;
    Action act;
    VertexId tgt;

    friend bool operator==(const Transition& a, const Transition& b) {
        return a.src == b.src && a.act == b.act && a.tgt == b.tgt;
    }
    friend bool operator<(const Transition& a, const Transition& b) {
        if (a.src != b.src) return a.src < b.src;
        if (a.act != b.act) return a.act < b.act;
        return a.tgt < b.tgt;
    }
};

// Unvalidated chart data, possibly disconnected.
struct RawChart {
    std::set<VertexId> vertices;
    std::optional<VertexId> tick;
    VertexId start = 0;
    std::set<Transition> transitions;
    std::map<VertexId, std::string> labels;  // display only
};

class ChartError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Chart {
public:
    // Validates all invariants (start present and != tick, sink has no
    // outgoing transitions, start-vertex connected, endpoints declared).
    static Chart make(RawChart raw);

    const std::vector<VertexId>& vertices() const { return vertices_; }
    const std::vector<Transition>& transitions() const { return transitions_; }
    VertexId start() const { return start_; }
    const std::optional<VertexId>& tick() const { return tick_; }
    bool is_tick(VertexId v) const { return tick_ && *tick_ == v; }
    bool has_vertex(VertexId v) const;
    bool has_transition(const Transition& t) const;

    // Transitions departing v, in canonical order.
    std::vector<Transition> out(VertexId v) const;

    const std::map<VertexId, std::string>& labels() const { return labels_; }
    void set_label(VertexId v, const std::string& text) { labels_[v] = text; }

    RawChart raw() const;

    friend bool operator==(const Chart& a, const Chart& b) {
        return a.start_ == b.start_ && a.tick_ == b.tick_ && a.vertices_ == b.vertices_ &&
               a.transitions_ == b.transitions_;
    }

private:
    std::vector<VertexId> vertices_;     // sorted
    std::vector<Transition> transitions_;  // sorted canonically
    VertexId start_ = 0;
    std::optional<VertexId> tick_;
    std::map<VertexId, std::string> labels_;
};

// Vertices reachable from `from` along transitions.
std::set<VertexId> reachable(const RawChart& c, VertexId from);
std::set<VertexId> reachable(const Chart& c, VertexId from);
bool has_path(const Chart& c, VertexId from, VertexId to);

// Keeps exactly the part reachable from the start vertex.
Chart garbage_collect(const RawChart& c);

// The <v,U>-generated subchart: paths from v that first take a transition
// in U and then continue with arbitrary transitions, halting as soon as v
// is revisited.
Chart generated_subchart(const Chart& c, VertexId v, const std::set<Transition>& entries);

// Strongly connected components (Tarjan); deterministic order.
std::vector<std::vector<VertexId>> sccs(const Chart& c);
std::map<VertexId, int> scc_index(const Chart& c);

bool has_cycle(const Chart& c);

// ── file format ────────────────────────────────────────────────────────
//
//   start <id>
//   tick <id>                        (optional, at most once)
//   trans <src> <action> <tgt> [<level>]
//
// '#' starts a comment.  A loaded file is labeled iff its transitions
// carry the level column (all or none).

struct LoadedChart {
    Chart chart;
    // Level per chart.transitions() entry, present iff the file was labeled.
    std::optional<std::vector<unsigned>> levels;
};

LoadedChart load_chart(const std::string& text);
std::string save_chart(const Chart& c);
std::string save_chart(const Chart& c, const std::vector<unsigned>& levels);

std::string to_dot(const Chart& c);
std::string to_dot(const Chart& c, const std::vector<unsigned>& levels);

}  // namespace bbp
