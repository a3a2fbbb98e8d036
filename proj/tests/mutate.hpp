#pragma once

// Single-step certificate mutations for the checker robustness harness.
// Every mutation produced here alters a step's conclusion or the shape of
// its justification, so a sound checker must reject all of them.

#include <cstdint>
#include <optional>

#include "bbp/proof_types.hpp"

namespace bbp::testing {

struct MutRng {
    std::uint64_t state;
    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }
};

inline ExprPtr perturb_expr(const ExprPtr& e, MutRng& rng) {
    // Replace a random subterm with something different.
    std::vector<TermPath> paths;
    std::function<void(const ExprPtr&, TermPath)> walk = [&](const ExprPtr& x, TermPath p) {
        paths.push_back(p);
        if (x->left()) {
            walk(x->left(), p + "L");
            walk(x->right(), p + "R");
        }
    };
    walk(e, "");
    for (int attempt = 0; attempt < 16; ++attempt) {
        TermPath p = paths[rng.below(paths.size())];
        ExprPtr sub = *subterm_at(e, p);
        ExprPtr repl = sub->kind() == ExprKind::Zero ? act("zmut") : zero();
        if (rng.next() % 2) repl = sum(sub, act("zmut"));
        auto out = replace_at(e, p, repl);
        if (out && !expr_equal(*out, e)) return *out;
    }
    return sum(e, act("zmut"));
}

// Mutates one step so that its recorded equation or justification shape
// changes; returns the mutated certificate.
inline std::optional<Certificate> mutate_once(const Certificate& cert, MutRng& rng) {
    if (cert.steps.empty()) return std::nullopt;
    Certificate out = cert;
    std::size_t i = rng.below(out.steps.size());
    ProofStep& st = out.steps[i];
    switch (rng.below(4)) {
        case 0:  // perturb the left-hand side
            st.eq.lhs = perturb_expr(st.eq.lhs, rng);
            break;
        case 1:  // perturb the right-hand side
            st.eq.rhs = perturb_expr(st.eq.rhs, rng);
            break;
        case 2: {  // perturb an axiom substitution, or fall back to the rhs
            if (auto* ax = std::get_if<JustAxiom>(&st.just)) {
                auto it = ax->subst.begin();
                std::advance(it, rng.below(ax->subst.size()));
                it->second = perturb_expr(it->second, rng);
            } else {
                st.eq.rhs = perturb_expr(st.eq.rhs, rng);
            }
            break;
        }
        case 3: {  // swap the justification for a refl of different sides
            if (expr_equal(st.eq.lhs, st.eq.rhs)) {
                st.eq.rhs = perturb_expr(st.eq.rhs, rng);
            } else {
                st.just = JustRefl{};
            }
            break;
        }
    }
    if (i + 1 == out.steps.size()) out.goal = out.steps.back().eq;
    return out;
}

}  // namespace bbp::testing
