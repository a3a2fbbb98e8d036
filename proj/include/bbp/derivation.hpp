#pragma once

// Builder for checkable derivations.  A Derivation accumulates steps with
// structural deduplication; a Chain threads a term through successive
// rewrites, producing a proof of start = current.

#include <map>
#include <string>

#include "bbp/proof_types.hpp"

namespace bbp {

class Derivation {
public:
    int axiom(const std::string& name, const Subst& subst);
    int refl(const ExprPtr& e);
    int symm(int premise);
    int trans(int first, int second);
    int cong(const TermPath& path, int premise, const ExprPtr& whole_lhs);
    int rsp(int premise);

    const ProofStep& step(int i) const { return steps_.at(static_cast<std::size_t>(i)); }
    int size() const { return static_cast<int>(steps_.size()); }

    // Appends a whole certificate; returns the index of its last step.
    int import(const Certificate& cert);

    // Self-contained certificate ending in step `goal` (dependency cone
    // only, renumbered).
    Certificate extract(int goal) const;

private:
    int add(ProofStep st);
    std::vector<ProofStep> steps_;
    std::map<std::string, int> memo_;
};

class Chain {
public:
    Chain(Derivation& d, ExprPtr start) : d_(d), start_(std::move(start)), cur_(start_) {}

    const ExprPtr& cur() const { return cur_; }

    // Applies step `premise` (proving cur = X) at the root.
    void by(int premise);
    // Applies step `premise` (proving A = B) at cur[path] == A.
    void rw(const TermPath& path, int premise);
    // Applies an axiom instance at the given position, optionally flipped.
    void rw_axiom(const TermPath& path, const std::string& name, const Subst& subst,
                  bool reversed = false);

    // Index of a step proving start = cur (a Refl step if no rewrites).
    int finish();

private:
    Derivation& d_;
    ExprPtr start_, cur_;
    int proof_ = -1;
};

// Path of element i inside a left-nested n-element sum.
TermPath big_sum_path(std::size_t i, std::size_t n);

// Proof that `from` equals `to`, where both are sum trees whose non-zero
// summand sets coincide (associativity, commutativity, idempotency and
// the unit laws).
int prove_sum_eq(Derivation& d, const ExprPtr& from, const ExprPtr& to);

}  // namespace bbp
