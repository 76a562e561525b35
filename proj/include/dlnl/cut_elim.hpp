#pragma once

#include <vector>

#include "dlnl/proof.hpp"

namespace dlnl {

// Which case of cut reduction a cut instance belongs to.
enum class CutKind {
  NonLinear = 1,  // S |-_C Psi, T^n  against  T |-_C Psi'
  Mixed = 2,      // A |-_L D; Psi, T^n  against  T |-_C Psi'
  Linear = 3,     // B |-_L D, A; Psi  against  A |-_L D'; Psi'
};

// Replace every n-ary cut by 1-ary cuts plus structural rules.
ProofPtr expand_mcut(const ProofPtr& p);

// Eliminate one cut on `s` whose n occurrences are the first n formulas of the
// relevant zone of p1. The result proves p1's conclusion with those
// occurrences removed and p2's succedent appended, and has cut rank <= rank(s).
// Throws PreconditionViolated when a premise already has cut rank > rank(s),
// ShapeMismatch when the sequents don't fit `kind`.
ProofPtr reduce_cut(const ProofPtr& p1, const ProofPtr& p2, const Formula& s, CutKind kind, int n = 1);

// Same endsequent, strictly smaller cut rank. PreconditionViolated on cut-free input.
ProofPtr lower_rank(const ProofPtr& p);

// Cut-free proof of the same endsequent. If `ranks` is given it receives the
// cut rank before each pass and the final 0.
ProofPtr eliminate(const ProofPtr& p, std::vector<int>* ranks = nullptr);

}  // namespace dlnl
