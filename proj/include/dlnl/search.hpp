#pragma once

#include <optional>

#include "dlnl/proof.hpp"

namespace dlnl {

struct SearchStats {
  std::size_t nodes = 0;
  std::size_t memo_hits = 0;
};

// Bounded backward search for a cut-free proof. `bound` limits the number of
// logical inferences and contractions on any branch; exchanges and the
// weakenings absorbed at axioms are free. Returns nullopt when no proof was
// found within the bound (Exhausted).
std::optional<ProofPtr> search(const Sequent& s, int bound, SearchStats* stats = nullptr);

}  // namespace dlnl
