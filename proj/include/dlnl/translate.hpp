#pragma once

#include "dlnl/nd.hpp"
#include "dlnl/proof.hpp"

namespace dlnl {

// Natural deduction to sequent calculus. Introductions become right rules;
// an elimination becomes its left rule cut against the major premise.
// Terms, if any, are erased first. The result may contain cuts.
ProofPtr nd_to_seq(const NdPtr& p);

// Sequent calculus to natural deduction. Right rules become introductions;
// a left rule becomes the elimination applied to an identity, and cuts
// become the admissible cuts. The result has no terms.
NdPtr seq_to_nd(const ProofPtr& p);

}  // namespace dlnl
