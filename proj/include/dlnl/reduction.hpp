#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "dlnl/nd.hpp"

namespace dlnl {

enum class RedexTag {
  Bottom, LinH, LinJ, LinSub, LinPar, NLSub, CoprodL, CoprodR, NLH,
  ContrDE, ContrDI1, ContrDI2, ContrSubI, ContrSubE, ContrHE,
  WeakDE, WeakDI1, WeakDI2, WeakSubI, WeakSubE, WeakHE,
  Commute1, Commute2, Commute3, Commute4, Commute5, Commute6, Commute7,
};

const char* redex_tag_name(RedexTag t);
std::optional<RedexTag> redex_tag_from_name(std::string_view name);
bool is_commute(RedexTag t);

// Where a redex sits in a judgment: a slot of one zone, then a path of child
// positions (0, 1, 2 for the fields a, b, c) inside its term.
struct RedexLocator {
  RedexTag tag = RedexTag::Bottom;
  bool delta = false;
  std::size_t slot = 0;
  std::vector<int> path;
};

// Every redex, innermost first within a slot, slots left to right with the
// linear zone first.
std::vector<RedexLocator> find_redexes(const Judgment& j);

// One reduction. A redex produced by one rule application usually spans
// several slots (a case context, a substituted context); all of them are
// rewritten together. Throws NotARedex if the locator does not point at a
// redex of its tag, NotACommute for a commuting conversion that only changes
// the derivation.
Judgment beta_step(const Judgment& j, const RedexLocator& r, Fresh& fresh);

struct Normalized {
  Judgment result;
  std::size_t steps = 0;
  bool exhausted = false;  // fuel ran out with redexes left
  std::vector<RedexTag> trace;
};

// Which redex normalize contracts next. Both pick innermost-leftmost within
// their preferred class.
enum class Strategy { ConversionsFirst, BetasFirst };

Normalized normalize(const Judgment& j, std::size_t fuel, Fresh& fresh,
                     Strategy strategy = Strategy::ConversionsFirst);
// As normalize, but FuelExhausted is thrown instead of flagged.
Judgment normalize_or_throw(const Judgment& j, std::size_t fuel, Fresh& fresh,
                            Strategy strategy = Strategy::ConversionsFirst);

// ---------------------------------------------------------------- derivations

// Premise indices from the root.
using NodePath = std::vector<std::size_t>;

struct DerivationRedex {
  NodePath at;
  RedexTag tag;
};

NdPtr node_at(const NdPtr& root, const NodePath& at);
// Put `sub` at `at` and re-derive the nodes above it.
NdPtr replace_at(const NdPtr& root, const NodePath& at, const NdPtr& sub, Fresh& fresh);

// Eliminations whose major premise is the matching introduction (or a
// contraction / weakening of the major formula).
std::vector<DerivationRedex> derivation_redexes(const NdPtr& root);
// Contract the redex at `at`; the result derives a judgment with the same
// subject and type shape. Throws NotARedex.
NdPtr beta_derivation(const NdPtr& root, const NodePath& at, Fresh& fresh);

// Permute the rule at `at` above the last rule of the premise its active
// slots come from. Throws NotACommute.
NdPtr commute_step(const NdPtr& root, const NodePath& at, Fresh& fresh);
std::optional<RedexTag> commute_tag(NdRule lower);

}  // namespace dlnl
