#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dlnl/sequent.hpp"
#include "dlnl/term.hpp"

namespace dlnl {

// One succedent slot. Without terms (plain natural deduction) `term` is null.
// A p-slot carries a p-term and no type.
struct Slot {
  Term term;
  Formula type;
  bool is_p() const { return !type.valid(); }
};
using Zone = std::vector<Slot>;

// x : S |-_C Psi  or  x : A |-_L Delta; Psi. `var` is empty for untyped judgments.
struct Judgment {
  bool linear = false;
  std::string var;
  Formula subject;
  Zone delta, psi;

  bool typed() const { return !var.empty(); }
  Zone& zone(bool d) { return d ? delta : psi; }
  const Zone& zone(bool d) const { return d ? delta : psi; }
};

Judgment untyped(const Sequent& s);
// Drop terms, variable and p-slots.
Sequent erase(const Judgment& j);
// Same kind, variable and subject; zones equal as multisets (terms up to alpha).
bool same_judgment(const Judgment& a, const Judgment& b);
std::vector<Formula> shape(const Zone& z);  // types of the non-p slots
// Psi1 . Psi2: equal shapes, terms dotted slot by slot, p-slots side by side.
// ShapeMismatch otherwise.
Zone ctx_merge(const Zone& a, const Zone& b);

std::string print_judgment(const Judgment& j);
std::string show_judgment(const Judgment& j);
Judgment judgment_from_sexp(const Sexp& e);
Judgment parse_judgment(std::string_view src);

enum class NdRule {
  CId, CWeak, CContr, CZeroE, CPlusI1, CPlusI2, CPlusE, CMinusI, CMinusE, CHE,
  LId, LWeak, LContr, LBotI, LBotE, LParI, LParE, LSubI, LSubE, LJI, LJE, LHI, LHE,
};

bool is_linear_nd_rule(NdRule r);
// File name: the plain name ("plus-e") or the term-assignment name ("d-e").
const char* nd_rule_name(NdRule r, bool typed);
// How many leading slots of premise i the rule consumes, and from which zone.
struct Active {
  std::size_t count;
  bool delta;
};
Active nd_active(NdRule r, std::size_t premise);

struct NdLabel {
  NdRule rule = NdRule::CId;
  Formula f;  // Id / Weak formula, or the other disjunct of PlusI*
  Term e;     // the connected term of a typed BotI

  static NdLabel of(NdRule r, Formula f = {}, Term e = nullptr) {
    NdLabel l;
    l.rule = r;
    l.f = f;
    l.e = e;
    return l;
  }
};

struct NdProof;
using NdPtr = std::shared_ptr<const NdProof>;

// Premise conclusions are read with their active slots first; the stored
// conclusion of a node may list its slots in any order.
struct NdProof {
  NdLabel label;
  Judgment conclusion;
  std::vector<NdPtr> premises;
};

// The conclusion a rule forces, in canonical slot order.
Judgment nd_infer(const NdLabel& label, const std::vector<const Judgment*>& premises, Fresh& fresh);
NdPtr nd_make(const NdLabel& label, std::vector<NdPtr> premises, Fresh& fresh);
// Same derivation with a reordered stored conclusion.
NdPtr nd_relayout(const NdPtr& p, Judgment conclusion);
// Reorder so the type sequence follows `target` as far as possible: each
// target slot takes the first unused slot of its type (p-slots match p-slots);
// leftovers keep their order at the end.
NdPtr conform(const NdPtr& p, const Judgment& target);
NdPtr nd_to_front(const NdPtr& p, bool delta, std::size_t index);

// One checker for both the plain and the term-annotated system.
Judgment check_derivation(const NdPtr& p, const Signature* sig = nullptr);
Sequent check_nd(const NdPtr& p, const Signature& sig);
Sequent check_nd(const NdPtr& p);
Judgment check_typing(const NdPtr& p, const Signature& sig);
Judgment check_typing(const NdPtr& p);
NdPtr erase(const NdPtr& p);

std::size_t nd_size(const NdPtr& p);
int nd_depth(const NdPtr& p);

std::string print_nd(const NdPtr& p, bool pretty = true);
NdPtr nd_from_sexp(const Sexp& e);
NdPtr parse_nd(std::string_view src);

enum class CutShape { CC, LC, LL };
// CC: S |-_C T, Psi  with  T |-_C Psi'       gives S |-_C Psi, Psi'
// LC: A |-_L D; T, Psi  with  T |-_C Psi'    gives A |-_L D; Psi, Psi'
// LL: A |-_L B, D; Psi  with  B |-_L D'; Psi' gives A |-_L D, D'; Psi, Psi'
// The cut formula is the first slot of the relevant zone of p1.
NdPtr admissible_cut(const NdPtr& p1, const NdPtr& p2, CutShape kind, Fresh& fresh);
// Elimination of + with independent minor contexts, by weakening both sides.
NdPtr plus_e_mult(const NdPtr& major, const NdPtr& m1, const NdPtr& m2, Fresh& fresh);
// Rename the subject variable of a derivation.
NdPtr rename_subject(const NdPtr& p, const std::string& to, Fresh& fresh);

namespace nd {
NdPtr id(const std::string& var, const Formula& f);  // var may be empty
NdPtr weak(const NdPtr& p, const Formula& t, Fresh& fresh);
NdPtr weak_all(NdPtr p, const std::vector<Formula>& ts, Fresh& fresh);
NdPtr contr(const NdPtr& p, Fresh& fresh);
NdPtr rule(NdRule r, std::vector<NdPtr> premises, Fresh& fresh, Formula f = {}, Term e = nullptr);
}  // namespace nd

}  // namespace dlnl
