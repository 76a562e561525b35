#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dlnl/sequent.hpp"

namespace dlnl {

// Rule schemas keep active and principal formulas at the front of their zone.
// A conclusion's context is the principal formulas followed by the premises'
// remaining formulas in premise order.
enum class Rule {
  // nonlinear fragment
  CId, CWkR, CCrR, CEx, CZeroL, CPlusL, CPlusR1, CPlusR2, CMinusL, CMinusR, CCut, CMCut, CHL,
  // linear fragment
  LId, LWk, LCtr, LEx, LCEx, LCut, LCCut, LCMCut, LBotL, LBotR, LParL, LParR, LCoImpL, LCoImpR,
  LPlusR1, LPlusR2, LCSubR, LJL, LJR, LHR,
};

bool is_linear_rule(Rule r);
bool is_cut_rule(Rule r);
std::size_t rule_arity(Rule r);
// Lower-kebab file name of the rule ("minus-r", "c-mcut", ...).
const char* rule_name(Rule r);
// Display label ("MinusR", "CMCut", ...).
const char* rule_label(Rule r);

struct Label {
  Rule rule = Rule::CId;
  int pos = 0;     // Ex / CEx: swap positions pos and pos+1
  int n = 1;       // MCut / CMCut multiplicity
  Formula f;       // cut formula, weakened formula, the other disjunct of PlusR*, or the Id formula
  Context ctx;     // ZeroL succedent

  static Label of(Rule r) {
    Label l;
    l.rule = r;
    return l;
  }
};

struct Proof;
using ProofPtr = std::shared_ptr<const Proof>;

struct Proof {
  Label label;
  Sequent conclusion;
  std::vector<ProofPtr> premises;
};

// The conclusion forced by a label and its premises; throws RuleMismatch or
// ArityError when the premises do not fit the schema.
Sequent infer_conclusion(const Label& label, const std::vector<const Sequent*>& premises);

// Build a node whose conclusion is inferred (throws on mismatch).
ProofPtr make_proof(const Label& label, std::vector<ProofPtr> premises);

Sequent check_proof(const ProofPtr& p, const Signature& sig);
// Collects the signature from the proof itself (SortError on a clash).
Sequent check_proof(const ProofPtr& p);
Signature signature_of(const ProofPtr& p);

int depth(const ProofPtr& p);
int cut_rank(const ProofPtr& p);
bool is_cut_free(const ProofPtr& p);
std::size_t proof_size(const ProofPtr& p);

std::string print_proof(const ProofPtr& p, bool pretty = true);
ProofPtr proof_from_sexp(const Sexp& e);
ProofPtr parse_proof(std::string_view src);

// Builders. Each infers the conclusion and throws on schema mismatch.
namespace mk {
ProofPtr c_id(const Formula& s);
ProofPtr wk_r(const ProofPtr& p, const Formula& t);
ProofPtr cr_r(const ProofPtr& p);
ProofPtr ex(const ProofPtr& p, int pos);  // C: succedent; L: linear zone
ProofPtr zero_l(const Context& psi);
ProofPtr plus_l(const ProofPtr& p1, const ProofPtr& p2);
ProofPtr plus_r1(const ProofPtr& p, const Formula& t2);
ProofPtr plus_r2(const ProofPtr& p, const Formula& t1);
ProofPtr minus_l(const ProofPtr& p);
ProofPtr minus_r(const ProofPtr& p1, const ProofPtr& p2);
ProofPtr cut(const ProofPtr& p1, const ProofPtr& p2);  // C cut or L linear cut, by sort of p2's subject
ProofPtr mcut(const ProofPtr& p1, const ProofPtr& p2, int n);  // MCut or CMCut by sort of p1
ProofPtr h_l(const ProofPtr& p);
ProofPtr l_id(const Formula& a);
ProofPtr wk(const ProofPtr& p, const Formula& t);
ProofPtr ctr(const ProofPtr& p);
ProofPtr c_ex(const ProofPtr& p, int pos);
ProofPtr c_cut(const ProofPtr& p1, const ProofPtr& p2);
ProofPtr bot_l();
ProofPtr bot_r(const ProofPtr& p);
ProofPtr par_l(const ProofPtr& p1, const ProofPtr& p2);
ProofPtr par_r(const ProofPtr& p);
ProofPtr coimp_l(const ProofPtr& p);
ProofPtr coimp_r(const ProofPtr& p1, const ProofPtr& p2);
ProofPtr l_plus_r1(const ProofPtr& p, const Formula& t2);
ProofPtr l_plus_r2(const ProofPtr& p, const Formula& t1);
ProofPtr c_sub_r(const ProofPtr& p1, const ProofPtr& p2);
ProofPtr j_l(const ProofPtr& p);
ProofPtr j_r(const ProofPtr& p);
ProofPtr h_r(const ProofPtr& p);
}  // namespace mk

// Structural normalization: rewrite p's conclusion into `target` using only
// exchanges, contractions and weakenings on the nonlinear zone and exchanges
// on the linear zone. Throws ShapeMismatch if impossible.
ProofPtr arrange(const ProofPtr& p, const Sequent& target);
// Move the formula at position `from` of a zone to the front with exchanges.
ProofPtr to_front(const ProofPtr& p, bool linear_zone, std::size_t from);

}  // namespace dlnl
