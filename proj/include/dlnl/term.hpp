#pragma once

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dlnl/sexpr.hpp"

namespace dlnl {

// One node type for both term sorts. Field use per kind:
//   Var x | Eps | Dot a b | False a | App x a (binder x, argument a)
//   Mkc a x (binder x) | Inl a | Inr a | Case a x b y c | HWrap a | LetJ x a b
//   LetH x a b | Postp x a b (binds x in a) | ConnectBot a | PostpBot a
//   ParPair a b | Casel a | Caser a | JWrap a
enum class TK {
  Var, Eps, Dot, False, App, Mkc, Inl, Inr, Case, HWrap, LetJ, LetH, Postp,
  ConnectBot, PostpBot, ParPair, Casel, Caser, JWrap,
};

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct TermNode {
  TK kind;
  std::string x, y;
  Term a, b, c;
};

namespace tm {
Term var(std::string x);
Term eps();
// Smart: eps is the unit, so eps . t = t . eps = t.
Term dot(const Term& a, const Term& b);
Term dot_raw(const Term& a, const Term& b);
Term false_(const Term& t);
Term app(std::string binder, const Term& t);
Term mkc(const Term& t, std::string binder);
Term inl(const Term& t);
Term inr(const Term& t);
Term case_(const Term& t, std::string x, const Term& t1, std::string y, const Term& t2);
Term h(const Term& e);
Term let_j(std::string x, const Term& e, const Term& t);
Term let_h(std::string x, const Term& t1, const Term& t2);
Term postp(std::string x, const Term& t1, const Term& t2);
Term connect_bot(const Term& e);
Term postp_bot(const Term& e);
Term par(const Term& e1, const Term& e2);
Term casel(const Term& e);
Term caser(const Term& e);
Term j(const Term& t);
}  // namespace tm

// Fresh-name supply, threaded explicitly by callers.
struct Fresh {
  long next = 0;
  std::string operator()(const std::string& base);
};

std::set<std::string> free_vars(const Term& t);
bool is_p_term(const Term& t);
// No p-term occurs as a proper subterm.
bool is_p_normal(const Term& t);
// Every Mkc / Postp binder name and every App binder name occurring in t.
void binder_names(const Term& t, std::set<std::string>& mkc_binders, std::set<std::string>& app_binders);
// All variable names (free, bound, binders) occurring in t.
void all_names(const Term& t, std::set<std::string>& out);

// Structural equality up to renaming of case / let / postp bound variables.
bool alpha_eq(const Term& a, const Term& b);
// The components of a multiset term: nested dots flattened, eps dropped.
std::vector<Term> dot_components(const Term& t);
Term dot_all(const std::vector<Term>& ts);

// Capture-avoiding [s/x]t for a single (non-multiset) payload.
Term subst1(const Term& s, const std::string& x, const Term& t, Fresh& fresh);
// [t1 . ... . tn / x] s = [t1/x]s . ... . [tn/x]s; an empty multiset gives eps.
Term subst(const Term& payload, const std::string& x, const Term& target, Fresh& fresh);
// For a p-term target the components compose in parallel instead.
std::vector<Term> subst_parallel(const Term& payload, const std::string& x, const Term& p, Fresh& fresh);
// Replace every App(binder, _) by f(argument).
Term subst_app(const Term& t, const std::string& binder, const std::function<Term(const Term&)>& f);
// Rename a context-level binder (Mkc binder, Postp binder and App occurrences).
Term rename_binder(const Term& t, const std::string& from, const std::string& to);

// Same node with new children; dots are rebuilt with the unit law.
Term with_children(const Term& t, Term a, Term b, Term c);
// Bottom-up rewrite: children first, then f on the rebuilt node (nullptr keeps it).
Term rewrite(const Term& t, const std::function<Term(const Term&)>& f);
std::size_t term_size(const Term& t);

std::string print_term(const Term& t);
Term term_from_sexp(const Sexp& e);
Term parse_term(std::string_view src);

}  // namespace dlnl
