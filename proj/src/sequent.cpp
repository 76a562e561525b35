#include "dlnl/sequent.hpp"

#include <algorithm>

#include "dlnl/error.hpp"

namespace dlnl {

namespace {

Context sorted(Context c) {
  std::sort(c.begin(), c.end(), FormulaLess{});
  return c;
}

Context context_from_sexp(const Sexp& e, Sort sort) {
  if (e.head() != "ctx") sexp_error(e, "expected (ctx ...)");
  Context out;
  for (std::size_t i = 1; i < e.items.size(); ++i) out.push_back(formula_from_sexp(e.items[i], sort));
  return out;
}

}  // namespace

bool same_up_to_exchange(const Sequent& a, const Sequent& b) {
  return a.linear == b.linear && a.subject == b.subject && same_multiset(a.delta, b.delta) &&
         same_multiset(a.psi, b.psi);
}

Sequent normalized(const Sequent& s) { return Sequent{s.linear, s.subject, sorted(s.delta), sorted(s.psi)}; }

std::string print_sequent(const Sequent& s) {
  if (!s.linear) return "(seqC " + print_formula(s.subject) + " " + print_context(s.psi) + ")";
  return "(seqL " + print_formula(s.subject) + " " + print_context(s.delta) + " " + print_context(s.psi) + ")";
}

std::string show_sequent(const Sequent& s) {
  auto list = [](const Context& c) {
    std::string out;
    for (std::size_t i = 0; i < c.size(); ++i) out += (i ? ", " : "") + print_formula(c[i]);
    return out.empty() ? std::string(".") : out;
  };
  if (!s.linear) return print_formula(s.subject) + " |-_C " + (s.psi.empty() ? std::string() : list(s.psi));
  return print_formula(s.subject) + " |-_L " + list(s.delta) + "; " + list(s.psi);
}

Sequent sequent_from_sexp(const Sexp& e) {
  std::string_view h = e.head();
  if (h == "seqC") {
    if (e.items.size() != 3) sexp_error(e, "seqC expects a subject and one (ctx ...)");
    return Sequent::C(formula_from_sexp(e.items[1], Sort::NonLinear), context_from_sexp(e.items[2], Sort::NonLinear));
  }
  if (h == "seqL") {
    if (e.items.size() != 4) sexp_error(e, "seqL expects a subject and two (ctx ...)");
    return Sequent::L(formula_from_sexp(e.items[1], Sort::Linear), context_from_sexp(e.items[2], Sort::Linear),
                      context_from_sexp(e.items[3], Sort::NonLinear));
  }
  sexp_error(e, "expected (seqC ...) or (seqL ...)");
}

Sequent parse_sequent(std::string_view src) { return sequent_from_sexp(read_one_sexp(src)); }

void add_atoms(Signature& sig, const Sequent& s) {
  sig.add_atoms(s.subject);
  for (auto& f : s.delta) sig.add_atoms(f);
  for (auto& f : s.psi) sig.add_atoms(f);
}

void require_atoms(const Signature& sig, const Sequent& s) {
  sig.require(s.subject);
  for (auto& f : s.delta) sig.require(f);
  for (auto& f : s.psi) sig.require(f);
}

int sequent_rank(const Sequent& s) {
  int r = rank(s.subject);
  for (auto& f : s.delta) r += rank(f);
  for (auto& f : s.psi) r += rank(f);
  return r;
}

Signature signature_of(const Sequent& s) {
  Signature sig;
  add_atoms(sig, s);
  return sig;
}

}  // namespace dlnl
