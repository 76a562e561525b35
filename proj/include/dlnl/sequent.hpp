#pragma once

#include <string>

#include "dlnl/formula.hpp"

namespace dlnl {

// S |-_C Psi (linear = false, delta empty) or A |-_L Delta; Psi.
struct Sequent {
  bool linear = false;
  Formula subject;
  Context delta;
  Context psi;

  static Sequent C(Formula s, Context psi) { return Sequent{false, std::move(s), {}, std::move(psi)}; }
  static Sequent L(Formula a, Context delta, Context psi) {
    return Sequent{true, std::move(a), std::move(delta), std::move(psi)};
  }

  friend bool operator==(const Sequent& a, const Sequent& b) {
    return a.linear == b.linear && a.subject == b.subject && a.delta == b.delta && a.psi == b.psi;
  }
  friend bool operator!=(const Sequent& a, const Sequent& b) { return !(a == b); }
};

// Equality after sorting each zone.
bool same_up_to_exchange(const Sequent& a, const Sequent& b);
// Zones sorted structurally; used as a memo key and for display.
Sequent normalized(const Sequent& s);

std::string print_sequent(const Sequent& s);
// Readable form, e.g. "a |-_C a, b" or "A |-_L B; S".
std::string show_sequent(const Sequent& s);
Sequent sequent_from_sexp(const Sexp& e);
Sequent parse_sequent(std::string_view src);

void add_atoms(Signature& sig, const Sequent& s);
void require_atoms(const Signature& sig, const Sequent& s);
int sequent_rank(const Sequent& s);
Signature signature_of(const Sequent& s);

}  // namespace dlnl
