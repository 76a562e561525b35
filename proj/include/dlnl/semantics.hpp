#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dlnl/sequent.hpp"

namespace dlnl {

// A finite distributive lattice given as a family of sets closed under union
// and intersection, ordered by inclusion. Co-implication is precomputed.
class Lattice {
 public:
  using Elem = int;

  // Throws if the family isn't a lattice or co-implication fails its adjunction.
  Lattice(std::string name, std::vector<unsigned> sets);

  static Lattice chain(int n);     // 0 < 1 < ... < n-1
  static Lattice powerset(int k);  // subsets of a k-element set
  static Lattice vdown();          // downsets of the poset with one point below two

  const std::string& name() const { return name_; }
  int size() const { return static_cast<int>(sets_.size()); }
  Elem bottom() const { return bottom_; }
  Elem top() const { return top_; }
  bool leq(Elem a, Elem b) const { return leq_[idx(a, b)]; }
  Elem join(Elem a, Elem b) const { return join_[idx(a, b)]; }
  Elem meet(Elem a, Elem b) const { return meet_[idx(a, b)]; }
  // Least x with a <= x v b.
  Elem co_imp(Elem a, Elem b) const { return coimp_[idx(a, b)]; }
  std::string show(Elem a) const;

 private:
  std::size_t idx(Elem a, Elem b) const { return static_cast<std::size_t>(a) * sets_.size() + static_cast<std::size_t>(b); }
  std::string name_;
  std::vector<unsigned> sets_;
  std::vector<char> leq_;
  std::vector<Elem> join_, meet_, coimp_;
  Elem bottom_ = 0, top_ = 0;
};

// chain2 chain3 chain4 pow2 pow3 vdown; Usage error otherwise.
const Lattice& lattice_by_name(const std::string& name);
const std::vector<std::string>& lattice_names();

using Valuation = std::map<std::string, Lattice::Elem>;

Lattice::Elem eval_formula(const Formula& f, const Valuation& v, const Lattice& l);
// subject <= join of the whole succedent (both zones); the empty join is bottom.
bool holds(const Sequent& s, const Valuation& v, const Lattice& l);
// A falsifying valuation over the sequent's atoms, if any. TooManyAtoms above 4.
std::optional<Valuation> refute(const Sequent& s, const Lattice& l);
// Checks every valuation of the sequent's atoms.
bool valid_in(const Sequent& s, const Lattice& l);

}  // namespace dlnl
