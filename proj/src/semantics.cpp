#include "dlnl/semantics.hpp"

#include <algorithm>
#include <memory>

#include "dlnl/error.hpp"

namespace dlnl {

Lattice::Lattice(std::string name, std::vector<unsigned> sets) : name_(std::move(name)), sets_(std::move(sets)) {
  const std::size_t n = sets_.size();
  auto find = [&](unsigned s) -> Elem {
    auto it = std::find(sets_.begin(), sets_.end(), s);
    if (it == sets_.end()) fail(ErrorKind::PreconditionViolated, name_ + ": family not closed under union/intersection");
    return static_cast<Elem>(it - sets_.begin());
  };
  leq_.resize(n * n);
  join_.resize(n * n);
  meet_.resize(n * n);
  coimp_.resize(n * n);
  unsigned all = 0, none = ~0u;
  for (unsigned s : sets_) {
    all |= s;
    none &= s;
  }
  top_ = find(all);
  bottom_ = find(none);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      leq_[a * n + b] = (sets_[a] & ~sets_[b]) == 0;
      join_[a * n + b] = find(sets_[a] | sets_[b]);
      meet_[a * n + b] = find(sets_[a] & sets_[b]);
    }
  }
  for (Elem a = 0; a < size(); ++a) {
    for (Elem b = 0; b < size(); ++b) {
      Elem best = -1;
      for (Elem x = 0; x < size(); ++x) {
        if (!leq(a, join(x, b))) continue;
        if (best < 0 || leq(x, best)) best = x;
      }
      for (Elem x = 0; x < size(); ++x) {
        if (leq(a, join(x, b)) && !leq(best, x)) {
          fail(ErrorKind::PreconditionViolated, name_ + ": no least co-implication candidate");
        }
      }
      coimp_[idx(a, b)] = best;
    }
  }
  // c <= a v b  iff  c - b <= a
  for (Elem a = 0; a < size(); ++a) {
    for (Elem b = 0; b < size(); ++b) {
      for (Elem c = 0; c < size(); ++c) {
        if (leq(c, join(a, b)) != leq(co_imp(c, b), a)) {
          fail(ErrorKind::PreconditionViolated, name_ + ": co-implication adjunction fails");
        }
      }
    }
  }
}

Lattice Lattice::chain(int n) {
  std::vector<unsigned> s;
  for (int i = 0; i < n; ++i) s.push_back((1u << i) - 1);
  return Lattice("chain" + std::to_string(n), s);
}

Lattice Lattice::powerset(int k) {
  std::vector<unsigned> s;
  for (unsigned m = 0; m < (1u << k); ++m) s.push_back(m);
  return Lattice("pow" + std::to_string(k), s);
}

Lattice Lattice::vdown() {
  // point 0 lies below points 1 and 2
  return Lattice("vdown", {0b000, 0b001, 0b011, 0b101, 0b111});
}

std::string Lattice::show(Elem a) const {
  std::string out = "{";
  bool first = true;
  for (int i = 0; i < 32; ++i) {
    if (sets_[static_cast<std::size_t>(a)] & (1u << i)) {
      out += (first ? "" : ",") + std::to_string(i);
      first = false;
    }
  }
  return out + "}";
}

namespace {

struct Shipped {
  std::vector<std::string> names{"chain2", "chain3", "chain4", "pow2", "pow3", "vdown"};
  std::vector<Lattice> lattices{Lattice::chain(2), Lattice::chain(3), Lattice::chain(4),
                                Lattice::powerset(2), Lattice::powerset(3), Lattice::vdown()};
};

const Shipped& shipped() {
  static const Shipped s;
  return s;
}

}  // namespace

const std::vector<std::string>& lattice_names() { return shipped().names; }

const Lattice& lattice_by_name(const std::string& name) {
  const Shipped& s = shipped();
  for (std::size_t i = 0; i < s.names.size(); ++i) {
    if (s.names[i] == name) return s.lattices[i];
  }
  fail(ErrorKind::Usage, "unknown lattice '" + name + "' (expected chain2|chain3|chain4|pow2|pow3|vdown)");
}

Lattice::Elem eval_formula(const Formula& f, const Valuation& v, const Lattice& l) {
  switch (f.conn()) {
    case Conn::Zero:
    case Conn::Bot: return l.bottom();
    case Conn::NLAtom:
    case Conn::LAtom: {
      auto it = v.find(f.name());
      if (it == v.end()) fail(ErrorKind::UnboundAtom, "no value for atom '" + f.name() + "'");
      return it->second;
    }
    case Conn::Plus:
    case Conn::Par: return l.join(eval_formula(f.left(), v, l), eval_formula(f.right(), v, l));
    case Conn::Minus:
    case Conn::CoImp: return l.co_imp(eval_formula(f.left(), v, l), eval_formula(f.right(), v, l));
    case Conn::H:
    case Conn::J: return eval_formula(f.body(), v, l);
  }
  return l.bottom();
}

bool holds(const Sequent& s, const Valuation& v, const Lattice& l) {
  Lattice::Elem rhs = l.bottom();
  for (auto& f : s.delta) rhs = l.join(rhs, eval_formula(f, v, l));
  for (auto& f : s.psi) rhs = l.join(rhs, eval_formula(f, v, l));
  return l.leq(eval_formula(s.subject, v, l), rhs);
}

namespace {

// Calls fn on every valuation of the sequent's atoms until it returns true.
template <class Fn>
bool sweep(const Sequent& s, const Lattice& l, Fn fn) {
  Signature sig = signature_of(s);
  std::vector<std::string> atoms(sig.nl_atoms.begin(), sig.nl_atoms.end());
  atoms.insert(atoms.end(), sig.l_atoms.begin(), sig.l_atoms.end());
  if (atoms.size() > 4) {
    fail(ErrorKind::TooManyAtoms, "sequent has " + std::to_string(atoms.size()) + " atoms; at most 4 are swept");
  }
  std::vector<int> digits(atoms.size(), 0);
  for (;;) {
    Valuation v;
    for (std::size_t i = 0; i < atoms.size(); ++i) v[atoms[i]] = digits[i];
    if (fn(v)) return true;
    std::size_t i = 0;
    while (i < digits.size() && ++digits[i] == l.size()) digits[i++] = 0;
    if (i == digits.size()) return false;
  }
}

}  // namespace

std::optional<Valuation> refute(const Sequent& s, const Lattice& l) {
  std::optional<Valuation> out;
  sweep(s, l, [&](const Valuation& v) {
    if (holds(s, v, l)) return false;
    out = v;
    return true;
  });
  return out;
}

bool valid_in(const Sequent& s, const Lattice& l) { return !refute(s, l).has_value(); }

}  // namespace dlnl
