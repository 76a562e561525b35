#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dlnl/sexpr.hpp"

namespace dlnl {

enum class Sort { NonLinear, Linear };

// Nonlinear connectives: Zero, Plus, Minus, H (over a linear body), NLAtom.
// Linear connectives: Bot, Par, CoImp (written `sub`), J (over a nonlinear body), LAtom.
enum class Conn : std::uint8_t { Zero, Plus, Minus, H, NLAtom, Bot, Par, CoImp, J, LAtom };

struct FormulaNode;

// Hash-consed immutable formula handle: equal formulas share one node, so
// equality and hashing are O(1).
class Formula {
 public:
  Formula() = default;

  static Formula zero();
  static Formula plus(const Formula& a, const Formula& b);
  static Formula minus(const Formula& a, const Formula& b);
  static Formula h(const Formula& body);
  static Formula nl_atom(std::string_view name);
  static Formula bot();
  static Formula par(const Formula& a, const Formula& b);
  static Formula coimp(const Formula& a, const Formula& b);
  static Formula j(const Formula& body);
  static Formula l_atom(std::string_view name);

  bool valid() const { return node_ != nullptr; }
  Conn conn() const;
  Sort sort() const;
  bool is_atom() const { return conn() == Conn::NLAtom || conn() == Conn::LAtom; }
  bool is_binary() const;
  const Formula& left() const;
  const Formula& right() const;
  const Formula& body() const { return left(); }
  const std::string& name() const;
  std::uint64_t id() const;
  std::size_t hash() const;

  friend bool operator==(const Formula& a, const Formula& b) { return a.node_ == b.node_; }
  friend bool operator!=(const Formula& a, const Formula& b) { return a.node_ != b.node_; }

 private:
  explicit Formula(const FormulaNode* n) : node_(n) {}
  static Formula intern(Conn c, std::string_view name, const Formula& l, const Formula& r);
  const FormulaNode* node_ = nullptr;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

// Structural total order, independent of construction history.
int compare(const Formula& a, const Formula& b);
struct FormulaLess {
  bool operator()(const Formula& a, const Formula& b) const { return compare(a, b) < 0; }
};

// Count of connective and constant nodes; atoms count 0.
int rank(const Formula& f);

std::string print_formula(const Formula& f);
Formula parse_formula(std::string_view src, Sort sort);
Formula formula_from_sexp(const Sexp& e, Sort sort);

struct Signature {
  std::set<std::string> nl_atoms;
  std::set<std::string> l_atoms;

  // Record the atoms of f; throws SortError if a name ends up in both sorts.
  void add_atoms(const Formula& f);
  // Throws UnboundAtom / SortError if f uses an atom outside the signature.
  void require(const Formula& f) const;
  std::size_t size() const { return nl_atoms.size() + l_atoms.size(); }
};

using Context = std::vector<Formula>;

// shape(c) is the formula sequence itself; equality is pointwise.
inline const Context& context_shape(const Context& c) { return c; }
bool same_multiset(const Context& a, const Context& b);
std::string print_context(const Context& c);

}  // namespace dlnl

template <>
struct std::hash<dlnl::Formula> {
  std::size_t operator()(const dlnl::Formula& f) const { return f.hash(); }
};
