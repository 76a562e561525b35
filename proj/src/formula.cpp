#include "dlnl/formula.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <mutex>
#include <unordered_map>

#include "dlnl/error.hpp"

namespace dlnl {

struct FormulaNode {
  Conn conn;
  std::string name;
  Formula l, r;
  std::uint64_t id;
  std::size_t hash;
};

namespace {

struct Key {
  Conn conn;
  std::string name;
  std::uint64_t l, r;
  bool operator==(const Key& o) const { return conn == o.conn && name == o.name && l == o.l && r == o.r; }
};

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    std::size_t h = std::hash<std::string>{}(k.name);
    h ^= static_cast<std::size_t>(k.conn) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= k.l * 0x100000001b3ULL + (h << 6) + (h >> 2);
    h ^= k.r * 0xc2b2ae3d27d4eb4fULL + (h << 6) + (h >> 2);
    return h;
  }
};

struct Table {
  std::mutex mu;
  std::deque<FormulaNode> nodes;  // stable addresses
  std::unordered_map<Key, const FormulaNode*, KeyHash> index;
};

Table& table() {
  static Table* t = new Table();
  return *t;
}

bool is_nl(Conn c) { return c == Conn::Zero || c == Conn::Plus || c == Conn::Minus || c == Conn::H || c == Conn::NLAtom; }

}  // namespace

Formula Formula::intern(Conn c, std::string_view name, const Formula& l, const Formula& r) {
  Key k{c, std::string(name), l.valid() ? l.id() : 0, r.valid() ? r.id() : 0};
  Table& t = table();
  std::lock_guard<std::mutex> lock(t.mu);
  auto it = t.index.find(k);
  if (it != t.index.end()) return Formula(it->second);
  std::uint64_t id = t.nodes.size() + 1;
  t.nodes.push_back(FormulaNode{c, k.name, l, r, id, KeyHash{}(k)});
  const FormulaNode* n = &t.nodes.back();
  t.index.emplace(std::move(k), n);
  return Formula(n);
}

static void need_sort(const Formula& f, Sort s, const char* where) {
  if (f.sort() != s) {
    fail(ErrorKind::Sort, std::string(where) + ": operand " + print_formula(f) + " has the wrong sort");
  }
}

Formula Formula::zero() { return intern(Conn::Zero, "", {}, {}); }
Formula Formula::bot() { return intern(Conn::Bot, "", {}, {}); }
Formula Formula::plus(const Formula& a, const Formula& b) {
  need_sort(a, Sort::NonLinear, "+");
  need_sort(b, Sort::NonLinear, "+");
  return intern(Conn::Plus, "", a, b);
}
Formula Formula::minus(const Formula& a, const Formula& b) {
  need_sort(a, Sort::NonLinear, "-");
  need_sort(b, Sort::NonLinear, "-");
  return intern(Conn::Minus, "", a, b);
}
Formula Formula::h(const Formula& body) {
  need_sort(body, Sort::Linear, "H");
  return intern(Conn::H, "", body, {});
}
Formula Formula::par(const Formula& a, const Formula& b) {
  need_sort(a, Sort::Linear, "par");
  need_sort(b, Sort::Linear, "par");
  return intern(Conn::Par, "", a, b);
}
Formula Formula::coimp(const Formula& a, const Formula& b) {
  need_sort(a, Sort::Linear, "sub");
  need_sort(b, Sort::Linear, "sub");
  return intern(Conn::CoImp, "", a, b);
}
Formula Formula::j(const Formula& body) {
  need_sort(body, Sort::NonLinear, "J");
  return intern(Conn::J, "", body, {});
}
Formula Formula::nl_atom(std::string_view name) { return intern(Conn::NLAtom, name, {}, {}); }
Formula Formula::l_atom(std::string_view name) { return intern(Conn::LAtom, name, {}, {}); }

Conn Formula::conn() const { return node_->conn; }
Sort Formula::sort() const { return is_nl(node_->conn) ? Sort::NonLinear : Sort::Linear; }
bool Formula::is_binary() const {
  Conn c = node_->conn;
  return c == Conn::Plus || c == Conn::Minus || c == Conn::Par || c == Conn::CoImp;
}
const Formula& Formula::left() const { return node_->l; }
const Formula& Formula::right() const { return node_->r; }
const std::string& Formula::name() const { return node_->name; }
std::uint64_t Formula::id() const { return node_->id; }
std::size_t Formula::hash() const { return node_->hash; }

int compare(const Formula& a, const Formula& b) {
  if (a == b) return 0;
  if (a.conn() != b.conn()) return a.conn() < b.conn() ? -1 : 1;
  if (a.is_atom()) return a.name() < b.name() ? -1 : (a.name() == b.name() ? 0 : 1);
  if (a.left().valid()) {
    int c = compare(a.left(), b.left());
    if (c != 0) return c;
  }
  if (a.right().valid()) return compare(a.right(), b.right());
  return 0;
}

int rank(const Formula& f) {
  switch (f.conn()) {
    case Conn::NLAtom:
    case Conn::LAtom: return 0;
    case Conn::Zero:
    case Conn::Bot: return 1;
    case Conn::H:
    case Conn::J: return 1 + rank(f.body());
    default: return 1 + rank(f.left()) + rank(f.right());
  }
}

std::string print_formula(const Formula& f) {
  switch (f.conn()) {
    case Conn::Zero: return "0";
    case Conn::Bot: return "bot";
    case Conn::NLAtom:
    case Conn::LAtom: return f.name();
    case Conn::H: return "(H " + print_formula(f.body()) + ")";
    case Conn::J: return "(J " + print_formula(f.body()) + ")";
    case Conn::Plus: return "(+ " + print_formula(f.left()) + " " + print_formula(f.right()) + ")";
    case Conn::Minus: return "(- " + print_formula(f.left()) + " " + print_formula(f.right()) + ")";
    case Conn::Par: return "(par " + print_formula(f.left()) + " " + print_formula(f.right()) + ")";
    case Conn::CoImp: return "(sub " + print_formula(f.left()) + " " + print_formula(f.right()) + ")";
  }
  return "?";
}

namespace {

bool reserved(std::string_view s) {
  return s == "0" || s == "bot" || s == "+" || s == "-" || s == "H" || s == "J" || s == "par" || s == "sub";
}

bool valid_identifier(std::string_view s) {
  if (s.empty()) return false;
  char c = s[0];
  if (!(std::isalpha(static_cast<unsigned char>(c)) || c == '_')) return false;
  for (char d : s) {
    if (!(std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '\'' || d == '-')) return false;
  }
  return true;
}

[[noreturn]] void sort_error(const Sexp& e, const std::string& msg) { throw Error(ErrorKind::Sort, msg, {}, e.line, e.col); }

}  // namespace

Formula formula_from_sexp(const Sexp& e, Sort sort) {
  const bool nl = sort == Sort::NonLinear;
  if (!e.is_list) {
    if (e.atom == "0") {
      if (!nl) sort_error(e, "'0' is nonlinear but a linear formula was expected");
      return Formula::zero();
    }
    if (e.atom == "bot") {
      if (nl) sort_error(e, "'bot' is linear but a nonlinear formula was expected");
      return Formula::bot();
    }
    if (reserved(e.atom) || !valid_identifier(e.atom)) sexp_error(e, "bad formula atom '" + e.atom + "'");
    return nl ? Formula::nl_atom(e.atom) : Formula::l_atom(e.atom);
  }
  std::string_view h = e.head();
  if (h.empty()) sexp_error(e, "expected a formula");
  auto arity = [&](std::size_t n) {
    if (e.items.size() != n + 1) sexp_error(e, "'" + std::string(h) + "' expects " + std::to_string(n) + " argument(s)");
  };
  auto want = [&](Sort s) {
    if (s != sort) {
      sort_error(e, "connective '" + std::string(h) + "' is " + (s == Sort::NonLinear ? "nonlinear" : "linear") +
                        " but a " + (nl ? "nonlinear" : "linear") + " formula was expected");
    }
  };
  if (h == "+" || h == "-") {
    want(Sort::NonLinear);
    arity(2);
    Formula a = formula_from_sexp(e.items[1], Sort::NonLinear), b = formula_from_sexp(e.items[2], Sort::NonLinear);
    return h == "+" ? Formula::plus(a, b) : Formula::minus(a, b);
  }
  if (h == "par" || h == "sub") {
    want(Sort::Linear);
    arity(2);
    Formula a = formula_from_sexp(e.items[1], Sort::Linear), b = formula_from_sexp(e.items[2], Sort::Linear);
    return h == "par" ? Formula::par(a, b) : Formula::coimp(a, b);
  }
  if (h == "H") {
    want(Sort::NonLinear);
    arity(1);
    return Formula::h(formula_from_sexp(e.items[1], Sort::Linear));
  }
  if (h == "J") {
    want(Sort::Linear);
    arity(1);
    return Formula::j(formula_from_sexp(e.items[1], Sort::NonLinear));
  }
  sexp_error(e, "unknown connective '" + std::string(h) + "'");
}

Formula parse_formula(std::string_view src, Sort sort) { return formula_from_sexp(read_one_sexp(src), sort); }

void Signature::add_atoms(const Formula& f) {
  switch (f.conn()) {
    case Conn::NLAtom:
      if (l_atoms.count(f.name())) fail(ErrorKind::Sort, "atom '" + f.name() + "' used at both sorts");
      nl_atoms.insert(f.name());
      return;
    case Conn::LAtom:
      if (nl_atoms.count(f.name())) fail(ErrorKind::Sort, "atom '" + f.name() + "' used at both sorts");
      l_atoms.insert(f.name());
      return;
    case Conn::Zero:
    case Conn::Bot: return;
    case Conn::H:
    case Conn::J: add_atoms(f.body()); return;
    default:
      add_atoms(f.left());
      add_atoms(f.right());
  }
}

void Signature::require(const Formula& f) const {
  switch (f.conn()) {
    case Conn::NLAtom:
      if (!nl_atoms.count(f.name())) {
        fail(l_atoms.count(f.name()) ? ErrorKind::Sort : ErrorKind::UnboundAtom,
             "atom '" + f.name() + "' is not a declared nonlinear atom");
      }
      return;
    case Conn::LAtom:
      if (!l_atoms.count(f.name())) {
        fail(nl_atoms.count(f.name()) ? ErrorKind::Sort : ErrorKind::UnboundAtom,
             "atom '" + f.name() + "' is not a declared linear atom");
      }
      return;
    case Conn::Zero:
    case Conn::Bot: return;
    case Conn::H:
    case Conn::J: require(f.body()); return;
    default:
      require(f.left());
      require(f.right());
  }
}

bool same_multiset(const Context& a, const Context& b) {
  if (a.size() != b.size()) return false;
  std::vector<std::uint64_t> x, y;
  for (auto& f : a) x.push_back(f.id());
  for (auto& f : b) y.push_back(f.id());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return x == y;
}

std::string print_context(const Context& c) {
  std::string s = "(ctx";
  for (auto& f : c) s += " " + print_formula(f);
  return s + ")";
}

}  // namespace dlnl
