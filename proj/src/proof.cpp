#include "dlnl/proof.hpp"

#include <algorithm>
#include <map>

#include "dlnl/error.hpp"

namespace dlnl {

namespace {

struct RuleInfo {
  Rule rule;
  const char* name;
  const char* label;
  bool linear;
  std::size_t arity;
};

const RuleInfo kRules[] = {
    {Rule::CId, "id", "Id", false, 0},
    {Rule::CWkR, "wk-r", "WkR", false, 1},
    {Rule::CCrR, "cr-r", "CrR", false, 1},
    {Rule::CEx, "ex", "Ex", false, 1},
    {Rule::CZeroL, "zero-l", "ZeroL", false, 0},
    {Rule::CPlusL, "plus-l", "PlusL", false, 2},
    {Rule::CPlusR1, "plus-r1", "PlusR1", false, 1},
    {Rule::CPlusR2, "plus-r2", "PlusR2", false, 1},
    {Rule::CMinusL, "minus-l", "MinusL", false, 1},
    {Rule::CMinusR, "minus-r", "MinusR", false, 2},
    {Rule::CCut, "cut", "Cut", false, 2},
    {Rule::CMCut, "mcut", "MCut", false, 2},
    {Rule::CHL, "h-l", "HL", false, 1},
    {Rule::LId, "id", "Id", true, 0},
    {Rule::LWk, "wk", "Wk", true, 1},
    {Rule::LCtr, "ctr", "Ctr", true, 1},
    {Rule::LEx, "ex", "Ex", true, 1},
    {Rule::LCEx, "c-ex", "CEx", true, 1},
    {Rule::LCut, "cut", "Cut", true, 2},
    {Rule::LCCut, "c-cut", "CCut", true, 2},
    {Rule::LCMCut, "c-mcut", "CMCut", true, 2},
    {Rule::LBotL, "bot-l", "BotL", true, 0},
    {Rule::LBotR, "bot-r", "BotR", true, 1},
    {Rule::LParL, "par-l", "ParL", true, 2},
    {Rule::LParR, "par-r", "ParR", true, 1},
    {Rule::LCoImpL, "co-imp-l", "CoImpL", true, 1},
    {Rule::LCoImpR, "co-imp-r", "CoImpR", true, 2},
    {Rule::LPlusR1, "plus-r1", "PlusR1", true, 1},
    {Rule::LPlusR2, "plus-r2", "PlusR2", true, 1},
    {Rule::LCSubR, "c-sub-r", "CSubR", true, 2},
    {Rule::LJL, "j-l", "JL", true, 1},
    {Rule::LJR, "j-r", "JR", true, 1},
    {Rule::LHR, "h-r", "HR", true, 1},
};

const RuleInfo& info(Rule r) {
  for (auto& i : kRules) {
    if (i.rule == r) return i;
  }
  fail(ErrorKind::RuleMismatch, "unknown rule");
}

[[noreturn]] void mismatch(Rule r, const std::string& msg) {
  fail(ErrorKind::RuleMismatch, std::string(rule_label(r)) + (is_linear_rule(r) ? " (L)" : " (C)") + ": " + msg);
}

std::string show(const Sequent& s) { return show_sequent(s); }

Context tail(const Context& c, std::size_t k) { return Context(c.begin() + static_cast<long>(k), c.end()); }
Context cat(Context a, const Context& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

bool is_linear_rule(Rule r) { return info(r).linear; }
bool is_cut_rule(Rule r) {
  return r == Rule::CCut || r == Rule::CMCut || r == Rule::LCut || r == Rule::LCCut || r == Rule::LCMCut;
}
std::size_t rule_arity(Rule r) { return info(r).arity; }
const char* rule_name(Rule r) { return info(r).name; }
const char* rule_label(Rule r) { return info(r).label; }

Sequent infer_conclusion(const Label& lb, const std::vector<const Sequent*>& ps) {
  const Rule r = lb.rule;
  if (ps.size() != rule_arity(r)) {
    fail(ErrorKind::Arity, std::string(rule_label(r)) + " expects " + std::to_string(rule_arity(r)) + " premise(s), got " +
                               std::to_string(ps.size()));
  }
  auto want_c = [&](std::size_t i) {
    if (ps[i]->linear) mismatch(r, "premise " + std::to_string(i) + " must be a C-sequent, got " + show(*ps[i]));
  };
  auto want_l = [&](std::size_t i) {
    if (!ps[i]->linear) mismatch(r, "premise " + std::to_string(i) + " must be an L-sequent, got " + show(*ps[i]));
  };
  auto front = [&](std::size_t i, bool lin, std::size_t k) -> const Context& {
    const Context& z = lin ? ps[i]->delta : ps[i]->psi;
    if (z.size() < k) {
      mismatch(r, "premise " + std::to_string(i) + " needs " + std::to_string(k) + " active formula(s) in its " +
                      (lin ? "linear" : "nonlinear") + " zone: " + show(*ps[i]));
    }
    return z;
  };
  auto need = [&](bool ok, const std::string& msg) {
    if (!ok) mismatch(r, msg);
  };

  switch (r) {
    case Rule::CId:
      need(lb.f.valid() && lb.f.sort() == Sort::NonLinear, "needs a nonlinear formula");
      return Sequent::C(lb.f, {lb.f});
    case Rule::CZeroL:
      return Sequent::C(Formula::zero(), lb.ctx);
    case Rule::LId:
      need(lb.f.valid() && lb.f.sort() == Sort::Linear, "needs a linear formula");
      return Sequent::L(lb.f, {lb.f}, {});
    case Rule::LBotL:
      return Sequent::L(Formula::bot(), {}, {});

    case Rule::CWkR:
    case Rule::LWk: {
      r == Rule::CWkR ? want_c(0) : want_l(0);
      need(lb.f.valid() && lb.f.sort() == Sort::NonLinear, "weakened formula must be nonlinear");
      Sequent s = *ps[0];
      s.psi.insert(s.psi.begin(), lb.f);
      return s;
    }
    case Rule::CCrR:
    case Rule::LCtr: {
      r == Rule::CCrR ? want_c(0) : want_l(0);
      const Context& z = front(0, false, 2);
      need(z[0] == z[1], "the two front formulas differ in " + show(*ps[0]));
      Sequent s = *ps[0];
      s.psi.erase(s.psi.begin());
      return s;
    }
    case Rule::CEx:
    case Rule::LEx:
    case Rule::LCEx: {
      r == Rule::CEx ? want_c(0) : want_l(0);
      bool lin = r == Rule::LEx;
      Sequent s = *ps[0];
      Context& z = lin ? s.delta : s.psi;
      need(lb.pos >= 0 && static_cast<std::size_t>(lb.pos) + 1 < z.size(),
           "exchange position " + std::to_string(lb.pos) + " out of range in " + show(*ps[0]));
      std::swap(z[static_cast<std::size_t>(lb.pos)], z[static_cast<std::size_t>(lb.pos) + 1]);
      return s;
    }
    case Rule::CPlusL: {
      want_c(0);
      want_c(1);
      return Sequent::C(Formula::plus(ps[0]->subject, ps[1]->subject), cat(ps[0]->psi, ps[1]->psi));
    }
    case Rule::CPlusR1:
    case Rule::CPlusR2:
    case Rule::LPlusR1:
    case Rule::LPlusR2: {
      (r == Rule::CPlusR1 || r == Rule::CPlusR2) ? want_c(0) : want_l(0);
      const Context& z = front(0, false, 1);
      need(lb.f.valid() && lb.f.sort() == Sort::NonLinear, "needs the other disjunct");
      bool first = r == Rule::CPlusR1 || r == Rule::LPlusR1;
      Sequent s = *ps[0];
      s.psi[0] = first ? Formula::plus(z[0], lb.f) : Formula::plus(lb.f, z[0]);
      return s;
    }
    case Rule::CMinusL: {
      want_c(0);
      const Context& z = front(0, false, 1);
      return Sequent::C(Formula::minus(ps[0]->subject, z[0]), tail(z, 1));
    }
    case Rule::CMinusR: {
      want_c(0);
      want_c(1);
      const Context& z = front(0, false, 1);
      Context out{Formula::minus(z[0], ps[1]->subject)};
      return Sequent::C(ps[0]->subject, cat(cat(out, tail(z, 1)), ps[1]->psi));
    }
    case Rule::CCut:
    case Rule::CMCut:
    case Rule::LCCut:
    case Rule::LCMCut: {
      bool c = r == Rule::CCut || r == Rule::CMCut;
      c ? want_c(0) : want_l(0);
      want_c(1);
      int n = (r == Rule::CMCut || r == Rule::LCMCut) ? lb.n : 1;
      need(n >= 0, "negative multiplicity");
      need(lb.f.valid() && lb.f.sort() == Sort::NonLinear, "needs a nonlinear cut formula");
      need(ps[1]->subject == lb.f, "right premise subject " + print_formula(ps[1]->subject) +
                                       " is not the cut formula " + print_formula(lb.f));
      const Context& z = front(0, false, static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        need(z[static_cast<std::size_t>(i)] == lb.f,
             "left premise must start with " + std::to_string(n) + " cop(ies) of " + print_formula(lb.f) + ": " + show(*ps[0]));
      }
      Sequent s = *ps[0];
      s.psi = cat(tail(z, static_cast<std::size_t>(n)), ps[1]->psi);
      return s;
    }
    case Rule::CHL: {
      want_l(0);
      need(ps[0]->delta.empty(), "premise must have an empty linear zone: " + show(*ps[0]));
      return Sequent::C(Formula::h(ps[0]->subject), ps[0]->psi);
    }
    case Rule::LCut: {
      want_l(0);
      want_l(1);
      need(lb.f.valid() && lb.f.sort() == Sort::Linear, "needs a linear cut formula");
      need(ps[1]->subject == lb.f, "right premise subject " + print_formula(ps[1]->subject) +
                                       " is not the cut formula " + print_formula(lb.f));
      const Context& z = front(0, true, 1);
      need(z[0] == lb.f, "left premise must start its linear zone with " + print_formula(lb.f) + ": " + show(*ps[0]));
      return Sequent::L(ps[0]->subject, cat(tail(z, 1), ps[1]->delta), cat(ps[0]->psi, ps[1]->psi));
    }
    case Rule::LBotR: {
      want_l(0);
      Sequent s = *ps[0];
      s.delta.insert(s.delta.begin(), Formula::bot());
      return s;
    }
    case Rule::LParL: {
      want_l(0);
      want_l(1);
      return Sequent::L(Formula::par(ps[0]->subject, ps[1]->subject), cat(ps[0]->delta, ps[1]->delta),
                        cat(ps[0]->psi, ps[1]->psi));
    }
    case Rule::LParR: {
      want_l(0);
      const Context& z = front(0, true, 2);
      Sequent s = *ps[0];
      s.delta = cat({Formula::par(z[0], z[1])}, tail(z, 2));
      return s;
    }
    case Rule::LCoImpL: {
      want_l(0);
      const Context& z = front(0, true, 1);
      return Sequent::L(Formula::coimp(ps[0]->subject, z[0]), tail(z, 1), ps[0]->psi);
    }
    case Rule::LCoImpR: {
      want_l(0);
      want_l(1);
      const Context& z = front(0, true, 1);
      Context d = cat(cat({Formula::coimp(z[0], ps[1]->subject)}, tail(z, 1)), ps[1]->delta);
      return Sequent::L(ps[0]->subject, d, cat(ps[0]->psi, ps[1]->psi));
    }
    case Rule::LCSubR: {
      want_l(0);
      want_c(1);
      const Context& z = front(0, false, 1);
      Sequent s = *ps[0];
      s.psi = cat(cat({Formula::minus(z[0], ps[1]->subject)}, tail(z, 1)), ps[1]->psi);
      return s;
    }
    case Rule::LJL: {
      want_c(0);
      return Sequent::L(Formula::j(ps[0]->subject), {}, ps[0]->psi);
    }
    case Rule::LJR: {
      want_l(0);
      const Context& z = front(0, false, 1);
      return Sequent::L(ps[0]->subject, cat({Formula::j(z[0])}, ps[0]->delta), tail(z, 1));
    }
    case Rule::LHR: {
      want_l(0);
      const Context& z = front(0, true, 1);
      return Sequent::L(ps[0]->subject, tail(z, 1), cat({Formula::h(z[0])}, ps[0]->psi));
    }
  }
  mismatch(r, "unhandled rule");
}

ProofPtr make_proof(const Label& label, std::vector<ProofPtr> premises) {
  std::vector<const Sequent*> ps;
  for (auto& p : premises) ps.push_back(&p->conclusion);
  Sequent c = infer_conclusion(label, ps);
  return std::make_shared<const Proof>(Proof{label, std::move(c), std::move(premises)});
}

namespace {

Sequent check_rec(const ProofPtr& p, const Signature& sig) {
  std::vector<const Sequent*> ps;
  for (std::size_t i = 0; i < p->premises.size(); ++i) {
    try {
      check_rec(p->premises[i], sig);
    } catch (const Error& e) {
      throw e.at_premise(i);
    }
    ps.push_back(&p->premises[i]->conclusion);
  }
  require_atoms(sig, p->conclusion);
  Sequent expect = infer_conclusion(p->label, ps);
  if (expect != p->conclusion) {
    mismatch(p->label.rule, "conclusion should be " + show(expect) + " but is " + show(p->conclusion));
  }
  if (is_linear_rule(p->label.rule) != p->conclusion.linear) {
    mismatch(p->label.rule, "rule and conclusion disagree on the sequent kind");
  }
  return expect;
}

void collect_sig(const ProofPtr& p, Signature& sig) {
  add_atoms(sig, p->conclusion);
  for (auto& q : p->premises) collect_sig(q, sig);
}

}  // namespace

Sequent check_proof(const ProofPtr& p, const Signature& sig) { return check_rec(p, sig); }

Signature signature_of(const ProofPtr& p) {
  Signature sig;
  collect_sig(p, sig);
  return sig;
}

Sequent check_proof(const ProofPtr& p) { return check_rec(p, signature_of(p)); }

int depth(const ProofPtr& p) {
  int d = 0;
  for (auto& q : p->premises) d = std::max(d, depth(q));
  return d + 1;
}

int cut_rank(const ProofPtr& p) {
  int c = 0;
  if (is_cut_rule(p->label.rule)) c = rank(p->label.f) + 1;
  for (auto& q : p->premises) c = std::max(c, cut_rank(q));
  return c;
}

bool is_cut_free(const ProofPtr& p) { return cut_rank(p) == 0; }

std::size_t proof_size(const ProofPtr& p) {
  std::size_t n = 1;
  for (auto& q : p->premises) n += proof_size(q);
  return n;
}

// ---------------------------------------------------------------- file format

namespace {

std::string label_text(const Label& lb) {
  switch (lb.rule) {
    case Rule::CEx:
    case Rule::LEx:
    case Rule::LCEx: return "(" + std::string(rule_name(lb.rule)) + " " + std::to_string(lb.pos) + ")";
    case Rule::CCut:
    case Rule::LCut:
    case Rule::LCCut: return "(" + std::string(rule_name(lb.rule)) + " " + print_formula(lb.f) + ")";
    case Rule::CMCut:
    case Rule::LCMCut:
      return "(" + std::string(rule_name(lb.rule)) + " " + print_formula(lb.f) + " " + std::to_string(lb.n) + ")";
    default: return rule_name(lb.rule);
  }
}

void print_rec(const ProofPtr& p, bool pretty, int indent, std::string& out) {
  out += "(proof " + label_text(p->label) + " " + print_sequent(p->conclusion);
  for (auto& q : p->premises) {
    if (pretty) {
      out += "\n" + std::string(static_cast<std::size_t>(indent + 2), ' ');
    } else {
      out += " ";
    }
    print_rec(q, pretty, indent + 2, out);
  }
  out += ")";
}

int int_arg(const Sexp& e) {
  if (e.is_list) sexp_error(e, "expected an integer");
  try {
    std::size_t used = 0;
    int v = std::stoi(e.atom, &used);
    if (used != e.atom.size()) sexp_error(e, "expected an integer");
    return v;
  } catch (const std::logic_error&) {
    sexp_error(e, "expected an integer");
  }
}

}  // namespace

std::string print_proof(const ProofPtr& p, bool pretty) {
  std::string out;
  print_rec(p, pretty, 0, out);
  return out;
}

ProofPtr proof_from_sexp(const Sexp& e) {
  if (e.head() != "proof" || e.items.size() < 3) sexp_error(e, "expected (proof <rule> <sequent> <premise>*)");
  Sequent concl = sequent_from_sexp(e.items[2]);
  const Sexp& rs = e.items[1];
  std::string name = rs.is_list ? std::string(rs.head()) : rs.atom;
  if (name.empty()) sexp_error(rs, "expected a rule name");
  const RuleInfo* ri = nullptr;
  for (auto& i : kRules) {
    if (name == i.name && i.linear == concl.linear) ri = &i;
  }
  if (!ri) {
    sexp_error(rs, "unknown " + std::string(concl.linear ? "L" : "C") + "-rule '" + name + "'");
  }
  std::vector<ProofPtr> prems;
  for (std::size_t i = 3; i < e.items.size(); ++i) prems.push_back(proof_from_sexp(e.items[i]));

  Label lb = Label::of(ri->rule);
  std::size_t nargs = rs.is_list ? rs.items.size() - 1 : 0;
  auto args = [&](std::size_t lo, std::size_t hi) {
    if (nargs < lo || nargs > hi) sexp_error(rs, "wrong number of arguments for rule '" + name + "'");
  };
  switch (ri->rule) {
    case Rule::CEx:
    case Rule::LEx:
    case Rule::LCEx:
      args(1, 1);
      lb.pos = int_arg(rs.items[1]);
      break;
    case Rule::CCut:
    case Rule::LCut:
    case Rule::LCCut: {
      args(0, 1);
      Sort s = ri->rule == Rule::LCut ? Sort::Linear : Sort::NonLinear;
      if (nargs == 1) {
        lb.f = formula_from_sexp(rs.items[1], s);
      } else if (prems.size() == 2) {
        lb.f = prems[1]->conclusion.subject;
      }
      break;
    }
    case Rule::CMCut:
    case Rule::LCMCut:
      args(2, 2);
      lb.f = formula_from_sexp(rs.items[1], Sort::NonLinear);
      lb.n = int_arg(rs.items[2]);
      break;
    default:
      args(0, 0);
      break;
  }
  // Parameters that only the conclusion determines.
  switch (ri->rule) {
    case Rule::CId:
    case Rule::LId: lb.f = concl.subject; break;
    case Rule::CZeroL: lb.ctx = concl.psi; break;
    case Rule::CWkR:
    case Rule::LWk:
      if (!concl.psi.empty()) lb.f = concl.psi[0];
      break;
    case Rule::CPlusR1:
    case Rule::LPlusR1:
      if (!concl.psi.empty() && concl.psi[0].conn() == Conn::Plus) lb.f = concl.psi[0].right();
      break;
    case Rule::CPlusR2:
    case Rule::LPlusR2:
      if (!concl.psi.empty() && concl.psi[0].conn() == Conn::Plus) lb.f = concl.psi[0].left();
      break;
    default: break;
  }
  return std::make_shared<const Proof>(Proof{lb, std::move(concl), std::move(prems)});
}

ProofPtr parse_proof(std::string_view src) { return proof_from_sexp(read_one_sexp(src)); }

// ---------------------------------------------------------------- builders

namespace mk {

namespace {
ProofPtr node(Rule r, std::vector<ProofPtr> ps) { return make_proof(Label::of(r), std::move(ps)); }
ProofPtr node_f(Rule r, const Formula& f, std::vector<ProofPtr> ps) {
  Label lb = Label::of(r);
  lb.f = f;
  return make_proof(lb, std::move(ps));
}
}  // namespace

ProofPtr c_id(const Formula& s) { return node_f(Rule::CId, s, {}); }
ProofPtr wk_r(const ProofPtr& p, const Formula& t) { return node_f(Rule::CWkR, t, {p}); }
ProofPtr cr_r(const ProofPtr& p) { return node(Rule::CCrR, {p}); }
ProofPtr ex(const ProofPtr& p, int pos) {
  Label lb = Label::of(p->conclusion.linear ? Rule::LEx : Rule::CEx);
  lb.pos = pos;
  return make_proof(lb, {p});
}
ProofPtr zero_l(const Context& psi) {
  Label lb = Label::of(Rule::CZeroL);
  lb.ctx = psi;
  return make_proof(lb, {});
}
ProofPtr plus_l(const ProofPtr& p1, const ProofPtr& p2) { return node(Rule::CPlusL, {p1, p2}); }
ProofPtr plus_r1(const ProofPtr& p, const Formula& t2) { return node_f(Rule::CPlusR1, t2, {p}); }
ProofPtr plus_r2(const ProofPtr& p, const Formula& t1) { return node_f(Rule::CPlusR2, t1, {p}); }
ProofPtr minus_l(const ProofPtr& p) { return node(Rule::CMinusL, {p}); }
ProofPtr minus_r(const ProofPtr& p1, const ProofPtr& p2) { return node(Rule::CMinusR, {p1, p2}); }
ProofPtr cut(const ProofPtr& p1, const ProofPtr& p2) {
  const Formula& f = p2->conclusion.subject;
  if (f.sort() == Sort::Linear) return node_f(Rule::LCut, f, {p1, p2});
  return node_f(p1->conclusion.linear ? Rule::LCCut : Rule::CCut, f, {p1, p2});
}
ProofPtr mcut(const ProofPtr& p1, const ProofPtr& p2, int n) {
  Label lb = Label::of(p1->conclusion.linear ? Rule::LCMCut : Rule::CMCut);
  lb.f = p2->conclusion.subject;
  lb.n = n;
  return make_proof(lb, {p1, p2});
}
ProofPtr h_l(const ProofPtr& p) { return node(Rule::CHL, {p}); }
ProofPtr l_id(const Formula& a) { return node_f(Rule::LId, a, {}); }
ProofPtr wk(const ProofPtr& p, const Formula& t) { return node_f(Rule::LWk, t, {p}); }
ProofPtr ctr(const ProofPtr& p) { return node(Rule::LCtr, {p}); }
ProofPtr c_ex(const ProofPtr& p, int pos) {
  Label lb = Label::of(Rule::LCEx);
  lb.pos = pos;
  return make_proof(lb, {p});
}
ProofPtr c_cut(const ProofPtr& p1, const ProofPtr& p2) { return node_f(Rule::LCCut, p2->conclusion.subject, {p1, p2}); }
ProofPtr bot_l() { return node(Rule::LBotL, {}); }
ProofPtr bot_r(const ProofPtr& p) { return node(Rule::LBotR, {p}); }
ProofPtr par_l(const ProofPtr& p1, const ProofPtr& p2) { return node(Rule::LParL, {p1, p2}); }
ProofPtr par_r(const ProofPtr& p) { return node(Rule::LParR, {p}); }
ProofPtr coimp_l(const ProofPtr& p) { return node(Rule::LCoImpL, {p}); }
ProofPtr coimp_r(const ProofPtr& p1, const ProofPtr& p2) { return node(Rule::LCoImpR, {p1, p2}); }
ProofPtr l_plus_r1(const ProofPtr& p, const Formula& t2) { return node_f(Rule::LPlusR1, t2, {p}); }
ProofPtr l_plus_r2(const ProofPtr& p, const Formula& t1) { return node_f(Rule::LPlusR2, t1, {p}); }
ProofPtr c_sub_r(const ProofPtr& p1, const ProofPtr& p2) { return node(Rule::LCSubR, {p1, p2}); }
ProofPtr j_l(const ProofPtr& p) { return node(Rule::LJL, {p}); }
ProofPtr j_r(const ProofPtr& p) { return node(Rule::LJR, {p}); }
ProofPtr h_r(const ProofPtr& p) { return node(Rule::LHR, {p}); }

}  // namespace mk

// ---------------------------------------------------------------- arrange

namespace {

ProofPtr swap_at(const ProofPtr& p, bool linear_zone, std::size_t k) {
  Rule r = linear_zone ? Rule::LEx : (p->conclusion.linear ? Rule::LCEx : Rule::CEx);
  // two equal swaps in a row cancel
  if (p->label.rule == r && p->label.pos == static_cast<int>(k)) return p->premises[0];
  Label lb = Label::of(r);
  lb.pos = static_cast<int>(k);
  return make_proof(lb, {p});
}

// Permute one zone of p's conclusion into `target` (same multiset) with adjacent swaps.
ProofPtr permute_zone(ProofPtr p, bool linear_zone, const Context& target) {
  for (std::size_t k = 0; k < target.size(); ++k) {
    const Context& cur = linear_zone ? p->conclusion.delta : p->conclusion.psi;
    std::size_t m = k;
    while (m < cur.size() && cur[m] != target[k]) ++m;
    if (m == cur.size()) fail(ErrorKind::ShapeMismatch, "arrange: formula missing during permutation");
    for (std::size_t j = m; j > k; --j) p = swap_at(p, linear_zone, j - 1);
  }
  return p;
}

}  // namespace

ProofPtr to_front(const ProofPtr& p, bool linear_zone, std::size_t from) {
  ProofPtr q = p;
  for (std::size_t k = from; k > 0; --k) q = swap_at(q, linear_zone, k - 1);
  return q;
}

ProofPtr arrange(const ProofPtr& p, const Sequent& target) {
  const Sequent& c = p->conclusion;
  if (c.linear != target.linear || c.subject != target.subject) {
    fail(ErrorKind::ShapeMismatch, "arrange: " + show_sequent(c) + " cannot become " + show_sequent(target));
  }
  if (!same_multiset(c.delta, target.delta)) {
    fail(ErrorKind::ShapeMismatch, "arrange: linear zones differ: " + show_sequent(c) + " vs " + show_sequent(target));
  }
  if (c == target) return p;
  ProofPtr q = p;
  std::map<std::uint64_t, int> want;
  for (auto& f : target.psi) want[f.id()]++;
  // contract surplus copies
  for (;;) {
    const Context& z = q->conclusion.psi;
    std::map<std::uint64_t, int> have;
    for (auto& f : z) have[f.id()]++;
    std::size_t i = z.size();
    for (std::size_t k = 0; k < z.size(); ++k) {
      if (have[z[k].id()] > want[z[k].id()]) {
        i = k;
        break;
      }
    }
    if (i == z.size()) break;
    if (want[z[i].id()] == 0) {
      fail(ErrorKind::ShapeMismatch, "arrange: cannot drop " + print_formula(z[i]) + " from " + show_sequent(q->conclusion));
    }
    std::size_t jpos = i + 1;
    while (z[jpos] != z[i]) ++jpos;
    q = to_front(q, false, i);
    q = to_front(q, false, jpos);  // the first copy now sits at 1
    q = q->conclusion.linear ? mk::ctr(q) : mk::cr_r(q);
  }
  // weaken missing copies
  {
    std::map<std::uint64_t, int> have;
    for (auto& f : q->conclusion.psi) have[f.id()]++;
    for (auto& f : target.psi) {
      if (have[f.id()] > 0) {
        have[f.id()]--;
      } else {
        q = q->conclusion.linear ? mk::wk(q, f) : mk::wk_r(q, f);
      }
    }
  }
  q = permute_zone(q, false, target.psi);
  if (target.linear) q = permute_zone(q, true, target.delta);
  return q;
}

}  // namespace dlnl
