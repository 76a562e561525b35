#include "dlnl/cut_elim.hpp"

#include <algorithm>

#include "dlnl/error.hpp"

namespace dlnl {

namespace {

// How many principal formulas a rule puts at the front of each conclusion
// zone and how many active formulas it consumes from the front of each
// premise zone. Exchanges and axioms are handled separately.
struct Layout {
  std::size_t pd = 0, pp = 0;
  std::size_t kd[2] = {0, 0}, kp[2] = {0, 0};
  bool structural = false;  // principal of Wk / Cr / Ctr
};

Layout layout(const Label& lb) {
  Layout l;
  switch (lb.rule) {
    case Rule::CWkR:
    case Rule::LWk: l.pp = 1; l.structural = true; break;
    case Rule::CCrR:
    case Rule::LCtr: l.pp = 1; l.kp[0] = 2; l.structural = true; break;
    case Rule::CPlusR1:
    case Rule::CPlusR2:
    case Rule::LPlusR1:
    case Rule::LPlusR2: l.pp = 1; l.kp[0] = 1; break;
    case Rule::CMinusL: l.kp[0] = 1; break;
    case Rule::CMinusR:
    case Rule::LCSubR: l.pp = 1; l.kp[0] = 1; break;
    case Rule::CCut:
    case Rule::LCCut: l.kp[0] = 1; break;
    case Rule::CMCut:
    case Rule::LCMCut: l.kp[0] = static_cast<std::size_t>(lb.n); break;
    case Rule::LCut: l.kd[0] = 1; break;
    case Rule::LBotR: l.pd = 1; break;
    case Rule::LParR: l.pd = 1; l.kd[0] = 2; break;
    case Rule::LCoImpL: l.kd[0] = 1; break;
    case Rule::LCoImpR: l.pd = 1; l.kd[0] = 1; break;
    case Rule::LJR: l.pd = 1; l.kp[0] = 1; break;
    case Rule::LHR: l.pp = 1; l.kd[0] = 1; break;
    default: break;  // PlusL, HL, ParL, JL: nothing principal on the right
  }
  return l;
}

const Context& zone(const Sequent& s, bool lin) { return lin ? s.delta : s.psi; }

// Marked occurrences of the cut formula in one zone of p1's conclusion.
struct Marks {
  bool lin = false;
  std::vector<std::size_t> pos;
};

struct Traced {
  std::vector<Marks> premise;  // one entry per premise
  bool principal = false;      // a mark is the logical principal formula
};

Traced trace(const ProofPtr& p, const Marks& m) {
  Traced t;
  t.premise.assign(p->premises.size(), Marks{m.lin, {}});
  const Rule r = p->label.rule;
  if (r == Rule::CEx || r == Rule::LEx || r == Rule::LCEx) {
    bool swaps_here = (r == Rule::LEx) == m.lin;
    auto k = static_cast<std::size_t>(p->label.pos);
    for (std::size_t j : m.pos) {
      std::size_t q = j;
      if (swaps_here && j == k) q = k + 1;
      else if (swaps_here && j == k + 1) q = k;
      t.premise[0].pos.push_back(q);
    }
    return t;
  }
  Layout l = layout(p->label);
  std::size_t principal = m.lin ? l.pd : l.pp;
  for (std::size_t j : m.pos) {
    if (j < principal) {
      if (!l.structural) {
        t.principal = true;
      } else if (l.kp[0] == 2) {
        t.premise[0].pos.push_back(0);
        t.premise[0].pos.push_back(1);
      }
      continue;
    }
    std::size_t rest = j - principal;
    for (std::size_t i = 0; i < p->premises.size(); ++i) {
      std::size_t k = m.lin ? l.kd[i] : l.kp[i];
      std::size_t len = zone(p->premises[i]->conclusion, m.lin).size() - k;
      if (rest < len) {
        t.premise[i].pos.push_back(k + rest);
        break;
      }
      rest -= len;
    }
  }
  return t;
}

Context without(const Context& c, const std::vector<std::size_t>& drop) {
  Context out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (std::find(drop.begin(), drop.end(), i) == drop.end()) out.push_back(c[i]);
  }
  return out;
}

Context cat(Context a, const Context& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// The sequent a cut on the marked occurrences concludes.
Sequent cut_target(const Sequent& s1, const Marks& m, const Sequent& s2) {
  Sequent t = s1;
  if (m.lin) t.delta = without(s1.delta, m.pos);
  else t.psi = without(s1.psi, m.pos);
  t.delta = cat(t.delta, s2.delta);
  t.psi = cat(t.psi, s2.psi);
  return t;
}

// Label for a C rule rebuilt over an L premise after a cut was pushed up.
Label to_linear_label(const Label& lb) {
  Label out = lb;
  switch (lb.rule) {
    case Rule::CWkR: out.rule = Rule::LWk; break;
    case Rule::CCrR: out.rule = Rule::LCtr; break;
    case Rule::CEx: out.rule = Rule::LCEx; break;
    case Rule::CPlusR1: out.rule = Rule::LPlusR1; break;
    case Rule::CPlusR2: out.rule = Rule::LPlusR2; break;
    case Rule::CMinusR: out.rule = Rule::LCSubR; break;
    case Rule::CCut: out.rule = Rule::LCCut; break;
    case Rule::CMCut: out.rule = Rule::LCMCut; break;
    default: fail(ErrorKind::ShapeMismatch, std::string("no linear counterpart for ") + rule_label(lb.rule));
  }
  return out;
}

bool left_rule_on_subject(Rule r) {
  switch (r) {
    case Rule::CId:
    case Rule::CZeroL:
    case Rule::CPlusL:
    case Rule::CMinusL:
    case Rule::CHL:
    case Rule::LId:
    case Rule::LBotL:
    case Rule::LParL:
    case Rule::LCoImpL:
    case Rule::LJL: return true;
    default: return false;
  }
}

ProofPtr reduce(const ProofPtr& p1, const Marks& m, const ProofPtr& p2);

// p1 ends with the logical rule introducing the cut formula at position 0 of
// zone m.lin; that occurrence is the only one being cut. No arrangement of
// the result.
ProofPtr principal_cut(const ProofPtr& p1, bool lin, const ProofPtr& p2) {
  const Rule r2 = p2->label.rule;
  if (r2 == Rule::CId || r2 == Rule::LId) return p1;

  if (!left_rule_on_subject(r2)) {
    // Push the cut into the premise carrying p2's subject.
    const ProofPtr& q0 = p2->premises[0];
    ProofPtr r0 = principal_cut(p1, lin, q0);
    if (r2 == Rule::CEx || r2 == Rule::LEx || r2 == Rule::LCEx) return r0;
    Marks m{lin, {0}};
    Sequent rest = cut_target(p1->conclusion, m, Sequent{});
    Sequent want = r0->conclusion;
    want.delta = cat(q0->conclusion.delta, rest.delta);
    want.psi = cat(q0->conclusion.psi, rest.psi);
    r0 = arrange(r0, want);
    Label lb = p2->label;
    if (r0->conclusion.linear && !is_linear_rule(lb.rule)) lb = to_linear_label(lb);
    std::vector<ProofPtr> ps = p2->premises;
    ps[0] = r0;
    return make_proof(lb, std::move(ps));
  }

  const Formula f = zone(p1->conclusion, lin)[0];
  switch (f.conn()) {
    case Conn::Plus: {
      // +R_i against +L: cut the chosen disjunct against its branch.
      bool first = p1->label.rule == Rule::CPlusR1 || p1->label.rule == Rule::LPlusR1;
      return mk::cut(p1->premises[0], p2->premises[first ? 0 : 1]);
    }
    case Conn::Minus: {
      const ProofPtr& q0 = p1->premises[0];  // .. |- T1, Psi1
      const ProofPtr& q1 = p1->premises[1];  // T2 |- Psi2
      ProofPtr c1 = mk::cut(q0, p2->premises[0]);  // .. |- Psi1, T2, Psi
      c1 = to_front(c1, false, q0->conclusion.psi.size() - 1);
      return mk::cut(c1, q1);
    }
    case Conn::H:
      // HR against HL: a linear cut on the body.
      return mk::cut(p1->premises[0], p2->premises[0]);
    case Conn::J:
      // JR against JL: a mixed cut on the body.
      return mk::cut(p1->premises[0], p2->premises[0]);
    case Conn::Bot:
      return p1->premises[0];
    case Conn::Par: {
      ProofPtr c1 = mk::cut(p1->premises[0], p2->premises[0]);
      return mk::cut(c1, p2->premises[1]);
    }
    case Conn::CoImp: {
      const ProofPtr& q0 = p1->premises[0];  // A |- B1, D1; Psi1
      const ProofPtr& q1 = p1->premises[1];  // B2 |- D2; Psi2
      ProofPtr c1 = mk::cut(q0, p2->premises[0]);  // A |- D1, B2, D; Psi1, Psi
      c1 = to_front(c1, true, q0->conclusion.delta.size() - 1);
      return mk::cut(c1, q1);
    }
    default: break;
  }
  fail(ErrorKind::ShapeMismatch, "no principal reduction for " + print_formula(f) + " against " + rule_label(r2));
}

ProofPtr reduce(const ProofPtr& p1, const Marks& m, const ProofPtr& p2) {
  const Sequent target = cut_target(p1->conclusion, m, p2->conclusion);
  const Rule r1 = p1->label.rule;

  if (m.pos.empty()) return arrange(p1, target);
  if (r1 == Rule::CId || r1 == Rule::LId) return arrange(p2, target);
  if (r1 == Rule::CZeroL) return mk::zero_l(target.psi);

  Traced t = trace(p1, m);
  // Push the cut into the premises holding non-principal occurrences.
  std::vector<ProofPtr> ps = p1->premises;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (!t.premise[i].pos.empty()) ps[i] = reduce(ps[i], t.premise[i], p2);
  }
  const bool ex = r1 == Rule::CEx || r1 == Rule::LEx || r1 == Rule::LCEx;
  const Layout l = layout(p1->label);
  const bool structural_principal =
      l.structural && std::find(m.pos.begin(), m.pos.end(), 0) != m.pos.end() && !m.lin;
  if (ex || structural_principal) return arrange(ps[0], target);

  ProofPtr rebuilt = make_proof(p1->label, std::move(ps));
  if (!t.principal) return arrange(rebuilt, target);
  return arrange(principal_cut(rebuilt, m.lin, p2), target);
}

void require_rank(const ProofPtr& p, const Formula& s, const char* which) {
  if (cut_rank(p) > rank(s)) {
    fail(ErrorKind::PreconditionViolated, std::string(which) + " has cut rank " + std::to_string(cut_rank(p)) +
                                              " above rank(" + print_formula(s) + ") = " + std::to_string(rank(s)));
  }
}

ProofPtr lower_at(const ProofPtr& p, int c) {
  if (cut_rank(p) < c) return p;
  std::vector<ProofPtr> ps;
  for (auto& q : p->premises) ps.push_back(lower_at(q, c));
  const Label& lb = p->label;
  if (is_cut_rule(lb.rule) && rank(lb.f) + 1 == c) {
    const bool lin = lb.rule == Rule::LCut;
    int n = (lb.rule == Rule::CMCut || lb.rule == Rule::LCMCut) ? lb.n : 1;
    Marks m{lin, {}};
    for (int i = 0; i < n; ++i) m.pos.push_back(static_cast<std::size_t>(i));
    ProofPtr out = reduce(ps[0], m, ps[1]);
    if (cut_rank(out) > rank(lb.f)) {
      fail(ErrorKind::PreconditionViolated, "cut reduction broke its rank bound on " + print_formula(lb.f));
    }
    return out;
  }
  return std::make_shared<const Proof>(Proof{lb, p->conclusion, std::move(ps)});
}

}  // namespace

ProofPtr expand_mcut(const ProofPtr& p) {
  std::vector<ProofPtr> ps;
  for (auto& q : p->premises) ps.push_back(expand_mcut(q));
  const Rule r = p->label.rule;
  if (r != Rule::CMCut && r != Rule::LCMCut) {
    return std::make_shared<const Proof>(Proof{p->label, p->conclusion, std::move(ps)});
  }
  ProofPtr q = ps[0];
  if (p->label.n == 0) {
    for (auto it = ps[1]->conclusion.psi.rbegin(); it != ps[1]->conclusion.psi.rend(); ++it) {
      q = q->conclusion.linear ? mk::wk(q, *it) : mk::wk_r(q, *it);
    }
  }
  for (int i = 0; i < p->label.n; ++i) q = mk::cut(q, ps[1]);
  return arrange(q, p->conclusion);
}

ProofPtr reduce_cut(const ProofPtr& p1, const ProofPtr& p2, const Formula& s, CutKind kind, int n) {
  const Sequent& a = p1->conclusion;
  const Sequent& b = p2->conclusion;
  const bool lin = kind == CutKind::Linear;
  if (a.linear != (kind != CutKind::NonLinear) || b.linear != lin || b.subject != s) {
    fail(ErrorKind::ShapeMismatch, "sequents " + show_sequent(a) + " and " + show_sequent(b) +
                                       " do not fit this kind of cut on " + print_formula(s));
  }
  if (n < 0 || (lin && n != 1)) fail(ErrorKind::ShapeMismatch, "bad cut multiplicity " + std::to_string(n));
  const Context& z = zone(a, lin);
  Marks m{lin, {}};
  for (int i = 0; i < n; ++i) {
    auto k = static_cast<std::size_t>(i);
    if (k >= z.size() || z[k] != s) {
      fail(ErrorKind::ShapeMismatch, "left premise " + show_sequent(a) + " does not start with " + std::to_string(n) +
                                         " cop(ies) of " + print_formula(s));
    }
    m.pos.push_back(k);
  }
  require_rank(p1, s, "left premise");
  require_rank(p2, s, "right premise");
  return reduce(p1, m, p2);
}

ProofPtr lower_rank(const ProofPtr& p) {
  int c = cut_rank(p);
  if (c == 0) fail(ErrorKind::PreconditionViolated, "proof is already cut-free");
  return lower_at(p, c);
}

ProofPtr eliminate(const ProofPtr& p, std::vector<int>* ranks) {
  ProofPtr q = p;
  for (;;) {
    int c = cut_rank(q);
    if (ranks) ranks->push_back(c);
    if (c == 0) return q;
    q = lower_rank(q);
  }
}

}  // namespace dlnl
