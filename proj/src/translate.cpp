#include "dlnl/translate.hpp"

#include "dlnl/error.hpp"

namespace dlnl {

namespace {

// ---------------------------------------------------------------- ND to sequents

// Elimination with one minor premise: the left rule on the minor, cut against the major.
ProofPtr elim(const ProofPtr& major, const ProofPtr& left) { return mk::cut(major, left); }

ProofPtr to_seq(const NdPtr& p) {
  std::vector<ProofPtr> q;
  for (auto& r : p->premises) q.push_back(to_seq(r));
  const NdLabel& lb = p->label;
  ProofPtr out;
  switch (lb.rule) {
    case NdRule::CId: out = mk::c_id(lb.f); break;
    case NdRule::LId: out = mk::l_id(lb.f); break;
    case NdRule::CWeak: out = mk::wk_r(q[0], lb.f); break;
    case NdRule::LWeak: out = mk::wk(q[0], lb.f); break;
    case NdRule::CContr: out = mk::cr_r(q[0]); break;
    case NdRule::LContr: out = mk::ctr(q[0]); break;
    case NdRule::CZeroE: {
      // S |- 0, Psi against 0 |- S1..Sn, then one cut per minor premise.
      Context ss;
      for (std::size_t i = 1; i < q.size(); ++i) ss.push_back(q[i]->conclusion.subject);
      out = mk::cut(q[0], mk::zero_l(ss));
      const std::size_t at = q[0]->conclusion.psi.size() - 1;
      for (std::size_t i = 1; i < q.size(); ++i) out = mk::cut(to_front(out, false, at), q[i]);
      break;
    }
    case NdRule::CPlusI1: out = mk::plus_r1(q[0], lb.f); break;
    case NdRule::CPlusI2: out = mk::plus_r2(q[0], lb.f); break;
    case NdRule::CPlusE: out = elim(q[0], mk::plus_l(q[1], q[2])); break;
    case NdRule::CMinusI: out = mk::minus_r(q[0], q[1]); break;
    case NdRule::CMinusE: out = elim(q[0], mk::minus_l(q[1])); break;
    case NdRule::CHE: out = elim(q[0], mk::h_l(q[1])); break;
    case NdRule::LBotI: out = mk::bot_r(q[0]); break;
    case NdRule::LBotE: out = elim(q[0], mk::bot_l()); break;
    case NdRule::LParI: out = mk::par_r(q[0]); break;
    case NdRule::LParE: out = elim(q[0], mk::par_l(q[1], q[2])); break;
    case NdRule::LSubI: out = mk::coimp_r(q[0], q[1]); break;
    case NdRule::LSubE: out = elim(q[0], mk::coimp_l(q[1])); break;
    case NdRule::LJI: out = mk::j_r(q[0]); break;
    case NdRule::LJE: out = elim(q[0], mk::j_l(q[1])); break;
    case NdRule::LHI: out = mk::h_r(q[0]); break;
    case NdRule::LHE: out = mk::c_cut(q[0], mk::h_l(q[1])); break;
  }
  // Merged and additive contexts come out duplicated; contract them back.
  return arrange(out, erase(p->conclusion));
}

// ---------------------------------------------------------------- sequents to ND

NdPtr id_of(const Formula& f) { return nd::id("", f); }

NdPtr contract_front(NdPtr d, int n, Fresh& fresh) {
  for (int i = 1; i < n; ++i) d = nd::contr(d, fresh);
  return d;
}

// d with its nonlinear zone listed as `first` followed by the rest.
NdPtr psi_order(const NdPtr& d, const Context& first) {
  Judgment t = d->conclusion;
  t.psi.clear();
  for (auto& f : first) t.psi.push_back({nullptr, f});
  return conform(d, t);
}

NdPtr to_nd(const ProofPtr& p, Fresh& fresh) {
  std::vector<NdPtr> q;
  for (auto& r : p->premises) q.push_back(to_nd(r, fresh));
  const Label& lb = p->label;
  const Sequent& c = p->conclusion;
  NdPtr out;
  switch (lb.rule) {
    case Rule::CId: out = id_of(lb.f); break;
    case Rule::LId: out = id_of(lb.f); break;
    case Rule::CWkR:
    case Rule::LWk: out = nd::weak(q[0], lb.f, fresh); break;
    case Rule::CCrR:
    case Rule::LCtr: out = nd::contr(q[0], fresh); break;
    case Rule::CEx:
    case Rule::LEx:
    case Rule::LCEx: out = q[0]; break;
    case Rule::CZeroL: {
      std::vector<NdPtr> ps{id_of(Formula::zero())};
      for (auto& f : lb.ctx) ps.push_back(id_of(f));
      out = nd::rule(NdRule::CZeroE, ps, fresh);
      break;
    }
    case Rule::CPlusL: out = plus_e_mult(id_of(c.subject), q[0], q[1], fresh); break;
    case Rule::CPlusR1: out = nd::rule(NdRule::CPlusI1, {q[0]}, fresh, lb.f); break;
    case Rule::CPlusR2: out = nd::rule(NdRule::CPlusI2, {q[0]}, fresh, lb.f); break;
    case Rule::CMinusL: out = nd::rule(NdRule::CMinusE, {id_of(c.subject), q[0]}, fresh); break;
    case Rule::CMinusR: out = nd::rule(NdRule::CMinusI, {q[0], q[1]}, fresh); break;
    case Rule::CCut: out = admissible_cut(q[0], q[1], CutShape::CC, fresh); break;
    case Rule::LCut: out = admissible_cut(q[0], q[1], CutShape::LL, fresh); break;
    case Rule::LCCut: out = admissible_cut(q[0], q[1], CutShape::LC, fresh); break;
    case Rule::CMCut:
    case Rule::LCMCut: {
      const CutShape k = lb.rule == Rule::CMCut ? CutShape::CC : CutShape::LC;
      if (lb.n == 0) {
        out = nd::weak_all(q[0], shape(q[1]->conclusion.psi), fresh);
      } else {
        out = admissible_cut(contract_front(q[0], lb.n, fresh), q[1], k, fresh);
      }
      break;
    }
    case Rule::CHL: out = nd::rule(NdRule::CHE, {id_of(c.subject), q[0]}, fresh); break;
    case Rule::LBotL: out = nd::rule(NdRule::LBotE, {id_of(Formula::bot())}, fresh); break;
    case Rule::LBotR: out = nd::rule(NdRule::LBotI, {q[0]}, fresh); break;
    case Rule::LParL: out = nd::rule(NdRule::LParE, {id_of(c.subject), q[0], q[1]}, fresh); break;
    case Rule::LParR: out = nd::rule(NdRule::LParI, {q[0]}, fresh); break;
    case Rule::LCoImpL: {
      // The major's empty nonlinear zone is padded to merge with the minor's.
      NdPtr major = nd::weak_all(id_of(c.subject), shape(q[0]->conclusion.psi), fresh);
      out = nd::rule(NdRule::LSubE, {major, q[0]}, fresh);
      break;
    }
    case Rule::LCoImpR: {
      auto s1 = shape(q[0]->conclusion.psi), s2 = shape(q[1]->conclusion.psi);
      Context both = s1;
      both.insert(both.end(), s2.begin(), s2.end());
      NdPtr major = nd::weak_all(q[0], s2, fresh);
      NdPtr minor = psi_order(nd::weak_all(q[1], s1, fresh), both);
      out = nd::rule(NdRule::LSubI, {major, minor}, fresh);
      break;
    }
    case Rule::LPlusR1:
    case Rule::LPlusR2: {
      const Formula& t = q[0]->conclusion.psi.front().type;
      NdPtr intro = lb.rule == Rule::LPlusR1 ? nd::rule(NdRule::CPlusI1, {id_of(t)}, fresh, lb.f)
                                             : nd::rule(NdRule::CPlusI2, {id_of(t)}, fresh, lb.f);
      out = admissible_cut(q[0], intro, CutShape::LC, fresh);
      break;
    }
    case Rule::LCSubR: {
      const Formula& t = q[0]->conclusion.psi.front().type;
      NdPtr intro = nd::rule(NdRule::CMinusI, {id_of(t), q[1]}, fresh);
      out = admissible_cut(q[0], intro, CutShape::LC, fresh);
      break;
    }
    case Rule::LJL: {
      NdPtr major = nd::weak_all(id_of(c.subject), shape(q[0]->conclusion.psi), fresh);
      out = nd::rule(NdRule::LJE, {major, q[0]}, fresh);
      break;
    }
    case Rule::LJR: out = nd::rule(NdRule::LJI, {q[0]}, fresh); break;
    case Rule::LHR: out = nd::rule(NdRule::LHI, {q[0]}, fresh); break;
  }
  return conform(out, untyped(c));
}

}  // namespace

ProofPtr nd_to_seq(const NdPtr& p) {
  NdPtr u = p->conclusion.typed() ? erase(p) : p;
  return to_seq(u);
}

NdPtr seq_to_nd(const ProofPtr& p) {
  Fresh fresh;
  return to_nd(p, fresh);
}

}  // namespace dlnl
