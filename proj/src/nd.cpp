#include "dlnl/nd.hpp"

#include <set>
#include <algorithm>

#include "dlnl/error.hpp"

namespace dlnl {

namespace {

struct NdInfo {
  NdRule rule;
  const char* plain;
  const char* typed;
  const char* label;
  bool linear;
  int arity;  // -1: one or more
};

constexpr NdInfo kNd[] = {
    {NdRule::CId, "id", "id", "NC_Id", false, 0},
    {NdRule::CWeak, "weak", "weak", "NC_Weak", false, 1},
    {NdRule::CContr, "contr", "contr", "NC_Contr", false, 1},
    {NdRule::CZeroE, "zero-e", "z-i", "NC_ZeroE", false, -1},
    {NdRule::CPlusI1, "plus-i1", "d-i1", "NC_PlusI1", false, 1},
    {NdRule::CPlusI2, "plus-i2", "d-i2", "NC_PlusI2", false, 1},
    {NdRule::CPlusE, "plus-e", "d-e", "NC_PlusE", false, 3},
    {NdRule::CMinusI, "minus-i", "sub-i", "NC_MinusI", false, 2},
    {NdRule::CMinusE, "minus-e", "sub-e", "NC_MinusE", false, 2},
    {NdRule::CHE, "h-e", "h-e", "NC_HE", false, 2},
    {NdRule::LId, "id", "id", "NL_Id", true, 0},
    {NdRule::LWeak, "weak", "weak", "NL_Weak", true, 1},
    {NdRule::LContr, "contr", "contr", "NL_Contr", true, 1},
    {NdRule::LBotI, "bot-i", "p-i", "NL_BotI", true, 1},
    {NdRule::LBotE, "bot-e", "p-e", "NL_BotE", true, 1},
    {NdRule::LParI, "par-i", "par-i", "NL_ParI", true, 1},
    {NdRule::LParE, "par-e", "par-e", "NL_ParE", true, 3},
    {NdRule::LSubI, "sub-i", "sub-i", "NL_SubI", true, 2},
    {NdRule::LSubE, "sub-e", "sub-e", "NL_SubE", true, 2},
    {NdRule::LJI, "j-i", "j-i", "NL_JI", true, 1},
    {NdRule::LJE, "j-e", "j-e", "NL_JE", true, 2},
    {NdRule::LHI, "h-i", "h-i", "NL_HI", true, 1},
    {NdRule::LHE, "h-e", "h-e", "NL_HE", true, 2},
};

const NdInfo& info_of(NdRule r) { return kNd[static_cast<int>(r)]; }

bool slot_eq(const Slot& a, const Slot& b) {
  if (a.type != b.type) return false;
  if (!a.term || !b.term) return !a.term && !b.term;
  return alpha_eq(a.term, b.term);
}

bool same_zone(const Zone& a, const Zone& b) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (auto& s : a) {
    bool found = false;
    for (std::size_t i = 0; i < b.size() && !found; ++i) {
      if (!used[i] && slot_eq(s, b[i])) used[i] = found = true;
    }
    if (!found) return false;
  }
  return true;
}

std::string show_types(const std::vector<Formula>& fs) {
  std::string out = "[";
  for (std::size_t i = 0; i < fs.size(); ++i) out += (i ? ", " : "") + print_formula(fs[i]);
  return out + "]";
}

}  // namespace

bool is_linear_nd_rule(NdRule r) { return info_of(r).linear; }
const char* nd_rule_name(NdRule r, bool typed) { return typed ? info_of(r).typed : info_of(r).plain; }

Active nd_active(NdRule r, std::size_t i) {
  switch (r) {
    case NdRule::CContr:
    case NdRule::LContr: return {2, false};
    case NdRule::CPlusI1:
    case NdRule::CPlusI2:
    case NdRule::LJI: return {1, false};
    case NdRule::LParI: return {2, true};
    case NdRule::LBotE:
    case NdRule::LHI: return {1, true};
    case NdRule::CZeroE:
    case NdRule::CPlusE:
    case NdRule::CMinusI:
    case NdRule::CHE:
    case NdRule::LHE: return {i == 0 ? 1u : 0u, false};
    case NdRule::CMinusE: return {1, false};
    case NdRule::LParE:
    case NdRule::LSubI:
    case NdRule::LJE: return {i == 0 ? 1u : 0u, true};
    case NdRule::LSubE: return {1, true};
    default: return {0, false};
  }
}

std::vector<Formula> shape(const Zone& z) {
  std::vector<Formula> out;
  for (auto& s : z)
    if (!s.is_p()) out.push_back(s.type);
  return out;
}

Judgment untyped(const Sequent& s) {
  Judgment j;
  j.linear = s.linear;
  j.subject = s.subject;
  for (auto& f : s.delta) j.delta.push_back({nullptr, f});
  for (auto& f : s.psi) j.psi.push_back({nullptr, f});
  return j;
}

Sequent erase(const Judgment& j) {
  Sequent s;
  s.linear = j.linear;
  s.subject = j.subject;
  s.delta = shape(j.delta);
  s.psi = shape(j.psi);
  return s;
}

bool same_judgment(const Judgment& a, const Judgment& b) {
  return a.linear == b.linear && a.var == b.var && a.subject == b.subject && same_zone(a.delta, b.delta) &&
         same_zone(a.psi, b.psi);
}

// ---------------------------------------------------------------- printing

namespace {

std::string print_zone(const Zone& z) {
  std::string out = "(ctx";
  for (auto& s : z) {
    if (s.is_p()) {
      out += " (p " + print_term(s.term) + ")";
    } else {
      out += " (: " + print_term(s.term) + " " + print_formula(s.type) + ")";
    }
  }
  return out + ")";
}

std::string show_zone(const Zone& z) {
  std::string out;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (i) out += ", ";
    if (!z[i].term) {
      out += print_formula(z[i].type);
    } else if (z[i].is_p()) {
      out += print_term(z[i].term);
    } else {
      out += print_term(z[i].term) + " : " + print_formula(z[i].type);
    }
  }
  return out;
}

Zone zone_from_sexp(const Sexp& e, Sort sort) {
  if (e.head() != "ctx") sexp_error(e, "expected (ctx ...)");
  Zone z;
  for (std::size_t i = 1; i < e.items.size(); ++i) {
    const Sexp& it = e.items[i];
    if (it.head() == ":" && it.items.size() == 3) {
      z.push_back({term_from_sexp(it.items[1]), formula_from_sexp(it.items[2], sort)});
    } else if (it.head() == "p" && it.items.size() == 2) {
      Term t = term_from_sexp(it.items[1]);
      if (!is_p_term(t)) sexp_error(it, "a (p ...) slot must hold a postp or postp-bot term");
      z.push_back({t, Formula()});
    } else {
      sexp_error(it, "expected (: term type) or (p term)");
    }
  }
  return z;
}

}  // namespace

std::string print_judgment(const Judgment& j) {
  if (!j.typed()) return print_sequent(erase(j));
  if (!j.linear) return "(judgC " + j.var + " " + print_formula(j.subject) + " " + print_zone(j.psi) + ")";
  return "(judgL " + j.var + " " + print_formula(j.subject) + " " + print_zone(j.delta) + " " + print_zone(j.psi) + ")";
}

std::string show_judgment(const Judgment& j) {
  std::string out = j.typed() ? j.var + " : " + print_formula(j.subject) : print_formula(j.subject);
  if (!j.linear) return out + " |-_C " + show_zone(j.psi);
  return out + " |-_L " + show_zone(j.delta) + "; " + show_zone(j.psi);
}

Judgment judgment_from_sexp(const Sexp& e) {
  std::string_view h = e.head();
  if (h == "seqC" || h == "seqL") return untyped(sequent_from_sexp(e));
  Judgment j;
  if (h == "judgC") {
    if (e.items.size() != 4) sexp_error(e, "judgC expects a variable, a subject and one (ctx ...)");
    j.psi = zone_from_sexp(e.items[3], Sort::NonLinear);
  } else if (h == "judgL") {
    if (e.items.size() != 5) sexp_error(e, "judgL expects a variable, a subject and two (ctx ...)");
    j.linear = true;
    j.delta = zone_from_sexp(e.items[3], Sort::Linear);
    j.psi = zone_from_sexp(e.items[4], Sort::NonLinear);
  } else {
    sexp_error(e, "expected (judgC ...), (judgL ...), (seqC ...) or (seqL ...)");
  }
  Term v = term_from_sexp(e.items[1]);
  if (v->kind != TK::Var) sexp_error(e.items[1], "expected the subject variable");
  j.var = v->x;
  j.subject = formula_from_sexp(e.items[2], j.linear ? Sort::Linear : Sort::NonLinear);
  return j;
}

Judgment parse_judgment(std::string_view src) { return judgment_from_sexp(read_one_sexp(src)); }

// ---------------------------------------------------------------- rules

namespace {

// Psi1 . Psi2 slot by slot; p-slots are not merged but kept side by side.
Zone merge_zones(const Zone& a, const Zone& b, bool typed, const char* who) {
  auto sa = shape(a), sb = shape(b);
  if (sa != sb) {
    throw Error(ErrorKind::ShapeMismatch, std::string(who) + ": merged contexts need equal shapes, got " +
                                              show_types(sa) + " and " + show_types(sb));
  }
  Zone out;
  std::size_t j = 0;
  for (auto& s : a) {
    if (s.is_p()) continue;
    while (b[j].is_p()) ++j;
    out.push_back({typed ? tm::dot(s.term, b[j].term) : nullptr, s.type});
    ++j;
  }
  for (auto& s : a)
    if (s.is_p()) out.push_back(s);
  for (auto& s : b)
    if (s.is_p()) out.push_back(s);
  return out;
}


struct Split {
  std::vector<Slot> act;
  Zone rest;
};

struct Infer {
  const NdLabel& lb;
  const NdInfo& info;
  const std::vector<const Judgment*>& ps;
  Fresh& fresh;
  bool typed = false;

  Error bad(const std::string& m) const { return Error(ErrorKind::RuleMismatch, std::string(info.label) + ": " + m); }

  Split split(std::size_t i, bool delta, std::size_t n) const {
    const Zone& z = ps[i]->zone(delta);
    const char* zn = delta ? "linear" : "nonlinear";
    if (z.size() < n) {
      throw bad("premise " + std::to_string(i) + " needs " + std::to_string(n) + " active formula(s) in its " + zn +
                " succedent");
    }
    Split s;
    for (std::size_t k = 0; k < z.size(); ++k) {
      if (k < n) {
        if (z[k].is_p()) throw bad("premise " + std::to_string(i) + ": the active slot holds a p-term");
        s.act.push_back(z[k]);
      } else {
        s.rest.push_back(z[k]);
      }
    }
    return s;
  }

  Slot slot(Term t, Formula f) const { return {typed ? std::move(t) : nullptr, std::move(f)}; }

  void expect(const Formula& got, const Formula& want, const std::string& what) const {
    if (got != want) throw bad(what + " is " + print_formula(got) + ", expected " + print_formula(want));
  }

  Zone subst_zone(const Term& payload, const std::string& x, const Zone& z) const {
    if (!typed) return z;
    Zone out;
    for (auto& s : z) {
      if (s.is_p()) {
        for (auto& t : subst_parallel(payload, x, s.term, fresh)) out.push_back({t, Formula()});
      } else {
        out.push_back({subst(payload, x, s.term, fresh), s.type});
      }
    }
    return out;
  }

  Zone wrap(const Zone& z, const std::function<Term(const Term&)>& f, const char* what) const {
    Zone out;
    for (auto& s : z) {
      if (s.is_p()) throw bad(std::string("a p-term cannot be placed under ") + what);
      // the wrapper lifts over the multiset, so an empty slot stays empty
      out.push_back({typed ? (s.term->kind == TK::Eps ? s.term : f(s.term)) : nullptr, s.type});
    }
    return out;
  }

  Zone merge(const Zone& a, const Zone& b) const { return merge_zones(a, b, typed, info.label); }

  static Zone cat(Zone a, const Zone& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  }

  void want_kind(std::size_t i, bool linear) const {
    if (ps[i]->linear != linear) {
      throw bad("premise " + std::to_string(i) + " must be " + (linear ? "a linear" : "a nonlinear") + " judgment");
    }
  }

  Judgment run() {
    const std::size_t n = ps.size();
    if (info.arity >= 0 ? n != static_cast<std::size_t>(info.arity) : n < 1) {
      throw Error(ErrorKind::Arity, std::string(info.label) + ": expects " +
                                        (info.arity >= 0 ? std::to_string(info.arity) : std::string("at least 1")) +
                                        " premise(s), got " + std::to_string(n));
    }
    typed = n == 0 ? (lb.e && lb.e->kind == TK::Var) : ps[0]->typed();
    for (auto* p : ps) {
      if (p->typed() != typed) throw bad("mixes premises with and without terms");
    }
    for (std::size_t i = 0; i < n; ++i) {
      bool lin = info.linear;
      if (i == 1 && lb.rule == NdRule::CHE) lin = true;
      if (i == 1 && lb.rule == NdRule::LJE) lin = false;
      want_kind(i, lin);
    }
    Judgment out;
    out.linear = info.linear;
    if (n > 0) {
      out.var = ps[0]->var;
      out.subject = ps[0]->subject;
    }
    const Judgment* P = n > 0 ? ps[0] : nullptr;
    auto minor_var = [&](std::size_t i) { return ps[i]->var; };

    switch (lb.rule) {
      case NdRule::CId:
      case NdRule::LId: {
        if (!lb.f.valid()) throw bad("missing formula");
        if ((lb.f.sort() == Sort::Linear) != info.linear) throw bad("formula has the wrong sort");
        out.subject = lb.f;
        if (typed) out.var = lb.e->x;
        out.zone(info.linear).push_back(slot(typed ? tm::var(out.var) : nullptr, lb.f));
        return out;
      }
      case NdRule::CWeak:
      case NdRule::LWeak:
        if (!lb.f.valid() || lb.f.sort() != Sort::NonLinear) throw bad("needs a nonlinear weakened formula");
        out.delta = P->delta;
        out.psi = P->psi;
        out.psi.push_back(slot(tm::eps(), lb.f));
        return out;
      case NdRule::CContr:
      case NdRule::LContr: {
        Split s = split(0, false, 2);
        expect(s.act[1].type, s.act[0].type, "the second contracted formula");
        out.delta = P->delta;
        out.psi.push_back(slot(typed ? tm::dot(s.act[0].term, s.act[1].term) : nullptr, s.act[0].type));
        out.psi = cat(out.psi, s.rest);
        return out;
      }
      case NdRule::CZeroE: {
        Split s = split(0, false, 1);
        expect(s.act[0].type, Formula::zero(), "the major formula");
        out.psi = s.rest;
        for (std::size_t i = 1; i < n; ++i) {
          out.psi = cat(out.psi, subst_zone(typed ? tm::false_(s.act[0].term) : nullptr, minor_var(i), ps[i]->psi));
        }
        return out;
      }
      case NdRule::CPlusI1:
      case NdRule::CPlusI2: {
        Split s = split(0, false, 1);
        if (!lb.f.valid() || lb.f.sort() != Sort::NonLinear) throw bad("needs the other disjunct");
        bool left = lb.rule == NdRule::CPlusI1;
        Formula f = left ? Formula::plus(s.act[0].type, lb.f) : Formula::plus(lb.f, s.act[0].type);
        out.psi.push_back(slot(typed ? (left ? tm::inl(s.act[0].term) : tm::inr(s.act[0].term)) : nullptr, f));
        out.psi = cat(out.psi, s.rest);
        return out;
      }
      case NdRule::CPlusE: {
        Split s = split(0, false, 1);
        const Formula& f = s.act[0].type;
        if (f.conn() != Conn::Plus) throw bad("the major formula must be a sum, got " + print_formula(f));
        expect(ps[1]->subject, f.left(), "the first minor premise's subject");
        expect(ps[2]->subject, f.right(), "the second minor premise's subject");
        if (shape(ps[1]->psi) != shape(ps[2]->psi) || ps[1]->psi.size() != ps[2]->psi.size()) {
          throw Error(ErrorKind::AdditiveContext, std::string(info.label) +
                                                      ": both minor premises must have the same right context, got " +
                                                      show_types(shape(ps[1]->psi)) + " and " +
                                                      show_types(shape(ps[2]->psi)));
        }
        out.psi = s.rest;
        const Zone& a = ps[1]->psi;
        const Zone& b = ps[2]->psi;
        for (std::size_t i = 0; i < a.size(); ++i) {
          if (a[i].is_p() || b[i].is_p()) throw bad("a p-term cannot be placed under case");
          out.psi.push_back(
              slot(typed ? tm::case_(s.act[0].term, minor_var(1), a[i].term, minor_var(2), b[i].term) : nullptr,
                   a[i].type));
        }
        return out;
      }
      case NdRule::CMinusI: {
        Split s = split(0, false, 1);
        const std::string y = minor_var(1);
        out.psi = s.rest;
        out.psi.push_back(slot(typed ? tm::mkc(s.act[0].term, y) : nullptr, Formula::minus(s.act[0].type, ps[1]->subject)));
        out.psi = cat(out.psi, subst_zone(typed ? tm::app(y, s.act[0].term) : nullptr, y, ps[1]->psi));
        return out;
      }
      case NdRule::CMinusE: {
        Split s = split(0, false, 1);
        const Formula& f = s.act[0].type;
        if (f.conn() != Conn::Minus) throw bad("the major formula must be a difference, got " + print_formula(f));
        expect(ps[1]->subject, f.left(), "the minor premise's subject");
        Split m = split(1, false, 1);
        expect(m.act[0].type, f.right(), "the minor premise's active formula");
        const std::string y = minor_var(1);
        if (typed) out.psi.push_back({tm::postp(y, m.act[0].term, s.act[0].term), Formula()});
        out.psi = cat(out.psi, s.rest);
        out.psi = cat(out.psi, subst_zone(typed ? tm::app(y, s.act[0].term) : nullptr, y, m.rest));
        return out;
      }
      case NdRule::CHE: {
        Split s = split(0, false, 1);
        const Formula& f = s.act[0].type;
        if (f.conn() != Conn::H) throw bad("the major formula must be H A, got " + print_formula(f));
        expect(ps[1]->subject, f.body(), "the minor premise's subject");
        if (!ps[1]->delta.empty()) throw bad("the minor premise must have an empty linear succedent");
        const std::string y = minor_var(1);
        Term t = s.act[0].term;
        out.psi = cat(s.rest, wrap(ps[1]->psi, [&](const Term& u) { return tm::let_h(y, t, u); }, "let"));
        return out;
      }
      case NdRule::LBotI: {
        Term e;
        if (typed) {
          if (!lb.e) throw bad("needs the connected term");
          for (auto& v : free_vars(lb.e)) {
            if (v != P->var) throw bad("the connected term may only mention the subject variable, found '" + v + "'");
          }
          e = tm::connect_bot(lb.e);
        }
        out.delta.push_back(slot(e, Formula::bot()));
        out.delta = cat(out.delta, P->delta);
        out.psi = P->psi;
        return out;
      }
      case NdRule::LBotE: {
        Split s = split(0, true, 1);
        expect(s.act[0].type, Formula::bot(), "the major formula");
        if (typed) out.delta.push_back({tm::postp_bot(s.act[0].term), Formula()});
        out.delta = cat(out.delta, s.rest);
        out.psi = P->psi;
        return out;
      }
      case NdRule::LParI: {
        Split s = split(0, true, 2);
        out.delta.push_back(slot(typed ? tm::par(s.act[0].term, s.act[1].term) : nullptr,
                                 Formula::par(s.act[0].type, s.act[1].type)));
        out.delta = cat(out.delta, s.rest);
        out.psi = P->psi;
        return out;
      }
      case NdRule::LParE: {
        Split s = split(0, true, 1);
        const Formula& f = s.act[0].type;
        if (f.conn() != Conn::Par) throw bad("the major formula must be a par, got " + print_formula(f));
        expect(ps[1]->subject, f.left(), "the first minor premise's subject");
        expect(ps[2]->subject, f.right(), "the second minor premise's subject");
        Term l = typed ? tm::casel(s.act[0].term) : nullptr, r = typed ? tm::caser(s.act[0].term) : nullptr;
        const std::string y = minor_var(1), z = minor_var(2);
        out.delta = cat(cat(s.rest, subst_zone(l, y, ps[1]->delta)), subst_zone(r, z, ps[2]->delta));
        out.psi = cat(cat(P->psi, subst_zone(l, y, ps[1]->psi)), subst_zone(r, z, ps[2]->psi));
        return out;
      }
      case NdRule::LSubI: {
        Split s = split(0, true, 1);
        const std::string y = minor_var(1);
        Term a = typed ? tm::app(y, s.act[0].term) : nullptr;
        out.delta.push_back(slot(typed ? tm::mkc(s.act[0].term, y) : nullptr, Formula::coimp(s.act[0].type, ps[1]->subject)));
        out.delta = cat(cat(out.delta, s.rest), subst_zone(a, y, ps[1]->delta));
        out.psi = merge(P->psi, subst_zone(a, y, ps[1]->psi));
        return out;
      }
      case NdRule::LSubE: {
        Split s = split(0, true, 1);
        const Formula& f = s.act[0].type;
        if (f.conn() != Conn::CoImp) throw bad("the major formula must be a subtraction, got " + print_formula(f));
        expect(ps[1]->subject, f.left(), "the minor premise's subject");
        Split m = split(1, true, 1);
        expect(m.act[0].type, f.right(), "the minor premise's active formula");
        const std::string y = minor_var(1);
        Term a = typed ? tm::app(y, s.act[0].term) : nullptr;
        if (typed) out.delta.push_back({tm::postp(y, m.act[0].term, s.act[0].term), Formula()});
        out.delta = cat(cat(out.delta, s.rest), subst_zone(a, y, m.rest));
        out.psi = merge(P->psi, subst_zone(a, y, ps[1]->psi));
        return out;
      }
      case NdRule::LJI: {
        Split s = split(0, false, 1);
        out.delta.push_back(slot(typed ? tm::j(s.act[0].term) : nullptr, Formula::j(s.act[0].type)));
        out.delta = cat(out.delta, P->delta);
        out.psi = s.rest;
        return out;
      }
      case NdRule::LJE: {
        Split s = split(0, true, 1);
        const Formula& f = s.act[0].type;
        if (f.conn() != Conn::J) throw bad("the major formula must be J T, got " + print_formula(f));
        expect(ps[1]->subject, f.body(), "the minor premise's subject");
        const std::string y = minor_var(1);
        Term e = s.act[0].term;
        out.delta = s.rest;
        out.psi = merge(P->psi, wrap(ps[1]->psi, [&](const Term& u) { return tm::let_j(y, e, u); }, "let"));
        return out;
      }
      case NdRule::LHI: {
        Split s = split(0, true, 1);
        out.delta = s.rest;
        out.psi.push_back(slot(typed ? tm::h(s.act[0].term) : nullptr, Formula::h(s.act[0].type)));
        out.psi = cat(out.psi, P->psi);
        return out;
      }
      case NdRule::LHE: {
        Split s = split(0, false, 1);
        const Formula& f = s.act[0].type;
        if (f.conn() != Conn::H) throw bad("the major formula must be H B, got " + print_formula(f));
        expect(ps[1]->subject, f.body(), "the minor premise's subject");
        if (!ps[1]->delta.empty()) throw bad("the minor premise must have an empty linear succedent");
        const std::string y = minor_var(1);
        Term t = s.act[0].term;
        out.delta = P->delta;
        out.psi = merge(s.rest, wrap(ps[1]->psi, [&](const Term& u) { return tm::let_h(y, t, u); }, "let"));
        return out;
      }
    }
    throw bad("unknown rule");
  }
};

}  // namespace

Judgment nd_infer(const NdLabel& label, const std::vector<const Judgment*>& premises, Fresh& fresh) {
  Infer in{label, info_of(label.rule), premises, fresh};
  return in.run();
}

NdPtr nd_make(const NdLabel& label, std::vector<NdPtr> premises, Fresh& fresh) {
  std::vector<const Judgment*> ps;
  for (auto& p : premises) ps.push_back(&p->conclusion);
  Judgment c = nd_infer(label, ps, fresh);
  return std::make_shared<const NdProof>(NdProof{label, std::move(c), std::move(premises)});
}

NdPtr nd_relayout(const NdPtr& p, Judgment conclusion) {
  return std::make_shared<const NdProof>(NdProof{p->label, std::move(conclusion), p->premises});
}

namespace {

Zone conform_zone(const Zone& have, const Zone& target) {
  std::vector<bool> used(have.size(), false);
  Zone out;
  auto names = [](const Term& t) {
    std::set<std::string> n;
    if (t) all_names(t, n);
    return n;
  };
  // Without an alpha-equal slot, prefer the one sharing the most names, so a
  // rewritten slot keeps its place among others of the same type.
  auto pick = [&](const Slot& t, bool by_term) {
    int best = -1;
    std::size_t best_score = 0;
    const auto tn = by_term ? std::set<std::string>{} : names(t.term);
    for (std::size_t i = 0; i < have.size(); ++i) {
      if (used[i]) continue;
      if (t.is_p() != have[i].is_p()) continue;
      if (!t.is_p() && t.type != have[i].type) continue;
      if (by_term) {
        if (!(t.term && have[i].term && alpha_eq(t.term, have[i].term))) continue;
        best = static_cast<int>(i);
        break;
      }
      std::size_t score = 0;
      for (auto& n : names(have[i].term)) score += tn.count(n);
      if (best < 0 || score > best_score) best = static_cast<int>(i), best_score = score;
    }
    if (best >= 0) used[static_cast<std::size_t>(best)] = true;
    return best;
  };
  std::vector<int> chosen(target.size(), -1);
  for (std::size_t k = 0; k < target.size(); ++k) chosen[k] = pick(target[k], true);
  for (std::size_t k = 0; k < target.size(); ++k)
    if (chosen[k] < 0) chosen[k] = pick(target[k], false);
  for (int c : chosen)
    if (c >= 0) out.push_back(have[static_cast<std::size_t>(c)]);
  for (std::size_t i = 0; i < have.size(); ++i)
    if (!used[i]) out.push_back(have[i]);
  return out;
}

}  // namespace

NdPtr conform(const NdPtr& p, const Judgment& target) {
  Judgment c = p->conclusion;
  c.delta = conform_zone(c.delta, target.delta);
  c.psi = conform_zone(c.psi, target.psi);
  return nd_relayout(p, std::move(c));
}

NdPtr nd_to_front(const NdPtr& p, bool delta, std::size_t index) {
  Judgment c = p->conclusion;
  Zone& z = c.zone(delta);
  if (index >= z.size()) fail(ErrorKind::ShapeMismatch, "slot index out of range");
  std::rotate(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(index), z.begin() + static_cast<std::ptrdiff_t>(index) + 1);
  return nd_relayout(p, std::move(c));
}

// ---------------------------------------------------------------- checking

namespace {

void check_terms(const Judgment& j) {
  std::set<std::string> binders, apps;
  for (const Zone* z : {&j.delta, &j.psi}) {
    for (auto& s : *z) {
      if (!s.term) fail(ErrorKind::RuleMismatch, "a slot of a typed judgment has no term");
      if (s.is_p() != is_p_term(s.term)) {
        fail(ErrorKind::RuleMismatch, s.is_p() ? "a (p ...) slot must hold a p-term" : "a typed slot holds a p-term");
      }
      if (!is_p_normal(s.term)) fail(ErrorKind::RuleMismatch, "term is not p-normal: " + print_term(s.term));
      binder_names(s.term, binders, apps);
    }
  }
  for (auto& a : apps) {
    if (!binders.count(a)) fail(ErrorKind::Binder, "occurrence " + a + "(...) has no mkc/postp binder");
  }
}

Judgment check_rec(const NdPtr& p, const Signature* sig, Fresh& fresh) {
  std::vector<const Judgment*> ps;
  for (std::size_t i = 0; i < p->premises.size(); ++i) {
    try {
      check_rec(p->premises[i], sig, fresh);
    } catch (const Error& e) {
      throw e.at_premise(i);
    }
    ps.push_back(&p->premises[i]->conclusion);
  }
  const Judgment& c = p->conclusion;
  if (sig) require_atoms(*sig, erase(c));
  if (c.typed()) check_terms(c);
  for (const Zone* z : {&c.delta, &c.psi}) {
    for (auto& s : *z) {
      if (!c.typed() && (s.term || s.is_p())) fail(ErrorKind::RuleMismatch, "an untyped judgment carries terms");
    }
  }
  Judgment inf = nd_infer(p->label, ps, fresh);
  if (!same_judgment(inf, c)) {
    fail(ErrorKind::RuleMismatch, std::string(info_of(p->label.rule).label) + ": conclusion " + show_judgment(c) +
                                      " does not follow; the rule gives " + show_judgment(inf));
  }
  return c;
}

}  // namespace

Judgment check_derivation(const NdPtr& p, const Signature* sig) {
  Fresh fresh;
  return check_rec(p, sig, fresh);
}

Sequent check_nd(const NdPtr& p, const Signature& sig) {
  if (p->conclusion.typed()) fail(ErrorKind::Usage, "expected a derivation without terms");
  return erase(check_derivation(p, &sig));
}

Sequent check_nd(const NdPtr& p) {
  Signature sig;
  std::vector<const NdProof*> stack{p.get()};
  while (!stack.empty()) {
    const NdProof* q = stack.back();
    stack.pop_back();
    add_atoms(sig, erase(q->conclusion));
    for (auto& r : q->premises) stack.push_back(r.get());
  }
  return check_nd(p, sig);
}

Judgment check_typing(const NdPtr& p, const Signature& sig) {
  if (!p->conclusion.typed()) fail(ErrorKind::Usage, "expected a derivation with terms");
  return check_derivation(p, &sig);
}

Judgment check_typing(const NdPtr& p) {
  if (!p->conclusion.typed()) fail(ErrorKind::Usage, "expected a derivation with terms");
  return check_derivation(p, nullptr);
}

NdPtr erase(const NdPtr& p) {
  std::vector<NdPtr> prems;
  for (auto& q : p->premises) prems.push_back(erase(q));
  NdLabel lb = p->label;
  lb.e = nullptr;
  return std::make_shared<const NdProof>(NdProof{lb, untyped(erase(p->conclusion)), std::move(prems)});
}

std::size_t nd_size(const NdPtr& p) {
  std::size_t n = 1;
  for (auto& q : p->premises) n += nd_size(q);
  return n;
}

int nd_depth(const NdPtr& p) {
  int d = 0;
  for (auto& q : p->premises) d = std::max(d, nd_depth(q));
  return d + 1;
}

// ---------------------------------------------------------------- files

namespace {

std::string label_text(const NdLabel& lb, bool typed) {
  std::string n = nd_rule_name(lb.rule, typed);
  switch (lb.rule) {
    case NdRule::CWeak:
    case NdRule::LWeak:
    case NdRule::CPlusI1:
    case NdRule::CPlusI2: return "(" + n + " " + print_formula(lb.f) + ")";
    case NdRule::LBotI: return typed && lb.e ? "(" + n + " " + print_term(lb.e) + ")" : n;
    default: return n;
  }
}

void print_rec(const NdPtr& p, bool pretty, int indent, std::string& out) {
  const bool typed = p->conclusion.typed();
  out += "(ndproof " + label_text(p->label, typed) + " " + print_judgment(p->conclusion);
  for (auto& q : p->premises) {
    out += pretty ? "\n" + std::string(static_cast<std::size_t>(indent + 2), ' ') : " ";
    print_rec(q, pretty, indent + 2, out);
  }
  out += ")";
}

// Fill a parameter the file left implicit by trying the candidates the conclusion suggests.
template <class T>
void infer_param(NdLabel& lb, T NdLabel::*field, const std::vector<T>& candidates, const std::vector<NdPtr>& prems,
                 const Judgment& concl) {
  std::vector<const Judgment*> ps;
  for (auto& p : prems) ps.push_back(&p->conclusion);
  for (auto& c : candidates) {
    NdLabel trial = lb;
    trial.*field = c;
    try {
      Fresh fresh;
      if (same_judgment(nd_infer(trial, ps, fresh), concl)) {
        lb = trial;
        return;
      }
    } catch (const Error&) {
    }
  }
  if (!candidates.empty()) lb.*field = candidates.front();
}

}  // namespace

std::string print_nd(const NdPtr& p, bool pretty) {
  std::string out;
  print_rec(p, pretty, 0, out);
  return out;
}

NdPtr nd_from_sexp(const Sexp& e) {
  if (e.head() != "ndproof" || e.items.size() < 3) sexp_error(e, "expected (ndproof <rule> <judgment> <premise>*)");
  Judgment concl = judgment_from_sexp(e.items[2]);
  const Sexp& rs = e.items[1];
  std::string name = rs.is_list ? std::string(rs.head()) : rs.atom;
  const NdInfo* ri = nullptr;
  for (auto& i : kNd) {
    if (i.linear == concl.linear && (name == i.plain || name == i.typed)) ri = &i;
  }
  if (!ri) sexp_error(rs, "unknown " + std::string(concl.linear ? "L" : "C") + "-rule '" + name + "'");
  std::vector<NdPtr> prems;
  for (std::size_t i = 3; i < e.items.size(); ++i) prems.push_back(nd_from_sexp(e.items[i]));

  NdLabel lb = NdLabel::of(ri->rule);
  const std::size_t nargs = rs.is_list ? rs.items.size() - 1 : 0;
  const bool takes_formula = ri->rule == NdRule::CWeak || ri->rule == NdRule::LWeak || ri->rule == NdRule::CPlusI1 ||
                             ri->rule == NdRule::CPlusI2;
  const bool takes_term = ri->rule == NdRule::LBotI;
  if (nargs > ((takes_formula || takes_term) ? 1u : 0u)) sexp_error(rs, "too many arguments for rule '" + name + "'");
  if (nargs == 1 && takes_formula) lb.f = formula_from_sexp(rs.items[1], Sort::NonLinear);
  if (nargs == 1 && takes_term) lb.e = term_from_sexp(rs.items[1]);

  switch (ri->rule) {
    case NdRule::CId:
    case NdRule::LId:
      lb.f = concl.subject;
      if (concl.typed()) lb.e = tm::var(concl.var);
      break;
    case NdRule::CWeak:
    case NdRule::LWeak:
      if (nargs == 0) {
        std::vector<Formula> cands;
        for (auto& s : concl.psi)
          if (!s.is_p() && std::find(cands.begin(), cands.end(), s.type) == cands.end()) cands.push_back(s.type);
        infer_param(lb, &NdLabel::f, cands, prems, concl);
      }
      break;
    case NdRule::CPlusI1:
    case NdRule::CPlusI2:
      if (nargs == 0) {
        std::vector<Formula> cands;
        for (auto& s : concl.psi) {
          if (s.is_p() || s.type.conn() != Conn::Plus) continue;
          cands.push_back(ri->rule == NdRule::CPlusI1 ? s.type.right() : s.type.left());
        }
        infer_param(lb, &NdLabel::f, cands, prems, concl);
      }
      break;
    case NdRule::LBotI:
      if (nargs == 0 && concl.typed()) {
        std::vector<Term> cands;
        for (auto& s : concl.delta)
          if (s.term && s.term->kind == TK::ConnectBot) cands.push_back(s.term->a);
        infer_param(lb, &NdLabel::e, cands, prems, concl);
      }
      break;
    default: break;
  }
  return std::make_shared<const NdProof>(NdProof{lb, std::move(concl), std::move(prems)});
}

NdPtr parse_nd(std::string_view src) { return nd_from_sexp(read_one_sexp(src)); }

// ---------------------------------------------------------------- builders

namespace nd {

NdPtr id(const std::string& var, const Formula& f) {
  NdRule r = f.sort() == Sort::Linear ? NdRule::LId : NdRule::CId;
  Fresh unused;
  return nd_make(NdLabel::of(r, f, var.empty() ? nullptr : tm::var(var)), {}, unused);
}

NdPtr weak(const NdPtr& p, const Formula& t, Fresh& fresh) {
  return nd_make(NdLabel::of(p->conclusion.linear ? NdRule::LWeak : NdRule::CWeak, t), {p}, fresh);
}

NdPtr weak_all(NdPtr p, const std::vector<Formula>& ts, Fresh& fresh) {
  for (auto& t : ts) p = weak(p, t, fresh);
  return p;
}

NdPtr contr(const NdPtr& p, Fresh& fresh) {
  return nd_make(NdLabel::of(p->conclusion.linear ? NdRule::LContr : NdRule::CContr), {p}, fresh);
}

NdPtr rule(NdRule r, std::vector<NdPtr> premises, Fresh& fresh, Formula f, Term e) {
  return nd_make(NdLabel::of(r, f, e), std::move(premises), fresh);
}

}  // namespace nd

// ---------------------------------------------------------------- admissible rules

namespace {

bool is_merge_rule(NdRule r) {
  return r == NdRule::LSubI || r == NdRule::LSubE || r == NdRule::LJE || r == NdRule::LHE;
}

// p2 rebuilt with p1 in place of the Id leaf that introduces p2's subject.
// The result lists p2's slots in p2's order, then p1's remaining slots.
NdPtr graft(const NdPtr& p1, const NdPtr& p2, Fresh& fresh) {
  if (p2->premises.empty()) return p1;
  std::vector<NdPtr> prems = p2->premises;
  const Judgment old0 = prems[0]->conclusion;
  NdPtr g = graft(p1, prems[0], fresh);
  Zone extra_delta(g->conclusion.delta.begin() + static_cast<std::ptrdiff_t>(old0.delta.size()), g->conclusion.delta.end());
  Zone extra_psi(g->conclusion.psi.begin() + static_cast<std::ptrdiff_t>(old0.psi.size()), g->conclusion.psi.end());
  prems[0] = g;
  NdLabel lb = p2->label;
  if (lb.rule == NdRule::LBotI && lb.e) {
    // the connected term mentions the leaf variable, now replaced by the cut term
    const Judgment& a = p1->conclusion;
    const Zone& z = p2->conclusion.linear ? a.delta : a.psi;
    lb.e = subst(z[0].term, old0.var, lb.e, fresh);
  }
  if (is_merge_rule(p2->label.rule)) {
    // Keep the merged contexts the same shape: pad the minor with the new context.
    prems[1] = nd::weak_all(prems[1], shape(extra_psi), fresh);
  }
  NdPtr n = nd_make(lb, std::move(prems), fresh);
  Judgment target = p2->conclusion;
  {
    // the slots p2 listed, with the cut term in place of the spine variable
    const Judgment& a = p1->conclusion;
    const Zone& z = p2->conclusion.linear ? a.delta : a.psi;
    if (!z.empty() && z[0].term && !old0.var.empty()) {
      for (bool d : {true, false})
        for (auto& s : target.zone(d))
          if (s.term) s.term = subst(z[0].term, old0.var, s.term, fresh);
    }
  }
  target.delta.insert(target.delta.end(), extra_delta.begin(), extra_delta.end());
  target.psi.insert(target.psi.end(), extra_psi.begin(), extra_psi.end());
  return conform(n, target);
}

NdPtr permute_psi(const NdPtr& p, const std::vector<std::size_t>& order) {
  Judgment c = p->conclusion;
  Zone z;
  for (auto i : order) z.push_back(c.psi[i]);
  c.psi = z;
  return nd_relayout(p, std::move(c));
}

// Move the last k slots of the nonlinear zone to the front.
NdPtr rotate_back(const NdPtr& p, std::size_t k) {
  std::size_t n = p->conclusion.psi.size();
  std::vector<std::size_t> order;
  for (std::size_t i = n - k; i < n; ++i) order.push_back(i);
  for (std::size_t i = 0; i < n - k; ++i) order.push_back(i);
  return permute_psi(p, order);
}

}  // namespace

NdPtr admissible_cut(const NdPtr& p1, const NdPtr& p2, CutShape kind, Fresh& fresh) {
  const Judgment& a = p1->conclusion;
  const Judgment& b = p2->conclusion;
  auto shape_err = [](const std::string& m) { fail(ErrorKind::ShapeMismatch, m); };
  if (a.typed() != b.typed()) shape_err("cut: one derivation has terms and the other does not");
  switch (kind) {
    case CutShape::CC:
      if (a.linear || b.linear) shape_err("CC cut needs two nonlinear judgments");
      if (a.psi.empty() || a.psi[0].is_p() || a.psi[0].type != b.subject) {
        shape_err("CC cut: the first slot of the left derivation must be " + print_formula(b.subject));
      }
      return graft(p1, p2, fresh);
    case CutShape::LL:
      if (!a.linear || !b.linear) shape_err("LL cut needs two linear judgments");
      if (a.delta.empty() || a.delta[0].is_p() || a.delta[0].type != b.subject) {
        shape_err("LL cut: the first linear slot of the left derivation must be " + print_formula(b.subject));
      }
      return graft(p1, p2, fresh);
    case CutShape::LC: {
      if (!a.linear || b.linear) shape_err("LC cut needs a linear and a nonlinear judgment");
      if (a.psi.empty() || a.psi[0].is_p() || a.psi[0].type != b.subject) {
        shape_err("LC cut: the first nonlinear slot of the left derivation must be " + print_formula(b.subject));
      }
      NdPtr j = nd::rule(NdRule::LJI, {p1}, fresh);
      std::vector<Formula> rest = shape(j->conclusion.psi);
      NdPtr major = nd::weak_all(j, shape(b.psi), fresh);
      NdPtr minor = rotate_back(nd::weak_all(p2, rest, fresh), rest.size());
      return nd::rule(NdRule::LJE, {major, minor}, fresh);
    }
  }
  return p1;
}

NdPtr plus_e_mult(const NdPtr& major, const NdPtr& m1, const NdPtr& m2, Fresh& fresh) {
  auto s1 = shape(m1->conclusion.psi), s2 = shape(m2->conclusion.psi);
  NdPtr a = nd::weak_all(m1, s2, fresh);
  NdPtr b = rotate_back(nd::weak_all(m2, s1, fresh), s1.size());
  return nd::rule(NdRule::CPlusE, {major, a, b}, fresh);
}

NdPtr rename_subject(const NdPtr& p, const std::string& to, Fresh& fresh) {
  NdPtr leaf = nd::id(to, p->conclusion.subject);
  return graft(leaf, p, fresh);
}

Zone ctx_merge(const Zone& a, const Zone& b) { return merge_zones(a, b, true, "merge"); }

}  // namespace dlnl
