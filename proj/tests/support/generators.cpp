#include "support/generators.hpp"

#include <algorithm>

#include "dlnl/error.hpp"

namespace gen {

namespace {

template <class F>
auto attempt(F f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error&) {
    return nullptr;
  }
}

Context random_ctx(Rng& r, int n, const Atoms& at) {
  Context c;
  for (int i = 0; i < n; ++i) c.push_back(formula(r, Sort::NonLinear, 1, at));
  return c;
}

// ------------------------------------------------------------ sequent proofs

std::optional<std::size_t> find(const Context& c, const Formula& f) {
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] == f) return i;
  return std::nullopt;
}

ProofPtr ensure_front(const ProofPtr& p, bool linear_zone, const Formula& f) {
  const Context& z = linear_zone ? p->conclusion.delta : p->conclusion.psi;
  if (auto i = find(z, f)) return to_front(p, linear_zone, *i);
  if (linear_zone) return nullptr;
  return p->conclusion.linear ? mk::wk(p, f) : mk::wk_r(p, f);
}

ProofPtr left_rule(Rng& r, const Formula& f, int d, const Atoms& at) {
  switch (f.conn()) {
    case Conn::Zero: return mk::zero_l(random_ctx(r, r.below(3), at));
    case Conn::Plus: return mk::plus_l(proof_from(r, f.left(), d - 1, at), proof_from(r, f.right(), d - 1, at));
    case Conn::Minus: {
      ProofPtr p = ensure_front(proof_from(r, f.left(), d - 1, at), false, f.right());
      return p ? mk::minus_l(p) : nullptr;
    }
    case Conn::H: {
      ProofPtr p = proof_from(r, f.body(), d - 1, at);
      return p->conclusion.delta.empty() ? mk::h_l(p) : nullptr;
    }
    case Conn::Bot: return mk::bot_l();
    case Conn::Par: return mk::par_l(proof_from(r, f.left(), d - 1, at), proof_from(r, f.right(), d - 1, at));
    case Conn::CoImp: {
      ProofPtr p = ensure_front(proof_from(r, f.left(), d - 1, at), true, f.right());
      return p ? mk::coimp_l(p) : nullptr;
    }
    case Conn::J: return mk::j_l(proof_from(r, f.body(), d - 1, at));
    default: return nullptr;
  }
}

ProofPtr right_rule(Rng& r, const ProofPtr& p, int d, const Atoms& at) {
  const Sequent& s = p->conclusion;
  const std::size_t np = s.psi.size(), nd = s.delta.size();
  auto some_psi = [&]() { return to_front(p, false, static_cast<std::size_t>(r.below(static_cast<int>(np)))); };
  auto some_delta = [&]() { return to_front(p, true, static_cast<std::size_t>(r.below(static_cast<int>(nd)))); };
  auto dup = [&]() -> ProofPtr {
    for (std::size_t i = 0; i < np; ++i)
      for (std::size_t j = i + 1; j < np; ++j)
        if (s.psi[i] == s.psi[j]) {
          Sequent t = s;
          t.psi = {s.psi[i], s.psi[i]};
          for (std::size_t k = 0; k < np; ++k)
            if (k != i && k != j) t.psi.push_back(s.psi[k]);
          return arrange(p, t);
        }
    return nullptr;
  };
  if (!s.linear) {
    switch (r.below(5)) {
      case 0: return mk::wk_r(p, formula(r, Sort::NonLinear, 1, at));
      case 1: {
        ProofPtr q = dup();
        return q ? mk::cr_r(q) : nullptr;
      }
      case 2:
        if (!np) return nullptr;
        return r.coin() ? mk::plus_r1(some_psi(), formula(r, Sort::NonLinear, 1, at))
                        : mk::plus_r2(some_psi(), formula(r, Sort::NonLinear, 1, at));
      case 3:
        if (!np) return nullptr;
        return mk::minus_r(some_psi(), proof_from(r, formula(r, Sort::NonLinear, 1, at), d - 1, at));
      default: return np >= 2 ? mk::ex(p, r.below(static_cast<int>(np) - 1)) : nullptr;
    }
  }
  switch (r.below(10)) {
    case 0: return mk::wk(p, formula(r, Sort::NonLinear, 1, at));
    case 1: {
      ProofPtr q = dup();
      return q ? mk::ctr(q) : nullptr;
    }
    case 2: return mk::bot_r(p);
    case 3: {
      if (nd < 2) return nullptr;
      ProofPtr q = some_delta();
      return mk::par_r(to_front(q, true, 1 + static_cast<std::size_t>(r.below(static_cast<int>(nd) - 1))));
    }
    case 4:
      if (!nd) return nullptr;
      return mk::coimp_r(some_delta(), proof_from(r, formula(r, Sort::Linear, 1, at), d - 1, at));
    case 5:
      if (!np) return nullptr;
      return r.coin() ? mk::l_plus_r1(some_psi(), formula(r, Sort::NonLinear, 1, at))
                      : mk::l_plus_r2(some_psi(), formula(r, Sort::NonLinear, 1, at));
    case 6:
      if (!np) return nullptr;
      return mk::c_sub_r(some_psi(), proof_from(r, formula(r, Sort::NonLinear, 1, at), d - 1, at));
    case 7: return np ? mk::j_r(some_psi()) : nullptr;
    case 8: return nd ? mk::h_r(some_delta()) : nullptr;
    default: return nd >= 2 ? mk::ex(p, r.below(static_cast<int>(nd) - 1)) : nullptr;
  }
}

ProofPtr decorate(Rng& r, ProofPtr p, int d, const Atoms& at) {
  const int steps = d > 0 ? r.below(3) : 0;
  for (int i = 0; i < steps; ++i) {
    if (auto q = attempt([&] { return right_rule(r, p, d, at); })) p = q;
  }
  return p;
}

ProofPtr cut_with_subject(Rng& r, const Formula& f, int d, const Atoms& at) {
  ProofPtr p1 = proof_from(r, f, d, at);
  const Sequent& s = p1->conclusion;
  const std::size_t nd = s.delta.size(), np = s.psi.size();
  if (nd + np == 0) return p1;
  std::size_t k = static_cast<std::size_t>(r.below(static_cast<int>(nd + np)));
  const bool lin = k < nd;
  const std::size_t i = lin ? k : k - nd;
  const Formula x = lin ? s.delta[i] : s.psi[i];
  ProofPtr front = to_front(p1, lin, i);
  ProofPtr q = (d > 1 && r.coin(0.3)) ? cut_with_subject(r, x, d - 1, at) : proof_from(r, x, d - 1, at);
  if (!lin && r.coin(0.2)) {
    // two occurrences, one weakened in, cut at once
    Sequent t = front->conclusion;
    t.psi.insert(t.psi.begin(), x);
    return mk::mcut(arrange(front, t), q, 2);
  }
  return mk::cut(front, q);
}

// ------------------------------------------------------------ natural deduction

NdPtr permute_psi(const NdPtr& p, const std::vector<std::size_t>& order) {
  Judgment c = p->conclusion;
  c.psi.clear();
  for (auto i : order) c.psi.push_back(p->conclusion.psi[i]);
  return nd_relayout(p, c);
}

std::vector<Formula> multiset_minus(std::vector<Formula> a, const std::vector<Formula>& b) {
  for (auto& f : b) {
    auto it = std::find(a.begin(), a.end(), f);
    if (it != a.end()) a.erase(it);
  }
  return a;
}

struct NdGen {
  Rng& r;
  const Atoms& at;
  Fresh* fresh;  // null: no terms

  Fresh scratch;
  Fresh& fr() { return fresh ? *fresh : scratch; }
  NdPtr id(const Formula& f) { return nd::id(fresh ? (*fresh)("x") : "", f); }

  // The nonlinear zone typed as `x` (in order), after `keep` leading slots.
  NdPtr pad(const NdPtr& d, const std::vector<Formula>& x, std::size_t keep = 0) {
    auto have = shape(d->conclusion.psi);
    std::vector<Formula> kept(have.begin(), have.begin() + static_cast<std::ptrdiff_t>(std::min(keep, have.size())));
    NdPtr w = nd::weak_all(d, multiset_minus(x, multiset_minus(have, kept)), fr());
    Judgment t = w->conclusion;
    t.psi.clear();
    for (std::size_t i = 0; i < keep && i < d->conclusion.psi.size(); ++i) t.psi.push_back(d->conclusion.psi[i]);
    for (auto& f : x) t.psi.push_back({nullptr, f});
    return conform(w, t);
  }

  std::vector<Formula> rest_shape(const NdPtr& d, std::size_t keep) {
    auto s = shape(d->conclusion.psi);
    s.erase(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(std::min(keep, s.size())));
    return s;
  }

  // Slot of type f at the front of a zone; nonlinear slots are weakened in.
  NdPtr with_front(const NdPtr& d, bool delta, const Formula& f) {
    const Zone& z = d->conclusion.zone(delta);
    for (std::size_t i = 0; i < z.size(); ++i)
      if (!z[i].is_p() && z[i].type == f) return nd_to_front(d, delta, i);
    if (delta) return nullptr;
    NdPtr w = nd::weak(d, f, fr());
    return nd_to_front(w, false, w->conclusion.psi.size() - 1);
  }

  NdPtr with_dup(const NdPtr& d) {
    const Zone& z = d->conclusion.psi;
    for (std::size_t i = 0; i < z.size(); ++i)
      for (std::size_t j = i + 1; j < z.size(); ++j)
        if (!z[i].is_p() && !z[j].is_p() && z[i].type == z[j].type) {
          std::vector<std::size_t> order{i, j};
          for (std::size_t k = 0; k < z.size(); ++k)
            if (k != i && k != j) order.push_back(k);
          return permute_psi(d, order);
        }
    return nullptr;
  }

  // Eliminate the slot at `i` of a zone; minors are fresh derivations.
  NdPtr elim(const NdPtr& p0, bool delta, std::size_t i, int d) {
    NdPtr p = nd_to_front(p0, delta, i);
    const Formula f = p->conclusion.zone(delta)[0].type;
    switch (f.conn()) {
      case Conn::Zero: {
        std::vector<NdPtr> ps{p};
        for (int k = r.below(3); k > 0; --k) ps.push_back(from(formula(r, Sort::NonLinear, 1, at), d - 1));
        return nd::rule(NdRule::CZeroE, ps, fr());
      }
      case Conn::Plus: return plus_e_mult(p, from(f.left(), d - 1), from(f.right(), d - 1), fr());
      case Conn::Minus: {
        NdPtr m = with_front(from(f.left(), d - 1), false, f.right());
        return nd::rule(NdRule::CMinusE, {p, m}, fr());
      }
      case Conn::H: {
        NdPtr m = from(f.body(), d - 1);
        if (!m->conclusion.delta.empty()) return nullptr;
        if (!p->conclusion.linear) return nd::rule(NdRule::CHE, {p, m}, fr());
        auto x = rest_shape(p, 1);
        auto y = shape(m->conclusion.psi);
        auto all = x;
        all.insert(all.end(), y.begin(), y.end());
        return nd::rule(NdRule::LHE, {pad(p, all, 1), pad(m, all)}, fr());
      }
      case Conn::Bot: return nd::rule(NdRule::LBotE, {p}, fr());
      case Conn::Par: return nd::rule(NdRule::LParE, {p, from(f.left(), d - 1), from(f.right(), d - 1)}, fr());
      case Conn::CoImp: {
        NdPtr m = with_front(from(f.left(), d - 1), true, f.right());
        if (!m) return nullptr;
        auto all = shape(p->conclusion.psi);
        auto y = shape(m->conclusion.psi);
        all.insert(all.end(), y.begin(), y.end());
        return nd::rule(NdRule::LSubE, {pad(p, all), pad(m, all)}, fr());
      }
      case Conn::J: {
        NdPtr m = from(f.body(), d - 1);
        auto all = shape(p->conclusion.psi);
        auto y = shape(m->conclusion.psi);
        all.insert(all.end(), y.begin(), y.end());
        return nd::rule(NdRule::LJE, {pad(p, all), pad(m, all)}, fr());
      }
      default: return nullptr;
    }
  }

  NdPtr step(const NdPtr& p, int d) {
    const Judgment& c = p->conclusion;
    const std::size_t np = c.psi.size(), nd = c.delta.size();
    auto idx = [&](std::size_t n) { return static_cast<std::size_t>(r.below(static_cast<int>(n))); };
    auto typed_psi = [&]() -> std::optional<std::size_t> {
      std::vector<std::size_t> ok;
      for (std::size_t i = 0; i < np; ++i)
        if (!c.psi[i].is_p()) ok.push_back(i);
      if (ok.empty()) return std::nullopt;
      return r.pick(ok);
    };
    int choice = r.below(c.linear ? 11 : 6);
    switch (choice) {
      case 0: return nd::weak(p, formula(r, Sort::NonLinear, 1, at), fr());
      case 1: {
        NdPtr q = with_dup(p);
        return q ? nd::contr(q, fr()) : nullptr;
      }
      case 2: {
        auto i = typed_psi();
        if (!i) return nullptr;
        NdRule k = r.coin() ? NdRule::CPlusI1 : NdRule::CPlusI2;
        return nd::rule(k, {nd_to_front(p, false, *i)}, fr(), formula(r, Sort::NonLinear, 1, at));
      }
      case 3: {
        auto i = typed_psi();
        if (!i) return nullptr;
        return nd::rule(NdRule::CMinusI, {nd_to_front(p, false, *i), from(formula(r, Sort::NonLinear, 1, at), d - 1)},
                        fr());
      }
      case 4:
      case 5: {
        // eliminate some compound slot
        std::vector<std::pair<bool, std::size_t>> ok;
        for (bool z : {true, false})
          for (std::size_t i = 0; i < c.zone(z).size(); ++i) {
            const Slot& s = c.zone(z)[i];
            if (!s.is_p() && !s.type.is_atom() && s.type.conn() != Conn::Bot) ok.push_back({z, i});
            if (!s.is_p() && s.type.conn() == Conn::Bot && r.coin(0.3)) ok.push_back({z, i});
          }
        if (ok.empty()) return nullptr;
        auto [z, i] = r.pick(ok);
        return elim(p, z, i, d);
      }
      case 6: return nd::rule(NdRule::LBotI, {p}, fr(), {}, fresh ? tm::var(c.var) : nullptr);
      case 7: {
        if (nd < 2) return nullptr;
        NdPtr q = nd_to_front(p, true, idx(nd));
        return nd::rule(NdRule::LParI, {nd_to_front(q, true, 1 + idx(nd - 1))}, fr());
      }
      case 8: {
        if (!nd) return nullptr;
        NdPtr q = nd_to_front(p, true, idx(nd));
        NdPtr m = from(formula(r, Sort::Linear, 1, at), d - 1);
        auto all = shape(q->conclusion.psi);
        auto y = shape(m->conclusion.psi);
        all.insert(all.end(), y.begin(), y.end());
        return nd::rule(NdRule::LSubI, {pad(q, all), pad(m, all)}, fr());
      }
      case 9: {
        auto i = typed_psi();
        if (!i) return nullptr;
        return nd::rule(NdRule::LJI, {nd_to_front(p, false, *i)}, fr());
      }
      default: return nd ? nd::rule(NdRule::LHI, {nd_to_front(p, true, idx(nd))}, fr()) : nullptr;
    }
  }

  NdPtr decorate(NdPtr p, int d, int max_steps = 3) {
    if (d <= 0) return p;
    const int steps = r.below(max_steps);
    for (int i = 0; i < steps; ++i) {
      if (auto q = attempt([&] { return step(p, d); })) p = q;
    }
    return p;
  }

  NdPtr from(const Formula& f, int d) {
    NdPtr p = id(f);
    if (d > 0 && r.coin(0.5) && !f.is_atom()) {
      if (auto q = attempt([&] { return elim(p, f.sort() == Sort::Linear, 0, d); })) p = q;
    }
    return decorate(p, d);
  }

  // A derivation listing a slot of type f first in the given zone.
  NdPtr source(bool linear, bool delta, const Formula& f, int d) {
    if (delta) {
      NdPtr p = decorate(id(f), d);
      if (auto q = attempt([&] { return with_front(p, true, f); })) return q;
      return id(f);
    }
    NdPtr p = from(formula(r, linear ? Sort::Linear : Sort::NonLinear, 1, at), d);
    if (auto q = attempt([&] { return with_front(p, false, f); })) return q;
    return with_front(id(formula(r, linear ? Sort::Linear : Sort::NonLinear, 0, at)), false, f);
  }

  // Two slots of type f at the front, neither a weakening: minors of a zero
  // elimination.
  NdPtr two_copies(const Formula& f, int d) {
    // false of an empty slot is empty, and two empty copies are one
    auto empty_front = [](const NdPtr& p) {
      const Slot& s = p->conclusion.psi[0];
      return s.term && s.term->kind == TK::Eps;
    };
    NdPtr z = source(false, false, Formula::zero(), d - 1);
    for (int k = 0; k < 20 && empty_front(z); ++k) z = source(false, false, Formula::zero(), d - 1);
    if (empty_front(z)) fail(ErrorKind::Usage, "empty source");
    // identity minors: a weakened minor slot would collapse the copy to eps
    NdPtr m1 = id(f), m2 = id(f);
    NdPtr e = nd::rule(NdRule::CZeroE, {z, m1, m2}, fr());
    const std::size_t base = z->conclusion.psi.size() - 1;
    const std::size_t second = base + m1->conclusion.psi.size();
    std::vector<std::size_t> order{base, second};
    for (std::size_t k = 0; k < e->conclusion.psi.size(); ++k)
      if (k != base && k != second) order.push_back(k);
    return permute_psi(e, order);
  }

  // y : J T |-_L . ; Psi
  NdPtr j_minor(const Formula& t, int d) {
    NdPtr m = from(t, d - 1);
    auto all = shape(m->conclusion.psi);
    return nd::rule(NdRule::LJE, {pad(id(Formula::j(t)), all), m}, fr());
  }

  // Nonlinear derivation from T built only from identity, weakening and contraction.
  NdPtr structural(const Formula& t) {
    NdPtr m = id(t);
    for (int k = r.below(3); k > 0; --k) {
      if (r.coin(0.3)) {
        NdPtr q = nd::weak(m, t, fr());
        m = nd::contr(nd_to_front(q, false, q->conclusion.psi.size() - 1), fr());
      } else {
        m = nd::weak(m, formula(r, Sort::NonLinear, 1, at), fr());
      }
    }
    return m;
  }
};

}  // namespace

Atoms two_atoms(Rng& r) {
  static const std::vector<std::string> pool{"a", "b", "A", "B"};
  int i = r.below(4), j = r.below(3);
  if (j >= i) ++j;
  Atoms at;
  at.nl.clear();
  at.lin.clear();
  for (int k : {i, j}) {
    const std::string& n = pool[static_cast<std::size_t>(k)];
    (std::islower(static_cast<unsigned char>(n[0])) ? at.nl : at.lin).push_back(n);
  }
  return at;
}

Formula formula(Rng& r, Sort s, int depth, const Atoms& at) {
  const auto& names = s == Sort::NonLinear ? at.nl : at.lin;
  if (depth <= 0 || r.coin(0.35)) {
    if (names.empty() || r.coin(0.15)) return s == Sort::NonLinear ? Formula::zero() : Formula::bot();
    const std::string& n = r.pick(names);
    return s == Sort::NonLinear ? Formula::nl_atom(n) : Formula::l_atom(n);
  }
  const int k = r.below(3);
  if (s == Sort::NonLinear) {
    if (k == 0) return Formula::plus(formula(r, s, depth - 1, at), formula(r, s, depth - 1, at));
    if (k == 1) return Formula::minus(formula(r, s, depth - 1, at), formula(r, s, depth - 1, at));
    return Formula::h(formula(r, Sort::Linear, depth - 1, at));
  }
  if (k == 0) return Formula::par(formula(r, s, depth - 1, at), formula(r, s, depth - 1, at));
  if (k == 1) return Formula::coimp(formula(r, s, depth - 1, at), formula(r, s, depth - 1, at));
  return Formula::j(formula(r, Sort::NonLinear, depth - 1, at));
}

ProofPtr proof_from(Rng& r, const Formula& subject, int depth, const Atoms& at) {
  ProofPtr p;
  if (depth > 0 && r.coin(0.6)) p = attempt([&] { return left_rule(r, subject, depth, at); });
  if (!p) p = subject.sort() == Sort::Linear ? mk::l_id(subject) : mk::c_id(subject);
  return decorate(r, p, depth, at);
}

ProofPtr cut_proof(Rng& r, int max_depth, const Atoms& at) {
  for (;;) {
    Formula f = formula(r, r.coin() ? Sort::NonLinear : Sort::Linear, 2, at);
    ProofPtr p = attempt([&] { return cut_with_subject(r, f, 3, at); });
    if (!p || is_cut_free(p) || depth(p) > max_depth) continue;
    if (r.coin(0.5)) p = decorate(r, p, 1, at);
    if (depth(p) > max_depth) continue;
    return p;
  }
}

NdPtr nd_proof(Rng& r, int depth, const Atoms& at) {
  NdGen g{r, at, nullptr, {}};
  for (;;) {
    Formula f = formula(r, r.coin() ? Sort::NonLinear : Sort::Linear, 2, at);
    NdPtr p = g.from(f, depth);
    if (nd_size(p) > 1) return p;
  }
}

NdPtr typed_proof(Rng& r, int depth, const Atoms& at, Fresh& fresh) {
  NdGen g{r, at, &fresh, {}};
  Formula f = formula(r, r.coin() ? Sort::NonLinear : Sort::Linear, 2, at);
  return g.from(f, depth);
}

std::vector<RedexTag> plantable_tags() {
  using R = RedexTag;
  return {R::Bottom,    R::LinH,      R::LinJ,     R::LinSub,   R::LinPar,   R::NLSub,   R::CoprodL,
          R::CoprodR,   R::NLH,       R::ContrDE,  R::ContrDI1, R::ContrDI2, R::ContrSubI, R::ContrSubE,
          R::ContrHE,   R::WeakDE,    R::WeakDI1,  R::WeakDI2,  R::WeakSubI, R::WeakSubE, R::WeakHE};
}

namespace {
bool shows(const Judgment& j, RedexTag tag) {
  for (auto& l : find_redexes(j))
    if (l.tag == tag) return true;
  return false;
}
}  // namespace

Planted planted_redex(Rng& r, RedexTag tag, const Atoms& at, Fresh& fresh) {
  using R = RedexTag;
  NdGen g{r, at, &fresh, {}};
  auto nl = [&](int d = 1) { return formula(r, Sort::NonLinear, d, at); };
  auto lin = [&](int d = 1) { return formula(r, Sort::Linear, d, at); };
  const int d = 2;
  auto cat3 = [](std::vector<Formula> a, const std::vector<Formula>& b, const std::vector<Formula>& c) {
    a.insert(a.end(), b.begin(), b.end());
    a.insert(a.end(), c.begin(), c.end());
    return a;
  };
  auto weak_front = [&](const NdPtr& p, const Formula& f) {
    NdPtr w = nd::weak(p, f, fresh);
    return nd_to_front(w, false, w->conclusion.psi.size() - 1);
  };
  NdPtr e;
  for (int tries = 0; !e; ++tries) {
    e = attempt([&]() -> NdPtr {
      switch (tag) {
        case R::CoprodL:
        case R::CoprodR: {
          Formula t1 = nl(), t2 = nl();
          bool left = tag == R::CoprodL;
          NdPtr src = g.source(false, false, left ? t1 : t2, d);
          NdPtr in = nd::rule(left ? NdRule::CPlusI1 : NdRule::CPlusI2, {src}, fresh, left ? t2 : t1);
          return plus_e_mult(in, g.from(t1, d - 1), g.from(t2, d - 1), fresh);
        }
        case R::NLSub: {
          Formula t1 = nl(), t2 = nl();
          NdPtr in = nd::rule(NdRule::CMinusI, {g.source(false, false, t1, d), g.from(t2, d - 1)}, fresh);
          NdPtr dc = g.with_front(g.from(t1, d - 1), false, t2);
          return nd::rule(NdRule::CMinusE, {in, dc}, fresh);
        }
        case R::LinSub: {
          Formula b = lin(), c = lin();
          NdPtr da = g.source(true, true, b, d), db = g.from(c, d - 1);
          NdPtr dc = g.with_front(g.from(b, d - 1), true, c);
          if (!dc) dc = g.with_front(g.id(b), true, c);
          if (!dc) return nullptr;
          auto all = cat3(shape(da->conclusion.psi), shape(db->conclusion.psi), shape(dc->conclusion.psi));
          NdPtr in = nd::rule(NdRule::LSubI, {g.pad(da, all), g.pad(db, all)}, fresh);
          return nd::rule(NdRule::LSubE, {in, g.pad(dc, all)}, fresh);
        }
        case R::LinPar: {
          Formula b = lin(), c = lin();
          NdPtr pe = nd::rule(NdRule::LParE, {g.id(Formula::par(b, c)), g.id(b), g.id(c)}, fresh);
          NdPtr in = nd::rule(NdRule::LParI, {g.decorate(pe, 1, 1)}, fresh);
          return nd::rule(NdRule::LParE, {in, g.from(b, d - 1), g.from(c, d - 1)}, fresh);
        }
        case R::Bottom: {
          NdPtr src = g.from(lin(), d);
          NdPtr in = nd::rule(NdRule::LBotI, {src}, fresh, {}, tm::var(src->conclusion.var));
          return nd::rule(NdRule::LBotE, {in}, fresh);
        }
        case R::LinH: {
          Formula t = nl();
          Formula b = Formula::j(t);
          NdPtr src = g.source(true, true, b, d);
          NdPtr dm = g.j_minor(t, d);
          auto all = cat3(shape(src->conclusion.psi), shape(dm->conclusion.psi), {});
          NdPtr in = nd::rule(NdRule::LHI, {g.pad(src, all)}, fresh);
          return nd::rule(NdRule::LHE, {in, g.pad(dm, all)}, fresh);
        }
        case R::LinJ: {
          Formula t = nl();
          NdPtr src = g.source(true, false, t, d);
          NdPtr dm = g.structural(t);
          auto all = cat3(g.rest_shape(src, 1), shape(dm->conclusion.psi), {});
          NdPtr in = nd::rule(NdRule::LJI, {g.pad(src, all, 1)}, fresh);
          return nd::rule(NdRule::LJE, {in, g.pad(dm, all)}, fresh);
        }
        case R::NLH: {
          Formula t = nl();
          Formula c = Formula::j(t);
          NdPtr hi = nd::rule(NdRule::LHI, {nd::weak_all(g.id(c), {nl(0)}, fresh)}, fresh);
          NdPtr r0 = g.source(false, false, Formula::h(c), d - 1);
          NdPtr inner = nd::rule(NdRule::CHE, {r0, hi}, fresh);
          // the let-wrapped H slot comes right after r0's remaining slots
          NdPtr major = nd_to_front(inner, false, r0->conclusion.psi.size() - 1);
          return nd::rule(NdRule::CHE, {major, g.j_minor(t, d)}, fresh);
        }
        case R::ContrDE: {
          Formula t1 = nl(), t2 = nl();
          NdPtr c = nd::contr(g.two_copies(Formula::plus(t1, t2), d), fresh);
          return plus_e_mult(c, g.from(t1, d - 1), g.from(t2, d - 1), fresh);
        }
        case R::ContrDI1:
        case R::ContrDI2: {
          NdPtr c = nd::contr(g.two_copies(nl(), d), fresh);
          return nd::rule(tag == R::ContrDI1 ? NdRule::CPlusI1 : NdRule::CPlusI2, {c}, fresh, nl());
        }
        case R::ContrSubI: {
          NdPtr c = nd::contr(g.two_copies(nl(), d), fresh);
          return nd::rule(NdRule::CMinusI, {c, g.from(nl(), d - 1)}, fresh);
        }
        case R::ContrSubE: {
          Formula t1 = nl(), t2 = nl();
          NdPtr c = nd::contr(g.two_copies(Formula::minus(t1, t2), d), fresh);
          return nd::rule(NdRule::CMinusE, {c, g.with_front(g.from(t1, d - 1), false, t2)}, fresh);
        }
        case R::ContrHE: {
          Formula t = nl();
          NdPtr c = nd::contr(g.two_copies(Formula::h(Formula::j(t)), d), fresh);
          return nd::rule(NdRule::CHE, {c, g.j_minor(t, d)}, fresh);
        }
        case R::WeakDE: {
          Formula t1 = nl(), t2 = nl();
          NdPtr w = weak_front(g.from(nl(), d), Formula::plus(t1, t2));
          return plus_e_mult(w, g.from(t1, d - 1), g.from(t2, d - 1), fresh);
        }
        case R::WeakDI1:
        case R::WeakDI2: {
          NdPtr w = weak_front(g.from(nl(), d), nl());
          return nd::rule(tag == R::WeakDI1 ? NdRule::CPlusI1 : NdRule::CPlusI2, {w}, fresh, nl());
        }
        case R::WeakSubI: {
          NdPtr w = weak_front(g.from(nl(), d), nl());
          return nd::rule(NdRule::CMinusI, {w, g.from(nl(), d - 1)}, fresh);
        }
        case R::WeakSubE: {
          Formula t1 = nl(), t2 = nl();
          NdPtr w = weak_front(g.from(nl(), d), Formula::minus(t1, t2));
          return nd::rule(NdRule::CMinusE, {w, g.with_front(g.from(t1, d - 1), false, t2)}, fresh);
        }
        case R::WeakHE: {
          Formula t = nl();
          NdPtr w = weak_front(g.from(nl(), d), Formula::h(Formula::j(t)));
          return nd::rule(NdRule::CHE, {w, g.j_minor(t, d)}, fresh);
        }
        default: return nullptr;
      }
    });
    // a vacuous binder (say, a minor whose slots never use it) leaves no
    // redex in the terms; those samples are drawn again
    if (e && !shows(e->conclusion, tag)) e = nullptr;
    // a relisting may put a same-typed bystander where the principal slot was
    if (e) {
      bool here = false;
      for (auto& d : derivation_redexes(e)) here |= d.at.empty() && d.tag == tag;
      if (!here) e = nullptr;
    }
    if (tries > 200) fail(ErrorKind::Usage, std::string("could not plant a ") + redex_tag_name(tag) + " redex");
  }
  // A few more rules below, each taking the redex side as its major premise.
  Planted out{e, {}};
  for (int k = r.below(3); k > 0; --k) {
    if (auto q = attempt([&] { return g.step(out.root, 1); })) {
      if (q->premises.empty() || q->premises[0] != out.root || !shows(q->conclusion, tag)) continue;
      out.root = q;
      out.at.insert(out.at.begin(), 0);
    }
  }
  return out;
}

// ------------------------------------------------------------ terms

namespace {
const std::vector<std::string> kNames{"x", "y", "z", "w"};
}

Term term(Rng& r, bool linear, int depth) {
  auto v = [&]() { return r.pick(kNames); };
  if (depth <= 0 || r.coin(0.25)) return r.coin(0.85) || linear ? tm::var(v()) : tm::eps();
  if (linear) {
    switch (r.below(7)) {
      case 0: return tm::connect_bot(term(r, true, depth - 1));
      case 1: return tm::app(v(), term(r, true, depth - 1));
      case 2: return tm::mkc(term(r, true, depth - 1), v());
      case 3: return tm::par(term(r, true, depth - 1), term(r, true, depth - 1));
      case 4: return tm::casel(term(r, true, depth - 1));
      case 5: return tm::caser(term(r, true, depth - 1));
      default: return tm::j(term(r, false, depth - 1));
    }
  }
  switch (r.below(11)) {
    case 0: return tm::dot_raw(term(r, false, depth - 1), term(r, false, depth - 1));
    case 1: return tm::false_(term(r, false, depth - 1));
    case 2: return tm::app(v(), term(r, false, depth - 1));
    case 3: return tm::mkc(term(r, false, depth - 1), v());
    case 4: return tm::inl(term(r, false, depth - 1));
    case 5: return tm::inr(term(r, false, depth - 1));
    case 6: return tm::case_(term(r, false, depth - 1), v(), term(r, false, depth - 1), v(), term(r, false, depth - 1));
    case 7: return tm::let_j(v(), term(r, true, depth - 1), term(r, false, depth - 1));
    case 8: return tm::let_h(v(), term(r, false, depth - 1), term(r, false, depth - 1));
    case 9: return tm::h(term(r, true, depth - 1));
    default: return tm::var(v());
  }
}

Term p_term(Rng& r, int depth) {
  const bool lin = r.coin();
  if (r.coin(0.3)) return tm::postp_bot(term(r, true, depth));
  return tm::postp(r.pick(kNames), term(r, lin, depth), term(r, lin, depth));
}

}  // namespace gen
