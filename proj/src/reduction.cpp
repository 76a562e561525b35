#include "dlnl/reduction.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "dlnl/error.hpp"

namespace dlnl {

namespace {

struct TagInfo {
  RedexTag tag;
  const char* name;
};

constexpr TagInfo kTags[] = {
    {RedexTag::Bottom, "Bottom"},          {RedexTag::LinH, "LinH"},
    {RedexTag::LinJ, "LinJ"},              {RedexTag::LinSub, "LinSub"},
    {RedexTag::LinPar, "LinPar"},          {RedexTag::NLSub, "NLSub"},
    {RedexTag::CoprodL, "CoprodL"},        {RedexTag::CoprodR, "CoprodR"},
    {RedexTag::NLH, "NLH"},                {RedexTag::ContrDE, "ContrWith-dE"},
    {RedexTag::ContrDI1, "ContrWith-dI1"}, {RedexTag::ContrDI2, "ContrWith-dI2"},
    {RedexTag::ContrSubI, "ContrWith-subI"}, {RedexTag::ContrSubE, "ContrWith-subE"},
    {RedexTag::ContrHE, "ContrWith-HE"},   {RedexTag::WeakDE, "WeakWith-dE"},
    {RedexTag::WeakDI1, "WeakWith-dI1"},   {RedexTag::WeakDI2, "WeakWith-dI2"},
    {RedexTag::WeakSubI, "WeakWith-subI"}, {RedexTag::WeakSubE, "WeakWith-subE"},
    {RedexTag::WeakHE, "WeakWith-HE"},     {RedexTag::Commute1, "Commute1"},
    {RedexTag::Commute2, "Commute2"},      {RedexTag::Commute3, "Commute3"},
    {RedexTag::Commute4, "Commute4"},      {RedexTag::Commute5, "Commute5"},
    {RedexTag::Commute6, "Commute6"},      {RedexTag::Commute7, "Commute7"},
};

}  // namespace

const char* redex_tag_name(RedexTag t) { return kTags[static_cast<int>(t)].name; }

std::optional<RedexTag> redex_tag_from_name(std::string_view name) {
  for (auto& t : kTags)
    if (name == t.name) return t.tag;
  return std::nullopt;
}

bool is_commute(RedexTag t) { return static_cast<int>(t) >= static_cast<int>(RedexTag::Commute1); }

// ---------------------------------------------------------------- judgments

namespace {

bool multi(const Term& t) { return t->kind == TK::Dot && dot_components(t).size() >= 2; }
bool empty(const Term& t) { return t->kind == TK::Eps; }

std::optional<RedexTag> node_tag(const Term& u, bool top, bool pslot, bool delta) {
  using R = RedexTag;
  if (top && pslot) {
    if (u->kind == TK::PostpBot && u->a->kind == TK::ConnectBot) return R::Bottom;
    if (u->kind == TK::Postp) {
      if (u->b->kind == TK::Mkc) return delta ? R::LinSub : R::NLSub;
      if (multi(u->b)) return R::ContrSubE;
      if (empty(u->b)) return R::WeakSubE;
    }
    return std::nullopt;
  }
  if (top && u->kind == TK::Mkc) {
    if (multi(u->a)) return R::ContrSubI;
    if (empty(u->a)) return R::WeakSubI;
  }
  switch (u->kind) {
    case TK::LetH:
      if (u->a->kind == TK::HWrap) return R::LinH;
      if (u->a->kind == TK::LetH && u->a->b->kind == TK::HWrap) return R::NLH;
      if (multi(u->a)) return R::ContrHE;
      if (empty(u->a)) return R::WeakHE;
      break;
    case TK::LetJ:
      if (u->a->kind == TK::JWrap) return R::LinJ;
      break;
    case TK::Casel:
    case TK::Caser:
      if (u->a->kind == TK::ParPair) return R::LinPar;
      break;
    case TK::Case:
      if (u->a->kind == TK::Inl) return R::CoprodL;
      if (u->a->kind == TK::Inr) return R::CoprodR;
      if (u->a->kind == TK::Case) return R::Commute2;
      if (multi(u->a)) return R::ContrDE;
      if (empty(u->a)) return R::WeakDE;
      break;
    case TK::Inl:
      if (multi(u->a)) return R::ContrDI1;
      if (empty(u->a)) return R::WeakDI1;
      break;
    case TK::Inr:
      if (multi(u->a)) return R::ContrDI2;
      if (empty(u->a)) return R::WeakDI2;
      break;
    default: break;
  }
  return std::nullopt;
}

void collect(const Term& t, std::vector<int>& path, bool pslot, bool delta, std::size_t slot,
             std::vector<RedexLocator>& out) {
  const Term* kids[] = {&t->a, &t->b, &t->c};
  for (int k = 0; k < 3; ++k) {
    if (!*kids[k]) continue;
    path.push_back(k);
    collect(*kids[k], path, pslot, delta, slot, out);
    path.pop_back();
  }
  if (auto tag = node_tag(t, path.empty(), pslot, delta)) out.push_back({*tag, delta, slot, path});
}

Term child(const Term& t, int k) { return k == 0 ? t->a : k == 1 ? t->b : t->c; }

Term replace_path(const Term& t, const std::vector<int>& path, std::size_t i, const Term& by) {
  if (i == path.size()) return by;
  Term a = t->a, b = t->b, c = t->c;
  Term& k = path[i] == 0 ? a : path[i] == 1 ? b : c;
  k = replace_path(k, path, i + 1, by);
  return with_children(t, a, b, c);
}

bool has_app(const Term& t, const std::string& y, const Term& key) {
  if (t->kind == TK::App && t->x == y && alpha_eq(t->a, key)) return true;
  for (const Term* c : {&t->a, &t->b, &t->c})
    if (*c && has_app(*c, y, key)) return true;
  return false;
}

Term replace_app(const Term& t, const std::string& y, const Term& key, const Term& by) {
  return rewrite(t, [&](const Term& u) -> Term {
    if (u->kind == TK::App && u->x == y && alpha_eq(u->a, key)) return by;
    return nullptr;
  });
}

// With `empties` set (the step substitutes the empty multiset), an empty
// replacement empties the whole nonlinear slot and a p-slot emptied this way
// is dropped. Otherwise an eps result is just a branch body.
Judgment rewrite_all(const Judgment& j, const std::function<Term(const Term&)>& f, bool empties = false) {
  Judgment out = j;
  for (auto& s : out.delta) s.term = rewrite(s.term, f);
  Zone psi;
  for (const Slot& s : j.psi) {
    bool emptied = false;
    Term t = rewrite(s.term, [&](const Term& u) -> Term {
      Term r = f(u);
      if (empties && r && r->kind == TK::Eps) emptied = true;
      return r;
    });
    if (!emptied) psi.push_back({t, s.type});
    else if (!s.is_p()) psi.push_back({tm::eps(), s.type});
  }
  out.psi = psi;
  return out;
}

// Every slot mentioning y(key) becomes one copy per component of the
// payload: a dot of the copies for typed slots, parallel p-slots otherwise.
// An empty payload erases the typed slot's term and drops the p-slot.
Judgment split_apps(const Judgment& j, const std::string& y, const Term& key, const std::vector<Term>& comps,
                    std::optional<std::pair<bool, std::size_t>> skip) {
  Judgment out = j;
  for (bool d : {true, false}) {
    Zone z;
    const Zone& src = j.zone(d);
    for (std::size_t i = 0; i < src.size(); ++i) {
      const Slot& s = src[i];
      if ((skip && skip->first == d && skip->second == i) || !has_app(s.term, y, key)) {
        z.push_back(s);
        continue;
      }
      std::vector<Term> copies;
      for (auto& c : comps) copies.push_back(replace_app(s.term, y, key, tm::app(y, c)));
      if (s.is_p()) {
        for (auto& c : copies) z.push_back({c, Formula()});
      } else {
        z.push_back({dot_all(copies), s.type});
      }
    }
    out.zone(d) = z;
  }
  return out;
}

}  // namespace

std::vector<RedexLocator> find_redexes(const Judgment& j) {
  std::vector<RedexLocator> out;
  if (!j.typed()) return out;
  for (bool d : {true, false}) {
    const Zone& z = j.zone(d);
    for (std::size_t i = 0; i < z.size(); ++i) {
      std::vector<int> path;
      collect(z[i].term, path, z[i].is_p(), d, i, out);
    }
  }
  return out;
}

Judgment beta_step(const Judgment& j, const RedexLocator& r, Fresh& fresh) {
  using R = RedexTag;
  if (is_commute(r.tag) && r.tag != R::Commute2) {
    fail(ErrorKind::NotACommute, std::string(redex_tag_name(r.tag)) +
                                     " only rearranges a derivation; use commute_step on the typing derivation");
  }
  if (!j.typed()) fail(ErrorKind::NotARedex, "the judgment carries no terms");
  const Zone& zone = j.zone(r.delta);
  if (r.slot >= zone.size()) fail(ErrorKind::NotARedex, "slot index out of range");
  const Slot& slot = zone[r.slot];
  Term u = slot.term;
  for (int k : r.path) {
    if (k < 0 || k > 2 || !child(u, k)) fail(ErrorKind::NotARedex, "redex path leaves the term");
    u = child(u, k);
  }
  auto tag = node_tag(u, r.path.empty(), slot.is_p(), r.delta);
  if (!tag || *tag != r.tag) {
    fail(ErrorKind::NotARedex, std::string("no ") + redex_tag_name(r.tag) + " redex at the given position: " + print_term(u));
  }

  auto drop_slot = [&](Judgment out) {
    Zone& z = out.zone(r.delta);
    z.erase(z.begin() + static_cast<std::ptrdiff_t>(r.slot));
    return out;
  };

  switch (r.tag) {
    case R::Bottom: return drop_slot(j);
    case R::LinSub:
    case R::NLSub: {
      const std::string z = u->x;
      const Term e2 = u->a, mk = u->b, e1 = u->b->a;
      const std::string y = mk->x;
      Term body = subst(e1, z, e2, fresh);
      return rewrite_all(drop_slot(j), [&](const Term& n) -> Term {
        if (n->kind != TK::App) return nullptr;
        if (n->x == y && alpha_eq(n->a, e1)) return body;
        if (n->x == z && alpha_eq(n->a, mk)) return e1;
        return nullptr;
      }, e1->kind == TK::Eps);
    }
    case R::LinPar: {
      const Term p = u->a;
      return rewrite_all(j, [&](const Term& n) -> Term {
        if ((n->kind == TK::Casel || n->kind == TK::Caser) && alpha_eq(n->a, p)) return n->kind == TK::Casel ? p->a : p->b;
        return nullptr;
      });
    }
    case R::CoprodL:
    case R::CoprodR: {
      const Term key = u->a;
      const bool left = r.tag == R::CoprodL;
      return rewrite_all(j, [&](const Term& n) -> Term {
        if (n->kind != TK::Case || !alpha_eq(n->a, key)) return nullptr;
        return left ? subst(key->a, n->x, n->b, fresh) : subst(key->a, n->y, n->c, fresh);
      }, key->a->kind == TK::Eps);
    }
    case R::LinH:
    case R::LinJ: {
      const Term key = u->a;
      const TK k = u->kind;
      return rewrite_all(j, [&](const Term& n) -> Term {
        if (n->kind != k || !alpha_eq(n->a, key)) return nullptr;
        return subst(key->a, n->x, n->b, fresh);
      }, key->a->kind == TK::Eps);
    }
    case R::NLH: {
      // let H z = (let H x = u in H e) in s  ~>  let H x = u in [e/z]s
      const Term key = u->a;
      return rewrite_all(j, [&](const Term& n) -> Term {
        if (n->kind != TK::LetH || !alpha_eq(n->a, key)) return nullptr;
        std::string x = key->x;
        Term e = key->b->a;
        if (x != n->x && free_vars(n->b).count(x)) {
          std::string x2 = fresh(x);
          e = subst1(tm::var(x2), x, e, fresh);
          x = x2;
        }
        return tm::let_h(x, key->a, subst(e, n->x, n->b, fresh));
      }, key->b->a->kind == TK::Eps);
    }
    case R::Commute2: {
      // case (case t of y.t1, z.t2) of v1.s, v2.r
      //   ~>  case t of y.(case t1 of v1.s, v2.r), z.(case t2 of v1.s, v2.r)
      const Term key = u->a;
      return rewrite_all(j, [&](const Term& n) -> Term {
        if (n->kind != TK::Case || !alpha_eq(n->a, key)) return nullptr;
        std::set<std::string> fv;
        for (auto [body, b] : {std::pair{n->b, n->x}, std::pair{n->c, n->y}}) {
          auto f = free_vars(body);
          f.erase(b);
          fv.insert(f.begin(), f.end());
        }
        std::string y = key->x, z = key->y;
        Term t1 = key->b, t2 = key->c;
        if (fv.count(y)) {
          std::string y2 = fresh(y);
          t1 = subst1(tm::var(y2), y, t1, fresh);
          y = y2;
        }
        if (fv.count(z)) {
          std::string z2 = fresh(z);
          t2 = subst1(tm::var(z2), z, t2, fresh);
          z = z2;
        }
        return tm::case_(key->a, y, tm::case_(t1, n->x, n->b, n->y, n->c), z, tm::case_(t2, n->x, n->b, n->y, n->c));
      });
    }
    case R::ContrDE:
    case R::WeakDE: {
      const Term key = u->a;
      const std::string bx = u->x, by = u->y;
      return rewrite_all(j, [&](const Term& n) -> Term {
        if (n->kind != TK::Case || !alpha_eq(n->a, key) || n->x != bx || n->y != by) return nullptr;
        std::vector<Term> out;
        for (auto& c : dot_components(key)) out.push_back(tm::case_(c, n->x, n->b, n->y, n->c));
        return dot_all(out);
      }, r.tag == R::WeakDE);
    }
    case R::ContrDI1:
    case R::ContrDI2:
    case R::WeakDI1:
    case R::WeakDI2: {
      // the redex is this one slot: inl (t1 . t2) ~> inl t1 . inl t2, inl eps ~> eps
      std::vector<Term> out;
      for (auto& c : dot_components(u->a)) out.push_back(u->kind == TK::Inl ? tm::inl(c) : tm::inr(c));
      Judgment res = j;
      Slot& s = res.zone(r.delta)[r.slot];
      s.term = replace_path(s.term, r.path, 0, dot_all(out));
      return res;
    }
    case R::ContrHE:
    case R::WeakHE: {
      const Term key = u->a;
      const std::string y = u->x;
      return rewrite_all(j, [&](const Term& n) -> Term {
        if (n->kind != TK::LetH || n->x != y || !alpha_eq(n->a, key)) return nullptr;
        std::vector<Term> out;
        for (auto& c : dot_components(key)) out.push_back(tm::let_h(y, c, n->b));
        return dot_all(out);
      }, r.tag == R::WeakHE);
    }
    case R::ContrSubI:
    case R::WeakSubI: {
      const Term key = u->a;
      const std::string y = u->x;
      auto comps = dot_components(key);
      Judgment out = split_apps(j, y, key, comps, std::pair{r.delta, r.slot});
      std::vector<Term> mks;
      for (auto& c : comps) mks.push_back(tm::mkc(c, y));
      out.zone(r.delta)[r.slot].term = dot_all(mks);
      return out;
    }
    case R::ContrSubE:
    case R::WeakSubE: {
      const Term key = u->b;
      const std::string y = u->x;
      auto comps = dot_components(key);
      Judgment out = split_apps(j, y, key, comps, std::pair{r.delta, r.slot});
      Zone& z = out.zone(r.delta);
      z.erase(z.begin() + static_cast<std::ptrdiff_t>(r.slot));
      std::size_t at = r.slot;
      for (auto& c : comps) {
        z.insert(z.begin() + static_cast<std::ptrdiff_t>(at++), Slot{tm::postp(y, u->a, c), Formula()});
      }
      return out;
    }
    default: break;
  }
  fail(ErrorKind::NotARedex, "unhandled redex");
}

Normalized normalize(const Judgment& j, std::size_t fuel, Fresh& fresh, Strategy strategy) {
  Normalized out;
  out.result = j;
  for (;;) {
    auto rs = find_redexes(out.result);
    if (rs.empty()) return out;
    if (out.steps >= fuel) {
      out.exhausted = true;
      return out;
    }
    auto pick = rs.begin();
    if (strategy == Strategy::ConversionsFirst) {
      auto c = std::find_if(rs.begin(), rs.end(), [](const RedexLocator& r) { return is_commute(r.tag); });
      if (c != rs.end()) pick = c;
    } else {
      auto b = std::find_if(rs.begin(), rs.end(), [](const RedexLocator& r) { return !is_commute(r.tag); });
      if (b != rs.end()) pick = b;
    }
    out.result = beta_step(out.result, *pick, fresh);
    out.trace.push_back(pick->tag);
    ++out.steps;
  }
}

Judgment normalize_or_throw(const Judgment& j, std::size_t fuel, Fresh& fresh, Strategy strategy) {
  Normalized n = normalize(j, fuel, fresh, strategy);
  if (n.exhausted) {
    fail(ErrorKind::FuelExhausted, "no normal form within " + std::to_string(fuel) + " step(s); partial result " +
                                       show_judgment(n.result));
  }
  return n.result;
}

// ---------------------------------------------------------------- derivations

namespace {

// A premise slot: premise index, zone, position in the premise's stored order.
using Src = std::tuple<std::size_t, bool, std::size_t>;

struct Traced {
  Judgment canon;
  std::vector<std::set<Src>> delta, psi;
  const std::vector<std::set<Src>>& zone(bool d) const { return d ? delta : psi; }
};

std::string marker(std::size_t i, bool d, std::size_t k) {
  return "#" + std::to_string(i) + (d ? "d" : "p") + std::to_string(k);
}

std::optional<Src> parse_marker(const std::string& v) {
  if (v.size() < 4 || v[0] != '#' || !std::isdigit(static_cast<unsigned char>(v[1]))) return std::nullopt;
  std::size_t pos = 1;
  std::size_t i = 0;
  while (pos < v.size() && std::isdigit(static_cast<unsigned char>(v[pos]))) i = i * 10 + static_cast<std::size_t>(v[pos++] - '0');
  if (pos >= v.size() || (v[pos] != 'd' && v[pos] != 'p')) return std::nullopt;
  bool d = v[pos++] == 'd';
  std::size_t k = 0;
  while (pos < v.size()) k = k * 10 + static_cast<std::size_t>(v[pos++] - '0');
  return Src{i, d, k};
}

// Which premise slots each slot of the canonical conclusion is built from:
// re-run the rule on premises whose terms are unique marker variables.
Traced trace(const NdLabel& lb, const std::vector<const Judgment*>& ps) {
  std::vector<Judgment> marked;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    Judgment m = *ps[i];
    m.var = "#v" + std::to_string(i);
    for (bool d : {true, false}) {
      Zone& z = m.zone(d);
      for (std::size_t k = 0; k < z.size(); ++k) {
        Term v = tm::var(marker(i, d, k));
        z[k].term = z[k].is_p() ? tm::postp_bot(v) : v;
      }
    }
    marked.push_back(std::move(m));
  }
  std::vector<const Judgment*> mp;
  for (auto& m : marked) mp.push_back(&m);
  NdLabel l = lb;
  if (l.rule == NdRule::LBotI) l.e = tm::var("#v0");
  if (l.rule == NdRule::CId || l.rule == NdRule::LId) l.e = tm::var("#v");
  Fresh fresh;
  Traced t;
  t.canon = nd_infer(l, mp, fresh);
  for (bool d : {true, false}) {
    auto& out = d ? t.delta : t.psi;
    for (auto& s : t.canon.zone(d)) {
      std::set<Src> src;
      for (auto& v : free_vars(s.term))
        if (auto m = parse_marker(v)) src.insert(*m);
      out.push_back(src);
    }
  }
  return t;
}

Traced trace_node(const NdPtr& p) {
  std::vector<const Judgment*> ps;
  for (auto& q : p->premises) ps.push_back(&q->conclusion);
  return trace(p->label, ps);
}

bool same_slot(const Slot& a, const Slot& b) {
  if (a.is_p() != b.is_p()) return false;
  if (!a.is_p() && a.type != b.type) return false;
  if (!a.term || !b.term) return !a.term && !b.term;
  return alpha_eq(a.term, b.term);
}

// Equal up to one consistent renaming of every name, shared across a zone:
// re-inferring a conclusion draws new names for the binders a rule creates.
struct Renaming {
  std::map<std::string, std::string> fw, bw;
  bool bind(const std::string& a, const std::string& b) {
    auto f = fw.find(a);
    auto g = bw.find(b);
    if (f != fw.end() || g != bw.end()) return f != fw.end() && g != bw.end() && f->second == b && g->second == a;
    fw[a] = b;
    bw[b] = a;
    return true;
  }
  bool eq(const Term& a, const Term& b) {
    if (!a || !b) return !a && !b;
    if (a->kind != b->kind) return false;
    if (a->x.empty() != b->x.empty() || a->y.empty() != b->y.empty()) return false;
    if (!a->x.empty() && !bind(a->x, b->x)) return false;
    if (!a->y.empty() && !bind(a->y, b->y)) return false;
    return eq(a->a, b->a) && eq(a->b, b->b) && eq(a->c, b->c);
  }
};

// For each stored slot, the canonical slot it lists.
std::vector<std::size_t> stored_to_canon(const Zone& stored, const Zone& canon) {
  std::vector<std::size_t> out(stored.size(), 0);
  std::vector<bool> used(canon.size(), false);
  Renaming ren;
  for (int pass = 0; pass < 3; ++pass) {
    for (std::size_t i = 0; i < stored.size(); ++i) {
      if (pass > 0 && out[i] != 0) continue;
      for (std::size_t k = 0; k < canon.size(); ++k) {
        if (used[k]) continue;
        const bool kind = stored[i].is_p() == canon[k].is_p() && (stored[i].is_p() || stored[i].type == canon[k].type);
        bool ok = false;
        if (pass == 0) {
          ok = same_slot(stored[i], canon[k]);
        } else if (pass == 1) {
          Renaming r = ren;
          ok = kind && r.eq(stored[i].term, canon[k].term);
          if (ok) ren = r;
        } else {
          ok = kind;
        }
        if (!ok) continue;
        used[k] = true;
        out[i] = k + 1;
        break;
      }
    }
  }
  for (auto& o : out) {
    if (o == 0) fail(ErrorKind::RuleMismatch, "stored conclusion does not match its rule");
    --o;
  }
  return out;
}

Judgment canonical(const NdPtr& p) {
  std::vector<const Judgment*> ps;
  for (auto& q : p->premises) ps.push_back(&q->conclusion);
  Fresh fresh;
  return nd_infer(p->label, ps, fresh);
}

std::set<Src> sources_of(const NdPtr& p, bool delta, std::size_t index) {
  Judgment canon = canonical(p);
  return trace_node(p).zone(delta)[stored_to_canon(p->conclusion.zone(delta), canon.zone(delta))[index]];
}

// The slot is the principal formula of p's rule. Identical slots are
// interchangeable, so any canonical slot equal to it may be the principal one.
bool is_principal(const NdPtr& p, bool delta, std::size_t index) {
  if (p->premises.empty()) return false;
  const NdRule r = p->label.rule;
  const Judgment canon = canonical(p);
  const Zone& cz = canon.zone(delta);
  const Slot& s = p->conclusion.zone(delta)[index];
  std::vector<std::size_t> cands;
  for (std::size_t k = 0; k < cz.size(); ++k)
    if (same_slot(s, cz[k])) cands.push_back(k);
  if (r == NdRule::CWeak || r == NdRule::LWeak) {
    return !delta && !cands.empty() && cands.back() + 1 == cz.size();
  }
  if (r == NdRule::LBotI) return delta && !cands.empty() && cands.front() == 0;
  Traced t = trace_node(p);
  Active a = nd_active(r, 0);
  for (auto k : cands) {
    const auto& src = t.zone(delta)[k];
    bool ok = !src.empty();
    for (auto& [i, d, q] : src)
      if (i != 0 || d != a.delta || q >= a.count) ok = false;
    if (ok) return true;
  }
  return false;
}

NdPtr permute_zone(const NdPtr& p, bool delta, const std::vector<std::size_t>& order) {
  Judgment c = p->conclusion;
  Zone z;
  for (auto i : order) z.push_back(c.zone(delta)[i]);
  c.zone(delta) = z;
  return nd_relayout(p, std::move(c));
}

// Contract, slot by slot, nonlinear slots carrying the same group label.
NdPtr contract_groups(NdPtr d, std::vector<int> label, Fresh& fresh) {
  for (;;) {
    std::size_t n = label.size(), i = n, j = n;
    for (std::size_t a = 0; a < n && i == n; ++a) {
      if (label[a] < 0) continue;
      for (std::size_t b = a + 1; b < n; ++b) {
        if (label[b] == label[a]) {
          i = a;
          j = b;
          break;
        }
      }
    }
    if (i == n) return d;
    std::vector<std::size_t> order{i, j};
    std::vector<int> nl{label[i]};
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i || k == j) continue;
      order.push_back(k);
      nl.push_back(label[k]);
    }
    d = nd::contr(permute_zone(d, false, order), fresh);
    label = nl;
  }
}

// Merge equal-shape blocks [from, to) of the nonlinear zone into one: the
// typed slots of every block are paired with those of the first by type.
NdPtr merge_blocks(const NdPtr& d, const std::vector<std::pair<std::size_t, std::size_t>>& blocks, Fresh& fresh) {
  const Zone& z = d->conclusion.psi;
  std::vector<int> label(z.size(), -1);
  std::vector<std::size_t> ref;
  for (std::size_t k = blocks[0].first; k < blocks[0].second; ++k) {
    if (z[k].is_p()) continue;
    label[k] = static_cast<int>(ref.size());
    ref.push_back(k);
  }
  for (std::size_t b = 1; b < blocks.size(); ++b) {
    std::vector<bool> taken(ref.size(), false);
    std::size_t pos = 0;
    for (std::size_t k = blocks[b].first; k < blocks[b].second; ++k) {
      if (z[k].is_p()) continue;
      std::size_t pick = ref.size();
      if (pos < ref.size() && !taken[pos] && z[ref[pos]].type == z[k].type) pick = pos;
      for (std::size_t r = 0; r < ref.size() && pick == ref.size(); ++r)
        if (!taken[r] && z[ref[r]].type == z[k].type) pick = r;
      if (pick == ref.size()) fail(ErrorKind::ShapeMismatch, "merged blocks have different shapes");
      taken[pick] = true;
      label[k] = static_cast<int>(pick);
      ++pos;
    }
  }
  return contract_groups(d, label, fresh);
}

std::pair<std::size_t, std::size_t> last_block(const NdPtr& d, std::size_t n, std::size_t skip_end = 0) {
  std::size_t end = d->conclusion.psi.size() - skip_end;
  return {end - n, end};
}

// The linear image of a nonlinear derivation built from Id, Weak and Contr
// only, with d in place of its Id leaf.
NdPtr graft_structural(const NdPtr& d, const NdPtr& m, Fresh& fresh) {
  const NdRule r = m->label.rule;
  if (r == NdRule::CId) return d;
  if (r != NdRule::CWeak && r != NdRule::CContr) {
    fail(ErrorKind::NotARedex, std::string("the J redex's minor derivation uses ") + nd_rule_name(r, true) +
                                   ", which has no linear counterpart; its contractum has no typing derivation");
  }
  const std::size_t before = m->premises[0]->conclusion.psi.size();
  NdPtr g = graft_structural(d, m->premises[0], fresh);
  Zone rest(g->conclusion.psi.begin() + static_cast<std::ptrdiff_t>(before), g->conclusion.psi.end());
  NdPtr n = nd_make(NdLabel::of(r == NdRule::CWeak ? NdRule::LWeak : NdRule::LContr, m->label.f), {g}, fresh);
  Judgment target = n->conclusion;
  target.psi = m->conclusion.psi;
  target.psi.insert(target.psi.end(), rest.begin(), rest.end());
  return conform(n, target);
}

std::optional<RedexTag> pair_tag(NdRule e, NdRule r) {
  using N = NdRule;
  using R = RedexTag;
  static const std::map<std::pair<N, N>, R> table = {
      {{N::CPlusE, N::CPlusI1}, R::CoprodL},  {{N::CPlusE, N::CPlusI2}, R::CoprodR},
      {{N::CMinusE, N::CMinusI}, R::NLSub},   {{N::LSubE, N::LSubI}, R::LinSub},
      {{N::LParE, N::LParI}, R::LinPar},      {{N::LBotE, N::LBotI}, R::Bottom},
      {{N::LHE, N::LHI}, R::LinH},            {{N::LJE, N::LJI}, R::LinJ},
      {{N::CPlusE, N::CContr}, R::ContrDE},   {{N::CPlusI1, N::CContr}, R::ContrDI1},
      {{N::CPlusI2, N::CContr}, R::ContrDI2}, {{N::CMinusI, N::CContr}, R::ContrSubI},
      {{N::CMinusE, N::CContr}, R::ContrSubE}, {{N::CHE, N::CContr}, R::ContrHE},
      {{N::CPlusE, N::CWeak}, R::WeakDE},     {{N::CPlusI1, N::CWeak}, R::WeakDI1},
      {{N::CPlusI2, N::CWeak}, R::WeakDI2},   {{N::CMinusI, N::CWeak}, R::WeakSubI},
      {{N::CMinusE, N::CWeak}, R::WeakSubE},  {{N::CHE, N::CWeak}, R::WeakHE},
  };
  auto it = table.find({e, r});
  if (it == table.end()) return std::nullopt;
  return it->second;
}

std::optional<RedexTag> classify(const NdPtr& e) {
  if (e->premises.empty()) return std::nullopt;
  Active a = nd_active(e->label.rule, 0);
  if (a.count == 0) return std::nullopt;
  const NdPtr& r = e->premises[0];
  if (r->premises.empty()) return std::nullopt;
  if (e->label.rule == NdRule::CHE && r->label.rule == NdRule::CHE) {
    // let H z = (let H x = u in H e) in s: the active slot comes from the
    // inner let's minor premise, whose last rule introduced H e.
    auto src = sources_of(r, false, 0);
    const NdPtr& m = r->premises[1];
    if (m->label.rule != NdRule::LHI) return std::nullopt;
    for (auto& [i, d, k] : src) {
      if (i == 1 && !d && is_principal(m, false, k)) return RedexTag::NLH;
    }
    return std::nullopt;
  }
  auto tag = pair_tag(e->label.rule, r->label.rule);
  if (!tag || !is_principal(r, a.delta, 0)) return std::nullopt;
  return tag;
}

// p without its nonlinear slot `idx`, whose term is empty: follow the slot
// up to the weakening that introduced it and leave that rule out.
std::optional<NdPtr> strengthen(const NdPtr& p, std::size_t idx, Fresh& fresh) {
  const Zone& stored = p->conclusion.psi;
  if (idx >= stored.size() || stored[idx].is_p() || !stored[idx].term || stored[idx].term->kind != TK::Eps)
    return std::nullopt;
  Judgment target = p->conclusion;
  target.psi.erase(target.psi.begin() + static_cast<std::ptrdiff_t>(idx));
  if (p->premises.empty()) return std::nullopt;
  const NdRule r = p->label.rule;
  const Judgment canon = canonical(p);
  const std::size_t k = stored_to_canon(stored, canon.psi)[idx];
  if ((r == NdRule::CWeak || r == NdRule::LWeak) && k + 1 == canon.psi.size()) return conform(p->premises[0], target);
  const std::set<Src> src = trace_node(p).psi[k];
  if (src.empty()) return std::nullopt;
  std::vector<NdPtr> prems = p->premises;
  bool contracted = false;
  // highest positions first, so the lower indices stay valid
  for (auto it = src.rbegin(); it != src.rend(); ++it) {
    auto [i, d, q] = *it;
    if (d) return std::nullopt;
    Active a = nd_active(r, i);
    if (!a.delta && q < a.count) {
      if (r != NdRule::CContr && r != NdRule::LContr) return std::nullopt;
      contracted = true;
    }
    auto s = strengthen(prems[i], q, fresh);
    if (!s) return std::nullopt;
    prems[i] = *s;
  }
  if (contracted) return conform(prems[0], target);
  NdPtr n;
  try {
    n = nd_make(p->label, std::move(prems), fresh);
  } catch (const Error&) {
    return std::nullopt;
  }
  return conform(n, target);
}

// A nonlinear cut. An empty cut term substitutes into every slot of the
// minor as the empty multiset, so those slots are weakened in instead.
NdPtr cut_cc(const NdPtr& p1, const NdPtr& p2, Fresh& fresh) {
  if (auto s = strengthen(p1, 0, fresh)) return nd::weak_all(*s, shape(p2->conclusion.psi), fresh);
  return admissible_cut(p1, p2, CutShape::CC, fresh);
}

// The contractum of the redex at e, before it is put back in place.
NdPtr contract(const NdPtr& e, RedexTag tag, Fresh& fresh) {
  using R = RedexTag;
  const NdPtr& r = e->premises[0];
  const NdPtr& r0 = r->premises[0];
  auto psi_size = [](const NdPtr& d) { return d->conclusion.psi.size(); };
  auto typed_size = [](const NdPtr& d) { return shape(d->conclusion.psi).size(); };
  switch (tag) {
    case R::CoprodL: return cut_cc(r0, e->premises[1], fresh);
    case R::CoprodR: return cut_cc(r0, e->premises[2], fresh);
    case R::NLSub: {
      NdPtr c1 = cut_cc(r0, e->premises[1], fresh);
      return cut_cc(c1, r->premises[1], fresh);
    }
    case R::LinSub: {
      const NdPtr &db = r->premises[1], &dc = e->premises[1];
      NdPtr c1 = admissible_cut(r0, dc, CutShape::LL, fresh);
      NdPtr c2 = admissible_cut(c1, db, CutShape::LL, fresh);
      std::size_t nb = psi_size(db), nc = psi_size(dc);
      return merge_blocks(c2, {{0, nb}, {nb, nb + nc}, {nb + nc, psi_size(c2)}}, fresh);
    }
    case R::LinPar: {
      NdPtr c1 = admissible_cut(r0, e->premises[1], CutShape::LL, fresh);
      c1 = nd_to_front(c1, true, e->premises[1]->conclusion.delta.size());
      return admissible_cut(c1, e->premises[2], CutShape::LL, fresh);
    }
    case R::Bottom: return r0;
    case R::LinH: {
      const NdPtr& dm = e->premises[1];
      NdPtr c = admissible_cut(r0, dm, CutShape::LL, fresh);
      std::size_t n = psi_size(dm);
      return merge_blocks(c, {{0, n}, {n, psi_size(c)}}, fresh);
    }
    case R::LinJ: {
      const NdPtr& dm = e->premises[1];
      NdPtr c = graft_structural(r0, dm, fresh);
      std::size_t n = psi_size(dm);
      return merge_blocks(c, {{0, n}, {n, psi_size(c)}}, fresh);
    }
    case R::NLH: {
      // r = let H x = u in (h e, ...); the h e slot was introduced right above.
      const NdPtr& hi = r->premises[1];
      NdPtr c1 = admissible_cut(hi->premises[0], e->premises[1], CutShape::LL, fresh);
      return nd::rule(NdRule::CHE, {r0, c1}, fresh);
    }
    case R::ContrDE: {
      const NdPtr &m1 = e->premises[1], &m2 = e->premises[2];
      NdPtr a = nd::rule(NdRule::CPlusE, {r0, m1, m2}, fresh);
      NdPtr b = nd::rule(NdRule::CPlusE, {a, m1, m2}, fresh);
      std::size_t n = psi_size(m1);
      return merge_blocks(b, {last_block(b, n, n), last_block(b, n)}, fresh);
    }
    case R::ContrDI1:
    case R::ContrDI2: {
      NdRule k = tag == R::ContrDI1 ? NdRule::CPlusI1 : NdRule::CPlusI2;
      NdPtr a = nd_to_front(nd::rule(k, {r0}, fresh, e->label.f), false, 1);
      return nd::contr(nd::rule(k, {a}, fresh, e->label.f), fresh);
    }
    case R::ContrSubI: {
      const NdPtr& dm = e->premises[1];
      NdPtr a = nd::rule(NdRule::CMinusI, {r0, dm}, fresh);
      NdPtr b = nd::rule(NdRule::CMinusI, {a, dm}, fresh);
      std::size_t n = psi_size(dm) + 1;
      return merge_blocks(b, {last_block(b, n, n), last_block(b, n)}, fresh);
    }
    case R::ContrSubE: {
      const NdPtr& dm = e->premises[1];
      NdPtr a = nd::rule(NdRule::CMinusE, {r0, dm}, fresh);
      // the second contracted slot follows the p-slot when there are terms
      a = nd_to_front(a, false, a->conclusion.typed() ? 1 : 0);
      NdPtr b = nd::rule(NdRule::CMinusE, {a, dm}, fresh);
      std::size_t n = psi_size(dm) - 1;
      return merge_blocks(b, {last_block(b, n, n), last_block(b, n)}, fresh);
    }
    case R::ContrHE: {
      const NdPtr& dm = e->premises[1];
      NdPtr a = nd::rule(NdRule::CHE, {r0, dm}, fresh);
      NdPtr b = nd::rule(NdRule::CHE, {a, dm}, fresh);
      std::size_t n = psi_size(dm);
      return merge_blocks(b, {last_block(b, n, n), last_block(b, n)}, fresh);
    }
    case R::WeakDE: return nd::weak_all(r0, shape(e->premises[1]->conclusion.psi), fresh);
    case R::WeakDI1:
    case R::WeakDI2: return nd::weak(r0, e->conclusion.psi.empty() ? Formula() : [&] {
        Fresh f;
        std::vector<const Judgment*> ps{&r->conclusion};
        return nd_infer(e->label, ps, f).psi[0].type;
      }(), fresh);
    case R::WeakSubI: {
      std::vector<Formula> ts{Formula::minus(r->conclusion.psi[0].type, e->premises[1]->conclusion.subject)};
      auto rest = shape(e->premises[1]->conclusion.psi);
      ts.insert(ts.end(), rest.begin(), rest.end());
      return nd::weak_all(r0, ts, fresh);
    }
    case R::WeakSubE: {
      auto ts = shape(e->premises[1]->conclusion.psi);
      ts.erase(ts.begin());
      return nd::weak_all(r0, ts, fresh);
    }
    case R::WeakHE: return nd::weak_all(r0, shape(e->premises[1]->conclusion.psi), fresh);
    default: break;
  }
  (void)typed_size;
  fail(ErrorKind::NotARedex, "no derivation-level contraction for " + std::string(redex_tag_name(tag)));
}

void redexes_rec(const NdPtr& p, NodePath& at, std::vector<DerivationRedex>& out) {
  for (std::size_t i = 0; i < p->premises.size(); ++i) {
    at.push_back(i);
    redexes_rec(p->premises[i], at, out);
    at.pop_back();
  }
  if (auto t = classify(p)) out.push_back({at, *t});
}

// Type multiset of the typed slots, plus the p-slot count.
bool same_shape(const Judgment& a, const Judgment& b) {
  if (a.linear != b.linear || a.subject != b.subject || a.var != b.var) return false;
  for (bool d : {true, false}) {
    auto x = shape(a.zone(d)), y = shape(b.zone(d));
    auto key = [](const Formula& f, const Formula& g) { return f.id() < g.id(); };
    std::sort(x.begin(), x.end(), key);
    std::sort(y.begin(), y.end(), key);
    if (x != y) return false;
  }
  return true;
}

}  // namespace

NdPtr node_at(const NdPtr& root, const NodePath& at) {
  NdPtr p = root;
  for (auto i : at) {
    if (i >= p->premises.size()) fail(ErrorKind::NotARedex, "node path leaves the derivation");
    p = p->premises[i];
  }
  return p;
}

namespace {

// The zone of `fresh_node` listed the way `old` lists its own: typed slots by
// the canonical position they came from, p-slots in order where old had them.
Zone relist(const Zone& stored, const Zone& old_canon, const Zone& new_canon) {
  auto typed_ordinals = [](const Zone& z) {
    std::vector<std::size_t> ord(z.size(), 0);
    std::size_t t = 0;
    for (std::size_t k = 0; k < z.size(); ++k)
      if (!z[k].is_p()) ord[k] = t++;
    return ord;
  };
  std::vector<const Slot*> typed, ps;
  for (auto& s : new_canon) (s.is_p() ? ps : typed).push_back(&s);
  const auto pi = stored_to_canon(stored, old_canon);
  const auto ord = typed_ordinals(old_canon);
  Zone out;
  std::size_t next_p = 0;
  for (std::size_t i = 0; i < stored.size(); ++i) {
    if (stored[i].is_p()) {
      if (next_p < ps.size()) out.push_back(*ps[next_p++]);
    } else {
      out.push_back(*typed.at(ord[pi[i]]));
    }
  }
  while (next_p < ps.size()) out.push_back(*ps[next_p++]);
  return out;
}

// Re-derive the path to `at` above a new subderivation whose typed slots are
// listed in the order of the one it replaces.
NdPtr rebuild(const NdPtr& root, const NodePath& at, std::size_t depth, const NdPtr& sub, Fresh& fresh) {
  if (depth == at.size()) return sub;
  std::vector<NdPtr> prems = root->premises;
  prems[at[depth]] = rebuild(prems[at[depth]], at, depth + 1, sub, fresh);
  NdPtr n = nd_make(root->label, std::move(prems), fresh);
  const Judgment old_canon = canonical(root);
  Judgment c = n->conclusion;
  for (bool d : {true, false}) {
    const std::size_t typed_old = shape(old_canon.zone(d)).size(), typed_new = shape(c.zone(d)).size();
    if (typed_old != typed_new) return conform(n, root->conclusion);
    c.zone(d) = relist(root->conclusion.zone(d), old_canon.zone(d), n->conclusion.zone(d));
  }
  return nd_relayout(n, std::move(c));
}

}  // namespace

NdPtr replace_at(const NdPtr& root, const NodePath& at, const NdPtr& sub, Fresh& fresh) {
  return rebuild(root, at, 0, conform(sub, node_at(root, at)->conclusion), fresh);
}

std::vector<DerivationRedex> derivation_redexes(const NdPtr& root) {
  std::vector<DerivationRedex> out;
  NodePath at;
  redexes_rec(root, at, out);
  return out;
}

NdPtr beta_derivation(const NdPtr& root, const NodePath& at, Fresh& fresh) {
  NdPtr e = node_at(root, at);
  auto tag = classify(e);
  if (!tag) {
    fail(ErrorKind::NotARedex, std::string("no redex at this node: ") + nd_rule_name(e->label.rule, true) +
                                   " is not applied directly to the matching introduction");
  }
  NdPtr c = contract(e, *tag, fresh);
  if (!same_shape(c->conclusion, e->conclusion)) {
    fail(ErrorKind::ShapeMismatch, "contractum " + show_judgment(c->conclusion) + " does not match " +
                                       show_judgment(e->conclusion));
  }
  // List the contractum like the judgment-level step lists the reduct, so
  // slots of one type keep their places.
  Judgment target = e->conclusion;
  std::size_t best = 0;
  for (auto& r : find_redexes(e->conclusion)) {
    if (r.tag != *tag) continue;
    Judgment j;
    try {
      j = beta_step(e->conclusion, r, fresh);
    } catch (const Error&) {
      continue;
    }
    std::size_t hits = 0;
    for (bool d : {true, false})
      for (auto& s : j.zone(d))
        for (auto& t : c->conclusion.zone(d))
          if (same_slot(s, t)) {
            ++hits;
            break;
          }
    if (hits > best) best = hits, target = j;
  }
  return rebuild(root, at, 0, conform(c, target), fresh);
}

std::optional<RedexTag> commute_tag(NdRule lower) {
  switch (lower) {
    case NdRule::CPlusI1:
    case NdRule::CPlusI2: return RedexTag::Commute1;
    case NdRule::CPlusE: return RedexTag::Commute2;
    case NdRule::CMinusI: return RedexTag::Commute3;
    case NdRule::CMinusE: return RedexTag::Commute4;
    case NdRule::LBotI: return RedexTag::Commute5;
    case NdRule::LSubI:
    case NdRule::LSubE: return RedexTag::Commute6;
    case NdRule::LParI:
    case NdRule::LParE: return RedexTag::Commute7;
    default: return std::nullopt;
  }
}

namespace {

[[noreturn]] void no_commute(const std::string& m) { fail(ErrorKind::NotACommute, m); }

// Rebuild `l` with premise k replaced by q, whose zone lists the slots in
// `first` before the others.
NdPtr apply_lower(const NdPtr& l, std::size_t k, const NdPtr& q, bool delta, const std::vector<std::size_t>& first,
                  Fresh& fresh) {
  std::vector<std::size_t> order = first;
  for (std::size_t i = 0; i < q->conclusion.zone(delta).size(); ++i)
    if (std::find(first.begin(), first.end(), i) == first.end()) order.push_back(i);
  std::vector<NdPtr> prems = l->premises;
  prems[k] = permute_zone(q, delta, order);
  return nd_make(l->label, std::move(prems), fresh);
}

// Position of `wanted` (a slot of premise k) in the stored conclusion of n.
std::size_t locate(const NdPtr& n, std::size_t k, bool delta, std::size_t wanted) {
  Traced t = trace_node(n);
  const auto& z = t.zone(delta);
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i].size() == 1 && *z[i].begin() == Src{k, delta, wanted}) return i;
  }
  no_commute("lost track of a slot while permuting");
}

NdPtr commute_at(const NdPtr& l, Fresh& fresh) {
  const NdRule lr = l->label.rule;
  if (!commute_tag(lr)) no_commute(std::string(nd_rule_name(lr, true)) + " has no commuting conversion");
  const std::size_t nprem = l->premises.size();
  // The premise whose last rule is permuted: the major, or for the rules that
  // also commute into their minor branches, the first minor with a proper rule.
  std::vector<std::size_t> candidates{0};
  if (lr == NdRule::CMinusI || lr == NdRule::LSubI || lr == NdRule::LParE) {
    for (std::size_t k = 1; k < nprem; ++k) candidates.push_back(k);
  }
  std::string why = "no rule above the active slots to permute with";
  for (std::size_t k : candidates) {
    const NdPtr& r = l->premises[k];
    if (r->premises.empty()) continue;
    Active la = nd_active(lr, k);
    try {
      Traced tr = trace_node(r);
      std::vector<const Judgment*> ps;
      for (auto& q : r->premises) ps.push_back(&q->conclusion);
      Fresh f0;
      Judgment canon = nd_infer(r->label, ps, f0);
      auto map = stored_to_canon(r->conclusion.zone(la.delta), canon.zone(la.delta));
      std::vector<std::set<Src>> src;
      for (std::size_t s = 0; s < la.count; ++s) src.push_back(tr.zone(la.delta)[map[s]]);

      // Into both minors of a + elimination: case-of-case and its relatives.
      if (r->label.rule == NdRule::CPlusE && la.count > 0) {
        std::vector<std::size_t> js;
        for (auto& s : src) {
          std::optional<std::size_t> j;
          for (auto& [i, d, q] : s)
            if (i == 1 && !d) j = q;
          if (!j || s.size() != 3 || !s.count(Src{0, false, 0}) || !s.count(Src{2, false, *j})) {
            js.clear();
            break;
          }
          js.push_back(*j);
        }
        if (js.size() == la.count) {
          NdPtr m1 = apply_lower(l, k, r->premises[1], false, js, fresh);
          NdPtr m2 = apply_lower(l, k, r->premises[2], false, js, fresh);
          return nd::rule(NdRule::CPlusE, {r->premises[0], m1, m2}, fresh);
        }
      }

      // Otherwise every active slot must be a passive copy from one premise of r.
      std::optional<std::size_t> from;
      std::vector<std::size_t> js;
      for (auto& s : src) {
        if (s.size() != 1) throw Error(ErrorKind::NotACommute, "an active slot is built by the rule above");
        auto [i, d, q] = *s.begin();
        Active ra = nd_active(r->label.rule, i);
        if (d != la.delta) throw Error(ErrorKind::NotACommute, "an active slot changes zone above");
        if (d == ra.delta && q < ra.count) throw Error(ErrorKind::NotACommute, "an active slot is consumed above");
        if (from && *from != i) throw Error(ErrorKind::NotACommute, "the active slots come from different premises");
        from = i;
        js.push_back(q);
      }
      const std::size_t i = from.value_or(0);
      const NdPtr& q = r->premises[i];
      NdPtr lifted = apply_lower(l, k, q, la.delta, js, fresh);
      // Put r's own active slots back in front.
      Active ra = nd_active(r->label.rule, i);
      std::vector<std::size_t> order;
      for (std::size_t a = 0; a < ra.count; ++a) {
        // position of slot a of q inside the premise handed to l
        std::vector<std::size_t> perm = js;
        for (std::size_t x = 0; x < q->conclusion.zone(la.delta).size(); ++x)
          if (std::find(js.begin(), js.end(), x) == js.end()) perm.push_back(x);
        std::size_t pos = a;
        if (ra.delta == la.delta) pos = static_cast<std::size_t>(std::find(perm.begin(), perm.end(), a) - perm.begin());
        order.push_back(locate(lifted, k, ra.delta, pos));
      }
      std::vector<std::size_t> full = order;
      for (std::size_t x = 0; x < lifted->conclusion.zone(ra.delta).size(); ++x)
        if (std::find(order.begin(), order.end(), x) == order.end()) full.push_back(x);
      lifted = permute_zone(lifted, ra.delta, full);
      std::vector<NdPtr> rp = r->premises;
      rp[i] = lifted;
      return nd_make(r->label, std::move(rp), fresh);
    } catch (const Error& e) {
      why = e.what();
    }
  }
  no_commute(std::string(nd_rule_name(lr, true)) + " does not commute here: " + why);
}

}  // namespace

NdPtr commute_step(const NdPtr& root, const NodePath& at, Fresh& fresh) {
  NdPtr l = node_at(root, at);
  NdPtr c = commute_at(l, fresh);
  if (!same_shape(c->conclusion, l->conclusion)) {
    no_commute("the permuted derivation ends in " + show_judgment(c->conclusion) + " instead of " +
               show_judgment(l->conclusion));
  }
  return replace_at(root, at, c, fresh);
}

}  // namespace dlnl
