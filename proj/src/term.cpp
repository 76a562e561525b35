#include "dlnl/term.hpp"

#include <cctype>
#include <map>
#include <optional>

#include "dlnl/error.hpp"

namespace dlnl {

namespace {

Term mk(TK k, std::string x = {}, std::string y = {}, Term a = nullptr, Term b = nullptr, Term c = nullptr) {
  // false lifts over the multiset like the other eliminations of an empty slot
  if (k == TK::False && a && a->kind == TK::Eps) return a;
  return std::make_shared<const TermNode>(TermNode{k, std::move(x), std::move(y), std::move(a), std::move(b), std::move(c)});
}

}  // namespace

namespace tm {
Term var(std::string x) { return mk(TK::Var, std::move(x)); }
Term eps() {
  static const Term e = mk(TK::Eps);
  return e;
}
Term dot(const Term& a, const Term& b) {
  if (a->kind == TK::Eps) return b;
  if (b->kind == TK::Eps) return a;
  return mk(TK::Dot, {}, {}, a, b);
}
Term dot_raw(const Term& a, const Term& b) { return mk(TK::Dot, {}, {}, a, b); }
Term false_(const Term& t) { return mk(TK::False, {}, {}, t); }
Term app(std::string binder, const Term& t) { return mk(TK::App, std::move(binder), {}, t); }
Term mkc(const Term& t, std::string binder) { return mk(TK::Mkc, std::move(binder), {}, t); }
Term inl(const Term& t) { return mk(TK::Inl, {}, {}, t); }
Term inr(const Term& t) { return mk(TK::Inr, {}, {}, t); }
Term case_(const Term& t, std::string x, const Term& t1, std::string y, const Term& t2) {
  return mk(TK::Case, std::move(x), std::move(y), t, t1, t2);
}
Term h(const Term& e) { return mk(TK::HWrap, {}, {}, e); }
Term let_j(std::string x, const Term& e, const Term& t) { return mk(TK::LetJ, std::move(x), {}, e, t); }
Term let_h(std::string x, const Term& t1, const Term& t2) { return mk(TK::LetH, std::move(x), {}, t1, t2); }
Term postp(std::string x, const Term& t1, const Term& t2) { return mk(TK::Postp, std::move(x), {}, t1, t2); }
Term connect_bot(const Term& e) { return mk(TK::ConnectBot, {}, {}, e); }
Term postp_bot(const Term& e) { return mk(TK::PostpBot, {}, {}, e); }
Term par(const Term& e1, const Term& e2) { return mk(TK::ParPair, {}, {}, e1, e2); }
Term casel(const Term& e) { return mk(TK::Casel, {}, {}, e); }
Term caser(const Term& e) { return mk(TK::Caser, {}, {}, e); }
Term j(const Term& t) { return mk(TK::JWrap, {}, {}, t); }
}  // namespace tm

std::string Fresh::operator()(const std::string& base) {
  std::string stem = base.substr(0, base.find('\''));
  return stem + "'" + std::to_string(++next);
}

namespace {

void fv_into(const Term& t, std::set<std::string>& out) {
  auto without = [&](const Term& body, const std::string& x) {
    std::set<std::string> s;
    fv_into(body, s);
    s.erase(x);
    out.insert(s.begin(), s.end());
  };
  switch (t->kind) {
    case TK::Var: out.insert(t->x); return;
    case TK::Eps: return;
    case TK::Case:
      fv_into(t->a, out);
      without(t->b, t->x);
      without(t->c, t->y);
      return;
    case TK::LetJ:
    case TK::LetH:
      fv_into(t->a, out);
      without(t->b, t->x);
      return;
    case TK::Postp:
      without(t->a, t->x);
      fv_into(t->b, out);
      return;
    default:
      for (const Term* c : {&t->a, &t->b, &t->c})
        if (*c) fv_into(*c, out);
  }
}

}  // namespace

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  fv_into(t, out);
  return out;
}

bool is_p_term(const Term& t) { return t->kind == TK::Postp || t->kind == TK::PostpBot; }

bool is_p_normal(const Term& t) {
  for (const Term* c : {&t->a, &t->b, &t->c}) {
    if (!*c) continue;
    if (is_p_term(*c) || !is_p_normal(*c)) return false;
  }
  return true;
}

void binder_names(const Term& t, std::set<std::string>& mkc_binders, std::set<std::string>& app_binders) {
  if (t->kind == TK::Mkc || t->kind == TK::Postp) mkc_binders.insert(t->x);
  if (t->kind == TK::App) app_binders.insert(t->x);
  for (const Term* c : {&t->a, &t->b, &t->c})
    if (*c) binder_names(*c, mkc_binders, app_binders);
}

void all_names(const Term& t, std::set<std::string>& out) {
  if (!t->x.empty()) out.insert(t->x);
  if (!t->y.empty()) out.insert(t->y);
  for (const Term* c : {&t->a, &t->b, &t->c})
    if (*c) all_names(*c, out);
}

std::vector<Term> dot_components(const Term& t) {
  std::vector<Term> out;
  std::vector<Term> stack{t};
  while (!stack.empty()) {
    Term u = stack.back();
    stack.pop_back();
    if (u->kind == TK::Dot) {
      stack.push_back(u->b);
      stack.push_back(u->a);
    } else if (u->kind != TK::Eps) {
      out.push_back(u);
    }
  }
  return out;
}

Term dot_all(const std::vector<Term>& ts) {
  Term out = tm::eps();
  for (auto& t : ts) out = tm::dot(out, t);
  return out;
}

namespace {

using Env = std::map<std::string, int>;

bool eq(const Term& a, const Term& b, Env& ea, Env& eb, int depth);

bool eq_under(const Term& a, const std::string& xa, const Term& b, const std::string& xb, Env& ea, Env& eb, int depth) {
  auto sa = ea.find(xa) != ea.end() ? std::optional<int>(ea[xa]) : std::nullopt;
  auto sb = eb.find(xb) != eb.end() ? std::optional<int>(eb[xb]) : std::nullopt;
  ea[xa] = depth;
  eb[xb] = depth;
  bool r = eq(a, b, ea, eb, depth + 1);
  if (sa) ea[xa] = *sa; else ea.erase(xa);
  if (sb) eb[xb] = *sb; else eb.erase(xb);
  return r;
}

bool eq(const Term& a, const Term& b, Env& ea, Env& eb, int depth) {
  if (a->kind == TK::Dot || b->kind == TK::Dot) {
    auto ca = dot_components(a), cb = dot_components(b);
    if (ca.size() != cb.size()) return false;
    if (ca.size() < 2) return ca.empty() || eq(ca[0], cb[0], ea, eb, depth);
    std::vector<bool> used(cb.size(), false);
    for (auto& x : ca) {
      bool found = false;
      for (std::size_t i = 0; i < cb.size() && !found; ++i) {
        if (!used[i] && eq(x, cb[i], ea, eb, depth)) used[i] = found = true;
      }
      if (!found) return false;
    }
    return true;
  }
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TK::Var: {
      auto ia = ea.find(a->x), ib = eb.find(b->x);
      if (ia == ea.end() && ib == eb.end()) return a->x == b->x;
      return ia != ea.end() && ib != eb.end() && ia->second == ib->second;
    }
    case TK::Eps: return true;
    case TK::Case:
      return eq(a->a, b->a, ea, eb, depth) && eq_under(a->b, a->x, b->b, b->x, ea, eb, depth) &&
             eq_under(a->c, a->y, b->c, b->y, ea, eb, depth);
    case TK::LetJ:
    case TK::LetH:
      return eq(a->a, b->a, ea, eb, depth) && eq_under(a->b, a->x, b->b, b->x, ea, eb, depth);
    case TK::Postp:
      return a->x == b->x && eq_under(a->a, a->x, b->a, b->x, ea, eb, depth) && eq(a->b, b->b, ea, eb, depth);
    case TK::App:
    case TK::Mkc:
      return a->x == b->x && eq(a->a, b->a, ea, eb, depth);
    default:
      for (auto [ca, cb] : {std::pair{&a->a, &b->a}, std::pair{&a->b, &b->b}, std::pair{&a->c, &b->c}}) {
        if (bool(*ca) != bool(*cb)) return false;
        if (*ca && !eq(*ca, *cb, ea, eb, depth)) return false;
      }
      return true;
  }
}

}  // namespace

bool alpha_eq(const Term& a, const Term& b) {
  Env ea, eb;
  return eq(a, b, ea, eb, 0);
}

namespace {

// Substitute under a local binder, renaming it when it would capture.
std::pair<std::string, Term> under(const Term& s, const std::set<std::string>& fvs, const std::string& x,
                                   const std::string& binder, const Term& body, Fresh& fresh) {
  if (binder == x) return {binder, body};
  std::set<std::string> fb = free_vars(body);
  if (!fb.count(x)) return {binder, body};
  if (fvs.count(binder)) {
    std::string b2 = fresh(binder);
    Term renamed = subst1(tm::var(b2), binder, body, fresh);
    return {b2, subst1(s, x, renamed, fresh)};
  }
  return {binder, subst1(s, x, body, fresh)};
}

}  // namespace

Term subst1(const Term& s, const std::string& x, const Term& t, Fresh& fresh) {
  const std::set<std::string> fvs = free_vars(s);
  switch (t->kind) {
    case TK::Var: return t->x == x ? s : t;
    case TK::Eps: return t;
    case TK::Case: {
      auto [x1, b1] = under(s, fvs, x, t->x, t->b, fresh);
      auto [y1, b2] = under(s, fvs, x, t->y, t->c, fresh);
      return tm::case_(subst1(s, x, t->a, fresh), x1, b1, y1, b2);
    }
    case TK::LetJ:
    case TK::LetH: {
      auto [x1, b1] = under(s, fvs, x, t->x, t->b, fresh);
      return mk(t->kind, x1, {}, subst1(s, x, t->a, fresh), b1);
    }
    case TK::Postp: {
      auto [x1, b1] = under(s, fvs, x, t->x, t->a, fresh);
      return tm::postp(x1, b1, subst1(s, x, t->b, fresh));
    }
    case TK::Mkc: {
      std::string y = fvs.count(t->x) ? fresh(t->x) : t->x;
      return tm::mkc(subst1(s, x, t->a, fresh), y);
    }
    case TK::Dot: return tm::dot_raw(subst1(s, x, t->a, fresh), subst1(s, x, t->b, fresh));
    default:
      return mk(t->kind, t->x, t->y, t->a ? subst1(s, x, t->a, fresh) : nullptr,
                t->b ? subst1(s, x, t->b, fresh) : nullptr, t->c ? subst1(s, x, t->c, fresh) : nullptr);
  }
}

Term subst(const Term& payload, const std::string& x, const Term& target, Fresh& fresh) {
  auto comps = dot_components(payload);
  if (comps.size() == 1) return subst1(comps[0], x, target, fresh);
  std::vector<Term> parts;
  for (auto& c : comps) parts.push_back(subst1(c, x, target, fresh));
  return dot_all(parts);
}

std::vector<Term> subst_parallel(const Term& payload, const std::string& x, const Term& p, Fresh& fresh) {
  std::vector<Term> out;
  for (auto& c : dot_components(payload)) out.push_back(subst1(c, x, p, fresh));
  return out;
}

Term subst_app(const Term& t, const std::string& binder, const std::function<Term(const Term&)>& f) {
  if (t->kind == TK::App && t->x == binder) return f(t->a);
  if (!t->a && !t->b && !t->c) return t;
  Term a = t->a ? subst_app(t->a, binder, f) : nullptr;
  Term b = t->b ? subst_app(t->b, binder, f) : nullptr;
  Term c = t->c ? subst_app(t->c, binder, f) : nullptr;
  if (a == t->a && b == t->b && c == t->c) return t;
  if (t->kind == TK::Dot) return tm::dot(a, b);
  return mk(t->kind, t->x, t->y, a, b, c);
}

Term rename_binder(const Term& t, const std::string& from, const std::string& to) {
  if (!t->a && !t->b && !t->c) return t;
  Term a = t->a ? rename_binder(t->a, from, to) : nullptr;
  Term b = t->b ? rename_binder(t->b, from, to) : nullptr;
  Term c = t->c ? rename_binder(t->c, from, to) : nullptr;
  std::string x = t->x;
  if ((t->kind == TK::Mkc || t->kind == TK::App || t->kind == TK::Postp) && x == from) x = to;
  if (t->kind == TK::Postp && t->x == from) {
    Fresh unused;
    a = subst1(tm::var(to), from, a, unused);
  }
  return mk(t->kind, x, t->y, a, b, c);
}

Term with_children(const Term& t, Term a, Term b, Term c) {
  if (a == t->a && b == t->b && c == t->c) return t;
  if (t->kind == TK::Dot) return tm::dot(a, b);
  return mk(t->kind, t->x, t->y, std::move(a), std::move(b), std::move(c));
}

Term rewrite(const Term& t, const std::function<Term(const Term&)>& f) {
  Term a = t->a ? rewrite(t->a, f) : nullptr;
  Term b = t->b ? rewrite(t->b, f) : nullptr;
  Term c = t->c ? rewrite(t->c, f) : nullptr;
  Term u = with_children(t, a, b, c);
  Term r = f(u);
  return r ? r : u;
}

std::size_t term_size(const Term& t) {
  std::size_t n = 1;
  for (const Term* c : {&t->a, &t->b, &t->c})
    if (*c) n += term_size(*c);
  return n;
}

std::string print_term(const Term& t) {
  auto p = [](const Term& u) { return print_term(u); };
  switch (t->kind) {
    case TK::Var: return t->x;
    case TK::Eps: return "eps";
    case TK::Dot: return "(dot " + p(t->a) + " " + p(t->b) + ")";
    case TK::False: return "(false " + p(t->a) + ")";
    case TK::App: return "(app " + t->x + " " + p(t->a) + ")";
    case TK::Mkc: return "(mkc " + p(t->a) + " " + t->x + ")";
    case TK::Inl: return "(inl " + p(t->a) + ")";
    case TK::Inr: return "(inr " + p(t->a) + ")";
    case TK::Case:
      return "(case " + p(t->a) + " (" + t->x + " " + p(t->b) + ") (" + t->y + " " + p(t->c) + "))";
    case TK::HWrap: return "(h " + p(t->a) + ")";
    case TK::LetJ: return "(letj " + t->x + " " + p(t->a) + " " + p(t->b) + ")";
    case TK::LetH: return "(leth " + t->x + " " + p(t->a) + " " + p(t->b) + ")";
    case TK::Postp: return "(postp (" + t->x + " " + p(t->a) + ") " + p(t->b) + ")";
    case TK::ConnectBot: return "(connect-bot " + p(t->a) + ")";
    case TK::PostpBot: return "(postp-bot " + p(t->a) + ")";
    case TK::ParPair: return "(par " + p(t->a) + " " + p(t->b) + ")";
    case TK::Casel: return "(casel " + p(t->a) + ")";
    case TK::Caser: return "(caser " + p(t->a) + ")";
    case TK::JWrap: return "(j " + p(t->a) + ")";
  }
  return "?";
}

namespace {

const std::map<std::string, TK, std::less<>>& heads() {
  static const std::map<std::string, TK, std::less<>> m{
      {"dot", TK::Dot},       {"false", TK::False},    {"app", TK::App},          {"mkc", TK::Mkc},
      {"inl", TK::Inl},       {"inr", TK::Inr},        {"case", TK::Case},        {"h", TK::HWrap},
      {"letj", TK::LetJ},     {"leth", TK::LetH},      {"postp", TK::Postp},      {"connect-bot", TK::ConnectBot},
      {"postp-bot", TK::PostpBot}, {"par", TK::ParPair}, {"casel", TK::Casel},    {"caser", TK::Caser},
      {"j", TK::JWrap},
  };
  return m;
}

std::string name_of(const Sexp& e) {
  if (e.is_list || e.atom.empty() || e.atom == "eps" || heads().count(e.atom)) sexp_error(e, "expected a variable name");
  for (char c : e.atom) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '-'))
      sexp_error(e, "bad variable name '" + e.atom + "'");
  }
  return e.atom;
}

std::pair<std::string, Term> bound(const Sexp& e) {
  if (!e.is_list || e.items.size() != 2) sexp_error(e, "expected (variable term)");
  return {name_of(e.items[0]), term_from_sexp(e.items[1])};
}

}  // namespace

Term term_from_sexp(const Sexp& e) {
  if (!e.is_list) {
    if (e.atom == "eps") return tm::eps();
    return tm::var(name_of(e));
  }
  auto it = heads().find(e.head());
  if (it == heads().end()) sexp_error(e, "unknown term former");
  auto arity = [&](std::size_t n) {
    if (e.items.size() != n + 1) sexp_error(e, "'" + it->first + "' expects " + std::to_string(n) + " argument(s)");
  };
  auto sub = [&](std::size_t i) { return term_from_sexp(e.items[i]); };
  switch (it->second) {
    case TK::Dot: arity(2); return tm::dot_raw(sub(1), sub(2));
    case TK::App: arity(2); return tm::app(name_of(e.items[1]), sub(2));
    case TK::Mkc: arity(2); return tm::mkc(sub(1), name_of(e.items[2]));
    case TK::Case: {
      arity(3);
      auto [x, t1] = bound(e.items[2]);
      auto [y, t2] = bound(e.items[3]);
      return tm::case_(sub(1), x, t1, y, t2);
    }
    case TK::LetJ: arity(3); return tm::let_j(name_of(e.items[1]), sub(2), sub(3));
    case TK::LetH: arity(3); return tm::let_h(name_of(e.items[1]), sub(2), sub(3));
    case TK::Postp: {
      arity(2);
      auto [x, t1] = bound(e.items[1]);
      return tm::postp(x, t1, sub(2));
    }
    case TK::ParPair: arity(2); return tm::par(sub(1), sub(2));
    default: arity(1); return mk(it->second, {}, {}, sub(1));
  }
}

Term parse_term(std::string_view src) { return term_from_sexp(read_one_sexp(src)); }

}  // namespace dlnl
