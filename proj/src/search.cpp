#include "dlnl/search.hpp"

#include <set>
#include <unordered_map>

#include "dlnl/error.hpp"

namespace dlnl {

namespace {

Context erase_at(const Context& c, std::size_t i) {
  Context out = c;
  out.erase(out.begin() + static_cast<long>(i));
  return out;
}

Context cons(const Formula& f, const Context& c) {
  Context out{f};
  out.insert(out.end(), c.begin(), c.end());
  return out;
}

Context cat(Context a, const Context& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// Indices of the distinct formulas of c, first occurrence each.
std::vector<std::size_t> distinct(const Context& c) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    bool seen = false;
    for (std::size_t j : out) seen = seen || c[j] == c[i];
    if (!seen) out.push_back(i);
  }
  return out;
}

// Sub-multisets of c as bitmasks, skipping masks that pick a later copy of a
// formula while leaving out an earlier copy.
std::vector<unsigned> splits(const Context& c) {
  std::vector<unsigned> out;
  const unsigned n = static_cast<unsigned>(c.size());
  for (unsigned m = 0; m < (1u << n); ++m) {
    bool canonical = true;
    for (unsigned i = 0; i < n && canonical; ++i) {
      for (unsigned j = i + 1; j < n && canonical; ++j) {
        if (c[i] == c[j] && !(m & (1u << i)) && (m & (1u << j))) canonical = false;
      }
    }
    if (canonical) out.push_back(m);
  }
  return out;
}

struct Result {
  std::optional<ProofPtr> proof;
  bool pruned = false;  // a loop check cut some branch below
};

class Searcher {
 public:
  explicit Searcher(SearchStats* st) : stats_(st) {}

  Result prove(const Sequent& raw, int budget, int contractions) {
    Sequent s = normalized(raw);
    if (stats_) stats_->nodes++;
    std::string key = print_sequent(s) + "#" + std::to_string(budget) + "#" + std::to_string(contractions);
    if (auto it = memo_.find(key); it != memo_.end()) {
      if (stats_) stats_->memo_hits++;
      return Result{it->second, false};
    }
    std::string loop_key = print_sequent(s);
    if (on_branch_.count(loop_key)) return Result{std::nullopt, true};
    on_branch_.insert(loop_key);
    Result r = attempt(s, budget, contractions);
    on_branch_.erase(loop_key);
    if (r.proof) {
      r.proof = arrange(*r.proof, s);
      memo_[key] = r.proof;
    } else if (!r.pruned) {
      memo_[key] = std::nullopt;
    }
    return r;
  }

 private:
  // The sub-result is arranged so its zones read as `want`.
  std::optional<ProofPtr> sub(const Sequent& want, int budget, int contractions, bool& pruned) {
    Result r = prove(want, budget, contractions);
    pruned = pruned || r.pruned;
    if (!r.proof) return std::nullopt;
    return arrange(*r.proof, want);
  }

  static ProofPtr weaken_all(ProofPtr p, const Context& extra) {
    for (auto& f : extra) p = p->conclusion.linear ? mk::wk(p, f) : mk::wk_r(p, f);
    return p;
  }

  Result attempt(const Sequent& s, int budget, int contractions) {
    bool pruned = false;
    const Formula& x = s.subject;

    // axioms, with weakening absorbed
    if (!s.linear) {
      if (x.conn() == Conn::Zero) return {mk::zero_l(s.psi), false};
      for (std::size_t i = 0; i < s.psi.size(); ++i) {
        if (s.psi[i] == x) return {weaken_all(mk::c_id(x), erase_at(s.psi, i)), false};
      }
    } else {
      if (s.delta.size() == 1 && s.delta[0] == x) return {weaken_all(mk::l_id(x), s.psi), false};
      if (s.delta.empty() && x.conn() == Conn::Bot) return {weaken_all(mk::bot_l(), s.psi), false};
    }
    if (budget == 0) return {std::nullopt, false};
    const int b = budget - 1;

    // invertible rules
    if (!s.linear) {
      if (x.conn() == Conn::Minus) {
        if (auto q = sub(Sequent::C(x.left(), cons(x.right(), s.psi)), b, contractions, pruned)) {
          return {mk::minus_l(*q), false};
        }
        return {std::nullopt, pruned};
      }
      if (x.conn() == Conn::H) {
        if (auto q = sub(Sequent::L(x.body(), {}, s.psi), b, contractions, pruned)) return {mk::h_l(*q), false};
        return {std::nullopt, pruned};
      }
      if (x.conn() == Conn::Plus) {
        auto q1 = sub(Sequent::C(x.left(), s.psi), b, contractions, pruned);
        if (!q1) return {std::nullopt, pruned};
        auto q2 = sub(Sequent::C(x.right(), s.psi), b, contractions, pruned);
        if (!q2) return {std::nullopt, pruned};
        return {mk::plus_l(*q1, *q2), false};
      }
    } else {
      for (std::size_t i = 0; i < s.delta.size(); ++i) {
        const Formula& f = s.delta[i];
        if (f.conn() == Conn::Bot) {
          Sequent p = s;
          p.delta = erase_at(s.delta, i);
          if (auto q = sub(p, b, contractions, pruned)) return {mk::bot_r(*q), false};
          return {std::nullopt, pruned};
        }
        if (f.conn() == Conn::Par) {
          Sequent p = s;
          p.delta = cons(f.left(), cons(f.right(), erase_at(s.delta, i)));
          if (auto q = sub(p, b, contractions, pruned)) return {mk::par_r(*q), false};
          return {std::nullopt, pruned};
        }
      }
      if (x.conn() == Conn::CoImp) {
        if (auto q = sub(Sequent::L(x.left(), cons(x.right(), s.delta), s.psi), b, contractions, pruned)) {
          return {mk::coimp_l(*q), false};
        }
        return {std::nullopt, pruned};
      }
      if (x.conn() == Conn::J && s.delta.empty()) {
        if (auto q = sub(Sequent::C(x.body(), s.psi), b, contractions, pruned)) return {mk::j_l(*q), false};
        return {std::nullopt, pruned};
      }
    }

    // left rule with a context split
    if (s.linear && x.conn() == Conn::Par) {
      for (unsigned m : splits(s.delta)) {
        Context d1, d2;
        for (std::size_t i = 0; i < s.delta.size(); ++i) (m & (1u << i) ? d1 : d2).push_back(s.delta[i]);
        auto q1 = sub(Sequent::L(x.left(), d1, s.psi), b, contractions, pruned);
        if (!q1) continue;
        auto q2 = sub(Sequent::L(x.right(), d2, s.psi), b, contractions, pruned);
        if (!q2) continue;
        return {mk::par_l(*q1, *q2), false};
      }
    }

    // right rules, each optionally keeping a copy of the principal formula
    for (int keep = 0; keep <= (contractions > 0 ? 1 : 0); ++keep) {
      const int c = contractions - keep;
      const int bb = b - keep;
      if (bb < 0) break;
      for (std::size_t i : distinct(s.psi)) {
        const Formula& f = s.psi[i];
        Context rest = keep ? s.psi : erase_at(s.psi, i);
        auto finish = [&](ProofPtr p) -> ProofPtr {
          if (!keep) return p;
          Sequent w = s;
          w.psi = cons(f, cons(f, erase_at(s.psi, i)));
          p = arrange(p, w);
          return p->conclusion.linear ? mk::ctr(p) : mk::cr_r(p);
        };
        auto with_subject = [&](const Sequent& base, Context psi) {
          Sequent p = base;
          p.psi = std::move(psi);
          return p;
        };
        if (f.conn() == Conn::Plus) {
          if (auto q = sub(with_subject(s, cons(f.left(), rest)), bb, c, pruned)) {
            ProofPtr r = s.linear ? mk::l_plus_r1(*q, f.right()) : mk::plus_r1(*q, f.right());
            return {finish(r), false};
          }
          if (auto q = sub(with_subject(s, cons(f.right(), rest)), bb, c, pruned)) {
            ProofPtr r = s.linear ? mk::l_plus_r2(*q, f.left()) : mk::plus_r2(*q, f.left());
            return {finish(r), false};
          }
        }
        if (f.conn() == Conn::Minus) {
          auto q1 = sub(with_subject(s, cons(f.left(), rest)), bb, c, pruned);
          if (q1) {
            if (auto q2 = sub(Sequent::C(f.right(), rest), bb, c, pruned)) {
              ProofPtr r = s.linear ? mk::c_sub_r(*q1, *q2) : mk::minus_r(*q1, *q2);
              // the rest appears twice; contract back to one copy
              Sequent want = s;
              if (keep) want.psi = cons(f, s.psi);
              return {finish(arrange(r, want)), false};
            }
          }
        }
        if (s.linear && f.conn() == Conn::H) {
          Sequent p = s;
          p.delta = cons(f.body(), s.delta);
          p.psi = rest;
          if (auto q = sub(p, bb, c, pruned)) return {finish(mk::h_r(*q)), false};
        }
      }
    }

    if (s.linear) {
      for (std::size_t i : distinct(s.delta)) {
        const Formula& f = s.delta[i];
        Context rest = erase_at(s.delta, i);
        if (f.conn() == Conn::J) {
          Sequent p = s;
          p.delta = rest;
          p.psi = cons(f.body(), s.psi);
          if (auto q = sub(p, b, contractions, pruned)) return {mk::j_r(*q), false};
        }
        if (f.conn() == Conn::CoImp) {
          for (unsigned m : splits(rest)) {
            Context d1, d2;
            for (std::size_t k = 0; k < rest.size(); ++k) (m & (1u << k) ? d1 : d2).push_back(rest[k]);
            auto q1 = sub(Sequent::L(x, cons(f.left(), d1), s.psi), b, contractions, pruned);
            if (!q1) continue;
            auto q2 = sub(Sequent::L(f.right(), d2, s.psi), b, contractions, pruned);
            if (!q2) continue;
            Sequent want = s;
            want.delta = cons(f, cat(d1, d2));
            return {arrange(mk::coimp_r(*q1, *q2), want), false};
          }
        }
      }
    }
    return {std::nullopt, pruned};
  }

  SearchStats* stats_;
  std::unordered_map<std::string, std::optional<ProofPtr>> memo_;
  std::set<std::string> on_branch_;
};

}  // namespace

std::optional<ProofPtr> search(const Sequent& s, int bound, SearchStats* stats) {
  if (bound < 1) fail(ErrorKind::Usage, "search bound must be at least 1");
  Searcher sr(stats);
  Result r = sr.prove(s, bound, static_cast<int>(s.psi.size() + s.delta.size()) + 2);
  if (!r.proof) return std::nullopt;
  return arrange(*r.proof, s);
}

}  // namespace dlnl
