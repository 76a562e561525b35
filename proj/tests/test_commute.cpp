#include <gtest/gtest.h>

#include <map>

#include "dlnl/error.hpp"
#include "dlnl/reduction.hpp"
#include "support/generators.hpp"

using namespace dlnl;

namespace {

Judgment J(const char* s) { return parse_judgment(s); }

Judgment step(const Judgment& j, RedexTag tag) {
  for (auto& r : find_redexes(j))
    if (r.tag == tag) {
      Fresh f;
      return beta_step(j, r, f);
    }
  throw Error(ErrorKind::NotARedex, "no redex");
}

void paths(const NdPtr& p, NodePath& at, std::vector<NodePath>& out) {
  out.push_back(at);
  for (std::size_t i = 0; i < p->premises.size(); ++i) {
    at.push_back(i);
    paths(p->premises[i], at, out);
    at.pop_back();
  }
}

std::vector<NodePath> all_paths(const NdPtr& p) {
  std::vector<NodePath> out;
  NodePath at;
  paths(p, at, out);
  return out;
}

// Rules whose conclusion wraps the premise slots in a term context (case,
// let, false); moving a rule across one changes the term only up to the
// equations that equate the two placements.
bool forms_context(NdRule r) {
  switch (r) {
    case NdRule::CPlusE:
    case NdRule::CHE:
    case NdRule::CZeroE:
    case NdRule::LHE:
    case NdRule::LJE: return true;
    default: return false;
  }
}

bool above_context(const NdPtr& n) {
  for (auto& q : n->premises)
    if (forms_context(q->label.rule)) return true;
  return false;
}

}  // namespace

TEST(CaseOfCase, PushesTheOuterCaseIntoBothBranches) {
  Judgment j = J("(judgC x (+ a b) (ctx (: (case (case x (y (inr y)) (z (inl z))) (u u) (v v)) a)))");
  Judgment got = step(j, RedexTag::Commute2);
  Judgment want = J(
      "(judgC x (+ a b) (ctx (: (case x (y (case (inr y) (u u) (v v))) (z (case (inl z) (u u) (v v)))) a)))");
  EXPECT_TRUE(same_judgment(got, want)) << show_judgment(got);
}

TEST(CaseOfCase, FollowUpsReduceEachBranch) {
  Judgment j = J("(judgC x (+ a b) (ctx (: (case (case x (y (inr y)) (z (inl z))) (u u) (v v)) a)))");
  Judgment c = step(j, RedexTag::Commute2);
  // the inr branch first (innermost-leftmost), then the inl one
  Judgment r1 = step(c, RedexTag::CoprodR);
  EXPECT_TRUE(same_judgment(r1, J("(judgC x (+ a b) (ctx (: (case x (y y) (z (case (inl z) (u u) (v v)))) a)))")))
      << show_judgment(r1);
  Judgment r2 = step(r1, RedexTag::CoprodL);
  EXPECT_TRUE(same_judgment(r2, J("(judgC x (+ a b) (ctx (: (case x (y y) (z z)) a)))"))) << show_judgment(r2);
  Fresh f;
  EXPECT_TRUE(same_judgment(normalize(j, 10, f).result, r2));
}

TEST(CaseOfCase, CaptureIsAvoided) {
  // the inner binder y is free in the outer branches
  Judgment j = J("(judgC x (+ a b) (ctx (: (case (case x (y y) (z z)) (u (dot u y)) (v v)) a)))");
  Judgment got = step(j, RedexTag::Commute2);
  const Term& t = got.psi[0].term;
  ASSERT_EQ(t->kind, TK::Case);
  EXPECT_NE(t->x, "y");
  EXPECT_TRUE(free_vars(t).count("y"));
}

TEST(CommutingConversions, OnlyCaseOfCaseIsATermStep) {
  Judgment j = J("(judgC x a (ctx (: (inl x) (+ a b))))");
  for (auto t : {RedexTag::Commute1, RedexTag::Commute3, RedexTag::Commute7}) {
    RedexLocator loc;
    loc.tag = t;
    Fresh f;
    try {
      beta_step(j, loc, f);
      ADD_FAILURE() << redex_tag_name(t);
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::NotACommute);
    }
  }
}

// Every permutation the derivation level accepts keeps the typing and the
// subject. Apart from case-of-case, and moves across a term context, the
// terms do not change.
TEST(CommutingConversions, RandomDerivationsKeepTypingAndTerms) {
  gen::Rng r(77);
  std::map<RedexTag, int> seen;
  int steps = 0;
  for (int i = 0; i < 1200; ++i) {
    Fresh fresh;
    gen::Atoms at = gen::two_atoms(r);
    NdPtr p = gen::typed_proof(r, 3, at, fresh);
    Judgment before = check_typing(p);
    for (auto& path : all_paths(p)) {
      auto tag = commute_tag(node_at(p, path)->label.rule);
      if (!tag) continue;
      NdPtr q;
      try {
        q = commute_step(p, path, fresh);
      } catch (const Error& e) {
        ASSERT_EQ(e.kind(), ErrorKind::NotACommute) << e.what();
        continue;
      }
      Judgment got;
      try {
        got = check_typing(q);
      } catch (const Error& e) {
        FAIL() << e.what() << "\n" << print_nd(p) << "\n=>\n" << print_nd(q);
      }
      ++steps;
      ++seen[*tag];
      EXPECT_EQ(got.subject, before.subject);
      EXPECT_EQ(got.var, before.var);
      EXPECT_TRUE(same_up_to_exchange(erase(got), erase(before)));
      if (*tag == RedexTag::Commute2) {
        // some case-of-case step on the terms gives the same judgment, or the
        // terms never showed the nesting (the inner case sat in a branch)
        bool match = same_judgment(got, before);
        for (auto& loc : find_redexes(before)) {
          if (loc.tag != RedexTag::Commute2) continue;
          Fresh f;
          match |= same_judgment(beta_step(before, loc, f), got);
        }
        EXPECT_TRUE(match) << show_judgment(before) << "\n" << show_judgment(got);
      } else if (!above_context(node_at(p, path))) {
        EXPECT_TRUE(same_judgment(got, before))
            << redex_tag_name(*tag) << "\n" << show_judgment(before) << "\n" << show_judgment(got);
      }
    }
  }
  EXPECT_GE(steps, 200);
  for (auto& [t, n] : seen) std::cout << redex_tag_name(t) << " " << n << "\n";
}

// par elimination over par elimination: the lower casel/caser land on the
// upper ones, so the terms are unchanged when the binder does not occur
// elsewhere.
TEST(CommutingConversions, ParEliminationOverParElimination) {
  Fresh f;
  const Formula A = Formula::l_atom("A"), B = Formula::l_atom("B"), C = Formula::l_atom("C");
  const Formula BC = Formula::par(B, C), ABC = Formula::par(A, BC);
  NdPtr major = nd::id("x", ABC);
  NdPtr upper = nd::rule(NdRule::LParE, {major, nd::id("y", A), nd::id("z", BC)}, f);
  // bring caser x : B par C to the front
  NdPtr front = nd_to_front(upper, true, 1);
  NdPtr lower = nd::rule(NdRule::LParE, {front, nd::id("v", B), nd::id("w", C)}, f);
  Judgment before = check_typing(lower);
  NdPtr moved = commute_step(lower, {}, f);
  Judgment after = check_typing(moved);
  EXPECT_NE(moved->premises[0]->label.rule, NdRule::LParE);
  EXPECT_TRUE(same_judgment(after, before)) << show_judgment(before) << "\n" << show_judgment(after);
  EXPECT_TRUE(same_judgment(before, J("(judgL x (par A (par B C)) (ctx (: (casel x) A) (: (casel (caser x)) B) "
                                      "(: (caser (caser x)) C)) (ctx))")))
      << show_judgment(before);
}
