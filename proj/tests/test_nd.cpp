#include <gtest/gtest.h>

#include "dlnl/cut_elim.hpp"
#include "dlnl/error.hpp"
#include "dlnl/translate.hpp"
#include "support/generators.hpp"

using namespace dlnl;

namespace {

Formula nl(const char* s) { return parse_formula(s, Sort::NonLinear); }
Formula li(const char* s) { return parse_formula(s, Sort::Linear); }

NdPtr id(const char* f) { return nd::id("", nl(f)); }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error";
  return ErrorKind::Usage;
}

bool ex_rule(Rule r) { return r == Rule::CEx || r == Rule::LEx || r == Rule::LCEx; }
ProofPtr skip_ex(ProofPtr p) {
  while (ex_rule(p->label.rule) || p->label.rule == Rule::CCrR || p->label.rule == Rule::CWkR) p = p->premises[0];
  return p;
}

}  // namespace

TEST(CheckNd, IdentityLeaf) {
  EXPECT_EQ(check_nd(id("a")), parse_sequent("(seqC a (ctx a))"));
  EXPECT_EQ(check_nd(nd::id("", li("A"))), parse_sequent("(seqL A (ctx A) (ctx))"));
}

TEST(CheckNd, MinusIntroduction) {
  Fresh f;
  // S |- T1, Psi1  and  T2 |- Psi2  give  S |- T1 - T2, Psi1, Psi2
  NdPtr major = nd::weak(id("a"), nl("b"), f);
  NdPtr minor = nd::weak(id("b"), nl("0"), f);
  NdPtr p = nd::rule(NdRule::CMinusI, {major, minor}, f);
  EXPECT_TRUE(same_up_to_exchange(check_nd(p), parse_sequent("(seqC a (ctx (- a b) b 0 b))")))
      << show_sequent(check_nd(p));
}

TEST(CheckNd, PlusEliminationIsAdditive) {
  Fresh f;
  NdPtr major = nd::rule(NdRule::CPlusI1, {id("a")}, f, nl("b"));  // a |- a + b
  NdPtr m1 = id("a");
  NdPtr m2 = nd::weak(id("b"), nl("a"), f);
  // minor contexts of different shape
  auto bad = std::make_shared<const NdProof>(NdProof{NdLabel::of(NdRule::CPlusE), major->conclusion, {major, m1, m2}});
  EXPECT_EQ(kind_of([&] { check_nd(bad); }), ErrorKind::AdditiveContext);
  EXPECT_EQ(kind_of([&] { nd::rule(NdRule::CPlusE, {major, m1, m2}, f); }), ErrorKind::AdditiveContext);
  // the multiplicative reading goes through weakening
  NdPtr ok = plus_e_mult(major, m1, id("b"), f);
  EXPECT_TRUE(same_up_to_exchange(check_nd(ok), parse_sequent("(seqC a (ctx a b))")));
}

TEST(AdmissibleCut, AgainstIdentity) {
  Fresh f;
  NdPtr p = nd::rule(NdRule::CPlusI1, {id("a")}, f, nl("b"));
  NdPtr q = admissible_cut(p, id("(+ a b)"), CutShape::CC, f);
  EXPECT_EQ(check_nd(q), check_nd(p));
  EXPECT_EQ(nd_size(q), nd_size(p));
}

TEST(AdmissibleCut, ThroughWeakening) {
  Fresh f;
  NdPtr p = nd::weak(id("a"), nl("b"), f);  // a |- a, b
  NdPtr q = nd::weak(id("a"), nl("0"), f);  // a |- a, 0
  NdPtr r = admissible_cut(p, q, CutShape::CC, f);
  EXPECT_TRUE(same_up_to_exchange(check_nd(r), parse_sequent("(seqC a (ctx b 0 a))")));
}

TEST(AdmissibleCut, AllThreeShapes) {
  Fresh f;
  // LC: A |-_L .; T, Psi  with  T |-_C Psi'
  NdPtr l = nd::weak(nd::id("", li("A")), nl("a"), f);
  NdPtr lc = admissible_cut(l, nd::weak(id("a"), nl("b"), f), CutShape::LC, f);
  EXPECT_TRUE(same_up_to_exchange(check_nd(lc), parse_sequent("(seqL A (ctx A) (ctx b a))")));
  // LL: A |-_L B, D; Psi  with  B |-_L D'; Psi'
  NdPtr ll = admissible_cut(nd::id("", li("A")), nd::weak(nd::id("", li("A")), nl("a"), f), CutShape::LL, f);
  EXPECT_TRUE(same_up_to_exchange(check_nd(ll), parse_sequent("(seqL A (ctx A) (ctx a))")));
  EXPECT_EQ(kind_of([&] { admissible_cut(id("a"), id("b"), CutShape::CC, f); }), ErrorKind::ShapeMismatch);
}

// Zero elimination with n minors becomes one ZeroL axiom, the cut of the
// major against it, and one cut per minor.
TEST(Translate, ZeroEliminationShape) {
  for (int n : {1, 2, 3}) {
    Fresh f;
    NdPtr major = nd::weak(id("0"), nl("c"), f);  // 0 |- 0, c
    std::vector<NdPtr> ps{major};
    const char* subj[] = {"a", "b", "(+ a b)"};
    for (int i = 0; i < n; ++i) ps.push_back(nd::weak(id(subj[i]), nl("0"), f));
    NdPtr p = nd::rule(NdRule::CZeroE, ps, f);
    const Sequent s = check_nd(p);
    ProofPtr q = nd_to_seq(p);
    ASSERT_EQ(check_proof(q), s);
    // walk down the chain of cuts from the root
    ProofPtr at = skip_ex(q);
    for (int i = n; i >= 1; --i) {
      ASSERT_EQ(at->label.rule, Rule::CCut) << n << " " << i;
      EXPECT_EQ(at->label.f, nl(subj[i - 1]));
      // S |- Psi, Psi1, ..., Psi_i, S_{i+1}, ..., S_n
      Context want{nl("c")};
      for (int k = 0; k < i; ++k) {
        want.push_back(nl("0"));
        want.push_back(nl(subj[k]));
      }
      for (int k = i; k < n; ++k) want.push_back(nl(subj[k]));
      EXPECT_TRUE(same_multiset(at->conclusion.psi, want)) << show_sequent(at->conclusion);
      at = skip_ex(at->premises[0]);
    }
    ASSERT_EQ(at->label.rule, Rule::CCut);
    EXPECT_EQ(at->label.f, Formula::zero());
    const ProofPtr& ax = at->premises[1];
    ASSERT_EQ(ax->label.rule, Rule::CZeroL);
    ASSERT_EQ(ax->label.ctx.size(), static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) EXPECT_EQ(ax->label.ctx[static_cast<std::size_t>(k)], nl(subj[k]));
    int cuts = 0;
    std::function<void(const ProofPtr&)> count = [&](const ProofPtr& r) {
      cuts += is_cut_rule(r->label.rule);
      for (auto& c : r->premises) count(c);
    };
    count(q);
    EXPECT_EQ(cuts, n + 1);
  }
}

TEST(Translate, IntroductionsMapToRightRules) {
  Fresh f;
  NdPtr p = nd::rule(NdRule::CPlusI2, {id("a")}, f, nl("b"));
  ProofPtr q = nd_to_seq(p);
  EXPECT_EQ(skip_ex(q)->label.rule, Rule::CPlusR2);
  EXPECT_EQ(nd_to_seq(id("a"))->label.rule, Rule::CId);
  NdPtr back = seq_to_nd(mk::c_id(nl("a")));
  EXPECT_EQ(back->label.rule, NdRule::CId);
  EXPECT_EQ(nd_size(back), 1u);
}

// Both translations keep the endsequent; the sequent image eliminates to a
// cut-free proof of it, and the round trip lands back in natural deduction.
TEST(Translate, RandomNdCorpus) {
  gen::Rng r(31);
  for (int i = 0; i < 300; ++i) {
    gen::Atoms at = gen::two_atoms(r);
    NdPtr p = gen::nd_proof(r, 3, at);
    const Sequent s = check_nd(p);
    ProofPtr q;
    try {
      q = nd_to_seq(p);
    } catch (const Error& e) {
      FAIL() << e.what() << "\n" << print_nd(p);
    }
    ASSERT_EQ(check_proof(q), s) << print_nd(p);
    ProofPtr e = eliminate(q);
    ASSERT_TRUE(is_cut_free(e));
    ASSERT_EQ(check_proof(e), s);
    NdPtr back = seq_to_nd(q);
    ASSERT_EQ(check_nd(back), s) << print_proof(q);
  }
}

TEST(Translate, RandomSequentCorpus) {
  gen::Rng r(32);
  for (int i = 0; i < 300; ++i) {
    gen::Atoms at = gen::two_atoms(r);
    ProofPtr p = gen::cut_proof(r, 8, at);
    const Sequent s = check_proof(p);
    NdPtr q;
    try {
      q = seq_to_nd(p);
    } catch (const Error& e) {
      FAIL() << e.what() << "\n" << print_proof(p);
    }
    ASSERT_EQ(check_nd(q), s) << print_proof(p);
    ASSERT_EQ(check_proof(nd_to_seq(q)), s);
  }
}

TEST(Translate, TypedDerivationsAreErasedFirst) {
  gen::Rng r(33);
  for (int i = 0; i < 100; ++i) {
    Fresh fresh;
    gen::Atoms at = gen::two_atoms(r);
    NdPtr p = gen::typed_proof(r, 3, at, fresh);
    Judgment j = check_typing(p);
    ASSERT_EQ(check_nd(erase(p)), erase(j));
    ASSERT_EQ(check_proof(nd_to_seq(p)), erase(j));
  }
}

TEST(NdFile, RoundTrips) {
  gen::Rng r(34);
  for (int i = 0; i < 100; ++i) {
    Fresh fresh;
    gen::Atoms at = gen::two_atoms(r);
    NdPtr p = r.coin() ? gen::nd_proof(r, 3, at) : gen::typed_proof(r, 3, at, fresh);
    NdPtr q = parse_nd(print_nd(p));
    ASSERT_EQ(print_nd(q), print_nd(p));
    Judgment a = check_derivation(p), b = check_derivation(q);
    ASSERT_TRUE(same_judgment(a, b));
  }
}
