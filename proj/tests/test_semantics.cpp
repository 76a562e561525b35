#include <gtest/gtest.h>

#include "dlnl/cut_elim.hpp"
#include "dlnl/error.hpp"
#include "dlnl/semantics.hpp"
#include "dlnl/translate.hpp"
#include "support/generators.hpp"

using namespace dlnl;

namespace {

Formula nl(const char* s) { return parse_formula(s, Sort::NonLinear); }

const char* kLattices[] = {"chain2", "chain3", "chain4", "pow2", "pow3", "vdown"};

}  // namespace

TEST(Lattice, CoImplicationExamples) {
  const Lattice& c2 = lattice_by_name("chain2");
  for (int a = 0; a < c2.size(); ++a) EXPECT_EQ(c2.co_imp(a, a), c2.bottom());
  EXPECT_EQ(c2.co_imp(1, 0), 1);
  EXPECT_EQ(c2.co_imp(0, 1), 0);
  const Lattice& p2 = lattice_by_name("pow2");
  // elements are listed by bitmask: {} {0} {1} {0,1}
  EXPECT_EQ(p2.co_imp(3, 1), 2);
  EXPECT_EQ(p2.show(2), "{1}");
  EXPECT_EQ(p2.co_imp(3, 3), p2.bottom());
  const Lattice& c3 = lattice_by_name("chain3");
  EXPECT_EQ(c3.co_imp(2, 1), 2);
  EXPECT_EQ(c3.co_imp(1, 2), 0);
  EXPECT_THROW(lattice_by_name("chain9"), Error);
}

// a - b <= c  iff  a <= c v b, for every triple
TEST(Lattice, CoImplicationIsLeftAdjoint) {
  for (const char* name : kLattices) {
    const Lattice& l = lattice_by_name(name);
    for (int a = 0; a < l.size(); ++a)
      for (int b = 0; b < l.size(); ++b)
        for (int c = 0; c < l.size(); ++c) ASSERT_EQ(l.leq(l.co_imp(a, b), c), l.leq(a, l.join(c, b))) << name;
  }
}

TEST(Lattice, RejectsNonLattices) {
  EXPECT_THROW(Lattice("bad", {0b01, 0b10}), Error);  // no bottom or top
}

TEST(Eval, Examples) {
  const Lattice& p2 = lattice_by_name("pow2");
  Valuation v{{"a", 1}, {"b", 2}, {"A", 3}};
  EXPECT_EQ(eval_formula(nl("(+ a b)"), v, p2), 3);
  EXPECT_EQ(eval_formula(nl("(- (+ a b) a)"), v, p2), 2);
  EXPECT_EQ(eval_formula(nl("0"), v, p2), 0);
  EXPECT_EQ(eval_formula(nl("(H (sub A bot))"), v, p2), 3);
  EXPECT_THROW(eval_formula(nl("c"), v, p2), Error);
}

TEST(Holds, Examples) {
  const Lattice& c2 = lattice_by_name("chain2");
  EXPECT_TRUE(holds(parse_sequent("(seqC a (ctx a))"), {{"a", 1}}, c2));
  EXPECT_FALSE(holds(parse_sequent("(seqC a (ctx))"), {{"a", 1}}, c2));
  EXPECT_TRUE(holds(parse_sequent("(seqC 0 (ctx))"), {}, c2));
  // both zones of a linear sequent count toward the succedent
  EXPECT_TRUE(holds(parse_sequent("(seqL A (ctx) (ctx a))"), {{"A", 1}, {"a", 1}}, c2));
  EXPECT_FALSE(holds(parse_sequent("(seqL A (ctx B) (ctx))"), {{"A", 1}, {"B", 0}}, c2));
}

TEST(Refute, Examples) {
  const Lattice& c2 = lattice_by_name("chain2");
  auto v = refute(parse_sequent("(seqC a (ctx b))"), c2);
  ASSERT_TRUE(v);
  EXPECT_EQ(v->at("a"), 1);
  EXPECT_EQ(v->at("b"), 0);
  EXPECT_FALSE(refute(parse_sequent("(seqC a (ctx a))"), c2));
  EXPECT_FALSE(refute(parse_sequent("(seqC a (ctx (+ a b)))"), c2));
  EXPECT_FALSE(refute(parse_sequent("(seqC a (ctx (- a b) b))"), lattice_by_name("pow3")));
  try {
    refute(parse_sequent("(seqC a (ctx b c d e))"), c2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TooManyAtoms);
  }
}

// Co-implication is monotone on the left and antitone on the right.
TEST(Lattice, CoImplicationVariance) {
  for (const char* name : kLattices) {
    const Lattice& l = lattice_by_name(name);
    for (int a = 0; a < l.size(); ++a)
      for (int b = 0; b < l.size(); ++b) {
        if (!l.leq(a, b)) continue;
        for (int c = 0; c < l.size(); ++c) {
          ASSERT_TRUE(l.leq(l.co_imp(a, c), l.co_imp(b, c))) << name;
          ASSERT_TRUE(l.leq(l.co_imp(c, b), l.co_imp(c, a))) << name;
        }
      }
  }
}

static bool positive(const Formula& f) {
  if (f.conn() == Conn::Minus || f.conn() == Conn::CoImp) return false;
  if (f.conn() == Conn::H || f.conn() == Conn::J) return positive(f.body());
  return !f.is_binary() || (positive(f.left()) && positive(f.right()));
}

// Without co-implications, raising an atom never lowers a formula.
TEST(Eval, MonotoneInAtoms) {
  gen::Rng r(51);
  for (const char* name : kLattices) {
    const Lattice& l = lattice_by_name(name);
    for (int i = 0; i < 300; ++i) {
      gen::Atoms at = gen::two_atoms(r);
      Formula f = gen::formula(r, r.coin() ? Sort::NonLinear : Sort::Linear, 5, at);
      if (!positive(f)) continue;
      Valuation lo, hi;
      for (auto* names : {&at.nl, &at.lin})
        for (auto& n : *names) {
          int a = r.below(l.size()), b = r.below(l.size());
          if (!l.leq(a, b)) std::swap(a, b);
          if (!l.leq(a, b)) b = l.join(a, b);
          lo[n] = a;
          hi[n] = b;
        }
      ASSERT_TRUE(l.leq(eval_formula(f, lo, l), eval_formula(f, hi, l))) << print_formula(f);
    }
  }
}

// Every conclusion of every derivation we can build holds everywhere.
TEST(Soundness, ProofCorporaAreValid) {
  gen::Rng r(52);
  for (const char* name : {"chain2", "chain3", "pow2"}) {
    const Lattice& l = lattice_by_name(name);
    for (int i = 0; i < 150; ++i) {
      gen::Atoms at = gen::two_atoms(r);
      ProofPtr p = gen::cut_proof(r, 8, at);
      ASSERT_TRUE(valid_in(check_proof(p), l)) << name << "\n" << print_proof(p);
      ASSERT_TRUE(valid_in(check_proof(eliminate(p)), l));
      NdPtr q = gen::nd_proof(r, 3, at);
      ASSERT_TRUE(valid_in(check_nd(q), l)) << name << "\n" << print_nd(q);
      Fresh fresh;
      NdPtr t = gen::typed_proof(r, 3, at, fresh);
      ASSERT_TRUE(valid_in(erase(check_typing(t)), l));
    }
  }
}
