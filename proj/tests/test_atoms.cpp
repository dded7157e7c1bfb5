#include <gtest/gtest.h>

#include "pnl/print.hpp"
#include "pnl/testing/oracles.hpp"

using namespace pnl;
using namespace pnl::testing;

namespace {

Atom n(Index i) { return Atom{"n", i}; }

TEST(Perm, SwapExchangesTwoAtoms) {
    Perm p = Perm::swap(n(0), n(3));
    EXPECT_EQ(p(n(0)), n(3));
    EXPECT_EQ(p(n(3)), n(0));
    EXPECT_EQ(p(n(1)), n(1));
    EXPECT_EQ(p(Atom{"m", 0}), (Atom{"m", 0}));
}

TEST(Perm, SwapOfEqualAtomsIsIdentity) { EXPECT_TRUE(Perm::swap(n(2), n(2)).is_identity()); }

TEST(Perm, SwapAcrossSortsThrows) { EXPECT_THROW(Perm::swap(n(0), Atom{"m", 0}), LogicError); }

TEST(Perm, ShiftMovesOnlyItsSort) {
    Perm s = Perm::shift("n", 2);
    EXPECT_EQ(s(n(-1)), n(1));
    EXPECT_EQ(s(Atom{"m", -1}), (Atom{"m", -1}));
    EXPECT_TRUE(Perm::shift("n", 0).is_identity());
}

TEST(Perm, NormalFormAppliesShiftsFirst) {
    Perm p = compose(Perm::swap(n(1), n(2)), Perm::shift("n", 1));
    EXPECT_EQ(p(n(0)), n(2));
    EXPECT_EQ(p(n(1)), n(1));
    EXPECT_EQ(p.shift_of("n"), 1);
}

TEST(Perm, FiniteRejectsNonBijection) {
    EXPECT_THROW(Perm::finite({{n(0), n(1)}}), LogicError);
    EXPECT_THROW(Perm::finite({{n(0), n(1)}, {n(2), n(1)}}), LogicError);
    EXPECT_THROW(Perm::finite({{n(0), Atom{"m", 0}}, {Atom{"m", 0}, n(0)}}), LogicError);
    Perm c = Perm::finite({{n(0), n(1)}, {n(1), n(2)}, {n(2), n(0)}});
    EXPECT_EQ(c(n(2)), n(0));
}

TEST(Perm, StructuralEqualityIsExtensional) {
    Perm a = compose(Perm::swap(n(0), n(1)), Perm::swap(n(0), n(1)));
    EXPECT_EQ(a, Perm::identity());
    Perm b = compose(Perm::shift("n", 3), Perm::shift("n", -3));
    EXPECT_EQ(b, Perm::identity());
}

TEST(Perm, ConjugationBySwap) {
    Perm s = Perm::shift("n", 1);
    Perm lhs = compose(compose(s, Perm::swap(n(0), n(1))), inverse(s));
    EXPECT_EQ(lhs, Perm::swap(n(1), n(2)));
}

TEST(PermProperty, ComposeMatchesPointwise) {
    Gen g(11);
    for (int i = 0; i < 2000; ++i) {
        std::vector<NameSort> sorts = g.coin() ? std::vector<NameSort>{"n"} : std::vector<NameSort>{"n", "m"};
        PermWord pw = random_perm_word(g, sorts), qw = random_perm_word(g, sorts);
        Perm p = perm_of(pw), q = perm_of(qw);
        ASSERT_TRUE(agrees_pointwise(compose(p, q), [&](const Atom& x) { return eval_word(pw, eval_word(qw, x)); },
                                     sorts, atom_window()));
    }
}

TEST(PermProperty, GroupLaws) {
    Gen g(12);
    for (int i = 0; i < 1000; ++i) {
        Perm p = random_perm(g, {"n", "m"}), q = random_perm(g, {"n", "m"}), r = random_perm(g, {"n", "m"});
        EXPECT_EQ(compose(p, compose(q, r)), compose(compose(p, q), r));
        EXPECT_EQ(compose(p, inverse(p)), Perm::identity());
        EXPECT_EQ(compose(inverse(p), p), Perm::identity());
        EXPECT_EQ(compose(p, Perm::identity()), p);
        EXPECT_EQ(inverse(compose(p, q)), compose(inverse(q), inverse(p)));
    }
}

TEST(AtomSet, BelowAndExceptions) {
    AtomSet b = AtomSet::below({"n"});
    EXPECT_TRUE(b.contains(n(-1)));
    EXPECT_TRUE(b.contains(n(-100)));
    EXPECT_FALSE(b.contains(n(0)));
    EXPECT_FALSE(b.contains(Atom{"m", -1}));
    AtomSet c = AtomSet::permission({"n"}, {n(-1), n(0)});
    EXPECT_FALSE(c.contains(n(-1)));
    EXPECT_TRUE(c.contains(n(0)));
    EXPECT_FALSE(c.is_finite());
    EXPECT_TRUE(c.is_permission_set({"n"}));
}

TEST(AtomSet, SetAlgebra) {
    AtomSet b = AtomSet::below({"n"});
    AtomSet f = AtomSet::finite({n(-2), n(3)});
    EXPECT_TRUE(set_union(b, f).contains(n(3)));
    EXPECT_TRUE(set_intersection(b, f).contains(n(-2)));
    EXPECT_FALSE(set_intersection(b, f).contains(n(3)));
    EXPECT_FALSE(set_difference(b, f).contains(n(-2)));
    EXPECT_TRUE(set_difference(b, f).contains(n(-3)));
    EXPECT_TRUE(is_subset(set_intersection(b, f), f));
    EXPECT_FALSE(is_subset(b, f));
    EXPECT_TRUE(is_subset(AtomSet::none(), f));
    EXPECT_EQ(set_intersection(b, f).members(), (AtomList{n(-2)}));
}

TEST(AtomSet, PermutationImage) {
    AtomSet b = AtomSet::below({"n"});
    AtomSet s = apply(Perm::shift("n", 1), b);
    EXPECT_TRUE(s.contains(n(0)));
    EXPECT_FALSE(s.contains(n(1)));
    AtomSet w = apply(Perm::swap(n(-1), n(0)), b);
    EXPECT_FALSE(w.contains(n(-1)));
    EXPECT_TRUE(w.contains(n(0)));
}

TEST(AtomSetProperty, ImageAgreesPointwise) {
    Gen g(13);
    for (int i = 0; i < 500; ++i) {
        Perm p = random_perm(g, {"n"});
        AtomList ex;
        for (int k = g.range(0, 3); k > 0; --k) ex.insert(n(g.range(-4, 4)));
        AtomSet s = AtomSet::permission({"n"}, ex);
        AtomSet ps = apply(p, s);
        for (Index j = -12; j <= 12; ++j) ASSERT_EQ(ps.contains(p(n(j))), s.contains(n(j)));
    }
}

TEST(FreshAtom, AvoidsAndPicksSide) {
    AtomSet avoid = AtomSet::finite({n(0), n(1), n(-1)});
    Atom a = fresh_atom("n", avoid, Side::Above);
    EXPECT_FALSE(avoid.contains(a));
    EXPECT_GE(a.index, 0);
    Atom b = fresh_atom("n", avoid, Side::Below);
    EXPECT_FALSE(avoid.contains(b));
    EXPECT_LT(b.index, 0);
    Atom c = fresh_atom("n", AtomSet::below({"n"}), Side::Above);
    EXPECT_GE(c.index, 0);
}

TEST(AgreesOn, IgnoresAtomsOutside) {
    AtomSet b = AtomSet::below({"n"});
    EXPECT_TRUE(agrees_on(Perm::swap(n(0), n(1)), Perm::identity(), b));
    EXPECT_FALSE(agrees_on(Perm::swap(n(-1), n(1)), Perm::identity(), b));
    EXPECT_FALSE(agrees_on(Perm::shift("n", 1), Perm::identity(), b));
}

TEST(Print, PermAndSets) {
    EXPECT_EQ(to_string(Perm::identity()), "id");
    EXPECT_EQ(to_string(Perm::swap(n(0), n(1))), "(n#0 n#1)");
    EXPECT_EQ(to_string(n(-3)), "n#-3");
}

}  // namespace
