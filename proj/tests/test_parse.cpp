#include <gtest/gtest.h>

#include "pnl/testing/oracles.hpp"

using namespace pnl;
using namespace pnl::testing;

namespace {

Atom n(Index i) { return Atom{"n", i}; }

TEST(Parse, AtomSets) {
    Context ctx;
    parse_declarations(ctx, "namesort n\nnamesort m\n");
    EXPECT_EQ(parse_atomset(ctx, "A<"), AtomSet::below({"n", "m"}));
    EXPECT_EQ(parse_atomset(ctx, "A<{n}"), AtomSet::below({"n"}));
    EXPECT_EQ(parse_atomset(ctx, "{n#1, m#2}"), AtomSet::finite({n(1), Atom{"m", 2}}));
    AtomSet s = parse_atomset(ctx, "A< + {n#0}");
    EXPECT_TRUE(s.contains(n(0)));
    AtomSet d = parse_atomset(ctx, "A< ^ {n#-1, n#0}");
    EXPECT_FALSE(d.contains(n(-1)));
    EXPECT_TRUE(d.contains(n(0)));
}

TEST(Parse, Permutations) {
    Context ctx;
    parse_declarations(ctx, "namesort n\n");
    EXPECT_EQ(parse_perm(ctx, "id"), Perm::identity());
    EXPECT_EQ(parse_perm(ctx, "(n#0 n#1)"), Perm::swap(n(0), n(1)));
    EXPECT_EQ(parse_perm(ctx, "shift{n}^-2"), Perm::shift("n", -2));
    EXPECT_EQ(parse_perm(ctx, "(n#0 n#1) . shift{n}"), compose(Perm::swap(n(0), n(1)), Perm::shift("n", 1)));
    EXPECT_THROW(parse_perm(ctx, "shift{q}"), TypeError);
}

TEST(Parse, DeclarationsAndSignature) {
    Context ctx;
    parse_declarations(ctx, "signature arith\nunknown X, X' : i / A<\n");
    EXPECT_TRUE(ctx.sig.name_sorts().count("n"));
    EXPECT_EQ(ctx.unknown("X'").sort, Sort::base("i"));
    Term t = parse_term(ctx, "plus(X, succ(X'))");
    EXPECT_EQ(typecheck(ctx.sig, t), Sort::base("i"));
    EXPECT_THROW(ctx.unknown("Q"), TypeError);
}

TEST(Parse, EqualitySugar) {
    Context ctx;
    parse_declarations(ctx, "signature arith\nunknown X : i / A<\n");
    Prop p = parse_prop(ctx, "X == zero");
    EXPECT_EQ(p.name(), "eq_i");
    Term s = parse_term(ctx, "X[n#-1 |-> zero]");
    EXPECT_EQ(s.former(), "sub_i");
    EXPECT_TRUE(alpha_eq(s, parse_term(ctx, "sub_i([n#-1]X, zero)")));
}

TEST(Parse, ConnectivesAndQuantifiers) {
    Context ctx;
    parse_declarations(ctx, "signature arith\nunknown X, Y : i / A<\n");
    Prop p = parse_prop(ctx, "forall X Y . X == Y => Y == X");
    ASSERT_TRUE(p.is(Prop::Kind::Forall));
    EXPECT_EQ(p.binder().name, "X");
    EXPECT_TRUE(p.body().is(Prop::Kind::Forall));
    EXPECT_TRUE(p.body().body().is(Prop::Kind::Imp));
    EXPECT_TRUE(alpha_eq(parse_prop(ctx, "~false"), neg(Prop::bot())));
}

TEST(Parse, Sequents) {
    Context ctx;
    parse_declarations(ctx, "signature arith\n");
    Sequent s = parse_sequent(ctx, "zero == zero, false |- ");
    EXPECT_EQ(s.left.size(), 2u);
    EXPECT_TRUE(s.right.empty());
    Sequent t = parse_sequent(ctx, "⊢ zero == zero");
    EXPECT_EQ(t.right.size(), 1u);
}

TEST(Parse, ErrorsCarryPositions) {
    Context ctx;
    parse_declarations(ctx, "signature arith\n");
    try {
        parse_term(ctx, "succ(\n  zero))");
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2);
        EXPECT_GT(e.col(), 1);
    }
    EXPECT_THROW(parse_term(ctx, "succ(zero"), ParseError);
    EXPECT_THROW(parse_term(ctx, "zero zero"), ParseError);
    EXPECT_THROW(parse_term(ctx, "n#"), ParseError);
    EXPECT_THROW(parse_term(ctx, "\"open"), ParseError);
}

TEST(Parse, UndeclaredNames) {
    Context ctx;
    parse_declarations(ctx, "signature arith\n");
    EXPECT_THROW(typecheck(ctx.sig, parse_term(ctx, "frob(zero)")), TypeError);
    EXPECT_ANY_THROW(parse_term(ctx, "Q"));
}

TEST(Parse, Substitutions) {
    Context ctx;
    parse_declarations(ctx, "signature arith\nunknown X, Y : i / A<\n");
    Substitution th = parse_substitution(ctx, "[X := zero, Y := succ(X)]");
    EXPECT_EQ(th.entries().size(), 2u);
    EXPECT_THROW(parse_substitution(ctx, "[X := var(n#0)]"), LogicError);
    EXPECT_THROW(parse_substitution(ctx, "[X := fbot]"), TypeError);
}

TEST(ParseProperty, PrintedTermsReparse) {
    Gen g(31);
    TestWorld w;
    TermGen tg{g, w};
    for (int i = 0; i < 1000; ++i) {
        Term t = tg.term(g.range(0, 5));
        std::string s = to_string(t);
        Term back = parse_term(w.ctx, s);
        ASSERT_TRUE(raw_equal(t, back)) << s << " reparsed as " << to_string(back);
    }
}

TEST(ParseProperty, PrintedPropsReparse) {
    Gen g(32);
    TestWorld w;
    TermGen tg{g, w};
    for (int i = 0; i < 1000; ++i) {
        Prop p = tg.prop(g.range(0, 4));
        std::string s = to_string(p);
        Prop back = parse_prop(w.ctx, s);
        ASSERT_TRUE(alpha_eq(p, back)) << s << " reparsed as " << to_string(back);
    }
}

TEST(ParseProperty, PrintedPermsReparse) {
    Gen g(33);
    Context ctx;
    parse_declarations(ctx, "namesort n\nnamesort m\n");
    for (int i = 0; i < 1000; ++i) {
        Perm p = random_perm(g, {"n", "m"});
        ASSERT_EQ(parse_perm(ctx, to_string(p)), p) << to_string(p);
    }
}

}  // namespace
