#include <gtest/gtest.h>

#include "pnl/files.hpp"
#include "pnl/testing/oracles.hpp"

using namespace pnl;
using namespace pnl::testing;

namespace {

class SubRules : public ::testing::Test {
protected:
    RuleSet rs = builtin_rules("SUB");
    Term T(const std::string& s) { return parse_term(rs.ctx, s); }
    Term normal(const std::string& s, std::size_t fuel = 10000) {
        RewriteResult r = rewrite(rs, T(s), fuel);
        EXPECT_FALSE(r.exhausted);
        return r.term;
    }
};

TEST_F(SubRules, Loads) {
    EXPECT_EQ(rs.rules.size(), 9u);
    EXPECT_THROW(builtin_rules("ARITH"), LogicError);
}

TEST_F(SubRules, VariableCases) {
    EXPECT_TRUE(alpha_eq(normal("var(n#-1)[n#-1 |-> zero]"), T("zero")));
    EXPECT_TRUE(alpha_eq(normal("var(n#3)[n#3 |-> zero]"), T("zero")));
    EXPECT_TRUE(alpha_eq(normal("var(n#2)[n#-1 |-> zero]"), T("var(n#2)")));
}

TEST_F(SubRules, Congruences) {
    EXPECT_TRUE(alpha_eq(normal("plus(var(n#0), succ(var(n#1)))[n#0 |-> zero]"), T("plus(zero, succ(var(n#1)))")));
    EXPECT_TRUE(alpha_eq(normal("fimp(feq(var(n#0), zero), fbot)[n#0 |-> succ(zero)]"),
                         T("fimp(feq(succ(zero), zero), fbot)")));
}

TEST_F(SubRules, BinderCases) {
    EXPECT_TRUE(alpha_eq(normal("fall([n#1]feq(var(n#1), var(n#0)))[n#0 |-> zero]"), T("fall([n#1]feq(var(n#1), zero))")));
    // The bound variable shadows the substituted one.
    EXPECT_TRUE(alpha_eq(normal("fall([n#0]feq(var(n#0), zero))[n#0 |-> succ(zero)]"), T("fall([n#0]feq(var(n#0), zero))")));
    // Capture is avoided by α-renaming the binder.
    Term out = normal("fall([n#1]feq(var(n#1), var(n#0)))[n#0 |-> var(n#1)]");
    EXPECT_TRUE(alpha_eq(out, T("fall([n#2]feq(var(n#2), var(n#1)))")));
}

TEST_F(SubRules, TraceRecordsEquations) {
    RewriteResult r = rewrite(rs, T("succ(var(n#-1))[n#-1 |-> zero]"), 100, true);
    ASSERT_EQ(r.trace.size(), 2u);
    EXPECT_EQ(r.trace[0].rule, "subsucc");
    EXPECT_EQ(r.trace[1].rule, "subvar");
    ASSERT_TRUE(r.trace[0].equation.has_value());
    EXPECT_EQ(r.steps, 2u);
}

TEST_F(SubRules, Lint) {
    auto msgs = lint_rules(rs, builtin_theory("SUB"));
    ASSERT_EQ(msgs.size(), 1u);
    EXPECT_NE(msgs[0].find("suball"), std::string::npos);
}

TEST_F(SubRules, MatchProducesVerifiedInstance) {
    Term target = T("succ(var(n#4))[n#4 |-> zero]");
    const RewriteRule* subsucc = nullptr;
    for (const auto& r : rs.rules)
        if (r.label == "subsucc") subsucc = &r;
    ASSERT_NE(subsucc, nullptr);
    auto m = match(*subsucc, rs.ctx.sig, target);
    ASSERT_TRUE(m.has_value());
    EXPECT_TRUE(alpha_eq(m->instance, target));
    EXPECT_TRUE(alpha_eq(m->result, T("succ(var(n#4)[n#4 |-> zero])")));
    EXPECT_FALSE(match(*subsucc, rs.ctx.sig, T("zero")).has_value());
}

TEST(Rules, CustomRuleFile) {
    RuleSet rs = parse_rules("arith", R"X(signature arith
unknown X', X : i / A<
rule plus0 : plus(X, zero) --> X
rule plussucc : plus(X', succ(X)) --> succ(plus(X', X))
)X");
    RewriteResult r = rewrite(rs, parse_term(rs.ctx, "plus(succ(zero), succ(succ(zero)))"), 100);
    EXPECT_TRUE(alpha_eq(r.term, parse_term(rs.ctx, "succ(succ(succ(zero)))")));
}

TEST(Rules, FuelExhaustion) {
    RuleSet rs = parse_rules("loop", "signature arith\nunknown X', X : i / A<\nrule comm : plus(X', X) --> plus(X, X')\n");
    RewriteResult r = rewrite(rs, parse_term(rs.ctx, "plus(zero, succ(zero))"), 25);
    EXPECT_TRUE(r.exhausted);
    EXPECT_EQ(r.steps, 25u);
}

TEST(Rules, RejectsMalformedRules) {
    EXPECT_ANY_THROW(parse_rules("bad", "signature arith\nunknown X, Y : i / A<\nrule r : succ(X) --> Y\n"));
    EXPECT_ANY_THROW(parse_rules("bad", "signature arith\nunknown X : i / A<\nrule r : X --> zero\n"));
    EXPECT_ANY_THROW(parse_rules("bad", "signature arith\nunknown X : i / A<\nrule r : succ(X) --> fbot\n"));
}

TEST(RewriteProperty, FirstOrderSubstitution) {
    Gen g(81);
    FolGen fg{g};
    RuleSet rs = builtin_rules("SUB");
    for (int i = 0; i < 600; ++i) {
        Atom a = fg.variable();
        FolTerm t = fg.term(g.range(1, 3));
        Term target = Term::unit(), want = Term::unit();
        if (i % 2) {
            FolFormula f = fg.formula(g.range(1, 7));
            target = Term::app("sub_o", Term::tuple({Term::abs(a, amod(f)), amod(t)}));
            want = amod(textbook_subst(f, a, t));
        } else {
            FolTerm u = fg.term(g.range(1, 6));
            target = Term::app("sub_i", Term::tuple({Term::abs(a, amod(u)), amod(t)}));
            want = amod(textbook_subst(u, a, t));
        }
        RewriteResult r = rewrite(rs, target, 10000);
        ASSERT_FALSE(r.exhausted);
        ASSERT_TRUE(alpha_eq(r.term, want)) << to_string(target) << " gave " << to_string(r.term);
    }
}

TEST(RewriteProperty, StepsAreInstancesOfRules) {
    Gen g(82);
    FolGen fg{g};
    RuleSet rs = builtin_rules("SUB");
    for (int i = 0; i < 100; ++i) {
        FolFormula f = fg.formula(g.range(1, 6));
        Term target = Term::app("sub_o", Term::tuple({Term::abs(fg.variable(), amod(f)), amod(fg.term(2))}));
        RewriteResult r = rewrite(rs, target, 10000, true);
        for (const auto& s : r.trace) {
            ASSERT_TRUE(s.equation.has_value());
            ASSERT_NO_THROW(typecheck(rs.ctx.sig, *s.equation));
            ASSERT_TRUE(is_subset(fa(s.after), fa(s.before))) << s.rule;
        }
    }
}

}  // namespace
