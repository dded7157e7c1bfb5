#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "pnl/files.hpp"
#include "pnl/transform.hpp"

using namespace pnl;

namespace {

std::string sample(const std::string& name) {
    std::ifstream in(std::string(PNL_SAMPLES_DIR) + "/" + name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

TEST(Samples, ProofsCheck) {
    for (const char* f : {"swap_instance.pnlproof", "shift_instance.pnlproof", "one_cut.pnlproof", "refl.pnlproof",
                          "bot.pnlproof"}) {
        Document doc = parse_document(sample(f));
        EXPECT_TRUE(doc.proof.has_value()) << f;
        EXPECT_TRUE(check_document(doc).empty()) << f;
    }
}

TEST(Samples, MissingPermutationIsRejected) {
    auto ds = check_document(parse_document(sample("swap_no_perm.pnlproof")));
    ASSERT_EQ(ds.size(), 1u);
    EXPECT_EQ(ds[0].path, "root.0");
    EXPECT_EQ(ds[0].message, "Ax: right formula is not π·φ");
}

TEST(Samples, FolFile) {
    auto seqs = parse_fol_file(sample("sequents.fol"));
    EXPECT_EQ(seqs.size(), 4u);
    EXPECT_TRUE(seqs[2].left.empty());
}

TEST(Documents, PositionsOfNodes) {
    Document doc = parse_document("namesort n\nbasesort i\npred P : i\nterm c : () i\ngoal |- P(c) => P(c)\nproof\n(impR\n  (ax))\n");
    EXPECT_EQ(doc.positions.at("root"), std::make_pair(7, 1));
    EXPECT_EQ(doc.positions.at("root.0"), std::make_pair(8, 3));
}

TEST(Documents, InfersPrincipalFormulas) {
    Document doc = parse_document(R"X(signature arith
unknown X : i / A<
axiom refl : forall X . X == X
goal @refl |- zero == zero
proof
(forallL :witness zero
  (ax :formula "zero == zero"))
)X");
    ASSERT_TRUE(doc.proof);
    EXPECT_EQ(doc.proof->rule, Rule::ForallL);
    ASSERT_TRUE(doc.proof->formula);
    EXPECT_TRUE(doc.proof->formula->is(Prop::Kind::Forall));
    EXPECT_TRUE(check_document(doc).empty());
}

TEST(Documents, AmbiguousPrincipalNeedsFormula) {
    EXPECT_THROW(parse_document("namesort n\nbasesort i\npred P : i\npred Q : i\nterm c : () i\n"
                                "goal |- P(c) => P(c), Q(c) => Q(c)\nproof (impR (ax))"),
                 ParseError);
}

TEST(Documents, Errors) {
    EXPECT_THROW(parse_document("signature arith\ngoal |- zero == zero\nproof (frob)"), ParseError);
    EXPECT_THROW(parse_document("signature arith\ngoal |- zero == zero\nproof (ax :colour red)"), ParseError);
    EXPECT_THROW(parse_document("signature arith\nproof (ax)"), ParseError);
    EXPECT_THROW(parse_document("signature arith\nbogus"), ParseError);
    EXPECT_ANY_THROW(parse_document("signature arith\ngoal @nothing |- \nproof (botL)"));
    try {
        parse_document("signature arith\ngoal |- zero == zero\nproof (ax :formula \"zero ==\")");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3);
    }
}

TEST(Documents, TheoryImport) {
    Document doc = parse_document(sample("bot.pnlproof"));
    EXPECT_TRUE(doc.ctx.labels.count("fol_bot"));
    EXPECT_TRUE(doc.ctx.sig.pred_formers().count("eps"));
}

TEST(Documents, PrintedProofReparses) {
    Document doc = parse_document(sample("shift_instance.pnlproof"));
    std::string text = proof_document(doc.ctx.sig, *doc.proof);
    Document back = parse_document(text);
    ASSERT_TRUE(back.proof);
    EXPECT_TRUE(check_document(back).empty()) << text;
    EXPECT_TRUE(same_sequent(back.proof->conclusion, doc.proof->conclusion));
}

TEST(Documents, CutEliminatedSampleRoundTrips) {
    Document doc = parse_document(sample("one_cut.pnlproof"));
    Derivation d = cut_eliminate(doc.ctx.sig, *doc.proof);
    std::string text = proof_document(doc.ctx.sig, d);
    EXPECT_EQ(text.find("(cut"), std::string::npos);
    Document back = parse_document(text);
    EXPECT_TRUE(check_document(back).empty());
}

TEST(Documents, RulesInDocuments) {
    Document doc = parse_document(sample("arith.pnlrw"));
    EXPECT_EQ(doc.rules.size(), 4u);
}

}  // namespace
