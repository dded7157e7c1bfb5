// Acceptance gate: one PASS/FAIL line per criterion. Exit status is the number
// of failing criteria.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "pnl/files.hpp"
#include "pnl/termmodel.hpp"
#include "pnl/testing/oracles.hpp"

using namespace pnl;
using namespace pnl::testing;

namespace {

// Tolerances and sample sizes.
constexpr int kPerms = 10000;
constexpr int kPermWindow = 8;
constexpr double kPermSeconds = 5.0;
constexpr int kAlphaPairs = 1000;
constexpr int kAlphaDepth = 5;
constexpr int kSubstInstances = 1000;
constexpr int kTransformDerivations = 200;
constexpr int kCutDerivations = 100;
constexpr int kMaxCuts = 3;
constexpr double kCutSeconds = 60.0;
constexpr int kFolItems = 500;
constexpr int kFolNodes = 6;
constexpr std::size_t kFuel = 10000;
constexpr int kModelCorpus = 500;

struct Outcome {
    bool pass;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string join(std::initializer_list<std::string> parts) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += ", ";
        out += p;
    }
    return out;
}

template <typename T>
std::string kv(const std::string& k, T v) {
    std::ostringstream os;
    os << k << " " << v;
    return os.str();
}

// X, Y and the name-sorted U.
TestWorld three_unknowns() {
    TestWorld w;
    w.term_unknowns.resize(2);
    return w;
}

//------------------------------------------------------------------------------

Outcome permutations() {
    Gen g(1);
    const std::vector<std::vector<NameSort>> sort_sets = {{"n"}, {"n", "m"}};
    int bad = 0;
    auto t0 = Clock::now();
    for (int i = 0; i < kPerms; ++i) {
        const auto& sorts = sort_sets[g.range(0, 1)];
        PermWord pw = random_perm_word(g, sorts, 6, 3, kPermWindow);
        PermWord qw = random_perm_word(g, sorts, 6, 3, kPermWindow);
        Perm p = perm_of(pw), q = perm_of(qw);
        bool ok = agrees_pointwise(p, [&](const Atom& x) { return eval_word(pw, x); }, sorts, kPermWindow) &&
                  agrees_pointwise(compose(p, q), [&](const Atom& x) { return eval_word(pw, eval_word(qw, x)); },
                                   sorts, kPermWindow) &&
                  agrees_pointwise(compose(inverse(p), p), [](const Atom& x) { return x; }, sorts, kPermWindow);
        // Canonical equality against pointwise equality, on a window wide
        // enough to see every moved atom.
        PermWord padded = pw;
        Atom a{sorts[0], g.range(-kPermWindow, kPermWindow)}, b{sorts[0], g.range(-kPermWindow, kPermWindow)};
        padded.insert(padded.begin() + g.range(0, static_cast<int>(padded.size())), 2, PermFactor{false, a, b, "", 0});
        Perm same = perm_of(padded);
        int wide = static_cast<int>(std::max(p.index_bound(), q.index_bound())) * 2 + kPermWindow;
        auto pointwise_equal = [&](const Perm& x, const Perm& y) {
            return agrees_pointwise(x, [&](const Atom& t) { return y(t); }, sorts, wide);
        };
        if (!(same == p) || !pointwise_equal(same, p)) ok = false;
        if ((p == q) != pointwise_equal(p, q)) ok = false;
        if (!ok) ++bad;
    }
    double secs = seconds_since(t0);
    return {bad == 0 && secs < kPermSeconds,
            join({kv("perms", kPerms), kv("mismatches", bad), kv("seconds", secs), kv("limit", kPermSeconds)})};
}

//------------------------------------------------------------------------------

Outcome alpha() {
    Gen g(2);
    TestWorld w = three_unknowns();
    TermGen tg{g, w};
    int mismatches = 0, positives = 0, negatives = 0, law_failures = 0;
    auto check_pair = [&](const auto& u, const auto& v, const auto& x, const Perm& pi) {
        bool k = alpha_eq(u, v);
        if (k != alpha_oracle(u, v)) ++mismatches;
        (k ? positives : negatives)++;
        bool laws = alpha_eq(u, u) && alpha_eq(v, u) == k && alpha_eq(v, x);
        if (k) laws = laws && alpha_eq(u, x);
        laws = laws && alpha_eq(act(pi, u), act(pi, v)) == k;
        if (k) laws = laws && fa(u) == fa(v);
        if (!laws) ++law_failures;
    };
    for (int i = 0; i < kAlphaPairs / 2; ++i) {
        Prop u = tg.prop(g.range(1, kAlphaDepth));
        Prop v = u;
        switch (i % 3) {
        case 0: v = alpha_variant(g, u); break;
        case 1: v = act(tg.small_perm(), alpha_variant(g, u)); break;
        default: v = tg.prop(g.range(1, kAlphaDepth)); break;
        }
        check_pair(u, v, alpha_variant(g, v), random_perm(g, {"n"}, 6, 3, 4));
    }
    for (int i = 0; i < kAlphaPairs / 2; ++i) {
        Term u = tg.term(g.range(1, kAlphaDepth));
        Term v = u;
        switch (i % 3) {
        case 0: v = alpha_variant(g, u); break;
        case 1: v = act(tg.small_perm(), alpha_variant(g, u)); break;
        default: v = tg.term(g.range(1, kAlphaDepth)); break;
        }
        check_pair(u, v, alpha_variant(g, v), random_perm(g, {"n"}, 6, 3, 4));
    }

    Context ctx;
    parse_declarations(ctx, "namesort n\nbasesort i\npred P : [n]i\nunknown X : i / A<\nunknown Y : i / A<\n");
    bool example = alpha_eq(parse_prop(ctx, "forall X . P([n#-1]X)"), parse_prop(ctx, "forall Y . P([n#0](n#0 n#-1) * Y)"));

    return {mismatches == 0 && law_failures == 0 && example && positives > 0 && negatives > 0,
            join({kv("pairs", kAlphaPairs), kv("equivalent", positives), kv("oracle mismatches", mismatches),
                  kv("law failures", law_failures), std::string("example ") + (example ? "accepted" : "rejected")})};
}

//------------------------------------------------------------------------------

Outcome substitution() {
    Gen g(3);
    TestWorld w = three_unknowns();
    TermGen tg{g, w};
    int equi_bad = 0;
    for (int i = 0; i < kSubstInstances; ++i) {
        Term r = tg.term(g.range(1, 4));
        Substitution th = tg.substitution(2);
        Perm pi = random_perm(g, {"n"}, 6, 3, 4);
        if (!alpha_eq(subst_apply(th, act(pi, r)), act(pi, subst_apply(th, r)))) ++equi_bad;
    }

    int comm_bad = 0, comm_done = 0, comm_skipped = 0;
    while (comm_done < kSubstInstances && comm_skipped < 20 * kSubstInstances) {
        const Unknown& x = g.pick(w.term_unknowns);
        const Unknown& y = g.pick(w.term_unknowns);
        if (x == y) continue;
        Term r = tg.term(g.range(1, 4));
        Term t = tg.for_unknown(x, 2);
        Term u = tg.for_unknown(y, 2);
        if (fv(t).count(y)) {
            ++comm_skipped;
            continue;
        }
        Substitution sx = Substitution::single(w.sig(), x, t);
        Term ut = subst_apply(sx, u);
        if (!is_subset(fa(ut), y.pmss)) {
            ++comm_skipped;
            continue;
        }
        Term lhs = subst_apply(sx, subst_apply(Substitution::single(w.sig(), y, u), r));
        Term rhs = subst_apply(Substitution::single(w.sig(), y, ut), subst_apply(sx, r));
        if (!alpha_eq(lhs, rhs)) ++comm_bad;
        ++comm_done;
    }
    return {equi_bad == 0 && comm_bad == 0 && comm_done >= kSubstInstances,
            join({kv("equivariance instances", kSubstInstances), kv("failures", equi_bad),
                  kv("commutation instances", comm_done), kv("failures", comm_bad)})};
}

//------------------------------------------------------------------------------

const char* const kSwapDecls = "namesort Atm\npred P : Atm\nunknown X : Atm / A<\ngoal forall X . P(X) |- P(Atm#0)\n";
const char* const kShiftDecls =
    "namesort n\nbasesort i\npred Q : i\nunknown X : i / A<\nunknown Y : i / A< + {n#0}\n"
    "goal forall X . Q(X) |- Q(Y)\n";

struct CheckerCase {
    const char* name;
    std::string text;
    const char* expected;  // nullptr: accepted
};

Outcome checker() {
    const std::vector<CheckerCase> cases = {
        {"swap derivation", std::string(kSwapDecls) + "proof (forallL :witness Atm#-1 (ax :formula \"P(Atm#-1)\" :perm \"(Atm#-1 Atm#0)\"))", nullptr},
        {"shift derivation",
         std::string(kShiftDecls) +
             "proof (forallL :witness \"shift{n}^-1 * Y\" (ax :formula \"Q(shift{n}^-1 * Y)\" :perm \"shift{n}^1\"))",
         nullptr},
        {"wrong permutation", std::string(kSwapDecls) + "proof (forallL :witness Atm#-1 (ax :formula \"P(Atm#-1)\" :perm id))",
         "Ax: right formula is not π·φ"},
        {"unpermitted witness",
         std::string(kSwapDecls) + "proof (forallL :witness Atm#0 (ax :formula \"P(Atm#0)\"))",
         "∀L: permission side condition fa(r) ⊆ pmss(X) violated"},
        {"stale eigenvariable",
         "namesort n\nbasesort i\npred Q : i\nunknown X : i / A<\ngoal Q(X) |- forall X . Q(X)\n"
         "proof (forallR :X X (ax :formula \"Q(X)\"))",
         "∀R: eigenvariable side condition"},
        {"missing premise", std::string(kSwapDecls) + "proof (forallL :witness Atm#-1)", "expected 1 premise(s), found 0"},
        {"ill-sorted witness",
         std::string(kShiftDecls) + "proof (forallL :witness n#-1 :seq \"forall X . Q(X) |- Q(Y)\" (ax :seq \"forall X . Q(X), Q(Y) |- Q(Y)\" :formula \"Q(Y)\"))",
         "∀L: witness sort mismatch"},
    };
    int bad = 0;
    std::string failures;
    for (const auto& c : cases) {
        std::vector<Diagnostic> diags;
        try {
            diags = check_document(parse_document(c.text));
        } catch (const Error& e) {
            diags = {{"parse", e.what()}};
        }
        bool ok;
        if (!c.expected) {
            ok = diags.empty();
        } else {
            ok = false;
            for (const auto& d : diags)
                if (d.message.find(c.expected) != std::string::npos) ok = true;
        }
        if (!ok) {
            ++bad;
            failures += std::string(" [") + c.name + (diags.empty() ? ": accepted" : ": " + diags[0].message) + "]";
        }
    }
    return {bad == 0, join({kv("cases", cases.size()), kv("failures", bad)}) + failures};
}

//------------------------------------------------------------------------------

Props subst_props(const Substitution& th, const Props& xs) {
    FreshUnknowns fr;
    return subst_apply(th, xs, fr);
}

Outcome transformations() {
    Gen g(5);
    TestWorld w;
    DerivationGen dg(g, w);
    int gen_invalid = 0, inst_done = 0, inst_bad = 0, perm_done = 0, perm_bad = 0;
    for (int i = 0; inst_done < kTransformDerivations || perm_done < kTransformDerivations; ++i) {
        if (i > 20 * kTransformDerivations) break;
        Derivation d = dg.cut_free(g.range(1, 4));
        if (!checks(w.sig(), d)) {
            ++gen_invalid;
            continue;
        }
        {
            const Unknown& x = g.pick(w.term_unknowns);
            Term r = dg.terms().for_unknown(x, 2);
            Substitution th = Substitution::single(w.sig(), x, r);
            Derivation out = instantiate(w.sig(), d, x, r);
            Sequent want{subst_props(th, d.conclusion.left), subst_props(th, d.conclusion.right)};
            if (!checks(w.sig(), out) || !same_sequent(out.conclusion, want)) ++inst_bad;
            ++inst_done;
        }
        const Sequent& s = d.conclusion;
        bool right = s.left.empty() ? true : s.right.empty() ? false : g.coin();
        const Props& side = right ? s.right : s.left;
        if (side.empty()) continue;
        Prop phi = g.pick(side);
        Perm pi = random_perm(g, {"n"}, 2, 1, 4);
        Derivation out = permute_formula(d, right, phi, pi);
        Props moved = insert(without(side, phi), act(pi, phi));
        Sequent want = right ? Sequent{s.left, moved} : Sequent{moved, s.right};
        if (!checks(w.sig(), out) || !same_sequent(out.conclusion, want)) ++perm_bad;
        ++perm_done;
    }
    return {gen_invalid == 0 && inst_bad == 0 && perm_bad == 0 && inst_done >= kTransformDerivations &&
                perm_done >= kTransformDerivations,
            join({kv("instantiate", inst_done), kv("failures", inst_bad), kv("permute", perm_done),
                  kv("failures", perm_bad), kv("invalid generated", gen_invalid)})};
}

//------------------------------------------------------------------------------

Outcome cut_elimination() {
    Gen g(6);
    TestWorld w;
    DerivationGen dg(g, w);
    int done = 0, bad = 0, gen_invalid = 0;
    std::size_t compared = 0, violations = 0, cuts_in = 0;
    auto t0 = Clock::now();
    for (int i = 0; done < kCutDerivations && i < 20 * kCutDerivations; ++i) {
        Derivation d = dg.with_cuts(g.range(1, 3), g.range(1, kMaxCuts));
        if (!checks(w.sig(), d)) {
            ++gen_invalid;
            continue;
        }
        if (count_cuts(d) == 0 || count_cuts(d) > static_cast<std::size_t>(kMaxCuts)) continue;
        cuts_in += count_cuts(d);
        CutStats st;
        Derivation out = cut_eliminate(w.sig(), d, &st);
        compared += st.compared;
        violations += st.violations;
        if (!is_cut_free(out) || !checks(w.sig(), out) || !same_sequent(out.conclusion, d.conclusion)) ++bad;
        ++done;
    }
    double secs = seconds_since(t0);
    return {done >= kCutDerivations && bad == 0 && gen_invalid == 0 && violations == 0 && compared > 0 &&
                secs < kCutSeconds,
            join({kv("derivations", done), kv("cuts", cuts_in), kv("failures", bad),
                  kv("measure comparisons", compared), kv("non-decreasing", violations),
                  kv("invalid generated", gen_invalid), kv("seconds", secs), kv("limit", kCutSeconds)})};
}

//------------------------------------------------------------------------------

Outcome fol_substitution() {
    Gen g(7);
    FolGen fg{g};
    RuleSet rs = builtin_rules("SUB");
    int bad = 0, exhausted = 0, oversize = 0;
    for (int i = 0; i < kFolItems; ++i) {
        Atom a = fg.variable();
        FolTerm t = fg.term(g.range(1, 3));
        Term target = Term::unit(), want = Term::unit();
        if (i % 2 == 0) {
            FolFormula xi = fg.formula(g.range(1, kFolNodes));
            if (fol_size(xi) > static_cast<std::size_t>(kFolNodes)) ++oversize;
            target = Term::app("sub_o", Term::tuple({Term::abs(a, amod(xi)), amod(t)}));
            want = amod(textbook_subst(xi, a, t));
        } else {
            FolTerm u = fg.term(g.range(1, kFolNodes));
            if (fol_size(u) > static_cast<std::size_t>(kFolNodes)) ++oversize;
            target = Term::app("sub_i", Term::tuple({Term::abs(a, amod(u)), amod(t)}));
            want = amod(textbook_subst(u, a, t));
        }
        RewriteResult r = rewrite(rs, target, kFuel);
        if (r.exhausted) ++exhausted;
        if (!alpha_eq(r.term, want)) ++bad;
    }
    return {bad == 0 && exhausted == 0 && oversize == 0,
            join({kv("items", kFolItems), kv("wrong normal forms", bad), kv("exhaustions", exhausted),
                  kv("fuel", kFuel)})};
}

//------------------------------------------------------------------------------

Outcome term_model() {
    Gen g(8);
    TestWorld w;
    TermGen tg{g, w};
    FolGen fg{g};
    std::vector<Term> corpus;
    for (int i = 0; i < kModelCorpus; ++i) corpus.push_back(tg.term(g.range(0, 4)));
    for (int i = 0; i < kModelCorpus / 5; ++i) corpus.push_back(amod(fg.formula(g.range(1, kFolNodes))));
    int not_identity = 0, support = 0;
    const int window = atom_window();
    for (const Term& r : corpus) {
        if (!alpha_eq(interp_term(identity_valuation(), r), r)) ++not_identity;
        if (!support_is_free_atoms(r, window)) ++support;
    }
    return {not_identity == 0 && support == 0,
            join({kv("corpus", corpus.size()), kv("interp mismatches", not_identity), kv("support failures", support),
                  kv("window", window)})};
}

//------------------------------------------------------------------------------

Outcome theories() {
    int axioms = 0, bad = 0;
    std::string failures;
    for (const std::string& name : builtin_theory_names()) {
        try {
            Theory th = builtin_theory(name);
            for (const auto& [label, p] : th.axioms) {
                typecheck(th.ctx.sig, p);
                if (!fv(p).empty()) throw TypeError(label + " is not closed");
                ++axioms;
            }
            if (th.axioms.empty()) throw LogicError("no axioms");
        } catch (const Error& e) {
            ++bad;
            failures += " [" + name + ": " + e.what() + "]";
        }
    }
    try {
        builtin_rules("SUB");
    } catch (const Error& e) {
        ++bad;
        failures += std::string(" [SUB rules: ") + e.what() + "]";
    }
    return {bad == 0, join({kv("theories", builtin_theory_names().size()), kv("axioms", axioms), kv("failures", bad)}) +
                          failures};
}

}  // namespace

int main() {
    const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
        {1, permutations}, {2, alpha},          {3, substitution}, {4, checker},  {5, transformations},
        {6, cut_elimination}, {7, fol_substitution}, {8, term_model}, {9, theories}};
    int failed = 0;
    for (const auto& [n, f] : criteria) {
        Outcome o;
        try {
            o = f();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << " (" << o.detail << ")" << std::endl;
    }
    return failed;
}
