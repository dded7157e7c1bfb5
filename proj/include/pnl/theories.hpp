#pragma once

// Built-in PNL theories over the arithmetic signature, the first-order object
// language they reflect, and the translation ⟨·⟩ from the object language
// into PNL terms.
//
// Representative atoms: n#-1 plays a (a ∈ A<) and n#0 plays b (b ∉ A<), so
// the permission set (b a)·A< is written `A< ^ {n#-1, n#0}`.

#include <string>
#include <utility>
#include <vector>

#include "pnl/parse.hpp"

namespace pnl {

struct Theory {
    std::string name;
    Context ctx;  // signature and the unknown declarations in force at the end
    std::vector<std::pair<std::string, Prop>> axioms;

    const Prop& axiom(const std::string& label) const {
        for (const auto& [l, p] : axioms)
            if (l == label) return p;
        throw LogicError("theory " + name + " has no axiom " + label);
    }
};

// Theory text: declarations and `axiom <label> : <prop>` statements. Unknown
// declarations may be repeated; later ones shadow earlier ones.
inline Theory parse_theory(const std::string& name, std::string_view text, Context ctx = {}) {
    Theory th;
    th.name = name;
    Parser p(ctx, text);
    while (!p.at_end()) {
        if (p.declaration()) continue;
        if (!p.accept_ident("axiom")) p.error("expected a declaration or an axiom");
        std::string label = p.expect_ident();
        p.expect(":");
        Prop a = p.prop();
        typecheck(ctx.sig, a);
        UnknownSet free = fv(a);
        if (!free.empty()) throw TypeError("axiom " + label + " has free unknown " + free.begin()->name);
        for (const auto& [l, _] : th.axioms)
            if (l == label) throw TypeError("duplicate axiom label " + label);
        th.axioms.emplace_back(label, a);
        ctx.labels.insert_or_assign(label, a);
    }
    th.ctx = std::move(ctx);
    return th;
}

namespace theory_text {

inline const char* const EQU = R"(signature arith

unknown X', X, Y', Y : i / A<
axiom eq2_plus : forall X' X Y' Y . (X' == X & Y' == Y) => plus(X', Y') == plus(X, Y)
axiom eq2_times : forall X' X Y' Y . (X' == X & Y' == Y) => times(X', Y') == times(X, Y)
axiom eq2_feq : forall X' X Y' Y . (X' == X & Y' == Y) => feq(X', Y') == feq(X, Y)
unknown X', X, Y', Y : o / A<
axiom eq2_fimp : forall X' X Y' Y . (X' == X & Y' == Y) => fimp(X', Y') == fimp(X, Y)

unknown X', X : i / A<
axiom eq1_succ : forall X' X . X' == X => succ(X') == succ(X)

unknown X : i / A<
axiom eq0_i : forall X . X == X
unknown X : o / A<
axiom eq0_o : forall X . X == X

unknown Z', Z : o / A<
axiom eq_fall : forall Z' Z . Z' == Z => fall([n#-1]Z') == fall([n#-1]Z)

unknown X', X, Y', Y : i / A<
axiom eq_sub_i : forall X' X Y' Y . (X' == X & Y' == Y) => sub_i([n#-1]X', Y') == sub_i([n#-1]X, Y)
unknown X', X : o / A<
axiom eq_sub_o : forall X' X Y' Y . (X' == X & Y' == Y) => sub_o([n#-1]X', Y') == sub_o([n#-1]X, Y)

unknown Z', Z : o / A<
axiom eq_o_eps : forall Z' Z . Z' == Z => (eps(Z') <=> eps(Z))
unknown X', X : i / A<
axiom eq_i_eps : forall X' X . X' == X => eps(feq(X', X))
)";

inline const char* const SUB = R"(signature arith

unknown X'', X', X : i / A<
axiom subvar : forall X . var(n#-1)[n#-1 |-> X] == X

unknown Z : i / A< ^ {n#-1, n#0}
axiom subfresh_i : forall X Z . Z[n#-1 |-> X] == Z
unknown Z : o / A< ^ {n#-1, n#0}
axiom subfresh_o : forall X Z . Z[n#-1 |-> X] == Z

axiom subsucc : forall X' X . succ(X')[n#-1 |-> X] == succ(X'[n#-1 |-> X])
axiom subplus : forall X'' X' X . plus(X'', X')[n#-1 |-> X] == plus(X''[n#-1 |-> X], X'[n#-1 |-> X])
axiom subtimes : forall X'' X' X . times(X'', X')[n#-1 |-> X] == times(X''[n#-1 |-> X], X'[n#-1 |-> X])
axiom subfeq : forall X'' X' X . feq(X'', X')[n#-1 |-> X] == feq(X''[n#-1 |-> X], X'[n#-1 |-> X])
unknown X'', X' : o / A<
axiom subfimp : forall X'' X' X . fimp(X'', X')[n#-1 |-> X] == fimp(X''[n#-1 |-> X], X'[n#-1 |-> X])

unknown Z : o / A< ^ {n#-1, n#0}
axiom suball : forall X Z . fall([n#0]Z)[n#-1 |-> X] == fall([n#0](Z[n#-1 |-> X]))

unknown X : i / A<
axiom subid_i : forall X . X[n#-1 |-> var(n#-1)] == X
unknown X : o / A<
axiom subid_o : forall X . X[n#-1 |-> var(n#-1)] == X
)";

inline const char* const FOL = R"(signature arith

unknown Z', Z : o / A<
unknown X : i / A<
axiom fol_imp : forall Z' Z . eps(fimp(Z', Z)) <=> (eps(Z') => eps(Z))
axiom fol_all : forall Z . eps(fall([n#-1]Z)) <=> (forall X . eps(Z[n#-1 |-> X]))
axiom fol_bot : eps(fbot) => false
)";

inline const char* const ARITH = R"(signature arith

unknown X', X : i / A<
unknown Z : o / A<
axiom PS0 : forall X . succ(X) == zero => false
axiom PSS : forall X' X . succ(X') == succ(X) => X' == X
axiom Pplus0 : forall X . plus(X, zero) == X
axiom Pplussucc : forall X' X . plus(X', succ(X)) == plus(succ(X'), X)
axiom Ptimes0 : forall X . times(X, zero) == zero
axiom Ptimessucc : forall X' X . times(X', succ(X)) == plus(times(X', X), X)
axiom PInd : forall Z . eps(Z[n#-1 |-> zero]) =>
    (forall X . eps(Z[n#-1 |-> X]) => eps(Z[n#-1 |-> succ(X)])) =>
    (forall X . eps(Z[n#-1 |-> X]))
)";

inline const char* const LAM_IND = R"(signature arith
term app : (i, i) i
term lam : ([n]i) i

unknown Z : o / A<
unknown X, Y : i / A<
axiom lam_ind : forall Z . eps(Z[n#-1 |-> var(n#-1)]) =>
    (forall X . eps(Z[n#-1 |-> X]) => eps(Z[n#-1 |-> lam([n#-1]X)])) =>
    (forall X Y . eps(Z[n#-1 |-> X]) => eps(Z[n#-1 |-> Y]) => eps(Z[n#-1 |-> app(X, Y)])) =>
    (forall X . eps(Z[n#-1 |-> X]))
)";

inline const char* const FRESH = R"(signature arith
pred fresh : (n, i)

unknown X : i / A<
axiom fresh_swap : forall X . fresh(n#-1, X) <=> (n#0 n#-1) * X == X
)";

inline const char* const ABS = R"(signature arith
term abs : (n, i) i

unknown X : i / A<
axiom abs_alpha : forall X . abs(n#0, (n#0 n#-1) * X) == abs(n#-1, X)
)";

}  // namespace theory_text

inline const std::vector<std::string>& builtin_theory_names() {
    static const std::vector<std::string> names = {"EQU", "SUB", "FOL", "ARITH", "LAM-IND", "FRESH", "ABS"};
    return names;
}

inline const char* builtin_theory_text(const std::string& name) {
    if (name == "EQU") return theory_text::EQU;
    if (name == "SUB") return theory_text::SUB;
    if (name == "FOL") return theory_text::FOL;
    if (name == "ARITH") return theory_text::ARITH;
    if (name == "LAM-IND") return theory_text::LAM_IND;
    if (name == "FRESH") return theory_text::FRESH;
    if (name == "ABS") return theory_text::ABS;
    return nullptr;
}

inline Theory builtin_theory(const std::string& name) {
    const char* text = builtin_theory_text(name);
    if (!text) throw LogicError("unknown theory " + name);
    return parse_theory(name, text);
}

//------------------------------------------------------------------------------
// First-order object language
//------------------------------------------------------------------------------

inline const NameSort kFolSort = "n";

struct FolTerm {
    enum class Kind { Var, Zero, Succ, Plus, Times };
    Kind kind = Kind::Zero;
    Atom var;
    std::vector<FolTerm> kids;

    static FolTerm variable(Atom a) { return FolTerm{Kind::Var, std::move(a), {}}; }
    static FolTerm zero() { return FolTerm{Kind::Zero, {}, {}}; }
    static FolTerm succ(FolTerm t) { return FolTerm{Kind::Succ, {}, {std::move(t)}}; }
    static FolTerm plus(FolTerm a, FolTerm b) { return FolTerm{Kind::Plus, {}, {std::move(a), std::move(b)}}; }
    static FolTerm times(FolTerm a, FolTerm b) { return FolTerm{Kind::Times, {}, {std::move(a), std::move(b)}}; }

    bool operator==(const FolTerm& o) const { return kind == o.kind && var == o.var && kids == o.kids; }
};

struct FolFormula {
    enum class Kind { Eq, Bot, Imp, Forall };
    Kind kind = Kind::Bot;
    std::vector<FolTerm> terms;       // Eq
    std::vector<FolFormula> kids;     // Imp (2), Forall (1)
    Atom var;                         // Forall

    static FolFormula eq(FolTerm a, FolTerm b) { return FolFormula{Kind::Eq, {std::move(a), std::move(b)}, {}, {}}; }
    static FolFormula bot() { return FolFormula{Kind::Bot, {}, {}, {}}; }
    static FolFormula imp(FolFormula a, FolFormula b) { return FolFormula{Kind::Imp, {}, {std::move(a), std::move(b)}, {}}; }
    static FolFormula forall(Atom a, FolFormula b) { return FolFormula{Kind::Forall, {}, {std::move(b)}, std::move(a)}; }

    bool operator==(const FolFormula& o) const {
        return kind == o.kind && terms == o.terms && kids == o.kids && var == o.var;
    }
};

inline FolFormula fol_neg(FolFormula a) { return FolFormula::imp(std::move(a), FolFormula::bot()); }
inline FolFormula fol_conj(FolFormula a, FolFormula b) {
    return fol_neg(FolFormula::imp(std::move(a), fol_neg(std::move(b))));
}
inline FolFormula fol_disj(FolFormula a, FolFormula b) { return FolFormula::imp(fol_neg(std::move(a)), std::move(b)); }

inline void fol_vars(const FolTerm& t, AtomList& out) {
    if (t.kind == FolTerm::Kind::Var) out.insert(t.var);
    for (const auto& k : t.kids) fol_vars(k, out);
}

inline AtomList fol_fv(const FolTerm& t) {
    AtomList out;
    fol_vars(t, out);
    return out;
}

inline AtomList fol_fv(const FolFormula& f) {
    AtomList out;
    switch (f.kind) {
    case FolFormula::Kind::Eq:
        for (const auto& t : f.terms) fol_vars(t, out);
        break;
    case FolFormula::Kind::Bot: break;
    case FolFormula::Kind::Imp:
        for (const auto& k : f.kids) {
            AtomList s = fol_fv(k);
            out.insert(s.begin(), s.end());
        }
        break;
    case FolFormula::Kind::Forall:
        out = fol_fv(f.kids[0]);
        out.erase(f.var);
        break;
    }
    return out;
}

inline void fol_all_vars(const FolFormula& f, AtomList& out) {
    for (const auto& t : f.terms) fol_vars(t, out);
    for (const auto& k : f.kids) fol_all_vars(k, out);
    if (f.kind == FolFormula::Kind::Forall) out.insert(f.var);
}

inline FolTerm fol_subst(const FolTerm& u, const Atom& a, const FolTerm& t) {
    if (u.kind == FolTerm::Kind::Var) return u.var == a ? t : u;
    FolTerm out = u;
    for (auto& k : out.kids) k = fol_subst(k, a, t);
    return out;
}

// Capture-avoiding; a bound variable that would capture is renamed to the
// smallest non-negative index not otherwise in use.
inline FolFormula fol_subst(const FolFormula& f, const Atom& a, const FolTerm& t) {
    switch (f.kind) {
    case FolFormula::Kind::Bot: return f;
    case FolFormula::Kind::Eq: return FolFormula::eq(fol_subst(f.terms[0], a, t), fol_subst(f.terms[1], a, t));
    case FolFormula::Kind::Imp: return FolFormula::imp(fol_subst(f.kids[0], a, t), fol_subst(f.kids[1], a, t));
    case FolFormula::Kind::Forall: {
        const Atom& b = f.var;
        if (b == a) return f;
        AtomList body_fv = fol_fv(f.kids[0]);
        if (!body_fv.count(a)) return f;
        AtomList tfv = fol_fv(t);
        if (!tfv.count(b)) return FolFormula::forall(b, fol_subst(f.kids[0], a, t));
        AtomList avoid = tfv;
        fol_all_vars(f, avoid);
        avoid.insert(a);
        Atom c = fresh_atom(b.sort, AtomSet::finite(avoid), Side::Above);
        FolFormula renamed = fol_subst(f.kids[0], b, FolTerm::variable(c));
        return FolFormula::forall(c, fol_subst(renamed, a, t));
    }
    }
    return f;
}

inline std::string to_string(const FolTerm& t) {
    switch (t.kind) {
    case FolTerm::Kind::Var: return to_string(t.var);
    case FolTerm::Kind::Zero: return "0";
    case FolTerm::Kind::Succ: return "succ(" + to_string(t.kids[0]) + ")";
    case FolTerm::Kind::Plus: return "(" + to_string(t.kids[0]) + " + " + to_string(t.kids[1]) + ")";
    case FolTerm::Kind::Times: return "(" + to_string(t.kids[0]) + " * " + to_string(t.kids[1]) + ")";
    }
    return "?";
}

inline std::string to_string(const FolFormula& f) {
    switch (f.kind) {
    case FolFormula::Kind::Eq: return to_string(f.terms[0]) + " = " + to_string(f.terms[1]);
    case FolFormula::Kind::Bot: return "false";
    case FolFormula::Kind::Imp: {
        std::string l = to_string(f.kids[0]);
        if (f.kids[0].kind == FolFormula::Kind::Imp || f.kids[0].kind == FolFormula::Kind::Forall) l = "(" + l + ")";
        return l + " => " + to_string(f.kids[1]);
    }
    case FolFormula::Kind::Forall: return "forall " + to_string(f.var) + " . " + to_string(f.kids[0]);
    }
    return "?";
}

struct FolSequent {
    std::vector<FolFormula> left;
    std::vector<FolFormula> right;
};

// Object-language parser: `+`, `*`, `succ`, `0`, atoms as variables, `=`,
// `false`, `=>`, `~`, `&`, `|`, `forall a . ξ`, sequents `Ξ |- Χ`.
class FolParser {
public:
    FolParser(Context& ctx, std::string_view src) : p_(ctx, src) {}

    FolFormula formula() {
        FolFormula a = disj();
        if (p_.accept_any({"=>", "⇒"})) return FolFormula::imp(a, formula());
        return a;
    }

    FolTerm term() {
        FolTerm a = product();
        while (p_.accept("+")) a = FolTerm::plus(a, product());
        return a;
    }

    FolSequent sequent() {
        FolSequent s;
        if (!p_.is_sym("|-") && !p_.is_sym("⊢")) {
            do s.left.push_back(formula());
            while (p_.accept(","));
        }
        if (!p_.accept_any({"|-", "⊢"})) p_.error("expected '|-'");
        if (!p_.at_end()) {
            do s.right.push_back(formula());
            while (p_.accept(","));
        }
        return s;
    }

    Parser& base() { return p_; }

private:
    FolFormula disj() {
        FolFormula a = conj();
        if (p_.accept_any({"|", "∨"})) return fol_disj(a, disj());
        return a;
    }
    FolFormula conj() {
        FolFormula a = unary();
        if (p_.accept_any({"&", "∧"})) return fol_conj(a, conj());
        return a;
    }
    FolFormula unary() {
        if (p_.accept_any({"~", "¬"})) return fol_neg(unary());
        if (p_.accept_ident("false") || p_.accept("⊥")) return FolFormula::bot();
        if (p_.accept_ident("forall") || p_.accept("∀")) {
            Atom a = p_.expect_atom();
            p_.expect(".");
            return FolFormula::forall(a, formula());
        }
        if (p_.is_sym("(")) {
            std::size_t save = p_.position();
            try {
                p_.next();
                FolFormula f = formula();
                p_.expect(")");
                if (!p_.is_sym("=") && !p_.is_sym("+") && !p_.is_sym("*")) return f;
            } catch (const Error&) {
            }
            p_.rewind(save);
        }
        FolTerm l = term();
        p_.expect("=");
        return FolFormula::eq(l, term());
    }
    FolTerm product() {
        FolTerm a = primary();
        while (p_.accept("*")) a = FolTerm::times(a, primary());
        return a;
    }
    FolTerm primary() {
        if (p_.is_atom()) return FolTerm::variable(p_.expect_atom());
        if (p_.peek().kind == Token::Kind::Int) {
            if (p_.peek().value != 0) p_.error("only the numeral 0 is primitive");
            p_.next();
            return FolTerm::zero();
        }
        if (p_.accept_ident("succ")) {
            p_.expect("(");
            FolTerm t = term();
            p_.expect(")");
            return FolTerm::succ(t);
        }
        p_.expect("(");
        FolTerm t = term();
        p_.expect(")");
        return t;
    }

    Parser p_;
};

inline Context fol_context() {
    Context ctx;
    ctx.sig = arith_signature();
    return ctx;
}

inline FolFormula parse_fol_formula(std::string_view s) {
    Context ctx = fol_context();
    FolParser p(ctx, s);
    FolFormula f = p.formula();
    p.base().expect_end();
    return f;
}

inline FolTerm parse_fol_term(std::string_view s) {
    Context ctx = fol_context();
    FolParser p(ctx, s);
    FolTerm t = p.term();
    p.base().expect_end();
    return t;
}

inline FolSequent parse_fol_sequent(std::string_view s) {
    Context ctx = fol_context();
    FolParser p(ctx, s);
    FolSequent q = p.sequent();
    p.base().expect_end();
    return q;
}

//------------------------------------------------------------------------------
// The translation ⟨·⟩
//------------------------------------------------------------------------------

// Variables become var(a): a bare atom would have the name sort, not i.
inline Term amod(const FolTerm& t) {
    switch (t.kind) {
    case FolTerm::Kind::Var: return Term::app("var", Term::atom(t.var));
    case FolTerm::Kind::Zero: return Term::app("zero", Term::unit());
    case FolTerm::Kind::Succ: return Term::app("succ", amod(t.kids[0]));
    case FolTerm::Kind::Plus: return Term::app("plus", Term::tuple({amod(t.kids[0]), amod(t.kids[1])}));
    case FolTerm::Kind::Times: return Term::app("times", Term::tuple({amod(t.kids[0]), amod(t.kids[1])}));
    }
    return Term::unit();
}

inline Term amod(const FolFormula& f) {
    switch (f.kind) {
    case FolFormula::Kind::Eq: return Term::app("feq", Term::tuple({amod(f.terms[0]), amod(f.terms[1])}));
    case FolFormula::Kind::Bot: return Term::app("fbot", Term::unit());
    case FolFormula::Kind::Imp: return Term::app("fimp", Term::tuple({amod(f.kids[0]), amod(f.kids[1])}));
    case FolFormula::Kind::Forall: return Term::app("fall", Term::abs(f.var, amod(f.kids[0])));
    }
    return Term::unit();
}

// (ξ1 ∧ … ∧ ξk) ⇒ (χ1 ∨ … ∨ χl), right-nested; the empty conjunction is
// ⊥ ⇒ ⊥ and the empty disjunction is ⊥.
inline FolFormula fol_sequent_formula(const FolSequent& s) {
    FolFormula l = fol_neg(FolFormula::bot());
    if (!s.left.empty()) {
        l = s.left.back();
        for (std::size_t i = s.left.size() - 1; i-- > 0;) l = fol_conj(s.left[i], l);
    }
    FolFormula r = FolFormula::bot();
    if (!s.right.empty()) {
        r = s.right.back();
        for (std::size_t i = s.right.size() - 1; i-- > 0;) r = fol_disj(s.right[i], r);
    }
    return FolFormula::imp(l, r);
}

// ε(∀̇[a1]…∀̇[an]⟨…⟩), closing over free variables in ascending index order
// (a1 outermost).
inline Prop amod_sequent(const FolSequent& s) {
    FolFormula f = fol_sequent_formula(s);
    AtomList free = fol_fv(f);
    Term body = amod(f);
    for (auto it = free.rbegin(); it != free.rend(); ++it) body = Term::app("fall", Term::abs(*it, body));
    return Prop::pred("eps", body);
}

}  // namespace pnl
