#pragma once

// Sequents, explicit derivation trees and the rule checker.
//
// Sequent sides are lists read as sets modulo alpha-equivalence. Every node
// records its conclusion; the checker verifies each node against the shape of
// its rule and never searches.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pnl/subst.hpp"

namespace pnl {

using Props = std::vector<Prop>;

inline bool mem(const Props& xs, const Prop& p) {
    for (const Prop& x : xs)
        if (alpha_eq(x, p)) return true;
    return false;
}

inline Props insert(Props xs, const Prop& p) {
    if (!mem(xs, p)) xs.push_back(p);
    return xs;
}

inline Props unite(Props xs, const Props& ys) {
    for (const Prop& y : ys) xs = insert(std::move(xs), y);
    return xs;
}

inline Props without(const Props& xs, const Prop& p) {
    Props out;
    for (const Prop& x : xs)
        if (!alpha_eq(x, p)) out.push_back(x);
    return out;
}

inline bool subset(const Props& xs, const Props& ys) {
    for (const Prop& x : xs)
        if (!mem(ys, x)) return false;
    return true;
}

inline bool same_set(const Props& xs, const Props& ys) { return subset(xs, ys) && subset(ys, xs); }

struct Sequent {
    Props left;
    Props right;
};

inline bool same_sequent(const Sequent& a, const Sequent& b) {
    return same_set(a.left, b.left) && same_set(a.right, b.right);
}

inline UnknownSet fv(const Props& xs) {
    UnknownSet out;
    for (const Prop& x : xs) {
        UnknownSet f = fv(x);
        out.insert(f.begin(), f.end());
    }
    return out;
}

// EqS and EqR are the optional equality rules; the checker only accepts them
// when asked to.
enum class Rule { Ax, BotL, ImpL, ImpR, ForallL, ForallR, Cut, EqS, EqR };

inline const char* rule_name(Rule r) {
    switch (r) {
    case Rule::Ax: return "Ax";
    case Rule::BotL: return "⊥L";
    case Rule::ImpL: return "⇒L";
    case Rule::ImpR: return "⇒R";
    case Rule::ForallL: return "∀L";
    case Rule::ForallR: return "∀R";
    case Rule::Cut: return "Cut";
    case Rule::EqS: return "≈S";
    case Rule::EqR: return "≈R";
    }
    return "?";
}

inline std::size_t arity(Rule r) {
    switch (r) {
    case Rule::Ax:
    case Rule::BotL: return 0;
    case Rule::ImpL:
    case Rule::Cut: return 2;
    default: return 1;
    }
}

// `formula` is the principal formula (Ax: the left formula; Cut: the cut
// formula). `perm` is the Ax permutation, `witness` the ∀L instance and
// `eigen` the unknown generalised by ∀R.
struct Derivation {
    Rule rule = Rule::Ax;
    Sequent conclusion;
    std::optional<Prop> formula;
    Perm perm;
    std::optional<Term> witness;
    std::optional<Unknown> eigen;
    std::optional<Prop> aux;
    std::vector<Derivation> premises;

    const Prop& principal() const { return *formula; }
};

inline Derivation make_ax(Sequent s, Prop phi, Perm pi) {
    Derivation d;
    d.rule = Rule::Ax;
    d.conclusion = std::move(s);
    d.formula = std::move(phi);
    d.perm = std::move(pi);
    return d;
}

inline Derivation make_botl(Sequent s) {
    Derivation d;
    d.rule = Rule::BotL;
    d.conclusion = std::move(s);
    return d;
}

inline Derivation make_node(Rule r, Sequent s, Prop p, std::vector<Derivation> prems) {
    Derivation d;
    d.rule = r;
    d.conclusion = std::move(s);
    d.formula = std::move(p);
    d.premises = std::move(prems);
    return d;
}

inline Derivation make_impl(Sequent s, Prop p, Derivation d0, Derivation d1) {
    return make_node(Rule::ImpL, std::move(s), std::move(p), {std::move(d0), std::move(d1)});
}

inline Derivation make_impr(Sequent s, Prop p, Derivation d0) {
    return make_node(Rule::ImpR, std::move(s), std::move(p), {std::move(d0)});
}

inline Derivation make_foralll(Sequent s, Prop p, Term w, Derivation d0) {
    Derivation d = make_node(Rule::ForallL, std::move(s), std::move(p), {std::move(d0)});
    d.witness = std::move(w);
    return d;
}

inline Derivation make_forallr(Sequent s, Prop p, Unknown y, Derivation d0) {
    Derivation d = make_node(Rule::ForallR, std::move(s), std::move(p), {std::move(d0)});
    d.eigen = std::move(y);
    return d;
}

inline Derivation make_eqs(Sequent s, Prop eq, Unknown x, Prop phi, Derivation d0) {
    Derivation d = make_node(Rule::EqS, std::move(s), std::move(eq), {std::move(d0)});
    d.eigen = std::move(x);
    d.aux = std::move(phi);
    return d;
}

inline Derivation make_eqr(Sequent s, Prop eq, Derivation d0) {
    return make_node(Rule::EqR, std::move(s), std::move(eq), {std::move(d0)});
}

inline Derivation make_cut(Sequent s, Prop chi, Derivation d0, Derivation d1) {
    return make_node(Rule::Cut, std::move(s), std::move(chi), {std::move(d0), std::move(d1)});
}

// Body of ∀X.φ with the bound unknown renamed to y. Requires y ∉ fV(∀X.φ).
inline Prop forall_body_at(const Prop& p, const Unknown& y) {
    if (p.binder() == y) return p.body();
    return act(Perm2::swap(p.binder(), y), p.body());
}

// Whether the principal formula lives on the right of the conclusion.
inline bool principal_on_right(Rule r) { return r == Rule::ImpR || r == Rule::ForallR; }

// Active formulas of premise i (left, right). Assumes the node is well shaped.
inline std::pair<Props, Props> actives(const Derivation& d, std::size_t i, FreshUnknowns& fresh) {
    switch (d.rule) {
    case Rule::ImpL:
        if (i == 0) return {{}, {d.principal().lhs()}};
        return {{d.principal().rhs()}, {}};
    case Rule::ImpR: return {{d.principal().lhs()}, {d.principal().rhs()}};
    case Rule::ForallL: {
        const Prop& p = d.principal();
        return {{subst_apply(Substitution::unchecked(p.binder(), *d.witness), p.body(), fresh)}, {}};
    }
    case Rule::ForallR: return {{}, {forall_body_at(d.principal(), *d.eigen)}};
    case Rule::Cut:
        if (i == 0) return {{}, {d.principal()}};
        return {{d.principal()}, {}};
    case Rule::EqS: {
        const Term& s = d.principal().arg().elems()[1];
        return {{subst_apply(Substitution::unchecked(*d.eigen, s), *d.aux, fresh)}, {}};
    }
    case Rule::EqR: return {{d.principal()}, {}};
    default: return {{}, {}};
    }
}

inline std::size_t count_nodes(const Derivation& d) {
    std::size_t n = 1;
    for (const Derivation& p : d.premises) n += count_nodes(p);
    return n;
}

inline std::size_t count_cuts(const Derivation& d) {
    std::size_t n = d.rule == Rule::Cut ? 1 : 0;
    for (const Derivation& p : d.premises) n += count_cuts(p);
    return n;
}

inline bool is_cut_free(const Derivation& d) { return count_cuts(d) == 0; }

inline void collect_unknowns(const Props& xs, UnknownSet& out) {
    for (const Prop& x : xs) collect_unknowns(x, out);
}

inline void collect_unknowns(const Derivation& d, UnknownSet& out) {
    collect_unknowns(d.conclusion.left, out);
    collect_unknowns(d.conclusion.right, out);
    if (d.formula) collect_unknowns(*d.formula, out);
    if (d.witness) collect_unknowns(*d.witness, out);
    if (d.eigen) out.insert(*d.eigen);
    if (d.aux) collect_unknowns(*d.aux, out);
    for (const Derivation& p : d.premises) collect_unknowns(p, out);
}

//------------------------------------------------------------------------------
// Checking
//------------------------------------------------------------------------------

inline bool uses_equality_rules(const Derivation& d) {
    if (d.rule == Rule::EqS || d.rule == Rule::EqR) return true;
    for (const Derivation& p : d.premises)
        if (uses_equality_rules(p)) return true;
    return false;
}

struct CheckOptions {
    bool equality_rules = false;
};

struct Diagnostic {
    std::string path;  // "root", "root.0", "root.0.1", ...
    std::string message;
};

namespace detail {

class Checker {
public:
    Checker(const Signature& sig, CheckOptions opts) : sig_(sig), opts_(opts) {}

    std::vector<Diagnostic> run(const Derivation& d) {
        for (const Prop& p : d.conclusion.left) typed(p, "root", "conclusion");
        for (const Prop& p : d.conclusion.right) typed(p, "root", "conclusion");
        node(d, "root");
        return std::move(out_);
    }

private:
    void fail(const std::string& path, const std::string& msg) { out_.push_back({path, msg}); }

    bool typed(const Prop& p, const std::string& path, const std::string& what) {
        try {
            typecheck(sig_, p);
            return true;
        } catch (const Error& e) {
            fail(path, std::string(what) + " is ill-typed: " + e.what());
            return false;
        }
    }

    void node(const Derivation& d, const std::string& path) {
        const Rule r = d.rule;
        const std::string rn = rule_name(r);
        bool ok = true;
        if (d.premises.size() != arity(r)) {
            fail(path, rn + ": expected " + std::to_string(arity(r)) + " premise(s), found " +
                           std::to_string(d.premises.size()));
            ok = false;
        }
        if (r != Rule::BotL && !d.formula) {
            fail(path, rn + ": missing principal formula");
            ok = false;
        }
        if (ok) rule(d, path, rn);
        for (std::size_t i = 0; i < d.premises.size(); ++i) node(d.premises[i], path + "." + std::to_string(i));
    }

    void rule(const Derivation& d, const std::string& path, const std::string& rn) {
        const Sequent& c = d.conclusion;
        switch (d.rule) {
        case Rule::Ax: {
            const Prop& phi = d.principal();
            if (!mem(c.left, phi)) fail(path, "Ax: principal formula φ is not on the left");
            if (!mem(c.right, act(d.perm, phi))) fail(path, "Ax: right formula is not π·φ");
            return;
        }
        case Rule::BotL:
            if (!mem(c.left, Prop::bot())) fail(path, "⊥L: ⊥ is not on the left");
            return;
        case Rule::Cut: {
            const Prop& chi = d.principal();
            if (!typed(chi, path, "Cut: cut formula")) return;
            const Sequent& p0 = d.premises[0].conclusion;
            const Sequent& p1 = d.premises[1].conclusion;
            if (!same_set(p0.left, c.left) || !same_set(p0.right, insert(c.right, chi)))
                fail(path, "Cut: left premise is not Φ ⊢ φ,Ψ");
            if (!same_set(p1.left, insert(c.left, chi)) || !same_set(p1.right, c.right))
                fail(path, "Cut: right premise is not Φ,φ ⊢ Ψ");
            return;
        }
        case Rule::EqS:
        case Rule::EqR: equality(d, path, rn); return;
        default: break;
        }

        const Prop& p = d.principal();
        const bool right = principal_on_right(d.rule);
        const bool want_imp = d.rule == Rule::ImpL || d.rule == Rule::ImpR;
        if (want_imp && !p.is(Prop::Kind::Imp)) {
            fail(path, rn + ": principal formula is not an implication");
            return;
        }
        if (!want_imp && !p.is(Prop::Kind::Forall)) {
            fail(path, rn + ": principal formula is not a universal quantification");
            return;
        }
        if (!mem(right ? c.right : c.left, p)) {
            fail(path, rn + ": principal formula is not on the " + (right ? "right" : "left"));
            return;
        }

        if (d.rule == Rule::ForallL) {
            if (!d.witness) {
                fail(path, "∀L: missing witness");
                return;
            }
            const Unknown& x = p.binder();
            Sort ws;
            try {
                ws = typecheck(sig_, *d.witness);
            } catch (const Error& e) {
                fail(path, std::string("∀L: witness sort mismatch: ") + e.what());
                return;
            }
            if (!(ws == x.sort)) {
                fail(path, "∀L: witness sort mismatch: r : sort(" + x.name + ") violated");
                return;
            }
            if (!is_subset(fa(*d.witness), x.pmss)) {
                fail(path, "∀L: permission side condition fa(r) ⊆ pmss(" + x.name + ") violated");
                return;
            }
        }
        if (d.rule == Rule::ForallR) {
            if (!d.eigen) {
                fail(path, "∀R: missing eigenvariable");
                return;
            }
            const Unknown& y = *d.eigen;
            if (!(y.sort == p.binder().sort) || !(y.pmss == p.binder().pmss)) {
                fail(path, "∀R: eigenvariable " + y.name + " differs in sort or permission set from the bound unknown");
                return;
            }
            if (!(y == p.binder()) && fv(p).count(y)) {
                fail(path, "∀R: eigenvariable " + y.name + " occurs free in the principal formula");
                return;
            }
            if (fv(c.left).count(y) || fv(c.right).count(y)) {
                fail(path, "∀R: eigenvariable side condition " + y.name + " ∉ fV(Φ,Ψ) violated");
                return;
            }
        }

        FreshUnknowns fresh;
        bool any = false;
        // Φ (or Ψ for right rules) may keep or drop the principal formula, uniformly across premises.
        for (int keep = 1; keep >= 0 && !any; --keep) {
            bool all = true;
            for (std::size_t i = 0; i < d.premises.size() && all; ++i) {
                auto [al, ar] = actives(d, i, fresh);
                const Sequent& ps = d.premises[i].conclusion;
                Props ctxl = c.left, ctxr = c.right;
                if (!keep) {
                    if (right)
                        ctxr = without(ctxr, p);
                    else
                        ctxl = without(ctxl, p);
                }
                all = same_set(ps.left, unite(ctxl, al)) && same_set(ps.right, unite(ctxr, ar));
            }
            any = all;
        }
        if (!any) {
            switch (d.rule) {
            case Rule::ImpL: fail(path, "⇒L: premises are not Φ ⊢ φ,Ψ and Φ,ψ ⊢ Ψ"); break;
            case Rule::ImpR: fail(path, "⇒R: premise is not Φ,φ ⊢ ψ,Ψ"); break;
            case Rule::ForallL: fail(path, "∀L: premise is not Φ,φ[X:=r] ⊢ Ψ"); break;
            case Rule::ForallR: fail(path, "∀R: premise is not Φ ⊢ φ,Ψ"); break;
            default: break;
            }
        }
    }

    // r≈s is eq_τ(r, s) for r, s of base sort τ.
    bool split_eq(const Prop& e, Term& r, Term& s) const {
        if (!e.is(Prop::Kind::Pred) || !e.arg().is(Term::Kind::Tuple) || e.arg().elems().size() != 2) return false;
        r = e.arg().elems()[0];
        s = e.arg().elems()[1];
        Sort so = typecheck(sig_, r);
        return so.kind == Sort::Kind::Base && e.name() == "eq_" + so.name;
    }

    void equality(const Derivation& d, const std::string& path, const std::string& rn) {
        if (!opts_.equality_rules) {
            fail(path, rn + ": equality rules are not enabled");
            return;
        }
        const Sequent& c = d.conclusion;
        const Prop& e = d.principal();
        if (!typed(e, path, rn + ": equation")) return;
        Term r = Term::unit(), s = Term::unit();
        if (!split_eq(e, r, s)) {
            fail(path, rn + ": formula is not an equation");
            return;
        }
        const Sequent& ps = d.premises[0].conclusion;
        if (d.rule == Rule::EqR) {
            if (!alpha_eq(r, s)) fail(path, "≈R: formula is not of the form r≈r");
            else if (!same_set(ps.left, insert(c.left, e)) || !same_set(ps.right, c.right))
                fail(path, "≈R: premise is not Φ,r≈r ⊢ Ψ");
            return;
        }
        if (!d.eigen || !d.aux) {
            fail(path, "≈S: missing unknown or context formula");
            return;
        }
        const Unknown& x = *d.eigen;
        if (!(typecheck(sig_, r) == x.sort)) {
            fail(path, "≈S: sort of " + x.name + " differs from the sort of the equation");
            return;
        }
        if (!is_subset(set_union(fa(r), fa(s)), x.pmss)) {
            fail(path, "≈S: permission side condition fa(r) ∪ fa(s) ⊆ pmss(" + x.name + ") violated");
            return;
        }
        if (!mem(c.left, e)) {
            fail(path, "≈S: equation is not on the left");
            return;
        }
        FreshUnknowns fresh;
        Prop at_r = subst_apply(Substitution::unchecked(x, r), *d.aux, fresh);
        Prop at_s = subst_apply(Substitution::unchecked(x, s), *d.aux, fresh);
        if (!mem(c.left, at_r)) {
            fail(path, "≈S: φ[X:=r] is not on the left");
            return;
        }
        if (!same_set(ps.left, insert(c.left, at_s)) || !same_set(ps.right, c.right))
            fail(path, "≈S: premise is not Φ,r≈s,φ[X:=r],φ[X:=s] ⊢ Ψ");
    }

    const Signature& sig_;
    CheckOptions opts_;
    std::vector<Diagnostic> out_;
};

}  // namespace detail

inline std::vector<Diagnostic> check(const Signature& sig, const Derivation& d, CheckOptions opts = {}) {
    return detail::Checker(sig, opts).run(d);
}

inline bool checks(const Signature& sig, const Derivation& d, CheckOptions opts = {}) {
    return check(sig, d, opts).empty();
}

//------------------------------------------------------------------------------
// Cut measure
//------------------------------------------------------------------------------

// Length of the longest path from d upwards along which chi stays on the given side.
inline std::size_t persistence(const Derivation& d, bool right, const Prop& chi) {
    if (!mem(right ? d.conclusion.right : d.conclusion.left, chi)) return 0;
    std::size_t m = 0;
    for (const Derivation& p : d.premises) m = std::max(m, persistence(p, right, chi));
    return 1 + m;
}

using CutMeasure = std::pair<std::size_t, std::size_t>;

inline CutMeasure cut_measure(const Prop& chi, const Derivation& d0, const Derivation& d1) {
    return {size(chi), persistence(d0, true, chi) + persistence(d1, false, chi)};
}

inline CutMeasure cut_measure(const Derivation& d) {
    if (d.rule != Rule::Cut || d.premises.size() != 2 || !d.formula)
        throw LogicError("cut_measure: not a Cut node");
    return cut_measure(d.principal(), d.premises[0], d.premises[1]);
}

}  // namespace pnl
