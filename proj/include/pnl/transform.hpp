#pragma once

// Derivation transformers: weakening, level-2 renaming, instantiation of an
// unknown, permutation of a single formula, and cut-elimination.

#include <optional>
#include <string>
#include <vector>

#include "pnl/proofs.hpp"

namespace pnl {

inline Props act(const Perm2& p, const Props& xs) {
    Props out;
    out.reserve(xs.size());
    for (const Prop& x : xs) out.push_back(act(p, x));
    return out;
}

inline Props act(const Perm& p, const Props& xs) {
    Props out;
    out.reserve(xs.size());
    for (const Prop& x : xs) out.push_back(act(p, x));
    return out;
}

inline Props subst_apply(const Substitution& th, const Props& xs, FreshUnknowns& fresh) {
    Props out;
    out.reserve(xs.size());
    for (const Prop& x : xs) out.push_back(subst_apply(th, x, fresh));
    return out;
}

// Renames unknowns throughout a derivation.
inline Derivation derivation_perm2(const Perm2& p, const Derivation& d) {
    if (p.is_identity()) return d;
    Derivation out = d;
    out.conclusion.left = act(p, d.conclusion.left);
    out.conclusion.right = act(p, d.conclusion.right);
    if (d.formula) out.formula = act(p, *d.formula);
    if (d.witness) out.witness = act(p, *d.witness);
    if (d.eigen) out.eigen = p(*d.eigen);
    if (d.aux) out.aux = act(p, *d.aux);
    for (auto& q : out.premises) q = derivation_perm2(p, q);
    return out;
}

// Adds formulas to both sides of every node. Eigenvariables that would clash
// with the added formulas are renamed.
inline Derivation weaken(const Derivation& d, const Props& addl, const Props& addr, FreshUnknowns& fresh) {
    if (addl.empty() && addr.empty()) return d;
    Derivation out = d;
    if (d.rule == Rule::ForallR && d.eigen && !d.premises.empty()) {
        UnknownSet added = fv(addl);
        UnknownSet r = fv(addr);
        added.insert(r.begin(), r.end());
        if (added.count(*d.eigen)) {
            UnknownSet avoid;
            collect_unknowns(d, avoid);
            collect_unknowns(addl, avoid);
            collect_unknowns(addr, avoid);
            Unknown y = fresh.make(*d.eigen, avoid);
            out.premises[0] = derivation_perm2(Perm2::swap(*d.eigen, y), d.premises[0]);
            out.eigen = y;
        }
    }
    out.conclusion.left = unite(out.conclusion.left, addl);
    out.conclusion.right = unite(out.conclusion.right, addr);
    for (auto& q : out.premises) q = weaken(q, addl, addr, fresh);
    return out;
}

// Weakens d so that its conclusion becomes the given sides. The current sides
// must already be contained in them.
inline Derivation weaken_to(const Derivation& d, const Props& left, const Props& right, FreshUnknowns& fresh) {
    Props addl, addr;
    for (const Prop& p : left)
        if (!mem(d.conclusion.left, p) && !mem(addl, p)) addl.push_back(p);
    for (const Prop& p : right)
        if (!mem(d.conclusion.right, p) && !mem(addr, p)) addr.push_back(p);
    return weaken(d, addl, addr, fresh);
}

//------------------------------------------------------------------------------
// Instantiation
//------------------------------------------------------------------------------

namespace detail {

inline Derivation instantiate_rec(const Substitution& th, const UnknownSet& nt, const Derivation& d,
                                  const UnknownSet& avoid, FreshUnknowns& fresh) {
    Derivation out = d;
    out.conclusion.left = subst_apply(th, d.conclusion.left, fresh);
    out.conclusion.right = subst_apply(th, d.conclusion.right, fresh);
    switch (d.rule) {
    case Rule::BotL: return out;
    case Rule::ForallL: {
        Prop p = d.principal();
        if (nt.count(p.binder())) {
            Unknown z = fresh.make(p.binder(), avoid);
            p = Prop::forall(z, forall_body_at(p, z));
        }
        out.formula = Prop::forall(p.binder(), subst_apply(th, p.body(), fresh));
        out.witness = subst_apply(th, *d.witness);
        break;
    }
    case Rule::ForallR: {
        out.formula = subst_apply(th, d.principal(), fresh);
        if (nt.count(*d.eigen)) {
            Unknown y = fresh.make(*d.eigen, avoid);
            out.premises[0] = derivation_perm2(Perm2::swap(*d.eigen, y), d.premises[0]);
            out.eigen = y;
        }
        break;
    }
    default: out.formula = subst_apply(th, d.principal(), fresh); break;
    }
    for (auto& q : out.premises) q = instantiate_rec(th, nt, q, avoid, fresh);
    return out;
}

}  // namespace detail

// Derivation of Φ[X:=r] ⊢ Ψ[X:=r] from a derivation of Φ ⊢ Ψ.
inline Derivation instantiate(const Signature& sig, const Derivation& d, const Unknown& x, const Term& r,
                              FreshUnknowns& fresh) {
    if (uses_equality_rules(d)) throw LogicError("instantiate: equality rules are not supported");
    Substitution th = Substitution::single(sig, x, r);
    if (th.is_identity()) return d;
    UnknownSet avoid;
    collect_unknowns(d, avoid);
    collect_fv(r, avoid);
    avoid.insert(x);
    return detail::instantiate_rec(th, th.nontriv(), d, avoid, fresh);
}

inline Derivation instantiate(const Signature& sig, const Derivation& d, const Unknown& x, const Term& r) {
    FreshUnknowns fresh;
    return instantiate(sig, d, x, r, fresh);
}

//------------------------------------------------------------------------------
// Permuting one formula
//------------------------------------------------------------------------------

inline Derivation permute_formula(const Derivation& d, bool right, const Prop& phi, const Perm& pi,
                                  FreshUnknowns& fresh);

namespace detail {

inline const Props& side_of(const Derivation& d, bool right) {
    return right ? d.conclusion.right : d.conclusion.left;
}

inline Derivation add_on(const Derivation& d, bool right, const Prop& p, FreshUnknowns& fresh) {
    if (mem(side_of(d, right), p)) return d;
    return right ? weaken(d, {}, {p}, fresh) : weaken(d, {p}, {}, fresh);
}

// Makes π·a appear on the given side of q; a disappears unless target keeps it.
inline Derivation move(const Derivation& q, bool right, const Prop& a, const Perm& pi, const Props& target,
                       FreshUnknowns& fresh) {
    Prop b = act(pi, a);
    if (!mem(side_of(q, right), a) || mem(target, a)) return add_on(q, right, b, fresh);
    return permute_formula(q, right, a, pi, fresh);
}

}  // namespace detail

// Derivation of the conclusion of d with φ replaced by π·φ on the given side.
inline Derivation permute_formula(const Derivation& d, bool right, const Prop& phi, const Perm& pi,
                                  FreshUnknowns& fresh) {
    using detail::move;
    using detail::side_of;
    if (uses_equality_rules(d)) throw LogicError("permute_formula: equality rules are not supported");
    const Props& side = side_of(d, right);
    if (!mem(side, phi))
        throw LogicError(std::string("permute_formula: formula not found on the ") + (right ? "right" : "left"));
    Prop phi2 = act(pi, phi);
    if (alpha_eq(phi2, phi)) return d;

    Derivation out = d;
    (right ? out.conclusion.right : out.conclusion.left) = insert(without(side, phi), phi2);
    const Sequent& c2 = out.conclusion;

    if (d.rule == Rule::Ax) {
        const Prop& psi = d.principal();
        if (!right && alpha_eq(psi, phi)) {
            out.formula = phi2;
            out.perm = compose(d.perm, inverse(pi));
        } else if (right && alpha_eq(act(d.perm, psi), phi)) {
            out.perm = compose(pi, d.perm);
        }
        return out;
    }
    if (d.rule == Rule::BotL) return out;

    const bool principal = d.rule != Rule::Cut && principal_on_right(d.rule) == right && alpha_eq(d.principal(), phi);

    if (!principal) {
        for (std::size_t i = 0; i < d.premises.size(); ++i) {
            auto [al, ar] = actives(d, i, fresh);
            const Props& a = right ? ar : al;
            out.premises[i] = move(d.premises[i], right, phi, pi, a, fresh);
        }
        return out;
    }

    out.formula = phi2;
    for (std::size_t i = 0; i < d.premises.size(); ++i) {
        auto [al, ar] = actives(d, i, fresh);
        Props tl = unite(c2.left, act(pi, al));
        Props tr = unite(c2.right, act(pi, ar));
        Derivation q = d.premises[i];
        for (const Prop& a : al) q = move(q, false, a, pi, tl, fresh);
        for (const Prop& a : ar) q = move(q, true, a, pi, tr, fresh);
        q = move(q, right, phi, pi, right ? tr : tl, fresh);
        q = weaken_to(q, tl, tr, fresh);
        if (!same_sequent(q.conclusion, Sequent{tl, tr}))
            throw LogicError("permute_formula: premise does not match the rebuilt rule");
        out.premises[i] = std::move(q);
    }
    return out;
}

inline Derivation permute_formula(const Derivation& d, bool right, const Prop& phi, const Perm& pi) {
    FreshUnknowns fresh;
    return permute_formula(d, right, phi, pi, fresh);
}

//------------------------------------------------------------------------------
// Cut-elimination
//------------------------------------------------------------------------------

// Instrumentation: every reduction of a cut records its measure and compares
// it with the measure of the reduction that spawned it.
struct CutStats {
    std::size_t reductions = 0;
    std::size_t compared = 0;
    std::size_t violations = 0;
    std::vector<std::string> notes;
};

namespace detail {

class CutEliminator {
public:
    CutEliminator(const Signature& sig, FreshUnknowns& fresh, CutStats* stats)
        : sig_(sig), fresh_(fresh), stats_(stats) {}

    Derivation elim(const Derivation& d) {
        if (is_cut_free(d)) return d;
        Derivation out = d;
        for (auto& q : out.premises) q = elim(q);
        if (out.rule != Rule::Cut) return out;
        return reduce(out.principal(), out.premises[0], out.premises[1], out.conclusion, std::nullopt);
    }

private:
    // d0 derives Γ ⊢ Δ,χ and d1 derives Γ,χ ⊢ Δ, both cut-free; returns a
    // cut-free derivation of Γ ⊢ Δ.
    Derivation reduce(const Prop& chi, const Derivation& d0, const Derivation& d1, const Sequent& c,
                      std::optional<CutMeasure> parent) {
        if (mem(c.right, chi)) return d0;
        if (mem(c.left, chi)) return d1;

        CutMeasure m = cut_measure(chi, d0, d1);
        if (stats_) {
            ++stats_->reductions;
            if (parent) {
                ++stats_->compared;
                if (!(m < *parent)) {
                    ++stats_->violations;
                    stats_->notes.push_back("measure (" + std::to_string(m.first) + "," + std::to_string(m.second) +
                                            ") not below (" + std::to_string(parent->first) + "," +
                                            std::to_string(parent->second) + ")");
                }
            }
        }

        if (d0.rule == Rule::Ax) {
            if (mem(c.right, act(d0.perm, d0.principal()))) return make_ax(c, d0.principal(), d0.perm);
            return permute_formula(d1, false, chi, inverse(d0.perm), fresh_);
        }
        if (d0.rule == Rule::BotL) return make_botl(c);
        if (d1.rule == Rule::Ax) {
            if (mem(c.left, d1.principal())) return make_ax(c, d1.principal(), d1.perm);
            return permute_formula(d0, true, chi, d1.perm, fresh_);
        }
        if (d1.rule == Rule::BotL && mem(c.left, Prop::bot())) return make_botl(c);

        const bool p0 = principal_on_right(d0.rule) && alpha_eq(d0.principal(), chi);
        if (!p0) return commute(chi, d0, d1, c, m, true);
        const bool p1 = d1.rule != Rule::BotL && !principal_on_right(d1.rule) && alpha_eq(d1.principal(), chi);
        if (!p1) return commute(chi, d0, d1, c, m, false);
        return essential(chi, d0, d1, c, m);
    }

    // Push the cut into the premises of d0 (into_left) or d1.
    Derivation commute(const Prop& chi, const Derivation& d0, const Derivation& d1, const Sequent& c,
                       const CutMeasure& m, bool into_left) {
        const Derivation& d = into_left ? d0 : d1;
        const Derivation& other = into_left ? d1 : d0;
        Derivation out = d;
        out.conclusion = c;
        for (std::size_t i = 0; i < d.premises.size(); ++i) {
            auto [al, ar] = actives(d, i, fresh_);
            Props tl = unite(c.left, al);
            Props tr = unite(c.right, ar);
            const Derivation& q = d.premises[i];
            if (into_left) {
                Derivation qw = weaken_to(q, tl, insert(tr, chi), fresh_);
                Derivation ow = weaken_to(other, insert(tl, chi), tr, fresh_);
                out.premises[i] = reduce(chi, qw, ow, Sequent{tl, tr}, m);
            } else {
                Derivation qw = weaken_to(q, insert(tl, chi), tr, fresh_);
                Derivation ow = weaken_to(other, tl, insert(tr, chi), fresh_);
                out.premises[i] = reduce(chi, ow, qw, Sequent{tl, tr}, m);
            }
        }
        return out;
    }

    // Both sides introduce χ. Remove χ from the premise contexts first.
    Derivation essential(const Prop& chi, const Derivation& d0, const Derivation& d1, const Sequent& c,
                         const CutMeasure& m) {
        std::vector<Derivation> l, r;
        for (std::size_t i = 0; i < d0.premises.size(); ++i) {
            auto [al, ar] = actives(d0, i, fresh_);
            Props tl = unite(c.left, al);
            Props tr = unite(c.right, ar);
            Derivation p = d0.premises[i];
            if (mem(p.conclusion.right, chi) && !mem(ar, chi))
                p = reduce(chi, weaken_to(p, tl, insert(tr, chi), fresh_), weaken_to(d1, insert(tl, chi), tr, fresh_),
                           Sequent{tl, tr}, m);
            l.push_back(std::move(p));
        }
        for (std::size_t i = 0; i < d1.premises.size(); ++i) {
            auto [al, ar] = actives(d1, i, fresh_);
            Props tl = unite(c.left, al);
            Props tr = unite(c.right, ar);
            Derivation p = d1.premises[i];
            if (mem(p.conclusion.left, chi) && !mem(al, chi))
                p = reduce(chi, weaken_to(d0, tl, insert(tr, chi), fresh_), weaken_to(p, insert(tl, chi), tr, fresh_),
                           Sequent{tl, tr}, m);
            r.push_back(std::move(p));
        }

        if (chi.is(Prop::Kind::Imp)) {
            // l[0]: Γ,A ⊢ Δ,B   r[0]: Γ ⊢ Δ,A   r[1]: Γ,B ⊢ Δ
            const Prop& a = chi.lhs();
            const Prop& b = chi.rhs();
            Props rb = insert(c.right, b);
            Derivation e = reduce(a, weaken_to(r[0], c.left, insert(rb, a), fresh_), l[0], Sequent{c.left, rb}, m);
            return reduce(b, e, r[1], c, m);
        }

        // l[0]: Γ ⊢ Δ,φ(Y)   r[0]: Γ,φ[X:=w] ⊢ Δ
        const Unknown& y = *d0.eigen;
        const Term& w = *d1.witness;
        Derivation inst = instantiate(sig_, l[0], y, w, fresh_);
        Prop body = actives(d1, 0, fresh_).first.at(0);
        inst = weaken_to(inst, c.left, insert(c.right, body), fresh_);
        return reduce(body, inst, r[0], c, m);
    }

    const Signature& sig_;
    FreshUnknowns& fresh_;
    CutStats* stats_;
};

}  // namespace detail

inline Derivation cut_eliminate(const Signature& sig, const Derivation& d, CutStats* stats = nullptr) {
    auto diags = check(sig, d);
    if (!diags.empty())
        throw LogicError("cut_eliminate: input does not check: at " + diags[0].path + ": " + diags[0].message);
    FreshUnknowns fresh;
    detail::CutEliminator ce(sig, fresh, stats);
    return ce.elim(d);
}

}  // namespace pnl
