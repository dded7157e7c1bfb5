#pragma once

// The term model: terms are their own denotations, term-formers denote
// themselves applied, and a valuation sends unknowns to terms. Only terms are
// interpreted; truth of propositions quantifies over infinitely many elements
// and is not computed here.

#include <map>

#include "pnl/syntax.hpp"

namespace pnl {

class Valuation {
public:
    Valuation() = default;

    // ς[X ↦ t]. Requires t : sort(X) and fa(t) ⊆ pmss(X).
    Valuation with(const Signature& sig, const Unknown& x, const Term& t) const {
        Sort got = typecheck(sig, t);
        if (!(got == x.sort)) throw TypeError("valuation for " + x.name + ": sort mismatch");
        if (!is_subset(fa(t), x.pmss))
            throw LogicError("valuation for " + x.name + ": fa(t) is not contained in pmss(" + x.name + ")");
        Valuation v = *this;
        v.map_.insert_or_assign(x, t);
        return v;
    }

    // Unmapped unknowns denote themselves.
    Term operator()(const Unknown& x) const {
        auto it = map_.find(x);
        return it == map_.end() ? Term::var(x) : it->second;
    }

    const std::map<Unknown, Term>& entries() const { return map_; }

private:
    std::map<Unknown, Term> map_;
};

inline Valuation identity_valuation() { return {}; }

inline Term interp_term(const Valuation& v, const Term& r) {
    switch (r.kind()) {
    case Term::Kind::Atom: return r;
    case Term::Kind::Tuple: {
        std::vector<Term> xs;
        xs.reserve(r.elems().size());
        for (const Term& e : r.elems()) xs.push_back(interp_term(v, e));
        return Term::tuple(std::move(xs));
    }
    case Term::Kind::App: return Term::app(r.former(), interp_term(v, r.arg()));
    case Term::Kind::Abs: return Term::abs(r.atom(), interp_term(v, r.body()));
    case Term::Kind::Mod: return act(r.perm(), v(r.unknown()));
    }
    return r;
}

}  // namespace pnl
