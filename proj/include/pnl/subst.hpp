#pragma once

// Level-2 substitutions. The action is capturing for atom abstraction and
// renames a universally bound unknown when it would interact with the
// substitution.

#include <map>
#include <string>

#include "pnl/syntax.hpp"

namespace pnl {

// Deterministic supply of fresh unknowns: base name plus a monotone counter.
// Threaded explicitly through every operation that may need to rename.
struct FreshUnknowns {
    std::size_t counter = 0;

    Unknown make(const Unknown& like, const UnknownSet& avoid) {
        std::set<std::string> names;
        for (const Unknown& u : avoid) names.insert(u.name);
        std::string base = like.name;
        auto us = base.rfind('_');
        if (us != std::string::npos && us + 1 < base.size() &&
            base.find_first_not_of("0123456789", us + 1) == std::string::npos)
            base = base.substr(0, us);
        for (;;) {
            std::string name = base + "_" + std::to_string(++counter);
            if (!names.count(name)) return Unknown{name, like.sort, like.pmss};
        }
    }
};

class Substitution {
public:
    Substitution() = default;

    static Substitution single(const Signature& sig, const Unknown& x, const Term& t) {
        Substitution s;
        s.add(sig, x, t);
        return s;
    }

    // Skips the sort and permission checks; for callers that established them.
    static Substitution unchecked(const Unknown& x, const Term& t) {
        Substitution s;
        if (!is_trivial_entry(x, t)) s.map_.emplace(x, t);
        return s;
    }

    void add(const Signature& sig, const Unknown& x, const Term& t) {
        Sort got = typecheck(sig, t);
        if (!(got == x.sort)) throw TypeError("substitution for " + x.name + ": sort mismatch");
        if (!is_subset(fa(t), x.pmss))
            throw LogicError("substitution for " + x.name + ": fa(t) is not contained in pmss(" + x.name + ")");
        if (is_trivial_entry(x, t)) {
            map_.erase(x);
            return;
        }
        map_.insert_or_assign(x, t);
    }

    const Term* find(const Unknown& x) const {
        auto it = map_.find(x);
        return it == map_.end() ? nullptr : &it->second;
    }

    Term operator()(const Unknown& x) const {
        const Term* t = find(x);
        return t ? *t : Term::var(x);
    }

    const std::map<Unknown, Term>& entries() const { return map_; }
    bool is_identity() const { return map_.empty(); }

    // Unknowns that the substitution can produce or consume.
    UnknownSet nontriv() const {
        UnknownSet out;
        for (const auto& [x, t] : map_) {
            out.insert(x);
            collect_fv(t, out);
        }
        return out;
    }

private:
    static bool is_trivial_entry(const Unknown& x, const Term& t) {
        return alpha_eq(t, Term::var(x));
    }

    std::map<Unknown, Term> map_;
};

inline Term subst_apply(const Substitution& th, const Term& t) {
    if (th.is_identity()) return t;
    switch (t.kind()) {
    case Term::Kind::Atom: return t;
    case Term::Kind::Tuple: {
        std::vector<Term> xs;
        xs.reserve(t.elems().size());
        for (const Term& e : t.elems()) xs.push_back(subst_apply(th, e));
        return Term::tuple(std::move(xs));
    }
    case Term::Kind::App: return Term::app(t.former(), subst_apply(th, t.arg()));
    case Term::Kind::Abs: return Term::abs(t.atom(), subst_apply(th, t.body()));
    case Term::Kind::Mod: {
        const Term* r = th.find(t.unknown());
        return r ? act(t.perm(), *r) : t;
    }
    }
    return t;
}

namespace detail {

inline Prop subst_apply_prop(const Substitution& th, const UnknownSet& nt, const Prop& p, FreshUnknowns& fresh) {
    switch (p.kind()) {
    case Prop::Kind::Bot: return p;
    case Prop::Kind::Imp:
        return Prop::imp(subst_apply_prop(th, nt, p.lhs(), fresh), subst_apply_prop(th, nt, p.rhs(), fresh));
    case Prop::Kind::Pred: return Prop::pred(p.name(), subst_apply(th, p.arg()));
    case Prop::Kind::Forall: {
        const Unknown& x = p.binder();
        if (!nt.count(x)) return Prop::forall(x, subst_apply_prop(th, nt, p.body(), fresh));
        UnknownSet avoid = nt;
        collect_unknowns(p, avoid);
        Unknown y = fresh.make(x, avoid);
        Prop body = act(Perm2::swap(x, y), p.body());
        return Prop::forall(y, subst_apply_prop(th, nt, body, fresh));
    }
    }
    return p;
}

}  // namespace detail

inline Prop subst_apply(const Substitution& th, const Prop& p, FreshUnknowns& fresh) {
    if (th.is_identity()) return p;
    return detail::subst_apply_prop(th, th.nontriv(), p, fresh);
}

inline Prop subst_apply(const Substitution& th, const Prop& p) {
    FreshUnknowns fresh;
    return subst_apply(th, p, fresh);
}

}  // namespace pnl
