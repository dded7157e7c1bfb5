#pragma once

// Atoms, the permutation group generated by swappings and per-sort shifts, and
// the finitely represented atom sets used for permission sets and free atoms.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pnl/error.hpp"

namespace pnl {

using NameSort = std::string;
using Index = std::int64_t;

// An atom of name sort `sort` with integer index. Negative indices form the
// "below" half A<, non-negative ones the "above" half A>.
struct Atom {
    NameSort sort;
    Index index = 0;

    bool below() const { return index < 0; }
    auto operator<=>(const Atom&) const = default;
};

using AtomList = std::set<Atom>;

//------------------------------------------------------------------------------
// Perm
//------------------------------------------------------------------------------

// A permutation in normal form sigma o prod_s shift_s^{k_s}: the shifts are
// applied first, then the finite part. Only non-identity entries of sigma and
// non-zero exponents are stored, so structural equality is extensional equality.
class Perm {
public:
    Perm() = default;

    static Perm identity() { return {}; }

    static Perm swap(const Atom& a, const Atom& b) {
        if (a.sort != b.sort)
            throw LogicError("swapping atoms of different sorts: " + a.sort + " and " + b.sort);
        Perm p;
        if (a != b) {
            p.finite_[a] = b;
            p.finite_[b] = a;
        }
        return p;
    }

    static Perm shift(const NameSort& sort, Index k = 1) {
        Perm p;
        if (k != 0) p.shifts_[sort] = k;
        return p;
    }

    // Builds a finite permutation from an arbitrary graph; identity entries are
    // dropped. Throws if the graph is not a sort-preserving bijection.
    static Perm finite(const std::map<Atom, Atom>& graph) {
        Perm p;
        std::set<Atom> image;
        for (const auto& [from, to] : graph) {
            if (from.sort != to.sort)
                throw LogicError("permutation does not preserve sorts");
            if (!image.insert(to).second)
                throw LogicError("permutation graph is not injective");
        }
        std::set<Atom> domain;
        for (const auto& kv : graph) domain.insert(kv.first);
        if (domain != image)
            throw LogicError("finite permutation graph must map its domain onto itself");
        for (const auto& [from, to] : graph)
            if (from != to) p.finite_[from] = to;
        return p;
    }

    Atom operator()(const Atom& a) const {
        Atom b = a;
        auto s = shifts_.find(a.sort);
        if (s != shifts_.end()) b.index += s->second;
        auto f = finite_.find(b);
        return f == finite_.end() ? b : f->second;
    }

    const std::map<Atom, Atom>& finite_part() const { return finite_; }
    const std::map<NameSort, Index>& shifts() const { return shifts_; }

    Index shift_of(const NameSort& sort) const {
        auto it = shifts_.find(sort);
        return it == shifts_.end() ? 0 : it->second;
    }

    bool is_identity() const { return finite_.empty() && shifts_.empty(); }
    bool is_finite() const { return shifts_.empty(); }

    // Largest |index| mentioned by the representation.
    Index index_bound() const {
        Index m = 0;
        for (const auto& kv : finite_) m = std::max({m, kv.first.index < 0 ? -kv.first.index : kv.first.index});
        for (const auto& kv : shifts_) m = std::max(m, kv.second < 0 ? -kv.second : kv.second);
        return m;
    }

    auto operator<=>(const Perm&) const = default;

private:
    friend Perm compose(const Perm&, const Perm&);
    friend Perm inverse(const Perm&);

    std::map<Atom, Atom> finite_;
    std::map<NameSort, Index> shifts_;
};

// Conjugates a finite graph by the shift part of `p`: the result maps
// t(x) to t(y) for each x -> y.
inline std::map<Atom, Atom> conjugate_by_shift(const std::map<Atom, Atom>& graph, const Perm& shifts) {
    std::map<Atom, Atom> out;
    for (const auto& [x, y] : graph) {
        Index k = shifts.shift_of(x.sort);
        out[Atom{x.sort, x.index + k}] = Atom{y.sort, y.index + k};
    }
    return out;
}

// (p o q)(a) = p(q(a)).
inline Perm compose(const Perm& p, const Perm& q) {
    // p o q = sp tp sq tq = sp (tp sq tp^-1) tp tq
    std::map<Atom, Atom> conj = conjugate_by_shift(q.finite_, p);
    std::set<Atom> domain;
    for (const auto& kv : conj) domain.insert(kv.first);
    for (const auto& kv : p.finite_) domain.insert(kv.first);

    Perm r;
    for (const Atom& x : domain) {
        auto c = conj.find(x);
        Atom mid = c == conj.end() ? x : c->second;
        auto f = p.finite_.find(mid);
        Atom out = f == p.finite_.end() ? mid : f->second;
        if (out != x) r.finite_[x] = out;
    }
    r.shifts_ = p.shifts_;
    for (const auto& [sort, k] : q.shifts_) {
        Index total = r.shift_of(sort) + k;
        if (total == 0)
            r.shifts_.erase(sort);
        else
            r.shifts_[sort] = total;
    }
    return r;
}

inline Perm inverse(const Perm& p) {
    // (s t)^-1 = t^-1 s^-1
    Perm finite_inv;
    for (const auto& [x, y] : p.finite_) finite_inv.finite_[y] = x;
    Perm shift_inv;
    for (const auto& [sort, k] : p.shifts_) shift_inv.shifts_[sort] = -k;
    return compose(shift_inv, finite_inv);
}

//------------------------------------------------------------------------------
// AtomSet
//------------------------------------------------------------------------------

enum class SetMode { Fin, CofinBelow };

// Per-sort component: Fin denotes exactly `exceptions`; CofinBelow denotes
// A<_sort symmetric-difference `exceptions`. Sorts with no entry denote the
// empty set, so structural equality is extensional equality.
struct SortPart {
    SetMode mode = SetMode::Fin;
    std::set<Index> exceptions;

    bool contains(Index i) const {
        bool in_exc = exceptions.count(i) > 0;
        return mode == SetMode::Fin ? in_exc : ((i < 0) != in_exc);
    }
    bool is_empty_fin() const { return mode == SetMode::Fin && exceptions.empty(); }
    auto operator<=>(const SortPart&) const = default;
};

class AtomSet {
public:
    AtomSet() = default;

    static AtomSet none() { return {}; }

    // A< in every listed sort.
    static AtomSet below(const std::set<NameSort>& sorts) {
        AtomSet s;
        for (const auto& n : sorts) s.parts_[n] = SortPart{SetMode::CofinBelow, {}};
        return s;
    }

    // A< symmetric-difference `exceptions`, in every listed sort.
    static AtomSet permission(const std::set<NameSort>& sorts, const AtomList& exceptions) {
        AtomSet s = below(sorts);
        for (const Atom& a : exceptions) {
            auto& part = s.parts_[a.sort];
            if (!sorts.count(a.sort)) part.mode = SetMode::Fin;
            toggle(part.exceptions, a.index);
        }
        s.normalize();
        return s;
    }

    static AtomSet finite(const AtomList& atoms) {
        AtomSet s;
        for (const Atom& a : atoms) s.parts_[a.sort].exceptions.insert(a.index);
        return s;
    }

    static AtomSet from_parts(std::map<NameSort, SortPart> parts) {
        AtomSet s;
        s.parts_ = std::move(parts);
        s.normalize();
        return s;
    }

    bool contains(const Atom& a) const {
        auto it = parts_.find(a.sort);
        return it != parts_.end() && it->second.contains(a.index);
    }

    const std::map<NameSort, SortPart>& parts() const { return parts_; }

    SortPart part(const NameSort& sort) const {
        auto it = parts_.find(sort);
        return it == parts_.end() ? SortPart{} : it->second;
    }

    bool empty() const { return parts_.empty(); }

    bool is_finite() const {
        return std::all_of(parts_.begin(), parts_.end(),
                           [](const auto& kv) { return kv.second.mode == SetMode::Fin; });
    }

    // True iff every sort in `sorts` is CofinBelow and no other sort is present.
    bool is_permission_set(const std::set<NameSort>& sorts) const {
        for (const auto& n : sorts)
            if (part(n).mode != SetMode::CofinBelow) return false;
        for (const auto& kv : parts_)
            if (!sorts.count(kv.first)) return false;
        return true;
    }

    // Members of a finite set (throws if some sort is cofinite).
    AtomList members() const {
        AtomList out;
        for (const auto& [sort, p] : parts_) {
            if (p.mode != SetMode::Fin) throw LogicError("members() of an infinite atom set");
            for (Index i : p.exceptions) out.insert(Atom{sort, i});
        }
        return out;
    }

    Index index_bound() const {
        Index m = 0;
        for (const auto& kv : parts_)
            for (Index i : kv.second.exceptions) m = std::max(m, i < 0 ? -i : i);
        return m;
    }

    auto operator<=>(const AtomSet&) const = default;

private:
    friend AtomSet apply(const Perm&, const AtomSet&);
    template <typename Op>
    friend AtomSet combine(const AtomSet&, const AtomSet&, Op);

    static void toggle(std::set<Index>& s, Index i) {
        if (!s.erase(i)) s.insert(i);
    }

    void normalize() {
        for (auto it = parts_.begin(); it != parts_.end();) {
            if (it->second.is_empty_fin())
                it = parts_.erase(it);
            else
                ++it;
        }
    }

    std::map<NameSort, SortPart> parts_;
};

// Pointwise image {p(a) | a in s}.
inline AtomSet apply(const Perm& p, const AtomSet& s) {
    AtomSet out;
    for (const auto& [sort, part] : s.parts_) {
        Index k = p.shift_of(sort);
        SortPart shifted{part.mode, {}};
        for (Index i : part.exceptions) shifted.exceptions.insert(i + k);
        if (part.mode == SetMode::CofinBelow && k != 0) {
            // shift^k(A<) = {j < k} = A< sym-diff the band between 0 and k.
            Index lo = std::min<Index>(0, k), hi = std::max<Index>(0, k);
            for (Index j = lo; j < hi; ++j) AtomSet::toggle(shifted.exceptions, j);
        }
        out.parts_[sort] = std::move(shifted);
    }
    // The finite part only changes membership inside its own domain, which it
    // maps onto itself: member'(y) = member(sigma^-1(y)).
    if (!p.finite_part().empty()) {
        std::map<Atom, bool> updated;
        for (const auto& [x, y] : p.finite_part()) {
            auto it = out.parts_.find(x.sort);
            bool was = it != out.parts_.end() && it->second.contains(x.index);
            updated[y] = was;
        }
        for (const auto& [y, in] : updated) {
            auto& part = out.parts_[y.sort];
            bool def = part.mode == SetMode::CofinBelow && y.index < 0;
            if (in != def)
                part.exceptions.insert(y.index);
            else
                part.exceptions.erase(y.index);
        }
    }
    out.normalize();
    return out;
}

// Pointwise boolean combination; `op(false, false)` must be false.
template <typename Op>
AtomSet combine(const AtomSet& s, const AtomSet& t, Op op) {
    std::set<NameSort> sorts;
    for (const auto& kv : s.parts_) sorts.insert(kv.first);
    for (const auto& kv : t.parts_) sorts.insert(kv.first);
    AtomSet out;
    for (const NameSort& sort : sorts) {
        SortPart ps = s.part(sort), pt = t.part(sort);
        bool below_default = op(ps.mode == SetMode::CofinBelow, pt.mode == SetMode::CofinBelow);
        SortPart r{below_default ? SetMode::CofinBelow : SetMode::Fin, {}};
        std::set<Index> candidates = ps.exceptions;
        candidates.insert(pt.exceptions.begin(), pt.exceptions.end());
        for (Index i : candidates) {
            bool in = op(ps.contains(i), pt.contains(i));
            bool def = below_default && i < 0;
            if (in != def) r.exceptions.insert(i);
        }
        out.parts_[sort] = std::move(r);
    }
    out.normalize();
    return out;
}

inline AtomSet set_union(const AtomSet& s, const AtomSet& t) {
    return combine(s, t, [](bool a, bool b) { return a || b; });
}
inline AtomSet set_intersection(const AtomSet& s, const AtomSet& t) {
    return combine(s, t, [](bool a, bool b) { return a && b; });
}
inline AtomSet set_difference(const AtomSet& s, const AtomSet& t) {
    return combine(s, t, [](bool a, bool b) { return a && !b; });
}
inline AtomSet set_remove(const AtomSet& s, const AtomList& f) { return set_difference(s, AtomSet::finite(f)); }
inline AtomSet set_add(const AtomSet& s, const AtomList& f) { return set_union(s, AtomSet::finite(f)); }
inline bool is_subset(const AtomSet& s, const AtomSet& t) { return set_difference(s, t).empty(); }

enum class Side { Above, Below };

// Smallest unused non-negative index (Above) or largest unused negative index
// (Below) of `sort` outside `avoid`.
inline Atom fresh_atom(const NameSort& sort, const AtomSet& avoid, Side side = Side::Above) {
    SortPart p = avoid.part(sort);
    if (side == Side::Above) {
        for (Index i = 0;; ++i)
            if (!p.contains(i)) return Atom{sort, i};
    }
    if (p.mode == SetMode::CofinBelow) {
        // Non-members below are exactly the negative exceptions.
        for (auto it = p.exceptions.rbegin(); it != p.exceptions.rend(); ++it)
            if (*it < 0) return Atom{sort, *it};
        throw LogicError("no fresh atom of sort " + sort + " below: the set covers A<");
    }
    for (Index i = -1;; --i)
        if (!p.contains(i)) return Atom{sort, i};
}

// Decides whether p(a) = q(a) for every a in s.
inline bool agrees_on(const Perm& p, const Perm& q, const AtomSet& s) {
    Perm rho = compose(inverse(q), p);  // rho(a) = a  iff  p(a) = q(a)
    for (const auto& [sort, part] : s.parts()) {
        if (part.mode == SetMode::Fin) {
            for (Index i : part.exceptions) {
                Atom a{sort, i};
                if (rho(a) != a) return false;
            }
            continue;
        }
        // A non-zero shift composed with a finite permutation fixes only
        // finitely many atoms of the sort, and s is infinite there.
        if (rho.shift_of(sort) != 0) return false;
        for (const auto& kv : rho.finite_part())
            if (kv.first.sort == sort && part.contains(kv.first.index)) return false;
    }
    return true;
}

}  // namespace pnl
