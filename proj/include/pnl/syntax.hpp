#pragma once

// Two-level syntax: sorts and signatures, terms and propositions over atoms
// (level 1) and unknowns (level 2), both permutation actions, free atoms and
// free unknowns, and the alpha-equivalence decision procedure.

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pnl/atoms.hpp"

namespace pnl {

//------------------------------------------------------------------------------
// Sorts and signatures
//------------------------------------------------------------------------------

struct Sort {
    enum class Kind { Name, Base, Tuple, Abs };

    Kind kind = Kind::Tuple;
    std::string name;        // Name, Base, and the bound name sort of Abs
    std::vector<Sort> args;  // Tuple components; Abs holds its body in args[0]

    static Sort name_sort(std::string n) { return Sort{Kind::Name, std::move(n), {}}; }
    static Sort base(std::string n) { return Sort{Kind::Base, std::move(n), {}}; }
    static Sort tuple(std::vector<Sort> xs) { return Sort{Kind::Tuple, {}, std::move(xs)}; }
    static Sort unit() { return tuple({}); }
    static Sort abs(std::string nu, Sort body) { return Sort{Kind::Abs, std::move(nu), {std::move(body)}}; }

    const Sort& body() const { return args.at(0); }

    bool operator==(const Sort& o) const { return kind == o.kind && name == o.name && args == o.args; }
    bool operator<(const Sort& o) const {
        if (kind != o.kind) return kind < o.kind;
        if (name != o.name) return name < o.name;
        return args < o.args;
    }
};

struct TermFormer {
    Sort arg;
    std::string result;  // a base sort
    bool operator==(const TermFormer&) const = default;
};

class Signature {
public:
    const std::set<NameSort>& name_sorts() const { return name_sorts_; }
    const std::set<std::string>& base_sorts() const { return base_sorts_; }
    const std::map<std::string, TermFormer>& term_formers() const { return term_formers_; }
    const std::map<std::string, Sort>& pred_formers() const { return pred_formers_; }

    void add_name_sort(const std::string& n) {
        if (base_sorts_.count(n)) throw TypeError("sort " + n + " already declared as a base sort");
        name_sorts_.insert(n);
    }
    void add_base_sort(const std::string& n) {
        if (name_sorts_.count(n)) throw TypeError("sort " + n + " already declared as a name sort");
        base_sorts_.insert(n);
    }
    void add_term_former(const std::string& f, Sort arg, const std::string& result) {
        if (pred_formers_.count(f)) throw TypeError("symbol " + f + " already declared as a proposition-former");
        require_sort(arg);
        if (!base_sorts_.count(result)) throw TypeError("term-former " + f + ": result " + result + " is not a base sort");
        TermFormer tf{std::move(arg), result};
        auto [it, fresh] = term_formers_.emplace(f, tf);
        if (!fresh && !(it->second == tf)) throw TypeError("duplicate declaration of term-former " + f);
    }
    void add_pred_former(const std::string& p, Sort arg) {
        if (term_formers_.count(p)) throw TypeError("symbol " + p + " already declared as a term-former");
        require_sort(arg);
        auto [it, fresh] = pred_formers_.emplace(p, arg);
        if (!fresh && !(it->second == arg)) throw TypeError("duplicate declaration of proposition-former " + p);
    }

    void merge(const Signature& other) {
        for (const auto& n : other.name_sorts_) add_name_sort(n);
        for (const auto& b : other.base_sorts_) add_base_sort(b);
        for (const auto& [f, tf] : other.term_formers_) add_term_former(f, tf.arg, tf.result);
        for (const auto& [p, s] : other.pred_formers_) add_pred_former(p, s);
    }

    const TermFormer& term_former(const std::string& f) const {
        auto it = term_formers_.find(f);
        if (it == term_formers_.end()) throw TypeError("undeclared term-former " + f);
        return it->second;
    }
    const Sort& pred_former(const std::string& p) const {
        auto it = pred_formers_.find(p);
        if (it == pred_formers_.end()) throw TypeError("undeclared proposition-former " + p);
        return it->second;
    }

    bool has_term_former(const std::string& f) const { return term_formers_.count(f) > 0; }
    bool has_pred_former(const std::string& p) const { return pred_formers_.count(p) > 0; }

    bool well_formed(const Sort& s) const {
        switch (s.kind) {
        case Sort::Kind::Name: return name_sorts_.count(s.name) > 0;
        case Sort::Kind::Base: return base_sorts_.count(s.name) > 0;
        case Sort::Kind::Abs: return name_sorts_.count(s.name) > 0 && well_formed(s.body());
        case Sort::Kind::Tuple:
            for (const Sort& a : s.args)
                if (!well_formed(a)) return false;
            return true;
        }
        return false;
    }

    void require_sort(const Sort& s) const {
        if (!well_formed(s)) throw TypeError("sort mentions an undeclared name or base sort");
    }

private:
    std::set<NameSort> name_sorts_;
    std::set<std::string> base_sorts_;
    std::map<std::string, TermFormer> term_formers_;
    std::map<std::string, Sort> pred_formers_;
};

//------------------------------------------------------------------------------
// Unknowns and level-2 permutations
//------------------------------------------------------------------------------

// Identity is (name, sort, permission set).
struct Unknown {
    std::string name;
    Sort sort;
    AtomSet pmss;

    bool operator==(const Unknown& o) const { return name == o.name && sort == o.sort && pmss == o.pmss; }
    bool operator<(const Unknown& o) const {
        if (name != o.name) return name < o.name;
        if (!(sort == o.sort)) return sort < o.sort;
        return pmss < o.pmss;
    }
};

using UnknownSet = std::set<Unknown>;

// A finite sort- and permission-set-preserving bijection on unknowns.
class Perm2 {
public:
    Perm2() = default;

    static Perm2 swap(const Unknown& x, const Unknown& y) {
        if (!(x.sort == y.sort) || !(x.pmss == y.pmss))
            throw LogicError("level-2 swapping of " + x.name + " and " + y.name +
                             " requires equal sort and permission set");
        Perm2 p;
        if (!(x == y)) {
            p.graph_[x] = y;
            p.graph_[y] = x;
        }
        return p;
    }

    const Unknown& operator()(const Unknown& x) const {
        auto it = graph_.find(x);
        return it == graph_.end() ? x : it->second;
    }

    const std::map<Unknown, Unknown>& graph() const { return graph_; }
    bool is_identity() const { return graph_.empty(); }

private:
    std::map<Unknown, Unknown> graph_;
};

//------------------------------------------------------------------------------
// Terms
//------------------------------------------------------------------------------

class Term {
public:
    enum class Kind { Atom, Tuple, App, Abs, Mod };

    static Term atom(Atom a) {
        Term t(Kind::Atom);
        t.mut().atom = std::move(a);
        return t;
    }
    static Term tuple(std::vector<Term> xs) {
        Term t(Kind::Tuple);
        t.mut().kids = std::move(xs);
        return t;
    }
    static Term unit() { return tuple({}); }
    static Term app(std::string f, Term arg) {
        Term t(Kind::App);
        t.mut().name = std::move(f);
        t.mut().kids = {std::move(arg)};
        return t;
    }
    static Term abs(Atom a, Term body) {
        Term t(Kind::Abs);
        t.mut().atom = std::move(a);
        t.mut().kids = {std::move(body)};
        return t;
    }
    static Term mod(Perm p, Unknown x) {
        Term t(Kind::Mod);
        t.mut().perm = std::move(p);
        t.mut().unknown = std::move(x);
        return t;
    }
    static Term var(Unknown x) { return mod(Perm::identity(), std::move(x)); }

    Kind kind() const { return node_->kind; }
    bool is(Kind k) const { return node_->kind == k; }

    const Atom& atom() const { return node_->atom; }  // Atom, and the binder of Abs
    const std::vector<Term>& elems() const { return node_->kids; }  // Tuple
    const Term& arg() const { return node_->kids.at(0); }           // App argument
    const Term& body() const { return node_->kids.at(0); }          // Abs body
    const std::string& former() const { return node_->name; }
    const Perm& perm() const { return node_->perm; }
    const Unknown& unknown() const { return node_->unknown; }

    // Raw (not alpha) structural equality.
    friend bool raw_equal(const Term& a, const Term& b);

private:
    struct Node {
        Kind kind;
        Atom atom;
        std::string name;
        std::vector<Term> kids;
        Perm perm;
        Unknown unknown;
    };

    explicit Term(Kind k) : node_(std::make_shared<Node>()) { const_cast<Node&>(*node_).kind = k; }
    Node& mut() { return const_cast<Node&>(*node_); }

    std::shared_ptr<const Node> node_;
};

inline bool raw_equal(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
    case Term::Kind::Atom: return a.atom() == b.atom();
    case Term::Kind::Mod: return a.perm() == b.perm() && a.unknown() == b.unknown();
    case Term::Kind::App:
        if (a.former() != b.former()) return false;
        break;
    case Term::Kind::Abs:
        if (a.atom() != b.atom()) return false;
        break;
    case Term::Kind::Tuple: break;
    }
    if (a.node_->kids.size() != b.node_->kids.size()) return false;
    for (std::size_t i = 0; i < a.node_->kids.size(); ++i)
        if (!raw_equal(a.node_->kids[i], b.node_->kids[i])) return false;
    return true;
}

//------------------------------------------------------------------------------
// Propositions
//------------------------------------------------------------------------------

class Prop {
public:
    enum class Kind { Bot, Imp, Pred, Forall };

    static Prop bot() { return Prop(Kind::Bot); }
    static Prop imp(Prop a, Prop b) {
        Prop p(Kind::Imp);
        p.mut().kids = {std::move(a), std::move(b)};
        return p;
    }
    static Prop pred(std::string name, Term arg) {
        Prop p(Kind::Pred);
        p.mut().name = std::move(name);
        p.mut().arg = std::move(arg);
        return p;
    }
    static Prop forall(Unknown x, Prop body) {
        Prop p(Kind::Forall);
        p.mut().binder = std::move(x);
        p.mut().kids = {std::move(body)};
        return p;
    }

    Kind kind() const { return node_->kind; }
    bool is(Kind k) const { return node_->kind == k; }

    const Prop& lhs() const { return node_->kids.at(0); }   // Imp
    const Prop& rhs() const { return node_->kids.at(1); }   // Imp
    const Prop& body() const { return node_->kids.at(0); }  // Forall
    const std::string& name() const { return node_->name; }
    const Term& arg() const { return *node_->arg; }
    const Unknown& binder() const { return node_->binder; }

    friend bool raw_equal(const Prop& a, const Prop& b);

private:
    struct Node {
        Kind kind;
        std::vector<Prop> kids;
        std::string name;
        std::optional<Term> arg;
        Unknown binder;
    };

    explicit Prop(Kind k) : node_(std::make_shared<Node>()) { const_cast<Node&>(*node_).kind = k; }
    Node& mut() { return const_cast<Node&>(*node_); }

    std::shared_ptr<const Node> node_;
};

inline bool raw_equal(const Prop& a, const Prop& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
    case Prop::Kind::Bot: return true;
    case Prop::Kind::Imp: return raw_equal(a.lhs(), b.lhs()) && raw_equal(a.rhs(), b.rhs());
    case Prop::Kind::Pred: return a.name() == b.name() && raw_equal(a.arg(), b.arg());
    case Prop::Kind::Forall: return a.binder() == b.binder() && raw_equal(a.body(), b.body());
    }
    return false;
}

// Number of proposition nodes; terms do not contribute.
inline std::size_t size(const Prop& p) {
    switch (p.kind()) {
    case Prop::Kind::Imp: return 1 + size(p.lhs()) + size(p.rhs());
    case Prop::Kind::Forall: return 1 + size(p.body());
    default: return 1;
    }
}

// Derived connectives, encoded with ⇒ and ⊥.
inline Prop neg(Prop a) { return Prop::imp(std::move(a), Prop::bot()); }
inline Prop top() { return neg(Prop::bot()); }
inline Prop conj(Prop a, Prop b) { return neg(Prop::imp(std::move(a), neg(std::move(b)))); }
inline Prop disj(Prop a, Prop b) { return Prop::imp(neg(std::move(a)), std::move(b)); }
inline Prop iff(const Prop& a, const Prop& b) { return conj(Prop::imp(a, b), Prop::imp(b, a)); }

//------------------------------------------------------------------------------
// Typing
//------------------------------------------------------------------------------

inline Sort typecheck(const Signature& sig, const Term& t) {
    switch (t.kind()) {
    case Term::Kind::Atom:
        if (!sig.name_sorts().count(t.atom().sort)) throw TypeError("atom of undeclared name sort " + t.atom().sort);
        return Sort::name_sort(t.atom().sort);
    case Term::Kind::Tuple: {
        std::vector<Sort> parts;
        for (const Term& e : t.elems()) parts.push_back(typecheck(sig, e));
        return Sort::tuple(std::move(parts));
    }
    case Term::Kind::App: {
        const TermFormer& tf = sig.term_former(t.former());
        Sort got = typecheck(sig, t.arg());
        if (!(got == tf.arg)) throw TypeError("sort mismatch in argument of " + t.former());
        return Sort::base(tf.result);
    }
    case Term::Kind::Abs:
        if (!sig.name_sorts().count(t.atom().sort)) throw TypeError("abstraction over undeclared name sort " + t.atom().sort);
        return Sort::abs(t.atom().sort, typecheck(sig, t.body()));
    case Term::Kind::Mod:
        if (!sig.well_formed(t.unknown().sort)) throw TypeError("unknown " + t.unknown().name + " has an undeclared sort");
        return t.unknown().sort;
    }
    throw TypeError("unreachable");
}

inline void typecheck(const Signature& sig, const Prop& p) {
    switch (p.kind()) {
    case Prop::Kind::Bot: return;
    case Prop::Kind::Imp:
        typecheck(sig, p.lhs());
        typecheck(sig, p.rhs());
        return;
    case Prop::Kind::Pred: {
        const Sort& want = sig.pred_former(p.name());
        if (!(typecheck(sig, p.arg()) == want)) throw TypeError("sort mismatch in argument of " + p.name());
        return;
    }
    case Prop::Kind::Forall:
        if (!sig.well_formed(p.binder().sort)) throw TypeError("unknown " + p.binder().name + " has an undeclared sort");
        typecheck(sig, p.body());
        return;
    }
}

//------------------------------------------------------------------------------
// Permutation actions
//------------------------------------------------------------------------------

inline Term act(const Perm& p, const Term& t) {
    if (p.is_identity()) return t;
    switch (t.kind()) {
    case Term::Kind::Atom: return Term::atom(p(t.atom()));
    case Term::Kind::Tuple: {
        std::vector<Term> xs;
        xs.reserve(t.elems().size());
        for (const Term& e : t.elems()) xs.push_back(act(p, e));
        return Term::tuple(std::move(xs));
    }
    case Term::Kind::App: return Term::app(t.former(), act(p, t.arg()));
    case Term::Kind::Abs: return Term::abs(p(t.atom()), act(p, t.body()));
    case Term::Kind::Mod: return Term::mod(compose(p, t.perm()), t.unknown());
    }
    return t;
}

inline Prop act(const Perm& p, const Prop& q) {
    if (p.is_identity()) return q;
    switch (q.kind()) {
    case Prop::Kind::Bot: return q;
    case Prop::Kind::Imp: return Prop::imp(act(p, q.lhs()), act(p, q.rhs()));
    case Prop::Kind::Pred: return Prop::pred(q.name(), act(p, q.arg()));
    case Prop::Kind::Forall: return Prop::forall(q.binder(), act(p, q.body()));
    }
    return q;
}

inline Term act(const Perm2& p, const Term& t) {
    if (p.is_identity()) return t;
    switch (t.kind()) {
    case Term::Kind::Atom: return t;
    case Term::Kind::Tuple: {
        std::vector<Term> xs;
        for (const Term& e : t.elems()) xs.push_back(act(p, e));
        return Term::tuple(std::move(xs));
    }
    case Term::Kind::App: return Term::app(t.former(), act(p, t.arg()));
    case Term::Kind::Abs: return Term::abs(t.atom(), act(p, t.body()));
    case Term::Kind::Mod: return Term::mod(t.perm(), p(t.unknown()));
    }
    return t;
}

inline Prop act(const Perm2& p, const Prop& q) {
    if (p.is_identity()) return q;
    switch (q.kind()) {
    case Prop::Kind::Bot: return q;
    case Prop::Kind::Imp: return Prop::imp(act(p, q.lhs()), act(p, q.rhs()));
    case Prop::Kind::Pred: return Prop::pred(q.name(), act(p, q.arg()));
    case Prop::Kind::Forall: return Prop::forall(p(q.binder()), act(p, q.body()));
    }
    return q;
}

inline UnknownSet act(const Perm2& p, const UnknownSet& xs) {
    UnknownSet out;
    for (const Unknown& x : xs) out.insert(p(x));
    return out;
}

//------------------------------------------------------------------------------
// Free atoms and free unknowns
//------------------------------------------------------------------------------

inline AtomSet fa(const Term& t) {
    switch (t.kind()) {
    case Term::Kind::Atom: return AtomSet::finite({t.atom()});
    case Term::Kind::Tuple: {
        AtomSet s;
        for (const Term& e : t.elems()) s = set_union(s, fa(e));
        return s;
    }
    case Term::Kind::App: return fa(t.arg());
    case Term::Kind::Abs: return set_remove(fa(t.body()), {t.atom()});
    case Term::Kind::Mod: return apply(t.perm(), t.unknown().pmss);
    }
    return {};
}

inline AtomSet fa(const Prop& p) {
    switch (p.kind()) {
    case Prop::Kind::Bot: return {};
    case Prop::Kind::Imp: return set_union(fa(p.lhs()), fa(p.rhs()));
    case Prop::Kind::Pred: return fa(p.arg());
    case Prop::Kind::Forall: return fa(p.body());
    }
    return {};
}

inline void collect_fv(const Term& t, UnknownSet& out) {
    switch (t.kind()) {
    case Term::Kind::Atom: return;
    case Term::Kind::Tuple:
        for (const Term& e : t.elems()) collect_fv(e, out);
        return;
    case Term::Kind::App: collect_fv(t.arg(), out); return;
    case Term::Kind::Abs: collect_fv(t.body(), out); return;
    case Term::Kind::Mod: out.insert(t.unknown()); return;
    }
}

inline UnknownSet fv(const Term& t) {
    UnknownSet out;
    collect_fv(t, out);
    return out;
}

inline UnknownSet fv(const Prop& p) {
    switch (p.kind()) {
    case Prop::Kind::Bot: return {};
    case Prop::Kind::Imp: {
        UnknownSet s = fv(p.lhs());
        UnknownSet r = fv(p.rhs());
        s.insert(r.begin(), r.end());
        return s;
    }
    case Prop::Kind::Pred: return fv(p.arg());
    case Prop::Kind::Forall: {
        UnknownSet s = fv(p.body());
        s.erase(p.binder());
        return s;
    }
    }
    return {};
}

// Every unknown occurring anywhere, bound or free.
inline void collect_unknowns(const Term& t, UnknownSet& out) { collect_fv(t, out); }

inline void collect_unknowns(const Prop& p, UnknownSet& out) {
    switch (p.kind()) {
    case Prop::Kind::Bot: return;
    case Prop::Kind::Imp:
        collect_unknowns(p.lhs(), out);
        collect_unknowns(p.rhs(), out);
        return;
    case Prop::Kind::Pred: collect_unknowns(p.arg(), out); return;
    case Prop::Kind::Forall:
        out.insert(p.binder());
        collect_unknowns(p.body(), out);
        return;
    }
}

// Largest |index| mentioned anywhere in the representation (atoms, binders,
// permutations, permission-set exceptions).
inline Index index_bound(const Term& t) {
    switch (t.kind()) {
    case Term::Kind::Atom: return t.atom().index < 0 ? -t.atom().index : t.atom().index;
    case Term::Kind::Tuple: {
        Index m = 0;
        for (const Term& e : t.elems()) m = std::max(m, index_bound(e));
        return m;
    }
    case Term::Kind::App: return index_bound(t.arg());
    case Term::Kind::Abs: {
        Index a = t.atom().index < 0 ? -t.atom().index : t.atom().index;
        return std::max(a, index_bound(t.body()));
    }
    case Term::Kind::Mod: return std::max(t.perm().index_bound(), t.unknown().pmss.index_bound());
    }
    return 0;
}

inline Index index_bound(const Prop& p) {
    switch (p.kind()) {
    case Prop::Kind::Bot: return 0;
    case Prop::Kind::Imp: return std::max(index_bound(p.lhs()), index_bound(p.rhs()));
    case Prop::Kind::Pred: return index_bound(p.arg());
    case Prop::Kind::Forall: return std::max(p.binder().pmss.index_bound(), index_bound(p.body()));
    }
    return 0;
}

//------------------------------------------------------------------------------
// Alpha-equivalence
//------------------------------------------------------------------------------

inline bool alpha_eq(const Term& u, const Term& v) {
    if (u.kind() != v.kind()) return false;
    switch (u.kind()) {
    case Term::Kind::Atom: return u.atom() == v.atom();
    case Term::Kind::Tuple: {
        if (u.elems().size() != v.elems().size()) return false;
        for (std::size_t i = 0; i < u.elems().size(); ++i)
            if (!alpha_eq(u.elems()[i], v.elems()[i])) return false;
        return true;
    }
    case Term::Kind::App: return u.former() == v.former() && alpha_eq(u.arg(), v.arg());
    case Term::Kind::Abs: {
        const Atom& a = u.atom();
        const Atom& b = v.atom();
        if (a.sort != b.sort) return false;
        if (a == b) return alpha_eq(u.body(), v.body());
        if (fa(u.body()).contains(b)) return false;
        return alpha_eq(act(Perm::swap(b, a), u.body()), v.body());
    }
    case Term::Kind::Mod:
        return u.unknown() == v.unknown() && agrees_on(u.perm(), v.perm(), u.unknown().pmss);
    }
    return false;
}

inline bool alpha_eq(const Prop& u, const Prop& v) {
    if (u.kind() != v.kind()) return false;
    switch (u.kind()) {
    case Prop::Kind::Bot: return true;
    case Prop::Kind::Imp: return alpha_eq(u.lhs(), v.lhs()) && alpha_eq(u.rhs(), v.rhs());
    case Prop::Kind::Pred: return u.name() == v.name() && alpha_eq(u.arg(), v.arg());
    case Prop::Kind::Forall: {
        const Unknown& x = u.binder();
        const Unknown& y = v.binder();
        if (x == y) return alpha_eq(u.body(), v.body());
        if (!(x.sort == y.sort) || !(x.pmss == y.pmss)) return false;
        if (fv(u.body()).count(y)) return false;
        return alpha_eq(act(Perm2::swap(y, x), u.body()), v.body());
    }
    }
    return false;
}

}  // namespace pnl
