#pragma once

// Directed rewrite rules between terms, matched up to a permutation of the
// rule's atoms, and a fuel-bounded leftmost-innermost normaliser.
//
// Every atom mentioned by a rule is a metavariable. A match of l --> r
// against a target t is a finite permutation ρ and a substitution θ for the
// unknowns of l with ρ⁻¹·(lθ) ≈ t; the contractum is ρ⁻¹·(rθ). Because PNL
// derivability is closed under permutations, each step is an instance of the
// equation l ≐ r.

#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "pnl/print.hpp"
#include "pnl/theories.hpp"

namespace pnl {

struct RewriteRule {
    std::string label;
    Term lhs = Term::unit();
    Term rhs = Term::unit();
    AtomList atoms;  // every atom the rule mentions
};

struct RuleSet {
    std::string name;
    Context ctx;
    std::vector<RewriteRule> rules;
};

namespace detail {

inline void mentioned_atoms(const Term& t, AtomList& out) {
    switch (t.kind()) {
    case Term::Kind::Atom: out.insert(t.atom()); break;
    case Term::Kind::Tuple:
        for (const Term& e : t.elems()) mentioned_atoms(e, out);
        break;
    case Term::Kind::App: mentioned_atoms(t.arg(), out); break;
    case Term::Kind::Abs:
        out.insert(t.atom());
        mentioned_atoms(t.body(), out);
        break;
    case Term::Kind::Mod: {
        for (const auto& [a, b] : t.perm().finite_part()) out.insert(a);
        AtomSet ex = t.unknown().pmss;
        for (const auto& [sort, part] : ex.parts())
            for (Index i : part.exceptions) out.insert(Atom{sort, i});
        break;
    }
    }
}

// `where atoms a ≠ b, a in A<, b notin A<`. Metavariables inside A< are
// represented by n#-1, n#-2, ... and those outside by n#0, n#1, ..., in order
// of first appearance.
inline std::map<std::string, Atom> parse_where(Parser& p) {
    const Signature& sig = p.context().sig;
    std::vector<std::string> order;
    std::map<std::string, bool> inside;
    std::map<std::string, NameSort> sorts;
    auto note = [&](const std::string& n) {
        if (!inside.count(n)) {
            order.push_back(n);
            inside[n] = true;
        }
    };
    p.accept_ident("atoms");
    do {
        std::string n = p.expect_ident();
        note(n);
        if (p.is_sym("≠") || p.is_sym("!=")) {
            while (p.accept_any({"≠", "!="})) note(p.expect_ident());
            continue;
        }
        bool in = p.accept_ident("in") || p.accept("∈");
        bool notin = !in && (p.accept_ident("notin") || p.accept("∉"));
        if (!in && !notin) continue;
        p.expect("A<");
        if (p.accept("{")) {
            NameSort s = p.expect_ident();
            if (!sig.name_sorts().count(s)) throw TypeError("undeclared name sort " + s);
            sorts[n] = s;
            p.expect("}");
        }
        inside[n] = in;
    } while (p.accept(","));
    std::map<std::string, Atom> out;
    std::map<NameSort, Index> below, above;
    for (const auto& n : order) {
        NameSort s;
        if (sorts.count(n)) {
            s = sorts[n];
        } else {
            if (sig.name_sorts().size() != 1) throw TypeError("give the name sort of metavariable " + n);
            s = *sig.name_sorts().begin();
        }
        Index i = inside[n] ? -(++below[s]) : above[s]++;
        out.emplace(n, Atom{s, i});
    }
    return out;
}

inline RewriteRule parse_rule(Parser& p) {
    Context& ctx = p.context();
    RewriteRule r;
    r.label = p.expect_ident();
    p.expect(":");
    std::size_t start = p.position();
    std::size_t k = 0;
    bool has_where = false;
    for (;; ++k) {
        const Token& t = p.peek(k);
        if (t.kind == Token::Kind::End) break;
        if (t.kind != Token::Kind::Ident) continue;
        if (t.text == "where") {
            has_where = true;
            break;
        }
        if (Parser::is_statement_keyword(t.text)) break;
    }
    std::size_t after = start;
    if (has_where) {
        p.rewind(start + k + 1);
        ctx.atom_names = parse_where(p);
        after = p.position();
    }
    p.rewind(start);
    try {
        r.lhs = p.term();
        if (!p.accept_any({"-->", "⟶"})) p.error("expected '-->'");
        r.rhs = p.term();
        if (has_where && !p.accept_ident("where")) p.error("expected 'where'");
    } catch (...) {
        ctx.atom_names.clear();
        throw;
    }
    ctx.atom_names.clear();
    if (has_where) p.rewind(after);

    Sort ls = typecheck(ctx.sig, r.lhs);
    Sort rs = typecheck(ctx.sig, r.rhs);
    if (!(ls == rs)) throw TypeError("rule " + r.label + ": sides have different sorts");
    if (r.lhs.is(Term::Kind::Mod)) throw TypeError("rule " + r.label + ": left-hand side is an unknown");
    UnknownSet lv = fv(r.lhs);
    for (const Unknown& x : fv(r.rhs))
        if (!lv.count(x)) throw TypeError("rule " + r.label + ": " + x.name + " occurs only on the right");
    mentioned_atoms(r.lhs, r.atoms);
    mentioned_atoms(r.rhs, r.atoms);
    return r;
}

}  // namespace detail

// Rule files: declarations and `rule <label> : <lhs> --> <rhs> [where ...]`.
inline RuleSet parse_rules(const std::string& name, std::string_view text, Context ctx = {}) {
    RuleSet rs;
    rs.name = name;
    Parser p(ctx, text);
    while (!p.at_end()) {
        if (p.declaration()) continue;
        if (!p.accept_ident("rule")) p.error("expected a declaration or a rule");
        rs.rules.push_back(detail::parse_rule(p));
    }
    rs.ctx = std::move(ctx);
    return rs;
}

namespace rule_text {

// The SUB equations read left to right. In suball the body may mention the
// substituted atom, so pmss(Z) is A< ∪ {b} rather than (b a)·A<.
inline const char* const SUB = R"(signature arith

unknown X'', X', X : i / A<
rule subvar : var(a)[a |-> X] --> X where atoms a in A<

unknown Z : i / A< ^ {n#-1, n#0}
rule subfresh_i : Z[a |-> X] --> Z where atoms a != b, a in A<, b notin A<
unknown Z : o / A< ^ {n#-1, n#0}
rule subfresh_o : Z[a |-> X] --> Z where atoms a != b, a in A<, b notin A<

rule subsucc : succ(X')[a |-> X] --> succ(X'[a |-> X]) where atoms a in A<
rule subplus : plus(X'', X')[a |-> X] --> plus(X''[a |-> X], X'[a |-> X]) where atoms a in A<
rule subtimes : times(X'', X')[a |-> X] --> times(X''[a |-> X], X'[a |-> X]) where atoms a in A<
rule subfeq : feq(X'', X')[a |-> X] --> feq(X''[a |-> X], X'[a |-> X]) where atoms a in A<
unknown X'', X' : o / A<
rule subfimp : fimp(X'', X')[a |-> X] --> fimp(X''[a |-> X], X'[a |-> X]) where atoms a in A<

unknown Z : o / A< + {n#0}
rule suball : fall([b]Z)[a |-> X] --> fall([b](Z[a |-> X])) where atoms a != b, a in A<, b notin A<
)";

}  // namespace rule_text

inline RuleSet builtin_rules(const std::string& name) {
    if (name == "SUB") return parse_rules(name, rule_text::SUB);
    throw LogicError("no directed rules for theory " + name);
}

//------------------------------------------------------------------------------
// Matching
//------------------------------------------------------------------------------

struct RuleMatch {
    Perm rho;
    Substitution theta;
    Term instance = Term::unit();  // ρ⁻¹·(lθ), α-equivalent to the target
    Term result = Term::unit();    // ρ⁻¹·(rθ)
};

namespace detail {

class Matcher {
public:
    Matcher(const RewriteRule& r, const Signature& sig, const Term& target)
        : rule_(r), sig_(sig), target_(target) {
        bound_ = std::max(index_bound(r.lhs), index_bound(r.rhs));
        bound_ = std::max(bound_, index_bound(target));
        for (const Atom& a : r.atoms) bound_ = std::max(bound_, a.index < 0 ? -a.index : a.index);
    }

    std::optional<RuleMatch> run() {
        RuleMatch m;
        if (go({{rule_.lhs, target_}}, State{}, m)) return m;
        return std::nullopt;
    }

private:
    struct State {
        std::map<Atom, Atom> assign;  // rule atom -> target atom
        std::set<Atom> used;
        std::vector<std::tuple<Perm, Unknown, Term>> binds;
        Index fresh = 0;
    };
    using Work = std::vector<std::pair<Term, Term>>;  // processed from the back

    bool bind_atom(State& st, const Atom& m, const Atom& c) const {
        if (m.sort != c.sort) return false;
        auto it = st.assign.find(m);
        if (it != st.assign.end()) return it->second == c;
        if (st.used.count(c)) return false;
        st.assign.emplace(m, c);
        st.used.insert(c);
        return true;
    }

    bool go(Work work, State st, RuleMatch& out) {
        while (!work.empty()) {
            auto [p, t] = work.back();
            work.pop_back();
            switch (p.kind()) {
            case Term::Kind::Mod: st.binds.emplace_back(p.perm(), p.unknown(), t); break;
            case Term::Kind::Atom:
                if (!t.is(Term::Kind::Atom) || !bind_atom(st, p.atom(), t.atom())) return false;
                break;
            case Term::Kind::Tuple:
                if (!t.is(Term::Kind::Tuple) || t.elems().size() != p.elems().size()) return false;
                for (std::size_t i = p.elems().size(); i-- > 0;) work.emplace_back(p.elems()[i], t.elems()[i]);
                break;
            case Term::Kind::App:
                if (!t.is(Term::Kind::App) || t.former() != p.former()) return false;
                work.emplace_back(p.arg(), t.arg());
                break;
            case Term::Kind::Abs: {
                if (!t.is(Term::Kind::Abs) || t.atom().sort != p.atom().sort) return false;
                const Atom& m = p.atom();
                const Atom& c = t.atom();
                auto it = st.assign.find(m);
                if (it != st.assign.end()) {
                    const Atom& c0 = it->second;
                    if (c0 == c) {
                        work.emplace_back(p.body(), t.body());
                    } else if (!fa(t).contains(c0)) {
                        work.emplace_back(p.body(), act(Perm::swap(c0, c), t.body()));
                    } else {
                        return false;
                    }
                    break;
                }
                if (!st.used.count(c)) {
                    State s1 = st;
                    bind_atom(s1, m, c);
                    Work w1 = work;
                    w1.emplace_back(p.body(), t.body());
                    if (go(std::move(w1), std::move(s1), out)) return true;
                }
                // Rename the target binder apart and try again.
                Atom c1{c.sort, bound_ + 1 + st.fresh++};
                bind_atom(st, m, c1);
                work.emplace_back(p.body(), act(Perm::swap(c1, c), t.body()));
                break;
            }
            }
        }
        return finish(st, out);
    }

    bool finish(State& st, RuleMatch& out) {
        std::map<Atom, Atom> graph;  // target atom -> rule atom
        for (const auto& [m, c] : st.assign) graph.emplace(c, m);
        std::set<Atom> image;
        for (const auto& kv : graph) image.insert(kv.second);

        // Atoms of bound subterms that ρ must move: those outside some
        // permission set, and those whose place is taken by a rule atom.
        try {
            if (!st.binds.empty()) {
                AtomSet u = AtomSet::none();
                AtomSet common = std::get<1>(st.binds[0]).pmss;
                for (const auto& b : st.binds) {
                    u = set_union(u, fa(std::get<2>(b)));
                    common = set_intersection(common, std::get<1>(b).pmss);
                }
                AtomList problems = set_difference(u, common).members();
                AtomList taken = set_intersection(u, AtomSet::finite(image)).members();
                problems.insert(taken.begin(), taken.end());
                Index k = 0;
                for (const Atom& d : problems) {
                    if (graph.count(d)) continue;
                    graph.emplace(d, Atom{d.sort, -(bound_ + 1 + (k++))});
                }
            }
        } catch (const Error&) {
            return false;
        }

        std::map<NameSort, std::vector<Atom>> spare_dom, spare_img;
        std::set<Atom> img_all;
        for (const auto& kv : graph) img_all.insert(kv.second);
        for (const Atom& y : img_all)
            if (!graph.count(y)) spare_img[y.sort].push_back(y);
        for (const auto& kv : graph)
            if (!img_all.count(kv.first)) spare_dom[kv.first.sort].push_back(kv.first);
        for (auto& [sort, ys] : spare_img) {
            const auto& xs = spare_dom[sort];
            for (std::size_t i = 0; i < ys.size(); ++i) graph.emplace(ys[i], xs[i]);
        }
        Perm rho = Perm::finite(graph);
        Perm rho_inv = inverse(rho);

        Substitution th;
        for (const auto& [pi, x, s] : st.binds) {
            Term v = act(inverse(pi), act(rho, s));
            if (const Term* prev = th.find(x)) {
                if (!alpha_eq(*prev, v)) return false;
                continue;
            }
            try {
                th.add(sig_, x, v);
            } catch (const Error&) {
                return false;
            }
        }
        Term inst = act(rho_inv, subst_apply(th, rule_.lhs));
        if (!alpha_eq(inst, target_)) return false;
        out = RuleMatch{rho, th, inst, act(rho_inv, subst_apply(th, rule_.rhs))};
        return true;
    }

    const RewriteRule& rule_;
    const Signature& sig_;
    const Term& target_;
    Index bound_ = 0;
};

}  // namespace detail

// Leftmost-outermost atom assignment first; the first consistent match wins.
inline std::optional<RuleMatch> match(const RewriteRule& r, const Signature& sig, const Term& target) {
    return detail::Matcher(r, sig, target).run();
}

//------------------------------------------------------------------------------
// Normalisation
//------------------------------------------------------------------------------

struct RewriteStep {
    std::string rule;
    Term before;
    Term after;
    std::optional<Prop> equation;  // eq_<sort>(before, after) when declared
};

struct RewriteResult {
    Term term = Term::unit();
    std::size_t steps = 0;
    bool exhausted = false;
    std::vector<RewriteStep> trace;
};

namespace detail {

class Normaliser {
public:
    Normaliser(const RuleSet& rs, std::size_t fuel, bool trace) : rs_(rs), fuel_(fuel), trace_(trace) {}

    Term norm(const Term& t) {
        if (res.exhausted) return t;
        Term u = children(t);
        for (;;) {
            if (res.exhausted) return u;
            const RewriteRule* hit = nullptr;
            std::optional<RuleMatch> m;
            for (const RewriteRule& r : rs_.rules) {
                m = match(r, rs_.ctx.sig, u);
                if (m) {
                    hit = &r;
                    break;
                }
            }
            if (!hit) return u;
            if (res.steps == fuel_) {
                res.exhausted = true;
                return u;
            }
            ++res.steps;
            if (trace_) record(*hit, u, m->result);
            u = children(m->result);
        }
    }

    RewriteResult res;

private:
    Term children(const Term& t) {
        switch (t.kind()) {
        case Term::Kind::Tuple: {
            std::vector<Term> xs;
            for (const Term& e : t.elems()) xs.push_back(norm(e));
            return Term::tuple(std::move(xs));
        }
        case Term::Kind::App: return Term::app(t.former(), norm(t.arg()));
        case Term::Kind::Abs: return Term::abs(t.atom(), norm(t.body()));
        default: return t;
        }
    }

    void record(const RewriteRule& r, const Term& before, const Term& after) {
        RewriteStep s{r.label, before, after, std::nullopt};
        Sort so = typecheck(rs_.ctx.sig, before);
        if (so.kind == Sort::Kind::Base && rs_.ctx.sig.has_pred_former("eq_" + so.name))
            s.equation = Prop::pred("eq_" + so.name, Term::tuple({before, after}));
        res.trace.push_back(std::move(s));
    }

    const RuleSet& rs_;
    std::size_t fuel_;
    bool trace_;
};

}  // namespace detail

// Leftmost-innermost: subterms are normalised left to right before the
// enclosing term is tried against the rules, in file order. Each contraction
// costs one unit of fuel; on exhaustion the partially rewritten term is
// returned with `exhausted` set.
inline RewriteResult rewrite(const RuleSet& rs, const Term& t, std::size_t fuel, bool trace = false) {
    detail::Normaliser n(rs, fuel, trace);
    Term out = n.norm(t);
    n.res.term = out;
    return std::move(n.res);
}

//------------------------------------------------------------------------------
// Lint
//------------------------------------------------------------------------------

// Reports rules that are not literally the equation of the same-named axiom
// of `th` (ignoring the ∀ prefix).
inline std::vector<std::string> lint_rules(const RuleSet& rs, const Theory& th) {
    std::vector<std::string> out;
    for (const RewriteRule& r : rs.rules) {
        const Prop* ax = nullptr;
        for (const auto& [l, p] : th.axioms)
            if (l == r.label) ax = &p;
        if (!ax) {
            out.push_back("rule " + r.label + ": no axiom of that name in " + th.name);
            continue;
        }
        Prop body = *ax;
        while (body.is(Prop::Kind::Forall)) body = body.body();
        bool shape = body.is(Prop::Kind::Pred) && body.arg().is(Term::Kind::Tuple) && body.arg().elems().size() == 2;
        if (shape && alpha_eq(body.arg().elems()[0], r.lhs) && alpha_eq(body.arg().elems()[1], r.rhs)) continue;
        std::string msg = "rule " + r.label + " differs from its axiom";
        UnknownSet ru, au;
        collect_unknowns(Prop::pred("_", Term::tuple({r.lhs, r.rhs})), ru);
        collect_unknowns(*ax, au);
        const auto& sorts = rs.ctx.sig.name_sorts();
        for (const Unknown& x : ru)
            for (const Unknown& y : au)
                if (x.name == y.name && x.sort == y.sort && !(x.pmss == y.pmss))
                    msg += "; pmss(" + x.name + ") is " + to_string(x.pmss, &sorts) + " in the rule but " +
                           to_string(y.pmss, &sorts) + " in the axiom";
        out.push_back(msg);
    }
    return out;
}

}  // namespace pnl
