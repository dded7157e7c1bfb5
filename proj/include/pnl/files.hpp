#pragma once

// Text documents: declarations, theories, axioms, goals, proofs and rules in
// one statement language, plus the line-based first-order files.
//
//   signature arith
//   unknown X : i / A<
//   axiom refl : forall X . X == X
//   goal @refl |- zero == zero
//   proof
//   (forallL :witness zero
//     (ax :formula "zero == zero"))
//
// Proof nodes are (rule :attr value ... premises...). Values are quoted
// strings; apart from :seq, a value that is one identifier, one atom or an
// @label may be left unquoted. A node without :seq gets the
// conclusion its parent demands (the parent's sides plus the active formulas),
// and the root gets the goal. Omitted principal formulas are inferred when
// there is exactly one candidate; an Ax without :perm uses id.

#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pnl/rewrite.hpp"

namespace pnl {

struct Document {
    Context ctx;
    std::vector<std::pair<std::string, Prop>> axioms;
    std::optional<Sequent> goal;
    std::optional<Derivation> proof;
    std::vector<RewriteRule> rules;
    std::map<std::string, std::pair<int, int>> positions;  // proof node path -> line, column
};

namespace detail {

class ProofReader {
public:
    ProofReader(Parser& p, std::map<std::string, std::pair<int, int>>& positions)
        : p_(p), ctx_(p.context()), positions_(positions) {}

private:
    static Rule rule_of(const std::string& s) {
        static const std::map<std::string, Rule> m = {
            {"ax", Rule::Ax},           {"botL", Rule::BotL},       {"impL", Rule::ImpL}, {"impR", Rule::ImpR},
            {"forallL", Rule::ForallL}, {"forallR", Rule::ForallR}, {"cut", Rule::Cut},   {"eqS", Rule::EqS},
            {"eqR", Rule::EqR}};
        auto it = m.find(s);
        if (it == m.end()) throw ParseError("unknown rule " + s, 0, 0);
        return it->second;
    }

    template <typename F>
    auto quoted_value(F f, const char* what) {
        if (p_.peek().kind != Token::Kind::String) p_.error(std::string("expected ") + what);
        return from_token(p_.next(), f);
    }

    template <typename F>
    auto from_token(const Token& t, F f) {
        try {
            Parser sub(ctx_, t.text);
            auto v = f(sub);
            sub.expect_end();
            return v;
        } catch (const ParseError& e) {
            throw ParseError(e.message() + " (inside the string at column " + std::to_string(e.col()) + ")", t.line, t.col);
        }
    }

    // Unquoted values are a single token, or @label.
    template <typename F>
    auto value(F f) {
        if (p_.peek().kind == Token::Kind::String) return quoted_value(f, "a value");
        std::string text;
        if (p_.accept("@")) text = "@";
        if (p_.peek().kind != Token::Kind::Ident && p_.peek().kind != Token::Kind::Atom)
            p_.error("expected a quoted value or a single token");
        text += p_.next().text;
        Parser sub(ctx_, text);
        auto v = f(sub);
        sub.expect_end();
        return v;
    }

    bool well_formed_for_actives(const Derivation& d) const {
        if (!d.formula) return false;
        const Prop& p = *d.formula;
        switch (d.rule) {
        case Rule::ImpL:
        case Rule::ImpR: return p.is(Prop::Kind::Imp);
        case Rule::ForallL: return p.is(Prop::Kind::Forall) && d.witness.has_value();
        case Rule::ForallR: return p.is(Prop::Kind::Forall) && d.eigen.has_value();
        case Rule::EqS:
            return d.eigen && d.aux && p.is(Prop::Kind::Pred) && p.arg().is(Term::Kind::Tuple) &&
                   p.arg().elems().size() == 2;
        case Rule::Cut:
        case Rule::EqR: return true;
        default: return false;
        }
    }

    void infer_formula(Derivation& d, const std::string& path) {
        const Sequent& c = d.conclusion;
        std::vector<Prop> cands;
        switch (d.rule) {
        case Rule::Ax:
            for (const Prop& l : c.left)
                if (mem(c.right, act(d.perm, l))) cands.push_back(l);
            if (!cands.empty()) d.formula = cands[0];
            return;
        case Rule::ImpL:
        case Rule::ForallL:
            for (const Prop& l : c.left)
                if (l.is(d.rule == Rule::ImpL ? Prop::Kind::Imp : Prop::Kind::Forall)) cands.push_back(l);
            break;
        case Rule::ImpR:
        case Rule::ForallR:
            for (const Prop& r : c.right)
                if (r.is(d.rule == Rule::ImpR ? Prop::Kind::Imp : Prop::Kind::Forall)) cands.push_back(r);
            break;
        default: return;
        }
        if (cands.size() == 1) {
            d.formula = cands[0];
            return;
        }
        throw ParseError("proof node " + path + ": give :formula (" + std::to_string(cands.size()) + " candidates)",
                         p_.peek().line, p_.peek().col);
    }

    // An undeclared ∀R eigenvariable takes the sort and permission set of the
    // bound unknown; an undeclared ≈S unknown takes the sort of the equation.
    Unknown resolve_unknown(const Derivation& d, const std::string& name, const std::string& path) {
        auto it = ctx_.unknowns.find(name);
        if (it != ctx_.unknowns.end()) return it->second;
        Unknown y;
        if (d.rule == Rule::ForallR && d.formula && d.formula->is(Prop::Kind::Forall)) {
            y = Unknown{name, d.formula->binder().sort, d.formula->binder().pmss};
        } else if (d.rule == Rule::EqS && d.formula && d.formula->is(Prop::Kind::Pred) &&
                   d.formula->arg().is(Term::Kind::Tuple) && !d.formula->arg().elems().empty()) {
            y = Unknown{name, typecheck(ctx_.sig, d.formula->arg().elems()[0]), ctx_.default_pmss()};
        } else {
            throw TypeError("proof node " + path + ": undeclared unknown " + name);
        }
        ctx_.unknowns.emplace(name, y);
        return y;
    }

public:
    Derivation node(const std::optional<Sequent>& expected, const std::string& path) {
        positions_[path] = {p_.peek().line, p_.peek().col};
        p_.expect("(");
        std::string head = p_.expect_ident();
        Derivation d;
        d.rule = rule_of(head);

        std::optional<Sequent> seq;
        std::optional<std::string> xname;
        std::optional<Token> context;  // parsed once :X is known
        while (p_.accept(":")) {
            std::string key = p_.expect_ident();
            if (key == "seq") {
                seq = quoted_value([](Parser& q) { return q.sequent(); }, "a quoted sequent");
            } else if (key == "formula") {
                d.formula = value([](Parser& q) { return q.prop(); });
            } else if (key == "perm") {
                d.perm = value([](Parser& q) { return q.perm(); });
            } else if (key == "witness") {
                d.witness = value([](Parser& q) { return q.term(); });
            } else if (key == "context") {
                if (p_.peek().kind != Token::Kind::String) p_.error("expected a quoted proposition");
                context = p_.next();
            } else if (key == "X") {
                xname = p_.peek().kind == Token::Kind::String ? p_.next().text : p_.expect_ident();
            } else {
                p_.error("unknown attribute :" + key);
            }
        }

        if (seq)
            d.conclusion = *seq;
        else if (expected)
            d.conclusion = *expected;
        else
            throw ParseError("proof node " + path + " has no conclusion: give :seq or a goal", p_.peek().line,
                             p_.peek().col);

        if (!d.formula) infer_formula(d, path);
        if (xname) d.eigen = resolve_unknown(d, *xname, path);
        if (context) d.aux = from_token(*context, [](Parser& q) { return q.prop(); });

        FreshUnknowns fresh;
        std::size_t i = 0;
        while (!p_.accept(")")) {
            std::optional<Sequent> want;
            if (i < arity(d.rule) && well_formed_for_actives(d)) {
                auto [al, ar] = actives(d, i, fresh);
                want = Sequent{unite(d.conclusion.left, al), unite(d.conclusion.right, ar)};
            }
            d.premises.push_back(node(want, path + "." + std::to_string(i)));
            ++i;
        }
        return d;
    }

private:
    Parser& p_;
    Context& ctx_;
    std::map<std::string, std::pair<int, int>>& positions_;
};

}  // namespace detail

inline void merge_theory(Context& ctx, const Theory& th) {
    ctx.sig.merge(th.ctx.sig);
    for (const auto& [l, p] : th.axioms) ctx.labels.insert_or_assign(l, p);
}

inline Document parse_document(std::string_view text) {
    Document doc;
    Context& ctx = doc.ctx;
    Parser p(ctx, text);
    while (!p.at_end()) {
        if (p.declaration()) continue;
        if (p.accept_ident("theory")) {
            merge_theory(ctx, builtin_theory(p.expect_ident()));
        } else if (p.accept_ident("axiom")) {
            std::string label = p.expect_ident();
            p.expect(":");
            Prop a = p.prop();
            typecheck(ctx.sig, a);
            ctx.labels.insert_or_assign(label, a);
            doc.axioms.emplace_back(label, a);
        } else if (p.accept_ident("goal")) {
            doc.goal = p.sequent();
        } else if (p.accept_ident("proof")) {
            if (doc.proof) p.error("a document holds one proof");
            detail::ProofReader r(p, doc.positions);
            doc.proof = r.node(doc.goal, "root");
        } else if (p.accept_ident("rule")) {
            doc.rules.push_back(detail::parse_rule(p));
        } else {
            p.error("expected a statement");
        }
    }
    return doc;
}

// Checks the proof of a document against its goal.
inline std::vector<Diagnostic> check_document(const Document& doc, CheckOptions opts = {}) {
    if (!doc.proof) return {{"root", "document has no proof"}};
    std::vector<Diagnostic> out = check(doc.ctx.sig, *doc.proof, opts);
    if (doc.goal && !same_sequent(doc.proof->conclusion, *doc.goal))
        out.insert(out.begin(), Diagnostic{"root", "conclusion differs from the goal"});
    return out;
}

//------------------------------------------------------------------------------
// Printing
//------------------------------------------------------------------------------

inline void print_signature(std::ostream& os, const Signature& sig) {
    for (const auto& n : sig.name_sorts()) os << "namesort " << n << "\n";
    for (const auto& b : sig.base_sorts()) os << "basesort " << b << "\n";
    for (const auto& [f, tf] : sig.term_formers()) os << "term " << f << " : " << to_string(tf.arg) << " " << tf.result << "\n";
    for (const auto& [p, s] : sig.pred_formers()) os << "pred " << p << " : " << to_string(s) << "\n";
}

// A self-contained document: signature, every unknown the proof mentions,
// the goal and the proof.
inline std::string proof_document(const Signature& sig, const Derivation& d) {
    std::ostringstream os;
    print_signature(os, sig);
    UnknownSet us;
    collect_unknowns(d, us);
    for (const Unknown& x : us)
        os << "unknown " << x.name << " : " << to_string(x.sort) << " / " << to_string(x.pmss, &sig.name_sorts())
           << "\n";
    os << "goal " << to_string(d.conclusion) << "\n";
    os << "proof\n";
    print_derivation(os, d);
    os << "\n";
    return os.str();
}

//------------------------------------------------------------------------------
// First-order files: one sequent per line; a line without a turnstile is a
// formula to be proved. `;` starts a comment.
//------------------------------------------------------------------------------

inline std::vector<FolSequent> parse_fol_file(std::string_view text) {
    std::vector<FolSequent> out;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto semi = line.find(';');
        if (semi != std::string::npos) line.erase(semi);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            if (line.find("|-") != std::string::npos || line.find("⊢") != std::string::npos)
                out.push_back(parse_fol_sequent(line));
            else
                out.push_back(FolSequent{{}, {parse_fol_formula(line)}});
        } catch (const ParseError& e) {
            throw ParseError(e.message(), lineno, e.col());
        }
    }
    return out;
}

}  // namespace pnl
