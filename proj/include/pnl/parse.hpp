#pragma once

// Lexer and recursive-descent parser for the concrete syntax: sorts, atom
// sets, permutations, terms, propositions, sequents, substitutions and
// signature/unknown declarations.

#include <cctype>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pnl/print.hpp"
#include "pnl/signatures.hpp"

namespace pnl {

struct Token {
    enum class Kind { End, Ident, Atom, Int, String, Sym };
    Kind kind = Kind::End;
    std::string text;
    Atom atom;
    Index value = 0;
    int line = 0;
    int col = 0;
};

inline std::vector<Token> lex(std::string_view src) {
    static const std::vector<std::string> syms = {
        "-->", "|->", "<=>", ":=", "=>", "==", "|-", "!=", "∘", "↦", "⊢", "⇒", "⇔", "∀", "¬", "∧", "∨", "⊥",
        "∪", "≐", "≠", "∉", "∈", "(", ")", "[", "]", "{", "}", ",", ".", ":", "/", "*", "^", "+", "-", "~",
        "&", "|", "@", "=", "<", ">"};
    std::vector<Token> out;
    std::size_t i = 0;
    int line = 1, col = 1;
    auto adv = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
                ++col;
            }
            ++i;
        }
    };
    auto ident_start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
    auto ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            adv(1);
            continue;
        }
        if (c == ';') {
            while (i < src.size() && src[i] != '\n') adv(1);
            continue;
        }
        Token t;
        t.line = line;
        t.col = col;
        if (c == '"') {
            adv(1);
            std::string s;
            while (i < src.size() && src[i] != '"') {
                if (src[i] == '\\' && i + 1 < src.size()) adv(1);
                s += src[i];
                adv(1);
            }
            if (i >= src.size()) throw ParseError("unterminated string", t.line, t.col);
            adv(1);
            t.kind = Token::Kind::String;
            t.text = std::move(s);
            out.push_back(std::move(t));
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            t.kind = Token::Kind::Int;
            t.text = std::string(src.substr(i, j - i));
            t.value = std::stoll(t.text);
            adv(j - i);
            out.push_back(std::move(t));
            continue;
        }
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < src.size() && ident_char(src[j])) ++j;
            std::string id(src.substr(i, j - i));
            if (id == "A" && j < src.size() && src[j] == '<' && !(j + 1 < src.size() && src[j + 1] == '=')) {
                t.kind = Token::Kind::Sym;
                t.text = "A<";
                adv(2);
                out.push_back(std::move(t));
                continue;
            }
            if (j < src.size() && src[j] == '#') {
                std::size_t k = j + 1;
                bool negative = k < src.size() && src[k] == '-';
                if (negative) ++k;
                std::size_t d = k;
                while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
                if (k == d) throw ParseError("malformed atom after '" + id + "#'", t.line, t.col);
                Index idx = std::stoll(std::string(src.substr(d, k - d)));
                t.kind = Token::Kind::Atom;
                t.atom = Atom{id, negative ? -idx : idx};
                t.text = std::string(src.substr(i, k - i));
                adv(k - i);
                out.push_back(std::move(t));
                continue;
            }
            t.kind = Token::Kind::Ident;
            t.text = std::move(id);
            adv(j - i);
            out.push_back(std::move(t));
            continue;
        }
        bool matched = false;
        for (const std::string& s : syms) {
            if (src.substr(i, s.size()) == s) {
                t.kind = Token::Kind::Sym;
                t.text = s;
                adv(s.size());
                out.push_back(std::move(t));
                matched = true;
                break;
            }
        }
        if (!matched) throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }
    Token end;
    end.line = line;
    end.col = col;
    out.push_back(end);
    return out;
}

// Declarations in scope while parsing.
struct Context {
    Signature sig;
    std::map<std::string, Unknown> unknowns;
    std::map<std::string, Prop> labels;  // named axioms, referenced as @label
    std::map<std::string, Atom> atom_names;  // rule metavariables

    const Unknown& unknown(const std::string& name) const {
        auto it = unknowns.find(name);
        if (it == unknowns.end()) throw TypeError("undeclared unknown " + name);
        return it->second;
    }
    AtomSet default_pmss() const { return AtomSet::below(sig.name_sorts()); }
};

class Parser {
public:
    Parser(Context& ctx, std::string_view src) : ctx_(ctx), toks_(lex(src)) {}

    //--- token access -------------------------------------------------------

    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    bool at_end() const { return peek().kind == Token::Kind::End; }
    Token next() {
        Token t = peek();
        if (pos_ < toks_.size() - 1) ++pos_;
        return t;
    }
    bool is_sym(const std::string& s, std::size_t k = 0) const {
        return peek(k).kind == Token::Kind::Sym && peek(k).text == s;
    }
    bool is_ident(const std::string& s, std::size_t k = 0) const {
        return peek(k).kind == Token::Kind::Ident && peek(k).text == s;
    }
    bool accept(const std::string& s) {
        if (!is_sym(s)) return false;
        next();
        return true;
    }
    bool accept_any(std::initializer_list<const char*> ss) {
        for (const char* s : ss)
            if (accept(s)) return true;
        return false;
    }
    bool accept_ident(const std::string& s) {
        if (!is_ident(s)) return false;
        next();
        return true;
    }
    [[noreturn]] void error(const std::string& msg) const {
        const Token& t = peek();
        std::string near = t.kind == Token::Kind::End ? "end of input" : "'" + t.text + "'";
        throw ParseError(msg + " (near " + near + ")", t.line, t.col);
    }
    void expect(const std::string& s) {
        if (!accept(s)) error("expected '" + s + "'");
    }
    std::string expect_ident() {
        if (peek().kind != Token::Kind::Ident) error("expected an identifier");
        return next().text;
    }
    bool is_atom(std::size_t k = 0) const {
        const Token& t = peek(k);
        return t.kind == Token::Kind::Atom || (t.kind == Token::Kind::Ident && ctx_.atom_names.count(t.text));
    }
    Atom expect_atom() {
        if (!is_atom()) error("expected an atom");
        Token t = next();
        Atom a = t.kind == Token::Kind::Atom ? t.atom : ctx_.atom_names.at(t.text);
        if (!ctx_.sig.name_sorts().count(a.sort)) throw TypeError("atom " + to_string(a) + " of undeclared name sort");
        return a;
    }
    void expect_end() {
        if (!at_end()) error("unexpected trailing input");
    }
    std::size_t position() const { return pos_; }
    void rewind(std::size_t p) { pos_ = p; }
    Context& context() { return ctx_; }

    //--- sorts --------------------------------------------------------------

    Sort sort() {
        if (accept("[")) {
            std::string nu = expect_ident();
            if (!ctx_.sig.name_sorts().count(nu)) throw TypeError("undeclared name sort " + nu);
            expect("]");
            return Sort::abs(nu, sort());
        }
        if (accept("(")) {
            if (accept(")")) return Sort::unit();
            std::vector<Sort> xs{sort()};
            bool comma = false;
            while (accept(",")) {
                comma = true;
                if (is_sym(")")) break;
                xs.push_back(sort());
            }
            expect(")");
            if (xs.size() == 1 && !comma) return xs[0];
            return Sort::tuple(std::move(xs));
        }
        std::string n = expect_ident();
        if (ctx_.sig.name_sorts().count(n)) return Sort::name_sort(n);
        if (ctx_.sig.base_sorts().count(n)) return Sort::base(n);
        throw TypeError("undeclared sort " + n);
    }

    //--- atom sets ----------------------------------------------------------

    AtomSet atomset() {
        AtomSet s = atomset_unit();
        for (;;) {
            if (accept_any({"+", "∪"})) {
                s = set_union(s, atomset_unit());
            } else if (accept("-")) {
                s = set_difference(s, atomset_unit());
            } else if (accept("^")) {
                AtomSet t = atomset_unit();
                s = set_union(set_difference(s, t), set_difference(t, s));
            } else {
                return s;
            }
        }
    }

    AtomSet atomset_unit() {
        if (accept("A<")) {
            if (is_sym("{") && peek(1).kind == Token::Kind::Ident) {
                next();
                std::set<NameSort> sorts;
                do {
                    std::string n = expect_ident();
                    if (!ctx_.sig.name_sorts().count(n)) throw TypeError("undeclared name sort " + n);
                    sorts.insert(n);
                } while (accept(","));
                expect("}");
                return AtomSet::below(sorts);
            }
            return AtomSet::below(ctx_.sig.name_sorts());
        }
        if (accept("(")) {
            AtomSet s = atomset();
            expect(")");
            return s;
        }
        expect("{");
        AtomList xs;
        if (!is_sym("}")) {
            do xs.insert(expect_atom());
            while (accept(","));
        }
        expect("}");
        return AtomSet::finite(xs);
    }

    //--- permutations -------------------------------------------------------

    bool at_perm() const {
        if (is_ident("id") || is_ident("shift")) return true;
        return is_sym("(") && is_atom(1) && is_atom(2);
    }

    Perm perm() {
        Perm p = perm_factor();
        while (accept_any({"∘", "."})) p = compose(p, perm_factor());
        return p;
    }

    Perm perm_factor() {
        if (accept_ident("id")) return Perm::identity();
        if (accept_ident("shift")) {
            expect("{");
            std::string n = expect_ident();
            if (!ctx_.sig.name_sorts().count(n)) throw TypeError("undeclared name sort " + n);
            expect("}");
            Index k = 1;
            if (accept("^")) {
                bool neg = accept("-");
                if (peek().kind != Token::Kind::Int) error("expected a shift exponent");
                k = next().value;
                if (neg) k = -k;
            }
            return Perm::shift(n, k);
        }
        expect("(");
        if (is_atom()) {
            Atom a = expect_atom();
            Atom b = expect_atom();
            expect(")");
            return Perm::swap(a, b);
        }
        Perm p = perm();
        expect(")");
        return p;
    }

    //--- terms --------------------------------------------------------------

    Term term() {
        Term t = term_primary();
        while (is_sym("[") && is_atom(1) && (is_sym("|->", 2) || is_sym("↦", 2))) {
            next();
            Atom a = expect_atom();
            next();
            Term s = term();
            expect("]");
            Sort rs = typecheck(ctx_.sig, t);
            if (rs.kind != Sort::Kind::Base) throw TypeError("substitution sugar needs a term of base sort");
            std::string f = "sub_" + rs.name;
            if (!ctx_.sig.has_term_former(f)) throw TypeError("substitution sugar needs term-former " + f);
            t = Term::app(f, Term::tuple({Term::abs(a, t), s}));
        }
        return t;
    }

    Term term_primary() {
        const Token& t = peek();
        if (is_atom()) return Term::atom(expect_atom());
        if (is_sym("[")) {
            next();
            Atom a = expect_atom();
            expect("]");
            return Term::abs(a, term());
        }
        if (at_perm()) {
            Perm p = perm();
            expect("*");
            return Term::mod(p, ctx_.unknown(expect_ident()));
        }
        if (is_sym("(")) {
            next();
            Term r = term_args_tail();
            return r;
        }
        if (t.kind == Token::Kind::Ident) {
            std::string id = next().text;
            if (ctx_.sig.has_term_former(id)) {
                if (accept("(")) return Term::app(id, term_args_tail());
                return Term::app(id, Term::unit());
            }
            if (ctx_.unknowns.count(id)) return Term::var(ctx_.unknown(id));
            if (ctx_.sig.has_pred_former(id)) throw TypeError("proposition-former " + id + " used as a term");
            throw TypeError("unknown identifier " + id);
        }
        error("expected a term");
    }

    // After '(' : `)`, `t)`, `t,)`, `t1, t2, ...)`.
    Term term_args_tail() {
        if (accept(")")) return Term::unit();
        std::vector<Term> xs{term()};
        bool comma = false;
        while (accept(",")) {
            comma = true;
            if (is_sym(")")) break;
            xs.push_back(term());
        }
        expect(")");
        if (xs.size() == 1 && !comma) return xs[0];
        return Term::tuple(std::move(xs));
    }

    //--- propositions -------------------------------------------------------

    Prop prop() {
        Prop a = prop_imp();
        if (accept_any({"<=>", "⇔"})) return iff(a, prop_imp());
        return a;
    }

    Prop prop_imp() {
        Prop a = prop_or();
        if (accept_any({"=>", "⇒"})) return Prop::imp(a, prop_imp());
        return a;
    }

    Prop prop_or() {
        Prop a = prop_and();
        if (accept_any({"|", "∨"})) return disj(a, prop_or());
        return a;
    }

    Prop prop_and() {
        Prop a = prop_unary();
        if (accept_any({"&", "∧"})) return conj(a, prop_and());
        return a;
    }

    Prop prop_unary() {
        if (accept_any({"~", "¬"})) return neg(prop_unary());
        if (accept_ident("forall") || accept("∀")) {
            std::vector<Unknown> xs;
            do {
                xs.push_back(ctx_.unknown(expect_ident()));
                accept(",");
            } while (peek().kind == Token::Kind::Ident);
            expect(".");
            Prop body = prop();
            for (auto it = xs.rbegin(); it != xs.rend(); ++it) body = Prop::forall(*it, body);
            return body;
        }
        return prop_atomic();
    }

    Prop prop_atomic() {
        if (accept_ident("false") || accept("⊥")) return Prop::bot();
        if (accept_ident("true")) return top();
        if (accept("@")) {
            std::string l = expect_ident();
            auto it = ctx_.labels.find(l);
            if (it == ctx_.labels.end()) throw TypeError("unknown axiom label @" + l);
            return it->second;
        }
        if (is_sym("(")) {
            std::size_t save = pos_;
            try {
                next();
                Prop p = prop();
                expect(")");
                if (!is_sym("==") && !is_sym("≐")) return p;
            } catch (const Error&) {
            }
            pos_ = save;
        }
        if (peek().kind == Token::Kind::Ident && ctx_.sig.has_pred_former(peek().text)) {
            std::string p = next().text;
            if (accept("(")) return Prop::pred(p, term_args_tail());
            return Prop::pred(p, Term::unit());
        }
        Term l = term();
        if (!accept_any({"==", "≐"})) error("expected a proposition");
        Term r = term();
        Sort s = typecheck(ctx_.sig, l);
        if (s.kind != Sort::Kind::Base) throw TypeError("equality sugar needs terms of base sort");
        std::string p = "eq_" + s.name;
        if (!ctx_.sig.has_pred_former(p)) throw TypeError("equality sugar needs proposition-former " + p);
        return Prop::pred(p, Term::tuple({l, r}));
    }

    //--- sequents and substitutions -----------------------------------------

    Props prop_list_until_turnstile() {
        Props xs;
        if (is_sym("|-") || is_sym("⊢")) return xs;
        do xs.push_back(prop());
        while (accept(","));
        return xs;
    }

    Sequent sequent() {
        Sequent s;
        s.left = prop_list_until_turnstile();
        if (!accept_any({"|-", "⊢"})) error("expected '|-'");
        bool empty = at_end() || is_sym(")") || peek().kind == Token::Kind::String ||
                     (peek().kind == Token::Kind::Ident && is_statement_keyword(peek().text));
        if (!empty) {
            do s.right.push_back(prop());
            while (accept(","));
        }
        return s;
    }

    Substitution substitution() {
        Substitution th;
        expect("[");
        if (accept("]")) return th;
        do {
            const Unknown& x = ctx_.unknown(expect_ident());
            expect(":=");
            th.add(ctx_.sig, x, term());
        } while (accept(","));
        expect("]");
        return th;
    }

    //--- declarations -------------------------------------------------------

    static bool is_statement_keyword(const std::string& s) {
        static const std::set<std::string> kws = {"namesort", "basesort", "term", "pred", "unknown", "signature",
                                                  "axiom", "theory", "goal", "proof", "rule"};
        return kws.count(s) > 0;
    }

    // Parses one declaration if the next token starts one.
    bool declaration() {
        if (accept_ident("namesort")) {
            do ctx_.sig.add_name_sort(expect_ident());
            while (accept(","));
            return true;
        }
        if (accept_ident("basesort")) {
            do ctx_.sig.add_base_sort(expect_ident());
            while (accept(","));
            return true;
        }
        if (accept_ident("term")) {
            std::string f = expect_ident();
            expect(":");
            Sort arg = sort();
            std::string res = expect_ident();
            ctx_.sig.add_term_former(f, arg, res);
            return true;
        }
        if (accept_ident("pred")) {
            std::string p = expect_ident();
            expect(":");
            ctx_.sig.add_pred_former(p, sort());
            return true;
        }
        if (accept_ident("unknown")) {
            std::vector<std::string> names;
            do names.push_back(expect_ident());
            while (accept(","));
            expect(":");
            Sort s = sort();
            AtomSet pm = ctx_.default_pmss();
            if (accept("/")) pm = atomset();
            if (!pm.is_permission_set(ctx_.sig.name_sorts()))
                throw TypeError("permission set of " + names[0] + " is not of the form (A< ∪ A) \\ B");
            for (const auto& n : names) ctx_.unknowns.insert_or_assign(n, Unknown{n, s, pm});
            return true;
        }
        if (accept_ident("signature")) {
            std::string n = expect_ident();
            Signature b;
            if (!builtin_signature(n, b)) throw TypeError("unknown built-in signature " + n);
            ctx_.sig.merge(b);
            return true;
        }
        return false;
    }

    void declarations_to_end() {
        while (!at_end())
            if (!declaration()) error("expected a declaration");
    }

private:
    Context& ctx_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

//------------------------------------------------------------------------------
// Whole-string entry points
//------------------------------------------------------------------------------

template <typename F>
auto parse_whole(Context& ctx, std::string_view src, F f) {
    Parser p(ctx, src);
    auto v = f(p);
    p.expect_end();
    return v;
}

inline Sort parse_sort(Context& ctx, std::string_view s) {
    return parse_whole(ctx, s, [](Parser& p) { return p.sort(); });
}
inline AtomSet parse_atomset(Context& ctx, std::string_view s) {
    return parse_whole(ctx, s, [](Parser& p) { return p.atomset(); });
}
inline Perm parse_perm(Context& ctx, std::string_view s) {
    return parse_whole(ctx, s, [](Parser& p) { return p.perm(); });
}
inline Term parse_term(Context& ctx, std::string_view s) {
    return parse_whole(ctx, s, [](Parser& p) { return p.term(); });
}
inline Prop parse_prop(Context& ctx, std::string_view s) {
    return parse_whole(ctx, s, [](Parser& p) { return p.prop(); });
}
inline Sequent parse_sequent(Context& ctx, std::string_view s) {
    return parse_whole(ctx, s, [](Parser& p) { return p.sequent(); });
}
inline Substitution parse_substitution(Context& ctx, std::string_view s) {
    return parse_whole(ctx, s, [](Parser& p) { return p.substitution(); });
}
inline void parse_declarations(Context& ctx, std::string_view s) {
    Parser p(ctx, s);
    p.declarations_to_end();
}

}  // namespace pnl
