#pragma once

// Concrete syntax for printing. Everything printed here is accepted back by
// the parser (given the same unknown declarations).

#include <sstream>
#include <string>
#include <vector>

#include "pnl/proofs.hpp"

namespace pnl {

inline std::string to_string(const Atom& a) { return a.sort + "#" + std::to_string(a.index); }

// σ∘shifts with σ written as a product of swappings.
inline std::string to_string(const Perm& p) {
    if (p.is_identity()) return "id";
    std::vector<std::string> factors;
    std::set<Atom> seen;
    for (const auto& [start, img] : p.finite_part()) {
        if (seen.count(start)) continue;
        std::vector<Atom> cycle{start};
        seen.insert(start);
        for (Atom x = img; x != start; x = p.finite_part().at(x)) {
            cycle.push_back(x);
            seen.insert(x);
        }
        for (std::size_t i = 0; i + 1 < cycle.size(); ++i)
            factors.push_back("(" + to_string(cycle[i]) + " " + to_string(cycle[i + 1]) + ")");
    }
    for (const auto& [sort, k] : p.shifts()) factors.push_back("shift{" + sort + "}^" + std::to_string(k));
    std::string out;
    for (std::size_t i = 0; i < factors.size(); ++i) out += (i ? " ∘ " : "") + factors[i];
    return out;
}

inline std::string atoms_to_string(const std::vector<Atom>& xs) {
    std::string out = "{";
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + to_string(xs[i]);
    return out + "}";
}

// `all_sorts`, when given, lets A< be printed without an explicit sort list.
inline std::string to_string(const AtomSet& s, const std::set<NameSort>* all_sorts = nullptr) {
    std::set<NameSort> below;
    std::vector<Atom> toggled, fin;
    for (const auto& [sort, part] : s.parts()) {
        auto& dst = part.mode == SetMode::CofinBelow ? toggled : fin;
        if (part.mode == SetMode::CofinBelow) below.insert(sort);
        for (Index i : part.exceptions) dst.push_back(Atom{sort, i});
    }
    std::vector<std::string> pieces;
    if (!below.empty()) {
        std::string b = "A<";
        if (!all_sorts || *all_sorts != below) {
            b += "{";
            bool first = true;
            for (const auto& n : below) {
                b += (first ? "" : ", ") + n;
                first = false;
            }
            b += "}";
        }
        if (!toggled.empty()) b += " ^ " + atoms_to_string(toggled);
        pieces.push_back(b);
    }
    if (!fin.empty() || pieces.empty()) pieces.push_back(atoms_to_string(fin));
    std::string out;
    for (std::size_t i = 0; i < pieces.size(); ++i) out += (i ? " + " : "") + pieces[i];
    return out;
}

inline std::string to_string(const Sort& s) {
    switch (s.kind) {
    case Sort::Kind::Name:
    case Sort::Kind::Base: return s.name;
    case Sort::Kind::Abs: return "[" + s.name + "]" + to_string(s.body());
    case Sort::Kind::Tuple: {
        if (s.args.size() == 1) return "(" + to_string(s.args[0]) + ",)";
        std::string out = "(";
        for (std::size_t i = 0; i < s.args.size(); ++i) out += (i ? ", " : "") + to_string(s.args[i]);
        return out + ")";
    }
    }
    return "?";
}

inline std::string to_string(const Term& t) {
    switch (t.kind()) {
    case Term::Kind::Atom: return to_string(t.atom());
    case Term::Kind::Tuple: {
        if (t.elems().size() == 1) return "(" + to_string(t.elems()[0]) + ",)";
        std::string out = "(";
        for (std::size_t i = 0; i < t.elems().size(); ++i) out += (i ? ", " : "") + to_string(t.elems()[i]);
        return out + ")";
    }
    case Term::Kind::App: {
        const Term& a = t.arg();
        if (a.is(Term::Kind::Tuple) && a.elems().empty()) return t.former();
        if (a.is(Term::Kind::Tuple) && a.elems().size() > 1) return t.former() + to_string(a);
        return t.former() + "(" + to_string(a) + ")";
    }
    case Term::Kind::Abs: return "[" + to_string(t.atom()) + "]" + to_string(t.body());
    case Term::Kind::Mod:
        if (t.perm().is_identity()) return t.unknown().name;
        return to_string(t.perm()) + " * " + t.unknown().name;
    }
    return "?";
}

inline std::string to_string(const Prop& p) {
    switch (p.kind()) {
    case Prop::Kind::Bot: return "false";
    case Prop::Kind::Pred: {
        const Term& a = p.arg();
        if (a.is(Term::Kind::Tuple) && a.elems().empty()) return p.name();
        if (a.is(Term::Kind::Tuple) && a.elems().size() > 1) return p.name() + to_string(a);
        return p.name() + "(" + to_string(a) + ")";
    }
    case Prop::Kind::Imp: {
        std::string l = to_string(p.lhs());
        if (p.lhs().is(Prop::Kind::Imp) || p.lhs().is(Prop::Kind::Forall)) l = "(" + l + ")";
        return l + " => " + to_string(p.rhs());
    }
    case Prop::Kind::Forall: return "forall " + p.binder().name + " . " + to_string(p.body());
    }
    return "?";
}

inline std::string to_string(const Props& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + to_string(xs[i]);
    return out;
}

inline std::string to_string(const Sequent& s) {
    std::string l = to_string(s.left), r = to_string(s.right);
    return l + (l.empty() ? "" : " ") + "|-" + (r.empty() ? "" : " ") + r;
}

inline std::string to_string(const Substitution& th) {
    std::string out = "[";
    bool first = true;
    for (const auto& [x, t] : th.entries()) {
        out += (first ? "" : ", ") + x.name + " := " + to_string(t);
        first = false;
    }
    return out + "]";
}

inline std::string quoted(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

// Proof s-expression, one node per line, conclusions always included.
inline void print_derivation(std::ostream& os, const Derivation& d, int indent = 0) {
    std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    os << pad << "(";
    switch (d.rule) {
    case Rule::Ax: os << "ax"; break;
    case Rule::BotL: os << "botL"; break;
    case Rule::ImpL: os << "impL"; break;
    case Rule::ImpR: os << "impR"; break;
    case Rule::ForallL: os << "forallL"; break;
    case Rule::ForallR: os << "forallR"; break;
    case Rule::Cut: os << "cut"; break;
    case Rule::EqS: os << "eqS"; break;
    case Rule::EqR: os << "eqR"; break;
    }
    os << " :seq " << quoted(to_string(d.conclusion));
    if (d.formula) os << " :formula " << quoted(to_string(*d.formula));
    if (d.rule == Rule::Ax) os << " :perm " << quoted(to_string(d.perm));
    if (d.eigen) os << " :X " << d.eigen->name;
    if (d.witness) os << " :witness " << quoted(to_string(*d.witness));
    if (d.aux) os << " :context " << quoted(to_string(*d.aux));
    for (const Derivation& q : d.premises) {
        os << "\n";
        print_derivation(os, q, indent + 1);
    }
    os << ")";
}

inline std::string to_string(const Derivation& d) {
    std::ostringstream os;
    print_derivation(os, d);
    return os.str();
}

}  // namespace pnl
