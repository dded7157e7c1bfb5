#pragma once

// Built-in signatures.

#include <string>

#include "pnl/syntax.hpp"

namespace pnl {

// One name sort n, base sorts i (numbers) and o (formulas), the reflected
// connectives, explicit substitution, and the two equalities.
inline Signature arith_signature() {
    Signature s;
    s.add_name_sort("n");
    s.add_base_sort("i");
    s.add_base_sort("o");
    const Sort n = Sort::name_sort("n"), i = Sort::base("i"), o = Sort::base("o");
    s.add_term_former("zero", Sort::unit(), "i");
    s.add_term_former("succ", i, "i");
    s.add_term_former("plus", Sort::tuple({i, i}), "i");
    s.add_term_former("times", Sort::tuple({i, i}), "i");
    s.add_term_former("fbot", Sort::unit(), "o");
    s.add_term_former("fimp", Sort::tuple({o, o}), "o");
    s.add_term_former("fall", Sort::abs("n", o), "o");
    s.add_term_former("feq", Sort::tuple({i, i}), "o");
    s.add_term_former("var", n, "i");
    s.add_term_former("sub_i", Sort::tuple({Sort::abs("n", i), i}), "i");
    s.add_term_former("sub_o", Sort::tuple({Sort::abs("n", o), i}), "o");
    s.add_pred_former("eq_i", Sort::tuple({i, i}));
    s.add_pred_former("eq_o", Sort::tuple({o, o}));
    s.add_pred_former("eps", o);
    return s;
}

inline bool builtin_signature(const std::string& name, Signature& out) {
    if (name == "arith") {
        out = arith_signature();
        return true;
    }
    return false;
}

}  // namespace pnl
