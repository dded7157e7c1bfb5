// pnl: command-line front end for the permissive-nominal proof kernel.
//
// Exit codes: 0 ok, 1 logical failure, 2 parse or type error, 3 fuel exhausted.

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pnl/files.hpp"
#include "pnl/transform.hpp"
#include "pnl/testing/oracles.hpp"

using namespace pnl;
using json = nlohmann::json;

namespace {

enum Exit { kOk = 0, kLogic = 1, kSyntax = 2, kFuel = 3 };

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Declarations for the term-level commands: a --decls file, or else the
// arithmetic signature; --sig adds to either.
Context make_context(const std::string& decls_file, const std::string& sig_text) {
    Context ctx;
    if (decls_file.empty())
        ctx.sig = arith_signature();
    else
        parse_declarations(ctx, read_file(decls_file));
    if (!sig_text.empty()) parse_declarations(ctx, sig_text);
    return ctx;
}

std::string position(const Document& doc, const std::string& path) {
    auto it = doc.positions.find(path);
    if (it == doc.positions.end()) return "";
    return std::to_string(it->second.first) + ":" + std::to_string(it->second.second);
}

void walk(const Derivation& d, const std::string& path,
          const std::function<void(const Derivation&, const std::string&)>& f) {
    f(d, path);
    for (std::size_t i = 0; i < d.premises.size(); ++i) walk(d.premises[i], path + "." + std::to_string(i), f);
}

int cmd_check(const std::vector<std::string>& files, bool as_json, bool eq_rules) {
    int status = kOk;
    for (const std::string& file : files) {
        Document doc = parse_document(read_file(file));
        auto diags = check_document(doc, CheckOptions{eq_rules});
        if (!doc.proof) {
            std::cout << file << ": no proof\n";
            status = std::max(status, static_cast<int>(kLogic));
            continue;
        }
        std::map<std::string, std::vector<std::string>> by_path;
        for (const auto& dg : diags) by_path[dg.path].push_back(dg.message);
        if (as_json) {
            walk(*doc.proof, "root", [&](const Derivation& d, const std::string& path) {
                json rec;
                rec["file"] = file;
                rec["path"] = path;
                rec["position"] = position(doc, path);
                rec["rule"] = rule_name(d.rule);
                rec["conclusion"] = to_string(d.conclusion);
                auto it = by_path.find(path);
                rec["ok"] = it == by_path.end();
                rec["messages"] = it == by_path.end() ? std::vector<std::string>{} : it->second;
                std::cout << rec.dump() << "\n";
            });
        } else {
            walk(*doc.proof, "root", [&](const Derivation& d, const std::string& path) {
                auto it = by_path.find(path);
                std::cout << file << ":" << position(doc, path) << ": " << path << " " << rule_name(d.rule) << " "
                          << (it == by_path.end() ? "ok" : "FAIL") << "\n";
                if (it != by_path.end())
                    for (const auto& m : it->second) std::cout << "    " << m << "\n";
            });
            std::cout << file << ": " << (diags.empty() ? "accepted" : "rejected") << " ("
                      << count_nodes(*doc.proof) << " nodes, " << count_cuts(*doc.proof) << " cuts)\n";
        }
        if (!diags.empty()) status = std::max(status, static_cast<int>(kLogic));
    }
    return status;
}

int cmd_alpha(Context& ctx, const std::string& a, const std::string& b, bool props) {
    bool eq;
    if (props) {
        eq = alpha_eq(parse_prop(ctx, a), parse_prop(ctx, b));
    } else {
        Term u = parse_term(ctx, a), v = parse_term(ctx, b);
        typecheck(ctx.sig, u);
        typecheck(ctx.sig, v);
        eq = alpha_eq(u, v);
    }
    std::cout << (eq ? "alpha-equivalent" : "not alpha-equivalent") << "\n";
    return eq ? kOk : kLogic;
}

int cmd_perm(Context& ctx, const std::string& op, const std::vector<std::string>& args) {
    if (op == "apply") {
        if (args.size() != 2) throw ParseError("perm apply PERM ATOM");
        Perm p = parse_perm(ctx, args[0]);
        Parser q(ctx, args[1]);
        Atom a = q.expect_atom();
        q.expect_end();
        std::cout << to_string(p(a)) << "\n";
    } else if (op == "compose") {
        if (args.empty()) throw ParseError("perm compose PERM...");
        Perm p;
        for (const auto& s : args) p = compose(p, parse_perm(ctx, s));
        std::cout << to_string(p) << "\n";
    } else if (op == "inverse") {
        if (args.size() != 1) throw ParseError("perm inverse PERM");
        std::cout << to_string(inverse(parse_perm(ctx, args[0]))) << "\n";
    } else {
        throw ParseError("perm: unknown operation " + op);
    }
    return kOk;
}

int cmd_subst(Context& ctx, const std::string& what, const std::string& subst, bool props) {
    Substitution th = parse_substitution(ctx, subst);
    if (props) {
        Prop p = parse_prop(ctx, what);
        typecheck(ctx.sig, p);
        std::cout << to_string(subst_apply(th, p)) << "\n";
    } else {
        Term t = parse_term(ctx, what);
        typecheck(ctx.sig, t);
        std::cout << to_string(subst_apply(th, t)) << "\n";
    }
    return kOk;
}

int cmd_rewrite(const std::string& term, const std::string& theory, const std::string& rules_file,
                std::size_t fuel, bool trace, bool as_json, bool lint) {
    RuleSet rs = rules_file.empty() ? builtin_rules(theory) : parse_rules(rules_file, read_file(rules_file));
    if (lint) {
        std::string thname = rules_file.empty() ? theory : "SUB";
        for (const auto& m : lint_rules(rs, builtin_theory(thname))) std::cout << "lint: " << m << "\n";
    }
    Context ctx = rs.ctx;
    Term t = parse_term(ctx, term);
    typecheck(ctx.sig, t);
    RewriteResult r = rewrite(rs, t, fuel, trace || as_json);
    if (as_json) {
        std::size_t i = 0;
        for (const auto& s : r.trace) {
            json rec;
            rec["step"] = ++i;
            rec["rule"] = s.rule;
            rec["before"] = to_string(s.before);
            rec["after"] = to_string(s.after);
            if (s.equation) rec["equation"] = to_string(*s.equation);
            std::cout << rec.dump() << "\n";
        }
        json fin;
        fin["result"] = to_string(r.term);
        fin["steps"] = r.steps;
        fin["exhausted"] = r.exhausted;
        std::cout << fin.dump() << "\n";
    } else {
        if (trace)
            for (const auto& s : r.trace)
                std::cout << s.rule << ": " << (s.equation ? to_string(*s.equation) : to_string(s.before) + " --> " + to_string(s.after)) << "\n";
        std::cout << to_string(r.term) << "\n";
        if (r.exhausted) std::cerr << "fuel exhausted after " << r.steps << " steps\n";
    }
    return r.exhausted ? kFuel : kOk;
}

int cmd_translate(const std::string& file) {
    for (const FolSequent& s : parse_fol_file(read_file(file))) std::cout << to_string(amod_sequent(s)) << "\n";
    return kOk;
}

int cmd_cutelim(const std::string& file, const std::string& out, bool as_json) {
    Document doc = parse_document(read_file(file));
    if (!doc.proof) throw LogicError(file + ": no proof");
    auto diags = check_document(doc);
    if (!diags.empty()) {
        std::cout << file << ": input rejected at " << diags[0].path << ": " << diags[0].message << "\n";
        return kLogic;
    }
    CutStats stats;
    Derivation d = cut_eliminate(doc.ctx.sig, *doc.proof, &stats);
    std::string text = proof_document(doc.ctx.sig, d);
    Document again = parse_document(text);
    auto rediags = check_document(again);
    if (!rediags.empty() || !is_cut_free(*again.proof) || !same_sequent(again.proof->conclusion, doc.proof->conclusion)) {
        std::cout << "output failed its own check\n";
        return kLogic;
    }
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream os(out, std::ios::binary);
        if (!os) throw ParseError("cannot write " + out);
        os << text;
    }
    if (as_json) {
        json rec;
        rec["cuts_before"] = count_cuts(*doc.proof);
        rec["nodes_before"] = count_nodes(*doc.proof);
        rec["nodes_after"] = count_nodes(d);
        rec["reductions"] = stats.reductions;
        rec["measure_violations"] = stats.violations;
        std::cerr << rec.dump() << "\n";
    } else {
        std::cerr << "cuts " << count_cuts(*doc.proof) << " -> 0, nodes " << count_nodes(*doc.proof) << " -> "
                  << count_nodes(d) << ", reductions " << stats.reductions << ", measure violations "
                  << stats.violations << "\n";
    }
    return stats.violations == 0 ? kOk : kLogic;
}

int cmd_theory(const std::string& name, const std::string& file) {
    Theory th = file.empty() ? builtin_theory(name) : parse_theory(file, read_file(file));
    for (const auto& [l, p] : th.axioms) std::cout << l << " : " << to_string(p) << "\n";
    return kOk;
}

// Quick oracle sweeps over the window given by PNL_ATOM_WINDOW.
int cmd_selftest(int rounds) {
    using namespace pnl::testing;
    int w = atom_window();
    Gen g(7);
    TestWorld world;
    int failures = 0;
    for (int i = 0; i < rounds; ++i) {
        PermWord pw = random_perm_word(g, {"n"}, 6, 3, w);
        PermWord qw = random_perm_word(g, {"n"}, 6, 3, w);
        Perm p = perm_of(pw), q = perm_of(qw);
        if (!agrees_pointwise(compose(p, q), [&](const Atom& x) { return eval_word(pw, eval_word(qw, x)); }, {"n"}, w))
            ++failures;
        if (!agrees_pointwise(compose(p, inverse(p)), [](const Atom& x) { return x; }, {"n"}, w)) ++failures;
        TermGen tg{g, world, 4, true};
        Term u = tg.term(3);
        Term v = g.coin() ? act(tg.small_perm(), u) : tg.term(3);
        if (alpha_eq(u, v) != alpha_oracle(u, v)) ++failures;
    }
    std::cout << "selftest: window " << w << ", " << rounds << " rounds, " << failures << " failures\n";
    return failures == 0 ? kOk : kLogic;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pnl: permissive-nominal logic proof kernel"};
    app.require_subcommand(1);

    std::string decls, sig_text;
    auto add_ctx_opts = [&](CLI::App* c) {
        c->add_option("--decls", decls, "file of declarations");
        c->add_option("--sig", sig_text, "inline declarations");
    };

    std::vector<std::string> files;
    bool as_json = false, eq_rules = false;
    auto* check = app.add_subcommand("check", "check proof files");
    check->add_option("files", files, "proof files")->required();
    check->add_flag("--json", as_json, "one JSON record per derivation node");
    check->add_flag("--equality-rules", eq_rules, "accept the optional equality rules");

    std::string t1, t2;
    bool props = false;
    auto* alpha = app.add_subcommand("alpha", "decide alpha-equivalence");
    alpha->add_option("first", t1)->required();
    alpha->add_option("second", t2)->required();
    alpha->add_flag("--prop", props, "arguments are propositions");
    add_ctx_opts(alpha);

    std::string perm_op;
    std::vector<std::string> perm_args;
    auto* perm = app.add_subcommand("perm", "permutation arithmetic");
    perm->add_option("op", perm_op, "apply | compose | inverse")->required();
    perm->add_option("args", perm_args);
    add_ctx_opts(perm);

    std::string subst_arg;
    auto* subst = app.add_subcommand("subst", "apply a substitution");
    subst->add_option("target", t1)->required();
    subst->add_option("substitution", subst_arg, "e.g. \"[X := zero]\"")->required();
    subst->add_flag("--prop", props, "target is a proposition");
    add_ctx_opts(subst);

    std::string theory = "SUB", rules_file;
    std::size_t fuel = 10000;
    bool trace = false, lint = false;
    auto* rw = app.add_subcommand("rewrite", "normalise a term with directed rules");
    rw->add_option("term", t1)->required();
    rw->add_option("--theory", theory, "built-in rule set");
    rw->add_option("--rules", rules_file, "rule file");
    rw->add_option("--fuel", fuel, "maximum number of steps");
    rw->add_flag("--trace", trace, "print every step as an equation");
    rw->add_flag("--json", as_json, "one JSON record per step");
    rw->add_flag("--lint", lint, "compare the rules with the theory's axioms");

    std::string fol_file;
    auto* tr = app.add_subcommand("translate-fol", "translate first-order sequents");
    tr->add_option("file", fol_file)->required();

    std::string in_file, out_file;
    auto* ce = app.add_subcommand("cutelim", "eliminate cuts");
    ce->add_option("file", in_file)->required();
    ce->add_option("-o,--output", out_file, "output proof file");
    ce->add_flag("--json", as_json, "statistics as JSON");

    std::string th_name, th_file;
    auto* th = app.add_subcommand("theory", "load and print a theory");
    th->add_option("name", th_name, "EQU, SUB, FOL, ARITH, LAM-IND, FRESH or ABS");
    th->add_option("--file", th_file, "theory file");

    int rounds = 200;
    auto* st = app.add_subcommand("selftest", "oracle sweeps (window from PNL_ATOM_WINDOW)");
    st->add_option("--rounds", rounds);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kSyntax;
    }

    try {
        if (*check) return cmd_check(files, as_json, eq_rules);
        Context ctx = make_context(decls, sig_text);
        if (*alpha) return cmd_alpha(ctx, t1, t2, props);
        if (*perm) return cmd_perm(ctx, perm_op, perm_args);
        if (*subst) return cmd_subst(ctx, t1, subst_arg, props);
        if (*rw) return cmd_rewrite(t1, theory, rules_file, fuel, trace, as_json, lint);
        if (*tr) return cmd_translate(fol_file);
        if (*ce) return cmd_cutelim(in_file, out_file, as_json);
        if (*th) {
            if (th_name.empty() && th_file.empty()) {
                for (const auto& n : builtin_theory_names()) std::cout << n << "\n";
                return kOk;
            }
            return cmd_theory(th_name, th_file);
        }
        if (*st) return cmd_selftest(rounds);
    } catch (const FuelExhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFuel;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSyntax;
    } catch (const TypeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSyntax;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kLogic;
    }
    return kOk;
}
