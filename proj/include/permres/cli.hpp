#pragma once

#include <algorithm>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "permres/json_io.hpp"

namespace permres {

namespace detail {

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read file: " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("invalid JSON in " + path + ": " + e.what());
    }
}

struct ModuleInput {
    std::uint64_t p = 0;
    std::vector<std::uint32_t> invariants;
    std::string matrix_file;
    std::string module_file;
    CLI::Option* invariants_opt = nullptr;

    void attach(CLI::App* cmd) {
        cmd->add_option("--p", p, "prime modulus p");
        invariants_opt = cmd->add_option("--invariants", invariants,
                                         "invariants as comma-separated block sizes")
                             ->delimiter(',');
        cmd->add_option("--matrix-file", matrix_file, "JSON file holding the T-action matrix");
        cmd->add_option("--module-file", module_file,
                        "module JSON file: {\"p\":..,\"matrix\":[[..]]} or "
                        "{\"p\":..,\"invariants\":[..]}");
    }

    static void check_dim(std::uint64_t dim) {
        if (dim > 512)
            throw std::invalid_argument("module dimension exceeds the supported 512");
    }

    Module load() const {
        if (!module_file.empty()) {
            Json j = read_json_file(module_file);
            if (j.is_object() && j.contains("invariants") && j["invariants"].is_array()) {
                std::uint64_t dim = 0;
                for (const Json& x : j["invariants"])
                    if (x.is_number_integer() && x.get<long long>() > 0)
                        dim += x.get<std::uint64_t>();
                check_dim(dim);
            }
            Module m = module_from_json(j);
            check_dim(m.dim());
            if (p != 0 && m.p() != p)
                throw std::invalid_argument("--p disagrees with the module file");
            return m;
        }
        if (p == 0)
            throw std::invalid_argument("--p is required unless --module-file is given");
        if (!matrix_file.empty()) {
            Json rows = read_json_file(matrix_file);
            Module m = rows.is_object() ? module_from_json(rows)
                                        : module_from_json(Json{{"p", p}, {"matrix", rows}});
            check_dim(m.dim());
            return m;
        }
        if (invariants_opt != nullptr && invariants_opt->count() > 0) {
            std::uint64_t dim = 0;
            for (std::uint32_t x : invariants) dim += x;
            check_dim(dim);
            PrimeField field(p);
            return module_from_invariants(Invariants::of(field, invariants));
        }
        throw std::invalid_argument(
            "no module input: use --invariants, --matrix-file or --module-file");
    }
};

inline std::string join_parts(const std::vector<std::uint32_t>& parts) {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i)
        s += (i ? "," : "") + std::to_string(parts[i]);
    return s;
}

}  // namespace detail

/// Command-line driver. Returns 0 on success, 1 on verification failure,
/// 2 on input errors. `args` excludes the program name.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact permutation resolutions of modules over k[C_p]"};
    app.require_subcommand(1);

    struct {
        std::uint64_t p = 0, x = 0;
        std::string format = "text";
    } size_opts;
    CLI::App* size_cmd = app.add_subcommand("size", "p-distance of an integer in [1, p]");
    size_cmd->add_option("--p", size_opts.p, "prime modulus p")->required();
    size_cmd->add_option("--x", size_opts.x, "integer in [1, p]")->required();
    size_cmd->add_option("--format", size_opts.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));

    struct {
        std::uint64_t p = 0;
        bool dot = false;
        std::string format = "text";
    } chain_opts;
    CLI::App* chain_cmd = app.add_subcommand("chain", "the distance chain 1, p-1, 2, p-2, ...");
    chain_cmd->add_option("--p", chain_opts.p, "prime modulus p")->required();
    chain_cmd->add_flag("--dot", chain_opts.dot, "emit Graphviz DOT");
    chain_cmd->add_option("--format", chain_opts.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));

    detail::ModuleInput decompose_in;
    std::string decompose_format = "text";
    CLI::App* decompose_cmd = app.add_subcommand("decompose", "invariants of a module");
    decompose_in.attach(decompose_cmd);
    decompose_cmd->add_option("--format", decompose_format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));

    detail::ModuleInput ppdim_in;
    std::string ppdim_format = "text";
    CLI::App* ppdim_cmd =
        app.add_subcommand("ppdim", "minimal permutation-resolution length of a module");
    ppdim_in.attach(ppdim_cmd);
    ppdim_cmd->add_option("--format", ppdim_format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));

    detail::ModuleInput resolve_in;
    bool resolve_check = false;
    std::string resolve_format = "json";
    CLI::App* resolve_cmd =
        app.add_subcommand("resolve", "build a minimal permutation resolution");
    resolve_in.attach(resolve_cmd);
    resolve_cmd->add_flag("--check", resolve_check, "verify exactness of the result");
    resolve_cmd->add_option("--format", resolve_format, "json or text")
        ->check(CLI::IsMember({"text", "json"}));

    detail::ModuleInput oracle_in;
    SearchBudget oracle_budget;
    std::string oracle_format = "json";
    CLI::App* oracle_cmd = app.add_subcommand(
        "oracle", "brute-force the minimal resolution length and compare with the formula");
    oracle_in.attach(oracle_cmd);
    oracle_cmd->add_option("--max-p-copies", oracle_budget.max_p_copies,
                           "cap on free cover blocks (0 = one per invariant)");
    oracle_cmd->add_option("--max-1-copies", oracle_budget.max_1_copies,
                           "cap on trivial cover blocks (0 = one per invariant)");
    oracle_cmd->add_option("--max-depth", oracle_budget.max_depth, "recursion cap");
    oracle_cmd->add_option("--max-candidates", oracle_budget.max_candidates,
                           "cap on enumerated cover maps");
    oracle_cmd->add_option("--format", oracle_format, "json or text")
        ->check(CLI::IsMember({"text", "json"}));

    struct {
        std::string suite;
        std::uint64_t p = 0;
        std::uint64_t seed = 1;
        unsigned trials = 1000;
        unsigned max_dim = 0;
        unsigned jobs = 1;
    } verify_opts;
    CLI::App* verify_cmd = app.add_subcommand("verify", "run a property-verification suite");
    verify_cmd
        ->add_option("--suite", verify_opts.suite,
                     "one of lemma34 | lemma35 | prop37 | thm38")
        ->required()
        ->check(CLI::IsMember({"lemma34", "lemma35", "prop37", "thm38"}));
    verify_cmd->add_option("--p", verify_opts.p, "restrict to one prime (default: suite set)");
    verify_cmd->add_option("--seed", verify_opts.seed, "seed for randomized suites");
    verify_cmd->add_option("--trials", verify_opts.trials, "random trials per prime");
    verify_cmd->add_option("--max-dim", verify_opts.max_dim,
                           "dimension cap (0 = suite default)");
    verify_cmd->add_option("--jobs", verify_opts.jobs, "worker threads for randomized suites");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (size_cmd->parsed()) {
            unsigned value = p_distance(size_opts.p, size_opts.x);
            if (size_opts.format == "json")
                out << Json{{"p", size_opts.p}, {"x", size_opts.x}, {"size", value}}.dump()
                    << "\n";
            else
                out << value << "\n";
            return 0;
        }

        if (chain_cmd->parsed()) {
            std::vector<std::uint32_t> chain = distance_chain(chain_opts.p);
            if (chain_opts.dot) {
                out << chain_dot(chain_opts.p);
            } else if (chain_opts.format == "json") {
                out << Json{{"p", chain_opts.p}, {"chain", chain}}.dump() << "\n";
            } else {
                for (std::size_t i = 0; i < chain.size(); ++i)
                    out << (i ? " " : "") << chain[i];
                out << "\n";
            }
            return 0;
        }

        if (decompose_cmd->parsed()) {
            Invariants inv = decompose(decompose_in.load());
            if (decompose_format == "json")
                out << invariants_to_json(inv).dump() << "\n";
            else
                out << detail::join_parts(inv.parts()) << "\n";
            return 0;
        }

        if (ppdim_cmd->parsed()) {
            Invariants inv = decompose(ppdim_in.load());
            unsigned value = module_distance_over(inv.p(), inv.parts());
            if (ppdim_format == "json")
                out << Json{{"p", inv.p()}, {"invariants", inv.parts()}, {"ppdim", value}}.dump()
                    << "\n";
            else
                out << value << "\n";
            return 0;
        }

        if (resolve_cmd->parsed()) {
            Module m = resolve_in.load();
            if (m.p() > 97)
                throw std::invalid_argument("resolve is limited to p <= 97");
            PermResolution r = build_resolution(m);
            std::optional<bool> checked;
            if (resolve_check) checked = is_exact(r);
            if (resolve_format == "json") {
                out << resolution_to_json(r, checked).dump() << "\n";
            } else {
                out << "p: " << m.p() << "\n";
                out << "length: " << r.length() << "\n";
                out << "terms:";
                for (const Module& t : r.terms)
                    out << " [" << detail::join_parts(decompose(t).parts()) << "]";
                out << "\n";
                if (checked.has_value())
                    out << "check: " << (*checked ? "pass" : "FAIL") << "\n";
            }
            return checked.has_value() && !*checked ? 1 : 0;
        }

        if (oracle_cmd->parsed()) {
            Invariants inv = decompose(oracle_in.load());
            unsigned distance = module_distance_over(inv.p(), inv.parts());
            BrutePpdimResult result = brute_ppdim(inv, oracle_budget);
            bool ok = result.length.has_value() && *result.length == distance;
            if (oracle_format == "json") {
                out << search_report_to_json(inv, distance, result).dump() << "\n";
            } else {
                out << "distance: " << distance << "\n";
                if (result.length.has_value())
                    out << "search: " << *result.length << (ok ? " (agree)" : " (MISMATCH)")
                        << "\n";
                else
                    out << "search: budget exhausted\n";
            }
            return ok ? 0 : 1;
        }

        if (verify_cmd->parsed()) {
            std::vector<std::uint64_t> primes;
            if (verify_opts.p != 0)
                primes.push_back(verify_opts.p);
            else
                primes = {2, 3, 5};

            Json results = Json::array();
            bool ok = true;
            for (std::uint64_t p : primes) {
                SuiteResult r{"", 0, 0, 0, {}};
                if (verify_opts.suite == "lemma34") {
                    unsigned cap = verify_opts.max_dim ? verify_opts.max_dim : 5;
                    r = verify_summand_criteria(p, cap);
                } else if (verify_opts.suite == "lemma35") {
                    unsigned cap = verify_opts.max_dim ? verify_opts.max_dim : 6;
                    r = verify_perm_criterion(p, cap);
                } else if (verify_opts.suite == "prop37") {
                    unsigned cap = verify_opts.max_dim ? verify_opts.max_dim : 6;
                    r = verify_kernel_distance(p, verify_opts.trials, verify_opts.seed, cap,
                                               verify_opts.jobs);
                } else {  // thm38
                    unsigned cap = verify_opts.max_dim ? verify_opts.max_dim : 6;
                    r = verify_min_length_formula(p, cap, /*cyclic_only=*/p > 3);
                }
                ok = ok && r.ok();
                results.push_back(suite_result_to_json(r));
            }
            out << Json{{"suite", verify_opts.suite}, {"ok", ok}, {"results", results}}.dump()
                << "\n";
            return ok ? 0 : 1;
        }
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const BudgetExhausted& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace permres
