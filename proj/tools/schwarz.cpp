// Command-line front end for the schwarz library.

#include "schwarz/cocycles.hpp"
#include "schwarz/invariants.hpp"
#include "schwarz/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace schwarz;

namespace {

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_usage = 2;

std::vector<Scalar> parse_samples(const std::string& text)
{
    std::vector<Scalar> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        out.push_back(Scalar::parse(item));
    }
    if (out.empty()) {
        throw std::invalid_argument("empty sample list");
    }
    return out;
}

// Defaults come from the file named by SCHWARZ_CONFIG, if set.
void load_config_file(RunConfig& cfg, std::string& format)
{
    const char* path = std::getenv("SCHWARZ_CONFIG");
    if (!path || !*path) {
        return;
    }
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument(std::string("cannot read config file ") + path);
    }
    auto j = nlohmann::json::parse(in);
    if (j.contains("order")) cfg.order = j["order"].get<int>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("trials")) cfg.trials = j["trials"].get<int>();
    if (j.contains("workers")) cfg.workers = j["workers"].get<int>();
    if (j.contains("format")) format = j["format"].get<std::string>();
    if (j.contains("samples")) {
        cfg.samples.clear();
        for (const auto& s : j["samples"]) {
            cfg.samples.push_back(Scalar::parse(s.is_string() ? s.get<std::string>() : s.dump()));
        }
    }
    if (j.contains("tolerance")) {
        const auto& t = j["tolerance"];
        if (t.contains("relative")) cfg.tolerance.relative = t["relative"].get<double>();
        if (t.contains("absolute")) cfg.tolerance.absolute = t["absolute"].get<double>();
    }
}

std::string primes(const std::string& name, int n)
{
    if (n <= 4) {
        return name + std::string(static_cast<std::size_t>(n), '\'');
    }
    return name + "^(" + std::to_string(n) + ")";
}

// c_i X^(i) phi^(m-i), skipping zero terms.
std::string listing(const BilinearPairing& j)
{
    std::string out;
    for (int i = 0; i <= j.m; ++i) {
        const Scalar& c = j.coeffs[static_cast<std::size_t>(i)];
        if (c.is_zero()) {
            continue;
        }
        std::string term = primes("X", i) + primes("phi", j.m - i);
        Scalar mag = abs(c);
        std::string coeff = mag == Scalar(1) ? "" : mag.to_string() + "*";
        if (out.empty()) {
            out = (c.sign() < 0 ? "-" : "") + coeff + term;
        } else {
            out += (c.sign() < 0 ? " - " : " + ") + coeff + term;
        }
    }
    return out.empty() ? "0" : out;
}

void print_operator(const OperatorJets& a)
{
    for (int i = a.order(); i >= 0; --i) {
        std::cout << "a" << i << " = " << a.coeffs[static_cast<std::size_t>(i)].value().to_string() << "\n";
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact jet evaluation and verification of the Schwarzian and its generalizations"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    std::string format = "text";
    std::string samples_text;
    int order = 0;
    std::uint64_t seed = 0;
    int trials = 0;
    int workers = 0;
    auto* order_opt = app.add_option("--order", order, "jet order N");
    auto* seed_opt = app.add_option("--seed", seed, "RNG seed");
    auto* samples_opt = app.add_option("--samples", samples_text, "comma-separated rational sample points");
    auto* format_opt = app.add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
    auto* workers_opt = app.add_option("--workers", workers, "suites run concurrently")->check(CLI::PositiveNumber);
    auto* trials_opt = app.add_option("--trials", trials, "random trials per property")->check(CLI::PositiveNumber);
    app.add_flag("--timing", cfg.timing, "record elapsed time in reports");

    // eval
    auto* eval = app.add_subcommand("eval", "evaluate one operation at a point");
    eval->require_subcommand(1);
    std::string f_text, at_text, lambda_text, family_text = "S", phi_text, psi_text, l1_text, l2_text, nu_text,
                                                rho_text, coeffs_text;
    int m = 0;
    int k = 0;

    auto* e_sch = eval->add_subcommand("schwarzian", "S(f) at a point");
    e_sch->add_option("--f", f_text, "map: expression in x or mobius(a,b,c,d)")->required();
    e_sch->add_option("--at", at_text, "point")->required();

    auto* e_coc = eval->add_subcommand("cocycle", "coefficients of C(f) at a point");
    e_coc->add_option("--family", family_text, "S, T, U, V0, Vm4, LOG0, LOG1")->required();
    e_coc->add_option("--lambda", lambda_text, "weight");
    e_coc->add_option("--f", f_text, "map")->required();
    e_coc->add_option("--at", at_text, "point")->required();

    auto* e_tv = eval->add_subcommand("transvectant", "Gordan transvectant J_m(phi, psi) at a point");
    e_tv->add_option("--m", m, "order")->required()->check(CLI::NonNegativeNumber);
    e_tv->add_option("--l1", l1_text, "weight of phi")->required();
    e_tv->add_option("--l2", l2_text, "weight of psi")->required();
    e_tv->add_option("--phi", phi_text, "expression in x")->required();
    e_tv->add_option("--psi", psi_text, "expression in x")->required();
    e_tv->add_option("--at", at_text, "point")->required();

    auto* e_bol = eval->add_subcommand("bol", "coefficients of f acting on d^k at a point");
    e_bol->add_option("--k", k, "order")->required()->check(CLI::PositiveNumber);
    e_bol->add_option("--f", f_text, "map")->required();
    e_bol->add_option("--at", at_text, "point")->required();

    auto* e_sym = eval->add_subcommand("symbol", "equivariant symbol of an operator at a point");
    e_sym->add_option("--nu", nu_text, "source weight")->required();
    e_sym->add_option("--rho", rho_text, "target weight")->required();
    e_sym->add_option("--coeffs", coeffs_text, "a_0;a_1;...;a_k as expressions in x")->required();
    e_sym->add_option("--at", at_text, "point")->required();

    // verify
    auto* verify = app.add_subcommand("verify", "run a verification suite");
    std::string suite;
    verify->add_option("suite", suite, "suite name or all")->required();
    verify->add_option("--lambda", lambda_text, "weight for order-six-cocycle");

    // solve-pairing
    auto* solve = app.add_subcommand("solve-pairing", "sl(2)-invariant pairings on (F_-1, F_lambda)");
    bool vanish = false;
    solve->add_option("--m", m, "order")->required()->check(CLI::NonNegativeNumber);
    solve->add_option("--lambda", lambda_text, "weight")->required();
    solve->add_flag("--vanish", vanish, "require vanishing on sl(2)");

    // symbol
    auto* symbol = app.add_subcommand("symbol", "coefficients of the equivariant symbol map");
    bool closed = false;
    symbol->add_option("--k", k, "order")->required()->check(CLI::PositiveNumber);
    symbol->add_option("--nu", nu_text, "source weight")->required();
    symbol->add_option("--rho", rho_text, "target weight")->required();
    symbol->add_flag("--closed", closed, "binomial closed form instead of the solved coefficients");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? exit_pass : exit_usage;
    }

    try {
        std::string file_format;
        load_config_file(cfg, file_format);
        if (format_opt->count() == 0 && !file_format.empty()) {
            if (file_format != "text" && file_format != "json") {
                throw std::invalid_argument("format must be text or json");
            }
            format = file_format;
        }
        if (order_opt->count()) cfg.order = order;
        if (seed_opt->count()) cfg.seed = seed;
        if (trials_opt->count()) cfg.trials = trials;
        if (workers_opt->count()) cfg.workers = workers;
        if (samples_opt->count()) cfg.samples = parse_samples(samples_text);

        if (eval->parsed()) {
            Scalar x0 = Scalar::parse(at_text);
            if (e_sch->parsed()) {
                std::cout << schwarzian(parse_diffeo(f_text), x0, 0).value().to_string() << "\n";
            } else if (e_coc->parsed()) {
                CocycleFamily c{parse_family(family_text), lambda_text.empty() ? Scalar(0) : Scalar::parse(lambda_text)};
                print_operator(evaluate_cocycle(c, parse_diffeo(f_text), x0, 0));
            } else if (e_tv->parsed()) {
                BilinearPairing j = transvectant(m, Scalar::parse(l1_text), Scalar::parse(l2_text));
                Jet out = apply_pairing(j, jet_at(parse_expr(phi_text), x0, m), jet_at(parse_expr(psi_text), x0, m));
                std::cout << out.value().to_string() << "\n";
            } else if (e_bol->parsed()) {
                print_operator(act_op(parse_diffeo(f_text), bol(k), x0, 0));
            } else if (e_sym->parsed()) {
                Scalar nu = Scalar::parse(nu_text);
                Scalar rho = Scalar::parse(rho_text);
                LinDiffOp op{nu, rho, {}};
                std::stringstream in(coeffs_text);
                std::string item;
                while (std::getline(in, item, ';')) {
                    op.coeffs.push_back(parse_expr(item));
                }
                if (op.coeffs.size() < 2) {
                    throw std::invalid_argument("--coeffs needs at least a_0;a_1");
                }
                auto slots = symbol_map(op, symbol_alpha_solved(op.order(), nu, rho));
                for (int i = op.order(); i >= 0; --i) {
                    std::cout << "slot" << i << " = " << evaluate(slots[static_cast<std::size_t>(i)].profile, x0).to_string()
                              << "\n";
                }
            }
            return exit_pass;
        }

        if (verify->parsed()) {
            if (!lambda_text.empty()) {
                cfg.lambda = Scalar::parse(lambda_text);
            }
            if (!is_suite(suite)) {
                std::cerr << "unknown suite '" << suite << "'; known suites: all";
                for (const auto& n : suite_names()) {
                    std::cerr << ", " << n;
                }
                std::cerr << "\n";
                return exit_usage;
            }
            Report report = run_suite(suite, cfg);
            std::cout << (format == "json" ? to_json(report) : to_text(report));
            return report.passed() ? exit_pass : exit_fail;
        }

        if (solve->parsed()) {
            PairingSolution sol = solve_invariant_pairing(m, Scalar::parse(lambda_text), vanish);
            std::cout << "dimension " << sol.dimension() << "\n";
            for (const auto& b : sol.basis) {
                std::cout << listing(normalized(b)) << "\n";
            }
            return exit_pass;
        }

        if (symbol->parsed()) {
            Scalar nu = Scalar::parse(nu_text);
            Scalar rho = Scalar::parse(rho_text);
            Matrix alpha = closed ? symbol_alpha(k, nu, rho) : symbol_alpha_solved(k, nu, rho);
            for (int i = 0; i <= k; ++i) {
                std::string row;
                for (int j = i; j <= k; ++j) {
                    const Scalar& c = alpha[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                    if (c.is_zero()) {
                        continue;
                    }
                    row += (row.empty() ? "" : " + ") + (c == Scalar(1) ? "" : "(" + c.to_string() + ")*") +
                           primes("a" + std::to_string(j), j - i);
                }
                std::cout << "slot" << i << " = " << (row.empty() ? "0" : row) << "\n";
            }
            return exit_pass;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
