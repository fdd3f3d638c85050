#include "schwarz/verify.hpp"

#include "schwarz/cocycles.hpp"
#include "schwarz/invariants.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <functional>
#include <future>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

namespace schwarz {

bool Report::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

namespace {

Scalar r(long n, long d = 1) { return Scalar::rational(n, d); }

struct Outcome {
    bool passed = false;
    std::optional<Scalar> residual;
    std::string detail;
};

Outcome from_residual(const Scalar& residual, const RunConfig& cfg, std::string detail = {})
{
    return {residual_ok(residual, cfg.tolerance), residual, std::move(detail)};
}

Outcome exact_zero(const Scalar& residual, std::string detail = {})
{
    return {residual.is_exact() && residual.is_zero(), residual, std::move(detail)};
}

class Suite {
public:
    explicit Suite(const RunConfig& cfg) : cfg_(cfg) {}

    void check(std::string name, std::string anchor, const std::function<Outcome()>& body)
    {
        Check c{std::move(name), std::move(anchor), false, {}, {}};
        try {
            Outcome o = body();
            c.passed = o.passed;
            c.residual = o.residual ? o.residual->to_string() : std::string();
            c.detail = std::move(o.detail);
            while (c.detail.ends_with("; ") || c.detail.ends_with(" ")) {
                c.detail.erase(c.detail.size() - (c.detail.ends_with("; ") ? 2 : 1));
            }
        } catch (const std::exception& e) {
            c.passed = false;
            c.detail = std::string("error: ") + e.what();
        }
        checks_.push_back(std::move(c));
    }

    std::vector<Check> take() { return std::move(checks_); }
    const RunConfig& cfg() const { return cfg_; }

private:
    const RunConfig& cfg_;
    std::vector<Check> checks_;
};

std::string join(const std::vector<Scalar>& v)
{
    std::string out = "{";
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? ", " : "") + v[i].to_string();
    }
    return out + "}";
}

const std::vector<Scalar>& lambda_sweep()
{
    static const std::vector<Scalar> sweep = {r(-5), r(-4), r(-3), r(-2), r(-1), r(0),     r(1),    r(2),
                                              r(1, 2), r(-1, 2), r(3, 2), r(-3, 2), r(-5, 2), r(-7, 2)};
    return sweep;
}

std::uint64_t salted(std::uint64_t seed, std::uint64_t salt)
{
    return seed * 0x9E3779B97F4A7C15ULL + salt;
}

const std::vector<Scalar>& grid()
{
    static const std::vector<Scalar> g = {r(-2), r(-3, 2), r(-1), r(-2, 3), r(-1, 2), r(-1, 3),
                                          r(1, 3), r(1, 2),  r(2, 3), r(1),     r(3, 2),  r(2)};
    return g;
}

// ---------------------------------------------------------------------------

void suite_mobius_vanishing(Suite& s)
{
    const auto& cfg = s.cfg();
    auto maps = random_mobius_maps(salted(cfg.seed, 1), 100);
    const int n = std::min(cfg.order, 4);
    std::vector<CocycleFamily> families;
    for (const auto& l : {r(-2), r(-3, 2), r(-1), r(-1, 2), r(0), r(1, 2), r(1), r(2)}) {
        for (Family f : {Family::S, Family::T, Family::U}) {
            families.push_back({f, l});
        }
    }
    families.push_back({Family::V0, r(0)});
    families.push_back({Family::Vm4, r(-4)});
    for (const auto& fam : families) {
        s.check("vanishes on Mobius maps: " + fam.name(), "vanishing on PSL(2,R)", [&] {
            Scalar worst(0);
            int evaluated = 0;
            for (const auto& m : maps) {
                for (const auto& x0 : cfg.samples) {
                    OperatorJets c;
                    try {
                        c = evaluate_cocycle(fam, m, x0, n);
                    } catch (const domain_error&) {
                        continue;
                    }
                    ++evaluated;
                    for (const auto& j : c.coeffs) {
                        for (const auto& v : j.derivs()) {
                            worst = max(worst, abs(v));
                        }
                    }
                }
            }
            return exact_zero(worst, std::to_string(evaluated) + " map/sample pairs");
        });
    }
}

void suite_cocycle_identities(Suite& s)
{
    const auto& cfg = s.cfg();
    auto maps = random_polynomial_maps(salted(cfg.seed, 2), 2 * cfg.trials);
    const int n = std::min(cfg.order, 3);
    std::vector<CocycleFamily> families = {{Family::S, r(-1, 2)}, {Family::S, r(1, 3)}, {Family::T, r(1)},
                                           {Family::T, r(-3, 2)}, {Family::U, r(2)},    {Family::U, r(-1, 3)},
                                           {Family::V0, r(0)},    {Family::Vm4, r(-4)}};
    for (const auto& fam : families) {
        s.check("exact pairs: " + fam.name(), "cocycle identity C(f o g) = g*C(f) + C(g)", [&] {
            Scalar worst(0);
            for (int t = 0; t < cfg.trials; ++t) {
                worst = max(worst, cocycle_residual(fam, maps[static_cast<std::size_t>(2 * t)],
                                                    maps[static_cast<std::size_t>(2 * t + 1)], cfg.samples, n));
            }
            return exact_zero(worst, std::to_string(cfg.trials) + " rational pairs");
        });
        s.check("float pairs: " + fam.name(), "cocycle identity C(f o g) = g*C(f) + C(g)", [&] {
            auto fl = float_maps();
            Scalar worst = max(cocycle_residual(fam, fl[0], fl[1], cfg.samples, n),
                               cocycle_residual(fam, fl[1], fl[0], cfg.samples, n));
            return from_residual(worst, cfg);
        });
    }
    s.check("exact pairs: " + CocycleFamily{Family::LOG1, r(1, 2)}.name(), "log-derivative cocycles", [&] {
        Scalar worst(0);
        for (int t = 0; t < std::min(cfg.trials, 5); ++t) {
            worst = max(worst, cocycle_residual({Family::LOG1, r(1, 2)}, maps[static_cast<std::size_t>(2 * t)],
                                                maps[static_cast<std::size_t>(2 * t + 1)], cfg.samples, n));
        }
        return exact_zero(worst);
    });
    s.check("float path: " + CocycleFamily{Family::LOG0, r(1)}.name(), "log-derivative cocycles", [&] {
        Scalar worst(0);
        for (int t = 0; t < std::min(cfg.trials, 5); ++t) {
            worst = max(worst, cocycle_residual({Family::LOG0, r(1)}, maps[static_cast<std::size_t>(2 * t)],
                                                maps[static_cast<std::size_t>(2 * t + 1)], cfg.samples, n));
        }
        return from_residual(worst, cfg);
    });
}

void suite_coboundaries(Suite& s)
{
    const auto& cfg = s.cfg();
    auto maps = random_polynomial_maps(salted(cfg.seed, 3), cfg.trials);
    const int n = std::min(cfg.order, 4);
    struct Case {
        int k;
        CocycleFamily family;
        Scalar factor;
    };
    const std::vector<Case> cases = {{2, {Family::S, r(-1, 2)}, r(1, 2)},
                                     {3, {Family::T, r(-1)}, r(2)},
                                     {4, {Family::U, r(-3, 2)}, r(5)}};
    for (const auto& c : cases) {
        s.check("d^" + std::to_string(c.k) + " coboundary = " + c.factor.to_string() + " " + c.family.name(),
                "coboundaries of the Bol operators", [&] {
                    Scalar worst(0);
                    for (const auto& g : maps) {
                        for (const auto& x0 : cfg.samples) {
                            OperatorJets lhs, rhs;
                            try {
                                lhs = coboundary(bol(c.k), g, x0, n);
                                rhs = c.factor * evaluate_cocycle(c.family, g, x0, n);
                            } catch (const domain_error&) {
                                continue;
                            }
                            worst = max(worst, max_discrepancy(lhs, rhs));
                        }
                    }
                    return exact_zero(worst);
                });
    }
    const std::vector<std::vector<Expr>> potentials = {
        {parse_expr("x^2 + 1")}, {parse_expr("x^2 + 1"), parse_expr("x")},
        {parse_expr("x^2 + 1"), parse_expr("x"), parse_expr("1 - x")}};
    for (int k = 2; k <= 4; ++k) {
        s.check("canonical form of order " + std::to_string(k), "canonical forms and the potential shift", [&, k] {
            Scalar worst(0);
            for (std::size_t i = 0; i < std::min<std::size_t>(maps.size(), 5); ++i) {
                worst = max(worst, canonical_form_residual(k, potentials[static_cast<std::size_t>(k - 2)], maps[i],
                                                           cfg.samples, std::min(cfg.order, 3)));
            }
            return exact_zero(worst);
        });
    }
}

void suite_bol(Suite& s)
{
    const auto& cfg = s.cfg();
    auto maps = random_mobius_maps(salted(cfg.seed, 4), 20);
    const int n = std::min(cfg.order, 4);
    for (int k = 1; k <= 6; ++k) {
        s.check("Mobius maps fix d^" + std::to_string(k), "Bol's theorem", [&, k] {
            Scalar worst(0);
            for (const auto& m : maps) {
                for (const auto& x0 : cfg.samples) {
                    OperatorJets out;
                    try {
                        out = act_op(m, bol(k), x0, n);
                    } catch (const domain_error&) {
                        continue;
                    }
                    worst = max(worst, max_discrepancy(out, jets_at(bol(k), x0, n)));
                }
            }
            return exact_zero(worst);
        });
    }
}

void suite_transvectants(Suite& s)
{
    const auto& cfg = s.cfg();
    const std::vector<std::pair<Scalar, Scalar>> weights = {
        {r(1), r(1)}, {r(1, 3), r(2)}, {r(-3, 4), r(5, 2)}, {r(0), r(7, 5)}, {r(-2, 7), r(-1, 3)}};
    Expr phi = parse_expr("1 + x + x^3/2 - x^5/7");
    Expr psi = parse_expr("2 - x^2 + x^4/3 + x^7/11");
    for (int m = 0; m <= 6; ++m) {
        s.check("Gordan J_" + std::to_string(m) + " is sl(2)-invariant", "Gordan's theorem", [&, m] {
            Scalar worst(0);
            for (const auto& [l1, l2] : weights) {
                BilinearPairing j = transvectant(m, l1, l2);
                worst = max(worst, sl2_invariance_defect(j));
                for (const char* z : {"1", "x", "x^2"}) {
                    worst = max(worst, lie_invariance_residual(j, {parse_expr(z)}, phi, psi, cfg.samples,
                                                               std::min(cfg.order, 3)));
                }
            }
            return exact_zero(worst);
        });
    }
    s.check("phi'' psi on weights (0,0) is not invariant", "Gordan's theorem", [&] {
        BilinearPairing bad{2, r(0), r(0), {r(0), r(0), r(1)}};
        Scalar d = sl2_invariance_defect(bad);
        return Outcome{!d.is_zero(), d, "nonzero defect expected"};
    });
}

void suite_pairings(Suite& s)
{
    const std::vector<Scalar> lambdas = {r(-2), r(-1, 3), r(1, 2), r(1), r(3), r(5, 7)};
    for (const auto& l : lambdas) {
        s.check("J_3, J_4, J_5 at lambda = " + l.to_string(), "explicit invariant pairings vanishing on sl(2)", [&] {
            Vector e3 = {r(0), r(0), r(0), r(1)};
            Vector e4 = {r(0), r(0), r(0), r(1), -l / r(2)};
            Vector e5 = {r(0), r(0), r(0), r(1), -(r(2) * l + r(1)) / r(2), l * (r(2) * l + r(1)) / r(10)};
            bool ok = true;
            std::string detail;
            for (const auto& [m, expected] : std::vector<std::pair<int, Vector>>{{3, e3}, {4, e4}, {5, e5}}) {
                auto j = solve_invariant_pairing(m, l, true).unique();
                if (!j || j->coeffs != expected) {
                    ok = false;
                    detail += "m=" + std::to_string(m) + " mismatch; ";
                }
            }
            return Outcome{ok, std::nullopt, detail};
        });
        s.check("one-dimensional for m = 3..8 at lambda = " + l.to_string(), "uniqueness of the vanishing pairings",
                [&] {
                    std::string dims;
                    bool ok = true;
                    for (int m = 3; m <= 8; ++m) {
                        auto d = solve_invariant_pairing(m, l, true).dimension();
                        ok = ok && d == 1;
                        dims += std::to_string(d);
                    }
                    return Outcome{ok, std::nullopt, "dimensions " + dims};
                });
    }
    s.check("Gordan at first weight -1 against the solved pairings", "reported comparison", [&] {
        std::string detail;
        for (const auto& l : lambdas) {
            for (int m = 3; m <= 8; ++m) {
                BilinearPairing g = normalized(transvectant(m, r(-1), l));
                bool zero = std::all_of(g.coeffs.begin(), g.coeffs.end(), [](const Scalar& c) { return c.is_zero(); });
                auto j = solve_invariant_pairing(m, l, true).unique();
                if (zero) {
                    detail += "(" + std::to_string(m) + "," + l.to_string() + ") degenerate; ";
                } else if (!j || j->coeffs != g.coeffs) {
                    detail += "(" + std::to_string(m) + "," + l.to_string() + ") differs; ";
                }
            }
        }
        return Outcome{true, std::nullopt, detail.empty() ? "all equal" : detail};
    });
}

std::vector<Scalar> cocycle_set(int m)
{
    std::vector<Scalar> out;
    for (const auto& l : lambda_sweep()) {
        if (is_lie_cocycle(m, l)) {
            out.push_back(l);
        }
    }
    std::sort(out.begin(), out.end(), [](const Scalar& a, const Scalar& b) { return a < b; });
    return out;
}

void suite_lie_cocycles(Suite& s)
{
    const auto& cfg = s.cfg();
    s.check("orders 3, 4, 5 are cocycles for all lambda", "Lie algebra forms of S, T, U", [&] {
        Scalar worst(0);
        std::vector<Expr> probes = {parse_expr("1 + x^2 - x^5/3"), parse_expr("x^3 + 2*x^7")};
        for (const auto& l : lambda_sweep()) {
            for (int m = 3; m <= 5; ++m) {
                auto j = solve_invariant_pairing(m, l, true).unique();
                if (!j) {
                    return Outcome{false, std::nullopt, "no unique pairing at lambda = " + l.to_string()};
                }
                worst = max(worst, lie_cocycle_defect(*j));
                worst = max(worst, lie_cocycle_residual(*j, {parse_expr("x^4 + x")}, {parse_expr("1 - x^5")}, probes,
                                                        cfg.samples, 1));
            }
        }
        return exact_zero(worst);
    });
    const std::vector<std::pair<int, std::vector<Scalar>>> expected = {
        {6, {r(-4), r(-2), r(0)}}, {7, {r(-5, 2)}}, {8, {r(-3)}}};
    for (const auto& [m, set] : expected) {
        s.check("order " + std::to_string(m) + " cocycle weights", "order-6 dichotomy; Bol coboundary at (2-m)/2",
                [&, m = m, set = set] {
                    auto found = cocycle_set(m);
                    return Outcome{found == set, std::nullopt, "found " + join(found) + " over the sweep"};
                });
    }
}

void suite_order_six(Suite& s)
{
    const auto& cfg = s.cfg();
    std::vector<Scalar> lambdas = cfg.lambda ? std::vector<Scalar>{*cfg.lambda} : lambda_sweep();
    for (const auto& l : lambdas) {
        s.check("order 6 at lambda = " + l.to_string(), "cocycle iff lambda in {-4, 0, -2}", [&] {
            bool expected = l == r(-4) || l == r(0) || l == r(-2);
            bool found = is_lie_cocycle(6, l);
            return Outcome{found == expected, std::nullopt, found ? "cocycle" : "not a cocycle"};
        });
    }
}

void suite_symbols(Suite& s)
{
    const auto& cfg = s.cfg();
    const std::vector<std::pair<Scalar, Scalar>> pairs = {{r(1, 3), r(19, 3)}, {r(-1, 4), r(17, 4)}, {r(2), r(3, 2)}};
    auto maps = random_mobius_maps(salted(cfg.seed, 5), 20);
    Expr profile = parse_expr("1 + x^2/3 - x^3");
    for (const auto& [nu, rho] : pairs) {
        std::string tag = "(" + nu.to_string() + ", " + rho.to_string() + ")";
        s.check("Mobius maps act slot-diagonally " + tag, "equivariant symbol map", [&, nu = nu, rho = rho] {
            Scalar worst(0);
            for (int k = 1; k <= 4; ++k) {
                Matrix alpha = symbol_alpha_solved(k, nu, rho);
                const int n = 3 * k + 1;
                for (const auto& m : maps) {
                    for (const auto& x0 : cfg.samples) {
                        Jet f;
                        SymbolTuple t{nu, rho, {}};
                        try {
                            f = jet_at(m, x0, n + 1);
                            Jet p = jet_at(profile, x0, n);
                            for (int i = 0; i <= k; ++i) {
                                t.slots.push_back(p * Scalar(i + 1));
                            }
                        } catch (const domain_error&) {
                            continue;
                        }
                        for (const auto& res : act_on_symbols(alpha, t, f).residuals) {
                            for (const auto& v : res.derivs()) {
                                worst = max(worst, abs(v));
                            }
                        }
                    }
                }
            }
            return exact_zero(worst);
        });
        s.check("first and second order rows " + tag, "first- and second-order symbols", [&, nu = nu, rho = rho] {
            Scalar d = rho - nu;
            Matrix a1 = symbol_alpha_solved(1, nu, rho);
            Matrix a2 = symbol_alpha_solved(2, nu, rho);
            bool ok = a1[0][1] == nu / (d - r(1)) && a2[1][2] == (r(2) * nu + r(1)) / (d - r(2)) &&
                      a2[0][1] == nu / (d - r(1)) &&
                      a2[0][2] == nu * (r(2) * nu + r(1)) / ((d - r(1)) * (r(2) * d - r(3)));
            return Outcome{ok, std::nullopt,
                           "a0 + nu/(d-1) a1'; a1 + (2nu+1)/(d-2) a2', a0 + nu/(d-1) a1' + nu(2nu+1)/((d-1)(2d-3)) a2''"};
        });
        s.check("binomial closed form against solved rows " + tag, "reported comparison", [&, nu = nu, rho = rho] {
            std::string detail;
            for (int k = 1; k <= 4; ++k) {
                Matrix closed;
                try {
                    closed = symbol_alpha(k, nu, rho);
                } catch (const domain_error& e) {
                    detail += "k=" + std::to_string(k) + ": " + e.what() + "; ";
                    continue;
                }
                auto rows = row_proportionality(closed, symbol_alpha_solved(k, nu, rho));
                detail += "k=" + std::to_string(k) + ":";
                for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
                    detail += " " + (rows[i] ? rows[i]->to_string() : std::string("-"));
                }
                detail += "; ";
            }
            return Outcome{true, std::nullopt, detail};
        });
    }
    s.check("symbol action is a homomorphism", "equivariant symbol map", [&] {
        auto poly = random_polynomial_maps(salted(cfg.seed, 6), 6);
        Scalar nu = r(1, 3);
        Scalar rho = r(37, 5);
        Matrix alpha = symbol_alpha_solved(2, nu, rho);
        Scalar worst(0);
        for (std::size_t i = 0; i + 1 < poly.size(); i += 2) {
            for (const auto& x0 : cfg.samples) {
                const int n = 14;
                Jet g = jet_at(poly[i], x0, n);
                Jet f = jet_at(poly[i + 1], g.value(), n);
                Jet p = jet_at(profile, x0, n);
                SymbolTuple t{nu, rho, {p, p * Scalar(2), p * Scalar(3)}};
                SymbolTuple once = act_on_symbols(alpha, act_on_symbols(alpha, t, g).image, f).image;
                SymbolTuple direct = act_on_symbols(alpha, t, compose(f, g)).image;
                for (int k = 0; k <= 2; ++k) {
                    worst = max(worst, max_discrepancy(once.slots[static_cast<std::size_t>(k)],
                                                       direct.slots[static_cast<std::size_t>(k)]));
                }
            }
        }
        return exact_zero(worst);
    });
}

std::string gamma_text(const ConstantFit& fit)
{
    return fit.constants.empty() ? std::string("undetermined") : fit.constants[0].to_string();
}

std::vector<Diffeo> fit_maps(const RunConfig& cfg, std::uint64_t salt)
{
    return random_polynomial_maps(salted(cfg.seed, salt), 3);
}

void suite_symbol_action(Suite& s)
{
    const auto& cfg = s.cfg();
    const std::vector<std::pair<Scalar, Scalar>> weights = {
        {r(1, 3), r(13, 3)}, {r(1), r(7, 2)}, {r(-1, 4), r(3)}, {r(2), r(6)}};
    Expr profile = parse_expr("1 + x^2");
    for (const auto& [l, mu] : weights) {
        std::string tag = "(" + l.to_string() + ", " + mu.to_string() + ")";
        s.check("beta " + tag, "second-order symbol constant 2 lambda (mu-1)/(2(mu-lambda)-3)", [&, l = l, mu = mu] {
            auto fits = fit_symbol_pattern(2, l, mu, 0, profile, fit_maps(cfg, 7), cfg.samples, 2);
            Scalar worst(0);
            std::optional<Scalar> beta;
            for (const auto& pf : fits) {
                worst = max(worst, pf.fit.residual);
                if (pf.source == 2 && pf.slot == 0 && pf.fit.determined) {
                    beta = pf.fit.constants[0];
                }
            }
            if (!beta) {
                return Outcome{false, worst, "beta not determined"};
            }
            // The fit is against S(f^-1) f*(ā2); f*(S(f)) = -S(f^-1) flips the sign.
            Scalar against_pushed = -*beta;
            bool ok = worst.is_zero() && against_pushed == beta_constant(l, mu);
            if (mu - l == r(4)) {
                ok = ok && against_pushed == r(2) * l * (l + r(3)) / r(5);
            }
            return Outcome{ok, worst,
                           "beta = " + against_pushed.to_string() + " against f*(S(f)), " + beta->to_string() +
                               " against S(f^-1) f*(a2)"};
        });
    }
    s.check("U in symbol coordinates is (S, 0, -lambda(lambda+3)/5 S^2)", "symbol of U", [&] {
        auto maps = fit_maps(cfg, 8);
        Scalar worst(0);
        for (const auto& l : {r(1, 3), r(2), r(-5, 4)}) {
            Matrix alpha = symbol_alpha_solved(2, l, l + r(4));
            for (const auto& m : maps) {
                for (const auto& x0 : cfg.samples) {
                    Jet f = jet_at(m, x0, 10);
                    SymbolTuple t = symbol_map(evaluate_cocycle({Family::U, l}, f), alpha);
                    Jet sch = schwarzian(f).truncated(t.slots[0].order());
                    worst = max(worst, max_discrepancy(t.slots[2], sch));
                    worst = max(worst, max_discrepancy(t.slots[1], Jet::zero(x0, sch.order())));
                    worst = max(worst, max_discrepancy(t.slots[0], sch * sch * (-l * (l + r(3)) / r(5))));
                }
            }
        }
        return exact_zero(worst);
    });
}

void suite_sturm_liouville(Suite& s)
{
    const auto& cfg = s.cfg();
    const int n = std::max(cfg.order, 10);
    for (const char* u : {"2", "x", "x^2 - 1"}) {
        s.check(std::string("potential round trip u = ") + u, "Sturm-Liouville potential S(psi1/psi2)", [&, u] {
            Scalar worst(0);
            for (const auto& x0 : cfg.samples) {
                Jet uj = jet_at(parse_expr(u), x0, n + 1);
                auto [p1, p2] = sl_solve(uj, n + 3);
                worst = max(worst, max_discrepancy(sl_potential(p2, p1), uj.truncated(n)));
            }
            return exact_zero(worst);
        });
    }
    s.check("S(tan) = 2", "Schwarzian of tan", [&] {
        Scalar worst(0);
        for (const auto& x0 : {r(-2, 3), r(1, 5), r(1)}) {
            Jet sch = schwarzian(parse_diffeo("tan(x)"), x0, 0);
            worst = max(worst, abs(sch.value() - Scalar(2)));
        }
        return Outcome{worst.to_double() <= 1e-10, worst, {}};
    });
}

void suite_extensions(Suite& s)
{
    const auto& cfg = s.cfg();
    auto maps = random_polynomial_maps(salted(cfg.seed, 9), 6);
    Expr phi = parse_expr("1 + x^2/3");
    Expr psi = parse_expr("x - x^3");
    for (Family fam : {Family::S, Family::T}) {
        for (const auto& l : {r(1), r(-3), r(2)}) {
            ExtensionModule e{{fam, l}, r(3, 7)};
            s.check("homomorphism " + e.family.name(), "extension by a cocycle", [&, e] {
                Scalar worst(0);
                for (std::size_t i = 0; i + 1 < maps.size(); i += 2) {
                    worst = max(worst, extension_homomorphism_residual(e, maps[i], maps[i + 1], phi, psi, cfg.samples,
                                                                       std::min(cfg.order, 3)));
                }
                return exact_zero(worst);
            });
        }
    }
    auto fm = fit_maps(cfg, 10);
    s.check("second-order submodule at lambda = 1", "submodule with locked middle coefficient", [&] {
        SubmoduleReport rep = submodule_check(SubmoduleExample::second_order, r(1), r(1, 3), fm, cfg.samples, 3);
        Scalar worst = max(max(rep.closure_residual, rep.top_residual), rep.gamma.residual);
        return Outcome{worst.is_zero() && rep.gamma.determined, worst,
                       "nu = 1/3, gamma = " + gamma_text(rep.gamma)};
    });
    for (const auto& nu : locked_third_order_nu(r(1, 12))) {
        s.check("third-order submodule at lambda = 1/12, nu = " + nu.to_string(),
                "submodule with two locked coefficients", [&, nu] {
                    SubmoduleReport rep =
                        submodule_check(SubmoduleExample::third_order, r(1, 12), nu, fm, cfg.samples, 2);
                    Scalar worst = max(max(rep.closure_residual, rep.top_residual), rep.gamma.residual);
                    return Outcome{worst.is_zero() && rep.gamma.determined, worst,
                                   "gamma = " + gamma_text(rep.gamma)};
                });
    }
    s.check("third-order submodule at lambda = 1 (float nu)", "submodule with two locked coefficients", [&] {
        Scalar nu = locked_third_order_nu(r(1)).front();
        SubmoduleReport rep = submodule_check(SubmoduleExample::third_order, r(1), nu, fm, cfg.samples, 2);
        Scalar worst = max(max(rep.closure_residual, rep.top_residual), rep.gamma.residual);
        return Outcome{residual_ok(worst, cfg.tolerance) && rep.gamma.determined, worst,
                       "nu = " + nu.to_string() + ", gamma = " + gamma_text(rep.gamma)};
    });
    struct Pattern {
        int k;
        Scalar nu, rho;
        int lowest;
    };
    for (const auto& p : {Pattern{4, r(1, 3), r(37, 5), 0}, Pattern{5, r(1, 3), r(28, 3), 1}}) {
        s.check("slot contribution pattern k = " + std::to_string(p.k), "S/T/U-type contributions between slots", [&, p] {
            auto fits = fit_symbol_pattern(p.k, p.nu, p.rho, p.lowest, parse_expr("1 + x^2 + x^3/3"), fm, cfg.samples, 2);
            Scalar worst(0);
            bool determined = true;
            std::string detail;
            for (const auto& pf : fits) {
                worst = max(worst, pf.fit.residual);
                if (pf.kind != "zero") {
                    determined = determined && pf.fit.determined;
                    detail += std::to_string(pf.source) + "->" + std::to_string(pf.slot) + " " + pf.kind + ":";
                    for (const auto& c : pf.fit.constants) {
                        detail += " " + c.to_string();
                    }
                    detail += "; ";
                }
            }
            return Outcome{worst.is_zero() && determined, worst, detail};
        });
    }
}

using SuiteFn = void (*)(Suite&);

const std::map<std::string, SuiteFn>& registry()
{
    static const std::map<std::string, SuiteFn> suites = {
        {"mobius-vanishing", suite_mobius_vanishing},
        {"cocycle-identities", suite_cocycle_identities},
        {"coboundaries", suite_coboundaries},
        {"bol-equivariance", suite_bol},
        {"transvectant-invariance", suite_transvectants},
        {"invariant-pairings", suite_pairings},
        {"lie-cocycles", suite_lie_cocycles},
        {"order-six-cocycle", suite_order_six},
        {"symbol-equivariance", suite_symbols},
        {"symbol-action", suite_symbol_action},
        {"sturm-liouville", suite_sturm_liouville},
        {"extensions", suite_extensions},
    };
    return suites;
}

std::vector<Check> run_one(const std::string& name, const RunConfig& cfg)
{
    Suite s(cfg);
    registry().at(name)(s);
    return s.take();
}

void sort_checks(std::vector<Check>& checks)
{
    std::stable_sort(checks.begin(), checks.end(), [](const Check& a, const Check& b) { return a.name < b.name; });
}

} // namespace

std::vector<std::string> suite_names()
{
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) {
        out.push_back(name);
    }
    return out;
}

bool is_suite(const std::string& name)
{
    return name == "all" || registry().count(name) > 0;
}

Report run_suite(const std::string& name, const RunConfig& config)
{
    if (!is_suite(name)) {
        throw std::invalid_argument("unknown suite '" + name + "'");
    }
    auto start = std::chrono::steady_clock::now();
    Report report{name, {}, config.seed, std::nullopt};
    if (name != "all") {
        report.checks = run_one(name, config);
    } else {
        auto names = suite_names();
        std::size_t workers = static_cast<std::size_t>(std::max(1, config.workers));
        for (std::size_t i = 0; i < names.size(); i += workers) {
            std::vector<std::future<std::vector<Check>>> batch;
            for (std::size_t j = i; j < std::min(names.size(), i + workers); ++j) {
                batch.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred, run_one,
                                           names[j], std::cref(config)));
            }
            for (std::size_t j = 0; j < batch.size(); ++j) {
                for (auto& c : batch[j].get()) {
                    c.name = names[i + j] + "/" + c.name;
                    report.checks.push_back(std::move(c));
                }
            }
        }
    }
    sort_checks(report.checks);
    if (config.timing) {
        report.elapsed_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    return report;
}

std::string to_json(const Report& report)
{
    nlohmann::ordered_json j;
    j["suite"] = report.suite;
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : report.checks) {
        nlohmann::ordered_json cj;
        cj["name"] = c.name;
        cj["anchor"] = c.anchor;
        cj["status"] = c.passed ? "pass" : "fail";
        cj["residual"] = c.residual.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(c.residual);
        if (!c.detail.empty()) {
            cj["detail"] = c.detail;
        }
        j["checks"].push_back(std::move(cj));
    }
    j["seed"] = report.seed;
    j["elapsed_ms"] = report.elapsed_ms ? nlohmann::ordered_json(*report.elapsed_ms) : nlohmann::ordered_json(nullptr);
    return j.dump(2) + "\n";
}

std::string to_text(const Report& report)
{
    std::ostringstream out;
    out << "suite " << report.suite << " (seed " << report.seed << ")\n";
    std::size_t failed = 0;
    for (const auto& c : report.checks) {
        failed += c.passed ? 0 : 1;
        out << (c.passed ? "PASS  " : "FAIL  ") << c.name;
        if (!c.residual.empty()) {
            out << "  residual=" << c.residual;
        }
        out << "  [" << c.anchor << "]";
        if (!c.detail.empty()) {
            out << "  " << c.detail;
        }
        out << "\n";
    }
    out << report.checks.size() << " checks, " << failed << " failed";
    if (report.elapsed_ms) {
        out << ", " << static_cast<long long>(*report.elapsed_ms) << " ms";
    }
    out << "\n";
    return out.str();
}

std::vector<Diffeo> random_mobius_maps(std::uint64_t seed, int count)
{
    std::mt19937_64 rng(seed);
    const auto& g = grid();
    auto pick = [&] { return g[rng() % g.size()]; };
    std::vector<Diffeo> out;
    for (int i = 0; i < count; ++i) {
        Mobius m = Mobius::identity();
        for (int step = 0; step < 3; ++step) {
            Scalar t = pick();
            Mobius gen = step % 2 == 0 ? Mobius(Scalar(1), t, Scalar(0), Scalar(1)) : Mobius(Scalar(1), Scalar(0), t, Scalar(1));
            m = compose(m, gen);
        }
        out.push_back(Diffeo{m, std::nullopt, std::nullopt});
    }
    return out;
}

std::vector<Diffeo> random_polynomial_maps(std::uint64_t seed, int count)
{
    std::mt19937_64 rng(seed);
    const std::vector<Scalar> cubic = {r(1, 10), r(1, 6), r(1, 5), r(1, 4), r(1, 3), r(1, 2)};
    const std::vector<Scalar> quadratic = {r(0), r(1, 7), r(-1, 7), r(1, 5), r(-1, 5), r(1, 4),
                                           r(-1, 4), r(1, 3), r(-1, 3), r(1, 2), r(-1, 2)};
    std::vector<Diffeo> out;
    while (static_cast<int>(out.size()) < count) {
        Scalar c3 = cubic[rng() % cubic.size()];
        Scalar c2 = quadratic[rng() % quadratic.size()];
        if (!(c2 * c2 < Scalar(3) * c3)) {
            continue;
        }
        out.push_back(parse_diffeo("x + (" + c2.to_string() + ")*x^2 + (" + c3.to_string() + ")*x^3"));
    }
    return out;
}

std::vector<Diffeo> float_maps()
{
    return {parse_diffeo("x + sin(x)/3"), parse_diffeo("x + exp(x)/5")};
}

} // namespace schwarz
