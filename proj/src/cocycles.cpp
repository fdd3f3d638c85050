#include "schwarz/cocycles.hpp"

#include <algorithm>
#include <stdexcept>

namespace schwarz {

Jet schwarzian(const Jet& f)
{
    if (f.order() < 3) {
        throw std::invalid_argument("the Schwarzian needs a jet of order >= 3");
    }
    if (f[1].is_zero()) {
        throw domain_error("critical point at x = " + f.base().to_string());
    }
    Jet d1 = derive(f);
    Jet d2 = derive(d1);
    Jet d3 = derive(d2);
    Jet inv = reciprocal(d1);
    Jet r = d2 * inv;
    return d3 * inv - r * r * Scalar::rational(3, 2);
}

Jet schwarzian(const Diffeo& f, const Scalar& x0, int order)
{
    return schwarzian(jet_at(f, x0, order + 3));
}

// ---- families ---------------------------------------------------------------

Scalar CocycleFamily::source() const
{
    switch (tag) {
    case Family::V0:
        return Scalar(0);
    case Family::Vm4:
        return Scalar(-4);
    default:
        return lambda;
    }
}

Scalar CocycleFamily::target() const
{
    switch (tag) {
    case Family::S:
        return lambda + Scalar(2);
    case Family::T:
        return lambda + Scalar(3);
    case Family::U:
        return lambda + Scalar(4);
    case Family::V0:
        return Scalar(5);
    case Family::Vm4:
        return Scalar(1);
    case Family::LOG0:
        return lambda;
    case Family::LOG1:
        return lambda + Scalar(1);
    }
    throw std::logic_error("unknown family");
}

int CocycleFamily::order() const
{
    switch (tag) {
    case Family::T:
        return 1;
    case Family::U:
        return 2;
    case Family::V0:
    case Family::Vm4:
        return 3;
    default:
        return 0;
    }
}

int CocycleFamily::demand() const
{
    switch (tag) {
    case Family::S:
        return 3;
    case Family::T:
        return 4;
    case Family::U:
    case Family::V0:
        return 5;
    case Family::Vm4:
        return 6;
    case Family::LOG0:
        return 1;
    case Family::LOG1:
        return 2;
    }
    throw std::logic_error("unknown family");
}

bool CocycleFamily::vanishes_on_mobius() const
{
    return tag != Family::LOG0 && tag != Family::LOG1;
}

std::string family_name(Family f)
{
    switch (f) {
    case Family::S:
        return "S";
    case Family::T:
        return "T";
    case Family::U:
        return "U";
    case Family::V0:
        return "V0";
    case Family::Vm4:
        return "Vm4";
    case Family::LOG0:
        return "LOG0";
    case Family::LOG1:
        return "LOG1";
    }
    throw std::logic_error("unknown family");
}

Family parse_family(const std::string& name)
{
    for (Family f : {Family::S, Family::T, Family::U, Family::V0, Family::Vm4, Family::LOG0, Family::LOG1}) {
        if (family_name(f) == name) {
            return f;
        }
    }
    throw std::invalid_argument("unknown cocycle family '" + name + "' (expected S, T, U, V0, Vm4, LOG0 or LOG1)");
}

std::string CocycleFamily::name() const
{
    if (tag == Family::V0 || tag == Family::Vm4) {
        return family_name(tag);
    }
    return family_name(tag) + "_" + lambda.to_string();
}

OperatorJets evaluate_cocycle(const CocycleFamily& c, const Jet& f)
{
    const int n = f.order() - c.demand();
    if (n < 0) {
        throw std::invalid_argument(c.name() + " needs a jet of order >= " + std::to_string(c.demand()));
    }
    const Scalar& l = c.lambda;
    auto q = [](long a, long b) { return Scalar::rational(a, b); };
    std::vector<Jet> coeffs;
    if (c.tag == Family::LOG0) {
        Jet d1 = derive(f);
        coeffs = {log(d1.value().sign() < 0 ? -d1 : d1)};
    } else if (c.tag == Family::LOG1) {
        Jet d1 = derive(f);
        coeffs = {derive(d1) / d1};
    } else {
        Jet s = schwarzian(f);
        auto d = [&](int times) {
            Jet r = s;
            for (int i = 0; i < times; ++i) {
                r = derive(r);
            }
            return r.truncated(n);
        };
        switch (c.tag) {
        case Family::S:
            coeffs = {d(0)};
            break;
        case Family::T:
            coeffs = {d(1) * (-l / Scalar(2)), d(0)};
            break;
        case Family::U:
            coeffs = {d(2) * (l * (Scalar(2) * l + Scalar(1)) / Scalar(10)) - d(0) * d(0) * (l * (l + Scalar(3)) / Scalar(5)),
                      d(1) * (-(Scalar(2) * l + Scalar(1)) / Scalar(2)), d(0)};
            break;
        case Family::V0:
            coeffs = {Jet::zero(f.base(), n), d(2) * q(3, 10) - d(0) * d(0) * q(4, 5), d(1) * q(-3, 2), d(0)};
            break;
        case Family::Vm4:
            coeffs = {d(3) * q(14, 5) - d(1) * d(0) * q(8, 5), d(2) * q(63, 10) - d(0) * d(0) * q(4, 5),
                      d(1) * q(9, 2), d(0)};
            break;
        default:
            break;
        }
    }
    for (auto& j : coeffs) {
        j = j.truncated(n);
    }
    return {c.source(), c.target(), std::move(coeffs)};
}

OperatorJets evaluate_cocycle(const CocycleFamily& c, const Diffeo& f, const Scalar& x0, int order)
{
    return evaluate_cocycle(c, jet_at(f, x0, order + c.demand()));
}

LinDiffOp bol(int k)
{
    if (k < 1) {
        throw std::invalid_argument("Bol operators need k >= 1");
    }
    std::vector<Expr> coeffs(static_cast<std::size_t>(k) + 1, Expr::number(Scalar(0)));
    coeffs.back() = Expr::number(Scalar(1));
    return {Scalar::rational(1 - k, 2), Scalar::rational(1 + k, 2), std::move(coeffs)};
}

OperatorJets coboundary(const LinDiffOp& b, const Jet& g)
{
    int n = g.order() - 1 - b.order();
    OperatorJets pulled = pullback_op(jets_at(b, g.value(), n + b.order()), g);
    return pulled - jets_at(b, g.base(), n);
}

OperatorJets coboundary(const LinDiffOp& b, const Diffeo& g, const Scalar& x0, int order)
{
    return coboundary(b, jet_at(g, x0, order + b.order() + 1));
}

Scalar cocycle_residual(const CocycleFamily& c, const Jet& f, const Jet& g)
{
    OperatorJets lhs = evaluate_cocycle(c, compose(f, g));
    OperatorJets rhs = pullback_op(evaluate_cocycle(c, f), g) + evaluate_cocycle(c, g);
    return max_discrepancy(lhs, rhs);
}

Scalar cocycle_residual(const CocycleFamily& c, const Diffeo& f, const Diffeo& g, const std::vector<Scalar>& samples,
                        int order)
{
    const int m = order + c.order() + c.demand() + 1;
    Scalar worst(0);
    bool any = false;
    for (const auto& s : samples) {
        Jet gj;
        Jet fj;
        try {
            gj = jet_at(g, s, m);
            fj = jet_at(f, gj.value(), m);
        } catch (const domain_error&) {
            continue;
        }
        any = true;
        worst = max(worst, cocycle_residual(c, fj, gj));
    }
    if (!any) {
        throw domain_error("no sample point lies in the domain of both maps");
    }
    return worst;
}

// ---- Sturm-Liouville ---------------------------------------------------------

std::pair<Jet, Jet> sl_solve(const Jet& u, int order)
{
    if (order < 1) {
        throw std::invalid_argument("Sturm-Liouville solutions need order >= 1");
    }
    if (u.order() < order - 2) {
        throw std::invalid_argument("potential jet of order " + std::to_string(u.order()) + " is too short for order " +
                                    std::to_string(order));
    }
    auto solve = [&](Scalar p0, Scalar p1) {
        std::vector<Scalar> psi{std::move(p0), std::move(p1)};
        for (int n = 0; n + 2 <= order; ++n) {
            Scalar acc(0);
            Scalar binom(1);
            for (int i = 0; i <= n; ++i) {
                acc += binom * u[i] * psi[static_cast<std::size_t>(n - i)];
                binom = binom * Scalar(n - i) / Scalar(i + 1);
            }
            psi.push_back(acc * Scalar::rational(-1, 2));
        }
        return Jet(u.base(), std::move(psi));
    };
    return {solve(Scalar(1), Scalar(0)), solve(Scalar(0), Scalar(1))};
}

Jet sl_potential(const Jet& psi1, const Jet& psi2)
{
    if (psi2.value().is_zero()) {
        throw domain_error("second solution vanishes at x = " + psi2.base().to_string());
    }
    return schwarzian(psi1 / psi2);
}

// ---- canonical forms --------------------------------------------------------

std::pair<Scalar, Scalar> canonical_weights(int k)
{
    if (k < 2 || k > 4) {
        throw std::invalid_argument("canonical forms exist for k = 2, 3, 4");
    }
    return {Scalar::rational(1 - k, 2), Scalar::rational(1 + k, 2)};
}

OperatorJets canonical_form(int k, const std::vector<Jet>& potentials)
{
    auto [source, target] = canonical_weights(k);
    if (potentials.empty()) {
        throw std::invalid_argument("canonical form needs at least the potential u");
    }
    const Jet& u = potentials[0];
    const Scalar& x0 = u.base();
    auto get = [&](std::size_t i, int n) {
        return i < potentials.size() ? potentials[i].truncated(n) : Jet::zero(x0, n);
    };
    auto q = [](long a, long b) { return Scalar::rational(a, b); };
    std::vector<Jet> c;
    if (k == 2) {
        int n = u.order();
        c = {u, Jet::zero(x0, n), Jet::constant(x0, Scalar(2), n)};
    } else if (k == 3) {
        int n = u.order() - 1;
        if (potentials.size() > 1) {
            n = std::min(n, potentials[1].order());
        }
        Jet un = u.truncated(n);
        c = {derive(u).truncated(n) * Scalar(2) + get(1, n), un * Scalar(4), Jet::zero(x0, n), Jet::constant(x0, Scalar(1), n)};
    } else {
        int n = u.order() - 2;
        if (potentials.size() > 1) {
            n = std::min(n, potentials[1].order() - 1);
        }
        if (potentials.size() > 2) {
            n = std::min(n, potentials[2].order());
        }
        Jet un = u.truncated(n);
        Jet v = get(1, n + 1);
        Jet d1 = derive(u);
        c = {derive(d1).truncated(n) * q(3, 2) + un * un * q(9, 4) + derive(v) * q(1, 2) + get(2, n),
             d1.truncated(n) * Scalar(5) + v.truncated(n), un * Scalar(5), Jet::zero(x0, n), Jet::constant(x0, Scalar(1), n)};
    }
    return {source, target, std::move(c)};
}

Scalar canonical_form_residual(int k, const std::vector<Expr>& potentials, const Diffeo& g,
                               const std::vector<Scalar>& samples, int order)
{
    canonical_weights(k);
    const int m = order + 2 * k + 4;
    const Scalar shift = k == 3 ? Scalar::rational(1, 2) : Scalar(1);
    Scalar worst(0);
    bool any = false;
    for (const auto& s : samples) {
        Jet gj;
        std::vector<Jet> at_image;
        try {
            gj = jet_at(g, s, m);
            for (const auto& p : potentials) {
                at_image.push_back(jet_at(p, gj.value(), m));
            }
        } catch (const domain_error&) {
            continue;
        }
        any = true;
        OperatorJets pulled = pullback_op(canonical_form(k, at_image), gj);
        std::vector<Jet> moved;
        for (std::size_t i = 0; i < at_image.size(); ++i) {
            moved.push_back(pull_density(at_image[i], gj, Scalar(static_cast<long>(i) + 2)));
        }
        if (moved.empty()) {
            moved.push_back(Jet::zero(s, m - 1));
        }
        Jet sg = schwarzian(gj);
        moved[0] = moved[0].truncated(sg.order()) + sg * shift;
        worst = max(worst, max_discrepancy(pulled, canonical_form(k, moved)));
    }
    if (!any) {
        throw domain_error("no sample point lies in the domain of the map and potentials");
    }
    return worst;
}

} // namespace schwarz
