#include "schwarz/modules.hpp"

#include <algorithm>
#include <stdexcept>

namespace schwarz {

int OperatorJets::jet_order() const
{
    int n = coeffs.front().order();
    for (const auto& c : coeffs) {
        n = std::min(n, c.order());
    }
    return n;
}

bool OperatorJets::is_exact() const
{
    return std::all_of(coeffs.begin(), coeffs.end(), [](const Jet& j) { return j.is_exact(); });
}

OperatorJets OperatorJets::truncated(int n) const
{
    OperatorJets out{source, target, {}};
    for (const auto& c : coeffs) {
        out.coeffs.push_back(c.truncated(n));
    }
    return out;
}

namespace {

OperatorJets combine(const OperatorJets& a, const OperatorJets& b, const Scalar& sign)
{
    const OperatorJets& longer = a.coeffs.size() >= b.coeffs.size() ? a : b;
    int n = std::min(a.jet_order(), b.jet_order());
    OperatorJets out{longer.source, longer.target, {}};
    for (std::size_t i = 0; i < longer.coeffs.size(); ++i) {
        Jet x = i < a.coeffs.size() ? a.coeffs[i].truncated(n) : Jet::zero(longer.base(), n);
        Jet y = i < b.coeffs.size() ? b.coeffs[i].truncated(n) : Jet::zero(longer.base(), n);
        out.coeffs.push_back(x + sign * y);
    }
    return out;
}

} // namespace

OperatorJets operator+(const OperatorJets& a, const OperatorJets& b)
{
    return combine(a, b, Scalar(1));
}

OperatorJets operator-(const OperatorJets& a, const OperatorJets& b)
{
    return combine(a, b, Scalar(-1));
}

OperatorJets operator*(const Scalar& s, const OperatorJets& a)
{
    OperatorJets out = a;
    for (auto& c : out.coeffs) {
        c *= s;
    }
    return out;
}

Scalar max_discrepancy(const OperatorJets& a, const OperatorJets& b)
{
    OperatorJets zero_a = Scalar(0) * a;
    OperatorJets pa = a + (Scalar(0) * b);
    OperatorJets pb = b + zero_a;
    Scalar worst(0);
    for (std::size_t i = 0; i < pa.coeffs.size(); ++i) {
        worst = max(worst, max_discrepancy(pa.coeffs[i], pb.coeffs[i]));
    }
    return worst;
}

bool is_zero(const OperatorJets& a)
{
    return std::all_of(a.coeffs.begin(), a.coeffs.end(), [](const Jet& j) {
        return std::all_of(j.derivs().begin(), j.derivs().end(), [](const Scalar& s) { return s.is_zero(); });
    });
}

OperatorJets jets_at(const LinDiffOp& a, const Scalar& x0, int order)
{
    OperatorJets out{a.source, a.target, {}};
    for (const auto& c : a.coeffs) {
        out.coeffs.push_back(jet_at(c, x0, order));
    }
    return out;
}

Jet apply_op(const OperatorJets& a, const Jet& phi)
{
    int k = a.order();
    if (phi.order() < k) {
        throw std::invalid_argument("applying an order-" + std::to_string(k) + " operator needs a density jet of order >= " +
                                    std::to_string(k));
    }
    Jet acc = Jet::zero(phi.base(), std::min(a.jet_order(), phi.order() - k));
    Jet d = phi;
    for (int i = 0; i <= k; ++i) {
        acc += a.coeffs[static_cast<std::size_t>(i)] * d;
        if (i < k) {
            d = derive(d);
        }
    }
    return acc;
}

Jet apply_op(const LinDiffOp& a, const Density& phi, const Scalar& x0, int order)
{
    if (phi.weight != a.source) {
        throw std::invalid_argument("density weight " + phi.weight.to_string() + " does not match operator source weight " +
                                    a.source.to_string());
    }
    return apply_op(jets_at(a, x0, order), jet_at(phi.profile, x0, order + a.order()));
}

namespace {

// g'(x0) = c and g' = c h with h(x0) = 1, so fractional powers of h stay exact.
struct SplitDerivative {
    Scalar c;
    Jet h;
};

SplitDerivative split_derivative(const Jet& g)
{
    Jet gp = derive(g);
    Scalar c = gp.value();
    if (c.is_zero()) {
        throw domain_error("critical point at x = " + g.base().to_string());
    }
    return {c, gp / c};
}

} // namespace

Jet pull_density(const Jet& phi, const Jet& g, const Scalar& weight, const Scalar& omitted_power)
{
    int n = std::min(phi.order(), g.order() - 1);
    Jet gt = g.truncated(n);
    auto [c, h] = split_derivative(g.truncated(n + 1));
    return compose(phi.truncated(n), gt) * pow(h, weight) * pow(c, weight - omitted_power);
}

Jet push_density(const Jet& phi, const Jet& f, const Scalar& weight, const Scalar& omitted_power)
{
    return pull_density(phi, invert(f), weight, omitted_power);
}

Jet act_density(const Diffeo& f, const Density& phi, const Scalar& x0, int order)
{
    Scalar p = invert_diffeo_point(f, x0);
    Jet fj = jet_at(f, p, order + 1);
    Jet out = push_density(jet_at(phi.profile, p, order), fj, phi.weight);
    if (!same_point(out.base(), x0)) {
        throw domain_error("preimage of " + x0.to_string() + " did not map back onto it");
    }
    return Jet(x0, out.derivs());
}

Density lie_derivative(const VectorField& x, const Density& phi)
{
    Expr w = Expr::number(phi.weight);
    return {phi.weight, x.profile * differentiate(phi.profile) + w * differentiate(x.profile) * phi.profile};
}

VectorField commutator(const VectorField& x, const VectorField& y)
{
    return {x.profile * differentiate(y.profile) - differentiate(x.profile) * y.profile};
}

Jet lie_derivative(const Jet& x, const Jet& phi, const Scalar& weight)
{
    return x * derive(phi) + weight * derive(x) * phi;
}

OperatorJets pullback_op(const OperatorJets& a, const Jet& g, const Scalar& omitted_power)
{
    const int k = a.order();
    const int m = std::min(a.jet_order(), g.order() - 1);
    const int n = m - k;
    if (n < 0) {
        throw std::invalid_argument("pulling back an order-" + std::to_string(k) + " operator needs jets of order >= " +
                                    std::to_string(k));
    }
    if (!same_point(a.base(), g.value())) {
        throw std::invalid_argument("operator sampled at " + a.base().to_string() + " but g(x0) = " + g.value().to_string());
    }
    const Scalar& x0 = g.base();
    Jet gm = g.truncated(m);
    auto [c, h] = split_derivative(g.truncated(m + 1));
    Jet inv_gp = reciprocal(h * c);
    Jet h_source = pow(h, -a.source);
    Jet h_target = pow(h, a.target).truncated(n);
    Scalar scale = pow(c, a.target - a.source - omitted_power);

    std::vector<Jet> pulled;
    pulled.reserve(a.coeffs.size());
    for (const auto& coeff : a.coeffs) {
        pulled.push_back(compose(coeff.truncated(m), gm));
    }

    // Probe with (x - x0)^j; the probe system is triangular.
    std::vector<Jet> out;
    for (int j = 0; j <= k; ++j) {
        Jet cur = Jet::shifted_power(x0, j, m) * h_source;
        Jet image = Jet::zero(x0, n);
        for (int i = 0; i <= k; ++i) {
            image += pulled[static_cast<std::size_t>(i)].truncated(m - i) * cur;
            if (i < k) {
                cur = inv_gp.truncated(m - i - 1) * derive(cur);
            }
        }
        image = image * h_target * scale;
        Scalar jf = factorial(j);
        for (int i = 0; i < j; ++i) {
            Scalar falling = jf / factorial(j - i);
            image -= out[static_cast<std::size_t>(i)] * Jet::shifted_power(x0, j - i, n) * falling;
        }
        out.push_back(image / jf);
    }
    return {a.source, a.target, std::move(out)};
}

OperatorJets push_op(const OperatorJets& a, const Jet& f, const Scalar& omitted_power)
{
    return pullback_op(a, invert(f), omitted_power);
}

OperatorJets act_op(const Diffeo& f, const LinDiffOp& a, const Scalar& x0, int order)
{
    Scalar p = invert_diffeo_point(f, x0);
    OperatorJets out = act_op_at_preimage(f, a, p, order);
    for (auto& c : out.coeffs) {
        c = Jet(x0, c.derivs());
    }
    return out;
}

OperatorJets act_op_at_preimage(const Diffeo& f, const LinDiffOp& a, const Scalar& s, int order,
                                const Scalar& omitted_power)
{
    int k = a.order();
    return push_op(jets_at(a, s, order + k), jet_at(f, s, order + k + 1), omitted_power);
}

} // namespace schwarz
