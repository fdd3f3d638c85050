#include "schwarz/jet.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace schwarz {

namespace {

using Series = std::vector<Scalar>;

Series series_mul(const Series& a, const Series& b)
{
    std::size_t n = std::min(a.size(), b.size());
    Series out(n, Scalar(0));
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].is_zero()) {
            continue;
        }
        for (std::size_t j = 0; i + j < n; ++j) {
            out[i + j] += a[i] * b[j];
        }
    }
    return out;
}

// p(q(t)) for q[0] == 0, truncated to min(|p|, |q|) terms.
Series series_compose(const Series& p, const Series& q)
{
    std::size_t n = std::min(p.size(), q.size());
    Series shifted(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(n));
    shifted[0] = Scalar(0);
    Series acc(n, Scalar(0));
    acc[0] = p[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
        acc = series_mul(acc, shifted);
        acc[0] += p[i];
    }
    return acc;
}

// 1/h, h[0] != 0.
Series series_reciprocal(const Series& h)
{
    Series r(h.size(), Scalar(0));
    Scalar inv = Scalar(1) / h[0];
    r[0] = inv;
    for (std::size_t n = 1; n < h.size(); ++n) {
        Scalar acc(0);
        for (std::size_t k = 1; k <= n; ++k) {
            acc += h[k] * r[n - k];
        }
        r[n] = -acc * inv;
    }
    return r;
}

// h^e for h[0] == 1.
Series series_pow_unit(const Series& h, const Scalar& e)
{
    Series g(h.size(), Scalar(0));
    g[0] = Scalar(1);
    for (std::size_t n = 1; n < h.size(); ++n) {
        Scalar acc(0);
        for (std::size_t k = 1; k <= n; ++k) {
            acc += (e * Scalar(static_cast<long>(k)) - Scalar(static_cast<long>(n - k))) * h[k] * g[n - k];
        }
        g[n] = acc / Scalar(static_cast<long>(n));
    }
    return g;
}

// exp(t) for t[0] == 0.
Series series_exp_zero(const Series& t)
{
    Series g(t.size(), Scalar(0));
    g[0] = Scalar(1);
    for (std::size_t n = 1; n < t.size(); ++n) {
        Scalar acc(0);
        for (std::size_t k = 1; k <= n; ++k) {
            acc += Scalar(static_cast<long>(k)) * t[k] * g[n - k];
        }
        g[n] = acc / Scalar(static_cast<long>(n));
    }
    return g;
}

// log(v) for v[0] == 1.
Series series_log_unit(const Series& v)
{
    Series l(v.size(), Scalar(0));
    for (std::size_t n = 1; n < v.size(); ++n) {
        Scalar acc(0);
        for (std::size_t k = 1; k < n; ++k) {
            acc += Scalar(static_cast<long>(k)) * l[k] * v[n - k];
        }
        l[n] = v[n] - acc / Scalar(static_cast<long>(n));
    }
    return l;
}

// (sin t, cos t) for t[0] == 0.
std::pair<Series, Series> series_sincos_zero(const Series& t)
{
    Series s(t.size(), Scalar(0));
    Series c(t.size(), Scalar(0));
    c[0] = Scalar(1);
    for (std::size_t n = 1; n < t.size(); ++n) {
        Scalar as(0);
        Scalar ac(0);
        for (std::size_t k = 1; k <= n; ++k) {
            Scalar kt = Scalar(static_cast<long>(k)) * t[k];
            as += kt * c[n - k];
            ac += kt * s[n - k];
        }
        s[n] = as / Scalar(static_cast<long>(n));
        c[n] = -ac / Scalar(static_cast<long>(n));
    }
    return {s, c};
}

void check_same_base(const Jet& a, const Jet& b)
{
    if (!same_point(a.base(), b.base())) {
        throw std::invalid_argument("jets at different base points: " + a.base().to_string() + " vs " +
                                    b.base().to_string());
    }
}

Series scaled(Series s, const Scalar& f)
{
    for (auto& x : s) {
        x *= f;
    }
    return s;
}

} // namespace

bool same_point(const Scalar& a, const Scalar& b)
{
    if (a.is_exact() && b.is_exact()) {
        return a == b;
    }
    return approx_equal(a, b, Tolerance{1e-9, 1e-12});
}

Jet::Jet(Scalar base, std::vector<Scalar> derivs) : base_(std::move(base)), derivs_(std::move(derivs))
{
    if (derivs_.empty()) {
        throw std::invalid_argument("a jet needs at least its value");
    }
    bool any_float = std::any_of(derivs_.begin(), derivs_.end(), [](const Scalar& s) { return !s.is_exact(); });
    if (any_float) {
        for (auto& s : derivs_) {
            s = s.as_float();
        }
    }
}

Jet Jet::constant(const Scalar& base, const Scalar& value, int order)
{
    std::vector<Scalar> d(static_cast<std::size_t>(order) + 1, value.is_exact() ? Scalar(0) : Scalar::real(0.0));
    d[0] = value;
    return Jet(base, std::move(d));
}

Jet Jet::identity(const Scalar& base, int order)
{
    std::vector<Scalar> d(static_cast<std::size_t>(order) + 1, Scalar(0));
    d[0] = base;
    if (order >= 1) {
        d[1] = Scalar(1);
    }
    return Jet(base, std::move(d));
}

Jet Jet::shifted_power(const Scalar& base, int power, int order)
{
    std::vector<Scalar> d(static_cast<std::size_t>(order) + 1, Scalar(0));
    if (power <= order) {
        d[static_cast<std::size_t>(power)] = factorial(power);
    }
    return Jet(base, std::move(d));
}

Jet Jet::from_taylor(const Scalar& base, const std::vector<Scalar>& coeffs)
{
    std::vector<Scalar> d(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        d[i] = coeffs[i] * factorial(static_cast<long>(i));
    }
    return Jet(base, std::move(d));
}

bool Jet::is_exact() const
{
    return derivs_.front().is_exact();
}

std::vector<Scalar> Jet::taylor() const
{
    std::vector<Scalar> t(derivs_.size());
    for (std::size_t i = 0; i < derivs_.size(); ++i) {
        t[i] = derivs_[i] / factorial(static_cast<long>(i));
    }
    return t;
}

Jet Jet::truncated(int order) const
{
    if (order > this->order()) {
        throw std::invalid_argument("cannot truncate a jet of order " + std::to_string(this->order()) +
                                    " to higher order " + std::to_string(order));
    }
    return Jet(base_, std::vector<Scalar>(derivs_.begin(), derivs_.begin() + order + 1));
}

Jet Jet::as_float() const
{
    auto d = derivs_;
    for (auto& s : d) {
        s = s.as_float();
    }
    return Jet(base_, std::move(d));
}

Jet Jet::operator-() const
{
    auto d = derivs_;
    for (auto& s : d) {
        s = -s;
    }
    return Jet(base_, std::move(d));
}

Jet& Jet::operator+=(const Jet& o)
{
    check_same_base(*this, o);
    std::size_t n = std::min(derivs_.size(), o.derivs_.size());
    derivs_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        derivs_[i] += o.derivs_[i];
    }
    *this = Jet(base_, std::move(derivs_));
    return *this;
}

Jet& Jet::operator-=(const Jet& o)
{
    return *this += -o;
}

Jet& Jet::operator*=(const Jet& o)
{
    check_same_base(*this, o);
    std::size_t n = std::min(derivs_.size(), o.derivs_.size());
    std::vector<Scalar> out(n, Scalar(0));
    for (std::size_t k = 0; k < n; ++k) {
        Scalar binom(1);
        for (std::size_t i = 0; i <= k; ++i) {
            if (!derivs_[i].is_zero() && !o.derivs_[k - i].is_zero()) {
                out[k] += binom * derivs_[i] * o.derivs_[k - i];
            }
            binom = binom * Scalar(static_cast<long>(k - i)) / Scalar(static_cast<long>(i + 1));
        }
    }
    *this = Jet(base_, std::move(out));
    return *this;
}

Jet& Jet::operator*=(const Scalar& s)
{
    for (auto& d : derivs_) {
        d *= s;
    }
    *this = Jet(base_, std::move(derivs_));
    return *this;
}

Jet operator/(const Jet& a, const Jet& b)
{
    return a * reciprocal(b);
}

Jet operator/(Jet a, const Scalar& s)
{
    return a *= Scalar(1) / s;
}

Jet operator+(Jet a, const Scalar& s)
{
    auto d = a.derivs();
    d[0] += s;
    return Jet(a.base(), std::move(d));
}

Jet operator-(Jet a, const Scalar& s)
{
    return std::move(a) + (-s);
}

bool operator==(const Jet& a, const Jet& b)
{
    return a.base() == b.base() && a.derivs() == b.derivs();
}

Jet derive(const Jet& a)
{
    if (a.order() < 1) {
        throw std::invalid_argument("cannot differentiate an order-0 jet");
    }
    return Jet(a.base(), std::vector<Scalar>(a.derivs().begin() + 1, a.derivs().end()));
}

Jet compose(const Jet& outer, const Jet& inner)
{
    if (!same_point(outer.base(), inner.value())) {
        throw std::invalid_argument("composition base mismatch: outer jet at " + outer.base().to_string() +
                                    ", inner value " + inner.value().to_string());
    }
    return Jet::from_taylor(inner.base(), series_compose(outer.taylor(), inner.taylor()));
}

Jet invert(const Jet& f)
{
    if (f.order() < 1 || f[1].is_zero()) {
        throw domain_error("cannot invert a jet at a critical point");
    }
    // Lagrange inversion: b_k = [x^(k-1)] (x / a(x))^k / k.
    Series a = f.taylor();
    const std::size_t n = a.size();
    Series h = series_reciprocal(Series(a.begin() + 1, a.end()));
    Series power(n - 1, Scalar(0));
    power[0] = Scalar(1);
    Series b(n, Scalar(0));
    for (std::size_t k = 1; k < n; ++k) {
        power = series_mul(power, h);
        b[k] = power[k - 1] / Scalar(static_cast<long>(k));
    }
    b[0] = f.base();
    return Jet::from_taylor(f.value(), b);
}

Jet reciprocal(const Jet& f)
{
    if (f.value().is_zero()) {
        throw domain_error("reciprocal of a jet with zero value");
    }
    return Jet::from_taylor(f.base(), series_reciprocal(f.taylor()));
}

Jet pow(const Jet& f, const Scalar& exponent)
{
    if (exponent.is_exact() && exponent.is_integer() && exponent.sign() >= 0) {
        long n = exponent.rational().get_num().get_si();
        Jet acc = Jet::constant(f.base(), Scalar(1), f.order());
        for (long i = 0; i < n; ++i) {
            acc *= f;
        }
        return acc;
    }
    if (f.value().is_zero()) {
        throw domain_error("power of a jet with zero value");
    }
    Scalar lead = pow(f.value(), exponent);
    Series h = scaled(f.taylor(), Scalar(1) / f.value());
    return Jet::from_taylor(f.base(), scaled(series_pow_unit(h, exponent), lead));
}

Jet exp(const Jet& f)
{
    Series t = f.taylor();
    Scalar lead = exp(t[0]);
    t[0] = Scalar(0);
    return Jet::from_taylor(f.base(), scaled(series_exp_zero(t), lead));
}

Jet log(const Jet& f)
{
    if (f.value().sign() <= 0) {
        throw domain_error("logarithm of a jet with non-positive value");
    }
    Scalar lead = log(f.value());
    Series l = series_log_unit(scaled(f.taylor(), Scalar(1) / f.value()));
    l[0] = lead;
    return Jet::from_taylor(f.base(), l);
}

namespace {

std::pair<Jet, Jet> sincos(const Jet& f)
{
    Series t = f.taylor();
    Scalar s0 = sin(t[0]);
    Scalar c0 = cos(t[0]);
    t[0] = Scalar(0);
    auto [s, c] = series_sincos_zero(t);
    Series sn(s.size());
    Series cn(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        sn[i] = s0 * c[i] + c0 * s[i];
        cn[i] = c0 * c[i] - s0 * s[i];
    }
    return {Jet::from_taylor(f.base(), sn), Jet::from_taylor(f.base(), cn)};
}

} // namespace

Jet sin(const Jet& f)
{
    return sincos(f).first;
}

Jet cos(const Jet& f)
{
    return sincos(f).second;
}

Jet tan(const Jet& f)
{
    auto [s, c] = sincos(f);
    if (c.value().is_zero()) {
        throw domain_error("tangent at a pole");
    }
    return s / c;
}

Jet sqrt(const Jet& f)
{
    if (f.value().sign() <= 0) {
        throw domain_error("square root of a jet with non-positive value");
    }
    return pow(f, Scalar::rational(1, 2));
}

Scalar max_discrepancy(const Jet& a, const Jet& b)
{
    int n = std::min(a.order(), b.order());
    Scalar worst(0);
    for (int i = 0; i <= n; ++i) {
        worst = max(worst, discrepancy(a[i], b[i]));
    }
    return worst;
}

} // namespace schwarz
