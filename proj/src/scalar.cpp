#include "schwarz/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>

namespace schwarz {

namespace {

// Exact integer n-th root of z, if z is a perfect n-th power.
std::optional<mpz_class> exact_root(const mpz_class& z, unsigned long n)
{
    if (z < 0) {
        if (n % 2 == 0) {
            return std::nullopt;
        }
        auto r = exact_root(mpz_class(-z), n);
        if (!r) {
            return std::nullopt;
        }
        return mpz_class(-*r);
    }
    mpz_class r;
    if (mpz_root(r.get_mpz_t(), z.get_mpz_t(), n) == 0) {
        return std::nullopt;
    }
    return r;
}

std::string trim(std::string_view s)
{
    auto b = s.find_first_not_of(" \t\n\r");
    if (b == std::string_view::npos) {
        return {};
    }
    auto e = s.find_last_not_of(" \t\n\r");
    return std::string(s.substr(b, e - b + 1));
}

} // namespace

Scalar::Scalar(long long v) : value_(mpq_class(mpz_class(std::to_string(v)))) {}

Scalar::Scalar(mpq_class v) : value_(std::move(v))
{
    std::get<mpq_class>(value_).canonicalize();
}

Scalar Scalar::rational(long num, long den)
{
    if (den == 0) {
        throw domain_error("rational with zero denominator");
    }
    return Scalar(mpq_class(num, den));
}

Scalar Scalar::parse(std::string_view text)
{
    std::string s = trim(text);
    // U+2212 MINUS SIGN
    const std::string uminus = "\xE2\x88\x92";
    if (s.rfind(uminus, 0) == 0) {
        s = "-" + s.substr(uminus.size());
    }
    if (s.empty()) {
        throw std::invalid_argument("empty number literal");
    }
    bool negative = false;
    std::string body = s;
    if (body[0] == '-' || body[0] == '+') {
        negative = body[0] == '-';
        body = trim(body.substr(1));
    }
    auto digits_only = [](const std::string& t) {
        return !t.empty() && std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    mpq_class q;
    if (auto slash = body.find('/'); slash != std::string::npos) {
        auto p = trim(body.substr(0, slash));
        auto d = trim(body.substr(slash + 1));
        if (!digits_only(p) || !digits_only(d)) {
            throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
        }
        mpz_class den(d);
        if (den == 0) {
            throw domain_error("rational with zero denominator");
        }
        q = mpq_class(mpz_class(p), den);
    } else if (auto dot = body.find('.'); dot != std::string::npos) {
        auto ip = body.substr(0, dot);
        auto fp = body.substr(dot + 1);
        if ((!ip.empty() && !digits_only(ip)) || (!fp.empty() && !digits_only(fp)) || (ip.empty() && fp.empty())) {
            throw std::invalid_argument("malformed decimal literal '" + std::string(text) + "'");
        }
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, fp.size());
        mpz_class whole(ip.empty() ? "0" : ip);
        mpz_class frac(fp.empty() ? "0" : fp);
        q = mpq_class(whole * scale + frac, scale);
    } else {
        if (!digits_only(body)) {
            throw std::invalid_argument("malformed number literal '" + std::string(text) + "'");
        }
        q = mpq_class(mpz_class(body));
    }
    q.canonicalize();
    return Scalar(negative ? mpq_class(-q) : q);
}

const mpq_class& Scalar::rational() const
{
    if (!is_exact()) {
        throw std::logic_error("scalar is not an exact rational");
    }
    return std::get<mpq_class>(value_);
}

double Scalar::to_double() const
{
    if (is_exact()) {
        return std::get<mpq_class>(value_).get_d();
    }
    return std::get<double>(value_);
}

bool Scalar::is_zero() const
{
    return is_exact() ? sgn(std::get<mpq_class>(value_)) == 0 : std::get<double>(value_) == 0.0;
}

bool Scalar::is_integer() const
{
    if (is_exact()) {
        return std::get<mpq_class>(value_).get_den() == 1;
    }
    double d = std::get<double>(value_);
    return std::isfinite(d) && std::floor(d) == d;
}

int Scalar::sign() const
{
    if (is_exact()) {
        return sgn(std::get<mpq_class>(value_));
    }
    double d = std::get<double>(value_);
    return (d > 0) - (d < 0);
}

std::string Scalar::to_string() const
{
    if (is_exact()) {
        return std::get<mpq_class>(value_).get_str();
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", std::get<double>(value_));
    return buf;
}

Scalar Scalar::operator-() const
{
    if (is_exact()) {
        return Scalar(mpq_class(-std::get<mpq_class>(value_)));
    }
    return real(-std::get<double>(value_));
}

Scalar& Scalar::operator+=(const Scalar& o)
{
    if (is_exact() && o.is_exact()) {
        std::get<mpq_class>(value_) += std::get<mpq_class>(o.value_);
    } else {
        value_ = to_double() + o.to_double();
    }
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o)
{
    if (is_exact() && o.is_exact()) {
        std::get<mpq_class>(value_) -= std::get<mpq_class>(o.value_);
    } else {
        value_ = to_double() - o.to_double();
    }
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o)
{
    if (is_exact() && o.is_exact()) {
        std::get<mpq_class>(value_) *= std::get<mpq_class>(o.value_);
    } else {
        value_ = to_double() * o.to_double();
    }
    return *this;
}

Scalar& Scalar::operator/=(const Scalar& o)
{
    if (o.is_zero()) {
        throw domain_error("division by zero");
    }
    if (is_exact() && o.is_exact()) {
        std::get<mpq_class>(value_) /= std::get<mpq_class>(o.value_);
    } else {
        value_ = to_double() / o.to_double();
    }
    return *this;
}

bool operator==(const Scalar& a, const Scalar& b)
{
    if (a.is_exact() && b.is_exact()) {
        return std::get<mpq_class>(a.value_) == std::get<mpq_class>(b.value_);
    }
    return a.to_double() == b.to_double();
}

std::partial_ordering operator<=>(const Scalar& a, const Scalar& b)
{
    if (a.is_exact() && b.is_exact()) {
        int c = cmp(std::get<mpq_class>(a.value_), std::get<mpq_class>(b.value_));
        return c < 0 ? std::partial_ordering::less
                     : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
    }
    return a.to_double() <=> b.to_double();
}

Scalar abs(const Scalar& s)
{
    return s.sign() < 0 ? -s : s;
}

Scalar max(const Scalar& a, const Scalar& b)
{
    return (a < b) ? b : a;
}

Scalar pow(const Scalar& base, long exponent)
{
    if (exponent < 0) {
        if (base.is_zero()) {
            throw domain_error("zero raised to a negative power");
        }
        return Scalar(1) / pow(base, -exponent);
    }
    if (!base.is_exact()) {
        return Scalar::real(std::pow(base.to_double(), static_cast<double>(exponent)));
    }
    mpq_class r;
    mpz_pow_ui(mpq_numref(r.get_mpq_t()), base.rational().get_num_mpz_t(), static_cast<unsigned long>(exponent));
    mpz_pow_ui(mpq_denref(r.get_mpq_t()), base.rational().get_den_mpz_t(), static_cast<unsigned long>(exponent));
    return Scalar(r);
}

Scalar pow(const Scalar& base, const Scalar& exponent)
{
    if (exponent.is_exact() && exponent.is_integer()) {
        return pow(base, exponent.rational().get_num().get_si());
    }
    if (base.is_zero()) {
        if (exponent.sign() > 0) {
            return base.is_exact() ? Scalar(0) : Scalar::real(0.0);
        }
        throw domain_error("zero raised to a non-positive power");
    }
    if (base.is_exact() && exponent.is_exact()) {
        const mpq_class& e = exponent.rational();
        const mpq_class& b = base.rational();
        if (e.get_den().fits_ulong_p()) {
            unsigned long n = e.get_den().get_ui();
            if (b < 0 && n % 2 == 0) {
                throw domain_error("even root of a negative number");
            }
            auto num = exact_root(b.get_num(), n);
            auto den = exact_root(b.get_den(), n);
            if (num && den) {
                return pow(Scalar(mpq_class(*num, *den)), e.get_num().get_si());
            }
        }
    }
    double b = base.to_double();
    if (b < 0) {
        throw domain_error("non-integer power of a negative number");
    }
    return Scalar::real(std::pow(b, exponent.to_double()));
}

Scalar factorial(long n)
{
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return Scalar(mpq_class(f));
}

Scalar gen_binomial(const Scalar& r, long i)
{
    if (i < 0) {
        return Scalar(0);
    }
    Scalar acc(1);
    for (long t = 0; t < i; ++t) {
        acc *= (r - Scalar(t));
    }
    return acc / factorial(i);
}

Scalar exp(const Scalar& s)
{
    if (s.is_exact() && s.is_zero()) {
        return Scalar(1);
    }
    return Scalar::real(std::exp(s.to_double()));
}

Scalar log(const Scalar& s)
{
    if (s.sign() <= 0) {
        throw domain_error("logarithm of a non-positive number");
    }
    if (s.is_exact() && s == Scalar(1)) {
        return Scalar(0);
    }
    return Scalar::real(std::log(s.to_double()));
}

Scalar sin(const Scalar& s)
{
    if (s.is_exact() && s.is_zero()) {
        return Scalar(0);
    }
    return Scalar::real(std::sin(s.to_double()));
}

Scalar cos(const Scalar& s)
{
    if (s.is_exact() && s.is_zero()) {
        return Scalar(1);
    }
    return Scalar::real(std::cos(s.to_double()));
}

Scalar discrepancy(const Scalar& a, const Scalar& b)
{
    if (a.is_exact() && b.is_exact()) {
        return abs(a - b);
    }
    double x = a.to_double();
    double y = b.to_double();
    if (!std::isfinite(x) || !std::isfinite(y)) {
        return Scalar::real(std::numeric_limits<double>::infinity());
    }
    Tolerance tol;
    double scale = std::max({std::abs(x), std::abs(y), tol.absolute / tol.relative});
    return Scalar::real(std::abs(x - y) / scale);
}

bool approx_equal(const Scalar& a, const Scalar& b, Tolerance tol)
{
    if (a.is_exact() && b.is_exact()) {
        return a == b;
    }
    double x = a.to_double();
    double y = b.to_double();
    double diff = std::abs(x - y);
    return diff <= std::max(tol.relative * std::max(std::abs(x), std::abs(y)), tol.absolute);
}

bool residual_ok(const Scalar& residual, Tolerance tol)
{
    if (residual.is_exact()) {
        return residual.is_zero();
    }
    double r = residual.to_double();
    return std::isfinite(r) && r <= tol.relative;
}

} // namespace schwarz
