#pragma once

#include <gmpxx.h>

#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace schwarz {

// Raised for poles, critical points, branch cuts and other values outside
// the domain of an operation.
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A number that is either an exact rational (always canonical: lowest terms,
// positive denominator) or a double. Arithmetic between two rationals stays
// rational; anything touching a double becomes a double.
class Scalar {
public:
    Scalar() : value_(mpq_class(0)) {}
    Scalar(int v) : value_(mpq_class(v)) {}
    Scalar(long v) : value_(mpq_class(v)) {}
    Scalar(long long v);
    Scalar(mpq_class v);

    static Scalar rational(long num, long den);
    static Scalar real(double v) { return Scalar(Tag{}, v); }
    // Accepts "p", "p/q", "-p/q" (ASCII or U+2212 minus) and plain decimals.
    static Scalar parse(std::string_view text);

    bool is_exact() const { return std::holds_alternative<mpq_class>(value_); }
    const mpq_class& rational() const;
    double to_double() const;

    bool is_zero() const;
    bool is_integer() const;
    int sign() const;

    Scalar as_float() const { return real(to_double()); }

    // "p/q" for rationals, 15 significant digits for floats.
    std::string to_string() const;

    Scalar operator-() const;
    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Scalar& o);

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }

    // Exact comparison for two rationals, numeric comparison otherwise.
    friend bool operator==(const Scalar& a, const Scalar& b);
    friend std::partial_ordering operator<=>(const Scalar& a, const Scalar& b);

private:
    struct Tag {};
    Scalar(Tag, double v) : value_(v) {}

    std::variant<mpq_class, double> value_;
};

Scalar abs(const Scalar& s);
Scalar pow(const Scalar& base, long exponent);
// Exact whenever base^exponent is rational (integer exponent, or a rational
// perfect power); falls back to double otherwise.
Scalar pow(const Scalar& base, const Scalar& exponent);
Scalar factorial(long n);
// Falling factorial r(r-1)...(r-i+1)/i!, for any rational or real r.
Scalar gen_binomial(const Scalar& r, long i);

// Elementary functions, exact at the special points where the result is
// rational (exp 0, log 1, sin 0, cos 0), double elsewhere.
Scalar exp(const Scalar& s);
Scalar log(const Scalar& s);
Scalar sin(const Scalar& s);
Scalar cos(const Scalar& s);

struct Tolerance {
    double relative = 1e-8;
    double absolute = 1e-12;
};

// Size of a - b: the exact |a - b| when both are rational, otherwise the
// difference relative to max(|a|, |b|, 1).
Scalar discrepancy(const Scalar& a, const Scalar& b);
bool approx_equal(const Scalar& a, const Scalar& b, Tolerance tol = {});
// A residual passes if it is exactly zero or, on the float path, below the
// relative tolerance.
bool residual_ok(const Scalar& residual, Tolerance tol = {});

Scalar max(const Scalar& a, const Scalar& b);

} // namespace schwarz
