#pragma once

#include "schwarz/scalar.hpp"

#include <vector>

namespace schwarz {

/// Truncated jet of a smooth function at a base point x0.
///
/// Entry i holds the derivative value f^(i)(x0) (not the Taylor coefficient
/// f^(i)(x0)/i!). A jet is either entirely exact or entirely float: if any
/// entry is a double the whole jet is demoted on construction.
///
/// Binary operations truncate to the smaller order of their operands, so an
/// operation that consumes d derivatives needs inputs of order N + d to
/// produce order N.
class Jet {
public:
    Jet() = default;
    Jet(Scalar base, std::vector<Scalar> derivs);

    static Jet constant(const Scalar& base, const Scalar& value, int order);
    static Jet zero(const Scalar& base, int order) { return constant(base, Scalar(0), order); }
    /// The jet of x itself: (x0, 1, 0, ...).
    static Jet identity(const Scalar& base, int order);
    /// The jet of (x - x0)^power.
    static Jet shifted_power(const Scalar& base, int power, int order);
    static Jet from_taylor(const Scalar& base, const std::vector<Scalar>& coeffs);

    const Scalar& base() const { return base_; }
    int order() const { return static_cast<int>(derivs_.size()) - 1; }
    const Scalar& value() const { return derivs_.front(); }
    const Scalar& operator[](int i) const { return derivs_.at(static_cast<std::size_t>(i)); }
    const std::vector<Scalar>& derivs() const { return derivs_; }
    bool is_exact() const;

    std::vector<Scalar> taylor() const;
    Jet truncated(int order) const;
    Jet as_float() const;

    Jet operator-() const;
    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(const Jet& o);
    Jet& operator*=(const Scalar& s);

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(Jet a, const Jet& b) { return a *= b; }
    friend Jet operator*(Jet a, const Scalar& s) { return a *= s; }
    friend Jet operator*(const Scalar& s, Jet a) { return a *= s; }
    friend Jet operator/(const Jet& a, const Jet& b);
    friend Jet operator/(Jet a, const Scalar& s);
    friend Jet operator+(Jet a, const Scalar& s);
    friend Jet operator-(Jet a, const Scalar& s);

    friend bool operator==(const Jet& a, const Jet& b);

private:
    Scalar base_;
    std::vector<Scalar> derivs_{Scalar(0)};
};

bool same_point(const Scalar& a, const Scalar& b);

Jet derive(const Jet& a);
/// Jet at inner.base() of outer(inner(x)). Requires outer.base() == inner.value().
Jet compose(const Jet& outer, const Jet& inner);
/// Jet of the compositional inverse at f.value(). Requires f'(x0) != 0.
Jet invert(const Jet& f);
Jet reciprocal(const Jet& f);
Jet pow(const Jet& f, const Scalar& exponent);
Jet exp(const Jet& f);
Jet log(const Jet& f);
Jet sin(const Jet& f);
Jet cos(const Jet& f);
Jet tan(const Jet& f);
Jet sqrt(const Jet& f);

/// Largest entrywise discrepancy over the shared order.
Scalar max_discrepancy(const Jet& a, const Jet& b);

} // namespace schwarz
