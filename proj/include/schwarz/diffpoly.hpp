#pragma once

#include "schwarz/linear.hpp"

#include <compare>
#include <map>
#include <vector>

namespace schwarz {

/// The derivative f_fn^(order) of a generic function.
struct Factor {
    int fn;
    int order;
    auto operator<=>(const Factor&) const = default;
};

using Monomial = std::vector<Factor>;

/// A differential polynomial in generic functions, evaluated at a point where
/// every derivative value is an independent indeterminate. Coefficients are
/// affine in a fixed set of unknowns: entry 0 is the constant part, entry u+1
/// multiplies unknown u.
///
/// Identities without explicit x dependence hold everywhere iff they hold at
/// one point, which is how invariance and cocycle conditions are decided
/// exactly.
class DiffPoly {
public:
    explicit DiffPoly(std::size_t unknowns = 0) : unknowns_(unknowns) {}

    static DiffPoly function(int fn, int order, std::size_t unknowns);
    static DiffPoly constant(const Scalar& c, std::size_t unknowns);

    std::size_t unknowns() const { return unknowns_; }
    bool is_known() const;
    bool is_zero() const { return terms_.empty(); }
    const std::map<Monomial, Vector>& terms() const { return terms_; }

    /// This (known) polynomial times unknown u.
    DiffPoly times_unknown(std::size_t u) const;
    DiffPoly derive(int times = 1) const;
    /// Replace f_fn^(r) by values[r] (zero beyond the list).
    DiffPoly substitute(int fn, const std::vector<Scalar>& values) const;
    /// The cofactor of f_fn^(order) among monomials linear in f_fn.
    DiffPoly coefficient_of(int fn, int order) const;
    /// Fix unknown u to a value.
    DiffPoly assign(std::size_t u, const Scalar& value) const;

    DiffPoly& operator+=(const DiffPoly& o);
    DiffPoly& operator-=(const DiffPoly& o);
    DiffPoly& operator*=(const Scalar& s);
    friend DiffPoly operator+(DiffPoly a, const DiffPoly& b) { return a += b; }
    friend DiffPoly operator-(DiffPoly a, const DiffPoly& b) { return a -= b; }
    friend DiffPoly operator*(DiffPoly a, const Scalar& s) { return a *= s; }
    friend DiffPoly operator*(const Scalar& s, DiffPoly a) { return a *= s; }
    /// At least one side must be known.
    friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b);

private:
    void add_term(const Monomial& m, const Vector& c);

    std::size_t unknowns_;
    std::map<Monomial, Vector> terms_;
};

/// One linear equation per monomial: sum_u c_{u+1} x_u = -c_0.
void append_equations(const DiffPoly& p, LinearSystem& sys);

} // namespace schwarz
