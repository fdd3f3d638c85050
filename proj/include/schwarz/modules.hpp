#pragma once

#include "schwarz/expr.hpp"
#include "schwarz/jet.hpp"

#include <vector>

namespace schwarz {

/// phi(x) (dx)^weight.
struct Density {
    Scalar weight;
    Expr profile;
};

/// X(x) d/dx.
struct VectorField {
    Expr profile;
};

/// a_k d^k/dx^k + ... + a_0 acting from weight `source` to weight `target`.
/// coeffs[i] multiplies the i-th derivative.
struct LinDiffOp {
    Scalar source;
    Scalar target;
    std::vector<Expr> coeffs;

    int order() const { return static_cast<int>(coeffs.size()) - 1; }
};

/// An operator sampled at one point: the jets of its coefficients there.
struct OperatorJets {
    Scalar source;
    Scalar target;
    std::vector<Jet> coeffs;

    int order() const { return static_cast<int>(coeffs.size()) - 1; }
    const Scalar& base() const { return coeffs.front().base(); }
    /// Smallest jet order among the coefficients.
    int jet_order() const;
    bool is_exact() const;
    OperatorJets truncated(int n) const;
};

OperatorJets operator+(const OperatorJets& a, const OperatorJets& b);
OperatorJets operator-(const OperatorJets& a, const OperatorJets& b);
OperatorJets operator*(const Scalar& s, const OperatorJets& a);
/// Largest coefficient discrepancy over shared slots and orders; missing
/// slots count against zero.
Scalar max_discrepancy(const OperatorJets& a, const OperatorJets& b);
bool is_zero(const OperatorJets& a);

OperatorJets jets_at(const LinDiffOp& a, const Scalar& x0, int order);

/// Jet of sum a_i phi^(i). Needs phi to order N + k for output order N.
Jet apply_op(const OperatorJets& a, const Jet& phi);
Jet apply_op(const LinDiffOp& a, const Density& phi, const Scalar& x0, int order);

/// Jet at x0 of (phi o g) (g')^weight, given phi at g(x0) and g at x0.
///
/// A nonzero `omitted_power` divides the result by the constant g'(x0)^omitted_power.
/// Comparisons between quantities that share that factor use it to stay exact
/// when the weight is fractional.
Jet pull_density(const Jet& phi, const Jet& g, const Scalar& weight, const Scalar& omitted_power = Scalar(0));
/// Jet at f(p) of the pushforward (phi o f^-1) ((f^-1)')^weight, given phi and f at p.
Jet push_density(const Jet& phi, const Jet& f, const Scalar& weight, const Scalar& omitted_power = Scalar(0));
/// Pushforward of a density by f, sampled at x0 (the preimage is found with
/// invert_diffeo_point).
Jet act_density(const Diffeo& f, const Density& phi, const Scalar& x0, int order);

Density lie_derivative(const VectorField& x, const Density& phi);
VectorField commutator(const VectorField& x, const VectorField& y);
/// X phi' + weight X' phi on jets.
Jet lie_derivative(const Jet& x, const Jet& phi, const Scalar& weight);

/// Conjugation by pullbacks: g*_target o A o (g*_source)^-1, given A sampled at
/// g(x0) and g at x0; the result is sampled at x0. Output jet order is
/// min(A order, g order - 1) - k.
/// `omitted_power` works as in pull_density.
OperatorJets pullback_op(const OperatorJets& a, const Jet& g, const Scalar& omitted_power = Scalar(0));
/// The pushforward action of f on A, given A and f at p; sampled at f(p).
OperatorJets push_op(const OperatorJets& a, const Jet& f, const Scalar& omitted_power = Scalar(0));
/// The action of f on A sampled at x0.
OperatorJets act_op(const Diffeo& f, const LinDiffOp& a, const Scalar& x0, int order);
/// The same action sampled at f(s); exact whenever s and f are rational.
OperatorJets act_op_at_preimage(const Diffeo& f, const LinDiffOp& a, const Scalar& s, int order,
                                const Scalar& omitted_power = Scalar(0));

} // namespace schwarz
