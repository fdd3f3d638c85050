#pragma once

#include "schwarz/modules.hpp"

#include <string>
#include <utility>
#include <vector>

namespace schwarz {

/// S(f) = f'''/f' - (3/2)(f''/f')^2. Consumes three orders of f.
Jet schwarzian(const Jet& f);
Jet schwarzian(const Diffeo& f, const Scalar& x0, int order);

enum class Family { S, T, U, V0, Vm4, LOG0, LOG1 };

struct CocycleFamily {
    Family tag;
    Scalar lambda{0};

    Scalar source() const;
    Scalar target() const;
    int order() const;
    /// Orders of f consumed by evaluate_cocycle.
    int demand() const;
    /// True for the families that vanish on Möbius maps.
    bool vanishes_on_mobius() const;
    std::string name() const;
};

Family parse_family(const std::string& name);
std::string family_name(Family f);

/// Operator-valued cocycle C(f) sampled at f.base(). Output jet order is
/// f.order() - demand().
OperatorJets evaluate_cocycle(const CocycleFamily& c, const Jet& f);
OperatorJets evaluate_cocycle(const CocycleFamily& c, const Diffeo& f, const Scalar& x0, int order);

/// The Bol operator d^k/dx^k from weight (1-k)/2 to (1+k)/2.
LinDiffOp bol(int k);

/// g_{λ,μ}(B) - B, with g acting by conjugation with pullbacks.
OperatorJets coboundary(const LinDiffOp& b, const Jet& g);
OperatorJets coboundary(const LinDiffOp& b, const Diffeo& g, const Scalar& x0, int order);

/// Residual of C(f o g) = g_{λ,μ}(C(f)) + C(g) at x0, given jets of f at g(x0)
/// and g at x0.
Scalar cocycle_residual(const CocycleFamily& c, const Jet& f, const Jet& g);
/// Largest residual over the samples (those where both maps are defined).
Scalar cocycle_residual(const CocycleFamily& c, const Diffeo& f, const Diffeo& g, const std::vector<Scalar>& samples,
                        int order);

/// Power-series solutions of 2 psi'' + u psi = 0 seeded (1, 0) and (0, 1).
/// u must have jet order >= N - 2 for output order N.
std::pair<Jet, Jet> sl_solve(const Jet& u, int order);
/// S(psi1/psi2).
Jet sl_potential(const Jet& psi1, const Jet& psi2);

/// Coefficient jets of the canonical forms at one point:
///   k = 2: 2 d^2 + u
///   k = 3: d^3 + 4u d + 2u' + v
///   k = 4: d^4 + 5u d^2 + 5u' d + (3/2)u'' + (9/4)u^2 + v d + (1/2)v' + w
/// Missing potentials are zero. Output order is min potential order - (k - 2).
OperatorJets canonical_form(int k, const std::vector<Jet>& potentials);
/// Source and target weights of the canonical form of order k.
std::pair<Scalar, Scalar> canonical_weights(int k);

/// Residual of g_{λ,μ}(A_{u,v,w}) = A_{g*u + c_k S(g), g*v, g*w} with c_2 = c_4 = 1,
/// c_3 = 1/2, over the samples.
Scalar canonical_form_residual(int k, const std::vector<Expr>& potentials, const Diffeo& g,
                               const std::vector<Scalar>& samples, int order);

} // namespace schwarz
