#pragma once

#include "schwarz/cocycles.hpp"
#include "schwarz/linear.hpp"
#include "schwarz/modules.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace schwarz {

// ---------------------------------------------------------------------------
// Bilinear pairings and transvectants

/// J(phi, psi) = sum_i c_i phi^(i) psi^(m-i) on F_lambda1 x F_lambda2, landing
/// in weight lambda1 + lambda2 + m.
struct BilinearPairing {
    int m = 0;
    Scalar lambda1;
    Scalar lambda2;
    Vector coeffs;

    Scalar target() const { return lambda1 + lambda2 + Scalar(m); }
};

/// Scaled so the first nonzero coefficient is 1 (unchanged if all are zero).
BilinearPairing normalized(BilinearPairing j);

/// Gordan's transvectant:
///   c_i = (-1)^i m! C(2 lambda1 + m - 1, m - i) C(2 lambda2 + m - 1, i).
BilinearPairing transvectant(int m, const Scalar& lambda1, const Scalar& lambda2);
/// The transvectant of two densities as a density of weight lambda1 + lambda2 + m.
Density transvectant(int m, const Density& phi, const Density& psi);

/// Jet of J(phi, psi); output order min(phi, psi order) - m.
Jet apply_pairing(const BilinearPairing& j, const Jet& phi, const Jet& psi);

/// Largest residual of L_Z J(phi, psi) - J(L_Z phi, psi) - J(phi, L_Z psi) over
/// the samples.
Scalar lie_invariance_residual(const BilinearPairing& j, const VectorField& z, const Expr& phi, const Expr& psi,
                               const std::vector<Scalar>& samples, int order);
/// The same residual for Z in {d/dx, x d/dx, x^2 d/dx} with generic phi, psi:
/// the largest coefficient left over, so 0 means exactly invariant.
Scalar sl2_invariance_defect(const BilinearPairing& j);

/// Solution space of the sl(2)-invariance equations for pairings on
/// (F_-1, F_lambda) of order m. With vanish_on_sl2 the pairing must also vanish
/// when its first argument is in sl(2), i.e. c_0 = c_1 = c_2 = 0.
struct PairingSolution {
    std::vector<BilinearPairing> basis;

    std::size_t dimension() const { return basis.size(); }
    /// The normalized pairing when the space is one-dimensional.
    std::optional<BilinearPairing> unique() const;
};

PairingSolution solve_invariant_pairing(int m, const Scalar& lambda, bool vanish_on_sl2);

/// Residual of the Lie algebra cocycle condition for c(X) = J(X, .) on
/// F_lambda (J on (F_-1, F_lambda)):
///   L_X c(Y) - c(Y) L_X - L_Y c(X) + c(X) L_Y - c([X, Y]),
/// applied to each probe density and sampled.
Scalar lie_cocycle_residual(const BilinearPairing& j, const VectorField& x, const VectorField& y,
                            const std::vector<Expr>& probes, const std::vector<Scalar>& samples, int order);
/// The cocycle condition for generic X, Y, phi; 0 means exactly a cocycle.
Scalar lie_cocycle_defect(const BilinearPairing& j);
/// Whether some nonzero sl(2)-invariant pairing of order m vanishing on sl(2)
/// is a cocycle on F_lambda.
bool is_lie_cocycle(int m, const Scalar& lambda);

// ---------------------------------------------------------------------------
// Equivariant symbol map on D^k_{nu,rho}. Slot i carries weight rho - nu - i
// and ā_i = sum_{j >= i} alpha[i][j] a_j^(j-i).

/// Throws domain_error when rho - nu is in {1, 3/2, 2, ..., k}.
void require_nonresonant(int k, const Scalar& nu, const Scalar& rho);

/// The binomial closed form C(j,i) C(2ν+i, 2ν+j) / C(2δ-i-j-1, 2δ-2i-1) with
/// δ = rho - nu, continued through the Gamma function:
///   alpha[i][j] = C(j,i) (2δ-i-j)_d / (2ν+i+1)_d,  d = j - i,
/// where (x)_d is the rising factorial.
Matrix symbol_alpha(int k, const Scalar& nu, const Scalar& rho);
/// The coefficients forced by sl(2)-equivariance, solved exactly with unit diagonal.
Matrix symbol_alpha_solved(int k, const Scalar& nu, const Scalar& rho);

/// Per row, the factor r with a = r b on the strictly upper part of the row,
/// or nothing if the rows are not proportional. Rows with no off-diagonal
/// entries report 1.
std::vector<std::optional<Scalar>> row_proportionality(const Matrix& a, const Matrix& b);

struct SymbolTuple {
    Scalar nu;
    Scalar rho;
    std::vector<Jet> slots;

    int order() const { return static_cast<int>(slots.size()) - 1; }
    Scalar weight(int i) const { return rho - nu - Scalar(i); }
};

/// Output jet order is the operator jet order minus k.
SymbolTuple symbol_map(const OperatorJets& a, const Matrix& alpha);
OperatorJets symbol_inverse(const SymbolTuple& t, const Matrix& alpha);
/// Symbolic version: the slot profiles as expressions.
std::vector<Density> symbol_map(const LinDiffOp& a, const Matrix& alpha);

/// The tuple pushed through f: sigma o f_{nu,rho} o sigma^-1, sampled at f(p),
/// next to the slot-wise density pushforward f*(ā_i) and the difference.
///
/// Every quantity omits the common factor ((f^-1)')^frac(rho - nu) at f(p), so
/// the computation stays rational for fractional weights. Linear relations
/// between slots are unchanged by this.
struct SymbolAction {
    SymbolTuple image;
    SymbolTuple diagonal;
    std::vector<Jet> residuals;
};

SymbolAction act_on_symbols(const Matrix& alpha, const SymbolTuple& t, const Jet& f);
/// The common omitted exponent frac(rho - nu).
Scalar omitted_symbol_power(const Scalar& nu, const Scalar& rho);

/// Least-squares fit of target = sum_b c_b basis_b over all jet entries of all
/// samples. Exact data gets an exact solve; `residual` is 0 iff the fit is exact.
struct ConstantFit {
    Vector constants;
    Scalar residual;
    /// False when the basis vanishes on every sample.
    bool determined = false;
};

ConstantFit fit_constants(const std::vector<std::vector<Jet>>& basis, const std::vector<Jet>& target);

/// Contribution of a single source slot to a lower slot:
///   gap 0, 1: zero
///   gap 2: c S(f^-1) f*(ā_src)
///   gap 3: c T_w(f^-1) f*(ā_src)
///   gap 4: b1 (S phi'' - (2w+1)/2 S' phi' + w(2w+1)/10 S'' phi) + b2 S^2 phi
/// with w the weight of the source slot and phi = f*(ā_src).
struct PatternFit {
    int source = 0;
    int slot = 0;
    std::string kind;
    ConstantFit fit;
};

/// Checks every source/target slot pair with target >= lowest_slot and gap <= 4,
/// using the given maps and samples, with each source slot filled by `profile`.
std::vector<PatternFit> fit_symbol_pattern(int k, const Scalar& nu, const Scalar& rho, int lowest_slot,
                                           const Expr& profile, const std::vector<Diffeo>& maps,
                                           const std::vector<Scalar>& samples, int order);

/// 2 lambda (mu - 1) / (2(mu - lambda) - 3): the second-order symbol constant
/// on D^2_{lambda,mu} when coupled to f*(S(f)) = -S(f^-1).
Scalar beta_constant(const Scalar& lambda, const Scalar& mu);

// ---------------------------------------------------------------------------
// Extensions of density modules by a cocycle

/// F_source ⊕ F_target with f acting by
///   (phi, psi) -> (f*phi, f*psi + gamma C(f^-1)(f*phi)),
/// where C = family, so that the action is a homomorphism.
struct ExtensionModule {
    CocycleFamily family;
    Scalar gamma;

    Scalar lambda() const { return family.source(); }
    Scalar mu() const { return family.target(); }
};

/// (phi, psi) and f at p; the result is at f(p).
std::pair<Jet, Jet> extension_action(const ExtensionModule& e, const Jet& f, const Jet& phi, const Jet& psi);
/// Largest residual of rho_f o rho_g - rho_{f o g} over samples.
Scalar extension_homomorphism_residual(const ExtensionModule& e, const Diffeo& f, const Diffeo& g, const Expr& phi,
                                       const Expr& psi, const std::vector<Scalar>& samples, int order);

/// Real roots of 3 nu^2 + 3 nu (lambda + 2) + lambda + 2 = 0, exact when rational.
std::vector<Scalar> locked_third_order_nu(const Scalar& lambda);

enum class SubmoduleExample { second_order, third_order };

struct SubmoduleReport {
    Scalar nu;
    /// How far the pushed operator is from satisfying the lock equations.
    Scalar closure_residual;
    /// The top symbol must transform as a plain density.
    Scalar top_residual;
    /// Fit of the bottom symbol against the extension term.
    ConstantFit gamma;
};

/// Operators a_k d^k + (locked middle terms) + a_0 in D^k_{nu, nu+lambda+k}
/// with k = 2 (locks: ā_1 = 0) or 3 (ā_2 = ā_1 = 0, nu a root above).
/// Pushes them by each map at the samples and checks closure and the induced
/// extension action with C = S_lambda or T_lambda.
SubmoduleReport submodule_check(SubmoduleExample example, const Scalar& lambda, const Scalar& nu,
                                const std::vector<Diffeo>& maps, const std::vector<Scalar>& samples, int order);

} // namespace schwarz
