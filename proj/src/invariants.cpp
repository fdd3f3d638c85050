#include "schwarz/invariants.hpp"

#include "schwarz/diffpoly.hpp"

#include <algorithm>
#include <stdexcept>

namespace schwarz {

namespace {

Expr nth_derivative(Expr e, int n)
{
    for (int i = 0; i < n; ++i) {
        e = differentiate(e);
    }
    return e;
}

Jet nth_derivative(Jet j, int n)
{
    for (int i = 0; i < n; ++i) {
        j = derive(j);
    }
    return j;
}

Scalar rising(const Scalar& x, int n)
{
    Scalar r(1);
    for (int i = 0; i < n; ++i) {
        r *= x + Scalar(i);
    }
    return r;
}

Scalar largest_coefficient(const DiffPoly& p)
{
    Scalar worst(0);
    for (const auto& [m, c] : p.terms()) {
        for (const auto& v : c) {
            worst = max(worst, abs(v));
        }
    }
    return worst;
}

// Values at 0 of the derivatives of 1, x and x^2.
const std::vector<std::vector<Scalar>>& sl2_basis_values()
{
    static const std::vector<std::vector<Scalar>> values{{Scalar(1)}, {Scalar(0), Scalar(1)},
                                                         {Scalar(0), Scalar(0), Scalar(2)}};
    return values;
}

// sum_i c_i P^(i) Q^(m-i); the c_i are known constants or unknowns 0..m.
DiffPoly pairing_poly(int m, const Vector* known, std::size_t unknowns, const DiffPoly& p, const DiffPoly& q)
{
    DiffPoly out(unknowns);
    for (int i = 0; i <= m; ++i) {
        DiffPoly term = p.derive(i) * q.derive(m - i);
        if (known != nullptr) {
            out += term * (*known)[static_cast<std::size_t>(i)];
        } else {
            out += term.times_unknown(static_cast<std::size_t>(i));
        }
    }
    return out;
}

DiffPoly lie_poly(const DiffPoly& z, const DiffPoly& phi, const Scalar& weight)
{
    return z * phi.derive() + (z.derive() * phi) * weight;
}

// L_Z J(phi, psi) - J(L_Z phi, psi) - J(phi, L_Z psi) for Z = f0, phi = f1, psi = f2.
DiffPoly invariance_poly(int m, const Scalar& l1, const Scalar& l2, const Vector* known, std::size_t unknowns)
{
    DiffPoly z = DiffPoly::function(0, 0, unknowns);
    DiffPoly phi = DiffPoly::function(1, 0, unknowns);
    DiffPoly psi = DiffPoly::function(2, 0, unknowns);
    DiffPoly j = pairing_poly(m, known, unknowns, phi, psi);
    return lie_poly(z, j, l1 + l2 + Scalar(m)) - pairing_poly(m, known, unknowns, lie_poly(z, phi, l1), psi) -
           pairing_poly(m, known, unknowns, phi, lie_poly(z, psi, l2));
}

// The cocycle condition for c(X) = J(X, .) with X = f0, Y = f1, phi = f2.
DiffPoly cocycle_poly(int m, const Scalar& lambda, const Vector* known, std::size_t unknowns)
{
    DiffPoly x = DiffPoly::function(0, 0, unknowns);
    DiffPoly y = DiffPoly::function(1, 0, unknowns);
    DiffPoly phi = DiffPoly::function(2, 0, unknowns);
    Scalar mu = lambda - Scalar(1) + Scalar(m);
    auto c = [&](const DiffPoly& v, const DiffPoly& f) { return pairing_poly(m, known, unknowns, v, f); };
    DiffPoly bracket = x * y.derive() - x.derive() * y;
    return lie_poly(x, c(y, phi), mu) - c(y, lie_poly(x, phi, lambda)) - lie_poly(y, c(x, phi), mu) +
           c(x, lie_poly(y, phi, lambda)) - c(bracket, phi);
}

void append_sl2_equations(const DiffPoly& p, LinearSystem& sys)
{
    for (const auto& values : sl2_basis_values()) {
        append_equations(p.substitute(0, values), sys);
    }
}

void append_vanishing(int m, std::size_t unknowns, LinearSystem& sys)
{
    for (int i = 0; i <= std::min(m, 2); ++i) {
        Vector row(unknowns, Scalar(0));
        row[static_cast<std::size_t>(i)] = Scalar(1);
        sys.matrix.push_back(std::move(row));
        sys.rhs.emplace_back(0);
    }
}

std::vector<Vector> homogeneous_solutions(const LinearSystem& sys)
{
    LinearSolution sol = solve_linear(sys);
    if (sol.status == SolveStatus::underdetermined) {
        return sol.null_basis;
    }
    return {};
}

} // namespace

BilinearPairing normalized(BilinearPairing j)
{
    auto it = std::find_if(j.coeffs.begin(), j.coeffs.end(), [](const Scalar& s) { return !s.is_zero(); });
    if (it != j.coeffs.end()) {
        Scalar lead = *it;
        for (auto& c : j.coeffs) {
            c /= lead;
        }
    }
    return j;
}

BilinearPairing transvectant(int m, const Scalar& lambda1, const Scalar& lambda2)
{
    if (m < 0) {
        throw std::invalid_argument("transvectant order must be nonnegative");
    }
    BilinearPairing j{m, lambda1, lambda2, {}};
    Scalar mf = factorial(m);
    for (int i = 0; i <= m; ++i) {
        Scalar sign = i % 2 == 0 ? Scalar(1) : Scalar(-1);
        j.coeffs.push_back(sign * mf * gen_binomial(Scalar(2) * lambda1 + Scalar(m - 1), m - i) *
                           gen_binomial(Scalar(2) * lambda2 + Scalar(m - 1), i));
    }
    return j;
}

Density transvectant(int m, const Density& phi, const Density& psi)
{
    BilinearPairing j = transvectant(m, phi.weight, psi.weight);
    Expr sum = Expr::number(Scalar(0));
    for (int i = 0; i <= m; ++i) {
        const Scalar& c = j.coeffs[static_cast<std::size_t>(i)];
        if (c.is_zero()) {
            continue;
        }
        sum = sum + Expr::number(c) * nth_derivative(phi.profile, i) * nth_derivative(psi.profile, m - i);
    }
    return {j.target(), sum};
}

Jet apply_pairing(const BilinearPairing& j, const Jet& phi, const Jet& psi)
{
    int n = std::min(phi.order(), psi.order()) - j.m;
    if (n < 0) {
        throw std::invalid_argument("pairing of order " + std::to_string(j.m) + " needs jets of at least that order");
    }
    Jet acc = Jet::zero(phi.base(), n);
    for (int i = 0; i <= j.m; ++i) {
        const Scalar& c = j.coeffs[static_cast<std::size_t>(i)];
        if (!c.is_zero()) {
            acc += nth_derivative(phi, i) * nth_derivative(psi, j.m - i) * c;
        }
    }
    return acc;
}

Scalar lie_invariance_residual(const BilinearPairing& j, const VectorField& z, const Expr& phi, const Expr& psi,
                               const std::vector<Scalar>& samples, int order)
{
    Scalar worst(0);
    int n = order + j.m + 1;
    for (const auto& s : samples) {
        Jet zj, pj, qj;
        try {
            zj = jet_at(z.profile, s, n);
            pj = jet_at(phi, s, n);
            qj = jet_at(psi, s, n);
        } catch (const domain_error&) {
            continue;
        }
        Jet lhs = lie_derivative(zj, apply_pairing(j, pj, qj), j.target());
        Jet rhs = apply_pairing(j, lie_derivative(zj, pj, j.lambda1), qj) +
                  apply_pairing(j, pj, lie_derivative(zj, qj, j.lambda2));
        worst = max(worst, max_discrepancy(lhs, rhs));
    }
    return worst;
}

Scalar sl2_invariance_defect(const BilinearPairing& j)
{
    DiffPoly p = invariance_poly(j.m, j.lambda1, j.lambda2, &j.coeffs, 0);
    Scalar worst(0);
    for (const auto& values : sl2_basis_values()) {
        worst = max(worst, largest_coefficient(p.substitute(0, values)));
    }
    return worst;
}

std::optional<BilinearPairing> PairingSolution::unique() const
{
    if (basis.size() != 1) {
        return std::nullopt;
    }
    return basis.front();
}

PairingSolution solve_invariant_pairing(int m, const Scalar& lambda, bool vanish_on_sl2)
{
    if (m < 0) {
        throw std::invalid_argument("pairing order must be nonnegative");
    }
    auto unknowns = static_cast<std::size_t>(m + 1);
    LinearSystem sys;
    append_sl2_equations(invariance_poly(m, Scalar(-1), lambda, nullptr, unknowns), sys);
    if (vanish_on_sl2) {
        append_vanishing(m, unknowns, sys);
    }
    PairingSolution out;
    for (auto& v : homogeneous_solutions(sys)) {
        out.basis.push_back(normalized(BilinearPairing{m, Scalar(-1), lambda, std::move(v)}));
    }
    return out;
}

Scalar lie_cocycle_residual(const BilinearPairing& j, const VectorField& x, const VectorField& y,
                            const std::vector<Expr>& probes, const std::vector<Scalar>& samples, int order)
{
    const Scalar& lambda = j.lambda2;
    Scalar mu = j.target();
    VectorField bracket = commutator(x, y);
    int n = order + j.m + 2;
    Scalar worst(0);
    for (const auto& s : samples) {
        Jet xj, yj, bj;
        try {
            xj = jet_at(x.profile, s, n);
            yj = jet_at(y.profile, s, n);
            bj = jet_at(bracket.profile, s, n);
        } catch (const domain_error&) {
            continue;
        }
        for (const auto& probe : probes) {
            Jet pj;
            try {
                pj = jet_at(probe, s, n);
            } catch (const domain_error&) {
                continue;
            }
            Jet lhs = lie_derivative(xj, apply_pairing(j, yj, pj), mu) -
                      apply_pairing(j, yj, lie_derivative(xj, pj, lambda)) -
                      lie_derivative(yj, apply_pairing(j, xj, pj), mu) +
                      apply_pairing(j, xj, lie_derivative(yj, pj, lambda));
            worst = max(worst, max_discrepancy(lhs, apply_pairing(j, bj, pj)));
        }
    }
    return worst;
}

Scalar lie_cocycle_defect(const BilinearPairing& j)
{
    if (j.lambda1 != Scalar(-1)) {
        throw std::invalid_argument("a Lie algebra cocycle pairs vector fields (weight -1) with densities");
    }
    return largest_coefficient(cocycle_poly(j.m, j.lambda2, &j.coeffs, 0));
}

bool is_lie_cocycle(int m, const Scalar& lambda)
{
    auto unknowns = static_cast<std::size_t>(m + 1);
    LinearSystem sys;
    append_sl2_equations(invariance_poly(m, Scalar(-1), lambda, nullptr, unknowns), sys);
    append_vanishing(m, unknowns, sys);
    append_equations(cocycle_poly(m, lambda, nullptr, unknowns), sys);
    return !homogeneous_solutions(sys).empty();
}

void require_nonresonant(int k, const Scalar& nu, const Scalar& rho)
{
    Scalar twice = Scalar(2) * (rho - nu);
    if (twice.is_exact() && twice.is_integer() && twice >= Scalar(2) && twice <= Scalar(2 * k)) {
        throw domain_error("resonant weights: rho - nu = " + (rho - nu).to_string() + " for order " + std::to_string(k));
    }
}

Matrix symbol_alpha(int k, const Scalar& nu, const Scalar& rho)
{
    require_nonresonant(k, nu, rho);
    Scalar delta = rho - nu;
    auto n = static_cast<std::size_t>(k + 1);
    Matrix alpha(n, Vector(n, Scalar(0)));
    for (int i = 0; i <= k; ++i) {
        for (int j = i; j <= k; ++j) {
            int d = j - i;
            Scalar den = rising(Scalar(2) * nu + Scalar(i + 1), d);
            if (den.is_zero()) {
                throw domain_error("closed-form symbol coefficient has a pole at nu = " + nu.to_string());
            }
            alpha[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                gen_binomial(Scalar(j), i) * rising(Scalar(2) * delta - Scalar(i + j), d) / den;
        }
    }
    return alpha;
}

Matrix symbol_alpha_solved(int k, const Scalar& nu, const Scalar& rho)
{
    require_nonresonant(k, nu, rho);
    Scalar delta = rho - nu;
    auto n = static_cast<std::size_t>(k + 1);
    Matrix alpha(n, Vector(n, Scalar(0)));
    // Functions: X = 0, a_l = 1 + l, phi = k + 2.
    const int phi_id = k + 2;
    for (int i = 0; i <= k; ++i) {
        auto unknowns = static_cast<std::size_t>(k - i);
        DiffPoly x = DiffPoly::function(0, 0, unknowns);
        DiffPoly phi = DiffPoly::function(phi_id, 0, unknowns);
        auto coeff = [&](int l) { return DiffPoly::function(1 + l, 0, unknowns); };
        auto apply_a = [&](const DiffPoly& q) {
            DiffPoly out(unknowns);
            for (int l = 0; l <= k; ++l) {
                out += coeff(l) * q.derive(l);
            }
            return out;
        };
        // L_X A = L_X^rho o A - A o L_X^nu, coefficient by coefficient.
        DiffPoly lie = lie_poly(x, apply_a(phi), rho) - apply_a(lie_poly(x, phi, nu));
        std::vector<DiffPoly> lie_coeffs;
        for (int l = 0; l <= k; ++l) {
            lie_coeffs.push_back(lie.coefficient_of(phi_id, l));
        }
        auto row = [&](const std::vector<DiffPoly>& a) {
            DiffPoly out = a[static_cast<std::size_t>(i)];
            for (int j = i + 1; j <= k; ++j) {
                out += a[static_cast<std::size_t>(j)].derive(j - i).times_unknown(static_cast<std::size_t>(j - i - 1));
            }
            return out;
        };
        std::vector<DiffPoly> plain;
        for (int l = 0; l <= k; ++l) {
            plain.push_back(coeff(l));
        }
        DiffPoly symbol = row(plain);
        DiffPoly lhs(unknowns);
        lhs += lie_coeffs[static_cast<std::size_t>(i)];
        for (int j = i + 1; j <= k; ++j) {
            lhs += lie_coeffs[static_cast<std::size_t>(j)].derive(j - i).times_unknown(static_cast<std::size_t>(j - i - 1));
        }
        DiffPoly equation = lhs - (x * symbol.derive() + (x.derive() * symbol) * (delta - Scalar(i)));
        LinearSystem sys;
        append_sl2_equations(equation, sys);
        alpha[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = Scalar(1);
        if (unknowns == 0) {
            continue;
        }
        LinearSolution sol = solve_linear(sys);
        if (sol.status != SolveStatus::unique) {
            throw domain_error("equivariance does not determine the symbol coefficients at rho - nu = " +
                               delta.to_string());
        }
        for (int j = i + 1; j <= k; ++j) {
            alpha[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                sol.particular[static_cast<std::size_t>(j - i - 1)];
        }
    }
    return alpha;
}

std::vector<std::optional<Scalar>> row_proportionality(const Matrix& a, const Matrix& b)
{
    std::vector<std::optional<Scalar>> out;
    for (std::size_t i = 0; i < a.size(); ++i) {
        std::optional<Scalar> ratio;
        bool ok = true;
        for (std::size_t j = i + 1; j < a[i].size(); ++j) {
            if (!b[i][j].is_zero() && !ratio) {
                ratio = a[i][j] / b[i][j];
            }
        }
        Scalar r = ratio.value_or(Scalar(1));
        for (std::size_t j = i + 1; j < a[i].size(); ++j) {
            if (!approx_equal(a[i][j], r * b[i][j])) {
                ok = false;
            }
        }
        out.push_back(ok ? std::optional<Scalar>(r) : std::nullopt);
    }
    return out;
}

SymbolTuple symbol_map(const OperatorJets& a, const Matrix& alpha)
{
    int k = a.order();
    int n = a.jet_order() - k;
    if (n < 0) {
        throw std::invalid_argument("symbol map needs coefficient jets of order >= k");
    }
    SymbolTuple t{a.source, a.target, {}};
    for (int i = 0; i <= k; ++i) {
        Jet slot = Jet::zero(a.base(), n);
        for (int j = i; j <= k; ++j) {
            const Scalar& c = alpha[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (!c.is_zero()) {
                slot += nth_derivative(a.coeffs[static_cast<std::size_t>(j)], j - i) * c;
            }
        }
        t.slots.push_back(slot);
    }
    return t;
}

OperatorJets symbol_inverse(const SymbolTuple& t, const Matrix& alpha)
{
    int k = t.order();
    int n = t.slots.front().order();
    for (const auto& s : t.slots) {
        n = std::min(n, s.order());
    }
    n -= k;
    if (n < 0) {
        throw std::invalid_argument("inverse symbol map needs slot jets of order >= k");
    }
    std::vector<Jet> a(static_cast<std::size_t>(k + 1));
    for (int i = k; i >= 0; --i) {
        Jet acc = t.slots[static_cast<std::size_t>(i)];
        for (int j = i + 1; j <= k; ++j) {
            const Scalar& c = alpha[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (!c.is_zero()) {
                acc -= nth_derivative(a[static_cast<std::size_t>(j)], j - i) * c;
            }
        }
        a[static_cast<std::size_t>(i)] = acc;
    }
    OperatorJets out{t.nu, t.rho, {}};
    for (const auto& c : a) {
        out.coeffs.push_back(c.truncated(n));
    }
    return out;
}

std::vector<Density> symbol_map(const LinDiffOp& a, const Matrix& alpha)
{
    int k = a.order();
    std::vector<Density> out;
    for (int i = 0; i <= k; ++i) {
        Expr slot = a.coeffs[static_cast<std::size_t>(i)];
        for (int j = i + 1; j <= k; ++j) {
            const Scalar& c = alpha[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (!c.is_zero()) {
                slot = slot + Expr::number(c) * nth_derivative(a.coeffs[static_cast<std::size_t>(j)], j - i);
            }
        }
        out.push_back({a.target - a.source - Scalar(i), slot});
    }
    return out;
}

Scalar omitted_symbol_power(const Scalar& nu, const Scalar& rho)
{
    Scalar delta = rho - nu;
    if (!delta.is_exact()) {
        return Scalar(0);
    }
    mpq_class q = delta.rational();
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return Scalar(q - mpq_class(fl));
}

SymbolAction act_on_symbols(const Matrix& alpha, const SymbolTuple& t, const Jet& f)
{
    Scalar omit = omitted_symbol_power(t.nu, t.rho);
    OperatorJets a = symbol_inverse(t, alpha);
    OperatorJets b = push_op(a, f.truncated(std::min(f.order(), a.jet_order() + 1)), omit);
    SymbolAction out{symbol_map(b, alpha), {t.nu, t.rho, {}}, {}};
    int n = out.image.slots.front().order();
    Jet finv = invert(f);
    for (int i = 0; i <= t.order(); ++i) {
        Jet d = pull_density(t.slots[static_cast<std::size_t>(i)], finv, t.weight(i), omit).truncated(n);
        out.residuals.push_back(out.image.slots[static_cast<std::size_t>(i)] - d);
        out.diagonal.slots.push_back(std::move(d));
    }
    return out;
}

ConstantFit fit_constants(const std::vector<std::vector<Jet>>& basis, const std::vector<Jet>& target)
{
    const std::size_t nb = basis.size();
    Matrix rows;
    Vector rhs;
    bool exact = true;
    for (std::size_t s = 0; s < target.size(); ++s) {
        int n = target[s].order();
        for (const auto& b : basis) {
            n = std::min(n, b[s].order());
        }
        for (int e = 0; e <= n; ++e) {
            Vector row;
            for (const auto& b : basis) {
                row.push_back(b[s][e]);
                exact = exact && b[s][e].is_exact();
            }
            rows.push_back(std::move(row));
            rhs.push_back(target[s][e]);
            exact = exact && target[s][e].is_exact();
        }
    }
    ConstantFit fit{Vector(nb, Scalar(0)), Scalar(0), false};
    bool any_basis = std::any_of(rows.begin(), rows.end(), [](const Vector& r) {
        return std::any_of(r.begin(), r.end(), [](const Scalar& v) { return !v.is_zero(); });
    });
    if (nb > 0 && any_basis) {
        // Normal equations: exact when the data is.
        LinearSystem normal{Matrix(nb, Vector(nb, Scalar(0))), Vector(nb, Scalar(0))};
        for (std::size_t r = 0; r < rows.size(); ++r) {
            for (std::size_t p = 0; p < nb; ++p) {
                for (std::size_t q = 0; q < nb; ++q) {
                    normal.matrix[p][q] += rows[r][p] * rows[r][q];
                }
                normal.rhs[p] += rows[r][p] * rhs[r];
            }
        }
        LinearSolution sol = solve_linear(normal);
        if (sol.status != SolveStatus::inconsistent) {
            fit.constants = sol.particular;
            fit.determined = sol.status == SolveStatus::unique;
        }
    }
    Scalar worst(0);
    Scalar scale(1);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        Scalar v = -rhs[r];
        for (std::size_t p = 0; p < nb; ++p) {
            v += rows[r][p] * fit.constants[p];
        }
        worst = max(worst, abs(v));
        scale = max(scale, abs(rhs[r]));
    }
    fit.residual = exact ? worst : worst / scale;
    return fit;
}

std::vector<PatternFit> fit_symbol_pattern(int k, const Scalar& nu, const Scalar& rho, int lowest_slot,
                                           const Expr& profile, const std::vector<Diffeo>& maps,
                                           const std::vector<Scalar>& samples, int order)
{
    Matrix alpha = symbol_alpha_solved(k, nu, rho);
    const int m = order + 3 * k + 2;
    // Per source slot and target slot: residual jets and basis jets per sample.
    struct Cell {
        std::vector<Jet> residual;
        std::vector<std::vector<Jet>> basis;
    };
    std::vector<std::vector<Cell>> cells(static_cast<std::size_t>(k + 1), std::vector<Cell>(static_cast<std::size_t>(k + 1)));
    for (const auto& f : maps) {
        for (const auto& s : samples) {
            Jet fj, pj;
            try {
                fj = jet_at(f, s, m + 1);
                pj = jet_at(profile, s, m);
            } catch (const domain_error&) {
                continue;
            }
            Jet sch = schwarzian(invert(fj));
            for (int src = lowest_slot; src <= k; ++src) {
                SymbolTuple t{nu, rho, std::vector<Jet>(static_cast<std::size_t>(k + 1), Jet::zero(s, m))};
                t.slots[static_cast<std::size_t>(src)] = pj;
                SymbolAction act = act_on_symbols(alpha, t, fj);
                const Jet& phi = act.diagonal.slots[static_cast<std::size_t>(src)];
                Scalar w = t.weight(src);
                Jet ds = derive(sch);
                Jet dds = derive(ds);
                Jet dphi = derive(phi);
                Jet ddphi = derive(dphi);
                for (int i = lowest_slot; i <= src; ++i) {
                    Cell& cell = cells[static_cast<std::size_t>(src)][static_cast<std::size_t>(i)];
                    cell.residual.push_back(act.residuals[static_cast<std::size_t>(i)]);
                    switch (src - i) {
                    case 2:
                        cell.basis.resize(1);
                        cell.basis[0].push_back(sch * phi);
                        break;
                    case 3:
                        cell.basis.resize(1);
                        cell.basis[0].push_back(sch * dphi - ds * phi * (w / Scalar(2)));
                        break;
                    case 4:
                        cell.basis.resize(2);
                        cell.basis[0].push_back(sch * ddphi - ds * dphi * ((Scalar(2) * w + Scalar(1)) / Scalar(2)) +
                                                dds * phi * (w * (Scalar(2) * w + Scalar(1)) / Scalar(10)));
                        cell.basis[1].push_back(sch * sch * phi);
                        break;
                    default:
                        break;
                    }
                }
            }
        }
    }
    std::vector<PatternFit> out;
    for (int src = lowest_slot; src <= k; ++src) {
        for (int i = std::max(lowest_slot, src - 4); i <= src; ++i) {
            const Cell& cell = cells[static_cast<std::size_t>(src)][static_cast<std::size_t>(i)];
            static const char* kinds[] = {"zero", "zero", "S", "T", "U"};
            PatternFit pf{src, i, kinds[src - i], fit_constants(cell.basis, cell.residual)};
            out.push_back(std::move(pf));
        }
    }
    return out;
}

Scalar beta_constant(const Scalar& lambda, const Scalar& mu)
{
    return Scalar(2) * lambda * (mu - Scalar(1)) / (Scalar(2) * (mu - lambda) - Scalar(3));
}

std::pair<Jet, Jet> extension_action(const ExtensionModule& e, const Jet& f, const Jet& phi, const Jet& psi)
{
    Jet pushed_phi = push_density(phi, f, e.lambda());
    Jet pushed_psi = push_density(psi, f, e.mu());
    if (e.gamma.is_zero()) {
        return {pushed_phi, pushed_psi};
    }
    OperatorJets c = evaluate_cocycle(e.family, invert(f));
    return {pushed_phi, pushed_psi + apply_op(c, pushed_phi) * e.gamma};
}

Scalar extension_homomorphism_residual(const ExtensionModule& e, const Diffeo& f, const Diffeo& g, const Expr& phi,
                                       const Expr& psi, const std::vector<Scalar>& samples, int order)
{
    int n = order + 2 * (e.family.demand() + e.family.order()) + 2;
    Scalar worst(0);
    for (const auto& s : samples) {
        Jet gj, fj, pj, qj;
        try {
            gj = jet_at(g, s, n);
            fj = jet_at(f, gj.value(), n);
            pj = jet_at(phi, s, n);
            qj = jet_at(psi, s, n);
        } catch (const domain_error&) {
            continue;
        }
        auto [p1, q1] = extension_action(e, gj, pj, qj);
        auto [p2, q2] = extension_action(e, fj, p1, q1);
        auto [p3, q3] = extension_action(e, compose(fj, gj), pj, qj);
        worst = max(worst, max(max_discrepancy(p2, p3), max_discrepancy(q2, q3)));
    }
    return worst;
}

std::vector<Scalar> locked_third_order_nu(const Scalar& lambda)
{
    Scalar b = Scalar(3) * (lambda + Scalar(2));
    Scalar disc = b * b - Scalar(12) * (lambda + Scalar(2));
    if (disc < Scalar(0)) {
        throw domain_error("3 nu^2 + 3 nu (lambda + 2) + lambda + 2 has no real root at lambda = " + lambda.to_string());
    }
    Scalar root = pow(disc, Scalar::rational(1, 2));
    if (root.is_zero()) {
        return {-b / Scalar(6)};
    }
    return {(-b + root) / Scalar(6), (-b - root) / Scalar(6)};
}

SubmoduleReport submodule_check(SubmoduleExample example, const Scalar& lambda, const Scalar& nu,
                                const std::vector<Diffeo>& maps, const std::vector<Scalar>& samples, int order)
{
    const int k = example == SubmoduleExample::second_order ? 2 : 3;
    const std::vector<Scalar> excluded = k == 2 ? std::vector<Scalar>{Scalar(0), Scalar::rational(-1, 2), Scalar(-1)}
                                                : std::vector<Scalar>{Scalar(0), Scalar::rational(-1, 2), Scalar(-1),
                                                                      Scalar::rational(-3, 2), Scalar(-2)};
    if (std::find(excluded.begin(), excluded.end(), lambda) != excluded.end()) {
        throw domain_error("lambda = " + lambda.to_string() + " is excluded for this example");
    }
    const Scalar rho = nu + lambda + Scalar(k);
    const Scalar one(1);
    const Scalar two(2);

    // Top and bottom coefficient profiles; the middle ones are locked to the top.
    Expr top = parse_expr("1 + x^2 + x^3/3");
    Expr bottom = parse_expr("2 - x + x^2/2");
    // Lock coefficients: a_{k-1} = l1 a_k', a_{k-2} = l2 a_k'' (k = 3 only).
    Scalar l1 = k == 2 ? -(two * nu + one) / lambda : -Scalar(3) * (nu + one) / lambda;
    Scalar l2 = Scalar(3) * (nu + one) * (two * nu + one) / (lambda * (two * lambda + one));
    LinDiffOp a{nu, rho, {}};
    a.coeffs.assign(static_cast<std::size_t>(k + 1), Expr::number(Scalar(0)));
    a.coeffs[static_cast<std::size_t>(k)] = top;
    a.coeffs[static_cast<std::size_t>(k - 1)] = Expr::number(l1) * differentiate(top);
    if (k == 3) {
        a.coeffs[1] = Expr::number(l2) * differentiate(differentiate(top));
    }
    a.coeffs[0] = bottom;

    Matrix alpha = symbol_alpha_solved(k, nu, rho);
    CocycleFamily family{k == 2 ? Family::S : Family::T, lambda};
    Scalar omit = omitted_symbol_power(nu, rho);
    const int m = order + 3 * k + 2;

    SubmoduleReport report{nu, Scalar(0), Scalar(0), {}};
    std::vector<std::vector<Jet>> basis(1);
    std::vector<Jet> target;
    for (const auto& f : maps) {
        for (const auto& s : samples) {
            Jet fj;
            OperatorJets src;
            try {
                fj = jet_at(f, s, m + 1);
                src = jets_at(a, s, m);
            } catch (const domain_error&) {
                continue;
            }
            OperatorJets pushed = push_op(src, fj, omit);
            const Jet& pk = pushed.coeffs[static_cast<std::size_t>(k)];
            Jet dk = derive(pk);
            report.closure_residual =
                max(report.closure_residual, max_discrepancy(pushed.coeffs[static_cast<std::size_t>(k - 1)], dk * l1));
            if (k == 3) {
                report.closure_residual = max(report.closure_residual, max_discrepancy(pushed.coeffs[1], derive(dk) * l2));
            }
            SymbolTuple before = symbol_map(src, alpha);
            SymbolTuple after = symbol_map(pushed, alpha);
            Jet top_pushed = push_density(before.slots[static_cast<std::size_t>(k)], fj, lambda, omit);
            report.top_residual =
                max(report.top_residual, max_discrepancy(after.slots[static_cast<std::size_t>(k)], top_pushed));
            Jet bottom_pushed = push_density(before.slots[0], fj, rho - nu, omit);
            OperatorJets c = evaluate_cocycle(family, invert(fj));
            basis[0].push_back(apply_op(c, top_pushed));
            target.push_back(after.slots[0] - bottom_pushed);
        }
    }
    report.gamma = fit_constants(basis, target);
    return report;
}

} // namespace schwarz
