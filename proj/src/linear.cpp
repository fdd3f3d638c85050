#include "schwarz/linear.hpp"

#include <cmath>
#include <stdexcept>

namespace schwarz {

std::size_t LinearSystem::cols() const
{
    return matrix.empty() ? 0 : matrix.front().size();
}

Vector multiply(const Matrix& m, const Vector& v)
{
    Vector out;
    out.reserve(m.size());
    for (const auto& row : m) {
        if (row.size() != v.size()) {
            throw std::invalid_argument("matrix-vector size mismatch");
        }
        Scalar acc(0);
        for (std::size_t j = 0; j < row.size(); ++j) {
            acc += row[j] * v[j];
        }
        out.push_back(acc);
    }
    return out;
}

LinearSolution solve_linear(const LinearSystem& sys)
{
    const std::size_t rows = sys.rows();
    const std::size_t cols = sys.cols();
    if (sys.rhs.size() != rows) {
        throw std::invalid_argument("right-hand side length does not match the row count");
    }
    bool exact = true;
    double scale = 0.0;
    Matrix aug;
    aug.reserve(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        if (sys.matrix[i].size() != cols) {
            throw std::invalid_argument("ragged coefficient matrix");
        }
        Vector row = sys.matrix[i];
        row.push_back(sys.rhs[i]);
        for (const auto& s : row) {
            exact = exact && s.is_exact();
            scale = std::max(scale, std::abs(s.to_double()));
        }
        aug.push_back(std::move(row));
    }
    const double zero_threshold = 1e-12 * (scale > 0 ? scale : 1.0);
    auto negligible = [&](const Scalar& s) {
        return exact ? s.is_zero() : std::abs(s.to_double()) <= zero_threshold;
    };

    std::vector<std::size_t> pivot_cols;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pivot = rows;
        if (exact) {
            for (std::size_t i = r; i < rows; ++i) {
                if (!aug[i][c].is_zero()) {
                    pivot = i;
                    break;
                }
            }
        } else {
            double best = zero_threshold;
            for (std::size_t i = r; i < rows; ++i) {
                double v = std::abs(aug[i][c].to_double());
                if (v > best) {
                    best = v;
                    pivot = i;
                }
            }
        }
        if (pivot == rows) {
            continue;
        }
        std::swap(aug[r], aug[pivot]);
        Scalar inv = Scalar(1) / aug[r][c];
        for (std::size_t j = c; j <= cols; ++j) {
            aug[r][j] *= inv;
        }
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || aug[i][c].is_zero()) {
                continue;
            }
            Scalar f = aug[i][c];
            for (std::size_t j = c; j <= cols; ++j) {
                aug[i][j] -= f * aug[r][j];
            }
        }
        pivot_cols.push_back(c);
        ++r;
    }

    LinearSolution sol;
    for (std::size_t i = r; i < rows; ++i) {
        if (!negligible(aug[i][cols])) {
            sol.status = SolveStatus::inconsistent;
            return sol;
        }
    }

    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivot_cols) {
        is_pivot[c] = true;
    }
    Scalar zero = exact ? Scalar(0) : Scalar::real(0.0);
    sol.particular.assign(cols, zero);
    for (std::size_t i = 0; i < pivot_cols.size(); ++i) {
        sol.particular[pivot_cols[i]] = aug[i][cols];
    }
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) {
            continue;
        }
        Vector v(cols, zero);
        v[free] = Scalar(1);
        for (std::size_t i = 0; i < pivot_cols.size(); ++i) {
            v[pivot_cols[i]] = -aug[i][free];
        }
        for (const auto& s : v) {
            if (!negligible(s)) {
                Scalar lead = s;
                for (auto& t : v) {
                    t /= lead;
                }
                break;
            }
        }
        sol.null_basis.push_back(std::move(v));
    }
    sol.status = sol.null_basis.empty() ? SolveStatus::unique : SolveStatus::underdetermined;
    return sol;
}

} // namespace schwarz
