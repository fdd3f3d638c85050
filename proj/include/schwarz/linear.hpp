#pragma once

#include "schwarz/scalar.hpp"

#include <vector>

namespace schwarz {

using Vector = std::vector<Scalar>;
using Matrix = std::vector<Vector>;

struct LinearSystem {
    Matrix matrix;
    Vector rhs;

    std::size_t rows() const { return matrix.size(); }
    std::size_t cols() const;
};

enum class SolveStatus { unique, underdetermined, inconsistent };

// Solution set of a linear system: particular + span(null_basis).
// Null-space vectors are scaled so their first nonzero entry is 1.
struct LinearSolution {
    SolveStatus status = SolveStatus::inconsistent;
    Vector particular;
    std::vector<Vector> null_basis;

    std::size_t dimension() const { return null_basis.size(); }
};

// Gauss-Jordan elimination. Exact systems use first-nonzero pivoting; any
// float entry switches to partial pivoting with a relative zero threshold.
LinearSolution solve_linear(const LinearSystem& sys);

Vector multiply(const Matrix& m, const Vector& v);

} // namespace schwarz
