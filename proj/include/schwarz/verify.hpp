#pragma once

#include "schwarz/expr.hpp"
#include "schwarz/scalar.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace schwarz {

struct RunConfig {
    int order = 12;
    std::vector<Scalar> samples = {Scalar(-2), Scalar::rational(-2, 3), Scalar::rational(1, 5), Scalar(1),
                                   Scalar::rational(7, 4)};
    std::uint64_t seed = 1;
    int trials = 25;
    int workers = 1;
    Tolerance tolerance;
    /// Weight tested by the order-six-cocycle suite; the full sweep when unset.
    std::optional<Scalar> lambda;
    bool timing = false;
};

struct Check {
    std::string name;
    std::string anchor;
    bool passed = false;
    /// Largest residual, as printed by Scalar::to_string; empty for checks
    /// that are a yes/no answer.
    std::string residual;
    std::string detail;
};

struct Report {
    std::string suite;
    std::vector<Check> checks;
    std::uint64_t seed = 0;
    std::optional<double> elapsed_ms;

    bool passed() const;
};

std::vector<std::string> suite_names();
bool is_suite(const std::string& name);

/// Runs one suite, or every suite for "all" (check names then carry a
/// "suite/" prefix). Checks are sorted by name; exceptions become failed
/// checks. Throws std::invalid_argument for an unknown suite.
Report run_suite(const std::string& name, const RunConfig& config);

std::string to_json(const Report& report);
std::string to_text(const Report& report);

/// Seeded test-map corpora.
std::vector<Diffeo> random_mobius_maps(std::uint64_t seed, int count);
/// x + c2 x^2 + c3 x^3 with c2^2 < 3 c3, so f' > 0 everywhere.
std::vector<Diffeo> random_polynomial_maps(std::uint64_t seed, int count);
/// Transcendental maps with f' > 0, evaluated on the float path.
std::vector<Diffeo> float_maps();

} // namespace schwarz
