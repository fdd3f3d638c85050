#include "doctest.h"

#include "schwarz/linear.hpp"
#include "schwarz/scalar.hpp"

using namespace schwarz;

TEST_CASE("rationals stay canonical and exact")
{
    Scalar a = Scalar::rational(6, -4);
    CHECK(a.is_exact());
    CHECK(a.to_string() == "-3/2");
    CHECK((a + Scalar::rational(3, 2)).is_zero());
    CHECK((a * Scalar(2)).to_string() == "-3");
    CHECK_FALSE((a + Scalar::real(0.5)).is_exact());
}

TEST_CASE("literal parsing")
{
    CHECK(Scalar::parse("-3/2") == Scalar::rational(-3, 2));
    CHECK(Scalar::parse("\xE2\x88\x92" "3/2") == Scalar::rational(-3, 2));
    CHECK(Scalar::parse("7") == Scalar(7));
    CHECK(Scalar::parse("0.25") == Scalar::rational(1, 4));
    CHECK_THROWS(Scalar::parse("1/0"));
    CHECK_THROWS(Scalar::parse("abc"));
}

TEST_CASE("generalized binomials")
{
    CHECK(gen_binomial(Scalar(4), 2) == Scalar(6));
    CHECK(gen_binomial(Scalar::rational(7, 3), 0) == Scalar(1));
    CHECK(gen_binomial(Scalar::rational(1, 2), 2) == Scalar::rational(-1, 8));
    for (long n = 0; n <= 6; ++n) {
        for (long i = 0; i <= 8; ++i) {
            mpz_class b;
            mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(i));
            CHECK(gen_binomial(Scalar(n), i) == Scalar(mpq_class(b)));
        }
    }
}

TEST_CASE("powers are exact on perfect powers")
{
    CHECK(pow(Scalar::rational(4, 9), Scalar::rational(3, 2)) == Scalar::rational(8, 27));
    CHECK(pow(Scalar::rational(-8, 27), Scalar::rational(1, 3)) == Scalar::rational(-2, 3));
    CHECK_FALSE(pow(Scalar(2), Scalar::rational(1, 2)).is_exact());
    CHECK_THROWS_AS(pow(Scalar(-4), Scalar::rational(1, 2)), domain_error);
}

TEST_CASE("float tolerance")
{
    CHECK(approx_equal(Scalar::real(1.0), Scalar::real(1.0 + 1e-10)));
    CHECK_FALSE(approx_equal(Scalar::real(1.0), Scalar::real(1.0 + 1e-6)));
    CHECK(approx_equal(Scalar::real(1e-14), Scalar(0)));
    CHECK(residual_ok(Scalar(0)));
    CHECK_FALSE(residual_ok(Scalar::rational(1, 1000000000)));
}

TEST_CASE("solve_linear")
{
    SUBCASE("identity")
    {
        auto sol = solve_linear({{{Scalar(1), Scalar(0)}, {Scalar(0), Scalar(1)}}, {Scalar(1), Scalar(2)}});
        REQUIRE(sol.status == SolveStatus::unique);
        CHECK(sol.particular == Vector{Scalar(1), Scalar(2)});
    }
    SUBCASE("scale freedom")
    {
        auto sol = solve_linear({{{Scalar(1), Scalar(1)}}, {Scalar(0)}});
        REQUIRE(sol.status == SolveStatus::underdetermined);
        REQUIRE(sol.dimension() == 1);
        CHECK(sol.null_basis[0] == Vector{Scalar(1), Scalar(-1)});
    }
    SUBCASE("inconsistent")
    {
        auto sol = solve_linear({{{Scalar(1), Scalar(1)}, {Scalar(2), Scalar(2)}}, {Scalar(1), Scalar(3)}});
        CHECK(sol.status == SolveStatus::inconsistent);
    }
    SUBCASE("substitution reproduces rhs exactly")
    {
        Matrix m{{Scalar(2), Scalar::rational(1, 3), Scalar(-1)},
                 {Scalar(0), Scalar(5), Scalar::rational(7, 2)},
                 {Scalar(1), Scalar(1), Scalar(1)}};
        Vector b{Scalar(1), Scalar::rational(-2, 9), Scalar(4)};
        auto sol = solve_linear({m, b});
        REQUIRE(sol.status == SolveStatus::unique);
        CHECK(multiply(m, sol.particular) == b);
    }
}
