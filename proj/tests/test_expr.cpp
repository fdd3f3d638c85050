#include "doctest.h"

#include "schwarz/expr.hpp"

#include <cmath>
#include <random>

using namespace schwarz;

TEST_CASE("parser shapes")
{
    CHECK(parse_expr("x").kind() == ExprKind::variable);
    Expr q = parse_expr("(2*x+1)/(x-3)");
    REQUIRE(q.kind() == ExprKind::divide);
    CHECK(q.lhs().kind() == ExprKind::add);
    CHECK(q.rhs().kind() == ExprKind::subtract);

    Expr p = parse_expr("2^3^2");
    REQUIRE(p.kind() == ExprKind::power);
    CHECK(p.rhs().kind() == ExprKind::power);
    CHECK(evaluate(p, Scalar(0)) == Scalar(512));

    CHECK(parse_expr("-x^2").kind() == ExprKind::negate);
    CHECK(evaluate(parse_expr("-x^2"), Scalar(3)) == Scalar(-9));
    CHECK(evaluate(parse_expr("1 \xE2\x88\x92 x"), Scalar(3)) == Scalar(-2));
    CHECK(evaluate(parse_expr("x^-1"), Scalar(4)) == Scalar::rational(1, 4));
}

TEST_CASE("parser errors carry positions")
{
    try {
        parse_expr("x + foo(x)");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.position() == 4);
    }
    try {
        parse_expr("(x + 1");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.position() == 6);
    }
    CHECK_THROWS_AS(parse_expr("x * * 2"), ParseError);
    CHECK_THROWS_AS(parse_expr(""), ParseError);
    CHECK_THROWS_AS(parse_expr("x)"), ParseError);
}

TEST_CASE("print then reparse")
{
    Expr e = parse_expr("tan(x)^2 - 1/2");
    CHECK(parse_expr(to_string(e)) == e);
    CHECK(to_string(e) == "tan(x)^2 - 1/2");
    CHECK(to_string(parse_expr("x - (x - 1)")) == "x - (x - 1)");
    CHECK(to_string(parse_expr("(x^2)^3")) == "(x^2)^3");
    CHECK(to_string(parse_expr("-(x*2)")) == "-(x*2)");
}

namespace {

Expr random_expr(std::mt19937_64& rng, int depth)
{
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
    static const char* names[] = {"exp", "log", "sin", "cos", "tan", "sqrt"};
    switch (pick(rng)) {
    case 0:
        return Expr::variable();
    case 1:
        return Expr::number(Scalar(static_cast<long>(rng() % 9)));
    case 2:
        return Expr::negate(random_expr(rng, depth - 1));
    case 3:
        return random_expr(rng, depth - 1) + random_expr(rng, depth - 1);
    case 4:
        return random_expr(rng, depth - 1) - random_expr(rng, depth - 1);
    case 5:
        return random_expr(rng, depth - 1) * random_expr(rng, depth - 1);
    case 6:
        return random_expr(rng, depth - 1) / random_expr(rng, depth - 1);
    case 7:
        return Expr::binary(ExprKind::power, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    default:
        return Expr::function(names[rng() % 6], random_expr(rng, depth - 1));
    }
}

} // namespace

TEST_CASE("parse inverts print on generated expressions")
{
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 100; ++i) {
        Expr e = random_expr(rng, 4);
        std::string text = to_string(e);
        CAPTURE(text);
        CHECK(parse_expr(text) == e);
    }
}

TEST_CASE("jets of expressions")
{
    CHECK(jet_at(Mobius::identity(), Scalar(5), 3).derivs() == std::vector<Scalar>{5, 1, 0, 0});
    Mobius recip(Scalar(0), Scalar(1), Scalar(1), Scalar(0));
    CHECK(jet_at(recip, Scalar(2), 2).derivs() ==
          std::vector<Scalar>{Scalar::rational(1, 2), Scalar::rational(-1, 4), Scalar::rational(1, 4)});
    CHECK(jet_at(parse_expr("tan(x)"), Scalar(0), 3).derivs() == std::vector<Scalar>{0, 1, 0, 2});

    Jet r = jet_at(parse_expr("(2*x+1)/(x-3)"), Scalar::rational(1, 5), 3);
    CHECK(r.is_exact());
    CHECK(r.derivs() == std::vector<Scalar>{Scalar::rational(-1, 2), Scalar::rational(-25, 28),
                                            Scalar::rational(-125, 196), Scalar::rational(-1875, 2744)});

    Jet es = jet_at(parse_expr("exp(x)*sin(x)"), Scalar::rational(1, 5), 3);
    CHECK_FALSE(es.is_exact());
    double e = std::exp(0.2), s = std::sin(0.2), c = std::cos(0.2);
    CHECK(approx_equal(es[1], Scalar::real(e * (s + c))));
    CHECK(approx_equal(es[3], Scalar::real(2 * e * (c - s))));

    CHECK_THROWS_AS(jet_at(parse_expr("1/(x-1)"), Scalar(1), 2), domain_error);
    CHECK_THROWS_AS(jet_at(parse_expr("log(x)"), Scalar(-1), 2), domain_error);
    CHECK_THROWS_AS(jet_at(parse_expr("x^x"), Scalar(1), 2), domain_error);
}

TEST_CASE("jets respect composition")
{
    Diffeo f = parse_diffeo("x + x^2/7");
    Diffeo g = parse_diffeo("(3*x + 1)/(x + 2)");
    Expr fg = parse_expr("(3*x + 1)/(x + 2) + ((3*x + 1)/(x + 2))^2/7");
    for (Scalar x0 : {Scalar(0), Scalar::rational(1, 5), Scalar(1)}) {
        Jet lhs = jet_at(fg, x0, 6);
        Jet rhs = compose(jet_at(f, evaluate(g, x0), 6), jet_at(g, x0, 6));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("Möbius group")
{
    Mobius m(Scalar(2), Scalar(1), Scalar(1), Scalar(1));
    CHECK(compose(m, inverse(m)) == Mobius::identity());
    CHECK(compose(Mobius::translation(Scalar(1)), Mobius::translation(Scalar(2))) == Mobius::translation(Scalar(3)));
    Mobius prod = compose(Mobius(Scalar(1), Scalar(1), Scalar(0), Scalar(1)), Mobius(Scalar(0), Scalar(1), Scalar(-1), Scalar(0)));
    CHECK(prod == Mobius(Scalar(1), Scalar(-1), Scalar(1), Scalar(0)));
    CHECK(prod.a() == Scalar(1));
    CHECK(prod.det() == Scalar(1));
    for (long k = 0; k < 16; ++k) {
        CHECK(jet_at(m, Scalar::rational(k, 3), 16).is_exact());
    }
    Mobius scaled(Scalar(4), Scalar(2), Scalar(2), Scalar(2));
    CHECK(scaled.det() == Scalar(1));
    CHECK(scaled == m);
    CHECK_THROWS_AS(Mobius(Scalar(1), Scalar(2), Scalar(2), Scalar(4)), domain_error);
}

TEST_CASE("diffeomorphisms")
{
    Diffeo recip = parse_diffeo("mobius(0,1,1,0)");
    REQUIRE(recip.is_mobius());
    CHECK(invert_diffeo_point(recip, Scalar::rational(1, 2)) == Scalar(2));
    CHECK(jet_at(recip, Scalar(2), 3)[1] == Scalar::rational(-1, 4));
    CHECK_THROWS_AS(jet_at(parse_diffeo("x^3"), Scalar(0), 3), domain_error);
    CHECK_THROWS_AS(jet_at(parse_diffeo("-x + sin(x)/2"), Scalar(1), 3), domain_error);

    Diffeo cubic = parse_diffeo("x^3 + x");
    cubic.bracket = {Scalar(0), Scalar(2)};
    Scalar root = invert_diffeo_point(cubic, Scalar(2));
    CHECK(std::abs(root.to_double() - 1.0) < 1e-14);
    cubic.bracket = {Scalar(2), Scalar(3)};
    CHECK_THROWS_AS(invert_diffeo_point(cubic, Scalar(2)), domain_error);

    Diffeo e = parse_diffeo("exp(x)");
    e.inverse = parse_expr("log(x)");
    CHECK(invert_diffeo_point(e, Scalar(1)) == Scalar(0));

    CHECK_THROWS_AS(parse_diffeo("mobius(1,2,3)"), ParseError);
    CHECK(to_string(parse_diffeo("mobius(2, 1, 1, 1)")) == "mobius(2,1,1,1)");
}

TEST_CASE("symbolic derivative agrees with jets")
{
    for (const char* text : {"x^3 - 2*x", "(2*x+1)/(x-3)", "sqrt(1 + x^2)", "tan(x)*exp(x)", "log(2 + sin(x))",
                             "cos(x^2)/(1 + x)"}) {
        CAPTURE(text);
        Expr e = parse_expr(text);
        Expr d = differentiate(e);
        for (Scalar x0 : {Scalar::rational(1, 5), Scalar(1)}) {
            Jet j = jet_at(e, x0, 3);
            Jet dj = jet_at(d, x0, 2);
            CHECK(max_discrepancy(derive(j), dj).to_double() <= 1e-12);
        }
    }
    CHECK(to_string(differentiate(parse_expr("x*x"))) == "x + x");
}
