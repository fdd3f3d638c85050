#pragma once

#include "schwarz/jet.hpp"
#include "schwarz/scalar.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace schwarz {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t position)
        : std::runtime_error(message + " at position " + std::to_string(position)), position_(position)
    {
    }
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

enum class ExprKind { number, variable, negate, add, subtract, multiply, divide, power, function };

/// Immutable expression tree in the single variable x. Copies share nodes.
class Expr {
public:
    Expr();

    static Expr number(Scalar value);
    static Expr variable();
    static Expr negate(Expr operand);
    static Expr binary(ExprKind kind, Expr lhs, Expr rhs);
    static Expr function(std::string name, Expr argument);

    ExprKind kind() const;
    const Scalar& value() const;
    const std::string& name() const;
    const Expr& lhs() const;
    const Expr& rhs() const;
    bool depends_on_x() const;

    friend bool operator==(const Expr& a, const Expr& b);

private:
    struct Node;
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

Expr operator+(Expr a, Expr b);
Expr operator-(Expr a, Expr b);
Expr operator*(Expr a, Expr b);
Expr operator/(Expr a, Expr b);

/// Grammar: expr := term (('+'|'-') term)*; term := factor (('*'|'/') factor)*;
/// factor := atom ('^' factor)? | '-' factor; atom := number | 'x' | ident '(' expr ')' | '(' expr ')'.
/// The Unicode minus sign is accepted wherever '-' is.
Expr parse_expr(std::string_view text);
std::string to_string(const Expr& e);

Jet jet_at(const Expr& e, const Scalar& x0, int order);
Scalar evaluate(const Expr& e, const Scalar& x0);
/// Symbolic d/dx. Only trivial constant folding; the result is not simplified.
Expr differentiate(const Expr& e);

/// x -> (ax + b)/(cx + d), stored up to projective scale.
class Mobius {
public:
    Mobius(Scalar a, Scalar b, Scalar c, Scalar d);
    static Mobius identity() { return Mobius(Scalar(1), Scalar(0), Scalar(0), Scalar(1)); }
    static Mobius translation(const Scalar& t) { return Mobius(Scalar(1), t, Scalar(0), Scalar(1)); }

    const Scalar& a() const { return a_; }
    const Scalar& b() const { return b_; }
    const Scalar& c() const { return c_; }
    const Scalar& d() const { return d_; }
    Scalar det() const { return a_ * d_ - b_ * c_; }

    bool has_pole_at(const Scalar& x) const { return (c_ * x + d_).is_zero(); }
    Scalar operator()(const Scalar& x) const;

    friend bool operator==(const Mobius& m, const Mobius& n);

private:
    Scalar a_, b_, c_, d_;
};

Mobius compose(const Mobius& outer, const Mobius& inner);
Mobius inverse(const Mobius& m);
Jet jet_at(const Mobius& m, const Scalar& x0, int order);
std::string to_string(const Mobius& m);

/// A diffeomorphism germ on the affine chart.
struct Diffeo {
    std::variant<Expr, Mobius> forward;
    std::optional<Expr> inverse;
    std::optional<std::pair<Scalar, Scalar>> bracket;

    bool is_mobius() const { return std::holds_alternative<Mobius>(forward); }
};

/// Accepts "mobius(a,b,c,d)" or an expression in x.
Diffeo parse_diffeo(std::string_view text);
std::string to_string(const Diffeo& f);

/// Jet of f at x0. Throws domain_error when f'(x0) = 0, or f'(x0) <= 0 on the float path.
Jet jet_at(const Diffeo& f, const Scalar& x0, int order);
Scalar evaluate(const Diffeo& f, const Scalar& x0);
/// The preimage of y0: exact for Möbius maps, via the declared inverse when
/// present, otherwise bisection plus Newton inside the bracket.
Scalar invert_diffeo_point(const Diffeo& f, const Scalar& y0);

} // namespace schwarz
