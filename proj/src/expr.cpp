#include "schwarz/expr.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <vector>

namespace schwarz {

struct Expr::Node {
    ExprKind kind;
    Scalar value;
    std::string name;
    Expr lhs;
    Expr rhs;
    bool has_x;
};

namespace {

const std::string kUnicodeMinus = "\xE2\x88\x92";

bool is_function_name(std::string_view s)
{
    return s == "exp" || s == "log" || s == "sin" || s == "cos" || s == "tan" || s == "sqrt";
}

} // namespace

Expr::Expr() : Expr(number(Scalar(0))) {}

Expr Expr::number(Scalar value)
{
    return Expr(std::make_shared<const Node>(Node{ExprKind::number, std::move(value), {}, Expr(std::shared_ptr<const Node>()), Expr(std::shared_ptr<const Node>()), false}));
}

Expr Expr::variable()
{
    return Expr(std::make_shared<const Node>(Node{ExprKind::variable, Scalar(0), {}, Expr(std::shared_ptr<const Node>()), Expr(std::shared_ptr<const Node>()), true}));
}

Expr Expr::negate(Expr operand)
{
    bool x = operand.depends_on_x();
    return Expr(std::make_shared<const Node>(Node{ExprKind::negate, Scalar(0), {}, std::move(operand), Expr(std::shared_ptr<const Node>()), x}));
}

Expr Expr::binary(ExprKind kind, Expr lhs, Expr rhs)
{
    bool x = lhs.depends_on_x() || rhs.depends_on_x();
    return Expr(std::make_shared<const Node>(Node{kind, Scalar(0), {}, std::move(lhs), std::move(rhs), x}));
}

Expr Expr::function(std::string name, Expr argument)
{
    if (!is_function_name(name)) {
        throw std::invalid_argument("unknown function '" + name + "'");
    }
    bool x = argument.depends_on_x();
    return Expr(std::make_shared<const Node>(Node{ExprKind::function, Scalar(0), std::move(name), std::move(argument), Expr(std::shared_ptr<const Node>()), x}));
}

ExprKind Expr::kind() const { return node_->kind; }
const Scalar& Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
const Expr& Expr::lhs() const { return node_->lhs; }
const Expr& Expr::rhs() const { return node_->rhs; }
bool Expr::depends_on_x() const { return node_->has_x; }

bool operator==(const Expr& a, const Expr& b)
{
    if (a.node_ == b.node_) {
        return true;
    }
    if (a.kind() != b.kind()) {
        return false;
    }
    switch (a.kind()) {
    case ExprKind::number:
        return a.value().is_exact() == b.value().is_exact() && a.value() == b.value();
    case ExprKind::variable:
        return true;
    case ExprKind::negate:
        return a.lhs() == b.lhs();
    case ExprKind::function:
        return a.name() == b.name() && a.lhs() == b.lhs();
    default:
        return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    }
}

Expr operator+(Expr a, Expr b) { return Expr::binary(ExprKind::add, std::move(a), std::move(b)); }
Expr operator-(Expr a, Expr b) { return Expr::binary(ExprKind::subtract, std::move(a), std::move(b)); }
Expr operator*(Expr a, Expr b) { return Expr::binary(ExprKind::multiply, std::move(a), std::move(b)); }
Expr operator/(Expr a, Expr b) { return Expr::binary(ExprKind::divide, std::move(a), std::move(b)); }

// ---- parser ---------------------------------------------------------------

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr parse()
    {
        Expr e = expr();
        skip_space();
        if (pos_ < text_.size()) {
            throw ParseError("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
        }
        return e;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool at_minus()
    {
        skip_space();
        return (pos_ < text_.size() && text_[pos_] == '-') || text_.substr(pos_, kUnicodeMinus.size()) == kUnicodeMinus;
    }

    void eat_minus() { pos_ += text_[pos_] == '-' ? 1 : kUnicodeMinus.size(); }

    bool accept(char c)
    {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c)) {
            if (pos_ >= text_.size()) {
                throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
            }
            throw ParseError(std::string("expected '") + c + "'", pos_);
        }
    }

    Expr expr()
    {
        Expr e = term();
        for (;;) {
            if (accept('+')) {
                e = e + term();
            } else if (at_minus()) {
                eat_minus();
                e = e - term();
            } else {
                return e;
            }
        }
    }

    Expr term()
    {
        Expr e = factor();
        for (;;) {
            if (accept('*')) {
                e = e * factor();
            } else if (accept('/')) {
                e = e / factor();
            } else {
                return e;
            }
        }
    }

    Expr factor()
    {
        if (at_minus()) {
            eat_minus();
            return Expr::negate(factor());
        }
        Expr base = atom();
        if (accept('^')) {
            return Expr::binary(ExprKind::power, base, factor());
        }
        return base;
    }

    Expr atom()
    {
        skip_space();
        if (pos_ >= text_.size()) {
            throw ParseError("unexpected end of input", pos_);
        }
        char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t start = pos_;
            while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
                ++pos_;
            }
            try {
                return Expr::number(Scalar::parse(text_.substr(start, pos_ - start)));
            } catch (const std::invalid_argument&) {
                throw ParseError("malformed number", start);
            }
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
            std::string ident(text_.substr(start, pos_ - start));
            if (ident == "x") {
                return Expr::variable();
            }
            if (!is_function_name(ident)) {
                throw ParseError("unknown identifier '" + ident + "'", start);
            }
            expect('(');
            Expr arg = expr();
            expect(')');
            return Expr::function(ident, arg);
        }
        if (accept('(')) {
            Expr e = expr();
            expect(')');
            return e;
        }
        throw ParseError("unexpected '" + std::string(1, c) + "'", pos_);
    }
};

int precedence(const Expr& e)
{
    switch (e.kind()) {
    case ExprKind::add:
    case ExprKind::subtract:
        return 1;
    case ExprKind::multiply:
    case ExprKind::divide:
        return 2;
    case ExprKind::negate:
        return 3;
    case ExprKind::power:
        return 4;
    case ExprKind::number:
        return e.value().is_integer() && e.value().sign() >= 0 ? 5 : 1;
    default:
        return 5;
    }
}

void print(const Expr& e, std::string& out);

void print_at_least(const Expr& e, int level, std::string& out)
{
    if (precedence(e) < level) {
        out += '(';
        print(e, out);
        out += ')';
    } else {
        print(e, out);
    }
}

void print(const Expr& e, std::string& out)
{
    switch (e.kind()) {
    case ExprKind::number:
        out += e.value().to_string();
        break;
    case ExprKind::variable:
        out += 'x';
        break;
    case ExprKind::negate:
        out += '-';
        print_at_least(e.lhs(), 3, out);
        break;
    case ExprKind::add:
    case ExprKind::subtract:
        print_at_least(e.lhs(), 1, out);
        out += e.kind() == ExprKind::add ? " + " : " - ";
        print_at_least(e.rhs(), 2, out);
        break;
    case ExprKind::multiply:
    case ExprKind::divide:
        print_at_least(e.lhs(), 2, out);
        out += e.kind() == ExprKind::multiply ? "*" : "/";
        print_at_least(e.rhs(), 3, out);
        break;
    case ExprKind::power:
        print_at_least(e.lhs(), 5, out);
        out += '^';
        print_at_least(e.rhs(), 3, out);
        break;
    case ExprKind::function:
        out += e.name();
        out += '(';
        print(e.lhs(), out);
        out += ')';
        break;
    }
}

} // namespace

Expr parse_expr(std::string_view text)
{
    return Parser(text).parse();
}

std::string to_string(const Expr& e)
{
    std::string out;
    print(e, out);
    return out;
}

// ---- evaluation -------------------------------------------------------------

Jet jet_at(const Expr& e, const Scalar& x0, int order)
{
    switch (e.kind()) {
    case ExprKind::number:
        return Jet::constant(x0, e.value(), order);
    case ExprKind::variable:
        return Jet::identity(x0, order);
    case ExprKind::negate:
        return -jet_at(e.lhs(), x0, order);
    case ExprKind::add:
        return jet_at(e.lhs(), x0, order) + jet_at(e.rhs(), x0, order);
    case ExprKind::subtract:
        return jet_at(e.lhs(), x0, order) - jet_at(e.rhs(), x0, order);
    case ExprKind::multiply:
        return jet_at(e.lhs(), x0, order) * jet_at(e.rhs(), x0, order);
    case ExprKind::divide: {
        Jet den = jet_at(e.rhs(), x0, order);
        if (den.value().is_zero()) {
            throw domain_error("pole of " + to_string(e) + " at x = " + x0.to_string());
        }
        return jet_at(e.lhs(), x0, order) / den;
    }
    case ExprKind::power: {
        if (e.rhs().depends_on_x()) {
            throw domain_error("exponent must not depend on x: " + to_string(e));
        }
        Scalar exponent = evaluate(e.rhs(), x0);
        return pow(jet_at(e.lhs(), x0, order), exponent);
    }
    case ExprKind::function: {
        Jet arg = jet_at(e.lhs(), x0, order);
        const std::string& f = e.name();
        if (f == "exp") {
            return exp(arg);
        }
        if (f == "log") {
            return log(arg);
        }
        if (f == "sin") {
            return sin(arg);
        }
        if (f == "cos") {
            return cos(arg);
        }
        if (f == "tan") {
            return tan(arg);
        }
        return sqrt(arg);
    }
    }
    throw std::logic_error("unreachable expression kind");
}

Scalar evaluate(const Expr& e, const Scalar& x0)
{
    return jet_at(e, x0, 0).value();
}

// ---- Möbius maps ----------------------------------------------------------

namespace {

std::optional<Scalar> exact_sqrt(const Scalar& s)
{
    if (!s.is_exact() || s.sign() < 0) {
        return std::nullopt;
    }
    Scalar r = pow(s, Scalar::rational(1, 2));
    if (!r.is_exact()) {
        return std::nullopt;
    }
    return r;
}

} // namespace

Mobius::Mobius(Scalar a, Scalar b, Scalar c, Scalar d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d))
{
    Scalar det = this->det();
    if (det.is_zero()) {
        throw domain_error("degenerate Möbius map (ad - bc = 0)");
    }
    Scalar scale(1);
    if (auto r = exact_sqrt(abs(det))) {
        scale = *r;
    } else if (!det.is_exact()) {
        scale = Scalar::real(std::sqrt(std::abs(det.to_double())));
    }
    bool flip = a_.sign() < 0 || (a_.is_zero() && c_.sign() < 0);
    if (flip) {
        scale = -scale;
    }
    a_ /= scale;
    b_ /= scale;
    c_ /= scale;
    d_ /= scale;
}

Scalar Mobius::operator()(const Scalar& x) const
{
    Scalar den = c_ * x + d_;
    if (den.is_zero()) {
        throw domain_error("Möbius pole at x = " + x.to_string());
    }
    return (a_ * x + b_) / den;
}

bool operator==(const Mobius& m, const Mobius& n)
{
    // Projective equality: all 2x2 minors of the stacked entries vanish.
    const Scalar p[4] = {m.a_, m.b_, m.c_, m.d_};
    const Scalar q[4] = {n.a_, n.b_, n.c_, n.d_};
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            if (!(p[i] * q[j] - p[j] * q[i]).is_zero()) {
                return false;
            }
        }
    }
    return true;
}

Mobius compose(const Mobius& f, const Mobius& g)
{
    return Mobius(f.a() * g.a() + f.b() * g.c(), f.a() * g.b() + f.b() * g.d(), f.c() * g.a() + f.d() * g.c(),
                  f.c() * g.b() + f.d() * g.d());
}

Mobius inverse(const Mobius& m)
{
    return Mobius(m.d(), -m.b(), -m.c(), m.a());
}

Jet jet_at(const Mobius& m, const Scalar& x0, int order)
{
    if (m.has_pole_at(x0)) {
        throw domain_error("Möbius pole at x = " + x0.to_string());
    }
    Jet x = Jet::identity(x0, order);
    return (x * m.a() + m.b()) / (x * m.c() + m.d());
}

std::string to_string(const Mobius& m)
{
    return "mobius(" + m.a().to_string() + "," + m.b().to_string() + "," + m.c().to_string() + "," +
           m.d().to_string() + ")";
}

// ---- diffeomorphisms --------------------------------------------------------

Diffeo parse_diffeo(std::string_view text)
{
    std::size_t start = text.find_first_not_of(" \t");
    if (start != std::string_view::npos && text.substr(start, 7) == "mobius(") {
        std::size_t close = text.rfind(')');
        if (close == std::string_view::npos || close < start + 7) {
            throw ParseError("expected ')'", text.size());
        }
        std::string_view body = text.substr(start + 7, close - start - 7);
        std::vector<Scalar> entries;
        std::size_t offset = start + 7;
        while (true) {
            std::size_t comma = body.find(',');
            std::string_view item = body.substr(0, comma);
            try {
                entries.push_back(Scalar::parse(item));
            } catch (const std::invalid_argument& e) {
                throw ParseError(e.what(), offset);
            }
            if (comma == std::string_view::npos) {
                break;
            }
            offset += comma + 1;
            body.remove_prefix(comma + 1);
        }
        if (entries.size() != 4) {
            throw ParseError("mobius(...) takes four entries", start);
        }
        return Diffeo{Mobius(entries[0], entries[1], entries[2], entries[3]), std::nullopt, std::nullopt};
    }
    return Diffeo{parse_expr(text), std::nullopt, std::nullopt};
}

std::string to_string(const Diffeo& f)
{
    return std::visit([](const auto& m) { return to_string(m); }, f.forward);
}

Jet jet_at(const Diffeo& f, const Scalar& x0, int order)
{
    Jet j = std::visit([&](const auto& m) { return jet_at(m, x0, std::max(order, 1)); }, f.forward);
    // Exact germs only need to be invertible; float germs must preserve orientation.
    if (j[1].is_exact() ? j[1].is_zero() : j[1].sign() <= 0) {
        throw domain_error("map " + to_string(f) + " is not a local diffeomorphism at x = " + x0.to_string());
    }
    return order >= 1 ? j : j.truncated(order);
}

Scalar evaluate(const Diffeo& f, const Scalar& x0)
{
    return jet_at(f, x0, 0).value();
}

Scalar invert_diffeo_point(const Diffeo& f, const Scalar& y0)
{
    if (const auto* m = std::get_if<Mobius>(&f.forward)) {
        return inverse(*m)(y0);
    }
    if (f.inverse) {
        return evaluate(*f.inverse, y0);
    }
    if (!f.bracket) {
        throw domain_error("no inverse or bracket declared for " + to_string(f));
    }
    const Expr& e = std::get<Expr>(f.forward);
    double target = y0.to_double();
    auto g = [&](double t) { return evaluate(e, Scalar::real(t)).to_double() - target; };
    double lo = f.bracket->first.to_double();
    double hi = f.bracket->second.to_double();
    double glo = g(lo);
    double ghi = g(hi);
    if (glo == 0.0) {
        return Scalar::real(lo);
    }
    if (ghi == 0.0) {
        return Scalar::real(hi);
    }
    if ((glo < 0) == (ghi < 0)) {
        throw domain_error("bracket [" + f.bracket->first.to_string() + ", " + f.bracket->second.to_string() +
                           "] does not enclose a preimage of " + y0.to_string());
    }
    for (int i = 0; i < 60 && hi - lo > 1e-6 * (1 + std::abs(lo)); ++i) {
        double mid = 0.5 * (lo + hi);
        if ((g(mid) < 0) == (glo < 0)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    double t = 0.5 * (lo + hi);
    for (int i = 0; i < 50; ++i) {
        Jet j = jet_at(e, Scalar::real(t), 1);
        double step = (j.value().to_double() - target) / j[1].to_double();
        t -= step;
        if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(t))) {
            break;
        }
    }
    return Scalar::real(t);
}

} // namespace schwarz

namespace schwarz {

namespace {

bool is_number(const Expr& e, long v)
{
    return e.kind() == ExprKind::number && e.value().is_exact() && e.value() == Scalar(v);
}

Expr sum(const Expr& a, const Expr& b)
{
    if (is_number(a, 0)) {
        return b;
    }
    if (is_number(b, 0)) {
        return a;
    }
    return a + b;
}

Expr product(const Expr& a, const Expr& b)
{
    if (is_number(a, 0) || is_number(b, 0)) {
        return Expr::number(Scalar(0));
    }
    if (is_number(a, 1)) {
        return b;
    }
    if (is_number(b, 1)) {
        return a;
    }
    return a * b;
}

} // namespace

Expr differentiate(const Expr& e)
{
    if (!e.depends_on_x()) {
        return Expr::number(Scalar(0));
    }
    const Expr& u = e.lhs();
    switch (e.kind()) {
    case ExprKind::number:
        return Expr::number(Scalar(0));
    case ExprKind::variable:
        return Expr::number(Scalar(1));
    case ExprKind::negate:
        return Expr::negate(differentiate(u));
    case ExprKind::add:
        return sum(differentiate(u), differentiate(e.rhs()));
    case ExprKind::subtract:
        return differentiate(u) - differentiate(e.rhs());
    case ExprKind::multiply:
        return sum(product(differentiate(u), e.rhs()), product(u, differentiate(e.rhs())));
    case ExprKind::divide: {
        const Expr& v = e.rhs();
        if (!v.depends_on_x()) {
            return differentiate(u) / v;
        }
        Expr num = product(differentiate(u), v) - product(u, differentiate(v));
        return num / Expr::binary(ExprKind::power, v, Expr::number(Scalar(2)));
    }
    case ExprKind::power: {
        if (e.rhs().depends_on_x()) {
            throw domain_error("exponent must not depend on x: " + to_string(e));
        }
        Expr lowered = Expr::binary(ExprKind::power, u, e.rhs() - Expr::number(Scalar(1)));
        return product(product(e.rhs(), lowered), differentiate(u));
    }
    case ExprKind::function: {
        Expr du = differentiate(u);
        const std::string& f = e.name();
        if (f == "exp") {
            return product(e, du);
        }
        if (f == "log") {
            return du / u;
        }
        if (f == "sin") {
            return product(Expr::function("cos", u), du);
        }
        if (f == "cos") {
            return Expr::negate(product(Expr::function("sin", u), du));
        }
        if (f == "tan") {
            Expr sec2 = Expr::number(Scalar(1)) + Expr::binary(ExprKind::power, e, Expr::number(Scalar(2)));
            return product(sec2, du);
        }
        return du / (Expr::number(Scalar(2)) * e);
    }
    }
    throw std::logic_error("unreachable expression kind");
}

} // namespace schwarz
