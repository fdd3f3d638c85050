#include "schwarz/diffpoly.hpp"

#include <algorithm>
#include <stdexcept>

namespace schwarz {

namespace {

bool all_zero(const Vector& v)
{
    return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return s.is_zero(); });
}

} // namespace

DiffPoly DiffPoly::function(int fn, int order, std::size_t unknowns)
{
    DiffPoly p(unknowns);
    Vector c(unknowns + 1, Scalar(0));
    c[0] = Scalar(1);
    p.terms_[{Factor{fn, order}}] = c;
    return p;
}

DiffPoly DiffPoly::constant(const Scalar& value, std::size_t unknowns)
{
    DiffPoly p(unknowns);
    Vector c(unknowns + 1, Scalar(0));
    c[0] = value;
    p.add_term({}, c);
    return p;
}

bool DiffPoly::is_known() const
{
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) {
        return std::all_of(t.second.begin() + 1, t.second.end(), [](const Scalar& s) { return s.is_zero(); });
    });
}

void DiffPoly::add_term(const Monomial& m, const Vector& c)
{
    if (all_zero(c)) {
        return;
    }
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        for (std::size_t i = 0; i < c.size(); ++i) {
            it->second[i] += c[i];
        }
        if (all_zero(it->second)) {
            terms_.erase(it);
        }
    }
}

DiffPoly DiffPoly::times_unknown(std::size_t u) const
{
    if (u >= unknowns_) {
        throw std::out_of_range("unknown index out of range");
    }
    if (!is_known()) {
        throw std::logic_error("product of two unknowns leaves the linear setting");
    }
    DiffPoly out(unknowns_);
    for (const auto& [m, c] : terms_) {
        Vector v(unknowns_ + 1, Scalar(0));
        v[u + 1] = c[0];
        out.add_term(m, v);
    }
    return out;
}

DiffPoly DiffPoly::derive(int times) const
{
    DiffPoly cur = *this;
    for (int t = 0; t < times; ++t) {
        DiffPoly next(unknowns_);
        for (const auto& [m, c] : cur.terms_) {
            for (std::size_t i = 0; i < m.size(); ++i) {
                Monomial d = m;
                d[i].order += 1;
                std::sort(d.begin(), d.end());
                next.add_term(d, c);
            }
        }
        cur = std::move(next);
    }
    return cur;
}

DiffPoly DiffPoly::substitute(int fn, const std::vector<Scalar>& values) const
{
    DiffPoly out(unknowns_);
    for (const auto& [m, c] : terms_) {
        Scalar factor(1);
        Monomial rest;
        for (const auto& f : m) {
            if (f.fn == fn) {
                factor *= static_cast<std::size_t>(f.order) < values.size() ? values[static_cast<std::size_t>(f.order)]
                                                                             : Scalar(0);
            } else {
                rest.push_back(f);
            }
        }
        if (factor.is_zero()) {
            continue;
        }
        Vector v = c;
        for (auto& s : v) {
            s *= factor;
        }
        out.add_term(rest, v);
    }
    return out;
}

DiffPoly DiffPoly::coefficient_of(int fn, int order) const
{
    DiffPoly out(unknowns_);
    for (const auto& [m, c] : terms_) {
        auto count = std::count_if(m.begin(), m.end(), [&](const Factor& f) { return f.fn == fn; });
        if (count != 1) {
            if (count > 1) {
                throw std::logic_error("coefficient_of needs a polynomial linear in the function");
            }
            continue;
        }
        auto it = std::find(m.begin(), m.end(), Factor{fn, order});
        if (it == m.end()) {
            continue;
        }
        Monomial rest = m;
        rest.erase(rest.begin() + (it - m.begin()));
        out.add_term(rest, c);
    }
    return out;
}

DiffPoly DiffPoly::assign(std::size_t u, const Scalar& value) const
{
    DiffPoly out(unknowns_);
    for (const auto& [m, c] : terms_) {
        Vector v = c;
        v[0] += v[u + 1] * value;
        v[u + 1] = Scalar(0);
        out.add_term(m, v);
    }
    return out;
}

DiffPoly& DiffPoly::operator+=(const DiffPoly& o)
{
    if (o.unknowns_ != unknowns_) {
        throw std::invalid_argument("differential polynomials over different unknowns");
    }
    for (const auto& [m, c] : o.terms_) {
        add_term(m, c);
    }
    return *this;
}

DiffPoly& DiffPoly::operator-=(const DiffPoly& o)
{
    return *this += o * Scalar(-1);
}

DiffPoly& DiffPoly::operator*=(const Scalar& s)
{
    if (s.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, c] : terms_) {
        for (auto& v : c) {
            v *= s;
        }
    }
    return *this;
}

DiffPoly operator*(const DiffPoly& a, const DiffPoly& b)
{
    if (a.unknowns_ != b.unknowns_) {
        throw std::invalid_argument("differential polynomials over different unknowns");
    }
    bool a_known = a.is_known();
    if (!a_known && !b.is_known()) {
        throw std::logic_error("product of two unknowns leaves the linear setting");
    }
    DiffPoly out(a.unknowns_);
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            Monomial m = ma;
            m.insert(m.end(), mb.begin(), mb.end());
            std::sort(m.begin(), m.end());
            Vector v = a_known ? cb : ca;
            const Scalar& k = a_known ? ca[0] : cb[0];
            for (auto& s : v) {
                s *= k;
            }
            out.add_term(m, v);
        }
    }
    return out;
}

void append_equations(const DiffPoly& p, LinearSystem& sys)
{
    for (const auto& [m, c] : p.terms()) {
        sys.matrix.emplace_back(c.begin() + 1, c.end());
        sys.rhs.push_back(-c[0]);
    }
}

} // namespace schwarz
