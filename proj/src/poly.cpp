#include "parhiggs/poly.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "parhiggs/error.hpp"

namespace parhiggs {

Poly Poly::monomial(int deg, const Rat& c) {
    Poly p;
    p.set_coeff(deg, c);
    return p;
}

Poly Poly::from_coeffs(std::vector<Rat> c) {
    Poly p;
    p.c_ = std::move(c);
    p.trim();
    return p;
}

Rat Poly::coeff(int d) const {
    if (d < 0 || d >= int(c_.size())) return Rat(0);
    return c_[d];
}

void Poly::set_coeff(int d, const Rat& v) {
    check(d >= 0, "negative polynomial degree");
    if (d >= int(c_.size())) {
        if (v == 0) return;
        c_.resize(d + 1, Rat(0));
    }
    c_[d] = v;
    trim();
}

Rat Poly::leading() const {
    check(!is_zero(), "leading coefficient of zero polynomial");
    return c_.back();
}

void Poly::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& x : r.c_) x = -x;
    return r;
}

Poly& Poly::operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rat(0));
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rat(0));
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<Rat> c(a.c_.size() + b.c_.size() - 1, Rat(0));
    for (size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == 0) continue;
        for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly::from_coeffs(std::move(c));
}

Poly& Poly::operator*=(const Poly& o) {
    *this = *this * o;
    return *this;
}

Poly Poly::scaled(const Rat& s) const {
    if (s == 0) return Poly();
    Poly r = *this;
    for (auto& x : r.c_) x *= s;
    return r;
}

Rat Poly::eval(const Rat& x) const {
    Rat v(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * x + *it;
    return v;
}

Poly Poly::derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<Rat> d(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * Rat(long(i));
    return Poly::from_coeffs(std::move(d));
}

std::string Poly::str(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int d = degree(); d >= 0; --d) {
        Rat c = coeff(d);
        if (c == 0) continue;
        if (!first) os << (c > 0 ? " + " : " - ");
        else if (c < 0)
            os << "-";
        Rat a = abs(c);
        if (a != 1 || d == 0) os << rat_str(a);
        if (d > 0) {
            if (a != 1) os << "*";
            os << var;
            if (d > 1) os << "^" << d;
        }
        first = false;
    }
    return os.str();
}

std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b) {
    require(!b.is_zero(), ErrorKind::invalid, "polynomial division by zero");
    Poly r = a, q;
    Rat lb = b.leading();
    int db = b.degree();
    while (!r.is_zero() && r.degree() >= db) {
        int d = r.degree() - db;
        Rat c = r.leading() / lb;
        q.set_coeff(d, c);
        r -= b * Poly::monomial(d, c);
    }
    return {q, r};
}

Poly poly_exact_div(const Poly& a, const Poly& b) {
    auto [q, r] = poly_divmod(a, b);
    check(r.is_zero(), "inexact polynomial division");
    return q;
}

Poly poly_gcd(const Poly& a, const Poly& b) {
    Poly x = a, y = b;
    while (!y.is_zero()) {
        Poly r = poly_divmod(x, y).second;
        x = y;
        y = r;
    }
    if (x.is_zero()) return x;
    return x.scaled(Rat(1) / x.leading());
}

Poly poly_squarefree_part(const Poly& p) {
    require(!p.is_zero(), ErrorKind::invalid, "squarefree part of zero polynomial");
    Poly g = poly_gcd(p, p.derivative());
    Poly s = poly_exact_div(p, g);
    return s.scaled(Rat(1) / s.leading());
}

Poly poly_pow(const Poly& p, int e) {
    check(e >= 0, "negative polynomial power");
    Poly r(1);
    for (int i = 0; i < e; ++i) r *= p;
    return r;
}

Poly poly_shift(const Poly& p, const Rat& c) {
    // Horner in (t + c).
    Poly r;
    Poly lin = Poly::t() + Poly(c);
    for (int d = p.degree(); d >= 0; --d) r = r * lin + Poly(p.coeff(d));
    return r;
}

Poly poly_reverse_to(const Poly& p, int m) {
    check(p.degree() <= m, "reverse bound below degree");
    Poly r;
    for (int d = 0; d <= p.degree(); ++d) r.set_coeff(m - d, p.coeff(d));
    return r;
}

std::vector<std::pair<Rat, int>> rational_roots(const Poly& p) {
    require(!p.is_zero(), ErrorKind::invalid, "rational roots of zero polynomial");
    std::vector<std::pair<Rat, int>> out;

    Poly w = p;
    int zero_mult = 0;
    while (w.coeff(0) == 0 && w.degree() >= 1) {
        w = poly_exact_div(w, Poly::t());
        ++zero_mult;
    }
    if (zero_mult) out.emplace_back(Rat(0), zero_mult);
    if (w.degree() < 1) {
        std::sort(out.begin(), out.end());
        return out;
    }

    // Primitive integer form.
    Int den_lcm = 1;
    for (const Rat& c : w.coeffs()) {
        Int d = c.get_den();
        den_lcm = lcm(den_lcm, d);
    }
    std::vector<Int> ic(w.degree() + 1);
    for (int i = 0; i <= w.degree(); ++i) {
        Rat v = w.coeff(i) * Rat(den_lcm);
        check(rat_is_integer(v), "denominator clearing failed");
        ic[i] = v.get_num();
    }
    Int g = 0;
    for (const Int& v : ic) g = gcd(g, v);
    for (Int& v : ic) v /= g;

    std::set<Rat> candidates;
    for (const Int& u : positive_divisors(ic.front()))
        for (const Int& v : positive_divisors(ic.back())) {
            if (gcd(u, v) != 1) continue;
            candidates.insert(make_rat(u, v));
            candidates.insert(make_rat(-u, v));
        }

    for (const Rat& r : candidates) {
        if (w.eval(r) != 0) continue;
        Poly lin = Poly::t() - Poly(r);
        int mult = 0;
        Poly rest = w;
        while (true) {
            auto [q, rem] = poly_divmod(rest, lin);
            if (!rem.is_zero()) break;
            rest = q;
            ++mult;
        }
        out.emplace_back(r, mult);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace parhiggs
