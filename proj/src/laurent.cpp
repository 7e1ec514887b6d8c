#include "parhiggs/laurent.hpp"

#include "parhiggs/error.hpp"

namespace parhiggs {

Laurent Laurent::monomial(int e, const Rat& c) {
    Laurent l;
    l.set_coeff(e, c);
    return l;
}

Laurent Laurent::from_poly(const Poly& p, int shift) {
    Laurent l;
    for (int d = 0; d <= p.degree(); ++d) l.set_coeff(d + shift, p.coeff(d));
    return l;
}

Rat Laurent::coeff(int e) const {
    auto it = c_.find(e);
    return it == c_.end() ? Rat(0) : it->second;
}

void Laurent::set_coeff(int e, const Rat& v) {
    if (v == 0)
        c_.erase(e);
    else
        c_[e] = v;
}

int Laurent::min_deg() const {
    check(!is_zero(), "min_deg of zero");
    return c_.begin()->first;
}

int Laurent::max_deg() const {
    check(!is_zero(), "max_deg of zero");
    return c_.rbegin()->first;
}

Laurent Laurent::operator-() const {
    Laurent r = *this;
    for (auto& [e, v] : r.c_) v = -v;
    return r;
}

Laurent& Laurent::operator+=(const Laurent& o) {
    for (auto& [e, v] : o.c_) {
        Rat s = coeff(e) + v;
        set_coeff(e, s);
    }
    return *this;
}

Laurent& Laurent::operator-=(const Laurent& o) {
    for (auto& [e, v] : o.c_) {
        Rat s = coeff(e) - v;
        set_coeff(e, s);
    }
    return *this;
}

Laurent operator*(const Laurent& a, const Laurent& b) {
    Laurent r;
    for (auto& [ea, va] : a.c_)
        for (auto& [eb, vb] : b.c_) {
            Rat s = r.coeff(ea + eb) + va * vb;
            r.set_coeff(ea + eb, s);
        }
    return r;
}

Laurent& Laurent::operator*=(const Laurent& o) {
    *this = *this * o;
    return *this;
}

Laurent Laurent::scaled(const Rat& s) const {
    Laurent r;
    if (s == 0) return r;
    for (auto& [e, v] : c_) r.c_[e] = v * s;
    return r;
}

Rat Laurent::eval(const Rat& x) const {
    Rat acc(0);
    for (auto& [e, v] : c_) {
        if (e >= 0) {
            Rat p(1);
            for (int i = 0; i < e; ++i) p *= x;
            acc += v * p;
        } else {
            require(x != 0, ErrorKind::invalid, "Laurent evaluation at 0");
            Rat p(1);
            for (int i = 0; i < -e; ++i) p *= x;
            acc += v / p;
        }
    }
    return acc;
}

std::pair<int, Poly> Laurent::shifted_poly() const {
    if (is_zero()) return {0, Poly()};
    int lo = min_deg();
    Poly p;
    for (auto& [e, v] : c_) p.set_coeff(e - lo, v);
    return {lo, p};
}

}  // namespace parhiggs
