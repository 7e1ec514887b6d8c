#pragma once

#include <map>
#include <utility>

#include "parhiggs/poly.hpp"
#include "parhiggs/rational.hpp"

namespace parhiggs {

// Laurent polynomial over Q: the chart-overlap coefficient ring of the
// two-chart cover of P^1. Sparse by exponent; no stored zeros.
class Laurent {
public:
    Laurent() = default;
    Laurent(int c) { set_coeff(0, Rat(c)); }    // NOLINT: implicit by design
    Laurent(const Rat& c) { set_coeff(0, c); }  // NOLINT: implicit by design
    static Laurent monomial(int e, const Rat& c);
    static Laurent from_poly(const Poly& p, int shift = 0);

    bool is_zero() const { return c_.empty(); }
    Rat coeff(int e) const;
    void set_coeff(int e, const Rat& v);
    int min_deg() const;
    int max_deg() const;
    const std::map<int, Rat>& terms() const { return c_; }

    Laurent operator-() const;
    Laurent& operator+=(const Laurent& o);
    Laurent& operator-=(const Laurent& o);
    friend Laurent operator+(Laurent a, const Laurent& b) { return a += b; }
    friend Laurent operator-(Laurent a, const Laurent& b) { return a -= b; }
    friend Laurent operator*(const Laurent& a, const Laurent& b);
    Laurent& operator*=(const Laurent& o);
    friend bool operator==(const Laurent& a, const Laurent& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Laurent& a, const Laurent& b) { return !(a == b); }

    Laurent scaled(const Rat& s) const;
    Rat eval(const Rat& x) const;  // x must be nonzero when negative exponents occur

    // L = t^shift * P with P(0) != 0 (zero -> shift 0, P = 0).
    std::pair<int, Poly> shifted_poly() const;

private:
    std::map<int, Rat> c_;
};

}  // namespace parhiggs
