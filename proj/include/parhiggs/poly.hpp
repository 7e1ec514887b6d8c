#pragma once

#include <string>
#include <utility>
#include <vector>

#include "parhiggs/rational.hpp"

namespace parhiggs {

// Dense univariate polynomial over Q, coefficients lowest-degree first.
// Degrees in play stay small (<= r(n-2), a few dozen), so dense is right.
class Poly {
public:
    Poly() = default;
    Poly(int c) { set_coeff(0, Rat(c)); }          // NOLINT: implicit by design
    Poly(const Rat& c) { set_coeff(0, c); }        // NOLINT: implicit by design
    static Poly t() { return monomial(1, Rat(1)); }
    static Poly monomial(int deg, const Rat& c);
    static Poly from_coeffs(std::vector<Rat> c);

    int degree() const { return int(c_.size()) - 1; }  // -1 for zero
    bool is_zero() const { return c_.empty(); }
    Rat coeff(int d) const;
    void set_coeff(int d, const Rat& v);
    const std::vector<Rat>& coeffs() const { return c_; }
    Rat leading() const;

    Poly operator-() const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Poly& o);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    Poly scaled(const Rat& s) const;
    Rat eval(const Rat& x) const;
    Poly derivative() const;
    std::string str(const std::string& var = "t") const;

private:
    void trim();
    std::vector<Rat> c_;
};

// Field division: a = q*b + r with deg r < deg b. b must be nonzero.
std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b);
// Division known to be exact; remainder is checked to vanish.
Poly poly_exact_div(const Poly& a, const Poly& b);
// Monic gcd; zero iff both inputs are zero.
Poly poly_gcd(const Poly& a, const Poly& b);
Poly poly_squarefree_part(const Poly& p);  // monic
Poly poly_pow(const Poly& p, int e);
Poly poly_shift(const Poly& p, const Rat& c);  // p(t + c)
// Coefficients reversed against a degree bound m >= deg p:  t^m * p(1/t).
Poly poly_reverse_to(const Poly& p, int m);

// All rational roots with multiplicities, sorted by value. The scan is the
// rational-root theorem over the primitive integer form of p.
std::vector<std::pair<Rat, int>> rational_roots(const Poly& p);

}  // namespace parhiggs
