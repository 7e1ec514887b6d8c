#pragma once

#include <map>
#include <utility>
#include <vector>

#include "parhiggs/poly.hpp"

namespace parhiggs {

// Bivariate polynomial over Q in (t, y), sparse map (t-degree, y-degree) -> c,
// no stored zeros. Carrier for spectral-curve equations F(t, y).
class BiPoly {
public:
    using Key = std::pair<int, int>;  // (t-degree, y-degree)

    BiPoly() = default;
    BiPoly(int c) { set_coeff(0, 0, Rat(c)); }    // NOLINT: implicit by design
    BiPoly(const Rat& c) { set_coeff(0, 0, c); }  // NOLINT: implicit by design
    static BiPoly monomial(int dt, int dy, const Rat& c);
    // index = y-degree, entry = coefficient in Q[t]
    static BiPoly from_y_polys(const std::vector<Poly>& yc);
    static BiPoly from_t_poly(const Poly& p);  // y-degree 0

    bool is_zero() const { return c_.empty(); }
    Rat coeff(int dt, int dy) const;
    void set_coeff(int dt, int dy, const Rat& v);
    int deg_t() const;  // -1 for zero
    int deg_y() const;
    const std::map<Key, Rat>& terms() const { return c_; }
    std::vector<Poly> y_polys() const;  // dense in y

    BiPoly operator-() const;
    BiPoly& operator+=(const BiPoly& o);
    BiPoly& operator-=(const BiPoly& o);
    friend BiPoly operator+(BiPoly a, const BiPoly& b) { return a += b; }
    friend BiPoly operator-(BiPoly a, const BiPoly& b) { return a -= b; }
    friend BiPoly operator*(const BiPoly& a, const BiPoly& b);
    BiPoly& operator*=(const BiPoly& o);
    friend bool operator==(const BiPoly& a, const BiPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const BiPoly& a, const BiPoly& b) { return !(a == b); }

    BiPoly partial_t() const;
    BiPoly partial_y() const;
    Poly eval_t(const Rat& t0) const;  // polynomial in y
    Poly eval_y(const Rat& y0) const;  // polynomial in t
    Rat eval(const Rat& t0, const Rat& y0) const;
    std::string str() const;

private:
    std::map<Key, Rat> c_;
};

// Sylvester-matrix resultant with respect to y; both inputs viewed as
// polynomials in y over Q[t]. Errors on zero input.
Poly resultant_y(const BiPoly& f, const BiPoly& g);

// ---- y-polynomial helpers (dense vector<Poly> indexed by y-degree) ----

int ypoly_deg(const std::vector<Poly>& f);  // -1 for zero
void ypoly_trim(std::vector<Poly>& f);
std::vector<Poly> ypoly_mul(const std::vector<Poly>& f, const std::vector<Poly>& g);
// Division by a divisor that is monic in y; stays inside Q[t][y].
std::pair<std::vector<Poly>, std::vector<Poly>> ypoly_divmod_monic(const std::vector<Poly>& f,
                                                                   const std::vector<Poly>& g);
// gcd over Q(t)[y] via primitive pseudo-remainder sequence; returned primitive
// over Q[t] with monic leading Poly coefficient.
std::vector<Poly> ypoly_gcd(std::vector<Poly> f, std::vector<Poly> g);
Poly ypoly_content(const std::vector<Poly>& f);

}  // namespace parhiggs
