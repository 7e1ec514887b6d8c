#include "parhiggs/bipoly.hpp"

#include <sstream>

#include "parhiggs/error.hpp"

namespace parhiggs {

BiPoly BiPoly::monomial(int dt, int dy, const Rat& c) {
    BiPoly b;
    b.set_coeff(dt, dy, c);
    return b;
}

BiPoly BiPoly::from_y_polys(const std::vector<Poly>& yc) {
    BiPoly b;
    for (int dy = 0; dy < int(yc.size()); ++dy)
        for (int dt = 0; dt <= yc[dy].degree(); ++dt) b.set_coeff(dt, dy, yc[dy].coeff(dt));
    return b;
}

BiPoly BiPoly::from_t_poly(const Poly& p) { return from_y_polys({p}); }

Rat BiPoly::coeff(int dt, int dy) const {
    auto it = c_.find({dt, dy});
    return it == c_.end() ? Rat(0) : it->second;
}

void BiPoly::set_coeff(int dt, int dy, const Rat& v) {
    check(dt >= 0 && dy >= 0, "negative bivariate degree");
    if (v == 0)
        c_.erase({dt, dy});
    else
        c_[{dt, dy}] = v;
}

int BiPoly::deg_t() const {
    int d = -1;
    for (auto& [k, v] : c_) d = std::max(d, k.first);
    return d;
}

int BiPoly::deg_y() const {
    int d = -1;
    for (auto& [k, v] : c_) d = std::max(d, k.second);
    return d;
}

std::vector<Poly> BiPoly::y_polys() const {
    std::vector<Poly> out(size_t(deg_y() + 1));
    for (auto& [k, v] : c_) out[k.second].set_coeff(k.first, v);
    return out;
}

BiPoly BiPoly::operator-() const {
    BiPoly r = *this;
    for (auto& [k, v] : r.c_) v = -v;
    return r;
}

BiPoly& BiPoly::operator+=(const BiPoly& o) {
    for (auto& [k, v] : o.c_) {
        Rat s = coeff(k.first, k.second) + v;
        set_coeff(k.first, k.second, s);
    }
    return *this;
}

BiPoly& BiPoly::operator-=(const BiPoly& o) {
    for (auto& [k, v] : o.c_) {
        Rat s = coeff(k.first, k.second) - v;
        set_coeff(k.first, k.second, s);
    }
    return *this;
}

BiPoly operator*(const BiPoly& a, const BiPoly& b) {
    BiPoly r;
    for (auto& [ka, va] : a.c_)
        for (auto& [kb, vb] : b.c_) {
            int dt = ka.first + kb.first, dy = ka.second + kb.second;
            Rat s = r.coeff(dt, dy) + va * vb;
            r.set_coeff(dt, dy, s);
        }
    return r;
}

BiPoly& BiPoly::operator*=(const BiPoly& o) {
    *this = *this * o;
    return *this;
}

BiPoly BiPoly::partial_t() const {
    BiPoly r;
    for (auto& [k, v] : c_)
        if (k.first > 0) r.set_coeff(k.first - 1, k.second, v * Rat(k.first));
    return r;
}

BiPoly BiPoly::partial_y() const {
    BiPoly r;
    for (auto& [k, v] : c_)
        if (k.second > 0) r.set_coeff(k.first, k.second - 1, v * Rat(k.second));
    return r;
}

Poly BiPoly::eval_t(const Rat& t0) const {
    Poly out;
    for (auto& [k, v] : c_) {
        Rat p(1);
        for (int i = 0; i < k.first; ++i) p *= t0;
        out.set_coeff(k.second, out.coeff(k.second) + v * p);
    }
    return out;
}

Poly BiPoly::eval_y(const Rat& y0) const {
    Poly out;
    for (auto& [k, v] : c_) {
        Rat p(1);
        for (int i = 0; i < k.second; ++i) p *= y0;
        out.set_coeff(k.first, out.coeff(k.first) + v * p);
    }
    return out;
}

Rat BiPoly::eval(const Rat& t0, const Rat& y0) const { return eval_t(t0).eval(y0); }

std::string BiPoly::str() const {
    auto yc = y_polys();
    std::ostringstream os;
    bool first = true;
    for (int dy = int(yc.size()) - 1; dy >= 0; --dy) {
        if (yc[dy].is_zero()) continue;
        if (!first) os << " + ";
        os << "(" << yc[dy].str() << ")";
        if (dy >= 1) os << "*y";
        if (dy > 1) os << "^" << dy;
        first = false;
    }
    return first ? "0" : os.str();
}

namespace {

// Bareiss determinant over Q[t]; divisions are exact in an integral domain.
Poly det_bareiss(std::vector<std::vector<Poly>> m) {
    const int n = int(m.size());
    if (n == 0) return Poly(1);
    Poly prev(1);
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m[k][k].is_zero()) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (!m[i][k].is_zero()) {
                    piv = i;
                    break;
                }
            if (piv < 0) return Poly();
            std::swap(m[k], m[piv]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j)
                m[i][j] = poly_exact_div(m[k][k] * m[i][j] - m[i][k] * m[k][j], prev);
            m[i][k] = Poly();
        }
        prev = m[k][k];
    }
    return sign > 0 ? m[n - 1][n - 1] : -m[n - 1][n - 1];
}

}  // namespace

Poly resultant_y(const BiPoly& f, const BiPoly& g) {
    require(!f.is_zero() && !g.is_zero(), ErrorKind::invalid, "resultant of zero polynomial");
    auto fc = f.y_polys(), gc = g.y_polys();
    const int df = int(fc.size()) - 1, dg = int(gc.size()) - 1;
    if (df == 0 && dg == 0) return Poly(1);
    const int n = df + dg;
    std::vector<std::vector<Poly>> syl(n, std::vector<Poly>(n));
    for (int i = 0; i < dg; ++i)
        for (int j = 0; j <= df; ++j) syl[i][i + j] = fc[df - j];
    for (int i = 0; i < df; ++i)
        for (int j = 0; j <= dg; ++j) syl[dg + i][i + j] = gc[dg - j];
    return det_bareiss(std::move(syl));
}

int ypoly_deg(const std::vector<Poly>& f) {
    for (int d = int(f.size()) - 1; d >= 0; --d)
        if (!f[d].is_zero()) return d;
    return -1;
}

void ypoly_trim(std::vector<Poly>& f) { f.resize(size_t(ypoly_deg(f) + 1)); }

std::vector<Poly> ypoly_mul(const std::vector<Poly>& f, const std::vector<Poly>& g) {
    if (ypoly_deg(f) < 0 || ypoly_deg(g) < 0) return {};
    std::vector<Poly> r(f.size() + g.size() - 1);
    for (size_t i = 0; i < f.size(); ++i)
        for (size_t j = 0; j < g.size(); ++j) r[i + j] += f[i] * g[j];
    ypoly_trim(r);
    return r;
}

std::pair<std::vector<Poly>, std::vector<Poly>> ypoly_divmod_monic(const std::vector<Poly>& f,
                                                                   const std::vector<Poly>& g) {
    int dg = ypoly_deg(g);
    check(dg >= 0 && g[dg] == Poly(1), "divisor must be monic in y");
    std::vector<Poly> r = f, q;
    ypoly_trim(r);
    int dr = ypoly_deg(r);
    if (dr >= dg) q.resize(dr - dg + 1);
    while ((dr = ypoly_deg(r)) >= dg) {
        Poly c = r[dr];
        q[dr - dg] = c;
        for (int j = 0; j <= dg; ++j) r[dr - dg + j] -= c * g[j];
        ypoly_trim(r);
    }
    ypoly_trim(q);
    return {q, r};
}

Poly ypoly_content(const std::vector<Poly>& f) {
    Poly c;
    for (const Poly& p : f) c = poly_gcd(c, p);
    return c;
}

namespace {

std::vector<Poly> ypoly_primitive(std::vector<Poly> f) {
    Poly c = ypoly_content(f);
    if (c.is_zero()) return f;
    for (Poly& p : f) p = poly_exact_div(p, c);
    return f;
}

// lc(g)^(deg f - deg g + 1) * f = q*g + rem
std::vector<Poly> ypoly_pseudo_rem(std::vector<Poly> f, const std::vector<Poly>& g) {
    int dg = ypoly_deg(g);
    check(dg >= 0, "pseudo-remainder by zero");
    Poly lg = g[dg];
    int df = ypoly_deg(f);
    while (df >= dg) {
        Poly c = f[df];
        for (int j = 0; j < int(f.size()); ++j) f[j] = f[j] * lg;
        for (int j = 0; j <= dg; ++j) f[df - dg + j] -= c * g[j];
        ypoly_trim(f);
        int dn = ypoly_deg(f);
        check(dn < df, "pseudo-division did not reduce degree");
        df = dn;
    }
    return f;
}

}  // namespace

std::vector<Poly> ypoly_gcd(std::vector<Poly> f, std::vector<Poly> g) {
    ypoly_trim(f);
    ypoly_trim(g);
    if (ypoly_deg(f) < 0) return g;
    if (ypoly_deg(g) < 0) return f;
    if (ypoly_deg(f) < ypoly_deg(g)) std::swap(f, g);
    f = ypoly_primitive(std::move(f));
    g = ypoly_primitive(std::move(g));
    while (true) {
        std::vector<Poly> r = ypoly_pseudo_rem(f, g);
        if (ypoly_deg(r) < 0) break;
        f = g;
        g = ypoly_primitive(std::move(r));
    }
    // g is the primitive gcd up to a Q[t]-unit; normalize its leading Poly.
    int d = ypoly_deg(g);
    if (d == 0) return {Poly(1)};
    Rat lead = g[d].leading();
    for (Poly& p : g) p = p.scaled(Rat(1) / lead);
    return g;
}

}  // namespace parhiggs
