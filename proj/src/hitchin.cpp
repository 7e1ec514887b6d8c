#include "parhiggs/hitchin.hpp"

#include <algorithm>
#include <numeric>

#include "parhiggs/error.hpp"

namespace parhiggs {

namespace {
using YP = std::vector<Poly>;

YP yp_derivative_y(const YP& f) {
    if (f.size() <= 1) return {};
    YP d(f.size() - 1);
    for (size_t i = 1; i < f.size(); ++i) d[i - 1] = f[i].scaled(Rat(long(i)));
    return d;
}

bool yp_is_monic(const YP& f) {
    int d = ypoly_deg(f);
    return d >= 0 && f[size_t(d)] == Poly(1);
}
}  // namespace

HitchinPoint make_hitchin_point(int n, std::vector<Poly> c) {
    require(n >= 3, ErrorKind::invalid, "need at least 3 marked points");
    HitchinPoint s;
    s.n = n;
    s.r = int(c.size());
    require(s.r >= 1, ErrorKind::invalid, "rank must be positive");
    for (int i = 1; i <= s.r; ++i)
        require(c[size_t(i - 1)].degree() <= i * (n - 2), ErrorKind::invalid,
                "coefficient c_" + std::to_string(i) + " exceeds degree bound " +
                    std::to_string(i * (n - 2)));
    s.c = std::move(c);
    return s;
}

HitchinPoint hitchin_map(const HiggsField& phi) {
    HiggsValidation v = validate(phi);
    require(v.cls != HiggsClass::invalid, ErrorKind::invalid,
            "Higgs field violates degree bounds: " + v.detail);
    return make_hitchin_point(phi.bundle.curve.n(), matp_charpoly(phi.numerator));
}

BaseDims base_dims(int g, int r, int n) {
    require(n >= 1, ErrorKind::invalid, "need n >= 1");
    require(r >= 1 && g >= 0, ErrorKind::invalid, "need r >= 1, g >= 0");
    BaseDims d;
    d.dim_h = long(2 * g - 2 + n) * r * (r + 1) / 2 + long(r) * (1 - g);
    d.dim_h0 =
        long(2 * g - 2) * r * (r + 1) / 2 + long(n) * r * (r - 1) / 2 + long(r) * (1 - g) + 1;
    d.dim_quotient = long(n) * r - 1;
    check(d.dim_h - d.dim_h0 == d.dim_quotient, "Hitchin quotient dimension identity failed");
    if (g == 0) {
        long h = 0, h0 = 0;
        for (int i = 1; i <= r; ++i) {
            h += h_line(long(i) * (n - 2)).h0;
            h0 += h_line(long(i) * (n - 2) - n).h0;
        }
        check(h == d.dim_h, "dim H disagrees with h_line sum at g = 0");
        check(h0 == d.dim_h0, "dim H0 disagrees with h_line sum at g = 0");
    }
    return d;
}

CasimirData casimir_project(const HitchinPoint& s, const MarkedCurve& curve) {
    require(s.n == curve.n(), ErrorKind::invalid, "point/curve marked-point count mismatch");
    CasimirData out;
    Rat trace_sum(0);
    for (int pi = 0; pi < curve.n(); ++pi) {
        const Rat& p = curve.point(pi);
        const Rat& qp = curve.q_prime_at(pi);
        Poly cp = Poly::monomial(s.r, Rat(1));
        Rat scale(1);
        for (int i = 1; i <= s.r; ++i) {
            scale /= qp;
            cp.set_coeff(s.r - i, s.ci(i).eval(p) * scale);
        }
        trace_sum += -cp.coeff(s.r - 1);
        out.char_polys.push_back(std::move(cp));
    }
    check(trace_sum == 0, "residue trace identity failed");
    return out;
}

SpectralCurve spectral_build(const HitchinPoint& s) {
    SpectralCurve x;
    x.r = s.r;
    x.n = s.n;
    YP f(size_t(s.r + 1));
    f[size_t(s.r)] = Poly(1);
    for (int i = 1; i <= s.r; ++i) f[size_t(s.r - i)] = s.ci(i);
    x.F = BiPoly::from_y_polys(f);
    YP g(size_t(s.r + 1));
    g[size_t(s.r)] = Poly(1);
    for (int i = 1; i <= s.r; ++i)
        g[size_t(s.r - i)] = poly_reverse_to(s.ci(i), i * (s.n - 2));
    x.G_infinity = BiPoly::from_y_polys(g);
    Poly d = resultant_y(x.F, x.F.partial_y());
    if (!d.is_zero()) x.ram_degree = d.degree();
    return x;
}

// ---- arithmetic modulo a squarefree t-modulus with D5 splitting ----

namespace {

Poly mod_m(const Poly& a, const Poly& m) { return poly_divmod(a, m).second; }

Poly inv_mod(const Poly& a, const Poly& m) {
    // extended Euclid; a must be invertible modulo m
    Poly r0 = m, r1 = mod_m(a, m);
    Poly u0, u1(1);
    while (!r1.is_zero()) {
        auto [q, r2] = poly_divmod(r0, r1);
        Poly u2 = u0 - q * u1;
        r0 = r1;
        r1 = r2;
        u0 = u1;
        u1 = u2;
    }
    check(r0.degree() == 0, "inverse of a zero divisor requested");
    return mod_m(u0.scaled(Rat(1) / r0.coeff(0)), m);
}

YP yp_mod(YP f, const Poly& m) {
    for (Poly& c : f) c = mod_m(c, m);
    ypoly_trim(f);
    return f;
}

// gcd of a and b in (Q[t]/(m))[y]; m squarefree. Splits m whenever a leading
// coefficient is a zero divisor, so each output branch carries a uniform gcd.
void d5_gcd(const Poly& m, YP a, YP b, std::vector<std::pair<Poly, YP>>& out) {
    a = yp_mod(std::move(a), m);
    b = yp_mod(std::move(b), m);
    while (true) {
        int db = ypoly_deg(b);
        if (db < 0) {
            out.emplace_back(m, std::move(a));
            return;
        }
        Poly lc = b[size_t(db)];
        Poly g = poly_gcd(lc, m);
        if (g.degree() == 0) {
            Poly li = inv_mod(lc, m);
            for (Poly& c : b) c = mod_m(c * li, m);
            // a mod b in y
            int da;
            while ((da = ypoly_deg(a)) >= db) {
                Poly c = a[size_t(da)];
                for (int j = 0; j <= db; ++j)
                    a[size_t(da - db + j)] = mod_m(a[size_t(da - db + j)] - c * b[size_t(j)], m);
                ypoly_trim(a);
            }
            std::swap(a, b);
        } else if (g.degree() == m.degree()) {
            b[size_t(db)] = Poly();
            ypoly_trim(b);
        } else {
            Poly m2 = poly_exact_div(m, g);
            m2 = m2.scaled(Rat(1) / m2.leading());
            d5_gcd(g, a, b, out);
            d5_gcd(m2, std::move(a), std::move(b), out);
            return;
        }
    }
}

std::optional<std::pair<Rat, Rat>> find_rational_singular(const SpectralCurve& x, const Poly& d) {
    std::vector<Rat> t_candidates;
    if (!d.is_zero()) {
        for (auto& [root, mult] : rational_roots(d)) t_candidates.push_back(root);
    } else {
        for (long v : {0L, 1L, -1L, 2L, -2L, 3L, -3L}) t_candidates.push_back(Rat(v));
    }
    BiPoly fy = x.F.partial_y(), ft = x.F.partial_t();
    for (const Rat& t0 : t_candidates) {
        Poly g = poly_gcd(poly_gcd(x.F.eval_t(t0), fy.eval_t(t0)), ft.eval_t(t0));
        if (g.degree() < 1) continue;
        for (auto& [y0, mult] : rational_roots(g)) {
            if (x.F.eval(t0, y0) == 0 && fy.eval(t0, y0) == 0 && ft.eval(t0, y0) == 0)
                return std::make_pair(t0, y0);
        }
    }
    return std::nullopt;
}

}  // namespace

SmoothnessReport spectral_smooth(const SpectralCurve& x) {
    const int r = x.F.deg_y();
    require(r >= 1, ErrorKind::invalid, "spectral polynomial must have positive y-degree");
    SmoothnessReport rep;

    YP f = x.F.y_polys();
    require(yp_is_monic(f), ErrorKind::invalid, "spectral polynomial must be monic in y");
    YP fy = yp_derivative_y(f);
    YP ft;
    {
        BiPoly pt = x.F.partial_t();
        ft = pt.is_zero() ? YP{} : pt.y_polys();
    }

    bool singular = false;
    std::string cert;
    Poly d;  // affine discriminant, zero iff F has a repeated y-factor

    YP rep_gcd = ypoly_gcd(f, fy);
    if (ypoly_deg(rep_gcd) >= 1) {
        singular = true;
        cert = "repeated y-factor of degree " + std::to_string(ypoly_deg(rep_gcd));
    } else {
        d = resultant_y(x.F, x.F.partial_y());
        check(!d.is_zero(), "squarefree spectral polynomial with zero discriminant");
        if (d.degree() >= 1) {
            Poly m = poly_squarefree_part(d);
            std::vector<std::pair<Poly, YP>> branches;
            d5_gcd(m, f, fy, branches);
            for (auto& [mb, h] : branches) {
                if (ypoly_deg(h) < 1) continue;
                if (ypoly_deg(ft) < 0) {  // dF/dt = 0: any branch root is singular
                    singular = true;
                    cert = "singular over modulus " + mb.str();
                    break;
                }
                std::vector<std::pair<Poly, YP>> b2;
                d5_gcd(mb, h, ft, b2);
                for (auto& [mb2, h2] : b2) {
                    if (ypoly_deg(h2) >= 1) {
                        singular = true;
                        cert = "singular over modulus " + mb2.str() + ", common y-factor degree " +
                               std::to_string(ypoly_deg(h2));
                        break;
                    }
                }
                if (singular) break;
            }
        }
    }

    // chart at infinity, only s = 0 is new
    Poly g0 = x.G_infinity.eval_t(Rat(0));
    Poly g0z = x.G_infinity.partial_y().eval_t(Rat(0));
    Poly g0s = x.G_infinity.partial_t().eval_t(Rat(0));
    Poly ginf = poly_gcd(poly_gcd(g0, g0z), g0s);
    if (ginf.degree() >= 1) {
        singular = true;
        cert += (cert.empty() ? "" : "; ");
        cert += "singular over s = 0 in the infinity chart";
    }

    rep.smooth = !singular;
    if (singular) {
        rep.certificate = cert;
        rep.rational_singular_point = find_rational_singular(x, d);
        return rep;
    }

    rep.certificate = "no common zero of (F, dF/dy, dF/dt) on either chart";
    long genus = 1 - long(r) * r + long(r) * x.n * (r - 1) / 2;
    rep.genus = genus;
    rep.branch_count = d.degree();
    rep.disc_squarefree = poly_squarefree_part(d).degree() == d.degree();
    Poly inf_fiber_sf = poly_gcd(g0, g0.derivative());
    rep.infinity_unramified = inf_fiber_sf.degree() == 0;
    if (rep.disc_squarefree && rep.infinity_unramified)
        check(2 * genus - 2 == -2 * long(r) + *rep.branch_count,
              "Riemann-Hurwitz audit failed on a smooth build");
    return rep;
}

// ---- univariate factorization over Q (full splitting through quartics) ----

namespace {

bool rat_sqrt(const Rat& s, Rat& root) {
    if (s < 0) return false;
    Int num = s.get_num(), den = s.get_den();
    if (mpz_perfect_square_p(num.get_mpz_t()) == 0) return false;
    if (mpz_perfect_square_p(den.get_mpz_t()) == 0) return false;
    Int rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    root = make_rat(rn, rd);
    return true;
}

// squarefree monic input without rational roots; degree 2..4
std::vector<Poly> factor_irrational_part(const Poly& p) {
    const int d = p.degree();
    if (d == 2 || d == 3) return {p};  // no rational root: irreducible
    require(d == 4, ErrorKind::unsupported,
            "univariate splitting beyond quartics is outside the engine");
    // depress: y = z - a3/4
    Rat a3 = p.coeff(3);
    Poly dep = poly_shift(p, -a3 / 4);
    Rat P = dep.coeff(2), Q = dep.coeff(1), R = dep.coeff(0);
    auto undo = [&](const Poly& f) { return poly_shift(f, a3 / 4); };
    if (Q == 0) {
        Rat s;
        if (rat_sqrt(P * P - 4 * R, s)) {
            Poly f1, f2;
            f1.set_coeff(2, Rat(1));
            f1.set_coeff(0, (P - s) / 2);
            f2.set_coeff(2, Rat(1));
            f2.set_coeff(0, (P + s) / 2);
            check(f1 * f2 == dep, "biquadratic split verification failed");
            return {undo(f1), undo(f2)};
        }
    }
    // resolvent cubic A^3 + 2P A^2 + (P^2 - 4R) A - Q^2
    Poly res;
    res.set_coeff(3, Rat(1));
    res.set_coeff(2, 2 * P);
    res.set_coeff(1, P * P - 4 * R);
    res.set_coeff(0, -Q * Q);
    for (auto& [a, mult] : rational_roots(res)) {
        if (a <= 0) continue;
        Rat alpha;
        if (!rat_sqrt(a, alpha)) continue;
        Rat beta = (P + a - Q / alpha) / 2;
        Rat gamma = (P + a + Q / alpha) / 2;
        Poly f1, f2;
        f1.set_coeff(2, Rat(1));
        f1.set_coeff(1, alpha);
        f1.set_coeff(0, beta);
        f2.set_coeff(2, Rat(1));
        f2.set_coeff(1, -alpha);
        f2.set_coeff(0, gamma);
        if (f1 * f2 == dep) return {undo(f1), undo(f2)};
    }
    return {p};  // irreducible quartic
}

}  // namespace

std::vector<std::pair<Poly, int>> factor_poly_q(const Poly& p) {
    require(!p.is_zero(), ErrorKind::invalid, "factorization of the zero polynomial");
    Poly work = p.scaled(Rat(1) / p.leading());
    std::vector<Poly> irreducibles;
    Poly sf = work.degree() >= 1 ? poly_squarefree_part(work) : Poly(1);
    for (auto& [root, mult] : rational_roots(sf)) {
        Poly lin = Poly::t() - Poly(root);
        irreducibles.push_back(lin);
        sf = poly_exact_div(sf, lin);
    }
    if (sf.degree() >= 2) {
        for (const Poly& f : factor_irrational_part(sf)) irreducibles.push_back(f);
    }
    std::vector<std::pair<Poly, int>> out;
    for (const Poly& f : irreducibles) {
        int e = 0;
        while (true) {
            auto [q, rem] = poly_divmod(work, f);
            if (!rem.is_zero()) break;
            work = q;
            ++e;
        }
        check(e >= 1, "claimed factor does not divide");
        out.emplace_back(f, e);
    }
    check(work.degree() == 0, "factorization incomplete");
    return out;
}

// ---- monic-in-y factorization over Q[t][y] via shifted Hensel lifting ----

namespace {

Poly poly_trunc(const Poly& p, int m) {
    Poly r;
    for (int d = 0; d < m && d <= p.degree(); ++d) r.set_coeff(d, p.coeff(d));
    return r;
}

YP yp_trunc(YP f, int m) {
    for (Poly& c : f) c = poly_trunc(c, m);
    ypoly_trim(f);
    return f;
}

YP yp_shift_t(const YP& f, const Rat& c) {
    YP r = f;
    for (Poly& p : r) p = poly_shift(p, c);
    return r;
}

// S monic in y, squarefree, S(0,y) = prod u_l with u_l pairwise coprime.
// Linear lifting to precision t^M.
std::vector<YP> hensel_lift(const YP& s, const std::vector<Poly>& u, int m_prec) {
    const int dy = ypoly_deg(s);
    const size_t nf = u.size();
    // solve sum_l delta_l * prod_{j != l} u_j = e, deg delta_l < deg u_l
    MatQ t(dy, dy);
    t.setZero();
    std::vector<int> col_of(nf + 1, 0);
    {
        Index col = 0;
        for (size_t l = 0; l < nf; ++l) {
            col_of[l] = int(col);
            Poly q(1);
            for (size_t j = 0; j < nf; ++j)
                if (j != l) q *= u[j];
            for (int i = 0; i < u[l].degree(); ++i) {
                Poly coli = Poly::monomial(i, Rat(1)) * q;
                check(coli.degree() < dy, "Bezout column overflow");
                for (int row = 0; row <= coli.degree(); ++row) t(row, col) = coli.coeff(row);
                ++col;
            }
        }
        check(col == dy, "Bezout system is not square");
    }
    MatQ tinv = mat_inverse(t);

    std::vector<YP> lifts(nf);
    for (size_t l = 0; l < nf; ++l) {
        lifts[l].resize(size_t(u[l].degree() + 1));
        for (int i = 0; i <= u[l].degree(); ++i) lifts[l][size_t(i)] = Poly(u[l].coeff(i));
    }
    for (int k = 1; k < m_prec; ++k) {
        YP prod = {Poly(1)};
        for (auto& g : lifts) prod = yp_trunc(ypoly_mul(prod, g), k + 1);
        YP err = s;
        err.resize(std::max(err.size(), prod.size()));
        for (size_t i = 0; i < prod.size(); ++i) err[i] -= prod[i];
        VecQ e(dy);
        for (int i = 0; i < dy; ++i)
            e(i) = i < int(err.size()) ? err[size_t(i)].coeff(k) : Rat(0);
        if (e.isZero(0)) continue;
        VecQ x = tinv * e;
        for (size_t l = 0; l < nf; ++l)
            for (int i = 0; i < u[l].degree(); ++i) {
                Rat v = x(col_of[l] + i);
                if (v != 0)
                    lifts[l][size_t(i)].set_coeff(k, lifts[l][size_t(i)].coeff(k) + v);
            }
    }
    return lifts;
}

std::vector<YP> hensel_factor_squarefree(const YP& s_in) {
    const int dy = ypoly_deg(s_in);
    if (dy == 1) return {s_in};
    require(dy <= 4, ErrorKind::unsupported, "y-degree beyond 4 is outside the engine");

    BiPoly sb = BiPoly::from_y_polys(s_in);
    Poly disc = resultant_y(sb, sb.partial_y());
    check(!disc.is_zero(), "squarefree input expected");
    Rat t0(0);
    for (long v = 0;; v = v > 0 ? -v : -v + 1) {
        if (disc.eval(Rat(v)) != 0) {
            t0 = Rat(v);
            break;
        }
    }
    YP s = yp_shift_t(s_in, t0);

    Poly u0;
    for (int i = 0; i <= dy; ++i) u0.set_coeff(i, i < int(s.size()) ? s[size_t(i)].coeff(0) : Rat(0));
    std::vector<Poly> uf;
    for (auto& [f, e] : factor_poly_q(u0)) {
        check(e == 1, "specialization at a good point must be squarefree");
        uf.push_back(f);
    }
    if (uf.size() == 1) return {s_in};

    int ebound = 0;
    for (int j = 0; j < dy; ++j)
        if (!s[size_t(j)].is_zero())
            ebound = std::max(ebound, (s[size_t(j)].degree() + dy - j - 1) / (dy - j));
    const int m_prec = dy * ebound + 2;
    std::vector<YP> lifts = hensel_lift(s, uf, m_prec);

    std::vector<int> remaining(uf.size());
    std::iota(remaining.begin(), remaining.end(), 0);
    YP w = s;
    std::vector<YP> out;
    while (!remaining.empty()) {
        bool found = false;
        for (size_t sz = 1; sz < remaining.size() && !found; ++sz) {
            std::vector<size_t> pick(sz);
            std::iota(pick.begin(), pick.end(), 0);
            while (true) {
                YP cand = {Poly(1)};
                for (size_t idx : pick)
                    cand = yp_trunc(ypoly_mul(cand, lifts[size_t(remaining[idx])]), m_prec);
                bool bounded = true;
                for (int j = 0; j <= ypoly_deg(cand); ++j)
                    if (cand[size_t(j)].degree() > dy * ebound) bounded = false;
                if (bounded) {
                    auto [q, rem] = ypoly_divmod_monic(w, cand);
                    if (ypoly_deg(rem) < 0) {
                        out.push_back(cand);
                        w = q;
                        std::vector<int> rem2;
                        for (size_t i = 0; i < remaining.size(); ++i)
                            if (std::find(pick.begin(), pick.end(), i) == pick.end())
                                rem2.push_back(remaining[i]);
                        remaining = std::move(rem2);
                        found = true;
                        break;
                    }
                }
                // next combination
                size_t pos = sz;
                while (pos > 0 && pick[pos - 1] == remaining.size() - sz + pos - 1) --pos;
                if (pos == 0) break;
                ++pick[pos - 1];
                for (size_t j = pos; j < sz; ++j) pick[j] = pick[j - 1] + 1;
            }
        }
        if (!found) {
            out.push_back(w);
            remaining.clear();
        }
    }
    for (YP& f : out) f = yp_shift_t(f, -t0);
    YP prod = {Poly(1)};
    for (const YP& f : out) prod = ypoly_mul(prod, f);
    check(prod == s_in, "Hensel recombination does not multiply back");
    return out;
}

}  // namespace

std::vector<std::pair<YP, int>> factor_monic_y(const YP& f_in) {
    YP f = f_in;
    ypoly_trim(f);
    require(yp_is_monic(f), ErrorKind::invalid, "factor_monic_y expects a monic-in-y input");
    const int dy = ypoly_deg(f);
    std::vector<std::pair<YP, int>> out;
    if (dy == 0) return out;

    YP g = ypoly_gcd(f, yp_derivative_y(f));
    YP s = f;
    if (ypoly_deg(g) >= 1) s = ypoly_divmod_monic(f, g).first;
    for (const YP& irr : hensel_factor_squarefree(s)) {
        int e = 0;
        YP w = f;
        while (true) {
            auto [q, rem] = ypoly_divmod_monic(w, irr);
            if (ypoly_deg(rem) >= 0) break;
            w = q;
            ++e;
            if (ypoly_deg(w) < ypoly_deg(irr)) break;
        }
        check(e >= 1, "squarefree factor does not divide the input");
        out.emplace_back(irr, e);
    }
    int total = 0;
    for (auto& [irr, e] : out) total += ypoly_deg(irr) * e;
    check(total == dy, "factor degrees do not sum to deg F");
    return out;
}

std::vector<InvariantSub> invariant_subbundles(const HiggsField& phi) {
    HiggsValidation v = validate(phi);
    require(v.cls != HiggsClass::invalid, ErrorKind::invalid, "invalid Higgs field: " + v.detail);
    const int r = phi.rank();
    std::vector<InvariantSub> out;

    if (phi.is_zero()) {
        // every subbundle is invariant; coordinate sub-sums as representatives
        for (int k = 1; k <= r - 1; ++k) {
            MatP incl(r, k);
            for (int i = 0; i < r; ++i)
                for (int j = 0; j < k; ++j) incl(i, j) = (i == j) ? Poly(1) : Poly();
            SubbundleMap sm = saturate(phi.bundle, incl);
            InducedParabolic ind = induce_sub(phi.bundle, sm);
            YP factor(size_t(k + 1));
            factor[size_t(k)] = Poly(1);
            out.push_back({std::move(sm), std::move(ind), std::move(factor)});
        }
        return out;
    }

    HitchinPoint s = hitchin_map(phi);
    YP f(size_t(r + 1));
    f[size_t(r)] = Poly(1);
    for (int i = 1; i <= r; ++i) f[size_t(r - i)] = s.ci(i);
    auto factors = factor_monic_y(f);

    std::vector<MatP> hpow;
    {
        MatP id(r, r);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) id(i, j) = (i == j) ? Poly(1) : Poly();
        hpow.push_back(id);
        for (int k = 1; k <= r; ++k) hpow.push_back(hpow.back() * phi.numerator);
    }

    std::vector<int> exp(factors.size(), 0);
    while (true) {
        // next exponent vector
        size_t pos = 0;
        while (pos < exp.size() && exp[pos] == factors[pos].second) {
            exp[pos] = 0;
            ++pos;
        }
        if (pos == exp.size()) break;
        ++exp[pos];

        bool all_max = true;
        for (size_t i = 0; i < exp.size(); ++i)
            if (exp[i] != factors[i].second) all_max = false;
        if (all_max) continue;  // G = F gives the whole bundle

        YP g = {Poly(1)};
        for (size_t i = 0; i < exp.size(); ++i)
            for (int e = 0; e < exp[i]; ++e) g = ypoly_mul(g, factors[i].first);
        const int dg = ypoly_deg(g);
        if (dg < 1 || dg >= r) continue;

        MatP mg(r, r);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) {
                Poly acc;
                for (int k = 0; k <= dg; ++k) acc += g[size_t(k)] * hpow[size_t(k)](i, j);
                mg(i, j) = acc;
            }
        MatP kernel = kernel_module(mg);
        if (kernel.cols() == 0 || kernel.cols() == r) continue;
        SubbundleMap sm = saturate(phi.bundle, kernel);
        // invariance: H maps the column module into itself over Q(t)
        MatP joint(r, sm.incl.cols() + sm.incl.cols());
        joint.block(0, 0, r, sm.incl.cols()) = sm.incl;
        joint.block(0, sm.incl.cols(), r, sm.incl.cols()) = phi.numerator * sm.incl;
        check(generic_rank(joint) == sm.incl.cols(), "factor kernel is not Higgs-invariant");
        InducedParabolic ind = induce_sub(phi.bundle, sm);
        out.push_back({std::move(sm), std::move(ind), g});
    }
    return out;
}

const char* higgs_stability_name(HiggsStability s) {
    switch (s) {
        case HiggsStability::stable: return "stable";
        case HiggsStability::stable_relative: return "stable_relative_to_enumeration";
        case HiggsStability::semistable: return "semistable";
        case HiggsStability::unstable: return "unstable";
    }
    return "unstable";
}

HiggsStabilityReport higgs_stable(const HiggsField& phi) {
    HiggsValidation v = validate(phi);
    require(v.cls != HiggsClass::invalid, ErrorKind::invalid, "invalid Higgs field: " + v.detail);
    HiggsStabilityReport rep;
    rep.slope = pdeg_slope(phi.bundle).slope;

    SmoothnessReport sm = spectral_smooth(spectral_build(hitchin_map(phi)));
    if (sm.smooth) {
        rep.verdict = HiggsStability::stable;
        rep.certificate = "smooth spectral curve";
        return rep;
    }

    if (phi.is_zero() && phi.rank() <= 2) {
        StabilityReport bs = is_stable(phi.bundle);
        rep.best_sub_slope = bs.best_sub_slope;
        rep.certificate = "zero Higgs field: " + bs.method;
        switch (bs.verdict) {
            case Stability::stable: rep.verdict = HiggsStability::stable; break;
            case Stability::semistable_not_stable: rep.verdict = HiggsStability::semistable; break;
            case Stability::unstable: rep.verdict = HiggsStability::unstable; break;
        }
        if (bs.witness) {
            InvariantSub w;
            w.sub = *bs.witness;
            w.induced = induce_sub(phi.bundle, w.sub);
            w.factor.assign(size_t(w.sub.sub_rank() + 1), Poly());
            w.factor[size_t(w.sub.sub_rank())] = Poly(1);
            rep.witness = std::move(w);
        }
        return rep;
    }

    std::vector<InvariantSub> subs = invariant_subbundles(phi);
    if (subs.empty()) {
        rep.verdict = HiggsStability::stable_relative;
        rep.certificate = "no invariant subbundles from y-factor kernels";
        return rep;
    }
    size_t best = 0;
    for (size_t i = 1; i < subs.size(); ++i)
        if (subs[i].induced.slope > subs[best].induced.slope) best = i;
    rep.best_sub_slope = subs[best].induced.slope;
    if (*rep.best_sub_slope > rep.slope) {
        rep.verdict = HiggsStability::unstable;
        rep.certificate = "invariant subbundle violates the slope inequality";
    } else if (*rep.best_sub_slope == rep.slope) {
        rep.verdict = HiggsStability::semistable;
        rep.certificate = "invariant subbundle achieves slope equality";
    } else {
        rep.verdict = HiggsStability::stable_relative;
        rep.certificate = "all enumerated invariant subbundles have smaller slope";
    }
    rep.witness = subs[best];
    return rep;
}

}  // namespace parhiggs
