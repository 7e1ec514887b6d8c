#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "parhiggs/bipoly.hpp"
#include "parhiggs/higgs.hpp"

namespace parhiggs {

// Coefficients of det(y*Id - Phi) = y^r + c_1 y^(r-1) + ... + c_r in the
// dt/q frame, deg c_i <= i(n-2).
struct HitchinPoint {
    int r = 0;
    int n = 0;
    std::vector<Poly> c;  // c[i-1] = c_i
    const Poly& ci(int i) const { return c[size_t(i - 1)]; }
};

HitchinPoint make_hitchin_point(int n, std::vector<Poly> c);  // validates bounds
HitchinPoint hitchin_map(const HiggsField& phi);

struct BaseDims {
    long dim_h = 0, dim_h0 = 0, dim_quotient = 0;
};
// Hitchin space, its Casimir-trivial subspace, and the quotient. At g = 0 the
// values are recomputed as h_line sums and must agree.
BaseDims base_dims(int g, int r, int n);

// Residue characteristic polynomials det(y*Id - A_p) per marked point.
struct CasimirData {
    std::vector<Poly> char_polys;  // in y, degree r, aligned with curve points
};
CasimirData casimir_project(const HitchinPoint& s, const MarkedCurve& curve);

struct SpectralCurve {
    BiPoly F;           // y^r + c_1 y^(r-1) + ... + c_r over (t, y)
    BiPoly G_infinity;  // chart at infinity: z^r + sum s^(i(n-2)) c_i(1/s) z^(r-i)
    int r = 0, n = 0;
    std::optional<long> ram_degree;  // deg Res_y(F, dF/dy) when nonzero
};
SpectralCurve spectral_build(const HitchinPoint& s);

struct SmoothnessReport {
    bool smooth = false;
    std::optional<std::pair<Rat, Rat>> rational_singular_point;
    std::string certificate;
    std::optional<long> genus;         // when smooth
    std::optional<long> branch_count;  // when smooth: deg Res_y(F, dF/dy)
    bool disc_squarefree = false;
    bool infinity_unramified = false;
};
// Exact smoothness over the algebraic closure by resultant/gcd elimination
// (no root isolation); both charts, including s = 0.
SmoothnessReport spectral_smooth(const SpectralCurve& x);

// Irreducible factorization over Q in place (rational roots for any degree,
// full splitting decided up to quartics).
std::vector<std::pair<Poly, int>> factor_poly_q(const Poly& p);

// Monic-in-y irreducible factorization over Q[t][y] via shifted Hensel
// lifting; deg_y <= 4.
std::vector<std::pair<std::vector<Poly>, int>> factor_monic_y(const std::vector<Poly>& f);

struct InvariantSub {
    SubbundleMap sub;
    InducedParabolic induced;
    std::vector<Poly> factor;  // the monic y-factor whose kernel produced it
};
// One entry per proper monic-in-y divisor of the spectral polynomial whose
// kernel sheaf is a proper subbundle; for Phi = 0 the coordinate sub-sums.
std::vector<InvariantSub> invariant_subbundles(const HiggsField& phi);

enum class HiggsStability { stable, stable_relative, semistable, unstable };
const char* higgs_stability_name(HiggsStability s);

struct HiggsStabilityReport {
    HiggsStability verdict = HiggsStability::stable;
    std::string certificate;
    Rat slope;
    std::optional<Rat> best_sub_slope;
    std::optional<InvariantSub> witness;
};
HiggsStabilityReport higgs_stable(const HiggsField& phi);

}  // namespace parhiggs
