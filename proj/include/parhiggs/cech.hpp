#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "parhiggs/higgs.hpp"
#include "parhiggs/hitchin.hpp"

namespace parhiggs {

enum class PointConditionKind { none, parabolic, strongly_parabolic };

// Endomorphism-shaped sheaf on the two-chart cover: entry (i,j) is a section
// of O(a_i - a_j + extra_twist), with a flag condition at every marked point.
struct ConstrainedSheaf {
    ParabolicBundle bundle;
    int extra_twist = 0;
    PointConditionKind condition = PointConditionKind::parabolic;
};

struct SheafCohomology {
    long h0 = 0, h1 = 0, chi = 0;
    std::vector<MatP> h0_basis;  // global endomorphism matrices
    std::vector<MatL> h1_basis;  // overlap cochain representatives
    int window = 0;
};

// Truncated two-chart Cech computation with a stabilization check at window
// and window+1; retries with a doubled window (at most 3 times) before
// failing hard.
SheafCohomology sheaf_cohomology(const ConstrainedSheaf& s);
SheafCohomology sheaf_cohomology(const ConstrainedSheaf& s, int window);

enum class ComplexVariant { tangent, cotangent };

// Total cocycle (u0, u1; a01) for [S0 -> S1]: u_i are chart sections of S1,
// a01 an overlap section of S0, with u1 - u0 = d(a01) on the overlap.
struct HyperCocycle {
    MatP u0;
    MatL u1;
    MatL a01;
};

struct HyperH1 {
    long dim = 0;
    std::vector<HyperCocycle> basis;
    ComplexVariant variant = ComplexVariant::tangent;
    int window = 0;
    long les_coker_h0 = 0, les_ker_h1 = 0;  // independent long-exact-sequence route
};

struct SharpData {
    MatQ matrix;  // cotangent H1 -> tangent H1 in the computed bases
    long rank = 0;
    long kernel_dim = 0;
    long dim_tangent = 0, dim_cotangent = 0;
};

// Cech engine for one parabolic Higgs field: hypercohomology of
//   tangent:   ParEnd(E)  --[.,Phi]-->  ParEnd(E) (x) K(D)
//   cotangent: SParEnd(E) -[-[.,Phi]]-> SParEnd(E) (x) K(D)
// the anchor map between them, and the Serre-duality residue pairing.
class HyperEngine {
public:
    explicit HyperEngine(const HiggsField& phi);
    HyperEngine(const HiggsField& phi, int window);
    ~HyperEngine();
    HyperEngine(HyperEngine&&) noexcept;

    int window() const;
    const HyperH1& h1(ComplexVariant v);

    // (Id on the S0 part, -Id on the S1 part), expressed in the tangent basis.
    SharpData sharp();
    HyperCocycle sharp_image(const HyperCocycle& cotangent) const;

    // Res_0 of tr(a01_x * u0_y) + tr(u1_x * a01_y), the Serre pairing between
    // a cotangent and a tangent class.
    Rat pairing(const HyperCocycle& x, const HyperCocycle& y) const;
    // Equivalent form tr(a01_x * u1_y) + tr(u0_x * a01_y); used as a
    // cross-check, equal on cocycles.
    Rat pairing_alt(const HyperCocycle& x, const HyperCocycle& y) const;
    MatQ pairing_gram();  // cotangent basis x tangent basis
    MatQ gram_sharp();    // <x_i, sharp(x_j)>, skew

    // random total coboundary of the given complex (deterministic in seed)
    HyperCocycle random_coboundary(ComplexVariant v, unsigned seed) const;
    // random cocycle: random combination of H1 basis plus a coboundary
    HyperCocycle random_cocycle(ComplexVariant v, unsigned seed);
    bool is_cocycle(ComplexVariant v, const HyperCocycle& c) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Kernel dimension predicted for the anchor: sum over points of the
// centralizer dimension of the graded residue inside the Levi blocks, minus
// one for global scalars.
long sharp_kernel_formula(const HiggsField& phi);

// Derivative of the per-point residue characteristic polynomial coefficients
// along a chart-0 deformation v0 of the Higgs numerator; entries ordered
// (point, i = 1..r) as d(c_i(p)/q'(p)^i).
std::vector<Rat> casimir_differential(const HiggsField& phi, const MatP& v0);

struct AuditRow {
    std::string name;
    long formula = 0;
    long recomputed = 0;
    bool pass = false;
};
struct AuditReport {
    int g = 0, r = 0, n = 0;
    long d = 0;
    std::vector<AuditRow> rows;
    bool all_pass = false;
};
// Dimension identities of the Poisson/integrable structure: each row carries
// the closed formula and an independent recomputation.
AuditReport dimension_audit(int g, int r, int n, const std::vector<std::vector<int>>& mults,
                            long d = 0);

}  // namespace parhiggs
