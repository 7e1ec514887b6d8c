#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "parhiggs/curve.hpp"
#include "parhiggs/linalg.hpp"

namespace parhiggs {

// Flag in the fiber over one marked point. The frame is an invertible r x r
// matrix whose last d_i columns span E_{p,i}, d_i = sum_{j>=i} m_j; weights
// are strictly increasing in [0,1).
struct FlagData {
    std::vector<int> mults;
    MatQ frame;
    std::vector<Rat> weights;

    int steps() const { return int(mults.size()); }
    int rank() const;
    int d(int i) const;           // 1-based step -> codim offset, d(1) = r
    int block_of(int idx) const;  // 1-based frame column index -> step
    MatQ subspace(int i) const;   // E_{p,i}, columns
    void validate(int r) const;
};

// Bundle O(a_1) + ... + O(a_r) in Grothendieck normal form with a flag at
// every marked point.
struct ParabolicBundle {
    MarkedCurve curve;
    std::vector<int> splitting;  // non-increasing
    std::vector<FlagData> flags;

    int rank() const { return int(splitting.size()); }
    long degree() const;
    const FlagData& flag(int i) const { return flags[size_t(i)]; }
    void validate() const;
};

struct PdegSlope {
    Rat pdeg, slope;
};
PdegSlope pdeg_slope(const ParabolicBundle& e);

// Saturated inclusion O(b_1) + ... + O(b_k) -> E; torsion-free cokernel, the
// k x k minors of incl are coprime and the leading-coefficient matrix at
// infinity has full rank.
struct SubbundleMap {
    MatP incl;
    std::vector<int> twists;  // b_1 >= ... >= b_k
    int sub_rank() const { return int(twists.size()); }
    long degree() const;
};

// Clears torsion (module saturation against the left kernel) and slack at
// infinity (weighted column reduction). Errors on rank-deficient input.
SubbundleMap saturate(const ParabolicBundle& e, const MatP& raw);

struct InducedStep {
    int mult;
    Rat weight;
};
struct InducedPoint {
    std::vector<InducedStep> steps;
};
struct InducedParabolic {
    std::vector<InducedPoint> points;
    Rat pdeg, slope;
};
// Parabolic structure induced on a saturated subbundle by intersecting its
// fibers with the flags, discarding repeats, keeping the largest weight.
InducedParabolic induce_sub(const ParabolicBundle& e, const SubbundleMap& f);

enum class Stability { stable, semistable_not_stable, unstable };
const char* stability_name(Stability s);

struct StabilityReport {
    Stability verdict = Stability::stable;
    Rat slope;
    std::optional<Rat> best_sub_slope;
    std::optional<SubbundleMap> witness;
    std::string method;
};

// Exhaustive for r <= 2: enumerates line subbundles by degree, down to the
// provable cutoff d > slope - n, over all incidence patterns with the flag
// lines. r = 1 is vacuously stable; r >= 3 without candidates errors.
StabilityReport is_stable(const ParabolicBundle& e);
// Any rank, verdict relative to the supplied candidate subbundles.
StabilityReport is_stable(const ParabolicBundle& e, const std::vector<SubbundleMap>& candidates);

// Flag type and weights without curve geometry; genericity is pure weight
// arithmetic.
struct WeightSystem {
    std::vector<std::vector<int>> mults;
    std::vector<std::vector<Rat>> weights;
};

struct GenericityCertificate {
    bool generic = true;
    // witness when non-generic
    int k = 0;
    long d_prime = 0;
    std::vector<std::vector<int>> selection;  // per point, copies taken per step
    // scanned integer windows, one per k: (k, lo, hi)
    std::vector<std::array<long, 3>> windows;
};

// Non-generic iff for some k < r an integer d' and size-k weight selections
// at every point satisfy d' + sum = k * slope.
GenericityCertificate is_generic_weights(int r, long d, const WeightSystem& ws);
GenericityCertificate is_generic_weights(const ParabolicBundle& e);

enum class EndVariant { parabolic, strongly_parabolic };

// (r^2 - sum m_i^2)/2 for parabolic, r^2 - that for strongly parabolic.
long point_codim(const std::vector<int>& mults, EndVariant variant);

struct GlobalEndSpace {
    std::vector<MatP> basis;  // H^0
    long h0 = 0, h1 = 0, chi = 0;
};

// H^0 of the (strongly) parabolic endomorphism sheaf twisted by O(twist),
// computed as the exact solution space of degree-bounded entries with the
// frame-conjugated block conditions at every marked point. h1 = h0 - chi.
GlobalEndSpace global_par_end(const ParabolicBundle& e, EndVariant variant, int twist);

}  // namespace parhiggs
