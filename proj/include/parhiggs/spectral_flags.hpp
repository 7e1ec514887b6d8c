#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "parhiggs/higgs.hpp"

namespace parhiggs {

// Ordered grouping of the eigenvalue multiset of a residue matrix; group
// sizes match the target multiplicities, group l feeds graded piece l.
struct EigenGrouping {
    std::vector<std::vector<Rat>> groups;  // each sorted ascending
};

// Eigenvalues with multiplicity, sorted. Errors `nonsplit` when the
// characteristic polynomial has irrational roots.
std::vector<std::pair<Rat, int>> split_eigenvalues(const MatQ& a);

// Errors `ambiguity` unless the minimal polynomial has full degree
// (regularity; compatible flags are unique only then).
void require_regular(const MatQ& a);

// Frame of the unique a-invariant flag realizing the grouping:
// E_{p,j} = image of prod_{l<j} prod_{sigma in group_l} (A - sigma Id).
// Verified internally: dimensions, invariance, graded spectra.
MatQ flag_from_grouping(const MatQ& a, const std::vector<int>& mults, const EigenGrouping& g);

struct FlagEnumeration {
    std::vector<EigenGrouping> groupings;
    std::vector<MatQ> frames;
    long count() const { return long(frames.size()); }
};
// One frame per distinct grouping; r! for full flags with distinct
// eigenvalues.
FlagEnumeration enumerate_flags(const MatQ& a, const std::vector<int>& mults);

struct CoarsenResult {
    HiggsField field;
    HiggsClass fine_class, coarse_class;
    std::optional<StabilityReport> stability;  // re-checked when r <= 2
};
// Forgets flag steps by merging adjacent blocks; the frame is unchanged, the
// Higgs field is revalidated (never weaker) and stability re-derived.
CoarsenResult coarsen(const HiggsField& phi, const std::vector<std::vector<int>>& target_mults,
                      const std::vector<std::vector<Rat>>& target_weights);

// deg L = d + r(1-r)(1-g-n/2) for the spectral line bundle.
long spectral_line_degree(long d, int r, int g, int n);

}  // namespace parhiggs
