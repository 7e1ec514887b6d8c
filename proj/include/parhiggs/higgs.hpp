#pragma once

#include <optional>
#include <string>
#include <utility>

#include "parhiggs/parabolic.hpp"

namespace parhiggs {

// Higgs field Phi = H(t) * (dt/q) with numerator matrix H over Q[t],
// deg H_ij <= a_i - a_j + n - 2 (entry identically zero when the bound is
// negative).
struct HiggsField {
    ParabolicBundle bundle;
    MatP numerator;

    int rank() const { return bundle.rank(); }
    int entry_bound(int i, int j) const {
        return bundle.splitting[size_t(i)] - bundle.splitting[size_t(j)] + bundle.curve.n() - 2;
    }
    bool is_zero() const;
};

enum class HiggsClass { invalid, higgs_only, parabolic, strongly_parabolic };
const char* higgs_class_name(HiggsClass c);

struct HiggsValidation {
    HiggsClass cls = HiggsClass::invalid;
    std::optional<std::pair<int, int>> offending_entry;  // on degree-bound violation
    std::string detail;
};

// Degree bounds, then the frame-conjugated residue at every marked point is
// tested for block (parabolic) and strict block (strongly parabolic) lower
// triangularity; the classification is the strongest property that holds at
// all points.
HiggsValidation validate(const HiggsField& phi);

// A_p = H(p)/q'(p). Errors when p is not marked.
MatQ residue_matrix(const HiggsField& phi, const Rat& p);
MatQ residue_matrix_at(const HiggsField& phi, int point_index);

}  // namespace parhiggs
