#include "parhiggs/higgs.hpp"

#include "parhiggs/error.hpp"

namespace parhiggs {

bool HiggsField::is_zero() const {
    for (Index i = 0; i < numerator.rows(); ++i)
        for (Index j = 0; j < numerator.cols(); ++j)
            if (!numerator(i, j).is_zero()) return false;
    return true;
}

const char* higgs_class_name(HiggsClass c) {
    switch (c) {
        case HiggsClass::invalid: return "invalid";
        case HiggsClass::higgs_only: return "higgs_only";
        case HiggsClass::parabolic: return "parabolic";
        case HiggsClass::strongly_parabolic: return "strongly_parabolic";
    }
    return "invalid";
}

HiggsValidation validate(const HiggsField& phi) {
    phi.bundle.validate();
    const int r = phi.rank();
    HiggsValidation v;
    if (phi.numerator.rows() != r || phi.numerator.cols() != r) {
        v.cls = HiggsClass::invalid;
        v.detail = "numerator must be r x r";
        return v;
    }
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            const Poly& h = phi.numerator(i, j);
            int bound = phi.entry_bound(i, j);
            if (h.degree() > bound) {
                v.cls = HiggsClass::invalid;
                v.offending_entry = {i, j};
                v.detail = "entry (" + std::to_string(i) + "," + std::to_string(j) +
                           ") has degree " + std::to_string(h.degree()) + " > bound " +
                           std::to_string(bound);
                return v;
            }
        }

    bool all_parabolic = true, all_strong = true;
    for (int pi = 0; pi < phi.bundle.curve.n(); ++pi) {
        const FlagData& flag = phi.bundle.flag(pi);
        MatQ c = mat_inverse(flag.frame) * residue_matrix_at(phi, pi) * flag.frame;
        for (int u = 1; u <= r; ++u)
            for (int v2 = 1; v2 <= r; ++v2) {
                int bu = flag.block_of(u), bv = flag.block_of(v2);
                if (bu < bv && c(u - 1, v2 - 1) != 0) all_parabolic = false;
                if (bu <= bv && c(u - 1, v2 - 1) != 0) all_strong = false;
            }
    }
    v.cls = all_strong      ? HiggsClass::strongly_parabolic
            : all_parabolic ? HiggsClass::parabolic
                            : HiggsClass::higgs_only;
    return v;
}

MatQ residue_matrix_at(const HiggsField& phi, int point_index) {
    require(point_index >= 0 && point_index < phi.bundle.curve.n(), ErrorKind::invalid,
            "point index out of range");
    const Rat& p = phi.bundle.curve.point(point_index);
    MatQ a = eval_matp(phi.numerator, p);
    const Rat& qp = phi.bundle.curve.q_prime_at(point_index);
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j) a(i, j) /= qp;
    return a;
}

MatQ residue_matrix(const HiggsField& phi, const Rat& p) {
    for (int i = 0; i < phi.bundle.curve.n(); ++i)
        if (phi.bundle.curve.point(i) == p) return residue_matrix_at(phi, i);
    fail(ErrorKind::invalid, "residue requested at an unmarked point " + rat_str(p));
}

}  // namespace parhiggs
