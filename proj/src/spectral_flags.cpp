#include "parhiggs/spectral_flags.hpp"

#include <algorithm>

#include "parhiggs/error.hpp"

namespace parhiggs {

std::vector<std::pair<Rat, int>> split_eigenvalues(const MatQ& a) {
    Poly cp = mat_charpoly(a);
    auto roots = rational_roots(cp);
    int total = 0;
    for (auto& [v, m] : roots) total += m;
    require(total == int(a.rows()), ErrorKind::nonsplit,
            "characteristic polynomial does not split over Q");
    return roots;
}

void require_regular(const MatQ& a) {
    require(mat_minpoly(a).degree() == int(a.rows()), ErrorKind::ambiguity,
            "residue matrix is not regular; compatible flag is not unique");
}

namespace {

// columns of `inner` plus enough columns of `outer` to span `outer`
MatQ extend_basis(const MatQ& outer, const MatQ& inner, MatQ& added) {
    MatQ acc = inner;
    std::vector<Index> picked;
    for (Index j = 0; j < outer.cols(); ++j) {
        MatQ trial(outer.rows(), acc.cols() + 1);
        if (acc.cols() > 0) trial.block(0, 0, outer.rows(), acc.cols()) = acc;
        trial.col(acc.cols()) = outer.col(j);
        if (mat_rank(trial) > acc.cols()) {
            acc = trial;
            picked.push_back(j);
        }
    }
    added = MatQ(outer.rows(), Index(picked.size()));
    for (Index k = 0; k < Index(picked.size()); ++k) added.col(k) = outer.col(picked[size_t(k)]);
    return acc;
}

}  // namespace

MatQ flag_from_grouping(const MatQ& a, const std::vector<int>& mults, const EigenGrouping& g) {
    const int r = int(a.rows());
    require(int(g.groups.size()) == int(mults.size()), ErrorKind::invalid,
            "grouping size must match the multiplicities");
    auto eig = split_eigenvalues(a);
    require_regular(a);
    {
        std::vector<Rat> all;
        for (auto& grp : g.groups) all.insert(all.end(), grp.begin(), grp.end());
        std::sort(all.begin(), all.end());
        std::vector<Rat> expect;
        for (auto& [v, m] : eig) expect.insert(expect.end(), size_t(m), v);
        require(all == expect, ErrorKind::invalid,
                "grouping is not a partition of the eigenvalue multiset");
        for (size_t i = 0; i < g.groups.size(); ++i)
            require(int(g.groups[i].size()) == mults[i], ErrorKind::invalid,
                    "group sizes must match the multiplicities");
    }

    const int steps = int(mults.size());
    // V_j = image of prod over groups < j of (A - sigma)
    std::vector<MatQ> vs(size_t(steps));
    MatQ prod = MatQ::Identity(r, r);
    for (int j = 1; j <= steps; ++j) {
        vs[size_t(j - 1)] = image_canonical(prod);
        if (j < steps)
            for (const Rat& sigma : g.groups[size_t(j - 1)])
                prod = (a - sigma * MatQ::Identity(r, r)) * prod;
    }
    std::vector<int> dtarget(size_t(steps));
    {
        int acc = 0;
        for (int j = steps; j >= 1; --j) {
            acc += mults[size_t(j - 1)];
            dtarget[size_t(j - 1)] = acc;
        }
    }
    for (int j = 1; j <= steps; ++j)
        check(vs[size_t(j - 1)].cols() == dtarget[size_t(j - 1)],
              "flag step has unexpected dimension");

    // adapted frame: complements from shallow to deep, deepest block last
    MatQ frame(r, r);
    Index col = 0;
    MatQ acc = vs[size_t(steps - 1)];
    std::vector<MatQ> blocks(size_t(steps));
    blocks[size_t(steps - 1)] = acc;
    for (int j = steps - 1; j >= 1; --j) {
        MatQ added;
        acc = extend_basis(vs[size_t(j - 1)], acc, added);
        blocks[size_t(j - 1)] = added;
    }
    for (int j = 1; j <= steps; ++j) {
        const MatQ& b = blocks[size_t(j - 1)];
        frame.block(0, col, r, b.cols()) = b;
        col += b.cols();
    }
    check(col == r, "adapted frame is not square");
    check(mat_rank(frame) == r, "adapted frame is singular");

    // invariance and graded spectra
    MatQ c = mat_inverse(frame) * a * frame;
    int offset = 0;
    for (int j = 1; j <= steps; ++j) {
        int m = mults[size_t(j - 1)];
        for (int u = 0; u < offset; ++u)
            for (int v = offset; v < offset + m; ++v)
                check(c(u, v) == 0, "flag is not invariant under the residue matrix");
        MatQ block = c.block(offset, offset, m, m);
        Poly expect(1);
        for (const Rat& sigma : g.groups[size_t(j - 1)]) expect *= Poly::t() - Poly(sigma);
        check(mat_charpoly(block) == expect, "graded spectrum mismatch");
        offset += m;
    }
    return frame;
}

namespace {

void groupings_rec(std::vector<std::pair<Rat, int>> avail, const std::vector<int>& mults,
                   size_t step, EigenGrouping& current, std::vector<EigenGrouping>& out) {
    if (step == mults.size()) {
        out.push_back(current);
        return;
    }
    const int want = mults[step];
    // enumerate sub-multisets of size `want` as count vectors over avail
    std::vector<int> take(avail.size(), 0);
    std::function<void(size_t, int)> rec = [&](size_t i, int left) {
        if (i == avail.size()) {
            if (left != 0) return;
            std::vector<Rat> grp;
            auto rest = avail;
            for (size_t j = 0; j < avail.size(); ++j) {
                grp.insert(grp.end(), size_t(take[j]), avail[j].first);
                rest[j].second -= take[j];
            }
            current.groups.push_back(grp);
            groupings_rec(rest, mults, step + 1, current, out);
            current.groups.pop_back();
            return;
        }
        for (int t = std::min(avail[i].second, left); t >= 0; --t) {
            take[i] = t;
            rec(i + 1, left - t);
        }
        take[i] = 0;
    };
    rec(0, want);
}

}  // namespace

FlagEnumeration enumerate_flags(const MatQ& a, const std::vector<int>& mults) {
    auto eig = split_eigenvalues(a);
    require_regular(a);
    FlagEnumeration out;
    EigenGrouping cur;
    groupings_rec(eig, mults, 0, cur, out.groupings);
    for (const EigenGrouping& g : out.groupings) out.frames.push_back(flag_from_grouping(a, mults, g));
    return out;
}

CoarsenResult coarsen(const HiggsField& phi, const std::vector<std::vector<int>>& target_mults,
                      const std::vector<std::vector<Rat>>& target_weights) {
    HiggsValidation fine = validate(phi);
    require(fine.cls != HiggsClass::invalid, ErrorKind::invalid,
            "invalid Higgs field: " + fine.detail);
    const int n = phi.bundle.curve.n();
    require(int(target_mults.size()) == n && int(target_weights.size()) == n, ErrorKind::invalid,
            "one target flag type per marked point");

    CoarsenResult out;
    out.fine_class = fine.cls;
    ParabolicBundle coarse = phi.bundle;
    for (int pi = 0; pi < n; ++pi) {
        const FlagData& f = phi.bundle.flag(pi);
        const auto& tm = target_mults[size_t(pi)];
        // adjacent-merge compatibility: consecutive runs of fine mults sum to tm
        size_t fi = 0;
        for (int want : tm) {
            int acc = 0;
            while (acc < want) {
                require(fi < f.mults.size(), ErrorKind::invalid,
                        "target multiplicities are not an adjacent merge");
                acc += f.mults[fi++];
            }
            require(acc == want, ErrorKind::invalid,
                    "target multiplicities are not an adjacent merge");
        }
        require(fi == f.mults.size(), ErrorKind::invalid,
                "target multiplicities are not an adjacent merge");
        FlagData nf;
        nf.mults = tm;
        nf.weights = target_weights[size_t(pi)];
        nf.frame = f.frame;
        nf.validate(phi.rank());
        coarse.flags[size_t(pi)] = std::move(nf);
    }
    out.field = HiggsField{std::move(coarse), phi.numerator};
    HiggsValidation cv = validate(out.field);
    out.coarse_class = cv.cls;
    auto strength = [](HiggsClass c) {
        switch (c) {
            case HiggsClass::higgs_only: return 1;
            case HiggsClass::parabolic: return 2;
            case HiggsClass::strongly_parabolic: return 3;
            default: return 0;
        }
    };
    check(strength(out.coarse_class) >= strength(out.fine_class),
          "forgetting flag steps weakened the classification");
    if (phi.rank() <= 2) out.stability = is_stable(out.field.bundle);
    return out;
}

long spectral_line_degree(long d, int r, int g, int n) {
    require(r >= 1 && n >= 0, ErrorKind::invalid, "bad (r, n)");
    Rat v = Rat(d) + Rat(long(r) * (1 - r)) * (Rat(1) - Rat(g) - Rat(n) / 2);
    check(rat_is_integer(v), "deg L is not an integer");
    return long(v.get_num().get_si());
}

}  // namespace parhiggs
