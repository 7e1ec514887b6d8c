#include "parhiggs/parabolic.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "parhiggs/error.hpp"

namespace parhiggs {

int FlagData::rank() const { return std::accumulate(mults.begin(), mults.end(), 0); }

int FlagData::d(int i) const {
    check(i >= 1 && i <= steps() + 1, "flag step out of range");
    int s = 0;
    for (int j = i; j <= steps(); ++j) s += mults[size_t(j - 1)];
    return s;
}

int FlagData::block_of(int idx) const {
    check(idx >= 1 && idx <= rank(), "frame index out of range");
    int acc = 0;
    for (int i = 1; i <= steps(); ++i) {
        acc += mults[size_t(i - 1)];
        if (idx <= acc) return i;
    }
    return steps();
}

MatQ FlagData::subspace(int i) const {
    int r = rank(), di = d(i);
    return frame.block(0, r - di, r, di);
}

void FlagData::validate(int r) const {
    require(!mults.empty(), ErrorKind::invalid, "flag needs at least one step");
    for (int m : mults) require(m >= 1, ErrorKind::invalid, "multiplicities must be positive");
    require(rank() == r, ErrorKind::invalid, "multiplicities must sum to the rank");
    require(int(weights.size()) == steps(), ErrorKind::invalid,
            "one weight per flag step required");
    for (int i = 0; i < steps(); ++i) {
        require(weights[size_t(i)] >= 0 && weights[size_t(i)] < 1, ErrorKind::invalid,
                "weights must lie in [0,1)");
        if (i) require(weights[size_t(i - 1)] < weights[size_t(i)], ErrorKind::invalid,
                       "weights must strictly increase");
    }
    require(frame.rows() == r && frame.cols() == r, ErrorKind::invalid, "frame must be r x r");
    require(mat_rank(frame) == r, ErrorKind::invalid, "frame must be invertible");
}

long ParabolicBundle::degree() const {
    return std::accumulate(splitting.begin(), splitting.end(), 0L);
}

void ParabolicBundle::validate() const {
    require(!splitting.empty(), ErrorKind::invalid, "rank must be positive");
    for (size_t i = 1; i < splitting.size(); ++i)
        require(splitting[i - 1] >= splitting[i], ErrorKind::invalid,
                "splitting type must be non-increasing");
    require(int(flags.size()) == curve.n(), ErrorKind::invalid, "one flag per marked point");
    for (const FlagData& f : flags) f.validate(rank());
}

PdegSlope pdeg_slope(const ParabolicBundle& e) {
    Rat p(e.degree());
    for (const FlagData& f : e.flags)
        for (int i = 0; i < f.steps(); ++i) p += Rat(f.mults[size_t(i)]) * f.weights[size_t(i)];
    return {p, p / Rat(e.rank())};
}

long SubbundleMap::degree() const { return std::accumulate(twists.begin(), twists.end(), 0L); }

namespace {

// gcd of all k x k minors; used to certify saturation.
Poly maximal_minor_gcd(const MatP& m) {
    const Index r = m.rows(), k = m.cols();
    std::vector<Index> idx(size_t(k));
    std::iota(idx.begin(), idx.end(), 0);
    Poly g;
    while (true) {
        MatP minor(k, k);
        for (Index i = 0; i < k; ++i) minor.row(i) = m.row(idx[size_t(i)]);
        g = poly_gcd(g, det_poly(minor));
        // next combination
        Index pos = k - 1;
        while (pos >= 0 && idx[size_t(pos)] == r - k + pos) --pos;
        if (pos < 0) break;
        ++idx[size_t(pos)];
        for (Index j = pos + 1; j < k; ++j) idx[size_t(j)] = idx[size_t(j - 1)] + 1;
    }
    return g;
}

}  // namespace

SubbundleMap saturate(const ParabolicBundle& e, const MatP& raw) {
    e.validate();
    const Index r = raw.rows(), k = raw.cols();
    require(r == e.rank(), ErrorKind::invalid, "inclusion rows must match the rank");
    require(k >= 1 && k <= r, ErrorKind::invalid, "subbundle rank out of range");
    require(generic_rank(raw) == k, ErrorKind::invalid, "rank-deficient inclusion");

    MatP basis;
    if (k == int(r)) {
        basis = MatP(r, r);
        for (Index i = 0; i < r; ++i)
            for (Index j = 0; j < r; ++j) basis(i, j) = (i == j) ? Poly(1) : Poly();
    } else {
        MatP n = left_nullspace(raw);
        check(n.rows() == r - k, "left nullspace has wrong rank");
        basis = kernel_module(n);
        check(basis.cols() == k, "module kernel has wrong rank");
    }
    std::vector<int> wdeg;
    column_reduce_weighted(basis, e.splitting, wdeg);

    SubbundleMap out;
    out.incl = basis;
    for (int w : wdeg) out.twists.push_back(-w);
    check(std::is_sorted(out.twists.rbegin(), out.twists.rend()), "twists not sorted");
    Poly g = maximal_minor_gcd(basis);
    check(g.degree() == 0, "saturation left a common minor factor");
    return out;
}

InducedParabolic induce_sub(const ParabolicBundle& e, const SubbundleMap& f) {
    const int k = f.sub_rank();
    InducedParabolic out;
    out.pdeg = Rat(f.degree());
    for (int pi = 0; pi < e.curve.n(); ++pi) {
        const FlagData& flag = e.flag(pi);
        MatQ fiber = eval_matp(f.incl, e.curve.point(pi));
        check(mat_rank(fiber) == k, "saturated inclusion drops rank at a marked point");
        std::vector<Index> dims(size_t(flag.steps()));
        std::vector<MatQ> vs(size_t(flag.steps()));
        for (int i = 1; i <= flag.steps(); ++i) {
            vs[size_t(i - 1)] = (i == 1) ? image_canonical(fiber)
                                         : intersect_spans(fiber, flag.subspace(i));
            dims[size_t(i - 1)] = vs[size_t(i - 1)].cols();
        }
        InducedPoint pt;
        int i = 1;
        while (i <= flag.steps()) {
            Index di = dims[size_t(i - 1)];
            if (di == 0) break;
            int j = i;
            while (j + 1 <= flag.steps() && dims[size_t(j)] == di) ++j;
            Index next = (j + 1 <= flag.steps()) ? dims[size_t(j)] : 0;
            pt.steps.push_back({int(di - next), flag.weights[size_t(j - 1)]});
            out.pdeg += Rat(int(di - next)) * flag.weights[size_t(j - 1)];
            i = j + 1;
        }
        int total = 0;
        for (auto& s : pt.steps) total += s.mult;
        check(total == k, "induced multiplicities do not sum to the subbundle rank");
        out.points.push_back(std::move(pt));
    }
    out.slope = out.pdeg / Rat(k);
    return out;
}

const char* stability_name(Stability s) {
    switch (s) {
        case Stability::stable: return "stable";
        case Stability::semistable_not_stable: return "semistable_not_stable";
        case Stability::unstable: return "unstable";
    }
    return "unstable";
}

namespace {

Stability verdict_from(const Rat& best, const Rat& slope) {
    if (best < slope) return Stability::stable;
    if (best == slope) return Stability::semistable_not_stable;
    return Stability::unstable;
}

StabilityReport stable_rank2(const ParabolicBundle& e) {
    const auto ps = pdeg_slope(e);
    const int n = e.curve.n();
    const int a1 = e.splitting[0], a2 = e.splitting[1];
    std::vector<int> full_pts;
    for (int i = 0; i < n; ++i)
        if (e.flag(i).steps() == 2) full_pts.push_back(i);

    // Fixed weight floor: every line picks up at least alpha_1 at each point.
    Rat floor_sum(0);
    for (int i = 0; i < n; ++i) floor_sum += e.flag(i).weights[0];

    long dmin = rat_floor(ps.slope).get_si() - n + 1;
    dmin = std::min<long>(dmin, a1);

    std::optional<Rat> best;
    MatP best_vec;
    for (long d = a1; d >= dmin; --d) {
        const int b1 = int(a1 - d), b2 = int(a2 - d);
        const int n1 = b1 + 1, n2 = b2 >= 0 ? b2 + 1 : 0;
        const int unknowns = n1 + n2;
        for (unsigned mask = 0; mask < (1u << full_pts.size()); ++mask) {
            MatQ rows(int(full_pts.size()), unknowns);
            rows.setZero();
            int nrows = 0;
            Rat val = Rat(d) + floor_sum;
            for (size_t s = 0; s < full_pts.size(); ++s) {
                if (!(mask >> s & 1)) continue;
                int pi = full_pts[s];
                const FlagData& flag = e.flag(pi);
                val += flag.weights[1] - flag.weights[0];
                MatQ w = flag.subspace(2);  // single column
                const Rat& p = e.curve.point(pi);
                Rat pw(1);
                for (int m = 0; m < n1; ++m) {
                    rows(nrows, m) = pw * w(1, 0);
                    pw *= p;
                }
                pw = Rat(1);
                for (int m = 0; m < n2; ++m) {
                    rows(nrows, n1 + m) = -pw * w(0, 0);
                    pw *= p;
                }
                ++nrows;
            }
            KernelResult kr = mat_kernel(MatQ(rows.topRows(nrows)));
            if (kr.kernel.cols() == 0) continue;
            if (!best || val > *best) {
                best = val;
                VecQ v = kr.kernel.col(0);
                best_vec = MatP(2, 1);
                Poly f1, f2;
                for (int m = 0; m < n1; ++m) f1.set_coeff(m, v(m));
                for (int m = 0; m < n2; ++m) f2.set_coeff(m, v(n1 + m));
                best_vec(0, 0) = f1;
                best_vec(1, 0) = f2;
            }
        }
    }
    check(best.has_value(), "line enumeration found no candidates");

    StabilityReport rep;
    rep.slope = ps.slope;
    rep.best_sub_slope = *best;
    rep.verdict = verdict_from(*best, ps.slope);
    rep.method = "exhaustive line enumeration, degrees [" + std::to_string(dmin) + "," +
                 std::to_string(a1) + "]";
    SubbundleMap w = saturate(e, best_vec);
    InducedParabolic ind = induce_sub(e, w);
    check(ind.pdeg == *best, "witness parabolic degree mismatch");
    rep.witness = std::move(w);
    return rep;
}

}  // namespace

StabilityReport is_stable(const ParabolicBundle& e) {
    e.validate();
    if (e.rank() == 1) {
        StabilityReport rep;
        rep.slope = pdeg_slope(e).slope;
        rep.verdict = Stability::stable;
        rep.method = "rank 1, no proper subbundles";
        return rep;
    }
    require(e.rank() == 2, ErrorKind::unsupported,
            "exhaustive stability engine covers r <= 2; supply candidates for higher rank");
    return stable_rank2(e);
}

StabilityReport is_stable(const ParabolicBundle& e, const std::vector<SubbundleMap>& candidates) {
    e.validate();
    const auto ps = pdeg_slope(e);
    StabilityReport rep;
    rep.slope = ps.slope;
    rep.verdict = Stability::stable;
    rep.method = "relative to " + std::to_string(candidates.size()) + " candidate subbundles";
    for (const SubbundleMap& f : candidates) {
        if (f.sub_rank() >= e.rank()) continue;
        InducedParabolic ind = induce_sub(e, f);
        if (!rep.best_sub_slope || ind.slope > *rep.best_sub_slope) {
            rep.best_sub_slope = ind.slope;
            rep.witness = f;
        }
    }
    if (rep.best_sub_slope) rep.verdict = verdict_from(*rep.best_sub_slope, ps.slope);
    return rep;
}

GenericityCertificate is_generic_weights(int r, long d, const WeightSystem& ws) {
    require(r >= 1, ErrorKind::invalid, "rank must be positive");
    require(ws.mults.size() == ws.weights.size(), ErrorKind::invalid,
            "weight system shape mismatch");
    const int n = int(ws.mults.size());
    Rat pdeg(d);
    for (int p = 0; p < n; ++p) {
        require(ws.mults[size_t(p)].size() == ws.weights[size_t(p)].size(), ErrorKind::invalid,
                "weight system shape mismatch");
        for (size_t i = 0; i < ws.mults[size_t(p)].size(); ++i)
            pdeg += Rat(ws.mults[size_t(p)][i]) * ws.weights[size_t(p)][i];
    }
    Rat slope = pdeg / Rat(r);

    GenericityCertificate cert;
    for (int k = 1; k < r; ++k) {
        Rat target = Rat(k) * slope;
        long lo = rat_ceil(target - Rat(k) * Rat(n)).get_si();
        long hi = rat_floor(target + Rat(k) * Rat(n)).get_si();
        cert.windows.push_back({long(k), lo, hi});

        // Achievable per-point sums of size-k selections, with backtracking data.
        std::vector<std::map<Rat, std::vector<int>>> per_point;
        for (int p = 0; p < n; ++p) {
            const auto& ms = ws.mults[size_t(p)];
            const auto& als = ws.weights[size_t(p)];
            std::map<Rat, std::vector<int>> sums;
            std::vector<int> pick(ms.size(), 0);
            std::function<void(size_t, int, Rat)> rec = [&](size_t i, int left, Rat acc) {
                if (i == ms.size()) {
                    if (left == 0 && !sums.count(acc)) sums[acc] = pick;
                    return;
                }
                int cap = std::min(ms[i], left);
                for (int take = 0; take <= cap; ++take) {
                    pick[i] = take;
                    rec(i + 1, left - take, acc + Rat(take) * als[i]);
                }
                pick[i] = 0;
            };
            rec(0, k, Rat(0));
            per_point.push_back(std::move(sums));
        }
        // Cross-point reachable totals with one witness each.
        std::map<Rat, std::vector<std::vector<int>>> reach;
        reach[Rat(0)] = {};
        for (int p = 0; p < n; ++p) {
            std::map<Rat, std::vector<std::vector<int>>> next;
            for (auto& [acc, wit] : reach)
                for (auto& [s, pick] : per_point[size_t(p)]) {
                    Rat tot = acc + s;
                    if (!next.count(tot)) {
                        auto w2 = wit;
                        w2.push_back(pick);
                        next[tot] = std::move(w2);
                    }
                }
            reach = std::move(next);
        }
        for (long dp = lo; dp <= hi; ++dp) {
            Rat needed = target - Rat(dp);
            auto it = reach.find(needed);
            if (it != reach.end()) {
                cert.generic = false;
                cert.k = k;
                cert.d_prime = dp;
                cert.selection = it->second;
                return cert;
            }
        }
    }
    cert.generic = true;
    return cert;
}

GenericityCertificate is_generic_weights(const ParabolicBundle& e) {
    WeightSystem ws;
    for (const FlagData& f : e.flags) {
        ws.mults.push_back(f.mults);
        ws.weights.push_back(f.weights);
    }
    return is_generic_weights(e.rank(), e.degree(), ws);
}

long point_codim(const std::vector<int>& mults, EndVariant variant) {
    long r = std::accumulate(mults.begin(), mults.end(), 0L);
    long sq = 0;
    for (int m : mults) sq += long(m) * m;
    long f = (r * r - sq) / 2;
    return variant == EndVariant::parabolic ? f : r * r - f;
}

GlobalEndSpace global_par_end(const ParabolicBundle& e, EndVariant variant, int twist) {
    e.validate();
    const int r = e.rank();
    // unknown coefficient layout
    struct Slot {
        int i, j, deg;
    };
    std::vector<Slot> slots;
    std::vector<std::vector<int>> offset(size_t(r), std::vector<int>(size_t(r), -1));
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            int bound = e.splitting[size_t(i)] - e.splitting[size_t(j)] + twist;
            if (bound < 0) continue;
            offset[size_t(i)][size_t(j)] = int(slots.size());
            for (int m = 0; m <= bound; ++m) slots.push_back({i, j, m});
        }

    std::vector<std::vector<Rat>> rows;
    for (int pi = 0; pi < e.curve.n(); ++pi) {
        const FlagData& flag = e.flag(pi);
        MatQ binv = mat_inverse(flag.frame);
        const Rat& p = e.curve.point(pi);
        for (int u = 1; u <= r; ++u)
            for (int v = 1; v <= r; ++v) {
                int bu = flag.block_of(u), bv = flag.block_of(v);
                bool forbidden = variant == EndVariant::parabolic ? bu < bv : bu <= bv;
                if (!forbidden) continue;
                std::vector<Rat> row(slots.size(), Rat(0));
                for (size_t s = 0; s < slots.size(); ++s) {
                    Rat pw(1);
                    for (int m = 0; m < slots[s].deg; ++m) pw *= p;
                    row[s] = binv(u - 1, slots[s].i) * pw * flag.frame(slots[s].j, v - 1);
                }
                rows.push_back(std::move(row));
            }
    }
    MatQ cond(Index(rows.size()), Index(slots.size()));
    for (Index i = 0; i < cond.rows(); ++i)
        for (Index j = 0; j < cond.cols(); ++j) cond(i, j) = rows[size_t(i)][size_t(j)];
    KernelResult kr = mat_kernel(cond);

    GlobalEndSpace out;
    out.h0 = long(kr.kernel.cols());
    long codim = 0;
    for (const FlagData& f : e.flags) codim += point_codim(f.mults, variant);
    out.chi = long(r) * r * (twist + 1) - codim;
    out.h1 = out.h0 - out.chi;
    check(out.h1 >= 0, "negative h1 from Euler characteristic");
    for (Index c = 0; c < kr.kernel.cols(); ++c) {
        MatP g(r, r);
        for (size_t s = 0; s < slots.size(); ++s) {
            Poly& entry = g(slots[s].i, slots[s].j);
            entry.set_coeff(slots[s].deg, kr.kernel(Index(s), c));
        }
        out.basis.push_back(std::move(g));
    }
    return out;
}

}  // namespace parhiggs
