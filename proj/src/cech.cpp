#include "parhiggs/cech.hpp"

#include <algorithm>
#include <random>

#include "parhiggs/error.hpp"

namespace parhiggs {

namespace {

// ---------- chart coordinate bookkeeping ----------

// One endomorphism-shaped sheaf on the two-chart cover. Windows:
//   C0(U0): entry (i,j) spans t^e, 0 <= e <= hi
//   C0(U1): k_ij - l, 0 <= l <= k_ij + lo   (top degree k_ij, floor -lo)
//   C1:     -lo <= e <= hi
struct SheafGrid {
    int r = 0;
    std::vector<std::vector<int>> k;
    PointConditionKind cond = PointConditionKind::none;
    int lo = 0, hi = 0;
};

SheafGrid make_grid(const ParabolicBundle& e, int extra, PointConditionKind cond, int lo, int hi) {
    SheafGrid g;
    g.r = e.rank();
    g.cond = cond;
    g.lo = lo;
    g.hi = hi;
    g.k.assign(size_t(g.r), std::vector<int>(size_t(g.r), 0));
    for (int i = 0; i < g.r; ++i)
        for (int j = 0; j < g.r; ++j)
            g.k[size_t(i)][size_t(j)] =
                e.splitting[size_t(i)] - e.splitting[size_t(j)] + extra;
    return g;
}

enum class Piece { c00, c01, c1 };

struct PieceCoords {
    int r = 0;
    std::vector<int> base;                      // r*r offsets
    std::vector<std::pair<int, int>> range;     // per entry [emin, emax]
    int dim = 0;
    int idx(int i, int j, int e) const {
        const auto& rg = range[size_t(i * r + j)];
        if (e < rg.first || e > rg.second) return -1;
        return base[size_t(i * r + j)] + (e - rg.first);
    }
};

PieceCoords make_piece(const SheafGrid& g, Piece which) {
    PieceCoords pc;
    pc.r = g.r;
    pc.base.resize(size_t(g.r * g.r));
    pc.range.resize(size_t(g.r * g.r));
    int off = 0;
    for (int i = 0; i < g.r; ++i)
        for (int j = 0; j < g.r; ++j) {
            std::pair<int, int> rg;
            switch (which) {
                case Piece::c00: rg = {0, g.hi}; break;
                case Piece::c01: rg = {-g.lo, g.k[size_t(i)][size_t(j)]}; break;
                case Piece::c1: rg = {-g.lo, g.hi}; break;
            }
            check(rg.second >= rg.first, "window too small for the twist grid");
            pc.base[size_t(i * g.r + j)] = off;
            pc.range[size_t(i * g.r + j)] = rg;
            off += rg.second - rg.first + 1;
        }
    pc.dim = off;
    return pc;
}

// flag conditions at the marked points, as rows over piece coordinates
void append_condition_rows(SparseMatQ& m, Index& row_cursor, const ParabolicBundle& e,
                           const PieceCoords& pc, PointConditionKind kind, Index col_off) {
    if (kind == PointConditionKind::none) return;
    const int r = pc.r;
    for (int pi = 0; pi < e.curve.n(); ++pi) {
        const FlagData& flag = e.flag(pi);
        MatQ binv = mat_inverse(flag.frame);
        const Rat& p = e.curve.point(pi);
        int emin = 0, emax = 0;
        for (auto& rg : pc.range) {
            emin = std::min(emin, rg.first);
            emax = std::max(emax, rg.second);
        }
        std::vector<Rat> pw(size_t(emax - emin + 1));
        for (int t = 0; t < int(pw.size()); ++t) {
            int ex = emin + t;
            Rat v(1);
            for (int a = 0; a < std::abs(ex); ++a) v *= p;
            pw[size_t(t)] = ex >= 0 ? v : Rat(1) / v;
        }
        for (int u = 1; u <= r; ++u)
            for (int v = 1; v <= r; ++v) {
                int bu = flag.block_of(u), bv = flag.block_of(v);
                bool forbidden =
                    kind == PointConditionKind::parabolic ? bu < bv : bu <= bv;
                if (!forbidden) continue;
                for (int i = 0; i < r; ++i)
                    for (int j = 0; j < r; ++j) {
                        Rat c = binv(u - 1, i) * flag.frame(j, v - 1);
                        if (c == 0) continue;
                        const auto& rg = pc.range[size_t(i * r + j)];
                        for (int ex = rg.first; ex <= rg.second; ++ex)
                            m.add(row_cursor, col_off + pc.idx(i, j, ex),
                                  c * pw[size_t(ex - emin)]);
                    }
                ++row_cursor;
            }
    }
}

Index condition_row_count(const ParabolicBundle& e, PointConditionKind kind) {
    if (kind == PointConditionKind::none) return 0;
    Index rows = 0;
    for (int pi = 0; pi < e.curve.n(); ++pi) {
        EndVariant v = kind == PointConditionKind::parabolic ? EndVariant::parabolic
                                                             : EndVariant::strongly_parabolic;
        rows += point_codim(e.flag(pi).mults, v);
    }
    return rows;
}

// commutator action column entries: target += sign * [E_ij t^e, H]
void add_ad_entries(SparseMatQ& m, const MatP& h, const PieceCoords& src, const PieceCoords& dst,
                    Index row_off, Index col_off, const Rat& sign) {
    const int r = src.r;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            const auto& rg = src.range[size_t(i * r + j)];
            for (int e = rg.first; e <= rg.second; ++e) {
                Index col = col_off + src.idx(i, j, e);
                for (int b = 0; b < r; ++b) {
                    const Poly& hp = h(j, b);
                    for (int mdeg = 0; mdeg <= hp.degree(); ++mdeg) {
                        const Rat v = hp.coeff(mdeg);
                        if (v == 0) continue;
                        int row = dst.idx(i, b, e + mdeg);
                        check(row >= 0, "window too small for commutator image");
                        m.add(row_off + row, col, sign * v);
                    }
                }
                for (int a = 0; a < r; ++a) {
                    const Poly& hp = h(a, i);
                    for (int mdeg = 0; mdeg <= hp.degree(); ++mdeg) {
                        const Rat v = hp.coeff(mdeg);
                        if (v == 0) continue;
                        int row = dst.idx(a, j, e + mdeg);
                        check(row >= 0, "window too small for commutator image");
                        m.add(row_off + row, col, -sign * v);
                    }
                }
            }
        }
}

void add_identity_entries(SparseMatQ& m, const PieceCoords& src, const PieceCoords& dst,
                          Index row_off, Index col_off, const Rat& sign) {
    const int r = src.r;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
            const auto& rg = src.range[size_t(i * r + j)];
            for (int e = rg.first; e <= rg.second; ++e) {
                int row = dst.idx(i, j, e);
                check(row >= 0, "window too small for chart restriction");
                m.add(row_off + row, col_off + src.idx(i, j, e), sign);
            }
        }
}

MatQ sparse_apply(const SparseMatQ& a, const MatQ& x) {
    MatQ out(a.rows(), x.cols());
    out.setZero();
    for (Index i = 0; i < a.rows(); ++i)
        for (auto& [c, v] : a.row(i))
            for (Index j = 0; j < x.cols(); ++j) {
                if (x(c, j) == 0) continue;
                out(i, j) += v * x(c, j);
            }
    return out;
}

// pivot columns of [fixed | candidates] lying in the candidate block
std::vector<Index> complement_picks(const MatQ& fixed, const MatQ& cands,
                                    Index* span_rank = nullptr) {
    MatQ m(fixed.rows(), fixed.cols() + cands.cols());
    if (fixed.cols() > 0) m.block(0, 0, fixed.rows(), fixed.cols()) = fixed;
    if (cands.cols() > 0) m.block(0, fixed.cols(), cands.rows(), cands.cols()) = cands;
    std::vector<Index> piv;
    rref(m, &piv);
    std::vector<Index> picks;
    for (Index c : piv)
        if (c >= fixed.cols()) picks.push_back(c - fixed.cols());
    if (span_rank) *span_rank = Index(piv.size());
    return picks;
}

// ---------- single-sheaf Cech model ----------

struct SheafCech {
    ParabolicBundle bundle;
    SheafGrid grid;
    PieceCoords c00, c01, c1;
    Index x0dim = 0, off_c1part = 0;
    MatQ x0_basis;   // constrained chart sections
    MatQ h0_basis;   // X0 coords, delta = 0
    MatQ im_delta;   // C1 coords
    MatQ h1_coords;  // C1 coords, constrained complement
    long h0 = 0, h1 = 0;

    SheafCech(const ParabolicBundle& e, int extra, PointConditionKind kind, int lo, int hi)
        : bundle(e), grid(make_grid(e, extra, kind, lo, hi)) {
        c00 = make_piece(grid, Piece::c00);
        c01 = make_piece(grid, Piece::c01);
        c1 = make_piece(grid, Piece::c1);
        off_c1part = c00.dim;
        x0dim = c00.dim + c01.dim;

        // constrained X0
        {
            SparseMatQ cond(2 * condition_row_count(e, kind), x0dim);
            Index cursor = 0;
            append_condition_rows(cond, cursor, e, c00, kind, 0);
            append_condition_rows(cond, cursor, e, c01, kind, off_c1part);
            x0_basis = sparse_kernel(cond).kernel;
        }
        // delta: (g0, g1) -> g1 - g0
        SparseMatQ delta(c1.dim, x0dim);
        add_identity_entries(delta, c00, c1, 0, 0, Rat(-1));
        add_identity_entries(delta, c01, c1, 0, off_c1part, Rat(1));
        im_delta = sparse_apply(delta, x0_basis);

        // H0: kernel of [delta; conditions]
        {
            SparseMatQ sys(c1.dim + 2 * condition_row_count(e, kind), x0dim);
            for (Index i = 0; i < c1.dim; ++i)
                for (auto& [c, v] : delta.row(i)) sys.add(i, c, v);
            Index cursor = c1.dim;
            append_condition_rows(sys, cursor, e, c00, kind, 0);
            append_condition_rows(sys, cursor, e, c01, kind, off_c1part);
            h0_basis = sparse_kernel(sys).kernel;
            h0 = long(h0_basis.cols());
        }
        // H1: constrained C1 modulo im delta
        {
            SparseMatQ cond(condition_row_count(e, kind), c1.dim);
            Index cursor = 0;
            append_condition_rows(cond, cursor, e, c1, kind, 0);
            MatQ c1_basis = sparse_kernel(cond).kernel;
            std::vector<Index> picks = complement_picks(im_delta, c1_basis);
            h1_coords = MatQ(c1.dim, Index(picks.size()));
            for (Index j = 0; j < Index(picks.size()); ++j)
                h1_coords.col(j) = c1_basis.col(picks[size_t(j)]);
            h1 = long(h1_coords.cols());
        }
    }

    MatP decode_global(const VecQ& x0vec) const {
        const int r = grid.r;
        MatP g(r, r);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) {
                const auto& rg = c00.range[size_t(i * r + j)];
                Poly p;
                for (int e = rg.first; e <= rg.second; ++e) {
                    Rat v = x0vec(c00.idx(i, j, e));
                    if (v != 0) p.set_coeff(e, v);
                }
                g(i, j) = p;
            }
        return g;
    }

    MatL decode_c1(const VecQ& vec) const {
        const int r = grid.r;
        MatL m(r, r);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) {
                const auto& rg = c1.range[size_t(i * r + j)];
                Laurent l;
                for (int e = rg.first; e <= rg.second; ++e) {
                    Rat v = vec(c1.idx(i, j, e));
                    if (v != 0) l.set_coeff(e, v);
                }
                m(i, j) = l;
            }
        return m;
    }

    // express a constrained C1 vector in the H1 basis modulo im delta
    VecQ express_h1(const VecQ& vec) const {
        MatQ cols(c1.dim, im_delta.cols() + h1_coords.cols());
        if (im_delta.cols() > 0) cols.block(0, 0, c1.dim, im_delta.cols()) = im_delta;
        if (h1_coords.cols() > 0)
            cols.block(0, im_delta.cols(), c1.dim, h1_coords.cols()) = h1_coords;
        SparseMatQ sys(c1.dim, cols.cols());
        for (Index i = 0; i < c1.dim; ++i)
            for (Index j = 0; j < cols.cols(); ++j)
                if (cols(i, j) != 0) sys.add(i, j, cols(i, j));
        MatQ b(c1.dim, 1), x;
        b.col(0) = vec;
        bool ok = sparse_solve(sys, b, x);
        check(ok, "vector is not a constrained C1 class");
        return x.col(0).tail(h1_coords.cols());
    }
};

int default_sheaf_window(const ParabolicBundle& e, int extra) {
    int maxk = 0;
    for (int i = 0; i < e.rank(); ++i)
        for (int j = 0; j < e.rank(); ++j)
            maxk = std::max(maxk,
                            std::abs(e.splitting[size_t(i)] - e.splitting[size_t(j)] + extra));
    return 2 * (maxk + e.curve.n());
}

long sheaf_chi(const ConstrainedSheaf& s) {
    long r = s.bundle.rank();
    long codim = 0;
    if (s.condition != PointConditionKind::none) {
        EndVariant v = s.condition == PointConditionKind::parabolic
                           ? EndVariant::parabolic
                           : EndVariant::strongly_parabolic;
        for (const FlagData& f : s.bundle.flags) codim += point_codim(f.mults, v);
    }
    return r * r * (s.extra_twist + 1) - codim;
}

}  // namespace

SheafCohomology sheaf_cohomology(const ConstrainedSheaf& s, int window) {
    s.bundle.validate();
    SheafCech model(s.bundle, s.extra_twist, s.condition, window, window);
    SheafCohomology out;
    out.h0 = model.h0;
    out.h1 = model.h1;
    out.chi = sheaf_chi(s);
    out.window = window;
    check(out.h0 - out.h1 == out.chi, "Cech dimensions disagree with the Euler characteristic");
    for (Index c = 0; c < model.h0_basis.cols(); ++c)
        out.h0_basis.push_back(model.decode_global(model.h0_basis.col(c)));
    for (Index c = 0; c < model.h1_coords.cols(); ++c)
        out.h1_basis.push_back(model.decode_c1(model.h1_coords.col(c)));
    return out;
}

SheafCohomology sheaf_cohomology(const ConstrainedSheaf& s) {
    int window = default_sheaf_window(s.bundle, s.extra_twist);
    for (int attempt = 0; attempt <= 3; ++attempt) {
        SheafCohomology a = sheaf_cohomology(s, window);
        SheafCech next(s.bundle, s.extra_twist, s.condition, window + 1, window + 1);
        if (a.h0 == next.h0 && a.h1 == next.h1) return a;
        window *= 2;
    }
    fail(ErrorKind::internal, "sheaf cohomology did not stabilize after 3 window doublings");
}

// ---------- hypercohomology engine ----------

struct HyperEngine::Impl {
    HiggsField phi;
    int n = 0, r = 0, hdeg = 0, window = 0;

    struct VariantData {
        PointConditionKind kind;
        Rat sv;  // sign of the complex differential: +[.,Phi] or -[.,Phi]
        PieceCoords s0c00, s0c01, s0c1, s1c00, s1c01, s1c1;
        Index x0dim = 0, x1dim = 0, x2dim = 0;
        Index off_a01 = 0, off_u0 = 0, off_u1 = 0;
        Index off_c0 = 0, off_c1 = 0;
        SparseMatQ d0{0, 0}, d1{0, 0};
        MatQ x0_basis, im_d0, h1_coords;
        bool ready = false;
        // full-route extras
        bool full_ready = false;
        HyperH1 result;
    };
    VariantData tan, cot;
    std::unique_ptr<SheafCech> sheaf_cache[4];  // [variant][level]

    Impl(const HiggsField& f, int w) : phi(f), window(w) {
        HiggsValidation v = validate(phi);
        require(v.cls == HiggsClass::parabolic || v.cls == HiggsClass::strongly_parabolic,
                ErrorKind::invalid, "hypercohomology engine needs a parabolic Higgs field");
        n = phi.bundle.curve.n();
        r = phi.rank();
        for (Index i = 0; i < r; ++i)
            for (Index j = 0; j < r; ++j)
                hdeg = std::max(hdeg, phi.numerator(i, j).degree());
        hdeg = std::max(hdeg, 0);
        tan.kind = PointConditionKind::parabolic;
        tan.sv = Rat(1);
        cot.kind = PointConditionKind::strongly_parabolic;
        cot.sv = Rat(-1);
    }

    VariantData& vd(ComplexVariant v) { return v == ComplexVariant::tangent ? tan : cot; }
    const VariantData& vd(ComplexVariant v) const {
        return v == ComplexVariant::tangent ? tan : cot;
    }

    SheafCech& sheaf(ComplexVariant v, int level) {
        int slot = (v == ComplexVariant::tangent ? 0 : 2) + level;
        if (!sheaf_cache[slot]) {
            PointConditionKind kind = vd(v).kind;
            int extra = level == 0 ? 0 : n - 2;
            int margin = level == 0 ? 0 : hdeg;
            sheaf_cache[slot] = std::make_unique<SheafCech>(phi.bundle, extra, kind,
                                                            window + margin, window + margin);
        }
        return *sheaf_cache[slot];
    }

    // basis computation at a given window; writes into `out`
    void build(VariantData& out, int w) const {
        const ParabolicBundle& e = phi.bundle;
        SheafGrid g0 = make_grid(e, 0, out.kind, w, w);
        SheafGrid g1 = make_grid(e, n - 2, out.kind, w + hdeg, w + hdeg);
        out.s0c00 = make_piece(g0, Piece::c00);
        out.s0c01 = make_piece(g0, Piece::c01);
        out.s0c1 = make_piece(g0, Piece::c1);
        out.s1c00 = make_piece(g1, Piece::c00);
        out.s1c01 = make_piece(g1, Piece::c01);
        out.s1c1 = make_piece(g1, Piece::c1);
        out.off_a01 = 0;
        out.off_u0 = out.s0c1.dim;
        out.off_u1 = out.off_u0 + out.s1c00.dim;
        out.x1dim = out.off_u1 + out.s1c01.dim;
        out.off_c0 = 0;
        out.off_c1 = out.s0c00.dim;
        out.x0dim = out.off_c1 + out.s0c01.dim;
        out.x2dim = out.s1c1.dim;

        const Index nconds = condition_row_count(e, out.kind);

        // D1 with X1 conditions appended
        SparseMatQ sys(out.x2dim + 3 * nconds, out.x1dim);
        add_ad_entries(sys, phi.numerator, out.s0c1, out.s1c1, 0, out.off_a01, -out.sv);
        add_identity_entries(sys, out.s1c00, out.s1c1, 0, out.off_u0, Rat(-1));
        add_identity_entries(sys, out.s1c01, out.s1c1, 0, out.off_u1, Rat(1));
        Index cursor = out.x2dim;
        append_condition_rows(sys, cursor, e, out.s0c1, out.kind, out.off_a01);
        append_condition_rows(sys, cursor, e, out.s1c00, out.kind, out.off_u0);
        append_condition_rows(sys, cursor, e, out.s1c01, out.kind, out.off_u1);
        MatQ cocycles = sparse_kernel(sys).kernel;

        // D0 and the constrained X0
        out.d0 = SparseMatQ(out.x1dim, out.x0dim);
        add_identity_entries(out.d0, out.s0c00, out.s0c1, out.off_a01, out.off_c0, Rat(-1));
        add_identity_entries(out.d0, out.s0c01, out.s0c1, out.off_a01, out.off_c1, Rat(1));
        add_ad_entries(out.d0, phi.numerator, out.s0c00, out.s1c00, out.off_u0, out.off_c0,
                       out.sv);
        add_ad_entries(out.d0, phi.numerator, out.s0c01, out.s1c01, out.off_u1, out.off_c1,
                       out.sv);
        {
            SparseMatQ cond(2 * nconds, out.x0dim);
            Index cur = 0;
            append_condition_rows(cond, cur, e, out.s0c00, out.kind, out.off_c0);
            append_condition_rows(cond, cur, e, out.s0c01, out.kind, out.off_c1);
            out.x0_basis = sparse_kernel(cond).kernel;
        }
        out.im_d0 = sparse_apply(out.d0, out.x0_basis);

        std::vector<Index> picks = complement_picks(out.im_d0, cocycles);
        out.h1_coords = MatQ(out.x1dim, Index(picks.size()));
        for (Index j = 0; j < Index(picks.size()); ++j)
            out.h1_coords.col(j) = cocycles.col(picks[size_t(j)]);
        out.d1 = std::move(sys);
        out.ready = true;
    }

    void ensure(ComplexVariant v) {
        VariantData& d = vd(v);
        if (!d.ready) build(d, window);
    }

    HyperCocycle decode(const VariantData& d, const VecQ& vec) const {
        HyperCocycle c;
        c.a01 = MatL(r, r);
        c.u0 = MatP(r, r);
        c.u1 = MatL(r, r);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) {
                Laurent a;
                const auto& rga = d.s0c1.range[size_t(i * r + j)];
                for (int e = rga.first; e <= rga.second; ++e) {
                    Rat val = vec(d.off_a01 + d.s0c1.idx(i, j, e));
                    if (val != 0) a.set_coeff(e, val);
                }
                c.a01(i, j) = a;
                Poly p;
                const auto& rg0 = d.s1c00.range[size_t(i * r + j)];
                for (int e = rg0.first; e <= rg0.second; ++e) {
                    Rat val = vec(d.off_u0 + d.s1c00.idx(i, j, e));
                    if (val != 0) p.set_coeff(e, val);
                }
                c.u0(i, j) = p;
                Laurent l;
                const auto& rg1 = d.s1c01.range[size_t(i * r + j)];
                for (int e = rg1.first; e <= rg1.second; ++e) {
                    Rat val = vec(d.off_u1 + d.s1c01.idx(i, j, e));
                    if (val != 0) l.set_coeff(e, val);
                }
                c.u1(i, j) = l;
            }
        return c;
    }

    VecQ encode(const VariantData& d, const HyperCocycle& c) const {
        VecQ vec(d.x1dim);
        vec.setZero();
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) {
                for (auto& [e, val] : c.a01(i, j).terms()) {
                    int ix = d.s0c1.idx(i, j, e);
                    require(ix >= 0, ErrorKind::invalid, "cochain outside the window");
                    vec(d.off_a01 + ix) = val;
                }
                const Poly& p = c.u0(i, j);
                for (int e = 0; e <= p.degree(); ++e) {
                    if (p.coeff(e) == 0) continue;
                    int ix = d.s1c00.idx(i, j, e);
                    require(ix >= 0, ErrorKind::invalid, "cochain outside the window");
                    vec(d.off_u0 + ix) = p.coeff(e);
                }
                for (auto& [e, val] : c.u1(i, j).terms()) {
                    int ix = d.s1c01.idx(i, j, e);
                    require(ix >= 0, ErrorKind::invalid, "cochain outside the window");
                    vec(d.off_u1 + ix) = val;
                }
            }
        return vec;
    }
};

HyperEngine::HyperEngine(const HiggsField& phi)
    : impl_(std::make_unique<Impl>(phi, default_sheaf_window(phi.bundle,
                                                             phi.bundle.curve.n() - 2))) {}

HyperEngine::HyperEngine(const HiggsField& phi, int window)
    : impl_(std::make_unique<Impl>(phi, window)) {}

HyperEngine::~HyperEngine() = default;
HyperEngine::HyperEngine(HyperEngine&&) noexcept = default;

int HyperEngine::window() const { return impl_->window; }

const HyperH1& HyperEngine::h1(ComplexVariant v) {
    auto& d = impl_->vd(v);
    if (d.full_ready) return d.result;
    impl_->ensure(v);

    HyperH1 out;
    out.variant = v;
    out.window = impl_->window;
    out.dim = long(d.h1_coords.cols());
    for (Index c = 0; c < d.h1_coords.cols(); ++c)
        out.basis.push_back(impl_->decode(d, d.h1_coords.col(c)));

    // truncation stability at window + 1
    {
        Impl::VariantData again;
        again.kind = d.kind;
        again.sv = d.sv;
        impl_->build(again, impl_->window + 1);
        check(long(again.h1_coords.cols()) == out.dim,
              "hyper H1 dimension changed between windows N and N+1");
    }

    // independent long-exact-sequence route from the sheaf pieces
    {
        SheafCech& s0 = impl_->sheaf(v, 0);
        SheafCech& s1 = impl_->sheaf(v, 1);
        const MatP& h = impl_->phi.numerator;
        const int r = impl_->r;
        // H0(S0) -> H0(S1), g -> sv*[g, H], flattened on polynomial entries
        int cap = 0;
        auto flatten_cap = [&](const MatP& m) {
            int c = 0;
            for (Index i = 0; i < m.rows(); ++i)
                for (Index j = 0; j < m.cols(); ++j) c = std::max(c, m(i, j).degree());
            return c;
        };
        std::vector<MatP> h0s0, h0s1;
        for (Index c = 0; c < s0.h0_basis.cols(); ++c)
            h0s0.push_back(s0.decode_global(s0.h0_basis.col(c)));
        for (Index c = 0; c < s1.h0_basis.cols(); ++c)
            h0s1.push_back(s1.decode_global(s1.h0_basis.col(c)));
        std::vector<MatP> images;
        for (const MatP& g : h0s0) {
            MatP br = g * h - h * g;
            for (Index i = 0; i < br.rows(); ++i)
                for (Index j = 0; j < br.cols(); ++j) br(i, j) = br(i, j).scaled(d.sv);
            images.push_back(br);
        }
        for (const MatP& m : h0s1) cap = std::max(cap, flatten_cap(m));
        for (const MatP& m : images) cap = std::max(cap, flatten_cap(m));
        auto flat = [&](const MatP& m) {
            VecQ v2(Index(r) * r * (cap + 1));
            v2.setZero();
            Index ix = 0;
            for (Index i = 0; i < r; ++i)
                for (Index j = 0; j < r; ++j)
                    for (int e = 0; e <= cap; ++e) v2(ix++) = m(i, j).coeff(e);
            return v2;
        };
        MatQ basis(Index(r) * r * (cap + 1), Index(h0s1.size()));
        for (size_t c = 0; c < h0s1.size(); ++c) basis.col(Index(c)) = flat(h0s1[c]);
        long rank_h0 = 0;
        if (!images.empty()) {
            MatQ img(Index(r) * r * (cap + 1), Index(images.size()));
            for (size_t c = 0; c < images.size(); ++c) img.col(Index(c)) = flat(images[c]);
            MatQ x(basis.cols(), img.cols());
            SparseMatQ sys(basis.rows(), basis.cols());
            for (Index i = 0; i < basis.rows(); ++i)
                for (Index j = 0; j < basis.cols(); ++j)
                    if (basis(i, j) != 0) sys.add(i, j, basis(i, j));
            bool ok = sparse_solve(sys, img, x);
            check(ok, "H0 commutator image escapes H0 of the target sheaf");
            rank_h0 = mat_rank(x);
        }
        out.les_coker_h0 = s1.h0 - rank_h0;

        // H1(S0) -> H1(S1) on overlap representatives
        long rank_h1 = 0;
        if (s0.h1 > 0 && s1.h1 > 0) {
            SparseMatQ admap(s1.c1.dim, s0.c1.dim);
            add_ad_entries(admap, h, s0.c1, s1.c1, 0, 0, d.sv);
            MatQ imgs = sparse_apply(admap, s0.h1_coords);
            MatQ coords(s1.h1, s0.h1);
            for (Index c = 0; c < imgs.cols(); ++c)
                coords.col(c) = s1.express_h1(imgs.col(c));
            rank_h1 = mat_rank(coords);
        } else if (s0.h1 > 0 && s1.h1 == 0) {
            rank_h1 = 0;
        }
        out.les_ker_h1 = s0.h1 - rank_h1;
        check(out.les_coker_h0 + out.les_ker_h1 == out.dim,
              "total-complex and long-exact-sequence dimensions disagree");
    }

    d.result = std::move(out);
    d.full_ready = true;
    return d.result;
}

HyperCocycle HyperEngine::sharp_image(const HyperCocycle& c) const {
    HyperCocycle out = c;
    for (Index i = 0; i < out.u0.rows(); ++i)
        for (Index j = 0; j < out.u0.cols(); ++j) {
            out.u0(i, j) = -out.u0(i, j);
            out.u1(i, j) = -out.u1(i, j);
        }
    return out;
}

SharpData HyperEngine::sharp() {
    // the anchor presumes simplicity: H0(SParEnd) must vanish
    require(impl_->sheaf(ComplexVariant::cotangent, 0).h0 == 0, ErrorKind::unstable,
            "anchor map needs a stable underlying bundle (H0 of SParEnd must vanish)");
    impl_->ensure(ComplexVariant::tangent);
    impl_->ensure(ComplexVariant::cotangent);
    auto& t = impl_->vd(ComplexVariant::tangent);
    auto& c = impl_->vd(ComplexVariant::cotangent);

    SharpData out;
    out.dim_tangent = long(t.h1_coords.cols());
    out.dim_cotangent = long(c.h1_coords.cols());

    // map cotangent coordinates into the tangent complex: identity on a01,
    // negation on u0, u1 (the piece layouts coincide)
    MatQ imgs(t.x1dim, c.h1_coords.cols());
    check(t.x1dim == c.x1dim, "variant coordinate layouts differ");
    for (Index col = 0; col < c.h1_coords.cols(); ++col) {
        for (Index k = 0; k < t.x1dim; ++k) {
            Rat v = c.h1_coords(k, col);
            imgs(k, col) = (k >= t.off_u0) ? -v : v;
        }
    }
    MatQ cols(t.x1dim, t.im_d0.cols() + t.h1_coords.cols());
    if (t.im_d0.cols() > 0) cols.block(0, 0, t.x1dim, t.im_d0.cols()) = t.im_d0;
    if (t.h1_coords.cols() > 0)
        cols.block(0, t.im_d0.cols(), t.x1dim, t.h1_coords.cols()) = t.h1_coords;
    SparseMatQ sys(t.x1dim, cols.cols());
    for (Index i = 0; i < t.x1dim; ++i)
        for (Index j = 0; j < cols.cols(); ++j)
            if (cols(i, j) != 0) sys.add(i, j, cols(i, j));
    MatQ sol;
    bool ok = sparse_solve(sys, imgs, sol);
    check(ok, "sharp image is not a tangent cocycle class");
    out.matrix = sol.bottomRows(t.h1_coords.cols());
    out.rank = mat_rank(out.matrix);
    out.kernel_dim = out.dim_cotangent - out.rank;
    return out;
}

namespace {
Rat residue_at_zero_of_k_valued(const Laurent& p, const Poly& q) {
    if (p.is_zero()) return Rat(0);
    auto [shift, poly] = p.shifted_poly();
    auto [quot, rem] = poly_divmod(poly, q);
    check(rem.is_zero(), "pairing trace has poles at the marked points");
    return quot.coeff(-1 - shift);
}
}  // namespace

Rat HyperEngine::pairing(const HyperCocycle& x, const HyperCocycle& y) const {
    MatL prod1 = x.a01 * matl_from_p(y.u0);
    MatL prod2 = x.u1 * y.a01;
    Laurent tr = matl_trace(prod1) + matl_trace(prod2);
    return residue_at_zero_of_k_valued(tr, impl_->phi.bundle.curve.q());
}

Rat HyperEngine::pairing_alt(const HyperCocycle& x, const HyperCocycle& y) const {
    MatL prod1 = x.a01 * y.u1;
    MatL prod2 = matl_from_p(x.u0) * y.a01;
    Laurent tr = matl_trace(prod1) + matl_trace(prod2);
    return residue_at_zero_of_k_valued(tr, impl_->phi.bundle.curve.q());
}

MatQ HyperEngine::pairing_gram() {
    impl_->ensure(ComplexVariant::tangent);
    impl_->ensure(ComplexVariant::cotangent);
    auto& t = impl_->vd(ComplexVariant::tangent);
    auto& c = impl_->vd(ComplexVariant::cotangent);
    std::vector<HyperCocycle> tb, cb;
    for (Index k = 0; k < t.h1_coords.cols(); ++k)
        tb.push_back(impl_->decode(t, t.h1_coords.col(k)));
    for (Index k = 0; k < c.h1_coords.cols(); ++k)
        cb.push_back(impl_->decode(c, c.h1_coords.col(k)));
    MatQ g(Index(cb.size()), Index(tb.size()));
    for (Index i = 0; i < Index(cb.size()); ++i)
        for (Index j = 0; j < Index(tb.size()); ++j) g(i, j) = pairing(cb[size_t(i)], tb[size_t(j)]);
    return g;
}

MatQ HyperEngine::gram_sharp() {
    impl_->ensure(ComplexVariant::cotangent);
    auto& c = impl_->vd(ComplexVariant::cotangent);
    std::vector<HyperCocycle> cb;
    for (Index k = 0; k < c.h1_coords.cols(); ++k)
        cb.push_back(impl_->decode(c, c.h1_coords.col(k)));
    MatQ g(Index(cb.size()), Index(cb.size()));
    for (Index i = 0; i < Index(cb.size()); ++i)
        for (Index j = 0; j < Index(cb.size()); ++j)
            g(i, j) = pairing(cb[size_t(i)], sharp_image(cb[size_t(j)]));
    return g;
}

HyperCocycle HyperEngine::random_coboundary(ComplexVariant v, unsigned seed) const {
    auto* self = const_cast<HyperEngine*>(this);
    self->impl_->ensure(v);
    const auto& d = impl_->vd(v);
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> dist(-5, 5);
    VecQ combo(d.x0_basis.cols());
    for (Index i = 0; i < combo.rows(); ++i) combo(i) = Rat(dist(rng));
    VecQ x0 = d.x0_basis * combo;
    MatQ x0m(x0.rows(), 1);
    x0m.col(0) = x0;
    VecQ x1 = sparse_apply(d.d0, x0m).col(0);
    return impl_->decode(d, x1);
}

HyperCocycle HyperEngine::random_cocycle(ComplexVariant v, unsigned seed) {
    impl_->ensure(v);
    const auto& d = impl_->vd(v);
    std::mt19937 rng(seed ^ 0x5bd1e995u);
    std::uniform_int_distribution<int> dist(-5, 5);
    VecQ vec(d.x1dim);
    vec.setZero();
    for (Index c = 0; c < d.h1_coords.cols(); ++c) {
        Rat w(dist(rng));
        if (w != 0) vec += w * d.h1_coords.col(c);
    }
    HyperCocycle cb = random_coboundary(v, seed * 7919u + 13u);
    HyperCocycle main = impl_->decode(d, vec);
    HyperCocycle out;
    out.a01 = main.a01 + cb.a01;
    out.u0 = main.u0 + cb.u0;
    out.u1 = main.u1 + cb.u1;
    return out;
}

bool HyperEngine::is_cocycle(ComplexVariant v, const HyperCocycle& c) const {
    auto* self = const_cast<HyperEngine*>(this);
    self->impl_->ensure(v);
    const auto& d = impl_->vd(v);
    VecQ vec = impl_->encode(d, c);
    MatQ m(vec.rows(), 1);
    m.col(0) = vec;
    MatQ img = sparse_apply(d.d1, m);
    for (Index i = 0; i < img.rows(); ++i)
        if (img(i, 0) != 0) return false;
    return true;
}

long sharp_kernel_formula(const HiggsField& phi) {
    long total = 0;
    for (int pi = 0; pi < phi.bundle.curve.n(); ++pi) {
        const FlagData& flag = phi.bundle.flag(pi);
        MatQ c = mat_inverse(flag.frame) * residue_matrix_at(phi, pi) * flag.frame;
        int off = 0;
        for (int m : flag.mults) {
            MatQ block = c.block(off, off, m, m);
            // dimension of the centralizer of the graded block in gl(m)
            MatQ op(Index(m) * m, Index(m) * m);
            op.setZero();
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b)
                    for (int cc = 0; cc < m; ++cc) {
                        op(Index(a) * m + b, Index(cc) * m + b) += block(a, cc);
                        op(Index(a) * m + b, Index(a) * m + cc) -= block(cc, b);
                    }
            total += long(mat_kernel(op).kernel.cols());
            off += m;
        }
    }
    return total - 1;
}

std::vector<Rat> casimir_differential(const HiggsField& phi, const MatP& v0) {
    std::vector<Poly> c;
    std::vector<MatP> adj = matp_adjugate_seq(phi.numerator, c);
    const int r = phi.rank();
    std::vector<Rat> out;
    for (int pi = 0; pi < phi.bundle.curve.n(); ++pi) {
        const Rat& p = phi.bundle.curve.point(pi);
        const Rat& qp = phi.bundle.curve.q_prime_at(pi);
        Rat scale(1);
        for (int i = 1; i <= r; ++i) {
            scale /= qp;
            MatP prod = adj[size_t(i - 1)] * v0;
            Poly tr;
            for (Index k = 0; k < prod.rows(); ++k) tr += prod(k, k);
            out.push_back(-tr.eval(p) * scale);
        }
    }
    return out;
}

AuditReport dimension_audit(int g, int r, int n, const std::vector<std::vector<int>>& mults,
                            long d) {
    require(g >= 0 && r >= 1 && n >= 1, ErrorKind::invalid, "need g >= 0, r >= 1, n >= 1");
    require(int(mults.size()) == n, ErrorKind::invalid, "one flag type per marked point");
    AuditReport rep;
    rep.g = g;
    rep.r = r;
    rep.n = n;
    rep.d = d;

    BaseDims bd = base_dims(g, r, n);
    long genus_spectral = long(r) * r * (g - 1) + long(r) * n * (r - 1) / 2 + 1;
    long f_sum = 0;
    for (const auto& m : mults) {
        long sq = 0, tot = 0;
        for (int mi : m) {
            sq += long(mi) * mi;
            tot += mi;
        }
        require(tot == r, ErrorKind::invalid, "multiplicities must sum to r");
        f_sum += (long(r) * r - sq) / 2;
    }

    auto row = [&](const std::string& name, long formula, long recomputed) {
        rep.rows.push_back({name, formula, recomputed, formula == recomputed});
    };
    long dim_p = long(2 * g - 2 + n) * r * r + 1;
    row("dim_P", dim_p, 2 * bd.dim_h0 + bd.dim_quotient);
    // dim N two ways: closed formula and -chi(ParEnd) + 1
    long chi_parend = long(r) * r * (1 - g) - f_sum;
    row("dim_N", long(g - 1) * r * r + 1 + f_sum, -chi_parend + 1);
    long dim_h_recomputed = 0;
    if (g == 0)
        for (int i = 1; i <= r; ++i) dim_h_recomputed += h_line(long(i) * (n - 2)).h0;
    else
        dim_h_recomputed = bd.dim_h0 + long(n) * r - 1;
    row("dim_H", bd.dim_h, dim_h_recomputed);
    row("dim_H0_is_spectral_genus", bd.dim_h0, genus_spectral);
    row("dim_H_mod_H0", long(n) * r - 1, bd.dim_h - bd.dim_h0);
    row("two_H0_plus_quotient_is_dim_P", dim_p, 2 * bd.dim_h0 + (long(n) * r - 1));
    long rank_formula = long(2 * g - 2) * r * r + long(n) * r * (r - 1) + 2;
    row("poisson_rank", rank_formula, dim_p - long(n) * r + 1);
    row("half_rank_is_spectral_genus", rank_formula / 2, genus_spectral);
    row("rank_even", rank_formula % 2, 0);
    long degl = spectral_line_degree(d, r, g, n);
    long degl_genus_route = d + long(r) * (1 - g) - 1 + genus_spectral;
    row("deg_L", degl, degl_genus_route);

    rep.all_pass = true;
    for (const AuditRow& ar : rep.rows) rep.all_pass = rep.all_pass && ar.pass;
    return rep;
}

}  // namespace parhiggs
