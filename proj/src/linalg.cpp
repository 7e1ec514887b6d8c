#include "parhiggs/linalg.hpp"

#include <algorithm>
#include <climits>
#include <set>

#include "parhiggs/error.hpp"

namespace parhiggs {

namespace {

// Fraction-free (Bareiss) forward elimination, then rational back-substitution
// to the unique RREF. Rows are pre-scaled to integers.
MatQ rref_bareiss(MatQ m, std::vector<Index>* pivot_cols) {
    const Index rows = m.rows(), cols = m.cols();
    for (Index i = 0; i < rows; ++i) {
        Int l = 1;
        for (Index j = 0; j < cols; ++j) l = lcm(l, Int(m(i, j).get_den()));
        if (l != 1)
            for (Index j = 0; j < cols; ++j) m(i, j) *= Rat(l);
    }
    std::vector<std::pair<Index, Index>> piv;  // (row, col)
    Rat prev(1);
    Index r = 0;
    for (Index c = 0; c < cols && r < rows; ++c) {
        Index sel = -1;
        for (Index i = r; i < rows; ++i)
            if (m(i, c) != 0) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        if (sel != r) m.row(sel).swap(m.row(r));
        for (Index i = r + 1; i < rows; ++i) {
            for (Index j = c + 1; j < cols; ++j) {
                Rat v = (m(r, c) * m(i, j) - m(i, c) * m(r, j)) / prev;
                check(rat_is_integer(v), "Bareiss division not exact");
                m(i, j) = v;
            }
            m(i, c) = Rat(0);
        }
        prev = m(r, c);
        piv.emplace_back(r, c);
        ++r;
    }
    // Back-substitution and pivot normalization (rational, exact).
    for (Index k = Index(piv.size()) - 1; k >= 0; --k) {
        auto [pr, pc] = piv[size_t(k)];
        Rat pv = m(pr, pc);
        for (Index j = pc; j < cols; ++j) m(pr, j) /= pv;
        for (Index i = 0; i < pr; ++i) {
            if (m(i, pc) == 0) continue;
            Rat f = m(i, pc);
            for (Index j = pc; j < cols; ++j) m(i, j) -= f * m(pr, j);
        }
    }
    if (pivot_cols) {
        pivot_cols->clear();
        for (auto& [pr, pc] : piv) pivot_cols->push_back(pc);
    }
    return m;
}

struct SparseRref {
    std::vector<std::map<Index, Rat>> rows;
    std::vector<std::pair<Index, Index>> pivots;  // (row index into rows, col)
};

SparseRref rref_sparse_impl(const SparseMatQ& m) {
    const Index nrows = m.rows(), ncols = m.cols();
    std::vector<std::map<Index, Rat>> rows(size_t(nrows));
    std::vector<std::set<Index>> col_rows(size_t(ncols));
    for (Index i = 0; i < nrows; ++i) {
        rows[size_t(i)] = m.row(i);
        for (auto& [c, v] : rows[size_t(i)]) col_rows[size_t(c)].insert(i);
    }
    auto set_entry = [&](Index i, Index c, const Rat& v) {
        if (v == 0) {
            rows[size_t(i)].erase(c);
            col_rows[size_t(c)].erase(i);
        } else {
            rows[size_t(i)][c] = v;
            col_rows[size_t(c)].insert(i);
        }
    };
    std::vector<bool> used(size_t(nrows), false);
    std::vector<std::pair<Index, Index>> pivots;
    for (Index c = 0; c < ncols; ++c) {
        Index best = -1;
        size_t best_nnz = SIZE_MAX;
        for (Index i : col_rows[size_t(c)]) {
            if (used[size_t(i)]) continue;
            size_t nnz = rows[size_t(i)].size();
            if (nnz < best_nnz || (nnz == best_nnz && i < best)) {
                best = i;
                best_nnz = nnz;
            }
        }
        if (best < 0) continue;
        used[size_t(best)] = true;
        // normalize
        Rat pv = rows[size_t(best)][c];
        if (pv != 1)
            for (auto& [cc, v] : rows[size_t(best)]) v /= pv;
        // eliminate from every other row containing c
        std::vector<Index> touch(col_rows[size_t(c)].begin(), col_rows[size_t(c)].end());
        for (Index i : touch) {
            if (i == best) continue;
            Rat f = rows[size_t(i)].at(c);
            for (auto& [cc, v] : rows[size_t(best)]) {
                Rat nv = (rows[size_t(i)].count(cc) ? rows[size_t(i)][cc] : Rat(0)) - f * v;
                set_entry(i, cc, nv);
            }
        }
        pivots.emplace_back(best, c);
    }
    return {std::move(rows), std::move(pivots)};
}

KernelResult kernel_from_rref(const std::vector<std::map<Index, Rat>>& rows,
                              const std::vector<std::pair<Index, Index>>& pivots, Index ncols) {
    std::vector<Index> pivot_of_col(size_t(ncols), -1);
    for (auto& [r, c] : pivots) pivot_of_col[size_t(c)] = r;
    std::vector<Index> free_cols;
    for (Index c = 0; c < ncols; ++c)
        if (pivot_of_col[size_t(c)] < 0) free_cols.push_back(c);
    MatQ kernel(ncols, Index(free_cols.size()));
    kernel.setZero();
    for (Index k = 0; k < Index(free_cols.size()); ++k) {
        Index f = free_cols[size_t(k)];
        kernel(f, k) = Rat(1);
        for (auto& [r, c] : pivots) {
            auto it = rows[size_t(r)].find(f);
            if (it != rows[size_t(r)].end()) kernel(c, k) = -it->second;
        }
    }
    return {Index(pivots.size()), std::move(kernel)};
}

constexpr Index kDenseLimit = 64;

}  // namespace

MatQ rref(const MatQ& m, std::vector<Index>* pivot_cols) {
    if (m.rows() <= kDenseLimit && m.cols() <= kDenseLimit) return rref_bareiss(m, pivot_cols);
    SparseMatQ s(m.rows(), m.cols());
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0) s.add(i, j, m(i, j));
    auto sr = rref_sparse_impl(s);
    std::sort(sr.pivots.begin(), sr.pivots.end(),
              [](auto& a, auto& b) { return a.second < b.second; });
    MatQ out(m.rows(), m.cols());
    out.setZero();
    Index r = 0;
    if (pivot_cols) pivot_cols->clear();
    for (auto& [ri, c] : sr.pivots) {
        for (auto& [cc, v] : sr.rows[size_t(ri)]) out(r, cc) = v;
        if (pivot_cols) pivot_cols->push_back(c);
        ++r;
    }
    return out;
}

void SparseMatQ::add(Index r, Index c, const Rat& v) {
    check(r >= 0 && r < rows_ && c >= 0 && c < cols_, "sparse entry out of range");
    if (v == 0) return;
    auto& row = data_[size_t(r)];
    auto it = row.find(c);
    if (it == row.end())
        row.emplace(c, v);
    else {
        it->second += v;
        if (it->second == 0) row.erase(it);
    }
}

KernelResult sparse_kernel(const SparseMatQ& m) {
    auto sr = rref_sparse_impl(m);
    return kernel_from_rref(sr.rows, sr.pivots, m.cols());
}

bool sparse_solve(const SparseMatQ& a, const MatQ& b, MatQ& x) {
    check(a.rows() == b.rows(), "solve dimension mismatch");
    SparseMatQ aug(a.rows(), a.cols() + b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (auto& [c, v] : a.row(i)) aug.add(i, c, v);
    for (Index i = 0; i < b.rows(); ++i)
        for (Index j = 0; j < b.cols(); ++j)
            if (b(i, j) != 0) aug.add(i, a.cols() + j, b(i, j));
    auto sr = rref_sparse_impl(aug);
    for (auto& [r, c] : sr.pivots)
        if (c >= a.cols()) return false;  // pivot in the augmented block
    x = MatQ(a.cols(), b.cols());
    x.setZero();
    for (auto& [r, c] : sr.pivots)
        for (Index j = 0; j < b.cols(); ++j) {
            auto it = sr.rows[size_t(r)].find(a.cols() + j);
            if (it != sr.rows[size_t(r)].end()) x(c, j) = it->second;
        }
    return true;
}

KernelResult mat_kernel(const MatQ& m) {
    if (m.rows() > kDenseLimit || m.cols() > kDenseLimit) {
        SparseMatQ s(m.rows(), m.cols());
        for (Index i = 0; i < m.rows(); ++i)
            for (Index j = 0; j < m.cols(); ++j)
                if (m(i, j) != 0) s.add(i, j, m(i, j));
        return sparse_kernel(s);
    }
    std::vector<Index> piv;
    MatQ r = rref(m, &piv);
    std::vector<std::map<Index, Rat>> rows(size_t(r.rows()));
    std::vector<std::pair<Index, Index>> pivots;
    for (Index k = 0; k < Index(piv.size()); ++k) {
        for (Index j = 0; j < r.cols(); ++j)
            if (r(k, j) != 0) rows[size_t(k)][j] = r(k, j);
        pivots.emplace_back(k, piv[size_t(k)]);
    }
    return kernel_from_rref(rows, pivots, m.cols());
}

Index mat_rank(const MatQ& m) {
    std::vector<Index> piv;
    rref(m, &piv);
    return Index(piv.size());
}

bool solve_consistent(const MatQ& a, const VecQ& b, VecQ& x) {
    SparseMatQ s(a.rows(), a.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            if (a(i, j) != 0) s.add(i, j, a(i, j));
    MatQ bx(b.rows(), 1), xx;
    bx.col(0) = b;
    if (!sparse_solve(s, bx, xx)) return false;
    x = xx.col(0);
    return true;
}

MatQ mat_inverse(const MatQ& m) {
    require(m.rows() == m.cols(), ErrorKind::invalid, "inverse of non-square matrix");
    const Index n = m.rows();
    MatQ aug(n, 2 * n);
    aug.setZero();
    aug.block(0, 0, n, n) = m;
    for (Index i = 0; i < n; ++i) aug(i, n + i) = Rat(1);
    std::vector<Index> piv;
    MatQ r = rref(aug, &piv);
    require(Index(piv.size()) == n && piv.back() == n - 1, ErrorKind::invalid,
            "matrix is singular");
    return r.block(0, n, n, n);
}

Poly mat_charpoly(const MatQ& a) {
    check(a.rows() == a.cols(), "charpoly of non-square matrix");
    const Index n = a.rows();
    MatQ b = MatQ::Identity(n, n);
    std::vector<Rat> c(size_t(n));
    for (Index k = 1; k <= n; ++k) {
        MatQ mk = a * b;
        Rat tr(0);
        for (Index i = 0; i < n; ++i) tr += mk(i, i);
        c[size_t(k - 1)] = -tr / Rat(long(k));
        b = mk;
        for (Index i = 0; i < n; ++i) b(i, i) += c[size_t(k - 1)];
    }
    Poly cp = Poly::monomial(int(n), Rat(1));
    for (Index k = 1; k <= n; ++k) cp.set_coeff(int(n - k), c[size_t(k - 1)]);
    return cp;
}

Poly mat_minpoly(const MatQ& a) {
    check(a.rows() == a.cols(), "minpoly of non-square matrix");
    const Index n = a.rows();
    MatQ pw = MatQ::Identity(n, n);
    MatQ cols(n * n, 0);
    for (Index k = 0;; ++k) {
        VecQ v(n * n);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) v(i * n + j) = pw(i, j);
        VecQ x;
        if (cols.cols() > 0 && solve_consistent(cols, v, x)) {
            Poly mp = Poly::monomial(int(k), Rat(1));
            for (Index i = 0; i < k; ++i) mp.set_coeff(int(i), -x(i));
            return mp;
        }
        cols.conservativeResize(n * n, k + 1);
        cols.col(k) = v;
        pw = pw * a;
    }
}

MatQ image_canonical(const MatQ& a) {
    std::vector<Index> piv;
    MatQ r = rref(a.transpose(), &piv);
    MatQ out(a.rows(), Index(piv.size()));
    for (Index k = 0; k < Index(piv.size()); ++k) out.col(k) = r.row(k).transpose();
    return out;
}

MatQ intersect_spans(const MatQ& a, const MatQ& b) {
    if (a.cols() == 0 || b.cols() == 0) return MatQ(a.rows(), 0);
    MatQ ab(a.rows(), a.cols() + b.cols());
    ab.block(0, 0, a.rows(), a.cols()) = a;
    ab.block(0, a.cols(), b.rows(), b.cols()) = -b;
    KernelResult k = mat_kernel(ab);
    MatQ gens(a.rows(), k.kernel.cols());
    for (Index j = 0; j < k.kernel.cols(); ++j)
        gens.col(j) = a * k.kernel.block(0, j, a.cols(), 1);
    return image_canonical(gens);
}

bool span_contains(const MatQ& a, const VecQ& v) {
    VecQ x;
    return solve_consistent(a, v, x);
}

bool spans_equal(const MatQ& a, const MatQ& b) {
    MatQ ca = image_canonical(a), cb = image_canonical(b);
    if (ca.cols() != cb.cols()) return false;
    return ca == cb;
}

// ---- matrices over Q[t] ----

MatQ eval_matp(const MatP& m, const Rat& t0) {
    MatQ out(m.rows(), m.cols());
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).eval(t0);
    return out;
}

MatP matp_from_q(const MatQ& m) {
    MatP out(m.rows(), m.cols());
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) out(i, j) = Poly(m(i, j));
    return out;
}

MatL matl_from_p(const MatP& m) {
    MatL out(m.rows(), m.cols());
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) out(i, j) = Laurent::from_poly(m(i, j));
    return out;
}

Laurent matl_trace(const MatL& m) {
    check(m.rows() == m.cols(), "trace of non-square matrix");
    Laurent tr;
    for (Index i = 0; i < m.rows(); ++i) tr += m(i, i);
    return tr;
}

Index generic_rank(const MatP& m) {
    MatP w = m;
    const Index rows = w.rows(), cols = w.cols();
    Index rank = 0;
    Index r = 0;
    for (Index c = 0; c < cols && r < rows; ++c) {
        Index sel = -1;
        int best_deg = INT_MAX;
        for (Index i = r; i < rows; ++i)
            if (!w(i, c).is_zero() && w(i, c).degree() < best_deg) {
                sel = i;
                best_deg = w(i, c).degree();
            }
        if (sel < 0) continue;
        if (sel != r) w.row(sel).swap(w.row(r));
        for (Index i = r + 1; i < rows; ++i) {
            if (w(i, c).is_zero()) continue;
            Poly piv = w(r, c), e = w(i, c);
            for (Index j = c; j < cols; ++j) w(i, j) = piv * w(i, j) - e * w(r, j);
            // keep entries primitive to control degree growth
            Poly content;
            for (Index j = c; j < cols; ++j) content = poly_gcd(content, w(i, j));
            if (!content.is_zero() && content.degree() > 0)
                for (Index j = c; j < cols; ++j) w(i, j) = poly_exact_div(w(i, j), content);
        }
        ++rank;
        ++r;
    }
    return rank;
}

Poly det_poly(const MatP& m) {
    check(m.rows() == m.cols(), "determinant of non-square matrix");
    const Index n = m.rows();
    if (n == 0) return Poly(1);
    MatP w = m;
    Poly prev(1);
    int sign = 1;
    for (Index k = 0; k < n - 1; ++k) {
        if (w(k, k).is_zero()) {
            Index piv = -1;
            for (Index i = k + 1; i < n; ++i)
                if (!w(i, k).is_zero()) {
                    piv = i;
                    break;
                }
            if (piv < 0) return Poly();
            w.row(k).swap(w.row(piv));
            sign = -sign;
        }
        for (Index i = k + 1; i < n; ++i) {
            for (Index j = k + 1; j < n; ++j)
                w(i, j) = poly_exact_div(w(k, k) * w(i, j) - w(i, k) * w(k, j), prev);
            w(i, k) = Poly();
        }
        prev = w(k, k);
    }
    Poly d = w(n - 1, n - 1);
    return sign > 0 ? d : -d;
}

MatP kernel_module(const MatP& m) {
    const Index rows = m.rows(), cols = m.cols();
    MatP a = m;
    MatP u = MatP(cols, cols);
    for (Index i = 0; i < cols; ++i)
        for (Index j = 0; j < cols; ++j) u(i, j) = (i == j) ? Poly(1) : Poly();
    Index c = 0;
    for (Index r = 0; r < rows && c < cols; ++r) {
        while (true) {
            std::vector<Index> js;
            for (Index j = c; j < cols; ++j)
                if (!a(r, j).is_zero()) js.push_back(j);
            if (js.empty()) break;
            if (js.size() == 1) {
                if (js[0] != c) {
                    a.col(js[0]).swap(a.col(c));
                    u.col(js[0]).swap(u.col(c));
                }
                ++c;
                break;
            }
            Index jmin = js[0];
            for (Index j : js)
                if (a(r, j).degree() < a(r, jmin).degree()) jmin = j;
            for (Index j : js) {
                if (j == jmin) continue;
                Poly q = poly_divmod(a(r, j), a(r, jmin)).first;
                if (q.is_zero()) continue;
                for (Index i = 0; i < rows; ++i) a(i, j) -= q * a(i, jmin);
                for (Index i = 0; i < cols; ++i) u(i, j) -= q * u(i, jmin);
            }
        }
    }
    for (Index j = c; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) check(a(i, j).is_zero(), "kernel column not annihilated");
    MatP kernel(cols, cols - c);
    for (Index j = c; j < cols; ++j) kernel.col(j - c) = u.col(j);
    return kernel;
}

MatP left_nullspace(const MatP& m) { return kernel_module(m.transpose()).transpose(); }

void column_reduce_weighted(MatP& m, const std::vector<int>& row_twists, std::vector<int>& wdeg) {
    const Index rows = m.rows(), cols = m.cols();
    check(Index(row_twists.size()) == rows, "twist count mismatch");
    auto col_wdeg = [&](Index j) {
        int w = INT_MIN;
        for (Index i = 0; i < rows; ++i)
            if (!m(i, j).is_zero()) w = std::max(w, m(i, j).degree() - row_twists[size_t(i)]);
        check(w != INT_MIN, "zero column in weighted reduction");
        return w;
    };
    while (true) {
        std::vector<int> w(size_t(cols));
        MatQ lc(rows, cols);
        for (Index j = 0; j < cols; ++j) {
            w[size_t(j)] = col_wdeg(j);
            for (Index i = 0; i < rows; ++i)
                lc(i, j) = m(i, j).coeff(row_twists[size_t(i)] + w[size_t(j)]);
        }
        KernelResult k = mat_kernel(lc);
        if (k.kernel.cols() == 0) {
            wdeg = w;
            break;
        }
        VecQ kv = k.kernel.col(0);
        Index j0 = -1;
        for (Index j = 0; j < cols; ++j)
            if (kv(j) != 0 && (j0 < 0 || w[size_t(j)] > w[size_t(j0)] ||
                               (w[size_t(j)] == w[size_t(j0)] && j > j0)))
                j0 = j;
        Rat norm = kv(j0);
        int old = w[size_t(j0)];
        for (Index j = 0; j < cols; ++j) {
            if (j == j0 || kv(j) == 0) continue;
            Poly shift = Poly::monomial(old - w[size_t(j)], kv(j) / norm);
            for (Index i = 0; i < rows; ++i) m(i, j0) += shift * m(i, j);
        }
        check(col_wdeg(j0) < old, "weighted reduction made no progress");
    }
    // sort columns by wdeg ascending (twist descending), stable
    std::vector<Index> order(size_t(cols));
    for (Index j = 0; j < cols; ++j) order[size_t(j)] = j;
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return wdeg[size_t(a)] < wdeg[size_t(b)]; });
    MatP sorted(rows, cols);
    std::vector<int> wsorted(size_t(cols));
    for (Index j = 0; j < cols; ++j) {
        sorted.col(j) = m.col(order[size_t(j)]);
        wsorted[size_t(j)] = wdeg[size_t(order[size_t(j)])];
    }
    m = sorted;
    wdeg = wsorted;
}

std::vector<Poly> matp_charpoly(const MatP& h) {
    std::vector<Poly> c;
    matp_adjugate_seq(h, c);
    return c;
}

std::vector<MatP> matp_adjugate_seq(const MatP& h, std::vector<Poly>& c) {
    check(h.rows() == h.cols(), "charpoly of non-square matrix");
    const Index n = h.rows();
    c.assign(size_t(n), Poly());
    std::vector<MatP> bs;
    MatP b(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) b(i, j) = (i == j) ? Poly(1) : Poly();
    bs.push_back(b);
    for (Index k = 1; k <= n; ++k) {
        MatP mk = h * b;
        Poly tr;
        for (Index i = 0; i < n; ++i) tr += mk(i, i);
        c[size_t(k - 1)] = tr.scaled(Rat(-1) / Rat(long(k)));
        b = mk;
        for (Index i = 0; i < n; ++i) b(i, i) += c[size_t(k - 1)];
        if (k < n) bs.push_back(b);
    }
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) check(b(i, j).is_zero(), "Faddeev recursion did not close");
    return bs;
}

}  // namespace parhiggs
