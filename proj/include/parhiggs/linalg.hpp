#pragma once

#include <Eigen/Core>
#include <map>
#include <vector>

#include "parhiggs/laurent.hpp"
#include "parhiggs/poly.hpp"
#include "parhiggs/rational.hpp"

namespace Eigen {

template <>
struct NumTraits<mpq_class> : GenericNumTraits<mpq_class> {
    typedef mpq_class Real;
    typedef mpq_class NonInteger;
    typedef mpq_class Nested;
    typedef mpq_class Literal;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 6,
        AddCost = 60,
        MulCost = 100
    };
    static inline Real epsilon() { return Real(0); }
    static inline Real dummy_precision() { return Real(0); }
    static inline int digits10() { return 0; }
};

template <>
struct NumTraits<parhiggs::Poly> : GenericNumTraits<parhiggs::Poly> {
    typedef parhiggs::Poly Real;
    typedef parhiggs::Poly NonInteger;
    typedef parhiggs::Poly Nested;
    typedef parhiggs::Poly Literal;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 10,
        AddCost = 200,
        MulCost = 400
    };
    static inline Real epsilon() { return Real(0); }
    static inline Real dummy_precision() { return Real(0); }
    static inline int digits10() { return 0; }
};

template <>
struct NumTraits<parhiggs::Laurent> : GenericNumTraits<parhiggs::Laurent> {
    typedef parhiggs::Laurent Real;
    typedef parhiggs::Laurent NonInteger;
    typedef parhiggs::Laurent Nested;
    typedef parhiggs::Laurent Literal;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 10,
        AddCost = 200,
        MulCost = 400
    };
    static inline Real epsilon() { return Real(0); }
    static inline Real dummy_precision() { return Real(0); }
    static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace parhiggs {

using Index = Eigen::Index;
using MatQ = Eigen::Matrix<Rat, Eigen::Dynamic, Eigen::Dynamic>;
using VecQ = Eigen::Matrix<Rat, Eigen::Dynamic, 1>;
using MatP = Eigen::Matrix<Poly, Eigen::Dynamic, Eigen::Dynamic>;
using MatL = Eigen::Matrix<Laurent, Eigen::Dynamic, Eigen::Dynamic>;

struct KernelResult {
    Index rank = 0;
    MatQ kernel;  // columns form a basis of the right kernel
};

// Unique reduced row echelon form. Fraction-free (Bareiss) elimination on
// small dense input, sparse exact elimination otherwise; RREF uniqueness
// makes the two paths agree entry by entry.
MatQ rref(const MatQ& m, std::vector<Index>* pivot_cols = nullptr);
KernelResult mat_kernel(const MatQ& m);
Index mat_rank(const MatQ& m);
bool solve_consistent(const MatQ& a, const VecQ& b, VecQ& x);
MatQ mat_inverse(const MatQ& m);
Poly mat_charpoly(const MatQ& a);  // det(y*Id - A), monic in y
Poly mat_minpoly(const MatQ& a);

MatQ image_canonical(const MatQ& a);  // canonical basis of the column span
MatQ intersect_spans(const MatQ& a, const MatQ& b);
bool span_contains(const MatQ& a, const VecQ& v);
bool spans_equal(const MatQ& a, const MatQ& b);

// Row-sparse exact matrix for the large, very sparse Cech systems.
class SparseMatQ {
public:
    SparseMatQ(Index rows, Index cols) : rows_(rows), cols_(cols), data_(size_t(rows)) {}
    Index rows() const { return rows_; }
    Index cols() const { return cols_; }
    void add(Index r, Index c, const Rat& v);
    const std::map<Index, Rat>& row(Index r) const { return data_[size_t(r)]; }

private:
    Index rows_, cols_;
    std::vector<std::map<Index, Rat>> data_;
};

KernelResult sparse_kernel(const SparseMatQ& m);
// Solves a X = b column-wise; false when some column is inconsistent.
bool sparse_solve(const SparseMatQ& a, const MatQ& b, MatQ& x);

// ---- matrices over Q[t] ----

MatQ eval_matp(const MatP& m, const Rat& t0);
MatP matp_from_q(const MatQ& m);
MatL matl_from_p(const MatP& m);
Laurent matl_trace(const MatL& m);
Index generic_rank(const MatP& m);  // rank over Q(t)
Poly det_poly(const MatP& m);
// Basis (columns) of the Q[t]-module kernel; kernels of module maps are
// saturated, so the basis is primitive.
MatP kernel_module(const MatP& m);
MatP left_nullspace(const MatP& m);  // rows, entries cleared into Q[t]
// Column reduction against row twists tw: afterwards the leading-coefficient
// vectors (coefficient of t^(tw_i + wdeg_j) in column j) are independent and
// wdeg[j] = max_i (deg m(i,j) - tw[i]) is minimal. Columns must stay
// independent over Q(t). Columns are sorted by wdeg ascending.
void column_reduce_weighted(MatP& m, const std::vector<int>& row_twists, std::vector<int>& wdeg);
// det(y*Id - H) = y^r + c[0] y^(r-1) + ... + c[r-1]
std::vector<Poly> matp_charpoly(const MatP& h);
// Faddeev sequence B_0..B_(r-1) with adj(y*Id - H) = sum_k B_k y^(r-1-k).
std::vector<MatP> matp_adjugate_seq(const MatP& h, std::vector<Poly>& c);

}  // namespace parhiggs
