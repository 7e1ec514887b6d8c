#pragma once

#include <vector>

#include "parhiggs/laurent.hpp"
#include "parhiggs/poly.hpp"

namespace parhiggs {

// X = P^1 with reduced marked divisor D = p_1 + ... + p_n. Marked points
// must avoid 0 and infinity so both lie off the divisor and the standard
// two-chart cover keeps all p_i in the overlap.
class MarkedCurve {
public:
    static constexpr int genus = 0;

    explicit MarkedCurve(std::vector<Rat> points);
    int n() const { return int(points_.size()); }
    const std::vector<Rat>& points() const { return points_; }
    const Rat& point(int i) const { return points_[size_t(i)]; }
    const Poly& q() const { return q_; }              // prod (t - p_i)
    const Poly& q_prime() const { return q_prime_; }  // q'
    const Rat& q_prime_at(int i) const { return qp_[size_t(i)]; }
    friend bool operator==(const MarkedCurve& a, const MarkedCurve& b) {
        return a.points_ == b.points_;
    }

private:
    std::vector<Rat> points_;
    Poly q_, q_prime_;
    std::vector<Rat> qp_;
};

struct LineDims {
    long h0 = 0, h1 = 0;
};

// Cohomology of O(k) on P^1: h0 = max(k+1, 0), h1 = max(-k-1, 0).
LineDims h_line(long k);

// Section of O(k) in the affine-chart trivialization, value poly(t).
struct LineBundleSection {
    int twist = 0;
    Poly poly;
};

// Residues at the marked points of c*dt/q, a section of H^0(K(D)) when
// deg c <= n-2. They sum to zero exactly.
std::vector<Rat> residues(const Poly& c, const MarkedCurve& curve);

// Residue at 0 of f*g*dt, i.e. the t^(-1) coefficient of f*g. Realizes the
// Serre pairing H^0(O(k)) x H^1(O(-k-2)) -> H^1(K) = Q and kills Cech
// coboundaries of the two-chart cover.
Rat residue_pairing_line(const LineBundleSection& f, const Laurent& g);

}  // namespace parhiggs
