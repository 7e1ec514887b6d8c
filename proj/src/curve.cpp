#include "parhiggs/curve.hpp"

#include <set>

#include "parhiggs/error.hpp"

namespace parhiggs {

MarkedCurve::MarkedCurve(std::vector<Rat> points) : points_(std::move(points)) {
    require(points_.size() >= 3, ErrorKind::invalid, "need at least 3 marked points at genus 0");
    std::set<Rat> seen;
    for (const Rat& p : points_) {
        require(p != 0, ErrorKind::invalid, "marked points must avoid 0");
        require(seen.insert(p).second, ErrorKind::invalid, "marked points must be distinct");
    }
    q_ = Poly(1);
    for (const Rat& p : points_) q_ *= Poly::t() - Poly(p);
    q_prime_ = q_.derivative();
    for (const Rat& p : points_) qp_.push_back(q_prime_.eval(p));
}

LineDims h_line(long k) {
    LineDims d;
    d.h0 = k + 1 > 0 ? k + 1 : 0;
    d.h1 = -k - 1 > 0 ? -k - 1 : 0;
    return d;
}

std::vector<Rat> residues(const Poly& c, const MarkedCurve& curve) {
    require(c.degree() <= curve.n() - 2, ErrorKind::invalid,
            "section degree exceeds n-2, not a global section of K(D)");
    std::vector<Rat> res;
    Rat sum(0);
    for (int i = 0; i < curve.n(); ++i) {
        Rat v = c.eval(curve.point(i)) / curve.q_prime_at(i);
        sum += v;
        res.push_back(v);
    }
    check(sum == 0, "residue theorem violated");
    return res;
}

Rat residue_pairing_line(const LineBundleSection& f, const Laurent& g) {
    require(f.poly.degree() <= f.twist, ErrorKind::invalid, "section degree exceeds twist");
    Laurent prod = Laurent::from_poly(f.poly) * g;
    return prod.coeff(-1);
}

}  // namespace parhiggs
