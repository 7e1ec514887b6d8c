#include "parhiggs/rational.hpp"

#include <algorithm>

#include "parhiggs/error.hpp"

namespace parhiggs {

Rat make_rat(const Int& num, const Int& den) {
    require(den != 0, ErrorKind::invalid, "rational with zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

Rat make_rat(long num, long den) { return make_rat(Int(num), Int(den)); }

Rat rat_parse(const std::string& s) {
    require(!s.empty(), ErrorKind::malformed, "empty rational literal");
    mpq_class q;
    if (q.set_str(s, 10) != 0)
        fail(ErrorKind::malformed, "bad rational literal '" + s + "'");
    require(q.get_den() != 0, ErrorKind::malformed, "zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

std::string rat_str(const Rat& q) { return q.get_str(); }

bool rat_is_integer(const Rat& q) { return q.get_den() == 1; }

Int rat_floor(const Rat& q) {
    Int r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

Int rat_ceil(const Rat& q) {
    Int r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

namespace {

bool probable_prime(const Int& n) { return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0; }

Int pollard_rho(const Int& n) {
    // n odd composite, no small factors. Brent's variant.
    if (n % 2 == 0) return 2;
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(0x9e3779b97f4a7c15UL);
    while (true) {
        Int y = rng.get_z_range(n - 2) + 1;
        Int c = rng.get_z_range(n - 2) + 1;
        Int x = y, d = 1, q = 1, ys = y;
        const long m = 128;
        long r = 1;
        while (d == 1) {
            x = y;
            for (long i = 0; i < r; ++i) y = (y * y + c) % n;
            long k = 0;
            while (k < r && d == 1) {
                ys = y;
                long lim = std::min(m, r - k);
                for (long i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    q = q * ((x > y) ? x - y : y - x) % n;
                }
                d = gcd(q, n);
                k += m;
            }
            r *= 2;
        }
        if (d == n) {
            d = 1;
            while (d == 1) {
                ys = (ys * ys + c) % n;
                d = gcd((x > ys) ? x - ys : ys - x, n);
            }
        }
        if (d != n) return d;
    }
}

void factor_rec(const Int& n, std::vector<Int>& primes) {
    if (n == 1) return;
    if (probable_prime(n)) {
        primes.push_back(n);
        return;
    }
    Int d = pollard_rho(n);
    factor_rec(d, primes);
    factor_rec(n / d, primes);
}

}  // namespace

std::vector<std::pair<Int, int>> factorize(Int n) {
    require(n >= 1, ErrorKind::invalid, "factorize needs n >= 1");
    std::vector<std::pair<Int, int>> out;
    auto strip = [&](const Int& p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e) out.emplace_back(p, e);
    };
    strip(2);
    strip(3);
    for (Int p = 5; p * p <= n && p < (1 << 20); p += 2) strip(p);
    if (n > 1) {
        std::vector<Int> rest;
        factor_rec(n, rest);
        std::sort(rest.begin(), rest.end());
        for (size_t i = 0; i < rest.size();) {
            size_t j = i;
            while (j < rest.size() && rest[j] == rest[i]) ++j;
            out.emplace_back(rest[i], int(j - i));
            i = j;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Int> positive_divisors(const Int& n) {
    auto fac = factorize(n < 0 ? Int(-n) : n);
    std::vector<Int> divs{1};
    for (auto& [p, e] : fac) {
        size_t sz = divs.size();
        Int pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (size_t i = 0; i < sz; ++i) divs.push_back(divs[i] * pk);
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

}  // namespace parhiggs
