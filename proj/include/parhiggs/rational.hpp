#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

namespace parhiggs {

// Ground field is Q throughout. mpq_class keeps values canonical
// (gcd(|num|, den) = 1, den >= 1) as long as construction goes through
// make_rat / rat_parse.
using Int = mpz_class;
using Rat = mpq_class;

Rat make_rat(const Int& num, const Int& den);
Rat make_rat(long num, long den);

// Accepts "num", "num/den", optional leading '-'. Rejects den = 0.
Rat rat_parse(const std::string& s);

// "num/den", den omitted when 1. Inverse of rat_parse.
std::string rat_str(const Rat& q);

bool rat_is_integer(const Rat& q);
Int rat_floor(const Rat& q);
Int rat_ceil(const Rat& q);

// Integer factorization support for the rational-root scan: trial division,
// then Pollard rho on what is left, with GMP probabilistic primality.
std::vector<std::pair<Int, int>> factorize(Int n);     // n >= 1
std::vector<Int> positive_divisors(const Int& n);      // sorted ascending

}  // namespace parhiggs
