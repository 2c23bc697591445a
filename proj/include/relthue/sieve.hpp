#pragma once

// Modular sieve for the trace-form unit equation A W + sigma(A W) = 1:
// reduce modulo primes at which the defining polynomial of G splits into
// distinct linear factors and compare both sides at every root.

#include "relthue/units.hpp"

#include <cstdint>
#include <vector>

namespace relthue {

struct SievePrime {
  std::uint64_t p = 0;
  std::vector<std::uint64_t> roots;
  std::vector<int> partner;             // index of sigma(theta) mod p
  std::vector<std::uint64_t> a_values;  // A at each root
  std::vector<std::vector<std::uint64_t>> unit_values;  // [root][unit]
  /// powers[root][unit][e + max_exponent] = unit(root)^e mod p
  std::vector<std::vector<std::vector<std::uint32_t>>> powers;
};

struct SievePlan {
  long long max_exponent = 0;
  std::vector<SievePrime> primes;
};

/// Roots of f modulo p when f splits into distinct linear factors, else
/// an empty vector.
std::vector<std::uint64_t> split_roots(const IntPoly& f, std::uint64_t p);

/// The first `count` primes >= start (and prime to the denominator of A)
/// at which the field polynomial splits completely.
std::vector<std::uint64_t> find_sieve_primes(const UnitSystem& us, const RationalElement& a, int count,
                                             std::uint64_t start = 3);

/// Throws kInput for a prime that does not split the polynomial or divides
/// the denominator of A.
SievePlan make_sieve_plan(const UnitSystem& us, const RationalElement& a, const std::vector<std::uint64_t>& primes,
                          long long max_exponent);

/// Bit 0: the congruence holds at every plan prime for W = +prod u^v,
/// bit 1: for W = -prod u^v. With no primes both bits are set.
unsigned sieve_signs(const SievePlan& plan, const ExpVec& v);
std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p);
/// prod unit_k(root)^e_k mod p for arbitrary exponents.
std::uint64_t unit_product_mod(const SievePrime& sp, std::size_t root, const ExpVec& e);

unsigned sieve_signs_at(const SievePlan& plan, std::size_t prime_index, const ExpVec& v);

/// Necessary condition for v to give a solution with some sign.
inline bool sieve_mod_p(const SievePlan& plan, const ExpVec& v) { return sieve_signs(plan, v) != 0; }

}  // namespace relthue
