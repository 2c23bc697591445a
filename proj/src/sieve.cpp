#include "relthue/sieve.hpp"

#include "relthue/errors.hpp"

namespace relthue {
namespace {

std::uint64_t mod(const Integer& x, std::uint64_t p) {
  return mpz_fdiv_ui(x.backend().data(), static_cast<unsigned long>(p));
}

std::uint64_t evaluate_mod(const Element& a, std::uint64_t r, std::uint64_t p) {
  std::uint64_t acc = 0;
  for (Eigen::Index k = a.size() - 1; k >= 0; --k) acc = (mulmod(acc, r, p) + mod(a(k), p)) % p;
  return acc;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

std::uint64_t unit_product_mod(const SievePrime& sp, std::size_t root, const ExpVec& e) {
  const std::uint64_t p = sp.p;
  std::uint64_t acc = 1;
  for (Eigen::Index k = 0; k < e.size(); ++k) {
    if (e(k) == 0) continue;
    std::uint64_t base = sp.unit_values[root][k];
    if (e(k) < 0) base = powmod(base, p - 2, p);
    acc = mulmod(acc, powmod(base, static_cast<std::uint64_t>(e(k) < 0 ? -e(k) : e(k)), p), p);
  }
  return acc;
}

std::vector<std::uint64_t> split_roots(const IntPoly& f, std::uint64_t p) {
  std::vector<std::uint64_t> roots;
  const int n = degree(f);
  if (mod(f[n], p) == 0) return {};
  for (std::uint64_t x = 0; x < p; ++x) {
    std::uint64_t acc = 0;
    for (int k = n; k >= 0; --k) acc = (mulmod(acc, x, p) + mod(f[k], p)) % p;
    if (acc == 0) roots.push_back(x);
  }
  if (static_cast<int>(roots.size()) != n) return {};
  IntPoly df = derivative(f);
  for (auto r : roots) {
    std::uint64_t acc = 0;
    for (int k = degree(df); k >= 0; --k) acc = (mulmod(acc, r, p) + mod(df[k], p)) % p;
    if (acc == 0) return {};
  }
  return roots;
}

std::vector<std::uint64_t> find_sieve_primes(const UnitSystem& us, const RationalElement& a, int count,
                                             std::uint64_t start) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = std::max<std::uint64_t>(start, 3); static_cast<int>(out.size()) < count; ++p) {
    if (!is_prime(p) || mod(a.den, p) == 0) continue;
    if (!split_roots(us.field().polynomial(), p).empty()) out.push_back(p);
  }
  return out;
}

SievePlan make_sieve_plan(const UnitSystem& us, const RationalElement& a, const std::vector<std::uint64_t>& primes,
                          long long max_exponent) {
  SievePlan plan;
  plan.max_exponent = max_exponent;
  const OrderContext& g = us.field();
  for (std::uint64_t p : primes) {
    if (p < 3 || p > 0xffffffffull || !is_prime(p)) fail(ErrorKind::kInput, "sieve prime " + std::to_string(p) + " is not an odd prime below 2^32");
    SievePrime sp;
    sp.p = p;
    sp.roots = split_roots(g.polynomial(), p);
    if (sp.roots.empty())
      fail(ErrorKind::kInput, "the field polynomial does not split into distinct factors mod " + std::to_string(p));
    const std::uint64_t den = mod(a.den, p);
    if (den == 0) fail(ErrorKind::kInput, "sieve prime " + std::to_string(p) + " divides the denominator of A");
    const std::uint64_t den_inv = powmod(den, p - 2, p);
    for (auto r : sp.roots) {
      std::uint64_t t = evaluate_mod(us.sigma, r, p);
      int idx = -1;
      for (std::size_t k = 0; k < sp.roots.size(); ++k)
        if (sp.roots[k] == t) idx = static_cast<int>(k);
      if (idx < 0) fail(ErrorKind::kVerification, "relative conjugation does not permute the roots mod " + std::to_string(p));
      sp.partner.push_back(idx);
      sp.a_values.push_back(mulmod(evaluate_mod(a.num, r, p), den_inv, p));
      std::vector<std::vector<std::uint32_t>> per_unit;
      std::vector<std::uint64_t> values;
      for (int k = 0; k < us.count(); ++k) {
        const std::uint64_t u = evaluate_mod(us.units[k], r, p);
        if (u == 0) fail(ErrorKind::kVerification, "unit vanishes mod " + std::to_string(p));
        values.push_back(u);
        const std::uint64_t ui = powmod(u, p - 2, p);
        std::vector<std::uint32_t> tab(static_cast<std::size_t>(2 * max_exponent + 1));
        tab[max_exponent] = 1;
        for (long long e = 1; e <= max_exponent; ++e) {
          tab[max_exponent + e] = static_cast<std::uint32_t>(mulmod(tab[max_exponent + e - 1], u, p));
          tab[max_exponent - e] = static_cast<std::uint32_t>(mulmod(tab[max_exponent - e + 1], ui, p));
        }
        per_unit.push_back(std::move(tab));
      }
      sp.powers.push_back(std::move(per_unit));
      sp.unit_values.push_back(std::move(values));
    }
    plan.primes.push_back(std::move(sp));
  }
  return plan;
}

unsigned sieve_signs_at(const SievePlan& plan, std::size_t prime_index, const ExpVec& v) {
  const SievePrime& sp = plan.primes[prime_index];
  const std::uint64_t p = sp.p;
  const std::size_t n = sp.roots.size();
  for (Eigen::Index k = 0; k < v.size(); ++k)
    if (v(k) > plan.max_exponent || v(k) < -plan.max_exponent) fail(ErrorKind::kInput, "exponent outside the sieve tables");
  std::vector<std::uint64_t> w(n);
  for (std::size_t r = 0; r < n; ++r) {
    std::uint64_t acc = sp.a_values[r];
    for (Eigen::Index k = 0; k < v.size(); ++k) acc = mulmod(acc, sp.powers[r][k][v(k) + plan.max_exponent], p);
    w[r] = acc;
  }
  unsigned mask = 3;
  for (std::size_t r = 0; r < n && mask; ++r) {
    const std::uint64_t t = (w[r] + w[sp.partner[r]]) % p;
    if (t != 1) mask &= ~1u;
    if (t != p - 1) mask &= ~2u;
  }
  return mask;
}

unsigned sieve_signs(const SievePlan& plan, const ExpVec& v) {
  unsigned mask = 3;
  for (std::size_t i = 0; i < plan.primes.size() && mask; ++i) mask &= sieve_signs_at(plan, i, v);
  return mask;
}

}  // namespace relthue
