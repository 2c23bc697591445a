#include "relthue/roots.hpp"

#include "relthue/errors.hpp"

#include <algorithm>

namespace relthue {
namespace {

// One Aberth sweep; returns the largest relative correction.
Real aberth_sweep(const std::vector<ComplexR>& c, const std::vector<ComplexR>& dc, std::vector<ComplexR>& z) {
  Real worst = 0;
  const std::size_t n = z.size();
  for (std::size_t k = 0; k < n; ++k) {
    ComplexR p = horner(c, z[k]);
    ComplexR dp = horner(dc, z[k]);
    if (p.norm_sq() == 0) continue;
    ComplexR w = p / dp;
    ComplexR s;
    for (std::size_t j = 0; j < n; ++j)
      if (j != k) s += ComplexR(1) / (z[k] - z[j]);
    ComplexR step = w / (ComplexR(1) - w * s);
    z[k] -= step;
    Real rel = abs(step) / (1 + abs(z[k]));
    if (rel > worst) worst = rel;
  }
  return worst;
}

std::vector<ComplexR> with_precision(const std::vector<ComplexR>& v) {
  std::vector<ComplexR> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(at_working(x));
  return out;
}

}  // namespace

std::vector<ComplexR> complex_roots(const std::vector<ComplexR>& coeffs_in, unsigned digits) {
  std::vector<ComplexR> coeffs = coeffs_in;
  while (!coeffs.empty() && coeffs.back().norm_sq() == 0) coeffs.pop_back();
  if (coeffs.size() < 2) fail(ErrorKind::kInput, "root finding needs a polynomial of degree >= 1");
  const std::size_t n = coeffs.size() - 1;
  if (n == 1) {
    PrecisionGuard g(digits + 10);
    auto c = with_precision(coeffs);
    return {-c[0] / c[1]};
  }

  std::vector<ComplexR> z;
  // Coarse stage at modest precision, then polish at the target.
  const unsigned stages[2] = {std::min(digits, 30u), digits};
  for (unsigned stage : stages) {
    PrecisionGuard g(stage + 10);
    auto c = with_precision(coeffs);
    std::vector<ComplexR> dc;
    for (std::size_t k = 1; k <= n; ++k) dc.push_back(c[k] * ComplexR(Real(static_cast<long>(k))));
    if (z.empty()) {
      Real radius = 0;
      Real lead = abs(c[n]);
      for (std::size_t k = 0; k < n; ++k) {
        Real t = abs(c[k]) / lead;
        if (t == 0) continue;
        t = boost::multiprecision::pow(t, Real(1) / Real(static_cast<long>(n - k)));
        if (t > radius) radius = t;
      }
      radius = 2 * radius + 1;
      const Real pi = acos(Real(-1));
      for (std::size_t k = 0; k < n; ++k) {
        Real ang = 2 * pi * Real(static_cast<long>(k)) / Real(static_cast<long>(n)) + Real(0.4);
        z.emplace_back(radius * cos(ang), radius * sin(ang));
      }
    } else {
      z = with_precision(z);
    }
    const Real target = pow10_neg(static_cast<int>(stage) + 2);
    int iter = 0;
    const int max_iter = 2000;
    Real last = 1;
    while (iter++ < max_iter) {
      last = aberth_sweep(c, dc, z);
      if (last < target) break;
    }
    if (last >= target && stage == digits)
      fail(ErrorKind::kPrecision, "root finder did not converge");
  }

  PrecisionGuard g(digits + 10);
  auto c = with_precision(coeffs);
  const Real tol = pow10_neg(static_cast<int>(digits / 2));
  for (const auto& r : z) {
    Real scale = 0;
    Real ar = abs(r);
    Real pw = 1;
    for (const auto& a : c) {
      scale += abs(a) * pw;
      pw *= ar;
    }
    if (abs(horner(c, r)) > tol * scale) fail(ErrorKind::kPrecision, "root residual above tolerance");
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (abs(z[i] - z[j]) < tol) fail(ErrorKind::kPrecision, "roots not separated at working precision");
  return z;
}

void sort_roots(std::vector<ComplexR>& roots) {
  std::stable_sort(roots.begin(), roots.end(), [](const ComplexR& a, const ComplexR& b) {
    const bool ra = a.im == 0, rb = b.im == 0;
    if (ra != rb) return ra;
    if (a.re != b.re) return a.re < b.re;
    return a.im < b.im;
  });
}

std::vector<ComplexR> integer_roots(const IntPoly& p, unsigned digits) {
  std::vector<ComplexR> coeffs;
  {
    PrecisionGuard g(digits + 10);
    for (const auto& a : p) coeffs.emplace_back(Real(a));
  }
  auto roots = complex_roots(coeffs, digits);
  PrecisionGuard g(digits + 10);
  const Real tol = pow10_neg(static_cast<int>(digits / 2));
  // Non-real roots of a real polynomial come in conjugate pairs; a root is
  // real exactly when its imaginary part is below the threshold.
  for (auto& r : roots)
    if (boost::multiprecision::abs(r.im) < tol * (1 + abs(r))) r.im = 0;
  // Make conjugate pairs exact mirror images so the ordering is stable.
  for (auto& r : roots) {
    if (r.im <= 0) continue;
    ComplexR* partner = nullptr;
    Real best = 0;
    for (auto& q : roots) {
      if (q.im >= 0) continue;
      Real dist = abs(q - r.conj());
      if (partner == nullptr || dist < best) {
        partner = &q;
        best = dist;
      }
    }
    if (partner != nullptr) *partner = r.conj();
  }
  sort_roots(roots);
  return roots;
}

}  // namespace relthue
