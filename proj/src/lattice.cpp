#include "relthue/lattice.hpp"

#include <cmath>

namespace relthue {
namespace {

Integer round_div(const Integer& a, const Integer& b) {
  // Nearest integer to a/b for b > 0.
  Integer twice = 2 * a + b;
  Integer q = twice / (2 * b);
  if (twice < 0 && q * 2 * b != twice) q -= 1;
  return q;
}

}  // namespace

LllResult lll_reduce(const IntMatrix& input, const Rational& delta) {
  const int n = static_cast<int>(input.cols());
  LllResult res{input, IntMatrix::Identity(n, n)};
  if (n == 0) return res;
  IntMatrix& b = res.basis;
  IntMatrix& h = res.transform;
  const Integer dn = boost::multiprecision::numerator(delta);
  const Integer dd = boost::multiprecision::denominator(delta);

  // 1-based Gram–Schmidt data as in the integral algorithm: d[0] = 1,
  // d[i] = det of the leading Gram block, lam(k, j) = d[j] * mu(k, j).
  std::vector<Integer> d(n + 1);
  IntMatrix lam = IntMatrix::Zero(n + 1, n + 1);
  auto dot = [&](int i, int j) { return b.col(i - 1).dot(b.col(j - 1)); };

  auto red = [&](int k, int l) {
    if (2 * boost::multiprecision::abs(lam(k, l)) <= d[l]) return;
    Integer q = round_div(lam(k, l), d[l]);
    b.col(k - 1) -= q * b.col(l - 1);
    h.col(k - 1) -= q * h.col(l - 1);
    lam(k, l) -= q * d[l];
    for (int i = 1; i < l; ++i) lam(k, i) -= q * lam(l, i);
  };

  int kmax = 1;
  d[0] = 1;
  d[1] = dot(1, 1);
  if (d[1] == 0) fail(ErrorKind::kInput, "lll_reduce: zero basis vector");
  int k = 2;
  while (k <= n) {
    if (k > kmax) {
      kmax = k;
      for (int j = 1; j <= k; ++j) {
        Integer u = dot(k, j);
        for (int i = 1; i < j; ++i) u = (d[i] * u - lam(k, i) * lam(j, i)) / d[i - 1];
        if (j < k) {
          lam(k, j) = u;
        } else {
          d[k] = u;
          if (u == 0) fail(ErrorKind::kInput, "lll_reduce: linearly dependent columns");
        }
      }
    }
    red(k, k - 1);
    // Lovász: d[k] d[k-2] >= delta d[k-1]^2 - lam^2, scaled by dd.
    if (dd * d[k] * d[k - 2] < dn * d[k - 1] * d[k - 1] - dd * lam(k, k - 1) * lam(k, k - 1)) {
      b.col(k - 1).swap(b.col(k - 2));
      h.col(k - 1).swap(h.col(k - 2));
      for (int j = 1; j <= k - 2; ++j) std::swap(lam(k, j), lam(k - 1, j));
      const Integer l = lam(k, k - 1);
      const Integer bb = (d[k - 2] * d[k] + l * l) / d[k - 1];
      for (int i = k + 1; i <= kmax; ++i) {
        Integer t = lam(i, k);
        lam(i, k) = (d[k] * lam(i, k - 1) - l * t) / d[k - 1];
        lam(i, k - 1) = (bb * t + l * lam(i, k)) / d[k];
      }
      d[k - 1] = bb;
      k = std::max(2, k - 1);
    } else {
      for (int l = k - 2; l >= 1; --l) red(k, l);
      ++k;
    }
  }
  return res;
}

bool is_lll_reduced(const IntMatrix& basis, const Rational& delta) {
  const int n = static_cast<int>(basis.cols());
  std::vector<Vec<Rational>> star;
  std::vector<Rational> norms;
  Mat<Rational> mu = Mat<Rational>::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    Vec<Rational> v = basis.col(i).unaryExpr([](const Integer& x) { return Rational(x); });
    Vec<Rational> s = v;
    for (int j = 0; j < i; ++j) {
      mu(i, j) = v.dot(star[j]) / norms[j];
      s -= mu(i, j) * star[j];
    }
    star.push_back(s);
    norms.push_back(s.squaredNorm());
    if (norms.back() == 0) return false;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j)
      if (2 * boost::multiprecision::abs(mu(i, j)) > 1) return false;
  for (int k = 1; k < n; ++k)
    if (norms[k] < (delta - mu(k, k - 1) * mu(k, k - 1)) * norms[k - 1]) return false;
  return true;
}

unsigned reduction_digits(int log10_h) {
  return std::max(30u, static_cast<unsigned>(std::ceil(1.8 * log10_h)));
}

ReductionStep reduction_step(const SmallLinearForm& form, const Integer& d0, int log10_h, const Rational& delta) {
  ReductionStep step;
  step.d0 = d0;
  step.log10_h = log10_h;
  step.digits = reduction_digits(log10_h);
  PrecisionGuard guard(step.digits + 10);
  const int n = static_cast<int>(form.zeta.size());
  const Real h = boost::multiprecision::pow(Real(10), log10_h);

  // Columns: e_k stacked on the rounded H * zeta_k. The logarithms are real,
  // so the imaginary row of the general construction is absent.
  IntMatrix m = IntMatrix::Zero(n + 1, n);
  for (int k = 0; k < n; ++k) {
    m(k, k) = 1;
    m(n, k) = round_to_integer(h * at_working(form.zeta[k]));
  }
  LllResult lll = lll_reduce(m, delta);
  const Integer b1sq = lll.basis.col(0).squaredNorm();
  step.log10_b1 = log_abs(b1sq) / (2 * std::log(10.0));

  // Every nonzero lattice vector has length^2 >= |b1|^2 / a^(n-1). A
  // solution vector has its first n coordinates bounded by d0, so its last
  // coordinate, and hence H|Lambda| up to rounding, is bounded below.
  const Real a = Real(1) / (Real(boost::multiprecision::numerator(delta)) / Real(boost::multiprecision::denominator(delta)) - Real(0.25));
  const Real t2 = Real(b1sq) / boost::multiprecision::pow(a, n - 1);
  const Real d0r(d0);
  const Real rest = t2 - Real(n) * d0r * d0r;
  if (rest <= 0) return step;
  const Real margin = sqrt(rest) - Real(n) * d0r / 2;
  if (margin <= 0) return step;
  step.log10_margin = to_double(log10(margin));
  if (margin < d0r) return step;

  step.passed = true;
  const Real value = (log(h) + log(at_working(form.c1)) - at_working(form.c3) - log(d0r)) / at_working(form.c2);
  step.new_bound = value < 0 ? Integer(0) : floor_to_integer(value);
  return step;
}

ReductionRun reduce_to_fixpoint(const SmallLinearForm& form, const Integer& e_b, const ReductionOptions& opt) {
  ReductionRun run;
  run.bound = e_b;
  const int n = static_cast<int>(form.zeta.size());
  while (true) {
    const Integer& d0 = run.bound;
    int lh = std::max(1, static_cast<int>(std::ceil(n * log_abs(d0 < 1 ? Integer(1) : d0) / std::log(10.0))));
    bool passed = false;
    ReductionStep step;
    for (int t = 0; t < opt.max_tries; ++t, lh += opt.growth) {
      step = reduction_step(form, d0, lh, opt.delta);
      run.attempts.push_back(step);
      if (step.passed) {
        passed = true;
        break;
      }
    }
    if (!passed) {
      if (run.steps.empty()) fail(ErrorKind::kPrecision, "reduction failed for every H in the schedule");
      break;
    }
    run.steps.push_back(step);
    if (step.new_bound >= d0) break;
    const bool small_gain = to_double(Real(d0 - step.new_bound)) < opt.min_gain * to_double(Real(d0));
    run.bound = step.new_bound;
    if (small_gain) break;
  }
  return run;
}

}  // namespace relthue
