#include "relthue/baker.hpp"

#include "relthue/errors.hpp"

#include <numeric>

namespace relthue {
namespace {

// All k-subsets of {0..n-1} in lexicographic order.
void subsets(int n, int k, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

Real log_plus(const Real& x) { return x > 1 ? Real(log(x)) : Real(0); }

}  // namespace

C1Result compute_c1(const RealMatrix& logs) {
  const int n = static_cast<int>(logs.rows());
  const int r = static_cast<int>(logs.cols());
  if (r == 0 || r >= n) fail(ErrorKind::kInput, "compute_c1 needs 0 < columns < rows");
  std::vector<std::vector<int>> choices;
  std::vector<int> cur;
  subsets(n, r, 0, cur, choices);
  C1Result best;
  best.c1 = 0;
  const Real tiny = pow10_neg(static_cast<int>(working_digits() / 4));
  for (const auto& rows : choices) {
    RealMatrix sub(r, r);
    for (int i = 0; i < r; ++i) sub.row(i) = logs.row(rows[i]);
    Eigen::FullPivLU<RealMatrix> lu(sub);
    Real det = lu.determinant();
    if (abs(det) < tiny) continue;
    RealMatrix inv = lu.inverse();
    Real norm = 0;
    for (int i = 0; i < r; ++i) {
      Real s = 0;
      for (int j = 0; j < r; ++j) s += abs(inv(i, j));
      if (s > norm) norm = s;
    }
    Real c1 = 1 / (Real(n - 1) * norm);
    if (c1 > best.c1) {
      best.c1 = c1;
      best.rows = rows;
      best.det = det;
    }
  }
  if (best.c1 == 0) fail(ErrorKind::kVerification, "log matrix is rank deficient");
  return best;
}

Real height(const Integer& c) {
  if (c == 0) fail(ErrorKind::kInput, "height of zero");
  return log(abs(Real(c)));
}

Real height(const Element& a, const OrderContext& ctx, const Integer& den) {
  if (a.isZero()) fail(ErrorKind::kInput, "height of zero");
  if (den <= 0) fail(ErrorKind::kInput, "height needs a positive denominator");
  const int n = ctx.degree();
  // char_{a/den}(x) is proportional to char_a(den x); its primitive integer
  // version is a power of the primitive minimal polynomial.
  IntPoly cp = characteristic_polynomial(a, ctx);
  Integer scale = 1, content = 0;
  for (int k = 0; k <= n; ++k) {
    cp[k] *= scale;
    scale *= den;
    content = boost::multiprecision::gcd(content, cp[k]);
  }
  const Integer lead = cp[n] / content;
  Real sum = log(Real(lead));
  const Real d(den);
  for (int k = 0; k < n; ++k) sum += log_plus(abs(embed(a, ctx, k)) / d);
  return sum / Real(n);
}

Real baker_wustholz_constant(const LinearFormSpec& spec) {
  const int n = static_cast<int>(spec.logs.size());
  if (n == 0 || spec.heights.size() != spec.logs.size()) fail(ErrorKind::kInput, "linear form data mismatch");
  const Real nn(n), d(spec.degree);
  Real fact = 1;
  for (int k = 2; k <= n + 1; ++k) fact *= k;
  Real c = 18 * fact * pow(nn, n + 1) * pow(32 * d, n + 2) * log(2 * nn * d);
  for (int k = 0; k < n; ++k) {
    Real h = spec.heights[k];
    h = std::max(h, Real(abs(spec.logs[k]) / d));
    h = std::max(h, Real(1 / d));
    c *= h;
  }
  return c;
}

Integer crossover_bound(const Real& c1, const Real& c, const Real& log_factor) {
  if (c1 <= 0 || c < 0) fail(ErrorKind::kInput, "crossover needs c1 > 0 and C >= 0");
  auto f = [&](const Real& e) { return c1 * e - log_factor - c * log(e); };
  // f is convex on E > 0 with minimum at E = C / c1.
  Real emin = c / c1;
  if (emin < 1) emin = 1;
  if (f(emin) > 0) return 1;
  // Fixed-point iteration from above converges to the largest root since
  // the map E -> (c'' + C log E) / c1 is a contraction for E > C / c1.
  Real e = 2 * emin * (1 + log(1 + emin)) + 2 * abs(log_factor) / c1 + 2;
  for (int it = 0; it < 500; ++it) {
    Real next = (log_factor + c * log(e)) / c1;
    if (abs(next - e) < Real(1e-6)) {
      e = next;
      break;
    }
    e = next;
  }
  Integer b = ceil_to_integer(e);
  while (f(Real(b + 1)) <= 0) ++b;
  return b < 1 ? Integer(1) : b;
}

BakerBound baker_bound(const LinearFormSpec& spec, const Real& c1) {
  BakerBound out;
  out.constant = baker_wustholz_constant(spec);
  out.bound = crossover_bound(c1, out.constant, spec.log_factor);
  const Real e1(out.bound + 1);
  out.slack_at_bound = c1 * e1 - spec.log_factor - out.constant * log(e1);
  return out;
}

}  // namespace relthue
