#pragma once

// Integer lattices: exact LLL, the bound-reduction step for small linear
// forms in logarithms, and Fincke–Pohst enumeration of integer points in
// (translated, weighted) ellipsoids.

#include "relthue/errors.hpp"
#include "relthue/numeric.hpp"
#include "relthue/units.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace relthue {

struct LllResult {
  IntMatrix basis;      // reduced basis, columns
  IntMatrix transform;  // unimodular, basis = input * transform
};

/// Integral LLL (all Gram–Schmidt data kept as exact integers). The
/// columns of `basis` must be linearly independent.
LllResult lll_reduce(const IntMatrix& basis, const Rational& delta = Rational(3, 4));

/// Checks the size-reduction and Lovász conditions exactly.
bool is_lll_reduced(const IntMatrix& basis, const Rational& delta = Rational(3, 4));

// ---------------------------------------------------------------------------
// Bound reduction

/// |d_1 zeta_1 + ... + d_n zeta_n| < c1 exp(-c2 D - c3) for D = max |d_i|.
struct SmallLinearForm {
  std::vector<Real> zeta;
  Real c1 = 1;
  Real c2 = 1;
  Real c3 = 0;
};

struct ReductionStep {
  Integer d0;
  int log10_h = 0;
  unsigned digits = 0;
  bool passed = false;
  double log10_b1 = 0;     // |b_1| of the reduced basis
  double log10_margin = 0; // certified lower bound for H|Lambda| on solutions
  Integer new_bound;
};

/// One application of the reduction lemma with H = 10^log10_h. The real
/// row H*zeta is rounded to integers; the rounding error n*D0/2 is
/// subtracted from the certified margin before the norm test. Returns a
/// step with passed = false when H is too small.
/// With LLL parameter delta, |b_1|^2 <= a^(n-1) lambda_1^2 for
/// a = 1 / (delta - 1/4); delta = 3/4 gives the classical 2^(n-1).
ReductionStep reduction_step(const SmallLinearForm& form, const Integer& d0, int log10_h,
                             const Rational& delta = Rational(3, 4));

struct ReductionOptions {
  int growth = 2;       // H is multiplied by 10^growth on failure
  int max_tries = 10;
  double min_gain = 0.01;
  Rational delta{99, 100};
};

struct ReductionRun {
  Integer bound;
  std::vector<ReductionStep> steps;  // successful rounds
  std::vector<ReductionStep> attempts;  // every attempt, including failed ones
};

/// Repeats reduction_step until the bound improves by less than min_gain.
/// Throws kPrecision when no H within the schedule passes the first round.
ReductionRun reduce_to_fixpoint(const SmallLinearForm& form, const Integer& e_b, const ReductionOptions& opt = {});

/// Decimal digits used for a reduction step at H = 10^log10_h.
unsigned reduction_digits(int log10_h);

// ---------------------------------------------------------------------------
// Ellipsoid enumeration

/// All integer x in the box lo <= x <= hi with
///   sum_r (weights_r * (offset_r + (generators * x)_r))^2 <= radius_sq.
template <typename Scalar>
struct EllipsoidProblem {
  Vec<Scalar> offset;
  Mat<Scalar> generators;
  Vec<Scalar> weights;
  Scalar radius_sq{0};
  std::vector<long long> lo, hi;

  int dim() const { return static_cast<int>(generators.cols()); }
};

struct EnumerationStats {
  std::uint64_t nodes = 0;
  std::uint64_t candidates = 0;
  bool box_fallback = false;
};

namespace detail {

inline Integer to_integer(double x) { return Integer(static_cast<long long>(std::llround(x))); }
inline Integer to_integer(const Real& x) { return round_to_integer(x); }
inline double scalar_log2(double x) { return std::log2(std::fabs(x)); }
inline double scalar_log2(const Real& x) { return to_double(log(abs(x)) / log(Real(2))); }
template <typename Scalar>
Scalar from_integer(const Integer& x) {
  if constexpr (std::is_same_v<Scalar, double>) {
    return x.convert_to<double>();
  } else {
    return Scalar(x);
  }
}
template <typename Scalar>
unsigned mantissa_bits() {
  if constexpr (std::is_same_v<Scalar, double>) {
    return 53;
  } else {
    return static_cast<unsigned>(working_digits() * 3.32);
  }
}
template <typename Scalar>
Scalar scalar_floor(const Scalar& x) {
  using std::floor;
  return floor(x);
}
template <typename Scalar>
Scalar scalar_ceil(const Scalar& x) {
  using std::ceil;
  return ceil(x);
}
template <typename Scalar>
long long to_ll(const Scalar& x) {
  if constexpr (std::is_same_v<Scalar, double>) {
    return static_cast<long long>(x);
  } else {
    return round_to_integer(x).template convert_to<long long>();
  }
}

}  // namespace detail

template <typename Scalar>
Scalar weighted_norm_sq(const EllipsoidProblem<Scalar>& p, const ExpVec& x) {
  Scalar total = 0;
  for (Eigen::Index r = 0; r < p.generators.rows(); ++r) {
    Scalar v = p.offset(r);
    for (int k = 0; k < p.dim(); ++k)
      if (x(k) != 0) v += p.generators(r, k) * Scalar(static_cast<double>(x(k)));
    v *= p.weights(r);
    total += v * v;
  }
  return total;
}

/// Reference enumeration: scans the whole box.
template <typename Scalar>
std::vector<ExpVec> box_enumerate(const EllipsoidProblem<Scalar>& p, std::uint64_t cap) {
  const int d = p.dim();
  double count = 1;
  for (int k = 0; k < d; ++k) count *= static_cast<double>(p.hi[k] - p.lo[k] + 1);
  if (count > static_cast<double>(cap)) fail(ErrorKind::kCardinalityCap, "box enumeration exceeds the cap");
  std::vector<ExpVec> out;
  ExpVec x(d);
  for (int k = 0; k < d; ++k) x(k) = p.lo[k];
  if (d == 0) {
    if (weighted_norm_sq(p, x) <= p.radius_sq) out.push_back(x);
    return out;
  }
  while (true) {
    if (weighted_norm_sq(p, x) <= p.radius_sq) out.push_back(x);
    int k = d - 1;
    while (k >= 0 && x(k) == p.hi[k]) {
      x(k) = p.lo[k];
      --k;
    }
    if (k < 0) break;
    ++x(k);
  }
  return out;
}

inline bool lex_less(const ExpVec& a, const ExpVec& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

/// Fincke–Pohst with LLL preprocessing. The weighted generator matrix is
/// scaled to integers and LLL-reduced, the Cholesky factor of the reduced
/// Gram matrix drives the depth-first search with a small relative slack,
/// and every candidate is re-checked by direct evaluation. Output is sorted
/// lexicographically. Falls back to the box scan when the form is not
/// positive definite at working precision.
template <typename Scalar>
std::vector<ExpVec> fincke_pohst(const EllipsoidProblem<Scalar>& p, std::uint64_t cap = 10'000'000,
                                 EnumerationStats* stats = nullptr) {
  using detail::from_integer;
  const int d = p.dim();
  const Eigen::Index rows = p.generators.rows();
  EnumerationStats local;
  EnumerationStats& st = stats ? *stats : local;
  if (d == 0) return box_enumerate(p, cap);

  Mat<Scalar> b(rows, d);
  Vec<Scalar> t(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    t(r) = -p.weights(r) * p.offset(r);
    for (int k = 0; k < d; ++k) b(r, k) = p.weights(r) * p.generators(r, k);
  }

  // Integer image of b for LLL, scaled so that the largest entry uses most
  // of the mantissa.
  Scalar biggest = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (int k = 0; k < d; ++k) {
      using std::abs;
      Scalar a = abs(b(r, k));
      if (a > biggest) biggest = a;
    }
  if (biggest == 0) {
    st.box_fallback = true;
    return box_enumerate(p, cap);
  }
  const int shift = static_cast<int>(detail::mantissa_bits<Scalar>()) - 8 - static_cast<int>(std::ceil(detail::scalar_log2(biggest)));
  Scalar scale = 1;
  {
    using std::ldexp;
    if constexpr (std::is_same_v<Scalar, double>) {
      scale = std::ldexp(1.0, shift);
    } else {
      scale = boost::multiprecision::ldexp(Scalar(1), shift);
    }
  }
  IntMatrix bi(rows, d);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (int k = 0; k < d; ++k) bi(r, k) = detail::to_integer(Scalar(b(r, k) * scale));

  IntMatrix u = IntMatrix::Identity(d, d);
  bool lll_ok = true;
  try {
    u = lll_reduce(bi).transform;
  } catch (const Error&) {
    lll_ok = false;
  }
  if (!lll_ok) {
    st.box_fallback = true;
    return box_enumerate(p, cap);
  }

  Mat<Scalar> us(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) us(i, j) = from_integer<Scalar>(u(i, j));
  Mat<Scalar> br = b * us;
  Mat<Scalar> gram = br.transpose() * br;
  Vec<Scalar> rhs = br.transpose() * t;

  // LDL^T style Cholesky: q(i,i) diagonal, q(i,j) for j > i.
  Mat<Scalar> q = gram;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      q(j, i) = q(i, j);
      q(i, j) = q(i, j) / q(i, i);
    }
    for (int k = i + 1; k < d; ++k)
      for (int l = k; l < d; ++l) q(k, l) -= q(k, i) * q(i, l);
    if (!(q(i, i) > 0)) {
      st.box_fallback = true;
      return box_enumerate(p, cap);
    }
  }
  // Center of the ellipsoid in y-coordinates: gram * c = rhs.
  Vec<Scalar> c(d);
  {
    Vec<Scalar> z = rhs;
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < i; ++k) z(i) -= q(k, i) * z(k);
    for (int i = 0; i < d; ++i) z(i) /= q(i, i);
    for (int i = d - 1; i >= 0; --i) {
      c(i) = z(i);
      for (int k = i + 1; k < d; ++k) c(i) -= q(i, k) * c(k);
    }
  }
  Vec<Scalar> resid = br * c - t;
  Scalar r0 = resid.squaredNorm();
  Scalar budget = p.radius_sq - r0;
  // Slack so that rounding in the recursion can never lose a point; the
  // final direct evaluation removes the extras.
  const Scalar slack = std::is_same_v<Scalar, double> ? Scalar(1e-9) : Scalar(pow10_neg(static_cast<int>(working_digits() / 3)));
  budget = budget + (p.radius_sq + 1) * slack;
  std::vector<ExpVec> out;
  if (budget < 0) return out;

  std::vector<Scalar> partial(d + 1, Scalar(0));  // accumulated quadratic form from level i+1
  std::vector<Scalar> centre(d, Scalar(0));
  std::vector<long long> y(d, 0), ymax(d, 0);
  auto level_bounds = [&](int i) {
    Scalar cc = c(i);
    for (int k = i + 1; k < d; ++k) cc -= q(i, k) * (Scalar(static_cast<double>(y[k])) - c(k));
    centre[i] = cc;
    Scalar rem = budget - partial[i + 1];
    if (rem < 0) rem = 0;
    using std::sqrt;
    Scalar w = sqrt(rem / q(i, i));
    y[i] = detail::to_ll(detail::scalar_ceil<Scalar>(cc - w));
    ymax[i] = detail::to_ll(detail::scalar_floor<Scalar>(cc + w));
  };

  std::uint64_t produced = 0;
  int i = d - 1;
  partial[d] = 0;
  level_bounds(i);
  while (true) {
    if (y[i] > ymax[i]) {
      ++i;
      if (i == d) break;
      ++y[i];
      continue;
    }
    if (++st.nodes > 50 * cap + 100000) fail(ErrorKind::kCardinalityCap, "ellipsoid search tree exceeds the cap");
    Scalar diff = Scalar(static_cast<double>(y[i])) - centre[i];
    partial[i] = partial[i + 1] + q(i, i) * diff * diff;
    if (i == 0) {
      ++st.candidates;
      ExpVec yy(d);
      for (int k = 0; k < d; ++k) yy(k) = y[k];
      ExpVec x(d);
      for (int r = 0; r < d; ++r) {
        Integer acc = 0;
        for (int k = 0; k < d; ++k) acc += u(r, k) * yy(k);
        x(r) = acc.convert_to<long long>();
      }
      bool inside = true;
      for (int k = 0; k < d && inside; ++k) inside = x(k) >= p.lo[k] && x(k) <= p.hi[k];
      if (inside && weighted_norm_sq(p, x) <= p.radius_sq) {
        out.push_back(std::move(x));
        if (++produced > cap) fail(ErrorKind::kCardinalityCap, "ellipsoid enumeration exceeds the cap");
      }
      ++y[0];
      continue;
    }
    --i;
    level_bounds(i);
  }
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

}  // namespace relthue
