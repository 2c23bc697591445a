#pragma once

// Initial exponent bounds from lower bounds for linear forms in logarithms.

#include "relthue/numeric.hpp"
#include "relthue/order.hpp"

#include <string>
#include <vector>

namespace relthue {

struct C1Result {
  Real c1;
  std::vector<int> rows;  // rows of the square submatrix that produced c1
  Real det;               // its determinant
};

/// For a log matrix L (N rows, R <= N-1 columns, column sums zero) returns
/// c1 > 0 such that every nonzero integer v has some row i with
/// (L v)_i <= -c1 * max|v_k|. Uses c1 = 1 / ((N-1) * ||L_I^-1||_inf) for
/// the R-row submatrix L_I giving the largest value.
C1Result compute_c1(const RealMatrix& logs);

/// Absolute logarithmic height of a/den for an algebraic integer a of the
/// order (den > 0), from the primitive integer characteristic polynomial.
Real height(const Element& a, const OrderContext& ctx, const Integer& den = 1);
Real height(const Integer& c);

struct LinearFormSpec {
  std::vector<Real> logs;     // log|alpha_k| at the chosen embedding, constant term first
  std::vector<Real> heights;  // h(alpha_k)
  int degree = 1;             // degree of the field generated by the alpha_k
  Real log_factor = 0;        // c'' in  c1 E <= c'' + C log E
};

/// Baker–Wüstholz constant C = C(n,d) * prod h'(alpha_k) with
/// C(n,d) = 18 (n+1)! n^(n+1) (32d)^(n+2) log(2nd) and
/// h' = max(h, |log alpha| / d, 1 / d).
Real baker_wustholz_constant(const LinearFormSpec& spec);

struct BakerBound {
  Real constant;       // C
  Integer bound;       // E_B
  Real slack_at_bound; // c1 (E_B + 1) - c'' - C log(E_B + 1) > 0 certifies E_B
  std::string backend = "baker-wustholz-1993";
};

/// Largest E with c1 E <= log_factor + C log E, rounded up; 1 when there is
/// no such E >= 1.
Integer crossover_bound(const Real& c1, const Real& c, const Real& log_factor);

BakerBound baker_bound(const LinearFormSpec& spec, const Real& c1);

}  // namespace relthue
