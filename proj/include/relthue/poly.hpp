#pragma once

// Dense univariate polynomials with exact integer coefficients, stored
// lowest degree first.

#include "relthue/numeric.hpp"

#include <string>
#include <vector>

namespace relthue {

using IntPoly = std::vector<Integer>;

int degree(const IntPoly& p);
void trim(IntPoly& p);
IntPoly derivative(const IntPoly& p);
Integer evaluate(const IntPoly& p, const Integer& x);
std::string to_string(const IntPoly& p, const std::string& var = "x");

/// Determinant of a square integer matrix by fraction-free (Bareiss)
/// elimination.
Integer determinant(IntMatrix m);

/// Resultant Res(a, b) = lc(a)^deg(b) * prod b(roots of a), computed as the
/// determinant of the Sylvester matrix.
Integer resultant(const IntPoly& a, const IntPoly& b);

/// Discriminant with the usual sign convention
/// (-1)^(n(n-1)/2) Res(p, p') / lc(p).
Integer discriminant(const IntPoly& p);

/// Characteristic polynomial det(x I - m) by the division-free Berkowitz
/// algorithm. Result is monic, lowest degree first.
IntPoly characteristic_polynomial(const IntMatrix& m);

/// Solve m x = rhs exactly. Returns (numerators, common denominator) with the
/// denominator positive; throws when m is singular.
std::pair<std::vector<Integer>, Integer> solve_exact(const IntMatrix& m, const std::vector<Integer>& rhs);

/// Unimodular column reduction m * u = h where the first `rank` columns of
/// h are in echelon form and the remaining columns are zero. The trailing
/// columns of u form a basis of the integer kernel of m.
struct ColumnEchelon {
  IntMatrix h;
  IntMatrix u;
  int rank = 0;
};
ColumnEchelon column_echelon(const IntMatrix& m);

/// Integer square root when x is a perfect square, -1 otherwise.
Integer exact_sqrt(const Integer& x);

}  // namespace relthue
