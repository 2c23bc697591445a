#pragma once

// Polynomial root finding at arbitrary precision (Aberth–Ehrlich iteration).

#include "relthue/numeric.hpp"
#include "relthue/poly.hpp"

#include <vector>

namespace relthue {

/// All complex roots of the polynomial with the given coefficients (lowest
/// degree first) to about `digits` decimal digits. Roots are assumed simple;
/// throws kPrecision when the iteration cannot certify them.
std::vector<ComplexR> complex_roots(const std::vector<ComplexR>& coeffs, unsigned digits);

/// Roots of an integer polynomial in the canonical order: real roots
/// ascending, then non-real roots by (Re, Im). Imaginary parts below the
/// precision threshold are set to zero.
std::vector<ComplexR> integer_roots(const IntPoly& p, unsigned digits);

/// Canonical ordering used for every embedding list.
void sort_roots(std::vector<ComplexR>& roots);

template <typename T>
Complex<T> horner(const std::vector<Complex<T>>& coeffs, const Complex<T>& z) {
  Complex<T> acc;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

}  // namespace relthue
