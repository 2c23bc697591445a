#include <doctest.h>

#include "relthue/poly.hpp"

using namespace relthue;

// Reference values computed independently with a computer algebra system.

TEST_CASE("discriminants of the example polynomials") {
  CHECK(discriminant(IntPoly{-7, 15, -8, 1}) == 361);
  CHECK(discriminant(IntPoly{-7, 0, 15, 0, -8, 0, 1}) == Integer("58383808"));
  const Integer d = discriminant(IntPoly{7, 0, 0, 0, 15, 0, 0, 0, 8, 0, 0, 0, 1});
  CHECK(d == Integer("97733358616846532608"));
  CHECK(d == (Integer(1) << 24) * 343 * ipow(Integer(19), 8));
}

TEST_CASE("resultants") {
  CHECK(resultant(IntPoly{-5, 1, 0, -2, 3}, IntPoly{4, -1, 7, 2}) == 173361);
  CHECK(resultant(IntPoly{1, -3, 0, 0, 0, 1}, IntPoly{9, 1, -4}) == -1031);
}

TEST_CASE("characteristic polynomial and determinant") {
  IntMatrix a(3, 3);
  a << 2, -1, 3, 0, 4, 1, 5, 2, -2;
  CHECK(characteristic_polynomial(a) == IntPoly{85, -21, -4, 1});
  IntMatrix b(4, 4);
  b << 1, 2, 0, -3, 4, -1, 2, 2, 0, 3, 5, 1, -2, 1, 1, 0;
  CHECK(characteristic_polynomial(b) == IntPoly{17, 99, -24, -5, 1});
  CHECK(determinant(b) == 17);
  // Second route: det(t I - b) against the characteristic polynomial at t.
  for (int t = -3; t <= 3; ++t) {
    IntMatrix s = -b;
    for (int i = 0; i < 4; ++i) s(i, i) += t;
    CHECK(determinant(s) == evaluate(IntPoly{17, 99, -24, -5, 1}, Integer(t)));
  }
}

TEST_CASE("exact solve and square roots") {
  IntMatrix a(2, 2);
  a << 2, 1, 1, 3;
  auto [x, den] = solve_exact(a, {Integer(3), Integer(5)});
  CHECK(den == 5);
  CHECK(x[0] == 4);
  CHECK(x[1] == 7);
  CHECK(exact_sqrt(Integer("65329214857201") * Integer("65329214857201")) == Integer("65329214857201"));
  CHECK(exact_sqrt(Integer(2)) == -1);
}
