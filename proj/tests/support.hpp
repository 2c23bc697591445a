#pragma once

// Shared fixtures for the test and acceptance binaries: the example fields,
// small synthetic unit systems and random instances.

#include "relthue/indexform.hpp"

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace relthue::testing {

/// M, G and K of the shipped example, and the unit system of G over M.
struct ExampleFields {
  std::unique_ptr<OrderContext> m, g, k;
  std::vector<Element> base_units;
  std::optional<UnitSystem> units;
  Integer d_k;
};
ExampleFields example_fields(unsigned digits = 300);

/// Totally real quartic G = M(theta), theta^2 = c + sqrt(2), over M = Q(sqrt 2).
struct SyntheticSystem {
  std::string name;
  std::unique_ptr<OrderContext> m, g;
  std::optional<UnitSystem> units;
};

/// Index 0..4: unit groups of rank 1, 2, 3, 2, 3 (r + s); the conjugation
/// action is derived from logarithms and checked exactly.
SyntheticSystem synthetic_system(int which);
int synthetic_system_count();

/// A W + sigma(A W) = 1 with W0 = sign * prod u^e0 a solution:
/// A = (1 + c theta) / (2 W0).
UnitEquation planted_equation(const UnitSystem& us, const ExpVec& e0, int sign, long long c);

struct SolutionLess {
  bool operator()(const UnitSolution& a, const UnitSolution& b) const;
};

std::vector<UnitSolution> sorted(std::vector<UnitSolution> v);

/// Random element with coordinates in [-b, b].
Element random_element(const OrderContext& ctx, int b, std::mt19937_64& rng);

/// Random nonsingular integer basis (columns) with entries in [-b, b].
IntMatrix random_basis(int dim, int b, std::mt19937_64& rng);

/// min |x|^2 over nonzero lattice vectors by scanning the coefficient box
/// implied by an upper bound and the inverse of `basis`.
Integer shortest_norm_sq_brute(const IntMatrix& basis);

/// Random weighted ellipsoid with a box of at most max_points points.
EllipsoidProblem<double> random_ellipsoid(int dim, std::uint64_t max_points, std::mt19937_64& rng);

/// F = c0 (X^2 + b1 XY + c1 Y^2)(X^2 + b2 XY + c2 Y^2) with
/// c_i = b_i^2 + t_i^2 + 1, so every conjugate of each factor is definite,
/// and a planted pair (x0, y0) with rhs = F(x0, y0).
struct PlantedThue {
  BinaryForm form;
  Element x0, y0, rhs;
};
PlantedThue random_planted_thue(const OrderContext& m, int coeff_bound, int solution_bound, std::mt19937_64& rng);

/// Coordinates of x in the relative basis 1, xi, xi^2, xi^3 over M for
/// polynomials in xi reduced by x^4 + a1 x^3 + a2 x^2 + a3 x + a4.
using RelativeElement = std::array<Element, 4>;
RelativeElement relative_mul(const RelativeElement& a, const RelativeElement& b, const RelativeQuarticData& f);

/// det of a 4x4 matrix over Z_M by cofactor expansion.
Element det4(const std::array<RelativeElement, 4>& rows, const OrderContext& m);

}  // namespace relthue::testing
