#pragma once

// Field-spec files: a YAML document with the base field, the quadratic
// extension and its units, the relative quartic and solver settings. The
// grammar is described in docs/field-spec.md.

#include "relthue/numeric.hpp"
#include "relthue/poly.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace relthue {

using Coordinates = std::vector<Integer>;

struct FieldSpec {
  int version = 1;
  unsigned precision = 450;

  IntPoly base_polynomial;  // ascending
  std::vector<Coordinates> base_units;

  struct Quadratic {
    IntPoly polynomial;  // ascending
    Coordinates base_image;
    std::vector<Coordinates> units;
    std::vector<std::vector<long long>> conjugation;  // rows
    std::vector<int> signs;
  };
  std::optional<Quadratic> quadratic;

  std::array<Coordinates, 4> quartic;  // a1 .. a4 of x^4 + a1 x^3 + a2 x^2 + a3 x + a4
  std::string convention = "a1-a4";
  Integer d{1};
  Integer i0{1};

  struct Absolute {
    IntPoly polynomial;  // ascending
    Coordinates base_image;
    Coordinates generator_image;
    Integer discriminant;
    long long range = 25;
    Integer threshold{1'000'000'000'000'000LL};
  };
  std::optional<Absolute> absolute;

  struct Solver {
    std::vector<double> schedule;
    std::vector<std::uint64_t> sieve_primes;
    unsigned enumeration_digits = 100;
    std::uint64_t cap = 10'000'000;
    std::uint64_t thue_cap = 50'000'000;
    int threads = 1;
    std::optional<long long> reduced_bound;
  } solver;

  struct DeltaSpec {
    Coordinates m, g;
  };
  std::vector<DeltaSpec> deltas;
  std::vector<Coordinates> kappas;
  std::optional<std::array<Coordinates, 3>> zero;

  std::vector<std::string> flags;  // conventions noticed while parsing
};

/// Throws kParse on malformed documents and kInput on inconsistent sizes.
FieldSpec parse_field_spec(const std::string& text);
FieldSpec load_field_spec(const std::string& path);

}  // namespace relthue
