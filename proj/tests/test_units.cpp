#include <doctest.h>

#include "relthue/baker.hpp"
#include "relthue/errors.hpp"
#include "support.hpp"

using namespace relthue;
using namespace relthue::testing;

TEST_CASE("example unit system") {
  auto f = example_fields(120);
  const UnitSystem& us = *f.units;
  CHECK(verify_unit_system(us).ok);
  CHECK(us.rank_fixed == 2);
  CHECK(us.rank_relative == 3);
  // sigma(gamma) = -gamma
  CHECK(us.sigma == f.g->from({0, -1, 0, 0, 0, 0}));
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> dist(-3, 3);
  for (int t = 0; t < 10; ++t) {
    ExpVec v(5);
    for (int k = 0; k < 5; ++k) v(k) = dist(rng);
    const Conjugated c = relative_conjugate(us, v);
    Element image = exponent_vector_to_element(us, c.exponents);
    if (c.sign < 0) image = -image;
    CHECK(image == apply_automorphism(exponent_vector_to_element(us, v), us.sigma, us.field()));
  }
}

TEST_CASE("broken conjugation data is rejected") {
  auto f = example_fields(120);
  UnitSystem us = *f.units;
  us.conj_action(0, 3) = 0;
  CHECK_FALSE(verify_unit_system(us).ok);
}

TEST_CASE("c1 for the example") {
  auto f = example_fields(120);
  PrecisionGuard guard(60);
  const C1Result c = compute_c1(log_embedding_matrix(*f.units, 60));
  CHECK(abs(c.c1 - Real("0.18298622")) < Real("1e-8"));
}

TEST_CASE("synthetic unit systems") {
  for (int w = 0; w < synthetic_system_count(); ++w) {
    auto s = synthetic_system(w);
    CAPTURE(s.name);
    CHECK(verify_unit_system(*s.units).ok);
    CHECK(s.units->rank_fixed + s.units->rank_relative == s.units->count());
  }
}

TEST_CASE("Baker crossover bound") {
  PrecisionGuard guard(60);
  const Integer e = crossover_bound(Real(1), Real(100), Real(5));
  // c1 E <= c'' + C log E fails just above e.
  const Real at = Real(5) + 100 * log(to_real(e));
  const Real above = Real(5) + 100 * log(to_real(e + 1));
  CHECK(to_real(e) <= at + 1);
  CHECK(to_real(e + 1) > above);
}
