#include <doctest.h>

#include "relthue/errors.hpp"
#include "support.hpp"

using namespace relthue;
using namespace relthue::testing;

TEST_CASE("binary form arithmetic") {
  OrderContext m({-2, 0, 1}, 60);
  const BinaryForm a = {m.one(), m.from({0, 1})};           // X + sqrt2 Y
  const BinaryForm b = {m.one(), m.zero(), m.from({3, 0})};  // X^2 + 3 Y^2
  const BinaryForm p = multiply_forms(a, b, m);
  const Element x = m.from({2, -1}), y = m.from({1, 1});
  CHECK(evaluate_form(p, x, y, m) == mul(evaluate_form(a, x, y, m), evaluate_form(b, x, y, m), m));
  Element ratio;
  CHECK(associated({m.from({1, 1}), m.one()}, {m.from({3, 2}), m.from({1, 1})}, m, &ratio));
  CHECK(ratio == m.from({1, 1}));
  CHECK_FALSE(associated({m.one(), m.zero()}, {m.constant(2), m.zero()}, m));
}

TEST_CASE("resolvent of the example is Case C with root 0") {
  auto f = example_fields(300);
  RelativeQuarticData rq{f.m.get(), {f.m->zero(), f.m->zero(), f.m->zero(), f.m->from({0, 1, 0})}, 1, 1};
  const IndexForms forms = build_forms(rq);
  // F = U^3 - 4 mu U V^2
  REQUIRE(forms.f.size() == 4);
  CHECK(forms.f[0] == f.m->one());
  CHECK(forms.f[1].isZero());
  CHECK(forms.f[2] == f.m->from({0, -4, 0}));
  CHECK(forms.f[3].isZero());
  const ResolventEquation res = classify_resolvent(forms.f, *f.m, lemma_rhs(rq));
  CHECK(res.tag == ResolventCase::kC);
  REQUIRE(res.roots.size() == 1);
  CHECK(res.roots[0].isZero());
  const Element rho = split_quadratic(res, *f.units);
  // rho = +-2 gamma
  CHECK((rho == f.g->from({0, 2, 0, 0, 0, 0}) || rho == f.g->from({0, -2, 0, 0, 0, 0})));
}

TEST_CASE("unit classes of the right side") {
  OrderContext m({-7, 15, -8, 1}, 60);
  const auto rhs = unit_normalize_rhs({m.from({1, -1, 0}), m.from({2, -1, 0})}, m);
  CHECK(rhs.size() == 32);
  for (const auto& r : rhs) {
    const Integer n = norm(r.value, m);
    CHECK((n == 1 || n == -1));
  }
}

TEST_CASE("small solutions of planted quartic Thue equations") {
  OrderContext m({-2, 0, 1}, 80);
  std::mt19937_64 rng(31);
  for (int t = 0; t < 10; ++t) {
    const PlantedThue p = random_planted_thue(m, 1, 1, rng);
    const ThueResult r = quartic_small_solutions({&m, p.form, {p.rhs}});
    bool found = false;
    for (const auto& s : r.solutions) {
      CHECK(evaluate_form(p.form, s.x, s.y, m) == p.rhs);
      CHECK(max(size(s.x, m), size(s.y, m)) <= r.bounds[0].theorem);
      found |= s.x == p.x0 && s.y == p.y0;
    }
    CHECK(found);
  }
}

TEST_CASE("Thue solver rejects forms with real roots") {
  OrderContext m({-2, 0, 1}, 60);
  const BinaryForm f = {m.one(), m.zero(), m.zero(), m.zero(), m.constant(-2)};  // X^4 - 2 Y^4
  CHECK_THROWS_AS(quartic_small_solutions({&m, f, {m.one()}}), Error);
}
