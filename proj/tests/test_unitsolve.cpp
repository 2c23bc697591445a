#include <doctest.h>

#include "relthue/unitsolve.hpp"
#include "support.hpp"

using namespace relthue;
using namespace relthue::testing;

TEST_CASE("schedule equals brute force on planted equations") {
  std::mt19937_64 rng(23);
  for (int w = 0; w < synthetic_system_count(); ++w) {
    auto s = synthetic_system(w);
    const UnitSystem& us = *s.units;
    ExpVec e0(us.count());
    std::uniform_int_distribution<int> dist(-2, 2);
    for (int k = 0; k < us.count(); ++k) e0(k) = dist(rng);
    const UnitEquation ueq = planted_equation(us, e0, w % 2 ? -1 : 1, 1 + w % 3);
    const long long e = us.count() == 3 ? 5 : 8;
    const auto brute = sorted(brute_force_solutions(ueq, e));
    const ScheduleResult r = run_schedule(ueq, e);
    CAPTURE(s.name);
    REQUIRE(r.solutions.size() == brute.size());
    for (std::size_t i = 0; i < brute.size(); ++i) {
      CHECK(r.solutions[i].v == brute[i].v);
      CHECK(r.solutions[i].sign == brute[i].sign);
    }
    CHECK(r.sieve.false_rejections == 0);
  }
}

TEST_CASE("exact and numeric verification agree") {
  auto f = example_fields(300);
  CaseCData data{f.m->zero(), f.g->from({0, 2, 0, 0, 0, 0}), f.m->one(), f.g->one()};
  const UnitEquation ueq = build_unit_equation(*f.units, data);
  const EquationNumerics num = make_numerics(ueq, 60);
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<int> dist(-4, 4);
  for (int t = 0; t < 40; ++t) {
    ExpVec v(5);
    for (int k = 0; k < 5; ++k) v(k) = dist(rng);
    if (t == 0) v.setZero();
    for (int sign : {1, -1}) {
      const auto a = verify_exact(ueq, v, sign);
      const auto b = verify_numeric(ueq, num, v, sign);
      REQUIRE(a);
      if (b) CHECK(*a == *b);
    }
  }
  CHECK(*verify_exact(ueq, ExpVec::Zero(5), 1));
}

TEST_CASE("resumed schedule reproduces the run") {
  auto s = synthetic_system(2);
  ExpVec e0(3);
  e0 << 1, -1, 2;
  const UnitEquation ueq = planted_equation(*s.units, e0, 1, 1);
  const ScheduleResult a = run_schedule(ueq, 6);
  const ScheduleResult b = resume_schedule(ueq, 6, {}, a);
  CHECK(a.candidates == b.candidates);
  CHECK(a.residual_distinct == b.residual_distinct);
  CHECK(a.sieve.tested == b.sieve.tested);
  REQUIRE(a.solutions.size() == b.solutions.size());
  for (std::size_t i = 0; i < a.solutions.size(); ++i) CHECK(a.solutions[i].v == b.solutions[i].v);
}
