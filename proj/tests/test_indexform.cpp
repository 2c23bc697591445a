#include <doctest.h>

#include "support.hpp"

using namespace relthue;
using namespace relthue::testing;

namespace {

/// alpha = X xi + Y xi^2 + Z xi^3 and its powers in the basis 1, xi, xi^2, xi^3.
std::array<RelativeElement, 4> power_rows(const RelativeQuarticData& f, const std::array<Element, 3>& w) {
  const OrderContext& m = *f.base;
  const RelativeElement alpha = {m.zero(), w[0], w[1], w[2]};
  std::array<RelativeElement, 4> rows;
  rows[0] = {m.one(), m.zero(), m.zero(), m.zero()};
  for (int k = 1; k < 4; ++k) rows[k] = relative_mul(rows[k - 1], alpha, f);
  return rows;
}

}  // namespace

TEST_CASE("index form equals F(Q1, Q2)") {
  OrderContext m({-7, 15, -8, 1}, 60);
  std::mt19937_64 rng(41);
  for (int t = 0; t < 25; ++t) {
    RelativeQuarticData f{&m, {}, 1, 1};
    for (auto& a : f.a) a = random_element(m, 3, rng);
    const IndexForms forms = build_forms(f);
    const std::array<Element, 3> w = {random_element(m, 2, rng), random_element(m, 2, rng), random_element(m, 2, rng)};
    const Element det = det4(power_rows(f, w), m);
    const Element q1 = evaluate(forms.q1, w, m);
    const Element q2 = evaluate(forms.q2, w, m);
    CHECK(det == evaluate_form(forms.f, q1, q2, m));
  }
}

TEST_CASE("parametrisation of Q0 = 0") {
  OrderContext m({-7, 15, -8, 1}, 300);
  RelativeQuarticData f{&m, {m.zero(), m.zero(), m.zero(), m.from({0, 1, 0})}, 1, 1};
  const IndexForms forms = build_forms(f);
  const ParametrizationData p = parametrize(m.one(), m.zero(), forms, m);
  CHECK(parametrization_identity(p, m));
  // Q0 = XZ - Y^2 up to sign for (U, V) = (1, 0).
  CHECK(evaluate(p.q0, p.zero, m).isZero());
  CHECK(abs(p.q0.c[2](0)) == 1);
  CHECK(abs(p.q0.c[3](0)) == 1);
  const QuarticInstances qi = quartic_instances(p, forms, m);
  CHECK(qi.chosen == 1);
  CHECK(is_zero_form(qi.f2));
  // F1 = P^4 + mu Q^4
  REQUIRE(qi.form.size() == 5);
  CHECK(qi.form[0] == m.one());
  CHECK(qi.form[4] == m.from({0, 1, 0}));
}

TEST_CASE("absolute index of the relative generator") {
  auto f = example_fields(120);
  const Element xi = f.k->generator();
  const IndexResult r = absolute_index(xi, *f.k, f.d_k);
  CHECK(r.generates);
  CHECK(r.index == 1);
  CHECK(abs(r.discriminant) == r.index * r.index * f.d_k);
  // mu does not generate K.
  CHECK_FALSE(absolute_index(-power(xi, 4, *f.k), *f.k, f.d_k).generates);
}

TEST_CASE("absolute search at radius 0 and 1") {
  auto f = example_fields(120);
  const Element xi = f.k->generator();
  AbsoluteField field{f.m.get(), f.k.get(), -power(xi, 4, *f.k), xi, f.d_k, f.base_units};
  AbsoluteSearchOptions opt;
  opt.range = 0;
  const auto r0 = absolute_search(field, opt);
  REQUIRE(r0.hits.size() == 1);
  CHECK(r0.hits[0].index == 1);
  opt.range = 1;
  const auto r1 = absolute_search(field, opt);
  CHECK(r1.scanned == 81);
  for (const auto& h : r1.hits) {
    const IndexResult ir = absolute_index(h.zeta, *f.k, f.d_k);
    CHECK(ir.index == h.index);
    CHECK(h.index < opt.threshold);
  }
}
