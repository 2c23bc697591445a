#include <doctest.h>

#include "relthue/lattice.hpp"
#include "support.hpp"

#include <algorithm>

using namespace relthue;
using namespace relthue::testing;

TEST_CASE("LLL output is reduced, unimodular and short") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    const int dim = 2 + t % 4;
    const IntMatrix b = random_basis(dim, 30, rng);
    const LllResult r = lll_reduce(b);
    CHECK(r.basis == b * r.transform);
    const Integer det = determinant(r.transform);
    CHECK((det == 1 || det == -1));
    CHECK(is_lll_reduced(r.basis));
    const Integer lambda = shortest_norm_sq_brute(r.basis);
    CHECK(Integer(r.basis.col(0).squaredNorm()) <= (Integer(1) << (dim - 1)) * lambda);
  }
}

TEST_CASE("Fincke-Pohst agrees with the box scan") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const auto p = random_ellipsoid(1 + t % 4, 200'000, rng);
    auto a = fincke_pohst(p);
    auto b = box_enumerate(p, 1'000'000);
    std::sort(a.begin(), a.end(), lex_less);
    std::sort(b.begin(), b.end(), lex_less);
    CHECK(a == b);
  }
}

TEST_CASE("reduction step passes with a large enough H") {
  PrecisionGuard guard(100);
  SmallLinearForm form;
  form.zeta = {Real(1), sqrt(Real(2)), sqrt(Real(3))};
  form.c1 = 10;
  form.c2 = Real("0.5");
  const ReductionRun run = reduce_to_fixpoint(form, Integer("1000000000000000000000"));
  CHECK(run.bound < Integer(1000));
  CHECK(!run.steps.empty());
  for (const auto& st : run.steps) CHECK(st.passed);
}
