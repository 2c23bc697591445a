#include <doctest.h>

#include "relthue/errors.hpp"
#include "support.hpp"

using namespace relthue;
using namespace relthue::testing;

TEST_CASE("norms are multiplicative and match the embeddings") {
  auto f = example_fields(80);
  std::mt19937_64 rng(11);
  for (const OrderContext* ctx : {f.m.get(), f.g.get(), f.k.get()}) {
    for (int t = 0; t < 20; ++t) {
      const Element a = random_element(*ctx, 4, rng);
      const Element b = random_element(*ctx, 4, rng);
      CHECK(norm(mul(a, b, *ctx), *ctx) == norm(a, *ctx) * norm(b, *ctx));
      ComplexR prod(1);
      for (int k = 0; k < ctx->degree(); ++k) prod *= embed(a, *ctx, k);
      CHECK(abs(prod.re - to_real(norm(a, *ctx))) < Real("1e-30") * (1 + abs(prod.re)));
      if (!b.isZero()) {
        auto q = divide_exact(mul(a, b, *ctx), b, *ctx);
        REQUIRE(q);
        CHECK(*q == a);
      }
    }
  }
}

TEST_CASE("characteristic polynomial of an element") {
  auto f = example_fields(80);
  const Element xi = f.k->generator();
  CHECK(characteristic_polynomial(xi, *f.k) == f.k->polynomial());
  const Element mu = -power(xi, 4, *f.k);
  // mu has degree 3, so its characteristic polynomial is g3^4.
  IntPoly g3 = f.m->polynomial();
  IntPoly p = {1};
  for (int t = 0; t < 4; ++t) {
    IntPoly q(p.size() + 3, Integer(0));
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = 0; j < 4; ++j) q[i + j] += p[i] * g3[j];
    p = q;
  }
  CHECK(characteristic_polynomial(mu, *f.k) == p);
}

TEST_CASE("extensions lift and descend") {
  auto f = example_fields(80);
  const Extension& ext = f.units->ext;
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    const Element a = random_element(*f.m, 5, rng);
    const Element b = random_element(*f.m, 5, rng);
    CHECK(lift(mul(a, b, *f.m), ext) == mul(lift(a, ext), lift(b, ext), *f.g));
    auto back = descend(lift(a, ext), ext);
    REQUIRE(back);
    CHECK(*back == a);
  }
  CHECK_FALSE(descend(f.g->generator(), ext));
  CHECK_THROWS_AS(make_extension(*f.m, *f.g, f.g->generator()), Error);
}

TEST_CASE("bounded enumeration against a coordinate box") {
  auto f = example_fields(60);
  const OrderContext& m = *f.m;
  const Real bound("6.5");
  const auto found = enumerate_bounded(m, bound);
  const int box = 30;
  std::size_t brute = 0;
  for (int a = -box; a <= box; ++a)
    for (int b = -box; b <= box; ++b)
      for (int c = -box; c <= box; ++c) {
        const Element e = m.from({a, b, c});
        double h = 0;
        for (int k = 0; k < 3; ++k) h = std::max(h, std::abs(embed_double(e, m, k)));
        if (h <= 6.5) ++brute;
      }
  CHECK(found.size() == brute);
  for (const auto& e : found) {
    CHECK(size(e, m) <= bound);
    for (int i = 0; i < 3; ++i) CHECK(abs(e(i)) < box);
  }
}
