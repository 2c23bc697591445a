#include "support.hpp"

#include "relthue/errors.hpp"

#include <algorithm>
#include <cmath>

namespace relthue::testing {

ExampleFields example_fields(unsigned digits) {
  ExampleFields f;
  f.m = std::make_unique<OrderContext>(IntPoly{-7, 15, -8, 1}, digits);
  f.g = std::make_unique<OrderContext>(IntPoly{-7, 0, 15, 0, -8, 0, 1}, digits);
  f.k = std::make_unique<OrderContext>(IntPoly{7, 0, 0, 0, 15, 0, 0, 0, 8, 0, 0, 0, 1}, digits);
  const OrderContext& m = *f.m;
  const OrderContext& g = *f.g;
  Element mu = g.zero();
  mu(2) = 1;
  Extension ext = make_extension(m, g, mu);
  f.base_units = {m.from({1, -1, 0}), m.from({2, -1, 0})};
  std::vector<Element> us = {g.from({1, 1, 0, 0, 0, 0}), g.from({1, -1, 0, 0, 0, 0}), g.from({2, 0, -1, 0, 0, 0}),
                             g.from({3, 1, -1, 0, 0, 0}), g.from({3, -7, 0, 7, 0, -1})};
  ExpMatrix c(5, 5);
  c << 0, 1, 0, -1, -1, 1, 0, 0, -1, -1, 0, 0, 1, 1, 1, 0, 0, 0, -1, 0, 0, 0, 0, 0, -1;
  f.units = make_unit_system(std::move(ext), f.base_units, std::move(us), c, {1, 1, 1, 1, 1});
  f.d_k = (Integer(1) << 24) * 343 * ipow(Integer(19), 8);
  return f;
}

namespace {

struct SystemData {
  const char* name;
  long long c;  // theta^2 = c + sqrt 2
  std::vector<std::vector<long long>> units;
  bool with_base_unit;
};

const std::vector<SystemData>& system_table() {
  static const std::vector<SystemData> t = {
      {"x^4-4x^2+2 {w1}", 2, {{-3, -2, 2, 0}}, false},
      {"x^4-4x^2+2 {eps, w1}", 2, {{-3, -2, 2, 0}}, true},
      {"x^4-4x^2+2 {eps, w1, w2}", 2, {{-3, -2, 2, 0}, {-3, -3, 3, 2}}, true},
      {"x^4-6x^2+7 {eps, w1}", 3, {{-2, -1, 0, 0}}, true},
      {"x^4-6x^2+7 {eps, w1, w2}", 3, {{-2, -1, 0, 0}, {2, 0, 0, 1}}, true},
  };
  return t;
}

Element unit_product(const std::vector<Element>& units, const std::vector<Element>& inverses, const ExpVec& e,
                     const OrderContext& g) {
  Element w = g.one();
  for (std::size_t k = 0; k < units.size(); ++k) {
    const long long x = e(static_cast<Eigen::Index>(k));
    const Element& b = x >= 0 ? units[k] : inverses[k];
    w = mul(w, power(b, static_cast<unsigned>(x >= 0 ? x : -x), g), g);
  }
  return w;
}

}  // namespace

int synthetic_system_count() { return static_cast<int>(system_table().size()); }

SyntheticSystem synthetic_system(int which) {
  const SystemData& d = system_table().at(which);
  SyntheticSystem s;
  s.name = d.name;
  s.m = std::make_unique<OrderContext>(IntPoly{-2, 0, 1}, 120);
  // (x^2 - c)^2 - 2
  s.g = std::make_unique<OrderContext>(IntPoly{d.c * d.c - 2, 0, -2 * d.c, 0, 1}, 120);
  const OrderContext& m = *s.m;
  const OrderContext& g = *s.g;
  Element image = g.zero();
  image(2) = 1;
  image(0) = -d.c;
  Extension ext = make_extension(m, g, image);
  const Element eps = m.from({1, 1});
  std::vector<Element> units;
  if (d.with_base_unit) units.push_back(lift(eps, ext));
  for (const auto& u : d.units) units.push_back(g.from(u));
  std::vector<Element> inverses;
  for (const auto& u : units) inverses.push_back(*divide_exact(g.one(), u, g));

  // sigma(u_k) = +-prod u^e: exponents from logarithms, then checked exactly.
  const Element sigma = relative_conjugation(ext);
  const int n = static_cast<int>(units.size());
  PrecisionGuard guard(60);
  RealMatrix logs(g.degree(), n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < g.degree(); ++i) logs(i, k) = log(abs(embed(units[k], g, i)));
  ExpMatrix conj(n, n);
  std::vector<int> signs(n);
  for (int k = 0; k < n; ++k) {
    const Element image_k = apply_automorphism(units[k], sigma, g);
    RealVector rhs(g.degree());
    for (int i = 0; i < g.degree(); ++i) rhs(i) = log(abs(embed(image_k, g, i)));
    const RealMatrix gram = logs.transpose() * logs;
    const RealVector sol = gram.fullPivLu().solve(logs.transpose() * rhs);
    ExpVec e(n);
    for (int j = 0; j < n; ++j) e(j) = round_to_integer(sol(j)).convert_to<long long>();
    const Element w = unit_product(units, inverses, e, g);
    if (w == image_k) {
      signs[k] = 1;
    } else if (w == -image_k) {
      signs[k] = -1;
    } else {
      fail(ErrorKind::kVerification, std::string("synthetic unit group is not closed under sigma: ") + d.name);
    }
    conj.col(k) = e;
  }
  s.units = make_unit_system(std::move(ext), {eps}, std::move(units), conj, signs);
  return s;
}

UnitEquation planted_equation(const UnitSystem& us, const ExpVec& e0, int sign, long long c) {
  const OrderContext& g = us.field();
  Element w0 = unit_product(us.units, us.inverses, e0, g);
  if (sign < 0) w0 = -w0;
  Element num = g.one();
  num(1) = c;
  UnitEquation ueq;
  ueq.units = &us;
  ueq.a = quotient(num, Integer(2) * w0, g);
  return ueq;
}

bool SolutionLess::operator()(const UnitSolution& a, const UnitSolution& b) const {
  if (lex_less(a.v, b.v)) return true;
  if (lex_less(b.v, a.v)) return false;
  return a.sign < b.sign;
}

std::vector<UnitSolution> sorted(std::vector<UnitSolution> v) {
  std::sort(v.begin(), v.end(), SolutionLess{});
  return v;
}

Element random_element(const OrderContext& ctx, int b, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dist(-b, b);
  Element e = ctx.zero();
  for (int i = 0; i < ctx.degree(); ++i) e(i) = dist(rng);
  return e;
}

IntMatrix random_basis(int dim, int b, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dist(-b, b);
  while (true) {
    IntMatrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) m(i, j) = dist(rng);
    if (determinant(m) != 0) return m;
  }
}

Integer shortest_norm_sq_brute(const IntMatrix& basis) {
  const int n = static_cast<int>(basis.cols());
  Integer best = -1;
  for (int j = 0; j < n; ++j) {
    const Integer c = basis.col(j).squaredNorm();
    if (best < 0 || c < best) best = c;
  }
  // x = B^-1 v, so |x_i| <= |row_i(B^-1)| |v| for every v with |v|^2 <= best.
  Eigen::MatrixXd bd(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) bd(i, j) = basis(i, j).convert_to<double>();
  const Eigen::MatrixXd inv = bd.inverse();
  const double radius = std::sqrt(best.convert_to<double>());
  std::vector<long long> lim(n);
  for (int i = 0; i < n; ++i) lim[i] = static_cast<long long>(std::floor(inv.row(i).norm() * radius * (1 + 1e-9) + 1e-9));
  std::vector<long long> x(n);
  for (int i = 0; i < n; ++i) x[i] = -lim[i];
  while (true) {
    bool zero = true;
    for (auto c : x) zero &= c == 0;
    if (!zero) {
      Vec<Integer> v = Vec<Integer>::Zero(n);
      for (int j = 0; j < n; ++j)
        if (x[j] != 0) v += basis.col(j) * Integer(x[j]);
      const Integer q = v.squaredNorm();
      if (q < best) best = q;
    }
    int k = n - 1;
    while (k >= 0 && x[k] == lim[k]) {
      x[k] = -lim[k];
      --k;
    }
    if (k < 0) break;
    ++x[k];
  }
  return best;
}

EllipsoidProblem<double> random_ellipsoid(int dim, std::uint64_t max_points, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> gen(-3, 3), weight(0.5, 2), off(-2, 2), rad(1, 40);
  std::uniform_int_distribution<int> extra(0, 2);
  const int rows = dim + extra(rng);
  EllipsoidProblem<double> p;
  p.generators.resize(rows, dim);
  p.offset.resize(rows);
  p.weights.resize(rows);
  for (int r = 0; r < rows; ++r) {
    for (int k = 0; k < dim; ++k) p.generators(r, k) = gen(rng);
    p.offset(r) = off(rng);
    p.weights(r) = weight(rng);
  }
  long long half = 1;
  while (std::pow(2.0 * (half + 1) + 1, dim) <= static_cast<double>(max_points) && half < 15) ++half;
  // Scaled with the box so that large boxes hold more than a handful of points.
  p.radius_sq = rad(rng) * static_cast<double>(half * half) / 4;
  p.lo.assign(dim, -half);
  p.hi.assign(dim, half);
  return p;
}

PlantedThue random_planted_thue(const OrderContext& m, int coeff_bound, int solution_bound, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> lead(1, 3);
  while (true) {
    BinaryForm f = {m.constant(lead(rng))};
    for (int q = 0; q < 2; ++q) {
      const Element b = random_element(m, coeff_bound, rng);
      const Element t = random_element(m, coeff_bound, rng);
      const Element c = mul(b, b, m) + mul(t, t, m) + m.one();
      f = multiply_forms(f, BinaryForm{m.one(), b, c}, m);
    }
    const ThueAnalysis an = analyze_thue_form(f, m);
    if (!an.separable || !an.totally_complex) continue;
    PlantedThue p;
    p.form = f;
    do {
      p.x0 = random_element(m, solution_bound, rng);
      p.y0 = random_element(m, solution_bound, rng);
    } while (p.x0.isZero() && p.y0.isZero());
    p.rhs = evaluate_form(f, p.x0, p.y0, m);
    return p;
  }
}

RelativeElement relative_mul(const RelativeElement& a, const RelativeElement& b, const RelativeQuarticData& f) {
  const OrderContext& m = *f.base;
  std::array<Element, 7> prod;
  prod.fill(m.zero());
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) prod[i + j] += mul(a[i], b[j], m);
  // xi^4 = -(a1 xi^3 + a2 xi^2 + a3 xi + a4)
  for (int t = 6; t >= 4; --t) {
    const Element top = prod[t];
    prod[t] = m.zero();
    for (int s = 0; s < 4; ++s) prod[t - 1 - s] -= mul(top, f.a[s], m);
  }
  return {prod[0], prod[1], prod[2], prod[3]};
}

Element det4(const std::array<RelativeElement, 4>& rows, const OrderContext& m) {
  Element total = m.zero();
  std::array<int, 4> p = {0, 1, 2, 3};
  do {
    int inversions = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (p[i] > p[j]) ++inversions;
    Element term = m.one();
    for (int i = 0; i < 4; ++i) term = mul(term, rows[i][p[i]], m);
    if (inversions % 2) {
      total -= term;
    } else {
      total += term;
    }
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

}  // namespace relthue::testing
