#include "relthue/thue.hpp"

#include "relthue/errors.hpp"
#include "relthue/roots.hpp"

#include <algorithm>

namespace relthue {
namespace {

int form_degree(const BinaryForm& f) { return static_cast<int>(f.size()) - 1; }

/// Coefficients of F^(i)(x, 1), lowest degree first.
std::vector<ComplexR> dehomogenized(const BinaryForm& f, const OrderContext& ctx, int i) {
  const int k = form_degree(f);
  std::vector<ComplexR> c(k + 1);
  for (int d = 0; d <= k; ++d) c[d] = embed(f[k - d], ctx, i);
  return c;
}

Element divide_or_fail(const Element& a, const Element& b, const OrderContext& ctx, const char* what) {
  auto q = divide_exact(a, b, ctx);
  if (!q) fail(ErrorKind::kVerification, what);
  return *q;
}

bool is_unit(const Element& a, const OrderContext& ctx) {
  const Integer n = norm(a, ctx);
  return n == 1 || n == -1;
}

/// Keeps one (U, V) per unit orbit; for odd m the sign is chosen so that
/// N(F(U, V)) equals the right-hand side.
void add_uv(std::vector<UVSolution>& out, const ResolventEquation& res, Element u, Element v) {
  const OrderContext& m = *res.base;
  const Integer n = norm(evaluate_form(res.form, u, v, m), m);
  if (n != res.rhs_norm && n == -res.rhs_norm && m.degree() % 2 == 1) {
    u = -u;
    v = -v;
  }
  for (const auto& s : out)
    if (associated({s.u, s.v}, {u, v}, m)) return;
  out.push_back({std::move(u), std::move(v)});
}

bool norm_matches(const ResolventEquation& res, const Element& u, const Element& v) {
  const OrderContext& m = *res.base;
  if (u.isZero() && v.isZero()) return false;
  const Integer n = norm(evaluate_form(res.form, u, v, m), m);
  return n == res.rhs_norm || n == -res.rhs_norm;
}

}  // namespace

Element evaluate_form(const BinaryForm& f, const Element& x, const Element& y, const OrderContext& ctx) {
  const int k = form_degree(f);
  std::vector<Element> xp(k + 1, ctx.one()), yp(k + 1, ctx.one());
  for (int e = 1; e <= k; ++e) {
    xp[e] = mul(xp[e - 1], x, ctx);
    yp[e] = mul(yp[e - 1], y, ctx);
  }
  Element acc = ctx.zero();
  for (int t = 0; t <= k; ++t)
    if (!f[t].isZero()) acc += mul(f[t], mul(xp[k - t], yp[t], ctx), ctx);
  return acc;
}

BinaryForm multiply_forms(const BinaryForm& a, const BinaryForm& b, const OrderContext& ctx) {
  BinaryForm out(a.size() + b.size() - 1, ctx.zero());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].isZero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      if (!b[j].isZero()) out[i + j] += mul(a[i], b[j], ctx);
  }
  return out;
}

BinaryForm add_forms(const BinaryForm& a, const BinaryForm& b) {
  if (a.size() != b.size()) fail(ErrorKind::kInput, "add_forms: degree mismatch");
  BinaryForm out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += b[i];
  return out;
}

BinaryForm scale_form(const BinaryForm& a, const Element& c, const OrderContext& ctx) {
  BinaryForm out;
  for (const auto& x : a) out.push_back(mul(x, c, ctx));
  return out;
}

bool is_zero_form(const BinaryForm& f) {
  return std::all_of(f.begin(), f.end(), [](const Element& e) { return e.isZero(); });
}

bool associated(const std::vector<Element>& a, const std::vector<Element>& b, const OrderContext& ctx,
                Element* ratio) {
  if (a.size() != b.size()) return false;
  std::size_t t = 0;
  while (t < a.size() && a[t].isZero()) ++t;
  if (t == a.size()) return std::all_of(b.begin(), b.end(), [](const Element& e) { return e.isZero(); });
  if (b[t].isZero()) return false;
  auto e = divide_exact(b[t], a[t], ctx);
  if (!e || !is_unit(*e, ctx)) return false;
  for (std::size_t j = 0; j < a.size(); ++j)
    if (mul(*e, a[j], ctx) != b[j]) return false;
  if (ratio) *ratio = *e;
  return true;
}

const char* to_string(ResolventCase c) {
  switch (c) {
    case ResolventCase::kA: return "A";
    case ResolventCase::kB: return "B";
    case ResolventCase::kC: return "C";
  }
  return "?";
}

// ---------------------------------------------------------------------------

ResolventEquation classify_resolvent(const BinaryForm& form, const OrderContext& m, const Integer& rhs_norm) {
  if (form.size() != 4 || form[0] != m.one())
    fail(ErrorKind::kInput, "classify_resolvent needs a monic binary cubic");
  ResolventEquation res;
  res.base = &m;
  res.form = form;
  res.rhs_norm = rhs_norm;
  const int n = m.degree();
  PrecisionGuard guard(m.digits());
  std::vector<std::vector<ComplexR>> roots(n);
  for (int i = 0; i < n; ++i) roots[i] = complex_roots(dehomogenized(form, m, i), m.digits());

  const Real tol = pow10_neg(static_cast<int>(m.digits() / 4));
  std::vector<int> pick(n, 0);
  while (true) {
    std::vector<ComplexR> values(n);
    for (int i = 0; i < n; ++i) values[i] = roots[i][pick[i]];
    Real resid;
    Element lam = coordinates_from_embeddings(m, values, &resid);
    if (resid < tol && evaluate_form(form, lam, m.one(), m).isZero() &&
        std::find(res.roots.begin(), res.roots.end(), lam) == res.roots.end())
      res.roots.push_back(lam);
    int i = 0;
    while (i < n && pick[i] == 2) pick[i++] = 0;
    if (i == n) break;
    ++pick[i];
  }

  switch (res.roots.size()) {
    case 0: res.tag = ResolventCase::kB; break;
    case 1: {
      res.tag = ResolventCase::kC;
      const Element& l = res.roots[0];
      const Element q1 = form[1] + l;
      const Element q2 = form[2] + mul(l, q1, m);
      if (form[3] + mul(l, q2, m) != m.zero()) fail(ErrorKind::kVerification, "linear factor does not divide F");
      res.quadratic = {m.one(), q1, q2};
      if (multiply_forms({m.one(), -l}, res.quadratic, m) != form)
        fail(ErrorKind::kVerification, "factorisation of F does not re-expand");
      break;
    }
    case 3: {
      res.tag = ResolventCase::kA;
      BinaryForm p = {m.one(), -res.roots[0]};
      p = multiply_forms(p, {m.one(), -res.roots[1]}, m);
      p = multiply_forms(p, {m.one(), -res.roots[2]}, m);
      if (p != form) fail(ErrorKind::kVerification, "factorisation of F does not re-expand");
      break;
    }
    default:
      fail(ErrorKind::kPrecision, "inconsistent roots of the resolvent; raise the precision");
  }
  return res;
}

Element split_quadratic(const ResolventEquation& res, const UnitSystem& us) {
  if (res.tag != ResolventCase::kC) fail(ErrorKind::kInput, "split_quadratic needs a Case C resolvent");
  const OrderContext& m = *res.base;
  const OrderContext& g = us.field();
  if (us.base().polynomial() != m.polynomial()) fail(ErrorKind::kInput, "unit system is over a different base field");
  const int n = m.degree();
  PrecisionGuard guard(g.digits());
  std::vector<std::vector<ComplexR>> roots(n);
  for (int i = 0; i < n; ++i) {
    std::vector<ComplexR> c = {embed(res.quadratic[2], m, i), embed(res.quadratic[1], m, i), ComplexR(Real(1))};
    roots[i] = complex_roots(c, g.digits());
  }
  const Element q1 = lift(res.quadratic[1], us.ext);
  const Element q2 = lift(res.quadratic[2], us.ext);
  const Real tol = pow10_neg(static_cast<int>(g.digits() / 4));
  for (unsigned long mask = 0; mask < (1ul << n); ++mask) {
    std::vector<ComplexR> values(g.degree());
    for (int i = 0; i < n; ++i) {
      const int b = static_cast<int>((mask >> i) & 1);
      values[us.root(i, 0)] = roots[i][b];
      values[us.root(i, 1)] = roots[i][1 - b];
    }
    Real resid;
    Element rho = coordinates_from_embeddings(g, values, &resid);
    if (resid >= tol) continue;
    if (mul(rho, rho, g) + mul(q1, rho, g) + q2 == g.zero()) return rho;
  }
  fail(ErrorKind::kVerification, "the extension G does not split the quadratic factor of F");
}

CaseCData build_case_c(const ResolventEquation& res, const UnitSystem& us, const DeltaPair& delta) {
  CaseCData d;
  d.lambda1 = res.roots.at(0);
  d.rho = split_quadratic(res, us);
  d.delta_m = delta.delta_m;
  d.delta_g = delta.delta_g;
  return d;
}

ResolventResult solve_resolvent(const ResolventEquation& res, const ResolventOptions& opt) {
  const OrderContext& m = *res.base;
  ResolventResult out;
  out.tag = res.tag;
  const bool unit_rhs = res.rhs_norm == 1 || res.rhs_norm == -1;

  if (res.tag == ResolventCase::kB)
    fail(ErrorKind::kUnsupported, "Case B data required: F is irreducible over M and no cubic extension data was given");

  if (res.tag == ResolventCase::kC) {
    if (!opt.units) fail(ErrorKind::kInput, "Case C needs the unit system of the quadratic extension");
    const UnitSystem& us = *opt.units;
    std::vector<DeltaPair> deltas = opt.deltas;
    if (deltas.empty()) {
      if (!unit_rhs) fail(ErrorKind::kInput, "delta representatives are required when N(nu) != +-1");
      deltas.push_back({m.one(), us.field().one()});
    }
    if (!opt.resume.empty() && opt.resume.size() != deltas.size())
      fail(ErrorKind::kInput, "saved schedule results do not match the delta representatives");
    for (std::size_t di = 0; di < deltas.size(); ++di) {
      const DeltaPair& delta = deltas[di];
      CaseCRun run;
      run.data = build_case_c(res, us, delta);
      run.equation = build_unit_equation(us, run.data);
      if (!opt.resume.empty()) {
        run.e_r = opt.resume[di].e_r;
      } else if (opt.e_r) {
        run.e_r = *opt.e_r;
      } else {
        run.bounds = bound_exponents(run.equation, opt.bounds);
        if (run.bounds->e_r > 1'000'000) fail(ErrorKind::kCardinalityCap, "reduced exponent bound is too large");
        run.e_r = run.bounds->e_r.convert_to<long long>();
      }
      if (!opt.bounds_only) {
        run.schedule = opt.resume.empty() ? run_schedule(run.equation, run.e_r, opt.schedule)
                                          : resume_schedule(run.equation, run.e_r, opt.schedule, opt.resume[di]);
        run.recovered = recover_uv(us, run.data, run.schedule->solutions, &run.rejected);
        for (const auto& uv : run.recovered)
          if (norm_matches(res, uv.u, uv.v)) add_uv(out.solutions, res, uv.u, uv.v);
      }
      out.case_c.push_back(std::move(run));
    }
    return out;
  }

  // Case A: the Siegel identity gives alpha X + beta Y = 1 over M.
  std::vector<std::vector<Element>> deltas = opt.deltas_a;
  if (deltas.empty()) {
    if (!unit_rhs) fail(ErrorKind::kInput, "delta representatives are required when N(nu) != +-1");
    deltas.push_back({m.one(), m.one(), m.one()});
  }
  const Element& l1 = res.roots[0];
  const Element& l2 = res.roots[1];
  const Element& l3 = res.roots[2];
  for (const auto& d : deltas) {
    if (d.size() != 3) fail(ErrorKind::kInput, "Case A needs delta triples");
    CaseARun run;
    run.delta = d;
    run.equation.field = &m;
    run.equation.units = opt.base_units;
    const Element den = mul(l2 - l1, d[2], m);
    run.equation.alpha = quotient(mul(l2 - l3, d[0], m), den, m);
    run.equation.beta = quotient(mul(l3 - l1, d[1], m), den, m);
    run.result = solve_absolute_unit_equation(run.equation, opt.bounds);
    for (const auto& s : run.result.solutions) {
      Element x = unit_power_product(opt.base_units, s.a, m);
      if (s.sx < 0) x = -x;
      // U - l1 V = d1 X and U - l3 V = d3 after dividing by nu3.
      auto v = divide_exact(mul(d[0], x, m) - d[2], l3 - l1, m);
      if (!v) {
        ++run.rejected;
        continue;
      }
      const Element u = d[2] + mul(l3, *v, m);
      if (norm_matches(res, u, *v)) {
        add_uv(out.solutions, res, u, *v);
      } else {
        ++run.rejected;
      }
    }
    out.case_a.push_back(std::move(run));
  }
  return out;
}

// ---------------------------------------------------------------------------

ThueAnalysis analyze_thue_form(const BinaryForm& form, const OrderContext& m) {
  if (!m.totally_real()) fail(ErrorKind::kInput, "the small-solution bound needs a totally real base field");
  if (form.size() < 2 || form[0].isZero()) fail(ErrorKind::kInput, "Thue form needs a nonzero leading coefficient");
  ThueAnalysis an;
  PrecisionGuard guard(m.digits());
  const int n = m.degree();
  try {
    for (int i = 0; i < n; ++i) an.roots.push_back(complex_roots(dehomogenized(form, m, i), m.digits()));
  } catch (const Error&) {
    an.roots.clear();
    return an;
  }
  const Real tol = pow10_neg(static_cast<int>(m.digits() / 4));
  an.separable = true;
  an.totally_complex = true;
  Real min_im = -1;
  an.house_xi = 0;
  for (const auto& rs : an.roots) {
    for (std::size_t a = 0; a < rs.size(); ++a) {
      for (std::size_t b = a + 1; b < rs.size(); ++b)
        if (abs(rs[a] - rs[b]) < tol) an.separable = false;
      const Real im = abs(rs[a].im);
      if (im < tol) an.totally_complex = false;
      if (min_im < 0 || im < min_im) min_im = im;
      an.house_xi = std::max(an.house_xi, Real(abs(rs[a])));
    }
  }
  an.c0 = an.totally_complex ? Real(1 / min_im) : Real(0);
  return an;
}

ThueBound thue_bound(const ThueAnalysis& an, const BinaryForm& form, const Element& rhs, const OrderContext& m) {
  if (!an.totally_complex || !an.separable) fail(ErrorKind::kInput, "Thue form is not separable and totally complex");
  PrecisionGuard guard(m.digits());
  const int k = form_degree(form);
  ThueBound b;
  Real rmax = 0;
  for (int i = 0; i < m.degree(); ++i) {
    const Real r = pow(abs(embed(rhs, m, i)) / abs(embed(form[0], m, i)), Real(1) / k);
    rmax = std::max(rmax, r);
    Real inv_im = 0, ratio = 0;
    for (const auto& z : an.roots[i]) {
      inv_im = std::max(inv_im, Real(1 / abs(z.im)));
      ratio = std::max(ratio, Real(abs(z) / abs(z.im)));
    }
    b.y_bounds.push_back(r * inv_im);
    b.x_bounds.push_back(r * (1 + ratio));
  }
  b.theorem = rmax * (1 + an.c0 * an.house_xi);
  return b;
}

ThueResult quartic_small_solutions(const QuarticThueInstance& inst, std::uint64_t cap) {
  const OrderContext& m = *inst.base;
  ThueResult out;
  out.analysis = analyze_thue_form(inst.form, m);
  if (!out.analysis.separable || !out.analysis.totally_complex)
    fail(ErrorKind::kInput, "Thue form is not separable and totally complex");
  const int n = m.degree();
  const int k = form_degree(inst.form);

  // Conjugates are rounded from the working precision: coefficients with
  // large coordinates lose too much to cancellation in double arithmetic.
  PrecisionGuard guard(m.digits());
  auto conjugate = [&](const Element& a, int i) { return to_double(embed(a, m, i).re); };
  std::vector<std::vector<double>> fc(n, std::vector<double>(k + 1));
  for (int i = 0; i < n; ++i)
    for (int t = 0; t <= k; ++t) fc[i][t] = conjugate(inst.form[t], i);
  auto conj = [&](const std::vector<Element>& list) {
    std::vector<std::vector<double>> v(list.size(), std::vector<double>(n));
    for (std::size_t a = 0; a < list.size(); ++a)
      for (int i = 0; i < n; ++i) v[a][i] = conjugate(list[a], i);
    return v;
  };

  for (std::size_t idx = 0; idx < inst.rhs.size(); ++idx) {
    const Element& nu = inst.rhs[idx];
    ThueBound b = thue_bound(out.analysis, inst.form, nu, m);
    const auto xs = enumerate_bounded(m, b.x_bounds, cap);
    const auto ys = enumerate_bounded(m, b.y_bounds, cap);
    out.bounds.push_back(std::move(b));
    if (static_cast<double>(xs.size()) * static_cast<double>(ys.size()) > 1e11)
      fail(ErrorKind::kCardinalityCap, "too many (X, Y) pairs for the Thue enumeration");
    const auto xd = conj(xs), yd = conj(ys);
    std::vector<double> nud(n);
    for (int i = 0; i < n; ++i) nud[i] = conjugate(nu, i);
    for (std::size_t a = 0; a < xs.size(); ++a) {
      for (std::size_t c = 0; c < ys.size(); ++c) {
        ++out.pairs_tested;
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
          const double x = xd[a][i], y = yd[c][i];
          double val = 0, mag = 0, xp = 1;
          std::vector<double> yp(k + 1, 1);
          for (int t = 1; t <= k; ++t) yp[t] = yp[t - 1] * y;
          for (int t = k; t >= 0; --t) {
            const double term = fc[i][t] * xp * yp[t];
            val += term;
            mag += std::fabs(term);
            xp *= x;
          }
          ok = std::fabs(val - nud[i]) <= 1e-8 * (mag + std::fabs(nud[i])) + 1e-8;
        }
        if (ok && evaluate_form(inst.form, xs[a], ys[c], m) == nu) out.solutions.push_back({xs[a], ys[c], idx});
      }
    }
  }
  return out;
}

Element unit_power_product(const std::vector<Element>& units, const ExpVec& e, const OrderContext& m) {
  Element acc = m.one();
  for (std::size_t k = 0; k < units.size(); ++k) {
    const long long x = e(static_cast<Eigen::Index>(k));
    if (x == 0) continue;
    const Element base = x > 0 ? units[k] : divide_or_fail(m.one(), units[k], m, "unit of M is not invertible");
    acc = mul(acc, power(base, static_cast<unsigned>(x > 0 ? x : -x), m), m);
  }
  return acc;
}

std::vector<NormalizedRhs> unit_normalize_rhs(const std::vector<Element>& units, const OrderContext& m) {
  const int r = static_cast<int>(units.size());
  std::vector<NormalizedRhs> out;
  for (int sign : {1, -1}) {
    ExpVec l = ExpVec::Constant(r, -1);
    while (true) {
      Element v = unit_power_product(units, l, m);
      out.push_back({sign, l, sign > 0 ? v : Element(-v)});
      int k = r - 1;
      while (k >= 0 && l(k) == 2) l(k--) = -1;
      if (k < 0) break;
      ++l(k);
    }
  }
  return out;
}

}  // namespace relthue
