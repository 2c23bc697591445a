#include "relthue/indexform.hpp"

#include "relthue/errors.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <thread>

namespace relthue {
namespace {

// Index pairs of the six coefficients of a ternary quadratic.
constexpr int kPair[6][2] = {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 2}};


/// Gradient of q at w: dQ/dw_i.
std::array<Element, 3> gradient(const TernaryQuadratic& q, const std::array<Element, 3>& w, const OrderContext& ctx) {
  std::array<Element, 3> g{ctx.zero(), ctx.zero(), ctx.zero()};
  for (int t = 0; t < 6; ++t) {
    const int i = kPair[t][0], j = kPair[t][1];
    if (i == j) {
      g[i] += 2 * mul(q.c[t], w[i], ctx);
    } else {
      g[i] += mul(q.c[t], w[j], ctx);
      g[j] += mul(q.c[t], w[i], ctx);
    }
  }
  return g;
}

bool all_zero(const std::array<Element, 3>& w) {
  return w[0].isZero() && w[1].isZero() && w[2].isZero();
}

/// Ordering of candidate zeros: Z != 0 first, then small coordinates with
/// weight on the higher powers, then a positive leading coordinate.
std::array<long long, 4> zero_rank(const std::array<Element, 3>& w) {
  long long l1 = 0, weighted = 0, negative = 0;
  bool lead = true;
  for (const auto& e : w)
    for (Eigen::Index k = 0; k < e.size(); ++k) {
      const long long c = static_cast<long long>(abs(e(k)));
      l1 += c;
      weighted += c * (k + 1);
      if (lead && e(k) != 0) {
        negative = e(k) < 0;
        lead = false;
      }
    }
  return {w[2].isZero() ? 1 : 0, l1, weighted, negative};
}

}  // namespace

Element evaluate(const TernaryQuadratic& q, const std::array<Element, 3>& w, const OrderContext& ctx) {
  Element acc = ctx.zero();
  for (int t = 0; t < 6; ++t)
    if (!q.c[t].isZero()) acc += mul(q.c[t], mul(w[kPair[t][0]], w[kPair[t][1]], ctx), ctx);
  return acc;
}

Element polar(const TernaryQuadratic& q, const std::array<Element, 3>& v, const std::array<Element, 3>& w,
              const OrderContext& ctx) {
  const auto g = gradient(q, v, ctx);
  Element acc = ctx.zero();
  for (int i = 0; i < 3; ++i) acc += mul(g[i], w[i], ctx);
  return acc;
}

TernaryQuadratic combine(const Element& s, const TernaryQuadratic& p, const Element& t, const TernaryQuadratic& q,
                         const OrderContext& ctx) {
  TernaryQuadratic r;
  for (int k = 0; k < 6; ++k) r.c[k] = mul(s, p.c[k], ctx) + mul(t, q.c[k], ctx);
  return r;
}

BinaryForm substitute(const TernaryQuadratic& q, const std::array<BinaryForm, 3>& f, const OrderContext& ctx) {
  const int d = static_cast<int>(f[0].size()) - 1;
  BinaryForm acc(2 * d + 1, ctx.zero());
  for (int t = 0; t < 6; ++t) {
    if (q.c[t].isZero()) continue;
    acc = add_forms(acc, scale_form(multiply_forms(f[kPair[t][0]], f[kPair[t][1]], ctx), q.c[t], ctx));
  }
  return acc;
}

IndexForms build_forms(const RelativeQuarticData& data) {
  const OrderContext& m = *data.base;
  const auto& [a1, a2, a3, a4] = data.a;
  auto x = [&](const Element& p, const Element& q) { return mul(p, q, m); };
  IndexForms out;
  out.f = {m.one(), -a2, x(a1, a3) - 4 * a4, 4 * x(a2, a4) - x(a3, a3) - x(x(a1, a1), a4)};
  out.q1.c = {m.one(), -a1, x(a1, a1) - 2 * a2, a2, a3 - x(a1, a2), x(a2, a2) - x(a1, a3) + a4};
  out.q2.c = {m.zero(), m.zero(), -m.one(), m.one(), -a1, a2};
  return out;
}

Integer lemma_rhs(const RelativeQuarticData& data) {
  const Integer num = ipow(data.d, static_cast<unsigned>(6 * data.base->degree()));
  if (data.i0 <= 0 || num % data.i0 != 0) fail(ErrorKind::kInput, "i0 must be a positive divisor of d^(6m)");
  return num / data.i0;
}

// ---------------------------------------------------------------------------

ParametrizationData parametrize(const Element& u, const Element& v, const IndexForms& forms, const OrderContext& m,
                                const ParametrizationOptions& opt) {
  if (u.isZero() && v.isZero()) fail(ErrorKind::kInput, "parametrize needs (U, V) != (0, 0)");
  ParametrizationData p;
  p.u = u;
  p.v = v;
  p.q0 = combine(v, forms.q1, -u, forms.q2, m);
  const int n = m.degree();

  if (opt.zero) {
    p.zero = *opt.zero;
    if (all_zero(p.zero) || !evaluate(p.q0, p.zero, m).isZero())
      fail(ErrorKind::kInput, "supplied point is not a nontrivial zero of Q0");
  } else {
    // Double-precision screen of Q0 at every conjugate, then an exact test.
    std::vector<std::vector<double>> coef(n, std::vector<double>(6));
    std::vector<std::vector<double>> pw(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i) {
      for (int t = 0; t < 6; ++t) coef[i][t] = embed_double(p.q0.c[t], m, i).real();
      double z = 1;
      for (int j = 0; j < n; ++j, z *= m.roots_double()[i].real()) pw[i][j] = z;
    }
    if (!m.totally_real()) fail(ErrorKind::kInput, "zero search needs a totally real base field");
    bool found = false;
    for (int radius = 1; radius <= opt.max_radius && !found; radius *= 2) {
      const double points = std::pow(2.0 * radius + 1, 3 * n);
      if (points > static_cast<double>(opt.box_cap)) break;
      std::vector<long long> c(3 * n, -radius);
      std::array<Element, 3> best;
      bool have = false;
      while (true) {
        ++p.searched;
        bool maybe = true;
        for (int i = 0; i < n && maybe; ++i) {
          double w[3], mag = 0, val = 0;
          for (int a = 0; a < 3; ++a) {
            w[a] = 0;
            for (int j = 0; j < n; ++j) w[a] += static_cast<double>(c[a * n + j]) * pw[i][j];
          }
          for (int t = 0; t < 6; ++t) {
            const double term = coef[i][t] * w[kPair[t][0]] * w[kPair[t][1]];
            val += term;
            mag += std::fabs(term);
          }
          maybe = std::fabs(val) <= 1e-9 * mag + 1e-9;
        }
        if (maybe) {
          std::array<Element, 3> w;
          for (int a = 0; a < 3; ++a) {
            w[a] = Element(n);
            for (int j = 0; j < n; ++j) w[a](j) = c[a * n + j];
          }
          if (!all_zero(w) && evaluate(p.q0, w, m).isZero()) {
            if (!have || zero_rank(w) < zero_rank(best)) {
              best = w;
              have = true;
            }
          }
        }
        int k = 0;
        while (k < 3 * n && c[k] == radius) c[k++] = -radius;
        if (k == 3 * n) break;
        ++c[k];
      }
      if (have) {
        p.zero = best;
        found = true;
      }
    }
    if (!found)
      fail(ErrorKind::kCardinalityCap, "no nontrivial zero of Q0 within the search box; supply one in the field spec");
  }

  p.pivot = !p.zero[2].isZero() ? 2 : (!p.zero[0].isZero() ? 0 : 1);
  int f = 0;
  for (int i = 0; i < 3; ++i)
    if (i != p.pivot) p.free[f++] = i;

  // p has P and Q in the free coordinates; L = B(w0, p); f = -Q0(p) w0 + L p.
  std::array<BinaryForm, 3> lin;
  for (int i = 0; i < 3; ++i) lin[i] = {m.zero(), m.zero()};
  lin[p.free[0]][0] = m.one();
  lin[p.free[1]][1] = m.one();
  const auto g = gradient(p.q0, p.zero, m);
  p.linear = {g[p.free[0]], g[p.free[1]]};
  const BinaryForm q0p = substitute(p.q0, lin, m);
  for (int i = 0; i < 3; ++i)
    p.f[i] = add_forms(scale_form(q0p, -p.zero[i], m), multiply_forms(p.linear, lin[i], m));
  // w = f / L is unchanged when f and L share a factor; remove the pivot
  // coordinate of w0 when it divides every coefficient.
  const Element& g0 = p.zero[p.pivot];
  auto divides_all = [&] {
    for (const auto& fi : p.f)
      for (const auto& c : fi)
        if (!divide_exact(c, g0, m)) return false;
    for (const auto& c : p.linear)
      if (!divide_exact(c, g0, m)) return false;
    return true;
  };
  if (g0 != m.one() && divides_all()) {
    for (auto& fi : p.f)
      for (auto& c : fi) c = *divide_exact(c, g0, m);
    for (auto& c : p.linear) c = *divide_exact(c, g0, m);
  }
  p.kappas = opt.kappas.empty() ? std::vector<Element>{m.one()} : opt.kappas;
  if (!parametrization_identity(p, m)) fail(ErrorKind::kVerification, "Q0(f_X, f_Y, f_Z) is not identically zero");
  return p;
}

bool parametrization_identity(const ParametrizationData& p, const OrderContext& m) {
  return is_zero_form(substitute(p.q0, p.f, m));
}

QuarticInstances quartic_instances(const ParametrizationData& p, const IndexForms& forms, const OrderContext& m) {
  QuarticInstances qi;
  qi.f1 = substitute(forms.q1, p.f, m);
  qi.f2 = substitute(forms.q2, p.f, m);
  for (int which = 1; which <= 2; ++which) {
    const BinaryForm& form = which == 1 ? qi.f1 : qi.f2;
    const Element& rhs = which == 1 ? p.u : p.v;
    const std::string name = which == 1 ? "F1" : "F2";
    if (rhs.isZero()) {
      qi.notes.push_back(name + ": right side is zero");
      continue;
    }
    if (is_zero_form(form)) {
      qi.notes.push_back(name + ": form vanishes identically");
      continue;
    }
    BinaryForm g = form;
    bool swapped = false;
    if (g.front().isZero()) {
      if (g.back().isZero()) {
        qi.notes.push_back(name + ": form is divisible by PQ");
        continue;
      }
      std::reverse(g.begin(), g.end());
      swapped = true;
    }
    const ThueAnalysis an = analyze_thue_form(g, m);
    if (!an.separable || !an.totally_complex) {
      qi.notes.push_back(name + ": form is not separable and totally complex");
      continue;
    }
    qi.chosen = which;
    qi.swapped = swapped;
    qi.form = g;
    qi.rhs_factor = rhs;
    return qi;
  }
  fail(ErrorKind::kUnsupported, "neither quartic equation is a totally complex Thue equation");
}

std::vector<QuarticSolveResult> solve_quartic_instances(const QuarticInstances& qi, const ParametrizationData& p,
                                                        const std::vector<Element>& base_units, const OrderContext& m,
                                                        std::uint64_t cap) {
  std::vector<QuarticSolveResult> out;
  for (const auto& kappa : p.kappas) {
    QuarticSolveResult r;
    r.kappa = kappa;
    r.rhs = unit_normalize_rhs(base_units, m);
    QuarticThueInstance inst;
    inst.base = &m;
    inst.form = qi.form;
    const Element factor = mul(mul(kappa, kappa, m), qi.rhs_factor, m);
    for (const auto& nr : r.rhs) inst.rhs.push_back(mul(factor, nr.value, m));
    r.thue = quartic_small_solutions(inst, cap);
    out.push_back(std::move(r));
  }
  return out;
}

AssemblyResult assemble_generators(const std::vector<QuarticSolveResult>& solved, const QuarticInstances& qi,
                                   const ParametrizationData& p, const IndexForms& forms,
                                   const RelativeQuarticData& data, std::vector<GeneratorFamily> previous) {
  const OrderContext& m = *data.base;
  const Integer target = lemma_rhs(data);
  AssemblyResult out;
  out.families = std::move(previous);
  for (const auto& r : solved) {
    for (const auto& s : r.thue.solutions) {
      ++out.thue_solutions;
      const Element& pp = qi.swapped ? s.y : s.x;
      const Element& qq = qi.swapped ? s.x : s.y;
      if (mul(p.u, evaluate_form(qi.f2, pp, qq, m), m) != mul(p.v, evaluate_form(qi.f1, pp, qq, m), m)) {
        ++out.rejected;
        continue;
      }
      std::array<Element, 3> w;
      bool integral = true;
      for (int i = 0; i < 3 && integral; ++i) {
        auto q = divide_exact(evaluate_form(p.f[i], pp, qq, m), r.kappa, m);
        integral = q.has_value();
        if (q) w[i] = *q;
      }
      if (!integral || all_zero(w)) {
        ++out.rejected;
        continue;
      }
      const Element u = evaluate(forms.q1, w, m), v = evaluate(forms.q2, w, m);
      const Integer nf = norm(evaluate_form(forms.f, u, v, m), m);
      if (!associated({p.u, p.v}, {u, v}, m) || (nf != target && nf != -target)) {
        ++out.rejected;
        continue;
      }
      const std::vector<Element> key(w.begin(), w.end());
      bool seen = false;
      for (const auto& fam : out.families)
        if (associated({fam.xyz.begin(), fam.xyz.end()}, key, m)) seen = true;
      if (!seen) out.families.push_back({w, u, v, pp, qq, r.kappa});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

IndexResult absolute_index(const Element& zeta, const OrderContext& k, const Integer& d_k) {
  IndexResult r;
  const int n = k.degree();
  r.discriminant = discriminant(characteristic_polynomial(zeta, k));
  if (r.discriminant == 0) return r;
  IntMatrix pm(n, n);
  Element pw = k.one();
  for (int j = 0; j < n; ++j) {
    pm.col(j) = pw;
    pw = mul(pw, zeta, k);
  }
  const Integer det = determinant(pm);
  if (det * det * discriminant(k.polynomial()) != r.discriminant)
    fail(ErrorKind::kVerification, "discriminant of zeta disagrees with its power-basis determinant");
  const Integer dk = abs(d_k);
  const Integer ad = abs(r.discriminant);
  if (dk == 0 || ad % dk != 0) fail(ErrorKind::kVerification, "D_K does not divide the discriminant of zeta");
  r.index = exact_sqrt(ad / dk);
  if (r.index < 0) fail(ErrorKind::kVerification, "D(zeta) / D_K is not a square");
  r.generates = true;
  return r;
}

Element absolute_candidate(const AbsoluteField& field, const std::vector<long long>& z, const ExpVec& k) {
  const OrderContext& kc = *field.field;
  Element zeta = kc.zero();
  Element mp = kc.one();
  for (std::size_t t = 0; t < z.size(); ++t) {
    mp = mul(mp, field.mu, kc);
    zeta += Integer(z[t]) * mp;
  }
  std::vector<Element> lifted;
  for (const auto& u : field.base_units) lifted.push_back(evaluate_at(u, field.mu, kc));
  return zeta + mul(unit_power_product(lifted, k, kc), field.theta, kc);
}

AbsoluteSearchResult absolute_search(const AbsoluteField& field, const AbsoluteSearchOptions& opt) {
  const OrderContext& mc = *field.base;
  const OrderContext& kc = *field.field;
  if (!mc.totally_real()) fail(ErrorKind::kInput, "absolute search needs a totally real base field");
  const int m = mc.degree();
  const int n = kc.degree();
  const int r = static_cast<int>(field.base_units.size());
  const long long R = opt.range;
  const Extension ext = make_extension(mc, kc, field.mu);

  std::vector<std::complex<double>> theta(n);
  std::vector<std::vector<double>> mu_pow(n, std::vector<double>(m, 0));
  std::vector<std::vector<double>> unit_log(m, std::vector<double>(r));
  std::vector<std::vector<int>> unit_sign(m, std::vector<int>(r));
  struct Pair {
    int a, b, weight;
    std::vector<double> delta;  // mu_a^t - mu_b^t
    double log_theta = 0;       // same fibre: log|theta_a - theta_b|
  };
  std::vector<Pair> same, cross;
  {
    PrecisionGuard guard(kc.digits());
    std::vector<ComplexR> th(n), mu(n);
    for (int a = 0; a < n; ++a) {
      th[a] = embed(field.theta, kc, a);
      mu[a] = embed(field.mu, kc, a);
      theta[a] = {to_double(th[a].re), to_double(th[a].im)};
      ComplexR z(Real(1));
      for (int t = 0; t < m; ++t, z = z * mu[a]) mu_pow[a][t] = to_double(z.re);
    }
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < r; ++k) {
        const Real e = embed(field.base_units[k], mc, i).re;
        unit_log[i][k] = to_double(log(abs(e)));
        unit_sign[i][k] = e < 0 ? -1 : 1;
      }
    // Complex conjugation pairs up the cross differences.
    std::vector<int> conj(n);
    for (int a = 0; a < n; ++a) {
      int best = a;
      Real bd = -1;
      for (int b = 0; b < n; ++b) {
        const Real d = abs(th[b] - th[a].conj()) + abs(mu[b] - mu[a].conj());
        if (bd < 0 || d < bd) {
          bd = d;
          best = b;
        }
      }
      conj[a] = best;
    }
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        Pair pr{a, b, 1, {}, 0};
        if (ext.pairing[a] == ext.pairing[b]) {
          pr.log_theta = to_double(log(abs(th[a] - th[b])));
          same.push_back(pr);
          continue;
        }
        const int ca = std::min(conj[a], conj[b]), cb = std::max(conj[a], conj[b]);
        if (std::make_pair(ca, cb) < std::make_pair(a, b)) continue;
        if (std::make_pair(ca, cb) != std::make_pair(a, b)) pr.weight = 2;
        for (int t = 1; t < m; ++t) pr.delta.push_back(to_double(Real(pow(mu[a].re, t) - pow(mu[b].re, t))));
        cross.push_back(pr);
      }
    }
  }
  const double log_dk = log_abs(field.discriminant);
  const double log_threshold = log_abs(opt.threshold) + 1e-3 * std::log(10.0);

  std::vector<ExpVec> units;
  {
    ExpVec k = ExpVec::Constant(r, -R);
    while (true) {
      units.push_back(k);
      int t = r - 1;
      while (t >= 0 && k(t) == R) k(t--) = -R;
      if (t < 0) break;
      ++k(t);
    }
  }

  std::mutex lock;
  AbsoluteSearchResult out;
  auto work = [&](std::size_t begin, std::size_t step) {
    AbsoluteSearchResult local;
    std::vector<std::complex<double>> c(cross.size());
    std::vector<double> cerr(cross.size());
    std::vector<long long> z(m - 1);
    for (std::size_t ui = begin; ui < units.size(); ui += step) {
      const ExpVec& k = units[ui];
      std::vector<double> u(m);
      double fixed = 0;
      for (int i = 0; i < m; ++i) {
        double lg = 0;
        int sg = 1;
        for (int t = 0; t < r; ++t) {
          lg += static_cast<double>(k(t)) * unit_log[i][t];
          if (unit_sign[i][t] < 0 && (k(t) & 1)) sg = -sg;
        }
        u[i] = sg * std::exp(lg);
      }
      for (const auto& pr : same) fixed += std::log(std::fabs(u[ext.pairing[pr.a]])) + pr.log_theta;
      for (std::size_t q = 0; q < cross.size(); ++q) {
        const auto ta = u[ext.pairing[cross[q].a]] * theta[cross[q].a];
        const auto tb = u[ext.pairing[cross[q].b]] * theta[cross[q].b];
        c[q] = ta - tb;
        cerr[q] = 1e-13 * (std::abs(ta) + std::abs(tb));
      }
      std::fill(z.begin(), z.end(), -R);
      while (true) {
        ++local.scanned;
        double total = fixed;
        bool certain = true;
        for (std::size_t q = 0; q < cross.size() && certain; ++q) {
          double s = 0, serr = 0;
          for (int t = 0; t + 1 < m; ++t) {
            const double term = static_cast<double>(z[t]) * cross[q].delta[t];
            s += term;
            serr += std::fabs(term);
          }
          const double re = s + c[q].real(), im = c[q].imag();
          const double d2 = re * re + im * im;
          const double err = cerr[q] + 1e-15 * serr;
          if (d2 <= 1e12 * err * err) certain = false;
          total += cross[q].weight * 0.5 * std::log(d2);
        }
        if (!certain || total - 0.5 * log_dk < log_threshold) {
          ++local.exact_checks;
          Element zeta = absolute_candidate(field, z, k);
          IndexResult ir = absolute_index(zeta, kc, field.discriminant);
          if (ir.generates && ir.index < opt.threshold) local.hits.push_back({z, k, zeta, ir.index});
        }
        int t = m - 2;
        while (t >= 0 && z[t] == R) z[t--] = -R;
        if (t < 0) break;
        ++z[t];
      }
    }
    std::lock_guard<std::mutex> g(lock);
    out.scanned += local.scanned;
    out.exact_checks += local.exact_checks;
    for (auto& h : local.hits) out.hits.push_back(std::move(h));
  };

  const int threads = std::max(1, opt.threads);
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, static_cast<std::size_t>(t), static_cast<std::size_t>(threads));
    for (auto& th : pool) th.join();
  }
  std::sort(out.hits.begin(), out.hits.end(), [](const AbsoluteHit& a, const AbsoluteHit& b) {
    if (a.index != b.index) return a.index < b.index;
    if (a.z != b.z) return a.z < b.z;
    return std::lexicographical_compare(a.k.data(), a.k.data() + a.k.size(), b.k.data(), b.k.data() + b.k.size());
  });
  return out;
}

}  // namespace relthue
