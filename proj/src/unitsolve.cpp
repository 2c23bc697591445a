#include "relthue/unitsolve.hpp"

#include "relthue/errors.hpp"

#include <cmath>
#include <map>
#include <set>

namespace relthue {
namespace {

using Key = std::vector<long long>;

Key key_of(const ExpVec& v) { return Key(v.data(), v.data() + v.size()); }

ExpVec vec_of(const Key& k) {
  ExpVec v(static_cast<Eigen::Index>(k.size()));
  for (std::size_t i = 0; i < k.size(); ++i) v(static_cast<Eigen::Index>(i)) = k[i];
  return v;
}

Real ln10() { return log(Real(10)); }

long long max_abs(const ExpVec& v) {
  long long m = 0;
  for (Eigen::Index k = 0; k < v.size(); ++k) m = std::max(m, v(k) < 0 ? -v(k) : v(k));
  return m;
}

// Inverse of a unimodular integer matrix.
ExpMatrix unimodular_inverse(const IntMatrix& u) {
  const Eigen::Index n = u.rows();
  ExpMatrix inv(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    std::vector<Integer> e(static_cast<std::size_t>(n), Integer(0));
    e[static_cast<std::size_t>(c)] = 1;
    auto [num, den] = solve_exact(u, e);
    if (den != 1) fail(ErrorKind::kVerification, "basis change is not unimodular");
    for (Eigen::Index r = 0; r < n; ++r) inv(r, c) = num[static_cast<std::size_t>(r)].convert_to<long long>();
  }
  return inv;
}

// Common-denominator inverse of an integer matrix: m^-1 = adj / det.
struct ScaledInverse {
  IntMatrix adj;
  Integer det;
};

ScaledInverse scaled_inverse(const IntMatrix& m) {
  const Eigen::Index n = m.rows();
  ScaledInverse out{IntMatrix(n, n), Integer(1)};
  std::vector<std::pair<std::vector<Integer>, Integer>> cols;
  for (Eigen::Index c = 0; c < n; ++c) {
    std::vector<Integer> e(static_cast<std::size_t>(n), Integer(0));
    e[static_cast<std::size_t>(c)] = 1;
    cols.push_back(solve_exact(m, e));
    out.det = boost::multiprecision::lcm(out.det, cols.back().second);
  }
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r)
      out.adj(r, c) = cols[c].first[static_cast<std::size_t>(r)] * (out.det / cols[c].second);
  return out;
}

// Value of A W at row p as a complex number, from logs and arguments.
struct RowValue {
  Real log_abs;
  ComplexR value;
};

RowValue row_value(const RealMatrix& logs, const RealMatrix& args, const RealVector& log_a, const RealVector& arg_a,
                   int p, const ExpVec& v) {
  Real la = log_a(p), ar = arg_a(p);
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (v(k) == 0) continue;
    const Real e(static_cast<double>(v(k)));
    la += e * logs(p, k);
    ar += e * args(p, k);
  }
  Real r = exp(la);
  return {la, ComplexR(r * cos(ar), r * sin(ar))};
}

}  // namespace

// ---------------------------------------------------------------------------

UnitEquation build_unit_equation(const UnitSystem& us, const CaseCData& data) {
  const OrderContext& g = us.field();
  const Element rho_c = apply_automorphism(data.rho, us.sigma, g);
  if (rho_c == data.rho) fail(ErrorKind::kInput, "the quadratic factor has a double root");
  const Element lam = lift(data.lambda1, us.ext);
  const Element dm = lift(data.delta_m, us.ext);
  const Element num = mul(Element(lam - data.rho), apply_automorphism(data.delta_g, us.sigma, g), g);
  const Element den = mul(Element(rho_c - data.rho), dm, g);
  if (den.isZero()) fail(ErrorKind::kInput, "delta_m vanishes");
  UnitEquation ueq;
  ueq.units = &us;
  ueq.a = quotient(num, den, g);
  if (ueq.a.num.isZero()) fail(ErrorKind::kInput, "lambda1 coincides with a root of the quadratic factor");
  return ueq;
}

EquationNumerics with_digits(const EquationNumerics& num, unsigned digits) {
  EquationNumerics out = num;
  out.digits = digits;
  PrecisionGuard guard(digits + 10);
  auto lower = [](const Real& x) { return at_working(x); };
  out.logs = num.logs_high.unaryExpr(lower);
  out.args = num.args_high.unaryExpr(lower);
  out.log_a = num.log_a_high.unaryExpr(lower);
  out.arg_a = num.arg_a_high.unaryExpr(lower);
  return out;
}

EquationNumerics make_numerics(const UnitEquation& ueq, unsigned digits) {
  const UnitSystem& us = *ueq.units;
  const OrderContext& g = us.field();
  EquationNumerics num;
  num.digits = digits;
  num.high_digits = g.digits();
  num.m = us.m();
  num.logs_high = log_embedding_matrix(us, g.digits());
  num.args_high = arg_embedding_matrix(us, g.digits());
  const int rows = 2 * num.m;
  {
    PrecisionGuard guard(g.digits() + 10);
    num.log_a_high.resize(rows);
    num.arg_a_high.resize(rows);
    for (int i = 0; i < num.m; ++i)
      for (int j = 0; j < 2; ++j) {
        ComplexR z = at_working(embed(ueq.a, g, us.root(i, j)));
        num.log_a_high(2 * i + j) = log(abs(z));
        num.arg_a_high(2 * i + j) = atan2(z.im, z.re);
      }
  }
  {
    PrecisionGuard guard(digits + 10);
    auto lower = [](const Real& x) { return at_working(x); };
    num.logs = num.logs_high.unaryExpr(lower);
    num.args = num.args_high.unaryExpr(lower);
    num.log_a = num.log_a_high.unaryExpr(lower);
    num.arg_a = num.arg_a_high.unaryExpr(lower);
  }
  const int n = us.count();
  IntMatrix c = us.conj_action.unaryExpr([](long long x) { return Integer(x); }) - IntMatrix::Identity(n, n);
  ColumnEchelon ce = column_echelon(c);
  const int s = static_cast<int>(ce.rank);
  num.relative_part.resize(n, s);
  num.fixed_part.resize(n, n - s);
  for (int r = 0; r < n; ++r) {
    for (int k = 0; k < s; ++k) num.relative_part(r, k) = ce.u(r, k).convert_to<long long>();
    for (int k = s; k < n; ++k) num.fixed_part(r, k - s) = ce.u(r, k).convert_to<long long>();
  }
  num.coordinates = unimodular_inverse(ce.u);
  return num;
}

// ---------------------------------------------------------------------------

ExponentBounds bound_exponents(const UnitEquation& ueq, const BoundOptions& opt) {
  const UnitSystem& us = *ueq.units;
  const OrderContext& g = us.field();
  EquationNumerics num = make_numerics(ueq, opt.digits);
  ExponentBounds out;
  PrecisionGuard guard(opt.digits + 10);
  out.c1 = compute_c1(num.logs);
  const Real c1 = out.c1.c1;

  std::vector<Real> unit_heights;
  for (const auto& u : us.units) unit_heights.push_back(at_working(height(u, g)));
  const Real h_a = at_working(height(ueq.a.num, g, ueq.a.den));
  const int degree = g.degree() * (g.totally_real() ? 1 : 2);

  out.e_b = 0;
  out.window = 0;
  out.e_r = 0;
  for (int p = 0; p < 2 * us.m(); ++p) {
    const int q = p ^ 1;
    RowBound rb;
    rb.row = p;
    const Real abs_a = exp(num.log_a(p));
    rb.log_factor = log(2 * abs_a);
    LinearFormSpec spec;
    spec.degree = degree;
    spec.log_factor = rb.log_factor;
    spec.logs.push_back(num.log_a(q));
    spec.heights.push_back(h_a);
    for (int k = 0; k < us.count(); ++k) {
      spec.logs.push_back(num.logs(q, k));
      spec.heights.push_back(unit_heights[k]);
    }
    rb.baker = baker_bound(spec, c1);
    if (rb.baker.bound > out.e_b) out.e_b = rb.baker.bound;

    const Real w = log(abs_a / Real(0.795)) / c1;
    if (w > 0) out.window = std::max(out.window, ceil_to_integer(w));

    if (opt.reduce) {
      SmallLinearForm form;
      form.zeta.push_back(num.log_a_high(q));
      for (int k = 0; k < us.count(); ++k) form.zeta.push_back(num.logs_high(q, k));
      form.c1 = 2 * abs_a;
      form.c2 = c1;
      form.c3 = 0;
      rb.reduction = reduce_to_fixpoint(form, rb.baker.bound, opt.reduction);
      if (rb.reduction.bound > out.e_r) out.e_r = rb.reduction.bound;
    } else {
      rb.reduction.bound = rb.baker.bound;
      if (rb.baker.bound > out.e_r) out.e_r = rb.baker.bound;
    }
    out.rows.push_back(std::move(rb));
  }
  if (out.window > out.e_r) out.e_r = out.window;
  return out;
}

// ---------------------------------------------------------------------------

Real initial_log_s(const EquationNumerics& num, long long e_r) {
  Real best_g = 0, best_row = 0;
  for (Eigen::Index p = 0; p < num.logs.rows(); ++p) {
    if (abs(num.log_a(p)) > best_g) best_g = abs(num.log_a(p));
    Real row = 0;
    for (Eigen::Index k = 0; k < num.logs.cols(); ++k) row += abs(num.logs(p, k));
    if (row > best_row) best_row = row;
  }
  return best_g + Real(static_cast<double>(e_r)) * best_row;
}

EllipsoidProblem<Real> case1_ellipsoid(const EquationNumerics& num, const Real& log_s_big, const Real& s_small, int row,
                                       long long e_r, bool final) {
  const int rows = 2 * num.m;
  const int extra = final ? 0 : 1;
  const int dim = num.rank();
  EllipsoidProblem<Real> p;
  p.offset.resize(rows + extra);
  p.generators.resize(rows + extra, dim);
  p.weights.resize(rows + extra);
  for (int r = 0; r < rows; ++r) {
    p.offset(r) = num.log_a(r);
    for (int k = 0; k < dim; ++k) p.generators(r, k) = num.logs(r, k);
    p.weights(r) = 1 / log_s_big;
  }
  if (!final) {
    p.offset(rows) = num.log_a(row);
    for (int k = 0; k < dim; ++k) p.generators(rows, k) = num.logs(row, k);
    p.weights(rows) = s_small / 2;
  }
  p.radius_sq = Real(rows + extra);
  p.lo.assign(dim, -e_r);
  p.hi.assign(dim, e_r);
  return p;
}

EllipsoidProblem<Real> case2_ellipsoid(const EquationNumerics& num, const Real& log_s_big, const Real& s_small, int i,
                                       long long e_r, bool final) {
  const int m = num.m;
  const int extra = final ? 0 : 1;
  const int dim = static_cast<int>(num.relative_part.cols());
  const int n = num.rank();
  EllipsoidProblem<Real> p;
  p.offset.resize(m + extra);
  p.generators.resize(m + extra, dim);
  p.weights.resize(m + extra);
  auto fill = [&](int out_row, int base) {
    p.offset(out_row) = num.log_a(2 * base) - num.log_a(2 * base + 1);
    for (int l = 0; l < dim; ++l) {
      Real acc = 0;
      for (int k = 0; k < n; ++k)
        if (num.relative_part(k, l) != 0)
          acc += Real(static_cast<double>(num.relative_part(k, l))) * (num.logs(2 * base, k) - num.logs(2 * base + 1, k));
      p.generators(out_row, l) = acc;
    }
  };
  for (int r = 0; r < m; ++r) {
    fill(r, r);
    p.weights(r) = 1 / (2 * log_s_big);
  }
  if (!final) {
    fill(m, i);
    p.weights(m) = s_small / 2;
  }
  p.radius_sq = Real(m + extra);
  for (int l = 0; l < dim; ++l) {
    long long b = 0;
    for (int k = 0; k < n; ++k) b += std::llabs(num.coordinates(l, k));
    p.lo.push_back(-b * e_r);
    p.hi.push_back(b * e_r);
  }
  return p;
}

// ---------------------------------------------------------------------------

std::optional<bool> verify_exact(const UnitEquation& ueq, const ExpVec& v, int sign) {
  const UnitSystem& us = *ueq.units;
  const OrderContext& g = us.field();
  Element w;
  try {
    w = exponent_vector_to_element(us, v);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kCardinalityCap) return std::nullopt;
    throw;
  }
  if (sign < 0) w = -w;
  const Element x = mul(ueq.a.num, w, g);
  const Element total = x + apply_automorphism(x, us.sigma, g);
  return total == g.constant(ueq.a.den);
}

std::optional<bool> verify_numeric([[maybe_unused]] const UnitEquation& ueq, const EquationNumerics& num, const ExpVec& v, int sign) {
  // Pick the lower precision when the magnitudes allow it.
  double biggest = 0;
  for (Eigen::Index p = 0; p < num.logs.rows(); ++p) {
    double la = to_double(num.log_a(p));
    for (Eigen::Index k = 0; k < v.size(); ++k) la += static_cast<double>(v(k)) * to_double(num.logs(p, k));
    biggest = std::max(biggest, std::fabs(la));
  }
  const double need = biggest / std::log(10.0) + 40;
  const bool low = need < num.digits;
  if (!low && need >= num.high_digits) return std::nullopt;
  const unsigned digits = low ? num.digits : num.high_digits;
  PrecisionGuard guard(digits + 10);
  const RealMatrix& logs = low ? num.logs : num.logs_high;
  const RealMatrix& args = low ? num.args : num.args_high;
  const RealVector& log_a = low ? num.log_a : num.log_a_high;
  const RealVector& arg_a = low ? num.arg_a : num.arg_a_high;
  const Real tol = pow10_neg(static_cast<int>((digits - need + 40) / 2));
  for (int i = 0; i < num.m; ++i) {
    ComplexR t = row_value(logs, args, log_a, arg_a, 2 * i, v).value + row_value(logs, args, log_a, arg_a, 2 * i + 1, v).value;
    if (sign < 0) t = -t;
    if (abs(t - ComplexR(Real(1))) > tol) return false;
  }
  return true;
}

std::vector<UnitSolution> brute_force_solutions(const UnitEquation& ueq, long long e) {
  const int n = ueq.units->count();
  std::vector<UnitSolution> out;
  ExpVec v = ExpVec::Constant(n, -e);
  while (true) {
    for (int sign : {1, -1}) {
      auto ok = verify_exact(ueq, v, sign);
      if (!ok) fail(ErrorKind::kCardinalityCap, "brute force exceeds the coordinate cap");
      if (*ok) out.push_back({v, sign, true});
    }
    int k = n - 1;
    while (k >= 0 && v(k) == e) {
      v(k) = -e;
      --k;
    }
    if (k < 0) break;
    ++v(k);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

class ScheduleRunner {
 public:
  ScheduleRunner(const UnitEquation& ueq, long long e_r, const ScheduleOptions& opt)
      : ueq_(ueq), us_(*ueq.units), e_r_(e_r), opt_(opt), num_(make_numerics(ueq, opt.digits)) {
    std::vector<std::uint64_t> primes = opt.sieve_primes;
    if (primes.empty()) primes = find_sieve_primes(us_, ueq.a, 4, 101);
    user_sieve_ = !opt.sieve_primes.empty();
    plan_ = make_sieve_plan(us_, ueq.a, primes, e_r);
    res_.e_r = e_r;
    res_.sieve.rejected_first.assign(plan_.primes.size(), 0);
  }

  ScheduleResult run() {
    PrecisionGuard guard(opt_.digits + 10);
    const Real log_s0 = initial_log_s(num_, e_r_);
    res_.log10_initial = to_double(log_s0 / ln10());
    std::vector<double> smalls = opt_.log10_small;
    if (smalls.empty()) {
      double ls = std::min(res_.log10_initial / 2, 20.0);
      smalls.push_back(ls);
      while (ls > 2) {
        ls /= 2;
        smalls.push_back(ls);
      }
    }
    double prev = res_.log10_initial;
    const double limit = std::log10(2 / 0.795);
    for (double ls : smalls) {
      if (!(ls < prev)) fail(ErrorKind::kInput, "schedule values must decrease below the initial S");
      if (!(ls > limit)) fail(ErrorKind::kInput, "schedule violates 2/s < 0.795");
      prev = ls;
    }

    Real log_big = log_s0;
    double log10_big = res_.log10_initial;
    for (double ls : smalls) {
      step(log_big, log10_big, ls, false);
      log_big = Real(ls) * ln10();
      log10_big = ls;
    }
    step(log_big, log10_big, log10_big, true);
    return verify();
  }

  // Continues from the candidate sets of an earlier enumeration.
  ScheduleResult resume(const ScheduleResult& saved) {
    res_.log10_initial = saved.log10_initial;
    res_.steps = saved.steps;
    res_.residual_triples = saved.residual_triples;
    for (const auto& v : saved.candidate_set) candidates_.insert(key_of(v));
    for (const auto& u : saved.residual_set) residual_.insert(key_of(u));
    return verify();
  }

 private:
  ScheduleResult verify() {
    PrecisionGuard guard(opt_.digits + 10);
    for (const auto& k : candidates_) res_.candidate_set.push_back(vec_of(k));
    for (const auto& k : residual_) res_.residual_set.push_back(vec_of(k));
    for (const auto& k : candidates_) process_candidate(vec_of(k));
    res_.candidates = candidates_.size();
    res_.residual_distinct = residual_.size();
    for (const auto& k : residual_) residual_scan(vec_of(k));
    for (const auto& [k, sol] : found_) res_.solutions.push_back(sol);
    // Sieve soundness on every verified solution.
    for (const auto& s : res_.solutions) {
      const unsigned mask = sieve_signs(plan_, s.v);
      if (!(mask & (s.sign > 0 ? 1u : 2u))) ++res_.sieve.false_rejections;
    }
    return std::move(res_);
  }

  void step(const Real& log_big, double log10_big, double log10_small, bool final) {
    StepCounts sc;
    sc.log10_big = log10_big;
    sc.log10_small = log10_small;
    sc.final = final;
    // The weighted extra row needs absolute accuracy well below 1/s.
    const unsigned digits = std::max(opt_.digits, static_cast<unsigned>(std::ceil(log10_small)) + 60);
    if (digits + 10 > num_.high_digits) fail(ErrorKind::kPrecision, "schedule value s exceeds the field precision");
    const EquationNumerics num = digits == num_.digits ? num_ : with_digits(num_, digits);
    PrecisionGuard guard(digits + 10);
    const Real s_small = boost::multiprecision::pow(Real(10), Real(log10_small));
    const Real big = at_working(log_big);
    const int rows = final ? 1 : 2 * num.m;
    for (int p = 0; p < rows; ++p) {
      EnumerationStats st;
      auto pts = fincke_pohst(case1_ellipsoid(num, big, s_small, p, e_r_, final), opt_.cap, &st);
      sc.case1.push_back(pts.size());
      sc.case1_total += pts.size();
      sc.nodes += st.nodes;
      for (const auto& v : pts) candidates_.insert(key_of(v));
    }
    if (num.relative_part.cols() > 0) {
      const int bases = final ? 1 : num.m;
      for (int i = 0; i < bases; ++i) {
        EnumerationStats st;
        auto pts = fincke_pohst(case2_ellipsoid(num, big, s_small, i, e_r_, final), opt_.cap, &st);
        sc.case2.push_back(pts.size());
        sc.case2_total += pts.size();
        sc.nodes += st.nodes;
        for (const auto& u : pts) residual_.insert(key_of(u));
      }
    }
    res_.residual_triples += sc.case2_total;
    res_.steps.push_back(std::move(sc));
  }

  void record(const ExpVec& v, int sign, bool exact) {
    Key k = key_of(v);
    k.push_back(sign);
    found_.emplace(k, UnitSolution{v, sign, exact});
  }

  // Returns true when (v, sign) is a solution, settled exactly when possible.
  bool confirm(const ExpVec& v, int sign, bool* exact) {
    auto ex = verify_exact(ueq_, v, sign);
    if (ex) {
      *exact = true;
      return *ex;
    }
    auto nu = verify_numeric(ueq_, num_, v, sign);
    if (!nu) fail(ErrorKind::kPrecision, "candidate can be decided neither exactly nor numerically");
    *exact = false;
    return *nu;
  }

  void process_candidate(const ExpVec& v) {
    unsigned mask = 3;
    for (std::size_t i = 0; i < plan_.primes.size(); ++i) {
      const unsigned before = mask;
      mask &= sieve_signs_at(plan_, i, v);
      for (unsigned bit : {1u, 2u})
        if ((before & bit) && !(mask & bit)) ++res_.sieve.rejected_first[i];
      if (!mask) break;
    }
    for (int sign : {1, -1}) {
      const unsigned bit = sign > 0 ? 1u : 2u;
      ++res_.sieve.tested;
      bool exact = true;
      if (mask & bit) {
        ++res_.sieve.passed;
        if (confirm(v, sign, &exact)) record(v, sign, exact);
      } else if (opt_.audit) {
        ++res_.sieve.audited;
        auto nu = verify_numeric(ueq_, num_, v, sign);
        if (nu && !*nu) continue;
        if (confirm(v, sign, &exact)) {
          ++res_.sieve.false_rejections;
          record(v, sign, exact);
        }
      }
    }
  }

  // v = W u + K t with t running over the box implied by |v| <= E_R; every
  // (u, t) is tested modulo the sieve primes and survivors exactly.
  void residual_scan(const ExpVec& u) {
    const int n = num_.rank();
    const int r = static_cast<int>(num_.fixed_part.cols());
    const ExpVec wu = num_.relative_part * u;
    std::vector<long long> tlo(r), thi(r);
    for (int j = 0; j < r; ++j) {
      long long b = 0;
      const int row = static_cast<int>(num_.relative_part.cols()) + j;
      for (int k = 0; k < n; ++k) b += std::llabs(num_.coordinates(row, k));
      tlo[j] = -b * e_r_;
      thi[j] = b * e_r_;
    }
    // Per prime and root: A(root) * (W u)(root) and tables of the fixed units.
    struct Local {
      std::uint64_t p;
      std::vector<std::uint64_t> base;
      std::vector<std::vector<std::vector<std::uint64_t>>> pow;  // [root][j][t - lo]
    };
    std::vector<Local> loc;
    for (const auto& sp : plan_.primes) {
      Local l;
      l.p = sp.p;
      for (std::size_t root = 0; root < sp.roots.size(); ++root) {
        l.base.push_back(mulmod(sp.a_values[root], unit_product_mod(sp, root, wu), sp.p));
        std::vector<std::vector<std::uint64_t>> per_j;
        for (int j = 0; j < r; ++j) {
          const std::uint64_t kj = unit_product_mod(sp, root, num_.fixed_part.col(j));
          const std::uint64_t ki = powmod(kj, sp.p - 2, sp.p);
          std::vector<std::uint64_t> tab(static_cast<std::size_t>(thi[j] - tlo[j] + 1));
          std::uint64_t x = powmod(ki, static_cast<std::uint64_t>(-tlo[j]), sp.p);
          for (auto& e : tab) {
            e = x;
            x = mulmod(x, kj, sp.p);
          }
          per_j.push_back(std::move(tab));
        }
        l.pow.push_back(std::move(per_j));
      }
      loc.push_back(std::move(l));
    }
    std::set<Key> hits;
    std::vector<long long> t(tlo);
    if (r == 0) t.clear();
    while (true) {
      ++res_.residual_scanned;
      unsigned mask = 3;
      for (std::size_t pi = 0; pi < loc.size() && mask; ++pi) {
        const Local& l = loc[pi];
        const SievePrime& sp = plan_.primes[pi];
        for (std::size_t root = 0; root < l.base.size() && mask; ++root) {
          auto val = [&](std::size_t rt) {
            std::uint64_t x = l.base[rt];
            for (int j = 0; j < r; ++j) x = mulmod(x, l.pow[rt][j][t[j] - tlo[j]], l.p);
            return x;
          };
          const std::uint64_t s = (val(root) + val(sp.partner[root])) % l.p;
          if (s != 1) mask &= ~1u;
          if (s != l.p - 1) mask &= ~2u;
        }
      }
      if (mask) {
        ExpVec v = wu;
        for (int j = 0; j < r; ++j) v += t[j] * num_.fixed_part.col(j);
        if (max_abs(v) <= e_r_) {
          for (int sign : {1, -1}) {
            if (!(mask & (sign > 0 ? 1u : 2u))) continue;
            bool exact = true;
            if (confirm(v, sign, &exact)) {
              record(v, sign, exact);
              Key k = key_of(v);
              k.push_back(sign);
              hits.insert(k);
            }
          }
        }
      }
      int j = r - 1;
      while (j >= 0 && t[j] == thi[j]) {
        t[j] = tlo[j];
        --j;
      }
      if (j < 0) break;
      ++t[j];
    }
    if (opt_.audit) audit_residual(u, wu, hits);
  }

  // Second route for the residual scan: for a solution, A W_u + sigma(A W_u)
  // or A W_u - sigma(A W_u) is the inverse of a fixed unit. The exact unit
  // test settles most u; otherwise t is recovered from logarithms.
  void audit_residual([[maybe_unused]] const ExpVec& u, const ExpVec& wu, const std::set<Key>& hits) {
    const OrderContext& g = us_.field();
    const int r = static_cast<int>(num_.fixed_part.cols());
    Element w;
    try {
      w = exponent_vector_to_element(us_, wu);
    } catch (const Error&) {
      ++res_.sieve.unaudited;
      return;
    }
    const Element x = mul(ueq_.a.num, w, g);
    const Element xc = apply_automorphism(x, us_.sigma, g);
    for (int cls : {1, -1}) {
      Element tnum = cls > 0 ? Element(x + xc) : Element(x - xc);
      bool integral = true;
      for (int k = 0; k < g.degree() && integral; ++k) integral = (tnum(k) % ueq_.a.den) == 0;
      if (!integral) continue;
      Element tt = tnum / ueq_.a.den;
      Integer nm = norm(tt, g);
      if (nm != 1 && nm != -1) continue;
      if (r == 0) {
        // t is empty: v = W u is the only candidate.
        audit_vector(wu, hits);
        continue;
      }
      // log|K t|^(i) = -log|T^(i)| at every base conjugate.
      double biggest = 0;
      for (int p = 0; p < 2 * num_.m; ++p) {
        double la = to_double(num_.log_a(p));
        for (int k = 0; k < wu.size(); ++k) la += static_cast<double>(wu(k)) * to_double(num_.logs(p, k));
        biggest = std::max(biggest, std::fabs(la));
      }
      if (biggest / std::log(10.0) + 40 >= num_.high_digits) {
        ++res_.sieve.unaudited;
        continue;
      }
      PrecisionGuard guard(num_.high_digits + 10);
      RealMatrix lk(num_.m, r);
      RealVector rhs(num_.m);
      for (int i = 0; i < num_.m; ++i) {
        ComplexR pv = row_value(num_.logs_high, num_.args_high, num_.log_a_high, num_.arg_a_high, 2 * i, wu).value;
        ComplexR qv = row_value(num_.logs_high, num_.args_high, num_.log_a_high, num_.arg_a_high, 2 * i + 1, wu).value;
        ComplexR tv = cls > 0 ? pv + qv : pv - qv;
        rhs(i) = -log(abs(tv));
        for (int j = 0; j < r; ++j) {
          Real acc = 0;
          for (int k = 0; k < num_.rank(); ++k)
            if (num_.fixed_part(k, j) != 0) acc += Real(static_cast<double>(num_.fixed_part(k, j))) * num_.logs_high(2 * i, k);
          lk(i, j) = acc;
        }
      }
      RealVector tsol = (lk.transpose() * lk).ldlt().solve(lk.transpose() * rhs);
      ExpVec v = wu;
      for (int j = 0; j < r; ++j) v += round_to_integer(tsol(j)).convert_to<long long>() * num_.fixed_part.col(j);
      if (max_abs(v) > e_r_) continue;
      audit_vector(v, hits);
    }
  }

  void audit_vector(const ExpVec& v, const std::set<Key>& hits) {
    ++res_.sieve.audited;
    for (int sign : {1, -1}) {
      bool exact = true;
      if (!confirm(v, sign, &exact)) continue;
      Key k = key_of(v);
      k.push_back(sign);
      if (!hits.count(k)) {
        ++res_.sieve.false_rejections;
        record(v, sign, exact);
      }
    }
  }

  const UnitEquation& ueq_;
  const UnitSystem& us_;
  long long e_r_;
  ScheduleOptions opt_;
  EquationNumerics num_;
  SievePlan plan_;
  bool user_sieve_ = false;
  ScheduleResult res_;
  std::set<Key> candidates_, residual_;
  std::map<Key, UnitSolution> found_;
};

}  // namespace

ScheduleResult run_schedule(const UnitEquation& ueq, long long e_r, const ScheduleOptions& opt) {
  if (e_r < 0) fail(ErrorKind::kInput, "negative exponent bound");
  ScheduleRunner runner(ueq, e_r, opt);
  return runner.run();
}

ScheduleResult resume_schedule(const UnitEquation& ueq, long long e_r, const ScheduleOptions& opt,
                               const ScheduleResult& saved) {
  if (e_r < 0) fail(ErrorKind::kInput, "negative exponent bound");
  ScheduleRunner runner(ueq, e_r, opt);
  return runner.resume(saved);
}

// ---------------------------------------------------------------------------

std::vector<RecoveredUV> recover_uv(const UnitSystem& us, const CaseCData& data,
                                    const std::vector<UnitSolution>& solutions, std::size_t* rejected) {
  const OrderContext& g = us.field();
  std::vector<RecoveredUV> out;
  std::size_t bad = 0;
  const Element dm = lift(data.delta_m, us.ext);
  const Element lam = lift(data.lambda1, us.ext);
  const Element den = data.rho - lam;
  for (std::size_t idx = 0; idx < solutions.size(); ++idx) {
    Element w = exponent_vector_to_element(us, solutions[idx].v);
    if (solutions[idx].sign < 0) w = -w;
    const Element rhs = dm - mul(data.delta_g, apply_automorphism(w, us.sigma, g), g);
    auto v = divide_exact(rhs, den, g);
    std::optional<Element> vm = v ? descend(*v, us.ext) : std::nullopt;
    if (!vm) {
      ++bad;
      continue;
    }
    const Element um = data.delta_m + mul(data.lambda1, *vm, us.base());
    out.push_back({um, *vm, idx});
  }
  if (rejected) *rejected = bad;
  return out;
}

// ---------------------------------------------------------------------------

AbsoluteResult solve_absolute_unit_equation(const AbsoluteUnitEquation& eq, const BoundOptions& opt) {
  const OrderContext& f = *eq.field;
  const int r = static_cast<int>(eq.units.size());
  const int m = f.degree();
  AbsoluteResult out;
  out.e_b = 0;
  out.e_r = 0;
  out.window = 0;

  std::vector<RealVector> alpha_logs(2), unit_logs;
  RealMatrix lm(m, r), lm_high(m, r);
  RealVector la(m), lb(m), la_high(m), lb_high(m);
  {
    PrecisionGuard guard(f.digits() + 10);
    for (int i = 0; i < m; ++i) {
      la_high(i) = log(abs(at_working(embed(eq.alpha, f, i))));
      lb_high(i) = log(abs(at_working(embed(eq.beta, f, i))));
      for (int k = 0; k < r; ++k) lm_high(i, k) = log(abs(at_working(embed(eq.units[k], f, i))));
    }
  }
  PrecisionGuard guard(opt.digits + 10);
  auto lower = [](const Real& x) { return at_working(x); };
  lm = lm_high.unaryExpr(lower);
  la = la_high.unaryExpr(lower);
  lb = lb_high.unaryExpr(lower);

  if (r > 0) {
    out.c1 = compute_c1(lm);
    const Real c1 = out.c1->c1;
    std::vector<Real> hu;
    for (const auto& u : eq.units) hu.push_back(at_working(height(u, f)));
    const Real ha = at_working(height(eq.alpha.num, f, eq.alpha.den));
    const Real hb = at_working(height(eq.beta.num, f, eq.beta.den));
    const int degree = m * (f.totally_real() ? 1 : 2);
    // Role 0: Y small at i0, linear form in the exponents of X with alpha.
    // Role 1: X small at i0, linear form in the exponents of Y with beta.
    for (int role = 0; role < 2; ++role) {
      const RealVector& lc = role == 0 ? la : lb;
      const RealVector& lc_high = role == 0 ? la_high : lb_high;
      const RealVector& lsmall = role == 0 ? lb : la;
      const Real& hc = role == 0 ? ha : hb;
      for (int i0 = 0; i0 < m; ++i0) {
        RowBound rb;
        rb.row = role * m + i0;
        const Real abs_small = exp(lsmall(i0));
        rb.log_factor = log(2 * abs_small);
        LinearFormSpec spec;
        spec.degree = degree;
        spec.log_factor = rb.log_factor;
        spec.logs.push_back(lc(i0));
        spec.heights.push_back(hc);
        for (int k = 0; k < r; ++k) {
          spec.logs.push_back(lm(i0, k));
          spec.heights.push_back(hu[k]);
        }
        rb.baker = baker_bound(spec, c1);
        out.e_b = std::max(out.e_b, rb.baker.bound);
        const Real w = log(abs_small / Real(0.795)) / c1;
        if (w > 0) out.window = std::max(out.window, ceil_to_integer(w));
        if (opt.reduce) {
          SmallLinearForm form;
          form.zeta.push_back(lc_high(i0));
          for (int k = 0; k < r; ++k) form.zeta.push_back(lm_high(i0, k));
          form.c1 = 2 * abs_small;
          form.c2 = c1;
          rb.reduction = reduce_to_fixpoint(form, rb.baker.bound, opt.reduction);
        } else {
          rb.reduction.bound = rb.baker.bound;
        }
        out.e_r = std::max(out.e_r, rb.reduction.bound);
        out.rows.push_back(std::move(rb));
      }
    }
    out.e_r = std::max(out.e_r, out.window);
  }

  // Exact scan over X.
  const long long e = out.e_r.convert_to<long long>();
  std::vector<std::vector<Element>> pw(r);
  for (int k = 0; k < r; ++k) {
    auto inv = divide_exact(f.one(), eq.units[k], f);
    if (!inv) fail(ErrorKind::kVerification, "unit of M is not invertible");
    pw[k].assign(static_cast<std::size_t>(2 * e + 1), f.one());
    for (long long j = 1; j <= e; ++j) {
      pw[k][e + j] = mul(pw[k][e + j - 1], eq.units[k], f);
      pw[k][e - j] = mul(pw[k][e - j + 1], *inv, f);
    }
  }
  // Y = bd (ad - an X) / (ad bn).
  const Element divisor = f.constant(eq.alpha.den);
  const ScaledInverse sinv = scaled_inverse(multiplication_matrix(mul(divisor, eq.beta.num, f), f));
  ExpVec a = ExpVec::Constant(r, -e);
  const unsigned high = f.digits();
  while (true) {
    Element x = f.one();
    for (int k = 0; k < r; ++k) x = mul(x, pw[k][a(k) + e], f);
    for (int sx : {1, -1}) {
      ++out.scanned;
      Element n1 = f.constant(eq.alpha.den) - mul(eq.alpha.num, x, f) * sx;
      n1 *= eq.beta.den;
      Element y = sinv.adj * n1;
      bool integral = true;
      for (int k = 0; k < m && integral; ++k) integral = (y(k) % sinv.det) == 0;
      if (!integral) continue;
      y /= sinv.det;
      const Integer ny = norm(y, f);
      if (ny != 1 && ny != -1) continue;
      // Exponents of Y from its logarithms, then an exact check.
      AbsoluteSolution sol;
      sol.a = a;
      sol.sx = sx;
      sol.b = ExpVec::Zero(r);
      if (r > 0) {
        PrecisionGuard g2(high + 10);
        RealVector ly(m);
        for (int i = 0; i < m; ++i) ly(i) = log(abs(at_working(embed(y, f, i))));
        RealMatrix lmh = lm_high.unaryExpr(lower);
        RealVector bs = (lmh.transpose() * lmh).ldlt().solve(lmh.transpose() * ly);
        for (int k = 0; k < r; ++k) sol.b(k) = round_to_integer(bs(k)).convert_to<long long>();
      }
      Element yy = f.one();
      for (int k = 0; k < r; ++k) {
        const long long bk = sol.b(k);
        auto inv = divide_exact(f.one(), eq.units[k], f);
        yy = mul(yy, power(bk >= 0 ? eq.units[k] : *inv, static_cast<unsigned>(bk >= 0 ? bk : -bk), f), f);
      }
      if (yy == y) {
        sol.sy = 1;
      } else if (yy == Element(-y)) {
        sol.sy = -1;
      } else {
        fail(ErrorKind::kPrecision, "unit exponents of Y could not be recovered");
      }
      out.solutions.push_back(sol);
    }
    int k = r - 1;
    while (k >= 0 && a(k) == e) {
      a(k) = -e;
      --k;
    }
    if (k < 0) break;
    ++a(k);
  }
  return out;
}

}  // namespace relthue
