#include "relthue/order.hpp"

#include "relthue/errors.hpp"
#include "relthue/roots.hpp"

#include <algorithm>

namespace relthue {

OrderContext::OrderContext(IntPoly poly, unsigned digits) : poly_(std::move(poly)), digits_(digits) {
  trim(poly_);
  n_ = relthue::degree(poly_);
  if (n_ < 1) fail(ErrorKind::kInput, "defining polynomial must have degree >= 1");
  if (poly_[n_] != 1) fail(ErrorKind::kInput, "defining polynomial must be monic");

  roots_ = integer_roots(poly_, digits_);
  for (const auto& r : roots_) {
    if (r.im == 0) ++real_;
    roots_d_.emplace_back(to_double(r.re), to_double(r.im));
  }
  // A monic integer polynomial of degree > 1 with an integer root is
  // reducible; the rest of irreducibility is the caller's responsibility.
  if (n_ > 1) {
    for (const auto& r : roots_) {
      if (r.im != 0) continue;
      if (evaluate(poly_, round_to_integer(r.re)) == 0)
        fail(ErrorKind::kInput, "defining polynomial has an integer root: " + to_string(poly_));
    }
  }

  {
    PrecisionGuard g(digits_ + 10);
    root_pows_.resize(n_);
    for (int k = 0; k < n_; ++k) {
      root_pows_[k].reserve(n_);
      ComplexR p(Real(1));
      for (int j = 0; j < n_; ++j) {
        root_pows_[k].push_back(p);
        p *= roots_[k];
      }
    }
  }

  powers_ = IntMatrix::Zero(n_, 2 * n_ - 1);
  for (int e = 0; e < n_; ++e) powers_(e, e) = 1;
  for (int e = n_; e < 2 * n_ - 1; ++e) {
    // theta^e = theta * theta^(e-1); the overflow coefficient is reduced
    // with theta^n = -sum a_k theta^k.
    const Integer top = powers_(n_ - 1, e - 1);
    for (int k = n_ - 1; k >= 1; --k) powers_(k, e) = powers_(k - 1, e - 1);
    powers_(0, e) = 0;
    for (int k = 0; k < n_; ++k) powers_(k, e) -= top * poly_[k];
  }
}

Element OrderContext::constant(const Integer& c) const {
  Element e = zero();
  e(0) = c;
  return e;
}

Element OrderContext::generator() const {
  Element e = zero();
  if (n_ == 1) {
    e(0) = -poly_[0];
  } else {
    e(1) = 1;
  }
  return e;
}

Element OrderContext::from(const std::vector<long long>& coords) const {
  if (static_cast<int>(coords.size()) != n_) fail(ErrorKind::kInput, "coordinate vector length does not match the degree");
  Element e(n_);
  for (int k = 0; k < n_; ++k) e(k) = coords[k];
  return e;
}

namespace {

void check_dim(const Element& a, const OrderContext& ctx) {
  if (a.size() != ctx.degree()) fail(ErrorKind::kInput, "element length does not match the order degree");
}

}  // namespace

Element mul(const Element& a, const Element& b, const OrderContext& ctx) {
  check_dim(a, ctx);
  check_dim(b, ctx);
  const int n = ctx.degree();
  Vec<Integer> conv = Vec<Integer>::Zero(2 * n - 1);
  for (int i = 0; i < n; ++i) {
    if (a(i) == 0) continue;
    for (int j = 0; j < n; ++j) conv(i + j) += a(i) * b(j);
  }
  return ctx.powers() * conv;
}

Element power(const Element& a, unsigned e, const OrderContext& ctx) {
  Element result = ctx.one();
  Element base = a;
  while (e > 0) {
    if (e & 1u) result = mul(result, base, ctx);
    e >>= 1;
    if (e > 0) base = mul(base, base, ctx);
  }
  return result;
}

IntMatrix multiplication_matrix(const Element& a, const OrderContext& ctx) {
  check_dim(a, ctx);
  const int n = ctx.degree();
  IntMatrix m(n, n);
  for (int j = 0; j < n; ++j) {
    Element basis = ctx.zero();
    basis(j) = 1;
    m.col(j) = mul(a, basis, ctx);
  }
  return m;
}

Integer norm(const Element& a, const OrderContext& ctx) {
  check_dim(a, ctx);
  IntPoly ap(a.data(), a.data() + a.size());
  trim(ap);
  if (ap.empty()) return 0;
  return resultant(ctx.polynomial(), ap);
}

IntPoly characteristic_polynomial(const Element& a, const OrderContext& ctx) {
  return characteristic_polynomial(multiplication_matrix(a, ctx));
}

ComplexR embed(const Element& a, const OrderContext& ctx, int k) {
  check_dim(a, ctx);
  ComplexR acc;
  for (int j = 0; j < ctx.degree(); ++j) {
    if (a(j) == 0) continue;
    const Real c(a(j));
    const ComplexR& p = ctx.root_power(k, j);
    acc.re += c * p.re;
    acc.im += c * p.im;
  }
  return acc;
}

std::vector<ComplexR> embeddings(const Element& a, const OrderContext& ctx) {
  std::vector<ComplexR> out;
  out.reserve(ctx.degree());
  for (int k = 0; k < ctx.degree(); ++k) out.push_back(embed(a, ctx, k));
  return out;
}

std::complex<double> embed_double(const Element& a, const OrderContext& ctx, int k) {
  std::complex<double> acc = 0, p = 1;
  const auto& r = ctx.roots_double()[k];
  for (int j = 0; j < ctx.degree(); ++j) {
    acc += to_double(a(j)) * p;
    p *= r;
  }
  return acc;
}

Real size(const Element& a, const OrderContext& ctx) {
  Real best = 0;
  for (int k = 0; k < ctx.degree(); ++k) {
    Real v = abs(embed(a, ctx, k));
    if (v > best) best = v;
  }
  return best;
}

std::vector<Integer> coordinate_box(const OrderContext& ctx, const std::vector<double>& bounds) {
  const int n = ctx.degree();
  Eigen::MatrixXcd v(n, n);
  for (int k = 0; k < n; ++k) {
    std::complex<double> p = 1;
    for (int j = 0; j < n; ++j) {
      v(k, j) = p;
      p *= ctx.roots_double()[k];
    }
  }
  Eigen::MatrixXcd inv = v.fullPivLu().inverse();
  std::vector<Integer> box(n);
  for (int j = 0; j < n; ++j) {
    double s = 0;
    for (int k = 0; k < n; ++k) s += std::abs(inv(j, k)) * bounds[k];
    // Outward rounding absorbs the double-precision inverse.
    box[j] = Integer(static_cast<long long>(std::floor(s * (1 + 1e-9) + 1e-9)));
  }
  return box;
}

std::vector<Element> enumerate_bounded(const OrderContext& ctx, const Real& bound, std::uint64_t cap) {
  return enumerate_bounded(ctx, std::vector<Real>(ctx.degree(), bound), cap);
}

std::vector<Element> enumerate_bounded(const OrderContext& ctx, const std::vector<Real>& bounds, std::uint64_t cap) {
  const int n = ctx.degree();
  if (static_cast<int>(bounds.size()) != n) fail(ErrorKind::kInput, "enumerate_bounded needs one bound per embedding");
  std::vector<double> b(n);
  for (int k = 0; k < n; ++k) b[k] = to_double(bounds[k]);
  auto box = coordinate_box(ctx, b);
  double count = 1;
  for (const auto& x : box) count *= 2 * to_double(x) + 1;
  if (count > static_cast<double>(cap)) fail(ErrorKind::kCardinalityCap, "coordinate box too large for enumerate_bounded");

  std::vector<long long> lo(n), cur(n);
  for (int j = 0; j < n; ++j) cur[j] = lo[j] = -box[j].convert_to<long long>();
  std::vector<std::vector<std::complex<double>>> pw(n, std::vector<std::complex<double>>(n));
  for (int k = 0; k < n; ++k) {
    std::complex<double> p = 1;
    for (int j = 0; j < n; ++j) {
      pw[k][j] = p;
      p *= ctx.roots_double()[k];
    }
  }
  const Real tol = pow10_neg(static_cast<int>(ctx.digits() / 2));
  std::vector<Element> out;
  while (true) {
    bool inside = true;
    for (int k = 0; k < n && inside; ++k) {
      std::complex<double> acc = 0;
      for (int j = 0; j < n; ++j) acc += static_cast<double>(cur[j]) * pw[k][j];
      inside = std::abs(acc) <= b[k] * (1 + 1e-7) + 1e-9;
    }
    if (inside) {
      Element e(n);
      for (int j = 0; j < n; ++j) e(j) = cur[j];
      for (int k = 0; k < n && inside; ++k) inside = abs(embed(e, ctx, k)) <= bounds[k] + tol;
      if (inside) out.push_back(std::move(e));
    }
    int j = 0;
    while (j < n && cur[j] == -lo[j]) {
      cur[j] = lo[j];
      ++j;
    }
    if (j == n) break;
    ++cur[j];
  }
  return out;
}

std::optional<Element> divide_exact(const Element& a, const Element& b, const OrderContext& ctx) {
  check_dim(a, ctx);
  check_dim(b, ctx);
  if (b.isZero()) fail(ErrorKind::kInput, "division by zero element");
  std::vector<Integer> rhs(a.data(), a.data() + a.size());
  auto [num, den] = solve_exact(multiplication_matrix(b, ctx), rhs);
  if (den != 1) return std::nullopt;
  Element q(ctx.degree());
  for (int k = 0; k < ctx.degree(); ++k) q(k) = num[k];
  return q;
}

RationalElement quotient(const Element& a, const Element& b, const OrderContext& ctx) {
  check_dim(a, ctx);
  check_dim(b, ctx);
  if (b.isZero()) fail(ErrorKind::kInput, "division by zero element");
  std::vector<Integer> rhs(a.data(), a.data() + a.size());
  auto [num, den] = solve_exact(multiplication_matrix(b, ctx), rhs);
  RationalElement q{Element(ctx.degree()), den};
  Integer g = den;
  for (const auto& c : num) g = boost::multiprecision::gcd(g, c);
  if (g < 0) g = -g;
  if (q.den < 0) g = -g;
  for (int k = 0; k < ctx.degree(); ++k) q.num(k) = num[k] / g;
  q.den /= g;
  return q;
}

ComplexR embed(const RationalElement& a, const OrderContext& ctx, int k) {
  ComplexR z = embed(a.num, ctx, k);
  const Real d(a.den);
  return ComplexR(z.re / d, z.im / d);
}

Element evaluate_at(const Element& coeffs, const Element& x, const OrderContext& ctx) {
  Element acc = ctx.zero();
  for (Eigen::Index k = coeffs.size() - 1; k >= 0; --k) {
    acc = mul(acc, x, ctx);
    acc(0) += coeffs(k);
  }
  return acc;
}

Element coordinates_from_embeddings(const OrderContext& ctx, const std::vector<ComplexR>& values, Real* residual) {
  const int n = ctx.degree();
  PrecisionGuard g(ctx.digits() + 10);
  std::vector<std::vector<ComplexR>> a(n, std::vector<ComplexR>(n + 1));
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) a[k][j] = ctx.root_power(k, j);
    a[k][n] = values[k];
  }
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (abs(a[r][c]) > abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      ComplexR f = a[r][c] / a[c][c];
      for (int j = c; j <= n; ++j) a[r][j] -= f * a[c][j];
    }
  }
  Element out(n);
  Real worst = 0;
  for (int j = 0; j < n; ++j) {
    ComplexR x = a[j][n] / a[j][j];
    out(j) = round_to_integer(x.re);
    Real d = abs(ComplexR(x.re - Real(out(j)), x.im));
    if (d > worst) worst = d;
  }
  if (residual != nullptr) *residual = worst;
  return out;
}

Extension make_extension(const OrderContext& base, const OrderContext& top, const Element& image) {
  if (top.degree() % base.degree() != 0) fail(ErrorKind::kVerification, "field degrees are not compatible");
  Element bp(base.degree() + 1);
  for (int k = 0; k <= base.degree(); ++k) bp(k) = base.polynomial()[k];
  if (!evaluate_at(bp, image, top).isZero())
    fail(ErrorKind::kVerification, "image of the base generator does not satisfy the base polynomial");

  Extension ext;
  ext.base = &base;
  ext.top = &top;
  ext.generator_image = image;
  ext.fibres.assign(base.degree(), {});
  const unsigned digits = std::min(base.digits(), top.digits());
  PrecisionGuard g(digits + 10);
  const Real tol = pow10_neg(static_cast<int>(digits / 2));
  for (int k = 0; k < top.degree(); ++k) {
    ComplexR v = embed(image, top, k);
    std::vector<Real> dist;
    for (int i = 0; i < base.degree(); ++i) dist.push_back(abs(v - base.roots()[i]));
    const int best = static_cast<int>(std::min_element(dist.begin(), dist.end()) - dist.begin());
    const Real d1 = dist[best];
    Real d2 = -1;
    for (int i = 0; i < base.degree(); ++i)
      if (i != best && (d2 < 0 || dist[i] < d2)) d2 = dist[i];
    if (d1 > tol * (1 + abs(v))) fail(ErrorKind::kVerification, "embedding pairing failed: no matching base root");
    if (d2 >= 0 && d2 < tol * (1 + abs(v))) fail(ErrorKind::kPrecision, "embedding pairing is ambiguous");
    ext.pairing.push_back(best);
    ext.fibres[best].push_back(k);
  }
  const std::size_t rel = static_cast<std::size_t>(top.degree() / base.degree());
  for (const auto& f : ext.fibres)
    if (f.size() != rel) fail(ErrorKind::kVerification, "embedding fibres have unequal sizes");
  return ext;
}

Element lift(const Element& a, const Extension& ext) { return evaluate_at(a, ext.generator_image, *ext.top); }

std::optional<Element> descend(const Element& a, const Extension& ext) {
  std::vector<ComplexR> vals;
  for (int i = 0; i < ext.base->degree(); ++i) vals.push_back(embed(a, *ext.top, ext.fibres[i][0]));
  Element b = coordinates_from_embeddings(*ext.base, vals);
  if (lift(b, ext) != a) return std::nullopt;
  return b;
}

Element relative_conjugation(const Extension& ext) {
  if (ext.relative_degree() != 2) fail(ErrorKind::kInput, "relative conjugation needs a quadratic extension");
  const OrderContext& top = *ext.top;
  std::vector<ComplexR> vals(top.degree());
  for (const auto& f : ext.fibres) {
    vals[f[0]] = top.roots()[f[1]];
    vals[f[1]] = top.roots()[f[0]];
  }
  Element tau = coordinates_from_embeddings(top, vals);
  Element fp(top.degree() + 1);
  for (int k = 0; k <= top.degree(); ++k) fp(k) = top.polynomial()[k];
  if (!evaluate_at(fp, tau, top).isZero() || tau == top.generator() ||
      apply_automorphism(ext.generator_image, tau, top) != ext.generator_image)
    fail(ErrorKind::kVerification, "relative conjugation is not defined over the order");
  return tau;
}

Element apply_automorphism(const Element& a, const Element& tau, const OrderContext& ctx) {
  return evaluate_at(a, tau, ctx);
}

}  // namespace relthue
