#pragma once

// Monogenic orders Z[theta] = Z[x]/(f): exact arithmetic on coordinate
// vectors, numeric embeddings, norms and bounded enumeration.

#include "relthue/numeric.hpp"
#include "relthue/poly.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace relthue {

/// Coordinates with respect to 1, theta, ..., theta^(n-1).
using Element = Vec<Integer>;

class OrderContext {
 public:
  OrderContext(IntPoly poly, unsigned digits);

  int degree() const { return n_; }
  const IntPoly& polynomial() const { return poly_; }
  unsigned digits() const { return digits_; }

  /// Embeddings of theta in the canonical root order.
  const std::vector<ComplexR>& roots() const { return roots_; }
  const std::vector<std::complex<double>>& roots_double() const { return roots_d_; }
  int real_roots() const { return real_; }
  bool totally_real() const { return real_ == n_; }
  bool totally_complex() const { return real_ == 0; }

  /// Column e holds the coordinates of theta^e for e = 0 .. 2n-2; this is the
  /// multiplication table in compact form (theta^i * theta^j = column i+j).
  const IntMatrix& powers() const { return powers_; }

  Element zero() const { return Element::Zero(n_); }
  Element one() const { return constant(1); }
  Element constant(const Integer& c) const;
  Element generator() const;
  Element from(const std::vector<long long>& coords) const;

  /// root_k^j at the context precision.
  const ComplexR& root_power(int k, int j) const { return root_pows_[k][j]; }

 private:
  IntPoly poly_;
  int n_;
  unsigned digits_;
  int real_ = 0;
  std::vector<ComplexR> roots_;
  std::vector<std::complex<double>> roots_d_;
  std::vector<std::vector<ComplexR>> root_pows_;
  IntMatrix powers_;
};

Element mul(const Element& a, const Element& b, const OrderContext& ctx);
Element power(const Element& a, unsigned e, const OrderContext& ctx);
/// Matrix of x -> a*x on the power basis (column j = a * theta^j).
IntMatrix multiplication_matrix(const Element& a, const OrderContext& ctx);
/// N(a) = prod of conjugates, as Res(f, a(x)).
Integer norm(const Element& a, const OrderContext& ctx);
/// Characteristic polynomial of a over Q (monic, degree n).
IntPoly characteristic_polynomial(const Element& a, const OrderContext& ctx);

ComplexR embed(const Element& a, const OrderContext& ctx, int k);
std::vector<ComplexR> embeddings(const Element& a, const OrderContext& ctx);
std::complex<double> embed_double(const Element& a, const OrderContext& ctx, int k);

/// Maximum absolute value of the conjugates (the house of a).
Real size(const Element& a, const OrderContext& ctx);

/// Exactly the elements of size <= bound. Throws kCardinalityCap when the
/// coordinate box has more than `cap` points.
std::vector<Element> enumerate_bounded(const OrderContext& ctx, const Real& bound, std::uint64_t cap = 50'000'000);
/// Elements whose k-th conjugate has absolute value <= bounds[k].
std::vector<Element> enumerate_bounded(const OrderContext& ctx, const std::vector<Real>& bounds,
                                       std::uint64_t cap = 50'000'000);

/// Per-coordinate bounds |c_j| <= box[j] valid for every element whose
/// conjugates have absolute value <= bounds[k].
std::vector<Integer> coordinate_box(const OrderContext& ctx, const std::vector<double>& bounds);

/// q with q*b = a when q lies in the order, nothing otherwise.
std::optional<Element> divide_exact(const Element& a, const Element& b, const OrderContext& ctx);

/// Sum of a_k x^k evaluated exactly in the order at an arbitrary element x.
Element evaluate_at(const Element& coeffs, const Element& x, const OrderContext& ctx);

/// Rounds the solution of V c = values (V the Vandermonde matrix of the
/// embeddings) to integer coordinates; `residual` receives the largest
/// rounding distance.
Element coordinates_from_embeddings(const OrderContext& ctx, const std::vector<ComplexR>& values, Real* residual = nullptr);

/// num / den with den > 0: an element of the field that need not be integral.
struct RationalElement {
  Element num;
  Integer den{1};
};

/// a / b as a RationalElement in lowest terms (b nonzero).
RationalElement quotient(const Element& a, const Element& b, const OrderContext& ctx);
ComplexR embed(const RationalElement& a, const OrderContext& ctx, int k);

/// A subfield Q(beta) -> Q(theta) given by the image of beta in the larger
/// order, together with the induced pairing of embeddings.
struct Extension {
  const OrderContext* base = nullptr;
  const OrderContext* top = nullptr;
  Element generator_image;
  std::vector<int> pairing;              // top root -> base root
  std::vector<std::vector<int>> fibres;  // base root -> top roots, ascending
  int relative_degree() const { return top->degree() / base->degree(); }
};

/// Builds the pairing by nearest-root matching and checks exactly that the
/// image satisfies the base polynomial. Throws kVerification on mismatch and
/// kPrecision on ambiguous matches.
Extension make_extension(const OrderContext& base, const OrderContext& top, const Element& image);

Element lift(const Element& a, const Extension& ext);
/// Inverse of lift for elements that lie in the subfield; nothing otherwise.
std::optional<Element> descend(const Element& a, const Extension& ext);

/// For a relative quadratic extension: the image of theta under the
/// nontrivial automorphism over the base, found by rounding and verified
/// exactly. Throws kVerification when no such automorphism exists in the order.
Element relative_conjugation(const Extension& ext);

/// Applies the automorphism theta -> tau.
Element apply_automorphism(const Element& a, const Element& tau, const OrderContext& ctx);

}  // namespace relthue
