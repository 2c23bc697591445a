#pragma once

// Index form machinery for a relative quartic extension K = M(xi): the
// resolvent F and the quadratic forms Q1, Q2, the parametrisation of
// Q0 = 0, the quartic Thue equations it leads to, the assembled generators
// and a search for absolute generators of small index.

#include "relthue/thue.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace relthue {

/// f(x) = x^4 + a1 x^3 + a2 x^2 + a3 x + a4 over Z_M, alpha = (A + X xi +
/// Y xi^2 + Z xi^3) / d, i0 = I_{K/M}(xi).
struct RelativeQuarticData {
  const OrderContext* base = nullptr;
  std::array<Element, 4> a;  // a1 .. a4
  Integer d{1};
  Integer i0{1};
};

/// Q(X, Y, Z) with coefficients of X^2, XY, XZ, Y^2, YZ, Z^2.
struct TernaryQuadratic {
  std::array<Element, 6> c;
  const Element& xx() const { return c[0]; }
  const Element& zz() const { return c[5]; }
};

Element evaluate(const TernaryQuadratic& q, const std::array<Element, 3>& w, const OrderContext& ctx);
/// B(v, w) = Q(v + w) - Q(v) - Q(w).
Element polar(const TernaryQuadratic& q, const std::array<Element, 3>& v, const std::array<Element, 3>& w,
              const OrderContext& ctx);
TernaryQuadratic combine(const Element& s, const TernaryQuadratic& p, const Element& t, const TernaryQuadratic& q,
                         const OrderContext& ctx);  // s p + t q
/// Q(f_X, f_Y, f_Z) for binary forms f of equal degree.
BinaryForm substitute(const TernaryQuadratic& q, const std::array<BinaryForm, 3>& f, const OrderContext& ctx);

struct IndexForms {
  BinaryForm f;  // F(U, V)
  TernaryQuadratic q1, q2;
};

IndexForms build_forms(const RelativeQuarticData& data);

/// d^(6m) / i0; throws kInput when i0 does not divide d^(6m).
Integer lemma_rhs(const RelativeQuarticData& data);

struct ParametrizationOptions {
  int max_radius = 64;                  // coordinate box radius for the zero search
  std::uint64_t box_cap = 2'000'000;    // points per radius
  std::optional<std::array<Element, 3>> zero;  // skip the search
  std::vector<Element> kappas;          // non-associated kappa values; default {1}
};

/// Q0 = V Q1 - U Q2 vanishes on every solution of Q1 = U, Q2 = V. With a
/// zero w0 of Q0 and p the two free coordinates (P, Q), every zero is
/// proportional to f(P, Q) = -Q0(p) w0 + L(P, Q) p with L(P, Q) = B(w0, p).
struct ParametrizationData {
  Element u, v;
  TernaryQuadratic q0;
  std::array<Element, 3> zero;
  int pivot = 2;                    // coordinate of w0 carrying R
  std::array<int, 2> free{{0, 1}};  // coordinates carrying P and Q
  BinaryForm linear;                // L(P, Q)
  std::array<BinaryForm, 3> f;      // f_X, f_Y, f_Z
  std::vector<Element> kappas;
  std::uint64_t searched = 0;
};

ParametrizationData parametrize(const Element& u, const Element& v, const IndexForms& forms, const OrderContext& m,
                                const ParametrizationOptions& opt = {});

/// Exact check that Q0(f_X, f_Y, f_Z) is the zero form.
bool parametrization_identity(const ParametrizationData& p, const OrderContext& m);

struct QuarticInstances {
  BinaryForm f1, f2;  // Q1(f), Q2(f)
  int chosen = 0;     // 1 or 2
  bool swapped = false;  // P and Q exchanged so the leading coefficient is nonzero
  BinaryForm form;       // the chosen form, after the swap
  Element rhs_factor;    // U or V
  std::vector<std::string> notes;
};

/// Picks the equation F1 = kappa^2 U or F2 = kappa^2 V whose form is
/// separable and totally complex with a nonzero right side. Throws
/// kUnsupported when neither qualifies.
QuarticInstances quartic_instances(const ParametrizationData& p, const IndexForms& forms, const OrderContext& m);

struct GeneratorFamily {
  std::array<Element, 3> xyz;
  Element u, v;  // Q1, Q2 at (X, Y, Z)
  Element p, q;  // parameters that produced it
  Element kappa;
};

struct AssemblyResult {
  std::vector<GeneratorFamily> families;
  std::uint64_t thue_solutions = 0;
  std::uint64_t rejected = 0;
};

struct QuarticSolveResult {
  Element kappa;
  std::vector<NormalizedRhs> rhs;
  ThueResult thue;
};

/// Solves the chosen quartic equation for every kappa and every unit class
/// of the right side modulo fourth powers.
std::vector<QuarticSolveResult> solve_quartic_instances(const QuarticInstances& qi, const ParametrizationData& p,
                                                        const std::vector<Element>& base_units, const OrderContext& m,
                                                        std::uint64_t cap = 50'000'000);

/// Maps (P, Q) back to (X, Y, Z), keeps integral triples with (Q1, Q2)
/// associated to (U, V) and the norm condition |N(F(Q1, Q2))| = d^(6m)/i0,
/// and removes unit multiples.
AssemblyResult assemble_generators(const std::vector<QuarticSolveResult>& solved, const QuarticInstances& qi,
                                   const ParametrizationData& p, const IndexForms& forms,
                                   const RelativeQuarticData& data, std::vector<GeneratorFamily> previous = {});

// ---------------------------------------------------------------------------
// Absolute generators

struct IndexResult {
  bool generates = false;
  Integer index{0};
  Integer discriminant{0};  // of the characteristic polynomial of zeta
};

/// I(zeta) = sqrt(|D(zeta)| / |D_K|), with D(zeta) from the exact
/// characteristic polynomial and cross-checked against det(1, zeta, ...)^2
/// times the polynomial discriminant.
IndexResult absolute_index(const Element& zeta, const OrderContext& k, const Integer& d_k);

struct AbsoluteField {
  const OrderContext* base = nullptr;  // M
  const OrderContext* field = nullptr; // K
  Element mu;                          // image of the generator of M in K
  Element theta;                       // X xi + Y xi^2 + Z xi^3 in K
  Integer discriminant;                // D_K
  std::vector<Element> base_units;     // fundamental units of M
};

struct AbsoluteSearchOptions {
  long long range = 25;
  Integer threshold{1'000'000'000'000'000LL};
  int threads = 1;
};

struct AbsoluteHit {
  std::vector<long long> z;  // coefficients of mu, ..., mu^(m-1)
  ExpVec k;                  // unit exponents
  Element zeta;
  Integer index;
};

struct AbsoluteSearchResult {
  std::uint64_t scanned = 0;
  std::uint64_t exact_checks = 0;  // candidates settled by exact arithmetic
  std::vector<AbsoluteHit> hits;   // sorted by index, then z, k
};

/// zeta = z1 mu + ... + z_{m-1} mu^(m-1) + eps^k theta over the box
/// [-range, range]; z0 and the sign of zeta do not change the index.
/// Double-precision logarithms of the conjugate differences screen the
/// box; a candidate is passed to absolute_index whenever its screened
/// index is within reach of the threshold or a difference is not resolved
/// to six digits.
AbsoluteSearchResult absolute_search(const AbsoluteField& field, const AbsoluteSearchOptions& opt = {});

Element absolute_candidate(const AbsoluteField& field, const std::vector<long long>& z, const ExpVec& k);

}  // namespace relthue
