#pragma once

// The cubic resolvent F(U, V) = eps * nu over M and relative Thue equations
// N(X - xi Y) = nu in totally complex extensions of a totally real M.

#include "relthue/unitsolve.hpp"

#include <optional>
#include <vector>

namespace relthue {

/// Binary form over Z_M: coefficient t belongs to X^(k-t) Y^t.
using BinaryForm = std::vector<Element>;

Element evaluate_form(const BinaryForm& f, const Element& x, const Element& y, const OrderContext& ctx);
BinaryForm multiply_forms(const BinaryForm& a, const BinaryForm& b, const OrderContext& ctx);
BinaryForm add_forms(const BinaryForm& a, const BinaryForm& b);
BinaryForm scale_form(const BinaryForm& a, const Element& c, const OrderContext& ctx);
bool is_zero_form(const BinaryForm& f);

/// True when some unit e of M has b = e * a coordinatewise; `ratio`
/// receives e.
bool associated(const std::vector<Element>& a, const std::vector<Element>& b, const OrderContext& ctx,
                Element* ratio = nullptr);

// ---------------------------------------------------------------------------
// Cubic resolvent

enum class ResolventCase { kA, kB, kC };
const char* to_string(ResolventCase c);

struct ResolventEquation {
  const OrderContext* base = nullptr;
  BinaryForm form;           // monic cubic
  Integer rhs_norm{1};       // N(nu)
  ResolventCase tag = ResolventCase::kB;
  std::vector<Element> roots;  // lambda in Z_M with F(lambda, 1) = 0
  BinaryForm quadratic;        // Case C: F = (U - lambda1 V) * quadratic
};

/// Locates the roots of F(x, 1) in Z_M by rounding the numeric roots at
/// every combination of conjugates and checking exactly.
ResolventEquation classify_resolvent(const BinaryForm& form, const OrderContext& m, const Integer& rhs_norm = 1);

/// Representatives (delta_m, delta_g) with U - lambda1 V = delta_m nu_m and
/// U - rho V = delta_g nu_g.
struct DeltaPair {
  Element delta_m;
  Element delta_g;
};

/// rho in G with rho^2 + q1 rho + q2 = 0 for the quadratic factor, found by
/// rounding. Throws kVerification when G does not split the factor.
Element split_quadratic(const ResolventEquation& res, const UnitSystem& us);
CaseCData build_case_c(const ResolventEquation& res, const UnitSystem& us, const DeltaPair& delta);

struct ResolventOptions {
  const UnitSystem* units = nullptr;  // Case C: M inside G with unit data
  std::vector<Element> base_units;    // Case A: fundamental units of M
  std::vector<DeltaPair> deltas;      // Case C; default {(1, 1)} when rhs_norm = +-1
  std::vector<std::vector<Element>> deltas_a;  // Case A triples; default {(1, 1, 1)}
  BoundOptions bounds;
  ScheduleOptions schedule;
  std::optional<long long> e_r;  // skip Baker and reduction with this bound
  /// Case C: schedule results of an earlier run, one per delta pair; the
  /// enumeration is skipped and only the verification is repeated.
  std::vector<ScheduleResult> resume;
  bool bounds_only = false;      // stop after the reduction
};

struct CaseCRun {
  CaseCData data;
  UnitEquation equation;
  std::optional<ExponentBounds> bounds;
  long long e_r = 0;
  std::optional<ScheduleResult> schedule;
  std::vector<RecoveredUV> recovered;
  std::size_t rejected = 0;
};

struct CaseARun {
  std::vector<Element> delta;
  AbsoluteUnitEquation equation;
  AbsoluteResult result;
  std::size_t rejected = 0;
};

struct UVSolution {
  Element u, v;
};

struct ResolventResult {
  ResolventCase tag = ResolventCase::kB;
  std::vector<CaseCRun> case_c;
  std::vector<CaseARun> case_a;
  std::vector<UVSolution> solutions;  // one per unit orbit, sign fixed so N(F(U, V)) = rhs when m is odd
};

/// Throws kUnsupported with "Case B data required" for Case B.
ResolventResult solve_resolvent(const ResolventEquation& res, const ResolventOptions& opt);

// ---------------------------------------------------------------------------
// Relative Thue equations in totally complex extensions

struct ThueAnalysis {
  bool separable = false;
  bool totally_complex = false;
  std::vector<std::vector<ComplexR>> roots;  // roots of F^(i)(x, 1) per conjugate i
  Real c0;                                   // 1 / min |Im xi^(ij)|
  Real house_xi;                             // max |xi^(ij)|
};

/// Needs a totally real M and a nonzero leading coefficient.
ThueAnalysis analyze_thue_form(const BinaryForm& form, const OrderContext& m);

struct QuarticThueInstance {
  const OrderContext* base = nullptr;
  BinaryForm form;         // F(X, Y) = c0 prod (X - xi_j Y), c0 != 0
  std::vector<Element> rhs;
};

struct ThueSolution {
  Element x, y;
  std::size_t rhs_index = 0;
};

struct ThueBound {
  Real theorem;                     // |nu/c0|^(1/k) (1 + c0 |xi|)
  std::vector<Real> x_bounds, y_bounds;  // per conjugate, never above `theorem`
};

ThueBound thue_bound(const ThueAnalysis& an, const BinaryForm& form, const Element& rhs, const OrderContext& m);

struct ThueResult {
  ThueAnalysis analysis;
  std::vector<ThueBound> bounds;  // per rhs
  std::uint64_t pairs_tested = 0;
  std::vector<ThueSolution> solutions;
};

/// All (X, Y) in Z_M^2 with F(X, Y) = nu for each nu in the list, by
/// enumerating the boxes given by the small-solution bound and testing
/// exactly. Throws kInput when the form is not separable and totally complex.
ThueResult quartic_small_solutions(const QuarticThueInstance& inst, std::uint64_t cap = 50'000'000);

struct NormalizedRhs {
  int sign = 1;
  ExpVec ell;  // exponents in [-1, 2]
  Element value;
};

/// The 2 * 4^r values +-eps_1^l_1 ... eps_r^l_r with l_k in [-1, 2].
std::vector<NormalizedRhs> unit_normalize_rhs(const std::vector<Element>& units, const OrderContext& m);

/// prod units[k]^e_k exactly in M.
Element unit_power_product(const std::vector<Element>& units, const ExpVec& e, const OrderContext& m);

}  // namespace relthue
