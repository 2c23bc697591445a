#pragma once

// Resolution of two-term unit equations. The relative form
//   A W + sigma(A W) = 1,  W a unit of G,
// arises from a cubic resolvent with one root in M; the absolute form
//   alpha X + beta Y = 1,  X, Y units of M,
// from a resolvent that splits over M.

#include "relthue/baker.hpp"
#include "relthue/lattice.hpp"
#include "relthue/sieve.hpp"
#include "relthue/units.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace relthue {

/// Factorisation data of F(U, V) = (U - lambda1 V)(U - rho V)(U - rho' V)
/// with U - lambda1 V = delta_m nu_m and U - rho V = delta_g nu_g.
struct CaseCData {
  Element lambda1;  // M coordinates
  Element rho;      // G coordinates
  Element delta_m;  // M coordinates
  Element delta_g;  // G coordinates
};

struct UnitEquation {
  const UnitSystem* units = nullptr;
  RationalElement a;  // A in G
};

/// A = (lambda1 - rho) sigma(delta_g) / ((sigma(rho) - rho) delta_m).
/// Throws kInput when sigma(rho) = rho.
UnitEquation build_unit_equation(const UnitSystem& us, const CaseCData& data);

/// Numeric data of a unit equation at two precisions: `digits` for the
/// enumeration and the field precision for verification.
struct EquationNumerics {
  unsigned digits = 0;
  unsigned high_digits = 0;
  RealMatrix logs, logs_high;  // log|u_k^(ij)|, rows 2i+j
  RealMatrix args, args_high;
  RealVector log_a, log_a_high;
  RealVector arg_a, arg_a_high;
  ExpMatrix relative_part;  // W: columns complete the fixed sublattice to a basis
  ExpMatrix fixed_part;     // K: basis of the fixed sublattice
  ExpMatrix coordinates;    // inverse of [W | K]
  int m = 0;
  int rank() const { return static_cast<int>(logs.cols()); }
};
EquationNumerics make_numerics(const UnitEquation& ueq, unsigned digits);
/// Same data with the enumeration precision changed.
EquationNumerics with_digits(const EquationNumerics& num, unsigned digits);

// ---------------------------------------------------------------------------
// Bounds

struct RowBound {
  int row = 0;       // conjugate where A W is small
  Real log_factor;   // log(2|A^(row)|)
  BakerBound baker;
  ReductionRun reduction;
};

struct BoundOptions {
  ReductionOptions reduction;
  bool reduce = true;
  unsigned digits = 60;
};

struct ExponentBounds {
  C1Result c1;
  Integer e_b;     // max over rows of the Baker bounds
  Integer window;  // below this E the estimate |log x| <= 2|x - 1| may not apply
  Integer e_r;     // max(window, reduced bounds)
  std::vector<RowBound> rows;
};

ExponentBounds bound_exponents(const UnitEquation& ueq, const BoundOptions& opt = {});

// ---------------------------------------------------------------------------
// Enumeration

/// Case I at row (i, j0): the 2m conjugate rows weighted 1/log S and the
/// row (i, j0) again weighted s/2; radius^2 2m + 1. With final = true the
/// extra row is dropped (radius^2 2m).
EllipsoidProblem<Real> case1_ellipsoid(const EquationNumerics& num, const Real& log_s_big, const Real& s_small, int row,
                                       long long e_r, bool final = false);

/// Case II at base conjugate i, in the coordinates u of v = W u + K t: the m
/// quotient rows weighted 1/(2 log S) and the quotient at i weighted s/2;
/// radius^2 m + 1 (m when final).
EllipsoidProblem<Real> case2_ellipsoid(const EquationNumerics& num, const Real& log_s_big, const Real& s_small, int i,
                                       long long e_r, bool final = false);

/// log S with every |A W^(ij)| in [1/S, S] for |v| <= E_R.
Real initial_log_s(const EquationNumerics& num, long long e_r);

struct StepCounts {
  double log10_big = 0;    // S
  double log10_small = 0;  // s (equal to S on the final step)
  bool final = false;
  std::vector<std::uint64_t> case1;  // per row (i, j0)
  std::vector<std::uint64_t> case2;  // per base conjugate i
  std::uint64_t case1_total = 0;
  std::uint64_t case2_total = 0;
  std::uint64_t nodes = 0;
};

struct SieveStats {
  std::uint64_t tested = 0;             // (vector, sign) pairs
  std::uint64_t passed = 0;
  std::uint64_t audited = 0;            // rejected pairs re-examined without the sieve
  std::uint64_t false_rejections = 0;
  std::uint64_t unaudited = 0;          // residual u beyond the audit precision
  std::vector<std::uint64_t> rejected_first;  // by the first failing prime
};

struct UnitSolution {
  ExpVec v;
  int sign = 1;
  bool exact = true;
};

struct ScheduleOptions {
  std::vector<double> log10_small;  // s values; empty: 10^20 or sqrt(S), then s = sqrt(S) while S > 100
  std::vector<std::uint64_t> sieve_primes;
  unsigned digits = 100;
  std::uint64_t cap = 10'000'000;
  bool audit = true;
};

struct ScheduleResult {
  long long e_r = 0;
  double log10_initial = 0;
  std::vector<StepCounts> steps;
  std::uint64_t residual_triples = 0;   // Case II hits over all steps
  std::uint64_t residual_distinct = 0;  // distinct u scanned
  std::uint64_t residual_scanned = 0;   // (u, t) pairs examined
  std::uint64_t candidates = 0;         // distinct full exponent vectors from the ellipsoids
  SieveStats sieve;
  std::vector<UnitSolution> solutions;  // sorted by (v, sign)
  std::vector<ExpVec> candidate_set;    // Case I points, sorted
  std::vector<ExpVec> residual_set;     // Case II points u, sorted
};

/// Throws kInput when 2/s >= 0.795 for some step or the s values do not
/// decrease.
ScheduleResult run_schedule(const UnitEquation& ueq, long long e_r, const ScheduleOptions& opt = {});

/// Verification part of run_schedule on the step table and point sets of
/// an earlier run (for instance read back from a checkpoint).
ScheduleResult resume_schedule(const UnitEquation& ueq, long long e_r, const ScheduleOptions& opt,
                               const ScheduleResult& saved);

/// Exact test of A W + sigma(A W) = 1 for W = sign * prod u^v. Empty when
/// the power product exceeds the coordinate cap.
std::optional<bool> verify_exact(const UnitEquation& ueq, const ExpVec& v, int sign);

/// Numeric test at the high precision; empty when the magnitudes are too
/// large to decide.
std::optional<bool> verify_numeric(const UnitEquation& ueq, const EquationNumerics& num, const ExpVec& v, int sign);

/// Every v in the box [-e, e]^R with both signs, tested exactly.
std::vector<UnitSolution> brute_force_solutions(const UnitEquation& ueq, long long e);

// ---------------------------------------------------------------------------
// Back to the resolvent

struct RecoveredUV {
  Element u, v;  // M coordinates
  std::size_t solution = 0;
};

/// V = (delta_m - delta_g sigma(W)) / (rho - lambda1), U = delta_m + lambda1 V,
/// kept only when both lie in Z_M.
std::vector<RecoveredUV> recover_uv(const UnitSystem& us, const CaseCData& data,
                                    const std::vector<UnitSolution>& solutions, std::size_t* rejected = nullptr);

// ---------------------------------------------------------------------------
// alpha X + beta Y = 1 over M

struct AbsoluteUnitEquation {
  const OrderContext* field = nullptr;
  std::vector<Element> units;  // fundamental units of M
  RationalElement alpha, beta;
};

struct AbsoluteSolution {
  ExpVec a, b;  // X = sx prod eps^a, Y = sy prod eps^b
  int sx = 1, sy = 1;
};

struct AbsoluteResult {
  std::optional<C1Result> c1;
  Integer e_b, e_r, window;
  std::vector<RowBound> rows;
  std::uint64_t scanned = 0;
  std::vector<AbsoluteSolution> solutions;
};

/// Baker bound, reduction, then an exact scan over X in [-E_R, E_R]^r with
/// Y = (1 - alpha X) / beta tested for being a unit.
AbsoluteResult solve_absolute_unit_equation(const AbsoluteUnitEquation& eq, const BoundOptions& opt = {});

}  // namespace relthue
