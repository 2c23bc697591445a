#pragma once

// The solver pipeline driven by a field spec: verification of the input
// data, the cubic resolvent and its exponent bounds, the unit equation,
// the quartic Thue equations and generator assembly, and the search for
// absolute generators of small index. Each stage adds a report section
// and, when a checkpoint path is set, stores what later stages need.

#include "relthue/checkpoint.hpp"
#include "relthue/fieldspec.hpp"
#include "relthue/indexform.hpp"
#include "relthue/report.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace relthue {

enum class Stage { kVerify, kReduce, kUnitEquation, kGenerators, kAbsolute };

/// verify, reduce (or bounds), unit-eq, thue (or generators), abs-search (or all).
Stage parse_stage(const std::string& name);

struct PipelineOptions {
  std::optional<unsigned> precision;
  std::optional<std::vector<double>> schedule;
  std::optional<int> threads;
  std::optional<std::uint64_t> cap;
  std::optional<std::vector<std::uint64_t>> sieve_primes;
  Stage stage = Stage::kAbsolute;  // last stage run by solve_all
  std::optional<long long> bound;  // reduced exponent bound for the unit equation
  std::optional<long long> range;
  std::optional<Integer> threshold;
  std::string checkpoint;  // empty: no checkpoint file
  bool resume = false;     // reuse saved enumeration results
};

/// Threads from the option, else RELTHUE_THREADS, else the field spec.
int resolve_threads(const PipelineOptions& opt, const FieldSpec& spec);

/// Orders, unit systems and forms built from a spec. Not copyable: the
/// extensions point into the contexts.
struct Problem {
  FieldSpec spec;
  unsigned precision = 0;
  std::unique_ptr<OrderContext> m, g, k;
  std::vector<Element> base_units;
  std::optional<UnitSystem> units;   // M inside G
  std::optional<Extension> k_ext;    // M inside K
  Element xi_k;                      // relative generator in K
  RelativeQuarticData quartic;
  IndexForms forms;
  std::vector<DeltaPair> deltas;
  std::vector<Element> kappas;
  std::optional<std::array<Element, 3>> zero;

  Problem() = default;
  Problem(const Problem&) = delete;
  Problem& operator=(const Problem&) = delete;
};

struct VerifyCheck {
  std::string name;
  bool passed = true;
  std::string detail;
};

/// Builds the contexts and runs every consistency check. The checks are
/// returned; construction errors propagate.
std::unique_ptr<Problem> build_problem(const FieldSpec& spec, unsigned precision, std::vector<VerifyCheck>* checks);

/// theta = X xi + Y xi^2 + Z xi^3 as an element of the absolute order.
Element absolute_theta(const Problem& p, const std::array<Element, 3>& xyz);

class Pipeline {
 public:
  Pipeline(FieldSpec spec, PipelineOptions opt, std::string command = "solve-all");

  Report& report() { return report_; }
  const Problem& problem() const { return *problem_; }

  /// Throws kVerification after recording the failed checks.
  void verify();
  void resolvent();
  void bounds();
  void unit_equation();
  void generators();
  void absolute_search();

  /// Runs the stages up to opt.stage.
  void solve_all();

  const std::optional<ResolventEquation>& resolvent_equation() const { return resolvent_; }
  const std::optional<ResolventResult>& resolvent_result() const { return result_; }
  /// Baker bounds and reduction runs from the bounds stage.
  const std::optional<ResolventResult>& bounds_result() const { return bounds_result_; }
  const std::vector<UVSolution>& uv() const { return uv_; }
  const std::vector<GeneratorFamily>& families() const { return families_; }
  const std::vector<AbsoluteSearchResult>& searches() const { return searches_; }

 private:
  ResolventOptions resolvent_options() const;
  void save_checkpoint();
  Checkpoint& checkpoint();

  FieldSpec spec_;
  PipelineOptions opt_;
  Report report_;
  std::unique_ptr<Problem> problem_;
  bool verified_ = false;
  std::optional<Checkpoint> checkpoint_;

  std::optional<ResolventEquation> resolvent_;
  std::optional<ResolventResult> bounds_result_;
  std::optional<ResolventResult> result_;
  bool have_uv_ = false;
  std::vector<UVSolution> uv_;
  bool have_families_ = false;
  std::vector<GeneratorFamily> families_;
  std::vector<AbsoluteSearchResult> searches_;
};

// Checkpoint encoding of the stage results.
IntRecord encode_elements(const std::vector<Element>& v);
std::vector<Element> decode_elements(const IntRecord& r, const OrderContext& ctx);
void store_schedule(Checkpoint& ck, const std::string& prefix, const ScheduleResult& s);
ScheduleResult load_schedule(const Checkpoint& ck, const std::string& prefix);

// Report sections.
Json bounds_json(const ExponentBounds& b);
Json schedule_json(const ScheduleResult& s);
Json absolute_unit_json(const AbsoluteResult& r);

}  // namespace relthue
