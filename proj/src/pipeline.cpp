#include "relthue/pipeline.hpp"

#include "relthue/errors.hpp"

#include <chrono>
#include <cstdlib>
#include <limits>

namespace relthue {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Element element_of(const Coordinates& c) {
  Element e(static_cast<Eigen::Index>(c.size()));
  for (std::size_t i = 0; i < c.size(); ++i) e(static_cast<Eigen::Index>(i)) = c[i];
  return e;
}

std::int64_t narrow(const Integer& x) {
  static const Integer lo = std::numeric_limits<std::int64_t>::min();
  static const Integer hi = std::numeric_limits<std::int64_t>::max();
  if (x < lo || x > hi) fail(ErrorKind::kCardinalityCap, "coordinate does not fit the checkpoint format");
  return x.convert_to<std::int64_t>();
}

std::vector<std::int64_t> flatten(const std::vector<Element>& parts) {
  std::vector<std::int64_t> v;
  for (const auto& e : parts)
    for (Eigen::Index i = 0; i < e.size(); ++i) v.push_back(narrow(e(i)));
  return v;
}

std::vector<Element> split(const std::vector<std::int64_t>& v, int n) {
  if (n <= 0 || v.size() % n != 0) fail(ErrorKind::kParse, "checkpoint record has the wrong length");
  std::vector<Element> out;
  for (std::size_t s = 0; s < v.size(); s += n) {
    Element e(n);
    for (int i = 0; i < n; ++i) e(i) = Integer(v[s + i]);
    out.push_back(std::move(e));
  }
  return out;
}

IntRecord encode_exponents(const std::vector<ExpVec>& vs) {
  IntRecord r;
  for (const auto& v : vs) r.emplace_back(v.data(), v.data() + v.size());
  return r;
}

std::vector<ExpVec> decode_exponents(const IntRecord& r) {
  std::vector<ExpVec> out;
  for (const auto& v : r) {
    ExpVec e(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) e(static_cast<Eigen::Index>(i)) = v[i];
    out.push_back(std::move(e));
  }
  return out;
}

Json counts_json(const std::vector<std::uint64_t>& v) { return Json(v); }

Json quadratic_json(const TernaryQuadratic& q) {
  static const char* names[6] = {"XX", "XY", "XZ", "YY", "YZ", "ZZ"};
  Json out = Json::object();
  for (int t = 0; t < 6; ++t) out[names[t]] = to_json(q.c[t]);
  return out;
}

Json form_json(const BinaryForm& f) { return to_json(std::vector<Element>(f.begin(), f.end())); }

Json xyz_json(const std::array<Element, 3>& w) { return Json{to_json(w[0]), to_json(w[1]), to_json(w[2])}; }

}  // namespace

Stage parse_stage(const std::string& name) {
  if (name == "verify") return Stage::kVerify;
  if (name == "reduce" || name == "bounds") return Stage::kReduce;
  if (name == "unit-eq") return Stage::kUnitEquation;
  if (name == "thue" || name == "generators") return Stage::kGenerators;
  if (name == "abs-search" || name == "all") return Stage::kAbsolute;
  fail(ErrorKind::kInput, "unknown stage '" + name + "'");
}

int resolve_threads(const PipelineOptions& opt, const FieldSpec& spec) {
  if (opt.threads) return std::max(1, *opt.threads);
  if (const char* env = std::getenv("RELTHUE_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  return std::max(1, spec.solver.threads);
}

// ---------------------------------------------------------------------------
// Problem construction and checks

std::unique_ptr<Problem> build_problem(const FieldSpec& spec, unsigned precision, std::vector<VerifyCheck>* checks) {
  auto p = std::make_unique<Problem>();
  p->spec = spec;
  p->precision = precision;
  std::vector<VerifyCheck> local;
  std::vector<VerifyCheck>& out = checks ? *checks : local;
  auto check = [&](std::string name, bool ok, std::string detail = "") {
    out.push_back({std::move(name), ok, std::move(detail)});
    return ok;
  };

  p->m = std::make_unique<OrderContext>(spec.base_polynomial, precision);
  const OrderContext& m = *p->m;
  const int n = m.degree();
  check("base field is totally real", m.totally_real(), to_string(spec.base_polynomial));

  for (const auto& c : spec.base_units) p->base_units.push_back(element_of(c));
  bool units_ok = true;
  for (std::size_t k = 0; k < p->base_units.size(); ++k) {
    const Integer nk = norm(p->base_units[k], m);
    units_ok &= check("base unit " + std::to_string(k + 1) + " has norm +-1", nk == 1 || nk == -1, "norm " + nk.str());
  }
  if (units_ok && !p->base_units.empty()) {
    PrecisionGuard guard(60);
    RealMatrix logs(n, static_cast<Eigen::Index>(p->base_units.size()));
    for (std::size_t k = 0; k < p->base_units.size(); ++k)
      for (int i = 0; i < n; ++i) logs(i, static_cast<Eigen::Index>(k)) = log(abs(embed(p->base_units[k], m, i)));
    const int rank = numeric_rank(logs, Real("1e-30"));
    check("base units are independent", rank == static_cast<int>(p->base_units.size()),
          "rank " + std::to_string(rank));
  }

  if (spec.quadratic) {
    const auto& q = *spec.quadratic;
    p->g = std::make_unique<OrderContext>(q.polynomial, precision);
    try {
      Extension ext = make_extension(m, *p->g, element_of(q.base_image));
      check("quadratic extension contains the base field", true, to_string(q.polynomial));
      std::vector<Element> units;
      for (const auto& u : q.units) units.push_back(element_of(u));
      ExpMatrix conj(static_cast<Eigen::Index>(q.units.size()), static_cast<Eigen::Index>(q.units.size()));
      for (std::size_t r = 0; r < q.conjugation.size(); ++r)
        for (std::size_t c = 0; c < q.conjugation[r].size(); ++c)
          conj(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = q.conjugation[r][c];
      p->units = make_unit_system(std::move(ext), p->base_units, std::move(units), conj, q.signs);
      const UnitCheck uc = verify_unit_system(*p->units);
      std::string detail;
      for (const auto& f : uc.failures) detail += (detail.empty() ? "" : "; ") + f;
      check("unit system and conjugation action", uc.ok, detail);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kVerification && e.kind() != ErrorKind::kPrecision) throw;
      check("quadratic extension data", false, e.what());
      p->units.reset();
    }
  }

  p->quartic.base = p->m.get();
  for (int t = 0; t < 4; ++t) p->quartic.a[t] = element_of(spec.quartic[t]);
  p->quartic.d = spec.d;
  p->quartic.i0 = spec.i0;
  p->forms = build_forms(p->quartic);
  check("resolvent form is nonzero", !is_zero_form(p->forms.f));
  try {
    const Integer rhs = lemma_rhs(p->quartic);
    check("i0 divides d^(6m)", true, "d^(6m)/i0 = " + rhs.str());
  } catch (const Error& e) {
    check("i0 divides d^(6m)", false, e.what());
  }

  if (spec.absolute) {
    const auto& a = *spec.absolute;
    p->k = std::make_unique<OrderContext>(a.polynomial, precision);
    const OrderContext& k = *p->k;
    check("absolute field is totally complex", k.totally_complex(), to_string(a.polynomial));
    try {
      p->k_ext = make_extension(m, k, element_of(a.base_image));
      p->xi_k = element_of(a.generator_image);
      // xi^4 + a1 xi^3 + a2 xi^2 + a3 xi + a4 = 0 in K.
      Element acc = power(p->xi_k, 4, k);
      for (int t = 0; t < 4; ++t) acc += mul(lift(p->quartic.a[t], *p->k_ext), power(p->xi_k, 3 - t, k), k);
      check("generator image satisfies the relative quartic", acc.isZero());
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kVerification && e.kind() != ErrorKind::kPrecision) throw;
      check("absolute field contains the base field", false, e.what());
      p->k_ext.reset();
    }
    const Integer disc = discriminant(a.polynomial);
    bool square = false;
    std::string detail = "disc " + disc.str();
    if (a.discriminant != 0 && disc % a.discriminant == 0) {
      const Integer q = disc / a.discriminant;
      square = q > 0 && exact_sqrt(q) >= 0;
      if (square) detail += ", index of the defining polynomial " + exact_sqrt(q).str();
    }
    check("D_K divides the polynomial discriminant with square quotient", square, detail);
  }

  for (const auto& d : spec.deltas) p->deltas.push_back({element_of(d.m), element_of(d.g)});
  for (const auto& c : spec.kappas) p->kappas.push_back(element_of(c));
  if (spec.zero) p->zero = std::array<Element, 3>{element_of((*spec.zero)[0]), element_of((*spec.zero)[1]),
                                                  element_of((*spec.zero)[2])};
  return p;
}

Element absolute_theta(const Problem& p, const std::array<Element, 3>& xyz) {
  if (!p.k || !p.k_ext) fail(ErrorKind::kInput, "the field spec has no absolute field data");
  const OrderContext& k = *p.k;
  Element theta = k.zero();
  for (int t = 0; t < 3; ++t) theta += mul(lift(xyz[t], *p.k_ext), power(p.xi_k, t + 1, k), k);
  return theta;
}

// ---------------------------------------------------------------------------
// Checkpoint encoding

IntRecord encode_elements(const std::vector<Element>& v) {
  IntRecord r;
  for (const auto& e : v) r.push_back(flatten({e}));
  return r;
}

std::vector<Element> decode_elements(const IntRecord& r, const OrderContext& ctx) {
  std::vector<Element> out;
  for (const auto& v : r) {
    auto parts = split(v, ctx.degree());
    if (parts.size() != 1) fail(ErrorKind::kParse, "checkpoint element has the wrong length");
    out.push_back(parts[0]);
  }
  return out;
}

void store_schedule(Checkpoint& ck, const std::string& prefix, const ScheduleResult& s) {
  ck.put(prefix + "meta", {{s.e_r, double_bits(s.log10_initial), static_cast<std::int64_t>(s.residual_triples)}});
  IntRecord steps;
  for (const auto& st : s.steps) {
    std::vector<std::int64_t> v{double_bits(st.log10_big), double_bits(st.log10_small), st.final ? 1 : 0,
                                static_cast<std::int64_t>(st.nodes), static_cast<std::int64_t>(st.case1_total),
                                static_cast<std::int64_t>(st.case2_total), static_cast<std::int64_t>(st.case1.size())};
    for (auto c : st.case1) v.push_back(static_cast<std::int64_t>(c));
    v.push_back(static_cast<std::int64_t>(st.case2.size()));
    for (auto c : st.case2) v.push_back(static_cast<std::int64_t>(c));
    steps.push_back(std::move(v));
  }
  ck.put(prefix + "steps", std::move(steps));
  ck.put(prefix + "candidates", encode_exponents(s.candidate_set));
  ck.put(prefix + "residual", encode_exponents(s.residual_set));
  IntRecord sols;
  for (const auto& u : s.solutions) {
    std::vector<std::int64_t> v(u.v.data(), u.v.data() + u.v.size());
    v.push_back(u.sign);
    v.push_back(u.exact ? 1 : 0);
    sols.push_back(std::move(v));
  }
  ck.put(prefix + "solutions", std::move(sols));
}

ScheduleResult load_schedule(const Checkpoint& ck, const std::string& prefix) {
  ScheduleResult s;
  const auto& meta = ck.get(prefix + "meta");
  if (meta.size() != 1 || meta[0].size() != 3) fail(ErrorKind::kParse, "malformed schedule record");
  s.e_r = meta[0][0];
  s.log10_initial = bits_double(meta[0][1]);
  s.residual_triples = static_cast<std::uint64_t>(meta[0][2]);
  for (const auto& v : ck.get(prefix + "steps")) {
    auto bad = [] { fail(ErrorKind::kParse, "malformed step record"); };
    if (v.size() < 8) bad();
    StepCounts st;
    st.log10_big = bits_double(v[0]);
    st.log10_small = bits_double(v[1]);
    st.final = v[2] != 0;
    st.nodes = static_cast<std::uint64_t>(v[3]);
    st.case1_total = static_cast<std::uint64_t>(v[4]);
    st.case2_total = static_cast<std::uint64_t>(v[5]);
    std::size_t pos = 6;
    const auto n1 = static_cast<std::size_t>(v[pos++]);
    if (pos + n1 >= v.size()) bad();
    for (std::size_t i = 0; i < n1; ++i) st.case1.push_back(static_cast<std::uint64_t>(v[pos++]));
    const auto n2 = static_cast<std::size_t>(v[pos++]);
    if (pos + n2 != v.size()) bad();
    for (std::size_t i = 0; i < n2; ++i) st.case2.push_back(static_cast<std::uint64_t>(v[pos++]));
    s.steps.push_back(std::move(st));
  }
  s.candidate_set = decode_exponents(ck.get(prefix + "candidates"));
  s.residual_set = decode_exponents(ck.get(prefix + "residual"));
  return s;
}

// ---------------------------------------------------------------------------
// Report sections

Json bounds_json(const ExponentBounds& b) {
  Json rows = Json::array();
  for (const auto& r : b.rows) {
    Json red = Json::array();
    for (const auto& st : r.reduction.attempts)
      red.push_back({{"d0", to_json(st.d0)},
                     {"log10_h", st.log10_h},
                     {"digits", st.digits},
                     {"passed", st.passed},
                     {"log10_b1", rounded(st.log10_b1)},
                     {"log10_margin", rounded(st.log10_margin)},
                     {"new_bound", st.passed ? to_json(st.new_bound) : Json()}});
    rows.push_back({{"row", r.row},
                    {"log_factor", scientific(r.log_factor)},
                    {"baker",
                     {{"backend", r.baker.backend},
                      {"constant", scientific(r.baker.constant)},
                      {"bound", to_json(r.baker.bound)},
                      {"slack", scientific(r.baker.slack_at_bound, 6)}}},
                    {"reduction", red},
                    {"rounds", r.reduction.steps.size()},
                    {"reduced", to_json(r.reduction.bound)}});
  }
  return {{"c1", scientific(b.c1.c1)},
          {"c1_rows", b.c1.rows},
          {"e_b", to_json(b.e_b)},
          {"window", to_json(b.window)},
          {"e_r", to_json(b.e_r)},
          {"rows", rows}};
}

Json schedule_json(const ScheduleResult& s) {
  Json steps = Json::array();
  for (const auto& st : s.steps)
    steps.push_back({{"log10_S", st.log10_big},
                     {"log10_s", st.log10_small},
                     {"final", st.final},
                     {"case1", counts_json(st.case1)},
                     {"case2", counts_json(st.case2)},
                     {"case1_total", st.case1_total},
                     {"case2_total", st.case2_total},
                     {"nodes", st.nodes}});
  Json sols = Json::array();
  for (const auto& u : s.solutions) sols.push_back({{"v", to_json(u.v)}, {"sign", u.sign}, {"exact", u.exact}});
  const auto& sv = s.sieve;
  return {{"e_r", s.e_r},
          {"log10_S0", s.log10_initial},
          {"steps", steps},
          {"candidates", s.candidates},
          {"residual_triples", s.residual_triples},
          {"residual_distinct", s.residual_distinct},
          {"residual_scanned", s.residual_scanned},
          {"sieve",
           {{"tested", sv.tested},
            {"passed", sv.passed},
            {"pass_rate", sv.tested ? rounded(static_cast<double>(sv.passed) / static_cast<double>(sv.tested)) : 0.0},
            {"rejected_by_prime", sv.rejected_first},
            {"audited", sv.audited},
            {"false_rejections", sv.false_rejections},
            {"unaudited", sv.unaudited}}},
          {"solutions", sols}};
}

Json absolute_unit_json(const AbsoluteResult& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    ExponentBounds b;
    b.rows = {row};
    if (r.c1) b.c1 = *r.c1;
    rows.push_back(bounds_json(b)["rows"][0]);
  }
  Json sols = Json::array();
  for (const auto& s : r.solutions)
    sols.push_back({{"a", to_json(s.a)}, {"b", to_json(s.b)}, {"sx", s.sx}, {"sy", s.sy}});
  return {{"c1", r.c1 ? Json(scientific(r.c1->c1)) : Json()},
          {"e_b", to_json(r.e_b)},
          {"window", to_json(r.window)},
          {"e_r", to_json(r.e_r)},
          {"rows", rows},
          {"scanned", r.scanned},
          {"solutions", sols}};
}

// ---------------------------------------------------------------------------
// Pipeline

Pipeline::Pipeline(FieldSpec spec, PipelineOptions opt, std::string command)
    : spec_(std::move(spec)), opt_(std::move(opt)), report_(std::move(command)) {
  Json input;
  input["precision"] = opt_.precision.value_or(spec_.precision);
  input["base_polynomial"] = to_string(spec_.base_polynomial);
  if (spec_.quadratic) input["quadratic_polynomial"] = to_string(spec_.quadratic->polynomial);
  Json a = Json::array();
  for (const auto& c : spec_.quartic) a.push_back(to_json(element_of(c)));
  input["quartic"] = {{"a1..a4", a}, {"d", to_json(spec_.d)}, {"i0", to_json(spec_.i0)}};
  if (spec_.absolute) input["absolute_polynomial"] = to_string(spec_.absolute->polynomial);
  const auto& sched = opt_.schedule ? *opt_.schedule : spec_.solver.schedule;
  input["schedule"] = sched;
  input["sieve_primes"] = opt_.sieve_primes ? *opt_.sieve_primes : spec_.solver.sieve_primes;
  input["cap"] = opt_.cap.value_or(spec_.solver.cap);
  report_.set_input(std::move(input));
  for (const auto& f : spec_.flags) report_.add_flag(f);
}

Checkpoint& Pipeline::checkpoint() {
  if (!checkpoint_) checkpoint_ = opt_.checkpoint.empty() ? Checkpoint{} : Checkpoint::load_or_empty(opt_.checkpoint);
  return *checkpoint_;
}

void Pipeline::save_checkpoint() {
  if (!opt_.checkpoint.empty()) checkpoint().save(opt_.checkpoint);
}

void Pipeline::verify() {
  if (verified_) return;
  const auto t0 = Clock::now();
  std::vector<VerifyCheck> checks;
  problem_ = build_problem(spec_, opt_.precision.value_or(spec_.precision), &checks);
  Json list = Json::array();
  std::string failed;
  for (const auto& c : checks) {
    Json item = {{"check", c.name}, {"passed", c.passed}};
    if (!c.detail.empty()) item["detail"] = c.detail;
    list.push_back(std::move(item));
    if (!c.passed) failed += (failed.empty() ? "" : "; ") + c.name + (c.detail.empty() ? "" : " (" + c.detail + ")");
  }
  report_.add_section("verify", {{"passed", failed.empty()}, {"checks", list}});
  report_.add_timing("verify", seconds_since(t0));
  if (!failed.empty()) fail(ErrorKind::kVerification, "verification failed: " + failed);
  verified_ = true;
}

ResolventOptions Pipeline::resolvent_options() const {
  const Problem& p = *problem_;
  ResolventOptions ro;
  ro.units = p.units ? &*p.units : nullptr;
  ro.base_units = p.base_units;
  ro.deltas = p.deltas;
  ro.schedule.log10_small = opt_.schedule ? *opt_.schedule : spec_.solver.schedule;
  ro.schedule.sieve_primes = opt_.sieve_primes ? *opt_.sieve_primes : spec_.solver.sieve_primes;
  ro.schedule.digits = spec_.solver.enumeration_digits;
  ro.schedule.cap = opt_.cap.value_or(spec_.solver.cap);
  return ro;
}

void Pipeline::resolvent() {
  verify();
  if (resolvent_) return;
  const auto t0 = Clock::now();
  const Problem& p = *problem_;
  resolvent_ = classify_resolvent(p.forms.f, *p.m, lemma_rhs(p.quartic));
  Json sec = {{"form", form_json(p.forms.f)},
              {"q1", quadratic_json(p.forms.q1)},
              {"q2", quadratic_json(p.forms.q2)},
              {"rhs_norm", to_json(resolvent_->rhs_norm)},
              {"case", to_string(resolvent_->tag)},
              {"roots", to_json(resolvent_->roots)}};
  if (!resolvent_->quadratic.empty()) sec["quadratic_factor"] = form_json(resolvent_->quadratic);
  report_.add_section("resolvent", std::move(sec));
  report_.add_timing("resolvent", seconds_since(t0));
}

void Pipeline::bounds() {
  resolvent();
  if (bounds_result_) return;
  const auto t0 = Clock::now();
  ResolventOptions ro = resolvent_options();
  ro.bounds_only = resolvent_->tag == ResolventCase::kC;
  ResolventResult r = solve_resolvent(*resolvent_, ro);
  Json runs = Json::array();
  IntRecord e_r;
  for (const auto& run : r.case_c) {
    runs.push_back({{"delta_m", to_json(run.data.delta_m)},
                    {"delta_g", to_json(run.data.delta_g)},
                    {"lambda1", to_json(run.data.lambda1)},
                    {"rho", to_json(run.data.rho)},
                    {"a", {{"num", to_json(run.equation.a.num)}, {"den", to_json(run.equation.a.den)}}},
                    {"bounds", bounds_json(*run.bounds)}});
    e_r.push_back({run.e_r});
  }
  for (const auto& run : r.case_a) {
    runs.push_back({{"delta", to_json(run.delta)}, {"bounds", absolute_unit_json(run.result)}});
    e_r.push_back({narrow(run.result.e_r)});
  }
  report_.add_section("bounds", {{"case", to_string(r.tag)}, {"runs", runs}});
  if (r.tag == ResolventCase::kA) result_ = r;
  bounds_result_ = std::move(r);
  checkpoint().put("bounds", std::move(e_r));
  save_checkpoint();
  report_.add_timing("bounds", seconds_since(t0));
}

void Pipeline::unit_equation() {
  resolvent();
  const auto t0 = Clock::now();
  ResolventOptions ro = resolvent_options();

  if (resolvent_->tag == ResolventCase::kA) {
    if (!result_) result_ = solve_resolvent(*resolvent_, ro);
  } else {
    if (opt_.resume) {
      for (std::size_t i = 0;; ++i) {
        const std::string prefix = "schedule/" + std::to_string(i) + "/";
        if (!checkpoint().has(prefix + "meta")) break;
        ro.resume.push_back(load_schedule(checkpoint(), prefix));
      }
      if (ro.resume.empty())
        fail(ErrorKind::kMissingCheckpoint, "--resume needs a checkpoint with saved enumeration results");
      report_.add_flag("unit equation resumed from checkpoint");
    } else if (opt_.bound) {
      ro.e_r = *opt_.bound;
      report_.add_flag("reduced exponent bound supplied: " + std::to_string(*opt_.bound));
    } else if (bounds_result_) {
      long long e = 0;
      for (const auto& run : bounds_result_->case_c) e = std::max(e, run.e_r);
      ro.e_r = e;
    } else if (const IntRecord* rec = checkpoint().find("bounds")) {
      long long e = 0;
      for (const auto& v : *rec)
        if (!v.empty()) e = std::max<long long>(e, v[0]);
      ro.e_r = e;
    } else if (spec_.solver.reduced_bound) {
      ro.e_r = *spec_.solver.reduced_bound;
      report_.add_flag("reduced exponent bound taken from the field spec: " + std::to_string(*ro.e_r));
    } else {
      fail(ErrorKind::kMissingCheckpoint,
           "no reduced exponent bound: run the reduce stage with --checkpoint, or pass --bound");
    }
    result_ = solve_resolvent(*resolvent_, ro);
  }

  const ResolventResult& r = *result_;
  Json runs = Json::array();
  if (!opt_.resume) checkpoint().erase_prefix("schedule/");
  for (std::size_t i = 0; i < r.case_c.size(); ++i) {
    const auto& run = r.case_c[i];
    Json rec = Json::array();
    for (const auto& uv : run.recovered)
      rec.push_back({{"u", to_json(uv.u)}, {"v", to_json(uv.v)}, {"solution", uv.solution}});
    runs.push_back({{"delta_m", to_json(run.data.delta_m)},
                    {"delta_g", to_json(run.data.delta_g)},
                    {"schedule", schedule_json(*run.schedule)},
                    {"recovered", rec},
                    {"rejected", run.rejected}});
    store_schedule(checkpoint(), "schedule/" + std::to_string(i) + "/", *run.schedule);
  }
  for (const auto& run : r.case_a)
    runs.push_back({{"delta", to_json(run.delta)}, {"equation", absolute_unit_json(run.result)}, {"rejected", run.rejected}});

  uv_ = r.solutions;
  have_uv_ = true;
  Json uvs = Json::array();
  IntRecord uv_rec;
  for (const auto& s : uv_) {
    uvs.push_back({{"u", to_json(s.u)}, {"v", to_json(s.v)}});
    uv_rec.push_back(flatten({s.u, s.v}));
  }
  report_.add_section("unit_equation", {{"case", to_string(r.tag)}, {"runs", runs}, {"uv", uvs}});
  checkpoint().put("uv", std::move(uv_rec));
  save_checkpoint();
  report_.add_timing("unit_equation", seconds_since(t0));
}

void Pipeline::generators() {
  verify();
  const Problem& p = *problem_;
  const OrderContext& m = *p.m;
  if (!have_uv_) {
    const IntRecord& rec = checkpoint().get("uv");
    uv_.clear();
    for (const auto& v : rec) {
      auto parts = split(v, m.degree());
      if (parts.size() != 2) fail(ErrorKind::kParse, "malformed (U, V) record");
      uv_.push_back({parts[0], parts[1]});
    }
    have_uv_ = true;
    report_.add_flag("(U, V) read from checkpoint");
  }
  const auto t0 = Clock::now();
  const std::uint64_t cap = opt_.cap ? std::max<std::uint64_t>(*opt_.cap, spec_.solver.thue_cap) : spec_.solver.thue_cap;

  Json params = Json::array(), thue = Json::array();
  AssemblyResult assembled;
  std::uint64_t thue_solutions = 0, rejected = 0;
  for (const auto& s : uv_) {
    ParametrizationOptions po;
    po.zero = p.zero;
    po.kappas = p.kappas;
    const ParametrizationData pd = parametrize(s.u, s.v, p.forms, m, po);
    Json linear = form_json(pd.linear);
    params.push_back({{"u", to_json(s.u)},
                      {"v", to_json(s.v)},
                      {"q0", quadratic_json(pd.q0)},
                      {"zero", xyz_json(pd.zero)},
                      {"zero_points_searched", pd.searched},
                      {"pivot", pd.pivot},
                      {"free", pd.free},
                      {"linear", linear},
                      {"f", {form_json(pd.f[0]), form_json(pd.f[1]), form_json(pd.f[2])}},
                      {"kappas", to_json(pd.kappas)},
                      {"identity", parametrization_identity(pd, m)}});

    const QuarticInstances qi = quartic_instances(pd, p.forms, m);
    for (const auto& note : qi.notes) report_.add_flag(note);
    const auto solved = solve_quartic_instances(qi, pd, p.base_units, m, cap);
    Json per_kappa = Json::array();
    for (const auto& sq : solved) {
      Json rhs = Json::array();
      for (std::size_t j = 0; j < sq.rhs.size(); ++j) {
        const auto& b = sq.thue.bounds[j];
        Real xmax = 0, ymax = 0;
        for (const auto& x : b.x_bounds) xmax = max(xmax, x);
        for (const auto& y : b.y_bounds) ymax = max(ymax, y);
        rhs.push_back({{"sign", sq.rhs[j].sign},
                       {"ell", to_json(sq.rhs[j].ell)},
                       {"theorem_bound", scientific(b.theorem, 6)},
                       {"x_bound", scientific(xmax, 6)},
                       {"y_bound", scientific(ymax, 6)}});
      }
      Json sols = Json::array();
      for (const auto& t : sq.thue.solutions)
        sols.push_back({{"x", to_json(t.x)}, {"y", to_json(t.y)}, {"rhs_index", t.rhs_index}});
      thue_solutions += sq.thue.solutions.size();
      per_kappa.push_back({{"kappa", to_json(sq.kappa)},
                           {"c0", scientific(sq.thue.analysis.c0, 8)},
                           {"house_xi", scientific(sq.thue.analysis.house_xi, 8)},
                           {"rhs", rhs},
                           {"pairs_tested", sq.thue.pairs_tested},
                           {"solutions", sols}});
    }
    thue.push_back({{"u", to_json(s.u)},
                    {"v", to_json(s.v)},
                    {"equation", qi.chosen == 1 ? "F1 = kappa^2 U" : "F2 = kappa^2 V"},
                    {"swapped", qi.swapped},
                    {"form", form_json(qi.form)},
                    {"f1", form_json(qi.f1)},
                    {"f2", form_json(qi.f2)},
                    {"instances", per_kappa}});
    assembled = assemble_generators(solved, qi, pd, p.forms, p.quartic, std::move(assembled.families));
    rejected += assembled.rejected;
  }
  families_ = assembled.families;
  have_families_ = true;

  const Integer rhs = lemma_rhs(p.quartic);
  Json fams = Json::array();
  IntRecord fam_rec;
  for (const auto& f : families_) {
    const Element q1 = evaluate(p.forms.q1, f.xyz, m);
    const Element q2 = evaluate(p.forms.q2, f.xyz, m);
    const Integer n = norm(evaluate_form(p.forms.f, q1, q2, m), m);
    Json item = {{"xyz", xyz_json(f.xyz)},
                 {"q1", to_json(q1)},
                 {"q2", to_json(q2)},
                 {"p", to_json(f.p)},
                 {"q", to_json(f.q)},
                 {"kappa", to_json(f.kappa)},
                 {"norm_resolvent", to_json(n)},
                 {"lemma_rhs", to_json(rhs)},
                 {"lemma_holds", abs(n) == rhs}};
    if (p.k && p.k_ext) {
      const IndexResult ir = absolute_index(absolute_theta(p, f.xyz), *p.k, spec_.absolute->discriminant);
      item["absolute_index"] = ir.generates ? to_json(ir.index) : Json("not a generator");
    }
    fams.push_back(std::move(item));
    fam_rec.push_back(flatten({f.xyz[0], f.xyz[1], f.xyz[2], f.u, f.v, f.p, f.q, f.kappa}));
  }
  report_.add_section("parametrization", std::move(params));
  report_.add_section("thue", std::move(thue));
  report_.add_section("generators",
                      {{"families", fams}, {"thue_solutions", thue_solutions}, {"rejected", rejected}});
  checkpoint().put("families", std::move(fam_rec));
  save_checkpoint();
  report_.add_timing("generators", seconds_since(t0));
}

void Pipeline::absolute_search() {
  verify();
  const Problem& p = *problem_;
  if (!p.k || !p.k_ext) fail(ErrorKind::kInput, "the field spec has no absolute field data");
  if (!have_families_) {
    if (const IntRecord* rec = checkpoint().find("families")) {
      families_.clear();
      for (const auto& v : *rec) {
        auto parts = split(v, p.m->degree());
        if (parts.size() != 8) fail(ErrorKind::kParse, "malformed family record");
        families_.push_back({{parts[0], parts[1], parts[2]}, parts[3], parts[4], parts[5], parts[6], parts[7]});
      }
      report_.add_flag("generator families read from checkpoint");
    } else {
      report_.add_flag("generator families recomputed");
      if (!have_uv_ && !checkpoint().has("uv")) {
        bounds();
        unit_equation();
      }
      generators();
    }
    have_families_ = true;
  }
  const auto t0 = Clock::now();
  const auto& a = *spec_.absolute;
  AbsoluteSearchOptions so;
  so.range = opt_.range.value_or(a.range);
  so.threshold = opt_.threshold.value_or(a.threshold);
  so.threads = resolve_threads(opt_, spec_);
  Element mu = p.k->zero();
  for (std::size_t i = 0; i < a.base_image.size(); ++i) mu(static_cast<Eigen::Index>(i)) = a.base_image[i];

  searches_.clear();
  Json list = Json::array();
  for (const auto& f : families_) {
    AbsoluteField field{p.m.get(), p.k.get(), mu, absolute_theta(p, f.xyz), a.discriminant, p.base_units};
    AbsoluteSearchResult r = relthue::absolute_search(field, so);
    Json hits = Json::array();
    for (const auto& h : r.hits)
      hits.push_back({{"z", h.z}, {"k", to_json(h.k)}, {"index", to_json(h.index)}, {"zeta", to_json(h.zeta)}});
    list.push_back({{"family", xyz_json(f.xyz)},
                    {"theta", to_json(field.theta)},
                    {"scanned", r.scanned},
                    {"exact_checks", r.exact_checks},
                    {"hits", hits}});
    searches_.push_back(std::move(r));
  }
  report_.add_section("absolute_search",
                      {{"range", so.range}, {"threshold", to_json(so.threshold)}, {"searches", list}});
  report_.add_timing("absolute_search", seconds_since(t0));
}

void Pipeline::solve_all() {
  verify();
  if (opt_.stage == Stage::kVerify) return;
  bounds();
  if (opt_.stage == Stage::kReduce) return;
  unit_equation();
  if (opt_.stage == Stage::kUnitEquation) return;
  generators();
  if (opt_.stage == Stage::kGenerators) return;
  if (spec_.absolute) {
    absolute_search();
  } else {
    report_.add_flag("no absolute field data; search skipped");
  }
}

}  // namespace relthue
