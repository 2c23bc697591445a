// relthue: command-line driver for the relative power integral basis solver.

#include "relthue/errors.hpp"
#include "relthue/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

using namespace relthue;

namespace {

struct Args {
  std::string spec;
  std::string report;
  std::string checkpoint;
  std::string stage = "all";
  unsigned precision = 0;
  std::string schedule;
  std::string sieve_primes;
  int threads = 0;
  std::uint64_t cap = 0;
  long long bound = -1;
  long long range = -1;
  std::string threshold;
  bool resume = false;
  bool quiet = false;
};

template <typename T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::istringstream is(item);
    T x;
    if (!(is >> x)) fail(ErrorKind::kInput, std::string("malformed ") + what + " list '" + text + "'");
    out.push_back(x);
  }
  return out;
}

PipelineOptions options_of(const Args& a) {
  PipelineOptions o;
  if (a.precision) o.precision = a.precision;
  if (!a.schedule.empty()) o.schedule = parse_list<double>(a.schedule, "schedule");
  if (!a.sieve_primes.empty()) o.sieve_primes = parse_list<std::uint64_t>(a.sieve_primes, "sieve prime");
  if (a.threads > 0) o.threads = a.threads;
  if (a.cap) o.cap = a.cap;
  o.stage = parse_stage(a.stage);
  if (a.bound >= 0) o.bound = a.bound;
  if (a.range >= 0) o.range = a.range;
  if (!a.threshold.empty()) o.threshold = parse_integer(a.threshold);
  o.checkpoint = a.checkpoint;
  o.resume = a.resume;
  return o;
}

void summarize(const Pipeline& p, std::ostream& os) {
  if (p.resolvent_equation()) os << "resolvent case " << to_string(p.resolvent_equation()->tag) << "\n";
  if (const auto& r = p.resolvent_result()) {
    for (const auto& run : r->case_c) {
      if (!run.schedule) continue;
      os << "unit equation: E_R = " << run.e_r << ", " << run.schedule->solutions.size() << " solutions\n";
      for (const auto& s : run.schedule->solutions) os << "  v = (" << s.v.transpose() << "), sign " << s.sign << "\n";
    }
  }
  for (const auto& s : p.uv()) os << "(U, V) = ((" << s.u.transpose() << "), (" << s.v.transpose() << "))\n";
  for (const auto& f : p.families())
    os << "family (X, Y, Z) = ((" << f.xyz[0].transpose() << "), (" << f.xyz[1].transpose() << "), ("
       << f.xyz[2].transpose() << "))\n";
  for (const auto& s : p.searches())
    for (const auto& h : s.hits) {
      os << "index " << h.index << " at z = (";
      for (std::size_t i = 0; i < h.z.size(); ++i) os << (i ? ", " : "") << h.z[i];
      os << "), k = (" << h.k.transpose() << ")\n";
    }
}

int run(const std::string& command, const Args& args) {
  const FieldSpec spec = load_field_spec(args.spec);
  Pipeline p(spec, options_of(args), command);
  int code = 0;
  try {
    if (command == "solve-all") {
      p.solve_all();
    } else if (command == "verify") {
      p.verify();
    } else if (command == "unit-eq") {
      p.unit_equation();
    } else if (command == "thue-quartic") {
      p.generators();
    } else if (command == "abs-search") {
      p.absolute_search();
    }
  } catch (const Error& e) {
    p.report().set_status("error", e.what());
    std::cerr << "relthue: " << e.what() << "\n";
    code = exit_code(e.kind());
  }
  if (!args.report.empty()) {
    p.report().write(args.report);
  } else if (!args.quiet) {
    std::cout << p.report().dump();
  }
  if (!args.report.empty() && !args.quiet) summarize(p, std::cout);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generators of relative power integral bases of quartic extensions"};
  app.require_subcommand(1);
  Args args;

  auto common = [&](CLI::App* sub) {
    sub->add_option("spec", args.spec, "field spec file")->required()->check(CLI::ExistingFile);
    sub->add_option("--report", args.report, "write the JSON report here instead of stdout");
    sub->add_option("--checkpoint", args.checkpoint, "checkpoint file read and updated by the stages");
    sub->add_option("--precision", args.precision, "working precision in decimal digits");
    sub->add_option("--threads", args.threads, "worker threads");
    sub->add_flag("--quiet", args.quiet, "no output besides errors");
  };
  auto solver = [&](CLI::App* sub) {
    sub->add_option("--schedule", args.schedule, "comma-separated log10 s values of the enumeration");
    sub->add_option("--sieve-primes", args.sieve_primes, "comma-separated sieve primes");
    sub->add_option("--cap", args.cap, "cardinality cap for enumerations");
  };

  auto* solve = app.add_subcommand("solve-all", "run the full pipeline");
  common(solve);
  solver(solve);
  solve->add_option("--stage", args.stage, "last stage: verify, reduce, unit-eq, thue, abs-search");
  solve->add_option("--bound", args.bound, "reduced exponent bound for the unit equation");
  solve->add_option("--range", args.range, "absolute search box radius");
  solve->add_option("--threshold", args.threshold, "absolute search index threshold");

  auto* verify = app.add_subcommand("verify", "check the field spec data");
  common(verify);

  auto* unit = app.add_subcommand("unit-eq", "solve the unit equation");
  common(unit);
  solver(unit);
  unit->add_option("--bound", args.bound, "reduced exponent bound (else read from the checkpoint)");
  unit->add_flag("--resume", args.resume, "verify saved enumeration results from the checkpoint");

  auto* thue = app.add_subcommand("thue-quartic", "quartic Thue equations and generators from saved (U, V)");
  common(thue);
  thue->add_option("--cap", args.cap, "cardinality cap for the Thue box search");

  auto* abs = app.add_subcommand("abs-search", "absolute generators of small index");
  common(abs);
  abs->add_option("--range", args.range, "box radius for z and k");
  abs->add_option("--threshold", args.threshold, "report indices below this value");

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, args);
  } catch (const Error& e) {
    std::cerr << "relthue: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "relthue: " << e.what() << "\n";
    return 1;
  }
}
