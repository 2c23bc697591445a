#include "relthue/fieldspec.hpp"

#include "relthue/errors.hpp"

#include <yaml-cpp/yaml.h>

#include <cctype>
#include <fstream>
#include <sstream>

namespace relthue {
namespace {

[[noreturn]] void parse_error(const YAML::Node& node, const std::string& what) {
  std::ostringstream os;
  os << what;
  if (node.Mark().line >= 0) os << " (line " << node.Mark().line + 1 << ")";
  fail(ErrorKind::kParse, os.str());
}

std::string trimmed(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

/// An integer written plainly or as a product of powers, "2^24 * 7^3".
Integer integer_of(const YAML::Node& node) {
  if (!node.IsScalar()) parse_error(node, "expected an integer");
  std::string text = trimmed(node.Scalar());
  int sign = 1;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
    if (text[0] == '-') sign = -1;
    text = trimmed(text.substr(1));
  }
  Integer value = 1;
  std::stringstream terms(text);
  std::string term;
  bool any = false;
  while (std::getline(terms, term, '*')) {
    term = trimmed(term);
    const auto caret = term.find('^');
    const std::string base = trimmed(term.substr(0, caret));
    if (!all_digits(base)) parse_error(node, "malformed integer '" + node.Scalar() + "'");
    Integer factor(base);
    if (caret != std::string::npos) {
      const std::string e = trimmed(term.substr(caret + 1));
      if (!all_digits(e) || e.size() > 6) parse_error(node, "malformed exponent in '" + node.Scalar() + "'");
      factor = ipow(factor, static_cast<unsigned>(std::stoul(e)));
    }
    value *= factor;
    any = true;
  }
  if (!any) parse_error(node, "empty integer");
  return sign * value;
}

long long small_of(const YAML::Node& node) {
  const Integer v = integer_of(node);
  if (v > Integer(1'000'000'000'000'000'000LL) || v < Integer(-1'000'000'000'000'000'000LL))
    parse_error(node, "integer out of range");
  return v.convert_to<long long>();
}

const YAML::Node& require_sequence(const YAML::Node& node, const std::string& what) {
  if (!node || !node.IsSequence()) parse_error(node, what + " must be a list");
  return node;
}

Coordinates coordinates_of(const YAML::Node& node, const std::string& what) {
  require_sequence(node, what);
  Coordinates c;
  for (const auto& x : node) c.push_back(integer_of(x));
  if (c.empty()) parse_error(node, what + " is empty");
  return c;
}

std::vector<Coordinates> coordinate_list(const YAML::Node& node, const std::string& what) {
  require_sequence(node, what);
  std::vector<Coordinates> out;
  for (const auto& x : node) out.push_back(coordinates_of(x, what));
  return out;
}

/// Written highest degree first; stored lowest degree first.
IntPoly polynomial_of(const YAML::Node& node, const std::string& what) {
  Coordinates c = coordinates_of(node, what);
  IntPoly p(c.rbegin(), c.rend());
  trim(p);
  if (degree(p) < 1) parse_error(node, what + " must have positive degree");
  if (p.back() != 1) parse_error(node, what + " must be monic");
  return p;
}

YAML::Node child(const YAML::Node& node, const char* key, bool required = true) {
  if (!node.IsMap()) parse_error(node, "expected a mapping");
  YAML::Node c = node[key];
  if (required && !c) parse_error(node, std::string("missing key '") + key + "'");
  return c;
}

void require_size(const Coordinates& c, int n, const std::string& what) {
  if (static_cast<int>(c.size()) != n)
    fail(ErrorKind::kInput, what + " has " + std::to_string(c.size()) + " coordinates, expected " + std::to_string(n));
}

void parse_quartic(const YAML::Node& node, FieldSpec& spec, int m) {
  if (const auto conv = node["convention"]) spec.convention = conv.as<std::string>();
  const YAML::Node coeffs = child(node, "coefficients");
  if (!coeffs.IsMap()) parse_error(coeffs, "quartic coefficients must be a mapping");
  // x^4 + a1 x^3 + a2 x^2 + a3 x + a4, or x^4 + a3 x^3 + a2 x^2 + a1 x + a0.
  std::array<const char*, 4> keys;
  if (spec.convention == "a1-a4") {
    keys = {"a1", "a2", "a3", "a4"};
  } else if (spec.convention == "a3-a0") {
    keys = {"a3", "a2", "a1", "a0"};
    spec.flags.push_back("quartic coefficients given as a3..a0 and renamed to a1..a4");
  } else {
    parse_error(node, "unknown coefficient convention '" + spec.convention + "'");
  }
  for (int t = 0; t < 4; ++t) {
    const YAML::Node c = coeffs[keys[t]];
    spec.quartic[t] = c ? coordinates_of(c, keys[t]) : Coordinates(m, Integer(0));
    require_size(spec.quartic[t], m, std::string("quartic coefficient ") + keys[t]);
  }
  if (const auto d = node["d"]) spec.d = integer_of(d);
  if (const auto i0 = node["i0"]) spec.i0 = integer_of(i0);
  if (spec.d <= 0 || spec.i0 <= 0) fail(ErrorKind::kInput, "d and i0 must be positive");
}

FieldSpec parse_node(const YAML::Node& root) {
  if (!root || !root.IsMap()) fail(ErrorKind::kParse, "field spec must be a mapping");
  FieldSpec spec;
  if (const auto v = root["version"]) spec.version = static_cast<int>(small_of(v));
  if (spec.version != 1) fail(ErrorKind::kParse, "unsupported field spec version " + std::to_string(spec.version));
  if (const auto p = root["precision"]) spec.precision = static_cast<unsigned>(small_of(p));
  if (spec.precision < 30) fail(ErrorKind::kInput, "precision must be at least 30 digits");

  const YAML::Node base = child(root, "base");
  spec.base_polynomial = polynomial_of(child(base, "polynomial"), "base polynomial");
  const int m = degree(spec.base_polynomial);
  if (const auto u = base["units"]) spec.base_units = coordinate_list(u, "base units");
  for (const auto& u : spec.base_units) require_size(u, m, "base unit");

  if (const auto q = root["quadratic"]) {
    FieldSpec::Quadratic ext;
    ext.polynomial = polynomial_of(child(q, "polynomial"), "quadratic extension polynomial");
    const int n = degree(ext.polynomial);
    if (n != 2 * m) fail(ErrorKind::kInput, "the quadratic extension must have degree twice the base degree");
    ext.base_image = coordinates_of(child(q, "base_image"), "base_image");
    require_size(ext.base_image, n, "base_image");
    ext.units = coordinate_list(child(q, "units"), "units");
    for (const auto& u : ext.units) require_size(u, n, "unit");
    const YAML::Node conj = require_sequence(child(q, "conjugation"), "conjugation");
    for (const auto& row : conj) {
      std::vector<long long> r;
      for (const auto& x : require_sequence(row, "conjugation row")) r.push_back(small_of(x));
      if (r.size() != ext.units.size()) fail(ErrorKind::kInput, "conjugation rows must have one entry per unit");
      ext.conjugation.push_back(std::move(r));
    }
    if (ext.conjugation.size() != ext.units.size()) fail(ErrorKind::kInput, "conjugation must be square");
    if (const auto s = q["signs"]) {
      for (const auto& x : require_sequence(s, "signs")) ext.signs.push_back(static_cast<int>(small_of(x)));
    } else {
      ext.signs.assign(ext.units.size(), 1);
    }
    if (ext.signs.size() != ext.units.size()) fail(ErrorKind::kInput, "one sign per unit is required");
    for (int s : ext.signs)
      if (s != 1 && s != -1) fail(ErrorKind::kInput, "signs must be +1 or -1");
    spec.quadratic = std::move(ext);
  }

  parse_quartic(child(root, "quartic"), spec, m);

  if (const auto a = root["absolute"]) {
    FieldSpec::Absolute abs;
    abs.polynomial = polynomial_of(child(a, "polynomial"), "absolute polynomial");
    const int n = degree(abs.polynomial);
    if (n != 4 * m) fail(ErrorKind::kInput, "the absolute polynomial must have degree 4m");
    abs.base_image = coordinates_of(child(a, "base_image"), "base_image");
    abs.generator_image = coordinates_of(child(a, "generator_image"), "generator_image");
    require_size(abs.base_image, n, "absolute base_image");
    require_size(abs.generator_image, n, "absolute generator_image");
    abs.discriminant = integer_of(child(a, "discriminant"));
    if (const auto r = a["range"]) abs.range = small_of(r);
    if (const auto t = a["threshold"]) abs.threshold = integer_of(t);
    if (abs.range < 0) fail(ErrorKind::kInput, "search range must be nonnegative");
    spec.absolute = std::move(abs);
  }

  if (const auto s = root["solver"]) {
    auto& sv = spec.solver;
    if (const auto x = s["schedule"])
      for (const auto& e : require_sequence(x, "schedule")) sv.schedule.push_back(e.as<double>());
    if (const auto x = s["sieve_primes"])
      for (const auto& e : require_sequence(x, "sieve_primes")) sv.sieve_primes.push_back(e.as<std::uint64_t>());
    if (const auto x = s["enumeration_digits"]) sv.enumeration_digits = x.as<unsigned>();
    if (const auto x = s["cap"]) sv.cap = x.as<std::uint64_t>();
    if (const auto x = s["thue_cap"]) sv.thue_cap = x.as<std::uint64_t>();
    if (const auto x = s["threads"]) sv.threads = x.as<int>();
    if (const auto x = s["reduced_bound"]) sv.reduced_bound = small_of(x);
  }

  if (const auto r = root["representatives"]) {
    if (const auto ds = r["delta"]) {
      for (const auto& d : require_sequence(ds, "delta")) {
        FieldSpec::DeltaSpec pair{coordinates_of(child(d, "m"), "delta m"), coordinates_of(child(d, "g"), "delta g")};
        require_size(pair.m, m, "delta m");
        require_size(pair.g, 2 * m, "delta g");
        spec.deltas.push_back(std::move(pair));
      }
    }
    if (const auto k = r["kappa"]) {
      spec.kappas = coordinate_list(k, "kappa");
      for (const auto& c : spec.kappas) require_size(c, m, "kappa");
    }
    if (const auto z = r["zero"]) {
      const auto zs = coordinate_list(z, "zero");
      if (zs.size() != 3) fail(ErrorKind::kInput, "zero needs three coordinates X, Y, Z");
      for (const auto& c : zs) require_size(c, m, "zero");
      spec.zero = std::array<Coordinates, 3>{zs[0], zs[1], zs[2]};
    }
  }
  return spec;
}

}  // namespace

FieldSpec parse_field_spec(const std::string& text) {
  try {
    return parse_node(YAML::Load(text));
  } catch (const YAML::Exception& e) {
    fail(ErrorKind::kParse, std::string("field spec: ") + e.what());
  }
}

FieldSpec load_field_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kInput, "cannot open field spec " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_field_spec(os.str());
}

}  // namespace relthue
