#include "relthue/report.hpp"

#include "relthue/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace relthue {

Report::Report(std::string command) : command_(std::move(command)) {}

void Report::add_section(const std::string& name, Json body) { sections_[name] = std::move(body); }

void Report::add_flag(const std::string& flag) {
  for (const auto& f : flags_)
    if (f == flag) return;
  flags_.push_back(flag);
}

void Report::add_timing(const std::string& stage, double seconds) { timings_[stage] = rounded(seconds, 3); }

void Report::set_status(std::string status, std::string message) {
  status_ = std::move(status);
  message_ = std::move(message);
}

Json Report::document() const {
  Json doc;
  doc["schema"] = kReportSchema;
  doc["command"] = command_;
  doc["status"] = status_;
  if (!message_.empty()) doc["message"] = message_;
  doc["input"] = input_;
  doc["sections"] = sections_;
  doc["flags"] = flags_;
  doc["timings"] = timings_;
  return doc;
}

namespace {

bool is_compact(const Json& j) {
  if (!j.is_array()) return !j.is_object();
  for (const auto& x : j)
    if (!is_compact(x)) return false;
  return j.dump().size() <= 100;
}

/// Indented like dump(2), with short arrays of scalars kept on one line.
void pretty(const Json& j, int indent, std::string& out) {
  const std::string pad(indent, ' ');
  const std::string inner(indent + 2, ' ');
  if (is_compact(j)) {
    std::string s = j.dump();
    if (j.is_array()) {
      std::string spaced;
      for (char c : s) {
        spaced.push_back(c);
        if (c == ',') spaced.push_back(' ');
      }
      if (j.dump().find('"') == std::string::npos) s = spaced;
    }
    out += s;
    return;
  }
  if (j.is_array()) {
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      out += inner;
      pretty(j[i], indent + 2, out);
      out += i + 1 < j.size() ? ",\n" : "\n";
    }
    out += pad + "]";
    return;
  }
  if (j.empty()) {
    out += "{}";
    return;
  }
  out += "{\n";
  std::size_t i = 0;
  for (auto it = j.begin(); it != j.end(); ++it, ++i) {
    out += inner + Json(it.key()).dump() + ": ";
    pretty(it.value(), indent + 2, out);
    out += i + 1 < j.size() ? ",\n" : "\n";
  }
  out += pad + "}";
}

}  // namespace

std::string format_json(const Json& j) {
  std::string out;
  pretty(j, 0, out);
  return out + "\n";
}

std::string Report::dump() const { return format_json(document()); }

void Report::write(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorKind::kInput, "cannot write report " + path);
  out << dump();
}

Json to_json(const Integer& x) {
  static const Integer lo = std::numeric_limits<std::int64_t>::min();
  static const Integer hi = std::numeric_limits<std::int64_t>::max();
  if (x >= lo && x <= hi) return x.convert_to<std::int64_t>();
  return x.str();
}

Json to_json(const Element& a) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < a.size(); ++i) out.push_back(to_json(a(i)));
  return out;
}

Json to_json(const ExpVec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json to_json(const std::vector<Element>& v) {
  Json out = Json::array();
  for (const auto& a : v) out.push_back(to_json(a));
  return out;
}

std::string scientific(const Real& x, int digits) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(digits - 1) << x;
  return os.str();
}

double rounded(double x, int digits) {
  if (!std::isfinite(x) || x == 0) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return std::strtod(buf, nullptr);
}

}  // namespace relthue
