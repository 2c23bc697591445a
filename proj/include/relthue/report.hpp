#pragma once

// Run reports: one JSON document with a schema header, the input summary,
// the stage sections in the order they ran, the design flags raised and the
// timings. Sections hold only reproducible data; wall-clock times live in
// the separate "timings" object.

#include "relthue/numeric.hpp"
#include "relthue/order.hpp"
#include "relthue/units.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace relthue {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "relthue-report/1";

class Report {
 public:
  explicit Report(std::string command = "");

  void set_input(Json input) { input_ = std::move(input); }
  /// Replaces a section of the same name, keeping its position.
  void add_section(const std::string& name, Json body);
  bool has_section(const std::string& name) const { return sections_.contains(name); }
  const Json& section(const std::string& name) const { return sections_.at(name); }
  void add_flag(const std::string& flag);
  void add_timing(const std::string& stage, double seconds);
  void set_status(std::string status, std::string message = "");

  Json document() const;
  std::string dump() const;
  void write(const std::string& path) const;

 private:
  std::string command_;
  std::string status_ = "ok";
  std::string message_;
  Json input_ = Json::object();
  Json sections_ = Json::object();
  std::vector<std::string> flags_;
  Json timings_ = Json::object();
};

/// JSON text indented by two spaces with short scalar arrays on one line.
std::string format_json(const Json& j);

/// Integers that fit in 64 bits become JSON numbers, others decimal strings.
Json to_json(const Integer& x);
Json to_json(const Element& a);
Json to_json(const ExpVec& v);
Json to_json(const std::vector<Element>& v);
/// Decimal scientific notation with `digits` significant digits.
std::string scientific(const Real& x, int digits = 10);
double rounded(double x, int digits = 6);

}  // namespace relthue
