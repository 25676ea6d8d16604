#pragma once

#include "mitk/documents.hpp"

#include <string>
#include <vector>

namespace mitk::report {

using io::json;

inline constexpr const char* kToolVersion = "0.3.0";

enum class Status { pass, fail, info };

struct CheckRecord {
  std::string id;
  std::string paperRef;  // short statement of the property being checked
  Status status = Status::info;
  double margin = 0.0;   // >= 0 on success where meaningful
  json details = json::object();
};

struct VerificationReport {
  std::string toolVersion = kToolVersion;
  std::string timestamp;
  json conventions = json::object();
  std::vector<CheckRecord> checks;
  json reproducibility = json::object();

  bool all_pass() const;
  int failures() const;
};

std::string status_name(Status s);
Status parse_status(const std::string& s);

/// The metric and volume normalization every report carries.
json default_conventions();

json to_json(const VerificationReport& report);
/// Throws InputError naming the failing field.
VerificationReport report_from_json(const json& j);

/// One line per check: "PASS  id  margin=...  paperRef".
std::string render_summary(const VerificationReport& report);

/// UTC, ISO 8601.
std::string utc_timestamp();

}  // namespace mitk::report
