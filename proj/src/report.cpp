#include "mitk/report.hpp"

#include "mitk/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <sstream>

namespace mitk::report {

bool VerificationReport::all_pass() const { return failures() == 0; }

int VerificationReport::failures() const {
  return static_cast<int>(std::count_if(checks.begin(), checks.end(), [](const CheckRecord& c) {
    return c.status == Status::fail;
  }));
}

std::string status_name(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::info: return "info";
  }
  return "info";
}

Status parse_status(const std::string& s) {
  if (s == "pass") return Status::pass;
  if (s == "fail") return Status::fail;
  if (s == "info") return Status::info;
  throw InputError("status: expected pass, fail or info, got \"" + s + "\"");
}

json default_conventions() {
  json c;
  c["kahlerForm"] = "omega = i sum_j dz_j ^ dzbar_j";
  c["volume"] = "dV = omega^n / n! = 2^n * Lebesgue";
  c["dVFactor"] = "2^n";
  c["measureOneFormNorm"] = "|dz_j|^2 = 2 (tube measures and the closed-form density)";
  c["fiberOneFormNorm"] = "|dz_j|^2 = 1 (pointwise form algebra, orthonormal dz basis)";
  c["gramDeterminant"] = "|Lambda^r d sigma|^2 = (2 s^2)^r for sigma = s (z_1, ..., z_r)";
  c["thetaWindow"] = "theta = 1 on ]-inf, eps/3], 0 on [1 - eps/3, +inf[";
  return c;
}

json to_json(const VerificationReport& report) {
  json j;
  j["toolVersion"] = report.toolVersion;
  j["timestamp"] = report.timestamp;
  j["conventions"] = report.conventions;
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"id", c.id},
                      {"paperRef", c.paperRef},
                      {"status", status_name(c.status)},
                      {"margin", c.margin},
                      {"details", c.details}});
  }
  j["checks"] = checks;
  j["reproducibility"] = report.reproducibility;
  return j;
}

VerificationReport report_from_json(const json& j) {
  if (!j.is_object()) throw InputError("report: expected a JSON object");
  VerificationReport r;
  try {
    r.toolVersion = j.at("toolVersion").get<std::string>();
    r.timestamp = j.value("timestamp", "");
    r.conventions = j.value("conventions", json::object());
    r.reproducibility = j.value("reproducibility", json::object());
    const json& checks = j.at("checks");
    for (std::size_t i = 0; i < checks.size(); ++i) {
      const json& c = checks[i];
      CheckRecord rec;
      rec.id = c.at("id").get<std::string>();
      rec.paperRef = c.at("paperRef").get<std::string>();
      rec.status = parse_status(c.at("status").get<std::string>());
      rec.margin = c.at("margin").is_number() ? c.at("margin").get<double>() : 0.0;
      rec.details = c.value("details", json::object());
      r.checks.push_back(std::move(rec));
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("report: ") + e.what());
  }
  return r;
}

std::string render_summary(const VerificationReport& report) {
  std::ostringstream os;
  for (const auto& c : report.checks) {
    std::string tag = status_name(c.status);
    std::transform(tag.begin(), tag.end(), tag.begin(), ::toupper);
    char margin[32];
    std::snprintf(margin, sizeof margin, "%.3e", c.margin == 0.0 ? 0.0 : c.margin);
    os << tag << "  " << c.id << "  margin=" << margin << "  " << c.paperRef << '\n';
  }
  os << (report.all_pass() ? "all checks passed" : std::to_string(report.failures()) + " check(s) failed")
     << " (" << report.checks.size() << " checks)\n";
  return os.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace mitk::report
