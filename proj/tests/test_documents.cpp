#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mitk/documents.hpp"
#include "mitk/errors.hpp"
#include "mitk/report.hpp"
#include "mitk/suites.hpp"

#include <filesystem>

using namespace mitk;
using io::json;

namespace {

const std::filesystem::path kData = MITK_TEST_DATA;

std::string error_of(const json& j) {
  try {
    io::model_from_json(j);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("read the crossing lines fixture") {
  const auto doc = io::read_model_document(kData / "crossing_lines.json");
  CHECK(doc.kind == io::ModelKind::snc);
  CHECK(doc.snc.c == 1);
  REQUIRE(doc.snc.components.size() == 2);
  CHECK(doc.snc.components[1].name == "D2");
  REQUIRE(doc.snc.intersections.size() == 1);
  CHECK(doc.snc.intersections[0] == IndexPair{0, 1});
}

TEST_CASE("model documents round-trip") {
  for (const char* name : {"crossing_lines.json", "disjoint_lines.json", "cusp_like.json", "monomial_2_3.json"}) {
    const auto doc = io::read_model_document(kData / name);
    const auto tmp = std::filesystem::temp_directory_path() / (std::string("mitk_rt_") + name);
    io::write_model_document(tmp, doc);
    CHECK(io::read_model_document(tmp) == doc);
    CHECK(io::model_from_json(io::to_json(doc)) == doc);
    std::filesystem::remove(tmp);
  }
}

TEST_CASE("rationals are strings in documents") {
  io::ModelDocument doc;
  doc.kind = io::ModelKind::monomial;
  doc.monomial.alpha = {Rational(3, 2), Rational(2)};
  const auto j = io::to_json(doc);
  CHECK(j["alpha"][0] == "3/2");
  CHECK(j["alpha"][1] == "2");
}

TEST_CASE("bad documents name the field") {
  CHECK_THROWS_AS(io::read_model_document(kData / "bad_order.json"), InputError);
  CHECK_THROWS_AS(io::read_model_document(kData / "bad_rational.json"), InputError);
  CHECK_THROWS_AS(io::read_model_document(kData / "malformed.json"), InputError);
  CHECK_THROWS_AS(io::read_model_document(kData / "missing.json"), InputError);

  auto j = io::to_json(io::read_model_document(kData / "crossing_lines.json"));
  j["components"][1]["a"] = -1;
  CHECK(error_of(j).find("components[2].a") != std::string::npos);
  j = io::to_json(io::read_model_document(kData / "crossing_lines.json"));
  j["intersections"] = json::array({json::array({1, 3})});
  CHECK(error_of(j).find("intersections") != std::string::npos);
  j["kind"] = "toric";
  CHECK(error_of(j).find("kind") != std::string::npos);
}

TEST_CASE("coefficient formatting") {
  IdealCoeffVector v{{1, 12}};
  CHECK(io::format_coeffs(v) == "(1,12)");
  CHECK(io::to_json(v) == json::array({1, 12}));
}

TEST_CASE("reports round-trip") {
  report::VerificationReport rep;
  rep.timestamp = report::utc_timestamp();
  rep.conventions = report::default_conventions();
  rep.checks.push_back({"a", "first", report::Status::pass, 0.5, json{{"x", 1}}});
  rep.checks.push_back({"b", "second", report::Status::info, 0.0, json::object()});
  CHECK(rep.all_pass());
  rep.checks.push_back({"c", "third", report::Status::fail, -1.0, json::object()});
  CHECK_FALSE(rep.all_pass());
  CHECK(rep.failures() == 1);

  const auto back = report::report_from_json(report::to_json(rep));
  CHECK(back.checks.size() == 3);
  CHECK(back.checks[2].status == report::Status::fail);
  CHECK(back.checks[0].details["x"] == 1);
  CHECK(back.timestamp == rep.timestamp);
  CHECK(report::to_json(back) == report::to_json(rep));

  const auto text = report::render_summary(rep);
  CHECK(text.find("FAIL") != std::string::npos);
  CHECK(text.find("PASS") != std::string::npos);

  auto bad = report::to_json(rep);
  bad["checks"][0]["status"] = "maybe";
  CHECK_THROWS_AS(report::report_from_json(bad), InputError);
}

TEST_CASE("suite options") {
  const auto opt = suites::SuiteOptions::from_json(io::read_json_file(kData / "quick_params.json"));
  CHECK(opt.seed == 7);
  CHECK(opt.cutoffEps.size() == 1);
  CHECK(suites::SuiteOptions::from_json(opt.to_json()).to_json() == opt.to_json());
  CHECK_THROWS_AS(suites::SuiteOptions::from_json(json{{"sed", 1}}), InputError);
  CHECK(suites::parse_suite("tube") == suites::Suite::tube);
  CHECK_THROWS_AS(suites::parse_suite("everything"), InputError);
}
