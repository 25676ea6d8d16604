#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>

namespace {

const std::string kCli = MITK_CLI;
const std::string kData = MITK_TEST_DATA;

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = "\"" + kCli + "\" " + args + " 2>/dev/null";
  Run r;
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  REQUIRE(pipe);
  std::array<char, 4096> buf{};
  while (fgets(buf.data(), buf.size(), pipe.get())) r.out += buf.data();
  const int status = pclose(pipe.release());
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& name) { return "\"" + kData + "/" + name + "\""; }

std::filesystem::path tmp(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("mitk_cli_" + name);
}

}  // namespace

TEST_CASE("jumps") {
  const auto r = run("jumps " + data("crossing_lines.json") + " --cap 3");
  CHECK(r.code == 0);
  CHECK(r.out.find("1           (0,0) -> (1,1)") != std::string::npos);
  CHECK(r.out.find("3           (2,2) -> (3,3)") != std::string::npos);

  const auto out = tmp("jumps.json");
  CHECK(run("jumps " + data("cusp_like.json") + " --cap 1 --out \"" + out.string() + "\"").code == 0);
  const auto j = nlohmann::json::parse(std::ifstream(out));
  REQUIRE(j["jumps"].size() == 4);
  CHECK(j["jumps"][0]["m"] == "1/3");
  std::filesystem::remove(out);
}

TEST_CASE("mi, lct, member") {
  auto r = run("mi " + data("crossing_lines.json") + " --m 3/2");
  CHECK(r.code == 0);
  CHECK(r.out.find("(1,1)") != std::string::npos);
  r = run("lct " + data("cusp_like.json"));
  CHECK(r.code == 0);
  CHECK(r.out == "1/3\n");
  r = run("member " + data("monomial_2_3.json") + " --beta 1,2 --m 5/6");
  CHECK(r.code == 0);
  CHECK(r.out == "true\n");
  r = run("member " + data("monomial_2_3.json") + " --beta 0,0 --m 1");
  CHECK(r.out == "false\n");
}

TEST_CASE("restricted") {
  auto r = run("restricted " + data("crossing_lines.json") + " --p 1");
  CHECK(r.code == 0);
  CHECK(r.out.find("base (0,0)") != std::string::npos);
  CHECK(r.out.find("pairs {(1,2)}") != std::string::npos);
  CHECK(r.out.find("strictLeft true") != std::string::npos);
  CHECK(r.out.find("strictRight true") != std::string::npos);
  r = run("restricted " + data("disjoint_lines.json") + " --p 1");
  CHECK(r.code == 0);
  CHECK(r.out.find("pairs {}") != std::string::npos);
  CHECK(r.out.find("strictRight false") != std::string::npos);
}

TEST_CASE("input errors exit with 2") {
  CHECK(run("jumps " + data("bad_order.json") + " --cap 3").code == 2);
  CHECK(run("jumps " + data("bad_rational.json") + " --cap 3").code == 2);
  CHECK(run("jumps " + data("malformed.json") + " --cap 3").code == 2);
  CHECK(run("jumps " + data("nope.json") + " --cap 3").code == 2);
  CHECK(run("jumps " + data("crossing_lines.json") + " --cap 1/0").code == 2);
  CHECK(run("restricted " + data("crossing_lines.json") + " --p 5 --cap 2").code == 2);
  CHECK(run("member " + data("monomial_2_3.json") + " --beta 1 --m 1").code == 2);
  CHECK(run("member " + data("crossing_lines.json") + " --beta 1,1 --m 1").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("").code == 2);
  CHECK(run("verify nothing").code == 2);
}

TEST_CASE("version") {
  const auto r = run("--version");
  CHECK(r.code == 0);
  CHECK(r.out.find("0.3.0") != std::string::npos);
}

TEST_CASE("verify writes a report that re-renders") {
  const auto out = tmp("report.json");
  const auto r = run("verify cutoff --params " + data("quick_params.json") + " --out \"" + out.string() + "\"");
  CHECK(r.code == 0);
  CHECK(r.out.find("all checks passed") != std::string::npos);
  const auto j = nlohmann::json::parse(std::ifstream(out));
  CHECK(j.contains("conventions"));
  CHECK(j.contains("reproducibility"));
  CHECK(j["checks"].size() > 5);
  const auto again = run("report \"" + out.string() + "\"");
  CHECK(again.code == 0);

  // a tampered report with a failing check exits 1
  auto bad = j;
  bad["checks"][0]["status"] = "fail";
  std::ofstream(out) << bad.dump();
  CHECK(run("report \"" + out.string() + "\"").code == 1);
  std::filesystem::remove(out);
}

TEST_CASE("verify fiber with a small budget") {
  const auto r = run("verify fiber --params " + data("quick_params.json"));
  CHECK(r.code == 0);
}
