#include "mitk/documents.hpp"
#include "mitk/errors.hpp"
#include "mitk/report.hpp"
#include "mitk/snc_ideals.hpp"
#include "mitk/suites.hpp"

#include <CLI11.hpp>

#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using mitk::io::json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitInputError = 2;

mitk::SncModel load_snc(const std::string& path) {
  const auto doc = mitk::io::read_model_document(path);
  if (doc.kind == mitk::io::ModelKind::snc) return doc.snc;
  return mitk::to_snc_model(doc.monomial).model;
}

mitk::Rational rational_option(const std::string& text, const std::string& flag) {
  try {
    return mitk::parse_rational(text);
  } catch (const std::invalid_argument& e) {
    throw mitk::InputError(flag + ": " + e.what());
  }
}

std::vector<std::int64_t> parse_beta(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument("bad");
      out.push_back(v);
    } catch (const std::exception&) {
      throw mitk::InputError("--beta: expected comma-separated nonnegative integers, got \"" + text + "\"");
    }
  }
  return out;
}

void maybe_write(const std::string& out, const json& j) {
  if (!out.empty()) mitk::io::write_json_file(out, j);
}

json pairs_json(const std::vector<mitk::IndexPair>& pairs) {
  json out = json::array();
  for (const auto& [a, b] : pairs) out.push_back({a + 1, b + 1});
  return out;
}

std::string pairs_text(const std::vector<mitk::IndexPair>& pairs) {
  std::string s = "{";
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    s += (i ? ", (" : "(") + std::to_string(pairs[i].first + 1) + "," +
         std::to_string(pairs[i].second + 1) + ")";
  }
  return s + "}";
}

int cmd_jumps(const std::string& path, const std::string& capText, const std::string& out) {
  const auto model = load_snc(path);
  const auto cap = rational_option(capText, "--cap");
  const auto spec = mitk::jumping_spectrum(model, cap);
  json rows = json::array();
  std::cout << std::left << std::setw(12) << "m" << "before -> after\n";
  mitk::Rational prev{0};
  for (const auto& m : spec.values) {
    // coefficients just below the jump: any point of the open gap (prev, m)
    const auto before = mitk::multiplier_coeffs(model, (prev + m) / 2);
    const auto after = mitk::multiplier_coeffs(model, m);
    std::cout << std::setw(12) << mitk::to_string(m) << mitk::io::format_coeffs(before) << " -> "
              << mitk::io::format_coeffs(after) << '\n';
    rows.push_back({{"m", mitk::to_string(m)}, {"before", mitk::io::to_json(before)},
                    {"after", mitk::io::to_json(after)}});
    prev = m;
  }
  maybe_write(out, {{"cap", mitk::to_string(cap)}, {"jumps", rows}});
  return kExitOk;
}

int cmd_mi(const std::string& path, const std::string& mText, const std::string& out) {
  const auto model = load_snc(path);
  const auto m = rational_option(mText, "--m");
  const auto s = mitk::multiplier_coeffs(model, m);
  std::cout << "m=" << mitk::to_string(m) << " coefficients " << mitk::io::format_coeffs(s) << '\n';
  maybe_write(out, {{"m", mitk::to_string(m)}, {"coefficients", mitk::io::to_json(s)}});
  return kExitOk;
}

int cmd_lct(const std::string& path, const std::string& out) {
  const auto model = load_snc(path);
  const auto v = mitk::lct(model);
  std::cout << mitk::to_string(v) << '\n';
  maybe_write(out, {{"lct", mitk::to_string(v)}});
  return kExitOk;
}

int cmd_restricted(const std::string& path, int p, const std::string& capText, const std::string& out) {
  const auto model = load_snc(path);
  if (p < 1) throw mitk::InputError("--p: must be >= 1");
  mitk::Rational cap;
  if (capText.empty()) {
    // the p-th jump never exceeds min_k (b_k + p) / (c a_k)
    cap = mitk::Rational(model.components[0].b + p) / (model.c * model.components[0].a);
    for (const auto& c : model.components) cap = std::min(cap, mitk::Rational(c.b + p) / (model.c * c.a));
  } else {
    cap = rational_option(capText, "--cap");
  }
  const auto data = mitk::restricted_multiplier_ideal(model, static_cast<std::size_t>(p), cap);
  const auto chain = mitk::inclusion_chain(model, static_cast<std::size_t>(p), cap);
  std::cout << "p=" << p << " m_p=" << mitk::to_string(data.jump)
            << " m_{p-1}=" << mitk::to_string(data.previousJump) << '\n'
            << "base " << mitk::io::format_coeffs(data.base) << '\n'
            << "pairs " << pairs_text(data.pairs) << '\n'
            << "strictLeft " << (chain.strictLeft ? "true" : "false") << '\n'
            << "strictRight " << (chain.strictRight ? "true" : "false") << '\n';
  maybe_write(out, {{"p", p},
                    {"jump", mitk::to_string(data.jump)},
                    {"previousJump", mitk::to_string(data.previousJump)},
                    {"base", mitk::io::to_json(data.base)},
                    {"pairs", pairs_json(data.pairs)},
                    {"strictLeft", chain.strictLeft},
                    {"strictRight", chain.strictRight}});
  return kExitOk;
}

int cmd_member(const std::string& path, const std::string& betaText, const std::string& mText,
               const std::string& out) {
  const auto doc = mitk::io::read_model_document(path);
  if (doc.kind != mitk::io::ModelKind::monomial) {
    throw mitk::InputError("member: expects a monomial model document");
  }
  const auto beta = parse_beta(betaText);
  const auto m = rational_option(mText, "--m");
  if (beta.size() != doc.monomial.alpha.size()) {
    throw mitk::InputError("--beta: expected " + std::to_string(doc.monomial.alpha.size()) + " entries");
  }
  const bool member = mitk::monomial_membership(doc.monomial, beta, m);
  std::cout << (member ? "true" : "false") << '\n';
  maybe_write(out, {{"m", mitk::to_string(m)}, {"beta", beta}, {"member", member}});
  return kExitOk;
}

int cmd_verify(const std::string& suiteName, const std::string& paramsPath,
               std::optional<std::uint64_t> seed, std::optional<int> grid, std::optional<double> relTol,
               const std::string& out) {
  const auto suite = mitk::suites::parse_suite(suiteName);
  auto opt = paramsPath.empty() ? mitk::suites::SuiteOptions{}
                                : mitk::suites::SuiteOptions::from_json(mitk::io::read_json_file(paramsPath));
  if (seed) opt.seed = *seed;
  if (grid) {
    if (*grid < 16) throw mitk::InputError("--grid: must be >= 16");
    opt.grid = *grid;
  }
  if (relTol) {
    if (!(*relTol > 0.0 && *relTol < 1.0)) throw mitk::InputError("--rel-tol: must lie in (0, 1)");
    opt.relTol = *relTol;
  }
  const auto rep = mitk::suites::run(suite, opt);
  maybe_write(out, mitk::report::to_json(rep));
  std::cout << mitk::report::render_summary(rep);
  return rep.all_pass() ? kExitOk : kExitCheckFailure;
}

int cmd_report(const std::string& path) {
  const auto rep = mitk::report::report_from_json(mitk::io::read_json_file(path));
  std::cout << "tool " << rep.toolVersion << "  generated " << rep.timestamp << '\n';
  std::cout << mitk::report::render_summary(rep);
  return rep.all_pass() ? kExitOk : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiplier-ideal combinatorics and verification of the L2 extension ingredients"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mitk::report::kToolVersion));

  std::string model, cap, mText, betaText, out, suite, params, reportPath;
  int p = 0;
  std::optional<std::uint64_t> seed;
  std::optional<int> grid;
  std::optional<double> relTol;

  auto* jumps = app.add_subcommand("jumps", "jumping numbers up to a cap");
  jumps->add_option("model", model, "model document")->required();
  jumps->add_option("--cap", cap, "upper bound (exact rational)")->required();
  jumps->add_option("--out", out, "write the table as JSON");

  auto* mi = app.add_subcommand("mi", "multiplier ideal coefficients at m");
  mi->add_option("model", model, "model document")->required();
  mi->add_option("--m", mText, "weight (exact rational)")->required();
  mi->add_option("--out", out, "write the result as JSON");

  auto* lct = app.add_subcommand("lct", "log canonical threshold");
  lct->add_option("model", model, "model document")->required();
  lct->add_option("--out", out, "write the result as JSON");

  auto* restricted = app.add_subcommand("restricted", "restricted multiplier ideal at the p-th jump");
  restricted->add_option("model", model, "model document")->required();
  restricted->add_option("--p", p, "jump index")->required();
  restricted->add_option("--cap", cap, "enumeration cap (default: a bound on the p-th jump)");
  restricted->add_option("--out", out, "write the result as JSON");

  auto* member = app.add_subcommand("member", "monomial membership z^beta in I(m psi)");
  member->add_option("model", model, "monomial model document")->required();
  member->add_option("--beta", betaText, "exponents, comma separated")->required();
  member->add_option("--m", mText, "weight (exact rational)")->required();
  member->add_option("--out", out, "write the result as JSON");

  auto* verify = app.add_subcommand("verify", "run verification suites and write a report");
  verify->add_option("suite", suite, "fiber | cutoff | integrals | tube | all")->required();
  verify->add_option("--params", params, "parameter document (JSON)");
  verify->add_option("--seed", seed, "random seed");
  verify->add_option("--grid", grid, "cut-off grid points per unit");
  verify->add_option("--rel-tol", relTol, "quadrature relative tolerance");
  verify->add_option("--out", out, "report path");

  auto* rep = app.add_subcommand("report", "re-render a stored report");
  rep->add_option("path", reportPath, "report document")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*jumps) return cmd_jumps(model, cap, out);
    if (*mi) return cmd_mi(model, mText, out);
    if (*lct) return cmd_lct(model, out);
    if (*restricted) return cmd_restricted(model, p, cap, out);
    if (*member) return cmd_member(model, betaText, mText, out);
    if (*verify) return cmd_verify(suite, params, seed, grid, relTol, out);
    if (*rep) return cmd_report(reportPath);
  } catch (const mitk::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const mitk::PreconditionError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCheckFailure;
  }
  return kExitInputError;
}
