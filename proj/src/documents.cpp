#include "mitk/documents.hpp"

#include "mitk/errors.hpp"

#include <fstream>
#include <limits>
#include <sstream>

namespace mitk::io {

namespace {

Rational rational_field(const json& j, const std::string& field) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  } catch (const std::invalid_argument& e) {
    throw InputError(field + ": " + e.what());
  }
  throw InputError(field + ": expected an exact rational string \"p/q\" or an integer");
}

std::int64_t integer_field(const json& j, const std::string& field) {
  if (!j.is_number_integer()) throw InputError(field + ": expected an integer");
  return j.get<std::int64_t>();
}

const json& required(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw InputError(where + key + ": missing");
  return j.at(key);
}

}  // namespace

bool ModelDocument::operator==(const ModelDocument& other) const {
  if (kind != other.kind || metadata != other.metadata) return false;
  if (kind == ModelKind::monomial) return monomial.alpha == other.monomial.alpha;
  if (snc.c != other.snc.c || snc.intersections != other.snc.intersections ||
      snc.components.size() != other.snc.components.size()) {
    return false;
  }
  for (std::size_t i = 0; i < snc.components.size(); ++i) {
    const auto& a = snc.components[i];
    const auto& b = other.snc.components[i];
    if (a.name != b.name || a.a != b.a || a.b != b.b) return false;
  }
  return true;
}

json to_json(const ModelDocument& doc) {
  json j;
  if (doc.kind == ModelKind::snc) {
    j["kind"] = "snc";
    j["c"] = to_string(doc.snc.c);
    json comps = json::array();
    for (const auto& c : doc.snc.components) comps.push_back({{"name", c.name}, {"a", c.a}, {"b", c.b}});
    j["components"] = comps;
    json pairs = json::array();
    for (const auto& [a, b] : doc.snc.intersections) pairs.push_back({a + 1, b + 1});
    j["intersections"] = pairs;
  } else {
    j["kind"] = "monomial";
    json alpha = json::array();
    for (const auto& a : doc.monomial.alpha) alpha.push_back(to_string(a));
    j["alpha"] = alpha;
  }
  j["metadata"] = doc.metadata;
  return j;
}

ModelDocument model_from_json(const json& j) {
  if (!j.is_object()) throw InputError("document: expected a JSON object");
  ModelDocument doc;
  const json& kind = required(j, "kind", "");
  if (!kind.is_string()) throw InputError("kind: expected \"snc\" or \"monomial\"");
  const auto k = kind.get<std::string>();
  if (k == "snc") {
    doc.kind = ModelKind::snc;
    doc.snc.c = rational_field(required(j, "c", ""), "c");
    const json& comps = required(j, "components", "");
    if (!comps.is_array()) throw InputError("components: expected an array");
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const std::string where = "components[" + std::to_string(i + 1) + "].";
      DivisorComponent c;
      c.name = comps[i].value("name", "D" + std::to_string(i + 1));
      c.a = integer_field(required(comps[i], "a", where), where + "a");
      c.b = comps[i].contains("b") ? integer_field(comps[i]["b"], where + "b") : 0;
      doc.snc.components.push_back(std::move(c));
    }
    if (j.contains("intersections")) {
      const json& pairs = j["intersections"];
      if (!pairs.is_array()) throw InputError("intersections: expected an array of pairs");
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        const std::string where = "intersections[" + std::to_string(i + 1) + "]";
        if (!pairs[i].is_array() || pairs[i].size() != 2) {
          throw InputError(where + ": expected a pair [j, k]");
        }
        const std::int64_t a = integer_field(pairs[i][0], where);
        const std::int64_t b = integer_field(pairs[i][1], where);
        if (a < 1 || b < 1) throw InputError(where + ": indices are 1-based");
        doc.snc.intersections.emplace_back(static_cast<std::size_t>(a - 1),
                                           static_cast<std::size_t>(b - 1));
      }
    }
    normalize_intersections(doc.snc);
    doc.snc.validate();
  } else if (k == "monomial") {
    doc.kind = ModelKind::monomial;
    const json& alpha = required(j, "alpha", "");
    if (!alpha.is_array()) throw InputError("alpha: expected an array");
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      doc.monomial.alpha.push_back(rational_field(alpha[i], "alpha[" + std::to_string(i + 1) + "]"));
    }
    doc.monomial.validate();
  } else {
    throw InputError("kind: expected \"snc\" or \"monomial\", got \"" + k + "\"");
  }
  if (j.contains("metadata")) {
    const json& meta = j["metadata"];
    if (!meta.is_object()) throw InputError("metadata: expected an object of strings");
    for (const auto& [key, value] : meta.items()) {
      if (!value.is_string()) throw InputError("metadata." + key + ": expected a string");
      doc.metadata[key] = value.get<std::string>();
    }
  }
  return doc;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

ModelDocument read_model_document(const std::filesystem::path& path) {
  return model_from_json(read_json_file(path));
}

void write_model_document(const std::filesystem::path& path, const ModelDocument& doc) {
  write_json_file(path, to_json(doc));
}

json to_json(const IdealCoeffVector& v) {
  json out = json::array();
  for (const auto& c : v.coeffs) {
    if (c <= std::numeric_limits<std::int64_t>::max()) {
      out.push_back(c.convert_to<std::int64_t>());
    } else {
      out.push_back(c.str());
    }
  }
  return out;
}

std::string format_coeffs(const IdealCoeffVector& v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.coeffs.size(); ++i) os << (i ? "," : "") << v.coeffs[i];
  os << ')';
  return os.str();
}

}  // namespace mitk::io
