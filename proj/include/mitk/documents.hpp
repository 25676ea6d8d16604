#pragma once

// JSON model documents. Exact rationals are stored as "p/q" strings and
// component indices are 1-based in documents.

#include "mitk/snc_ideals.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <string>

namespace mitk::io {

using json = nlohmann::ordered_json;

enum class ModelKind { snc, monomial };

struct ModelDocument {
  ModelKind kind = ModelKind::snc;
  SncModel snc;
  MonomialModel monomial;
  std::map<std::string, std::string> metadata;

  bool operator==(const ModelDocument& other) const;
};

json to_json(const ModelDocument& doc);
/// Throws InputError naming the failing field.
ModelDocument model_from_json(const json& j);

ModelDocument read_model_document(const std::filesystem::path& path);
void write_model_document(const std::filesystem::path& path, const ModelDocument& doc);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

json to_json(const IdealCoeffVector& v);
std::string format_coeffs(const IdealCoeffVector& v);  // "(1,1)"

}  // namespace mitk::io
