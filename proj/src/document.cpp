#include "gmean/document.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace gmean::doc {

namespace {

constexpr std::array<std::string_view, 5> kKindNames{"space", "function", "density", "set", "report"};

}  // namespace

std::string_view to_string(Kind kind) noexcept { return kKindNames[static_cast<std::size_t>(kind)]; }

Json parse(std::string_view text) {
  Json d = Json::parse(text, nullptr, false);
  if (d.is_discarded()) fail(ErrorCode::Validation, "document is not valid JSON");
  if (!d.is_object()) fail(ErrorCode::Validation, "document must be a JSON object");
  kind_of(d);
  if (!d.contains("schema_version") || !d["schema_version"].is_number_integer())
    fail(ErrorCode::Validation, "document lacks an integer schema_version");
  if (d["schema_version"].get<int>() != kSchemaVersion)
    fail(ErrorCode::Validation, "unsupported schema_version " + d["schema_version"].dump());
  if (kind_of(d) != Kind::Report || d.contains("mode")) mode_of_doc(d);
  return d;
}

Json load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse(buf.str());
  } catch (const Error& e) {
    fail(e.code(), path + ": " + e.what());
  }
}

void save(const Json& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot write '" + path + "'");
  out << dump(doc);
  if (!out) fail(ErrorCode::Io, "write to '" + path + "' failed");
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

Kind kind_of(const Json& doc) {
  if (!doc.contains("kind") || !doc["kind"].is_string()) fail(ErrorCode::Validation, "document lacks a kind");
  const auto name = doc["kind"].get<std::string>();
  for (std::size_t i = 0; i < kKindNames.size(); ++i)
    if (name == kKindNames[i]) return static_cast<Kind>(i);
  fail(ErrorCode::Validation, "unknown document kind '" + name + "'");
}

Mode mode_of_doc(const Json& doc) {
  if (!doc.contains("mode") || !doc["mode"].is_string()) fail(ErrorCode::Validation, "document lacks a mode");
  return parse_mode(doc["mode"].get<std::string>());
}

void expect_kind(const Json& doc, Kind kind, std::string_view role) {
  if (kind_of(doc) != kind)
    fail(ErrorCode::Validation, std::string(role) + " document must have kind '" + std::string(to_string(kind)) +
                                    "', got '" + doc["kind"].get<std::string>() + "'");
}

void expect_same_mode(const Json& a, const Json& b) {
  if (mode_of_doc(a) != mode_of_doc(b)) fail(ErrorCode::Validation, "input documents mix exact and float modes");
}

Json header(Kind kind, Mode mode) {
  Json d = Json::object();
  d["kind"] = std::string(to_string(kind));
  d["schema_version"] = kSchemaVersion;
  d["mode"] = std::string(gmean::to_string(mode));
  return d;
}

Json report(std::string_view command, Mode mode) {
  Json d = header(Kind::Report, mode);
  d["command"] = std::string(command);
  d["status"] = "ok";
  return d;
}

Json encode(const Rational& v) { return format_scalar(v); }

Json encode(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::size_t get_size(const Json& doc, std::string_view field) {
  const std::string key(field);
  if (!doc.contains(key) || !doc[key].is_number_integer() || doc[key].get<std::int64_t>() < 0)
    fail(ErrorCode::Validation, "field '" + key + "' must be a nonnegative integer");
  return doc[key].get<std::size_t>();
}

const Json& get_array(const Json& doc, std::string_view field) {
  const std::string key(field);
  if (!doc.contains(key) || !doc[key].is_array()) fail(ErrorCode::Validation, "field '" + key + "' must be an array");
  return doc[key];
}

}  // namespace gmean::doc
