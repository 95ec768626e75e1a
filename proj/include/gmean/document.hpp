#pragma once

// JSON documents: one object per file, keys sorted, two-space indentation.
//
//   {"kind": "space",    "mode": M, "schema_version": 1, "weights": [...]}
//   {"kind": "function", "mode": M, "schema_version": 1, "order": k, "points": n, "values": [...]}
//   {"kind": "density",  "mode": M, "schema_version": 1, "order": N, "points": n, "values": [...],
//    "allow_unnormalized": false}
//   {"kind": "set",      "mode": M, "schema_version": 1, "order": k, "points": n, "indicator": [...]}
//   {"kind": "report",   "mode": M, "schema_version": 1, "command": ..., "status": ..., ...}
//
// Mode "exact" stores every value as a string "p/q" (or "p"); mode "float"
// stores JSON numbers in shortest round-trip form. "values" and "indicator"
// are flat row-major arrays: (x_0..x_{k-1}) sits at sum_j x_j n^(k-1-j).

#include <string>
#include <string_view>

#include "json.hpp"

#include "gmean/integrability.hpp"

namespace gmean::doc {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

enum class Kind { Space, Function, Density, Set, Report };

std::string_view to_string(Kind kind) noexcept;

/// Parses and checks kind/schema_version/mode. validation-error on failure.
Json parse(std::string_view text);
Json load(const std::string& path);
void save(const Json& doc, const std::string& path);

/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string dump(const Json& doc);

Kind kind_of(const Json& doc);
Mode mode_of_doc(const Json& doc);
void expect_kind(const Json& doc, Kind kind, std::string_view role);
void expect_same_mode(const Json& a, const Json& b);

Json header(Kind kind, Mode mode);
Json report(std::string_view command, Mode mode);

Json encode(const Rational& v);
Json encode(double v);  // non-finite values become the strings "inf", "-inf", "nan"

template <Scalar T>
T decode_scalar(const Json& v, std::string_view field) {
  if constexpr (std::is_same_v<T, Rational>) {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return from_int<Rational>(v.get<std::int64_t>());
    fail(ErrorCode::Validation, std::string(field) + ": exact values must be \"p/q\" strings or integers");
  } else {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return to_double(parse_rational(v.get<std::string>()));
    fail(ErrorCode::Validation, std::string(field) + ": float values must be numbers");
  }
}

template <Scalar T>
Json encode_values(std::span<const T> values) {
  Json arr = Json::array();
  for (const T& v : values) arr.push_back(encode(v));
  return arr;
}

std::size_t get_size(const Json& doc, std::string_view field);
const Json& get_array(const Json& doc, std::string_view field);

// ---------------------------------------------------------------------------

template <Scalar T>
Json encode_space(const MeasureSpace<T>& space) {
  Json d = header(Kind::Space, mode_of<T>());
  d["weights"] = encode_values<T>(space.weights());
  return d;
}

template <Scalar T>
SpacePtr<T> decode_space(const Json& d) {
  expect_kind(d, Kind::Space, "space");
  std::vector<T> weights;
  for (const Json& w : get_array(d, "weights")) weights.push_back(decode_scalar<T>(w, "weights"));
  return make_space<T>(std::move(weights));
}

template <Scalar T>
Json encode_function(const GridFunction<T>& f) {
  Json d = header(Kind::Function, mode_of<T>());
  d["order"] = f.order();
  d["points"] = f.points();
  d["values"] = encode_values<T>(f.values());
  return d;
}

namespace detail {

template <Scalar T>
GridFunction<T> decode_grid(const Json& d, const SpacePtr<T>& space) {
  const std::size_t order = get_size(d, "order");
  if (d.contains("points") && get_size(d, "points") != space->size())
    fail(ErrorCode::Validation, "document was written for a space with " + std::to_string(get_size(d, "points")) +
                                    " points, space has " + std::to_string(space->size()));
  const Json& arr = get_array(d, "values");
  const std::size_t expected = grid_size(space->size(), order);
  if (arr.size() != expected)
    fail(ErrorCode::Validation, "values has length " + std::to_string(arr.size()) + ", expected n^order = " +
                                    std::to_string(expected));
  std::vector<T> values;
  values.reserve(arr.size());
  for (const Json& v : arr) values.push_back(decode_scalar<T>(v, "values"));
  return GridFunction<T>(space, order, std::move(values));
}

}  // namespace detail

template <Scalar T>
GridFunction<T> decode_function(const Json& d, const SpacePtr<T>& space) {
  expect_kind(d, Kind::Function, "function");
  return detail::decode_grid(d, space);
}

template <Scalar T>
Json encode_density(const SymmetricDensity<T>& P, bool allow_unnormalized = false) {
  Json d = header(Kind::Density, mode_of<T>());
  d["order"] = P.order();
  d["points"] = P.grid().points();
  d["values"] = encode_values<T>(P.grid().values());
  d["allow_unnormalized"] = allow_unnormalized;
  return d;
}

template <Scalar T>
SymmetricDensity<T> decode_density(const Json& d, const SpacePtr<T>& space) {
  expect_kind(d, Kind::Density, "density");
  bool allow = false;
  if (d.contains("allow_unnormalized")) {
    if (!d["allow_unnormalized"].is_boolean()) fail(ErrorCode::Validation, "allow_unnormalized must be a boolean");
    allow = d["allow_unnormalized"].get<bool>();
  }
  return SymmetricDensity<T>::make(detail::decode_grid(d, space), !allow);
}

template <Scalar T>
Json encode_set(const MeasurableSet<T>& s) {
  Json d = header(Kind::Set, mode_of<T>());
  d["order"] = s.order();
  d["points"] = s.space().size();
  Json arr = Json::array();
  for (std::size_t i = 0; i < s.size(); ++i) arr.push_back(s.contains(i));
  d["indicator"] = std::move(arr);
  return d;
}

template <Scalar T>
MeasurableSet<T> decode_set(const Json& d, const SpacePtr<T>& space) {
  expect_kind(d, Kind::Set, "set");
  const std::size_t order = get_size(d, "order");
  const Json& arr = get_array(d, "indicator");
  MeasurableSet<T> s(space, order);
  if (arr.size() != s.size())
    fail(ErrorCode::Validation, "indicator has length " + std::to_string(arr.size()) + ", expected n^order = " +
                                    std::to_string(s.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_boolean()) fail(ErrorCode::Validation, "indicator entries must be booleans");
    if (arr[i].get<bool>()) s.insert(i);
  }
  return s;
}

inline Json encode_tuple(const Tuple& t) {
  Json arr = Json::array();
  for (std::size_t x : t) arr.push_back(x);
  return arr;
}

}  // namespace gmean::doc
