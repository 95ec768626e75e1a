#pragma once

// Command layer shared by the C API: documents in, documents out. Every
// report carries "status": "ok", "failed" (a checked inequality or identity
// did not hold) or "precondition-violation".

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gmean/document.hpp"

namespace gmean::cmd {

using doc::Json;

struct Outputs {
  Json primary;                 // report, or the result document for apply/marginal/generate
  std::optional<Json> secondary;  // kernel (recover), image (bhat), final density (regularize)
};

Json apply(const Json& space, const Json& kernel, std::size_t N, bool grouped, unsigned threads);
Outputs recover(const Json& space, const Json& mean, std::size_t m, bool oracle, unsigned threads);
Json compose_check(const Json& space, const Json& kernel, std::size_t m, std::size_t N);
Outputs bhat(const Json& space, const Json& set, std::size_t N, bool require_conull);
Json marginal(const Json& space, const Json& density, std::size_t m);
Json norms(const Json& space, const Json& kernel, std::size_t N, const Json* density, const std::string& r);
Json check_domination(const Json& space, const Json& density, bool require_condition);
Outputs t_set(const Json& space, const Json& mean, const Json& density, std::size_t m, const std::string& r);
Json constants(unsigned N, unsigned m, const std::string& r, const std::optional<std::string>& alpha);
Outputs regularize(const Json& space, const Json& density, const std::vector<std::uint64_t>& indices);
Json example_4_1(std::uint64_t M, std::uint64_t dense_limit);

Json generate_space(Mode mode, std::uint64_t seed, std::size_t n, std::optional<std::size_t> zero_atom);
Json generate_function(const Json& space, std::uint64_t seed, std::size_t order, bool symmetric);
Json generate_density(const Json& space, std::uint64_t seed, std::size_t N, bool product);

Json error_report(std::string_view command, ErrorCode code, std::string_view message);
Json internal_error_report(std::string_view command, std::string_view message);

/// Parses an exponent r >= 1 given as "p" or "p/q".
double parse_exponent(const std::string& text);

}  // namespace gmean::cmd
