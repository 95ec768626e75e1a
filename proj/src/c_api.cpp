#include "gmean/gmean.h"

#include <cstring>
#include <new>
#include <string>

#include "commands.hpp"
#include "gmean/regularize.hpp"

using gmean::ErrorCode;
using gmean::cmd::Json;

struct gm_document {
  Json json;
  std::string kind;
  std::string status;  // empty unless kind == "report"
};

namespace {

thread_local std::string last_error;

gm_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::Index: return GM_ERR_INDEX;
    case ErrorCode::Domain: return GM_ERR_DOMAIN;
    case ErrorCode::EmptySupport: return GM_ERR_EMPTY_SUPPORT;
    case ErrorCode::Overflow: return GM_ERR_OVERFLOW;
    case ErrorCode::Capacity: return GM_ERR_CAPACITY;
    case ErrorCode::Validation: return GM_ERR_VALIDATION;
    case ErrorCode::Precondition: return GM_ERR_PRECONDITION;
    case ErrorCode::Io: return GM_ERR_IO;
  }
  return GM_ERR_INTERNAL;
}

gm_document* wrap(Json json) {
  auto* d = new gm_document{std::move(json), {}, {}};
  d->kind = d->json.value("kind", "");
  if (d->kind == "report") d->status = d->json.value("status", "");
  return d;
}

void put(gm_document** slot, Json json) {
  if (slot) *slot = wrap(std::move(json));
}

/// Runs body, translating exceptions into status codes. Output slots are
/// cleared first so callers never see stale handles.
template <class F>
gm_status guarded(std::initializer_list<gm_document**> outs, F&& body) {
  for (gm_document** o : outs)
    if (o) *o = nullptr;
  last_error.clear();
  try {
    body();
    return GM_OK;
  } catch (const gmean::Error& e) {
    last_error = e.what();
    for (gm_document** o : outs)
      if (o && *o) {
        delete *o;
        *o = nullptr;
      }
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return GM_ERR_CAPACITY;
  } catch (const std::exception& e) {
    last_error = e.what();
    return GM_ERR_INTERNAL;
  }
}

gm_status missing(const char* what) {
  last_error = std::string("missing argument: ") + what;
  return GM_ERR_ARGUMENT;
}

#define GM_REQUIRE(ptr)              \
  do {                               \
    if (!(ptr)) return missing(#ptr); \
  } while (0)

}  // namespace

extern "C" {

const char* gm_version(void) { return "1.0.0"; }

const char* gm_status_name(gm_status status) {
  switch (status) {
    case GM_OK: return "ok";
    case GM_ERR_INTERNAL: return "internal-error";
    case GM_ERR_VALIDATION: return "validation-error";
    case GM_ERR_PRECONDITION: return "precondition-violation";
    case GM_ERR_CAPACITY: return "capacity-error";
    case GM_ERR_INDEX: return "index-error";
    case GM_ERR_DOMAIN: return "domain-error";
    case GM_ERR_EMPTY_SUPPORT: return "empty-support-error";
    case GM_ERR_OVERFLOW: return "overflow-error";
    case GM_ERR_IO: return "io-error";
    case GM_ERR_ARGUMENT: return "argument-error";
  }
  return "unknown";
}

const char* gm_last_error_message(void) { return last_error.c_str(); }

gm_status gm_document_parse(const char* text, gm_document** out) {
  GM_REQUIRE(text);
  GM_REQUIRE(out);
  return guarded({out}, [&] { put(out, gmean::doc::parse(text)); });
}

gm_status gm_document_load(const char* path, gm_document** out) {
  GM_REQUIRE(path);
  GM_REQUIRE(out);
  return guarded({out}, [&] { put(out, gmean::doc::load(path)); });
}

gm_status gm_document_save(const gm_document* doc, const char* path) {
  GM_REQUIRE(doc);
  GM_REQUIRE(path);
  return guarded({}, [&] { gmean::doc::save(doc->json, path); });
}

gm_status gm_document_to_string(const gm_document* doc, char** out) {
  GM_REQUIRE(doc);
  GM_REQUIRE(out);
  *out = nullptr;
  return guarded({}, [&] {
    const std::string text = gmean::doc::dump(doc->json);
    char* buf = new char[text.size() + 1];
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out = buf;
  });
}

const char* gm_document_kind(const gm_document* doc) { return doc ? doc->kind.c_str() : nullptr; }

const char* gm_document_status(const gm_document* doc) {
  return doc && doc->kind == "report" ? doc->status.c_str() : nullptr;
}

void gm_document_free(gm_document* doc) { delete doc; }

void gm_string_free(char* text) { delete[] text; }

gm_status gm_error_report(const char* command, gm_status status, const char* message, gm_document** out) {
  GM_REQUIRE(out);
  return guarded({out}, [&] {
    Json r = gmean::cmd::error_report(command ? command : "", ErrorCode::Validation, message ? message : "");
    r["error"]["code"] = gm_status_name(status);
    put(out, std::move(r));
  });
}

gm_status gm_apply(const gm_document* space, const gm_document* kernel, unsigned N, int grouped, unsigned threads,
                   gm_document** out) {
  GM_REQUIRE(space);
  GM_REQUIRE(kernel);
  GM_REQUIRE(out);
  return guarded({out}, [&] { put(out, gmean::cmd::apply(space->json, kernel->json, N, grouped != 0, threads)); });
}

gm_status gm_recover(const gm_document* space, const gm_document* mean, unsigned m, int with_oracle, unsigned threads,
                     gm_document** report, gm_document** kernel_out) {
  GM_REQUIRE(space);
  GM_REQUIRE(mean);
  GM_REQUIRE(report);
  return guarded({report, kernel_out}, [&] {
    auto res = gmean::cmd::recover(space->json, mean->json, m, with_oracle != 0, threads);
    put(report, std::move(res.primary));
    put(kernel_out, std::move(*res.secondary));
  });
}

gm_status gm_compose_check(const gm_document* space, const gm_document* kernel, unsigned m, unsigned N,
                           gm_document** report) {
  GM_REQUIRE(space);
  GM_REQUIRE(kernel);
  GM_REQUIRE(report);
  return guarded({report}, [&] { put(report, gmean::cmd::compose_check(space->json, kernel->json, m, N)); });
}

gm_status gm_bhat(const gm_document* space, const gm_document* set, unsigned N, int require_conull,
                  gm_document** report, gm_document** image_out) {
  GM_REQUIRE(space);
  GM_REQUIRE(set);
  GM_REQUIRE(report);
  return guarded({report, image_out}, [&] {
    auto res = gmean::cmd::bhat(space->json, set->json, N, require_conull != 0);
    put(report, std::move(res.primary));
    put(image_out, std::move(*res.secondary));
  });
}

gm_status gm_marginal(const gm_document* space, const gm_document* density, unsigned m, gm_document** out) {
  GM_REQUIRE(space);
  GM_REQUIRE(density);
  GM_REQUIRE(out);
  return guarded({out}, [&] { put(out, gmean::cmd::marginal(space->json, density->json, m)); });
}

gm_status gm_norms(const gm_document* space, const gm_document* kernel, unsigned N, const gm_document* density,
                   const char* r, gm_document** report) {
  GM_REQUIRE(space);
  GM_REQUIRE(kernel);
  GM_REQUIRE(report);
  return guarded({report}, [&] {
    put(report, gmean::cmd::norms(space->json, kernel->json, N, density ? &density->json : nullptr, r ? r : "1"));
  });
}

gm_status gm_check_domination(const gm_document* space, const gm_document* density, int require_condition,
                              gm_document** report) {
  GM_REQUIRE(space);
  GM_REQUIRE(density);
  GM_REQUIRE(report);
  return guarded({report}, [&] {
    put(report, gmean::cmd::check_domination(space->json, density->json, require_condition != 0));
  });
}

gm_status gm_t_set(const gm_document* space, const gm_document* mean, const gm_document* density, unsigned m,
                   const char* r, gm_document** report, gm_document** set_out) {
  GM_REQUIRE(space);
  GM_REQUIRE(mean);
  GM_REQUIRE(density);
  GM_REQUIRE(report);
  return guarded({report, set_out}, [&] {
    auto res = gmean::cmd::t_set(space->json, mean->json, density->json, m, r ? r : "1");
    put(report, std::move(res.primary));
    put(set_out, std::move(*res.secondary));
  });
}

gm_status gm_constants(unsigned N, unsigned m, const char* r, const char* alpha, gm_document** report) {
  GM_REQUIRE(report);
  return guarded({report}, [&] {
    std::optional<std::string> a;
    if (alpha) a = alpha;
    put(report, gmean::cmd::constants(N, m, r ? r : "1", a));
  });
}

gm_status gm_regularize(const gm_document* space, const gm_document* density, const uint64_t* indices, size_t count,
                        gm_document** report, gm_document** density_out) {
  GM_REQUIRE(space);
  GM_REQUIRE(density);
  GM_REQUIRE(report);
  return guarded({report, density_out}, [&] {
    const std::vector<std::uint64_t> list =
        indices ? std::vector<std::uint64_t>(indices, indices + count) : gmean::default_regularization_indices();
    auto res = gmean::cmd::regularize(space->json, density->json, list);
    put(report, std::move(res.primary));
    put(density_out, std::move(*res.secondary));
  });
}

gm_status gm_example_4_1(uint64_t M, uint64_t dense_limit, gm_document** report) {
  GM_REQUIRE(report);
  return guarded({report}, [&] { put(report, gmean::cmd::example_4_1(M, dense_limit)); });
}

gm_status gm_generate_space(const char* mode, uint64_t seed, unsigned n, long zero_atom, gm_document** out) {
  GM_REQUIRE(mode);
  GM_REQUIRE(out);
  return guarded({out}, [&] {
    std::optional<std::size_t> z;
    if (zero_atom >= 0) z = static_cast<std::size_t>(zero_atom);
    put(out, gmean::cmd::generate_space(gmean::parse_mode(mode), seed, n, z));
  });
}

gm_status gm_generate_function(const gm_document* space, uint64_t seed, unsigned order, int symmetric,
                               gm_document** out) {
  GM_REQUIRE(space);
  GM_REQUIRE(out);
  return guarded({out}, [&] { put(out, gmean::cmd::generate_function(space->json, seed, order, symmetric != 0)); });
}

gm_status gm_generate_density(const gm_document* space, uint64_t seed, unsigned N, int product, gm_document** out) {
  GM_REQUIRE(space);
  GM_REQUIRE(out);
  return guarded({out}, [&] { put(out, gmean::cmd::generate_density(space->json, seed, N, product != 0)); });
}

}  // extern "C"
