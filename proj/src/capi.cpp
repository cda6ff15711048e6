#include "kacward/kacward.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "kacward/commands.hpp"
#include "kacward/error.hpp"
#include "kacward/graph_file.hpp"
#include "kacward/kac_ward.hpp"
#include "kacward/lattice.hpp"

struct kw_graph {
  std::string text;
  kw::GraphFile file;
  kw::FaithfulProjection proj;
};

struct kw_options {
  kw::CommandOptions opts;
};

namespace {

thread_local std::string last_error;

kw_status to_status(kw::ErrorCode c) {
  switch (c) {
    case kw::ErrorCode::check_failed: return KW_CHECK_FAILED;
    case kw::ErrorCode::input: return KW_ERR_INPUT;
    case kw::ErrorCode::geometry: return KW_ERR_GEOMETRY;
    case kw::ErrorCode::scale: return KW_ERR_SCALE;
    case kw::ErrorCode::precondition: return KW_ERR_PRECONDITION;
    case kw::ErrorCode::numeric: return KW_ERR_NUMERIC;
  }
  return KW_ERR_INTERNAL;
}

template <class F>
kw_status guarded(F&& f) {
  last_error.clear();
  try {
    return f();
  } catch (const kw::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return KW_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return KW_ERR_INTERNAL;
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (p == nullptr) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

kw_status null_arg(const char* what) {
  last_error = std::string("null argument: ") + what;
  return KW_ERR_INPUT;
}

template <class Run>
kw_status run_graph(const kw_graph* g, const kw_options* o, char** out, Run run) {
  if (out == nullptr) return null_arg("out");
  *out = nullptr;
  if (g == nullptr) return null_arg("graph");
  const kw::CommandOptions defaults;
  const kw::CommandOptions& opts = o != nullptr ? o->opts : defaults;
  return guarded([&] {
    const kw::CommandResult r = run(g->text, opts);
    *out = dup(r.output);
    return r.status == 0 ? KW_OK : KW_CHECK_FAILED;
  });
}

}  // namespace

extern "C" {

const char* kw_version(void) { return "0.1.0"; }

const char* kw_status_name(kw_status status) {
  switch (status) {
    case KW_OK: return "ok";
    case KW_CHECK_FAILED: return "check_failed";
    case KW_ERR_INPUT: return "input";
    case KW_ERR_GEOMETRY: return "geometry";
    case KW_ERR_SCALE: return "scale";
    case KW_ERR_PRECONDITION: return "precondition";
    case KW_ERR_NUMERIC: return "numeric";
    case KW_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* kw_last_error(void) { return last_error.c_str(); }

void kw_string_free(char* s) { std::free(s); }

kw_status kw_graph_from_json(const char* text, kw_graph** out) {
  if (out == nullptr) return null_arg("out");
  *out = nullptr;
  if (text == nullptr) return null_arg("text");
  return guarded([&] {
    auto g = new kw_graph;
    try {
      g->text = text;
      g->file = kw::parse_graph_file(g->text);
      g->proj = kw::FaithfulProjection(g->file.projection);
    } catch (...) {
      delete g;
      throw;
    }
    *out = g;
    return KW_OK;
  });
}

kw_status kw_graph_from_file(const char* path, kw_graph** out) {
  if (out == nullptr) return null_arg("out");
  *out = nullptr;
  if (path == nullptr) return null_arg("path");
  std::string text;
  const kw_status s = guarded([&] {
    text = kw::read_text_file(path);
    return KW_OK;
  });
  if (s != KW_OK) return s;
  return kw_graph_from_json(text.c_str(), out);
}

void kw_graph_free(kw_graph* g) { delete g; }

int kw_graph_vertex_count(const kw_graph* g) { return g ? g->proj.vertex_count() : -1; }
int kw_graph_edge_count(const kw_graph* g) { return g ? g->proj.edge_count() : -1; }
int kw_graph_crossing_count(const kw_graph* g) { return g ? static_cast<int>(g->proj.crossings().size()) : -1; }

kw_status kw_graph_serialize(const kw_graph* g, char** out) {
  if (out == nullptr) return null_arg("out");
  *out = nullptr;
  if (g == nullptr) return null_arg("graph");
  return guarded([&] {
    *out = dup(kw::serialize_graph_file(g->file));
    return KW_OK;
  });
}

kw_options* kw_options_new(void) { return new (std::nothrow) kw_options; }
void kw_options_free(kw_options* o) { delete o; }
void kw_options_set_beta(kw_options* o, double beta) { if (o) o->opts.beta = beta; }
void kw_options_set_threads(kw_options* o, int threads) { if (o) o->opts.threads = threads < 1 ? 1 : threads; }
void kw_options_set_timings(kw_options* o, int enabled) { if (o) o->opts.timings = enabled != 0; }

kw_status kw_options_set_level(kw_options* o, const char* level) {
  if (o == nullptr) return null_arg("options");
  if (level == nullptr) return null_arg("level");
  const std::string l = level;
  if (l != "fast" && l != "full") {
    last_error = "level must be fast or full";
    return KW_ERR_INPUT;
  }
  o->opts.level = l;
  return KW_OK;
}

void kw_options_set_quad_order(kw_options* o, int n) { if (o) o->opts.quad_order = n; }
void kw_options_set_max_len(kw_options* o, int max_len) { if (o) o->opts.max_len = max_len; }
void kw_options_set_u(kw_options* o, double u) { if (o) o->opts.u = u; }

kw_status kw_options_set_pairs(kw_options* o, const char* pairs) {
  if (o == nullptr) return null_arg("options");
  if (pairs == nullptr) return null_arg("pairs");
  o->opts.pairs = pairs;
  return KW_OK;
}

void kw_options_set_check_pfaffian(kw_options* o, int enabled) { if (o) o->opts.check_pfaffian = enabled != 0; }
void kw_options_set_check_dotsenko(kw_options* o, int enabled) { if (o) o->opts.check_dotsenko = enabled != 0; }

void kw_options_set_onsager_range(kw_options* o, double beta_j_min, double beta_j_max, int steps) {
  if (!o) return;
  o->opts.beta_j_min = beta_j_min;
  o->opts.beta_j_max = beta_j_max;
  o->opts.steps = steps;
}

void kw_options_add_torus_size(kw_options* o, int L) { if (o) o->opts.sizes.push_back(L); }

kw_status kw_run_partition(const kw_graph* g, const kw_options* o, char** out) {
  return run_graph(g, o, out, kw::run_partition);
}
kw_status kw_run_signed_sum(const kw_graph* g, const kw_options* o, char** out) {
  return run_graph(g, o, out, kw::run_signed_sum);
}
kw_status kw_run_verify(const kw_graph* g, const kw_options* o, char** out) {
  return run_graph(g, o, out, kw::run_verify);
}
kw_status kw_run_correlator(const kw_graph* g, const kw_options* o, char** out) {
  return run_graph(g, o, out, kw::run_correlator);
}
kw_status kw_run_zeta(const kw_graph* g, const kw_options* o, char** out) {
  return run_graph(g, o, out, kw::run_zeta);
}

kw_status kw_run_onsager(const kw_options* o, char** out) {
  if (out == nullptr) return null_arg("out");
  *out = nullptr;
  const kw::CommandOptions defaults;
  const kw::CommandOptions& opts = o != nullptr ? o->opts : defaults;
  return guarded([&] {
    *out = dup(kw::run_onsager(opts).output);
    return KW_OK;
  });
}

kw_status kw_critical_beta(double j, double* out) {
  if (out == nullptr) return null_arg("out");
  return guarded([&] {
    *out = kw::critical_beta(j);
    return KW_OK;
  });
}

kw_status kw_onsager_pressure(double beta, double j, int quad_order, double* out) {
  if (out == nullptr) return null_arg("out");
  return guarded([&] {
    *out = kw::onsager_pressure(beta, j, quad_order);
    return KW_OK;
  });
}

kw_status kw_torus_pressure(int L, double beta, double j, double* out) {
  if (out == nullptr) return null_arg("out");
  return guarded([&] {
    *out = kw::torus_pressure({L, j, beta});
    return KW_OK;
  });
}

kw_status kw_log_partition(const kw_graph* g, double beta, double* out) {
  if (out == nullptr) return null_arg("out");
  if (g == nullptr) return null_arg("graph");
  return guarded([&] {
    if (g->file.mode != kw::WeightMode::coupling) kw::fail(kw::ErrorCode::input, "graph has no couplings J");
    const auto k = kw::build_kac_ward(g->proj);
    *out = kw::planar_partition_function(g->proj, k, g->file.values, beta).log_z;
    return KW_OK;
  });
}

}  // extern "C"
