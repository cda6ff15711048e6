#ifndef KACWARD_H
#define KACWARD_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(KW_BUILDING_LIBRARY)
#define KW_API __attribute__((visibility("default")))
#else
#define KW_API
#endif

/* Status codes double as CLI exit codes. */
typedef enum kw_status {
  KW_OK = 0,
  KW_CHECK_FAILED = 1,
  KW_ERR_INPUT = 2,
  KW_ERR_GEOMETRY = 3,
  KW_ERR_SCALE = 4,
  KW_ERR_PRECONDITION = 5,
  KW_ERR_NUMERIC = 6,
  KW_ERR_INTERNAL = 7
} kw_status;

typedef struct kw_graph kw_graph;
typedef struct kw_options kw_options;

KW_API const char* kw_version(void);
KW_API const char* kw_status_name(kw_status status);
/* Message of the last failing call on this thread; empty if none. */
KW_API const char* kw_last_error(void);
KW_API void kw_string_free(char* s);

/* Parses and validates a graph document. */
KW_API kw_status kw_graph_from_json(const char* text, kw_graph** out);
KW_API kw_status kw_graph_from_file(const char* path, kw_graph** out);
KW_API void kw_graph_free(kw_graph* g);
KW_API int kw_graph_vertex_count(const kw_graph* g);
KW_API int kw_graph_edge_count(const kw_graph* g);
KW_API int kw_graph_crossing_count(const kw_graph* g);
/* Canonical re-serialization of the parsed document. */
KW_API kw_status kw_graph_serialize(const kw_graph* g, char** out);

KW_API kw_options* kw_options_new(void);
KW_API void kw_options_free(kw_options* o);
KW_API void kw_options_set_beta(kw_options* o, double beta);
KW_API void kw_options_set_threads(kw_options* o, int threads);
KW_API void kw_options_set_timings(kw_options* o, int enabled);
KW_API kw_status kw_options_set_level(kw_options* o, const char* level);
KW_API void kw_options_set_quad_order(kw_options* o, int n);
KW_API void kw_options_set_max_len(kw_options* o, int max_len);
KW_API void kw_options_set_u(kw_options* o, double u);
KW_API kw_status kw_options_set_pairs(kw_options* o, const char* pairs);
KW_API void kw_options_set_check_pfaffian(kw_options* o, int enabled);
KW_API void kw_options_set_check_dotsenko(kw_options* o, int enabled);
KW_API void kw_options_set_onsager_range(kw_options* o, double beta_j_min, double beta_j_max, int steps);
KW_API void kw_options_add_torus_size(kw_options* o, int L);

/* Each run writes a report (JSON, or CSV for onsager) to *out, freed with kw_string_free.
   The report is also produced for KW_CHECK_FAILED; on errors *out is NULL. */
KW_API kw_status kw_run_partition(const kw_graph* g, const kw_options* o, char** out);
KW_API kw_status kw_run_signed_sum(const kw_graph* g, const kw_options* o, char** out);
KW_API kw_status kw_run_verify(const kw_graph* g, const kw_options* o, char** out);
KW_API kw_status kw_run_correlator(const kw_graph* g, const kw_options* o, char** out);
KW_API kw_status kw_run_zeta(const kw_graph* g, const kw_options* o, char** out);
KW_API kw_status kw_run_onsager(const kw_options* o, char** out);

KW_API kw_status kw_critical_beta(double j, double* out);
KW_API kw_status kw_onsager_pressure(double beta, double j, int quad_order, double* out);
KW_API kw_status kw_torus_pressure(int L, double beta, double j, double* out);
/* log Z of a planar graph file in J-mode. */
KW_API kw_status kw_log_partition(const kw_graph* g, double beta, double* out);

#ifdef __cplusplus
}
#endif

#endif
