#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kacward/kacward.h"

namespace {

struct Args {
  std::string file;
  std::optional<double> beta;
  int threads = 1;
  bool timings = false;
  std::string level = "fast";
  int quad_order = 2048;
  int max_len = 12;
  std::optional<double> u;
  std::string pairs;
  bool check_pfaffian = false;
  bool check_dotsenko = false;
  double beta_j_min = 0.1;
  double beta_j_max = 0.8;
  int steps = 8;
  std::vector<int> sizes;
};

int report_error(kw_status s) {
  std::fprintf(stderr, "kacward-cli: %s error: %s\n", kw_status_name(s), kw_last_error());
  return static_cast<int>(s);
}

kw_options* make_options(const Args& a) {
  kw_options* o = kw_options_new();
  if (a.beta) kw_options_set_beta(o, *a.beta);
  kw_options_set_threads(o, a.threads);
  kw_options_set_timings(o, a.timings ? 1 : 0);
  kw_options_set_level(o, a.level.c_str());
  kw_options_set_quad_order(o, a.quad_order);
  kw_options_set_max_len(o, a.max_len);
  if (a.u) kw_options_set_u(o, *a.u);
  kw_options_set_pairs(o, a.pairs.c_str());
  kw_options_set_check_pfaffian(o, a.check_pfaffian ? 1 : 0);
  kw_options_set_check_dotsenko(o, a.check_dotsenko ? 1 : 0);
  kw_options_set_onsager_range(o, a.beta_j_min, a.beta_j_max, a.steps);
  for (int L : a.sizes) kw_options_add_torus_size(o, L);
  return o;
}

using GraphRun = kw_status (*)(const kw_graph*, const kw_options*, char**);

int emit(kw_status s, char* out) {
  if (out != nullptr) {
    std::fputs(out, stdout);
    kw_string_free(out);
  }
  if (s != KW_OK && s != KW_CHECK_FAILED) return report_error(s);
  if (s == KW_CHECK_FAILED) std::fprintf(stderr, "kacward-cli: one or more checks failed\n");
  return static_cast<int>(s);
}

int run_graph_command(const Args& a, GraphRun run) {
  if (a.level != "fast" && a.level != "full") {
    std::fprintf(stderr, "kacward-cli: --level must be fast or full\n");
    return KW_ERR_INPUT;
  }
  kw_graph* g = nullptr;
  kw_status s = kw_graph_from_file(a.file.c_str(), &g);
  if (s != KW_OK) return report_error(s);
  kw_options* o = make_options(a);
  char* out = nullptr;
  s = run(g, o, &out);
  kw_options_free(o);
  kw_graph_free(g);
  return emit(s, out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Ising partition functions and correlators via Kac-Ward determinants"};
  app.require_subcommand(1);
  Args a;
  app.add_option("--threads", a.threads, "Worker threads for enumeration")->check(CLI::PositiveNumber);
  app.add_flag("--timings", a.timings, "Add wall-clock timings to reports");
  app.set_version_flag("--version", std::string(kw_version()));

  auto file_command = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("file", a.file, "Graph JSON file")->required();
    sub->add_option("--beta", a.beta, "Inverse temperature (J-mode files)");
    return sub;
  };
  auto* partition = file_command("partition", "Planar or quasi-planar partition function");
  auto* signed_sum = file_command("signed-sum", "Crossing-signed even-subgraph sum via sqrt det(1 - KW)");
  auto* verify = file_command("verify", "Determinant routes against enumeration oracles");
  verify->add_option("--level", a.level, "fast or full")->check(CLI::IsMember({"fast", "full"}));
  auto* correlator = file_command("correlator", "Order-disorder correlators");
  correlator->add_option("--pairs", a.pairs, "Pairs spec: inline JSON or file path")->required();
  correlator->add_flag("--check-pfaffian", a.check_pfaffian, "Compare with the Pfaffian of pair correlators");
  correlator->add_flag("--check-dotsenko", a.check_dotsenko, "Check Dotsenko relations around edges");
  auto* zeta = file_command("zeta", "Zeta product against det(1 - u KW)");
  zeta->add_option("--u", a.u, "Expansion parameter")->required();
  zeta->add_option("--max-len", a.max_len, "Longest primitive class in the product");

  auto* onsager = app.add_subcommand("onsager", "Onsager pressure against torus determinants (CSV)");
  onsager->add_option("--betaJ-min", a.beta_j_min, "First betaJ");
  onsager->add_option("--betaJ-max", a.beta_j_max, "Last betaJ");
  onsager->add_option("--steps", a.steps, "Number of rows");
  onsager->add_option("--quad-order", a.quad_order, "Quadrature grid size per axis");
  onsager->add_option("--L", a.sizes, "Torus sizes (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return KW_ERR_INPUT;
  }

  if (*partition) return run_graph_command(a, kw_run_partition);
  if (*signed_sum) return run_graph_command(a, kw_run_signed_sum);
  if (*verify) return run_graph_command(a, kw_run_verify);
  if (*correlator) return run_graph_command(a, kw_run_correlator);
  if (*zeta) return run_graph_command(a, kw_run_zeta);
  if (*onsager) {
    kw_options* o = make_options(a);
    char* out = nullptr;
    const kw_status s = kw_run_onsager(o, &out);
    kw_options_free(o);
    return emit(s, out);
  }
  return KW_ERR_INPUT;
}
