#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kacward/lattice.hpp"

namespace kw {

struct CommandOptions {
  std::optional<double> beta;
  int threads = 1;
  bool timings = false;
  std::string level = "fast";
  int quad_order = kDefaultQuadOrder;
  int max_len = 12;
  std::optional<double> u;
  std::string pairs;  // inline JSON or a path
  bool check_pfaffian = false;
  bool check_dotsenko = false;
  double beta_j_min = 0.1;
  double beta_j_max = 0.8;
  int steps = 8;
  std::vector<int> sizes;  // torus sizes for onsager; empty means {128}
};

// status 0 when every check passes, 1 otherwise. Errors are thrown as kw::Error.
struct CommandResult {
  std::string output;
  int status = 0;
};

CommandResult run_partition(std::string_view graph_text, const CommandOptions& opts);
CommandResult run_signed_sum(std::string_view graph_text, const CommandOptions& opts);
CommandResult run_verify(std::string_view graph_text, const CommandOptions& opts);
CommandResult run_correlator(std::string_view graph_text, const CommandOptions& opts);
CommandResult run_zeta(std::string_view graph_text, const CommandOptions& opts);
CommandResult run_onsager(const CommandOptions& opts);

}  // namespace kw
