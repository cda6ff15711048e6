#include "kacward/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "kacward/correlators.hpp"
#include "kacward/error.hpp"
#include "kacward/graph_file.hpp"
#include "kacward/kac_ward.hpp"
#include "kacward/oracle.hpp"
#include "kacward/report.hpp"
#include "kacward/zeta.hpp"

namespace kw {

namespace {

using Clock = std::chrono::steady_clock;

struct Loaded {
  GraphFile file;
  FaithfulProjection proj;
  KacWardMatrix k;
  std::vector<double> w;
  std::vector<double> j;  // couplings; empty in W-mode
  double beta = 1.0;
};

std::string options_key(const CommandOptions& o) {
  std::ostringstream ss;
  ss << "beta=" << (o.beta ? format_double(*o.beta) : "none") << ";level=" << o.level << ";quad=" << o.quad_order
     << ";max_len=" << o.max_len << ";u=" << (o.u ? format_double(*o.u) : "none") << ";pairs=" << o.pairs
     << ";pf=" << o.check_pfaffian << ";dot=" << o.check_dotsenko << ";range=" << format_double(o.beta_j_min) << ","
     << format_double(o.beta_j_max) << "," << o.steps << ";L=";
  for (int L : o.sizes) ss << L << ",";
  return ss.str();
}

std::string digest(std::string_view text, const CommandOptions& o) {
  std::string all(text);
  all += '\n';
  all += options_key(o);
  return fnv1a_digest(all);
}

Loaded load(std::string_view text, const CommandOptions& opts) {
  Loaded g;
  g.file = parse_graph_file(text);
  g.proj = FaithfulProjection(g.file.projection);
  g.k = build_kac_ward(g.proj);
  if (g.file.mode == WeightMode::coupling) {
    if (!opts.beta) fail(ErrorCode::input, "--beta is required for files with couplings J");
    if (!std::isfinite(*opts.beta)) fail(ErrorCode::input, "--beta must be finite");
    g.beta = *opts.beta;
    g.j = g.file.values;
    g.w = WeightAssignment::from_couplings(g.j, g.beta).w;
  } else {
    g.w = g.file.values;
  }
  return g;
}

std::vector<CrossedPair> crossed_pairs(const Loaded& g) {
  std::vector<CrossedPair> out;
  for (const auto& c : g.file.crossed_pairs) {
    out.push_back(make_crossed_pair(g.proj, static_cast<int>(c.alpha), g.proj.edge_index(c.edge_plus),
                                    g.proj.edge_index(c.edge_minus)));
  }
  return out;
}

// couplings used by the spin oracles; W-mode maps W -> atanh(W) at beta = 1
bool oracle_couplings(const Loaded& g, std::vector<double>& j, double& beta) {
  if (g.file.mode == WeightMode::coupling) {
    j = g.j;
    beta = g.beta;
    return true;
  }
  j.clear();
  for (double w : g.w) {
    if (!(std::abs(w) < 1.0)) return false;
    j.push_back(std::atanh(w));
  }
  beta = 1.0;
  return true;
}

ReportJson complex_json(cplx z) { return ReportJson::array({z.real(), z.imag()}); }

struct Checks {
  ReportJson list = ReportJson::array();
  bool all = true;

  void add(const std::string& name, double computed, double reference, double residual, double tolerance,
           ReportJson extra = ReportJson::object()) {
    const bool pass = residual <= tolerance;
    ReportJson c;
    c["name"] = name;
    c["value"] = computed;
    c["reference"] = reference;
    c["residual"] = residual;
    c["tolerance"] = tolerance;
    c["pass"] = pass;
    for (auto it = extra.begin(); it != extra.end(); ++it) c[it.key()] = it.value();
    list.push_back(c);
    all = all && pass;
  }
};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

void add_timing(ReportJson& r, const CommandOptions& opts, Clock::time_point start) {
  if (!opts.timings) return;
  r["timings"]["total_s"] = std::chrono::duration<double>(Clock::now() - start).count();
}

CommandResult finish(ReportJson& r, bool pass) {
  r["pass"] = pass;
  return {dump_report(r) + "\n", pass ? 0 : 1};
}

int vertex_at(const FaithfulProjection& proj, Point2 p, const std::string& what) {
  for (int v = 0; v < proj.vertex_count(); ++v) {
    if (distance(proj.position(v), p) <= kGeomEps) return v;
  }
  fail(ErrorCode::geometry, what + " must start and end at vertex positions");
}

}  // namespace

CommandResult run_partition(std::string_view text, const CommandOptions& opts) {
  const auto start = Clock::now();
  const Loaded g = load(text, opts);
  ReportJson r = make_report("partition", digest(text, opts));
  if (g.file.mode == WeightMode::coupling) r["inputs"]["beta"] = g.beta;
  r["inputs"]["mode"] = g.file.mode == WeightMode::coupling ? "J" : "W";
  r["outputs"] = ReportJson::object();
  ReportJson out = ReportJson::object();
  if (!g.file.crossed_pairs.empty()) {
    if (g.file.mode != WeightMode::coupling) fail(ErrorCode::input, "crossed pairs need couplings J");
    const auto pairs = crossed_pairs(g);
    const auto q = quasi_planar_partition(g.proj, g.k, g.j, pairs, g.beta);
    out["Z"] = q.z;
    out["Z_tilde"] = q.z_tilde;
    out["log_Z"] = q.log_z;
    out["correctors"] = ReportJson::array();
    double worst = 0.0;
    for (std::size_t i = 0; i < q.correctors.size(); ++i) {
      const auto& c = q.correctors[i];
      out["correctors"].push_back({{"alpha", pairs[i].alpha}, {"R", c.r}, {"t_R", c.t_r}, {"A", c.a}, {"B", c.b},
                                   {"C", c.c}, {"N", c.n}});
      worst = std::max({worst, c.quadratic_residual, c.aha_residual, c.root_product_residual});
    }
    r["outputs"] = out;
    r["residuals"]["corrector"] = worst;
    add_timing(r, opts, start);
    return finish(r, worst <= 1e-12);
  }
  if (!g.proj.is_planar()) {
    fail(ErrorCode::geometry, "projection has " + std::to_string(g.proj.crossings().size()) +
                                  " crossing(s); the partition function needs a planar drawing (use `signed-sum` "
                                  "for the crossing-signed even-subgraph sum)");
  }
  const SqrtDet p = sqrt_det_kw(g.k, g.w);
  if (g.file.mode == WeightMode::coupling) {
    const auto pf = planar_partition_function(g.proj, g.k, g.j, g.beta);
    out["Z"] = pf.z;
    out["Z_tilde"] = pf.z_tilde;
    out["log_Z"] = pf.log_z;
    out["log_Z_tilde"] = pf.log_z_tilde;
  } else {
    out["Z_tilde"] = p.value;
    out["log_Z_tilde"] = p.sign > 0 ? p.log_abs : NAN;
    bool in_range = p.sign > 0;
    double log_z = p.log_abs + g.proj.vertex_count() * std::log(2.0);
    for (double w : g.w) {
      in_range = in_range && std::abs(w) < 1.0;
      if (std::abs(w) < 1.0) log_z -= 0.5 * std::log1p(-w * w);
    }
    out["Z"] = in_range ? std::exp(log_z) : NAN;
    out["log_Z"] = in_range ? log_z : NAN;
  }
  r["outputs"] = out;
  r["residuals"]["sqrt_det_imag"] = p.imag_residual;
  add_timing(r, opts, start);
  return finish(r, true);
}

CommandResult run_signed_sum(std::string_view text, const CommandOptions& opts) {
  const auto start = Clock::now();
  const Loaded g = load(text, opts);
  ReportJson r = make_report("signed-sum", digest(text, opts));
  const SqrtDet p = sqrt_det_kw(g.k, g.w);
  r["outputs"]["sqrt_det"] = p.value;
  r["outputs"]["crossings"] = g.proj.crossings().size();
  r["outputs"]["homotopy_steps"] = p.steps;
  r["residuals"]["sqrt_det_imag"] = p.imag_residual;
  bool pass = true;
  if (g.proj.edge_count() <= kDefaultEvenSubgraphEdgeCap) {
    const double s = signed_even_sum(g.proj, g.w, {});
    r["outputs"]["even_subgraph_sum"] = s;
    const double res = std::abs(p.value - s);
    r["residuals"]["determinant_vs_enumeration"] = res;
    pass = res <= 1e-10 * (1.0 + std::abs(s));
  }
  add_timing(r, opts, start);
  return finish(r, pass);
}

CommandResult run_verify(std::string_view text, const CommandOptions& opts) {
  const auto start = Clock::now();
  if (opts.level != "fast" && opts.level != "full") fail(ErrorCode::input, "--level must be fast or full");
  const bool full = opts.level == "full";
  const Loaded g = load(text, opts);
  if (g.proj.edge_count() > kDefaultEvenSubgraphEdgeCap) {
    fail(ErrorCode::scale, "verify enumerates even subgraphs; |E| = " + std::to_string(g.proj.edge_count()) +
                               " exceeds 30");
  }
  if (full && g.proj.vertex_count() > kMaxBruteForceSpins) {
    fail(ErrorCode::scale, "full verification sums over spins; |V| = " + std::to_string(g.proj.vertex_count()) +
                               " exceeds 24");
  }
  ReportJson r = make_report("verify", digest(text, opts));
  r["inputs"]["level"] = opts.level;
  Checks checks;

  const SqrtDet p = sqrt_det_kw(g.k, g.w);
  const double s = signed_even_sum(g.proj, g.w, {});
  checks.add(g.proj.is_planar() ? "kac_ward_identity" : "beyond_planarity", p.value, s, std::abs(p.value - s),
             1e-10 * (1.0 + std::abs(s)));

  std::vector<double> oj;
  double obeta = 1.0;
  const bool have_couplings = oracle_couplings(g, oj, obeta);

  if (!g.file.crossed_pairs.empty()) {
    if (g.file.mode != WeightMode::coupling) fail(ErrorCode::input, "crossed pairs need couplings J");
    const auto pairs = crossed_pairs(g);
    const auto q = quasi_planar_partition(g.proj, g.k, g.j, pairs, g.beta);
    for (std::size_t i = 0; i < q.correctors.size(); ++i) {
      const auto& c = q.correctors[i];
      const std::string tag = "corrector_" + std::to_string(pairs[i].alpha);
      checks.add(tag + "_quadratic", c.t_r, 0.0, c.quadratic_residual, 1e-12);
      checks.add(tag + "_product", c.c, -c.a * c.b, c.aha_residual, 1e-12);
    }
    const SqrtDet pc = sqrt_det_kw(g.k, q.weights);
    const double sc = signed_even_sum(g.proj, q.weights, {});
    checks.add("corrected_weights", pc.value, sc, std::abs(pc.value - sc), 1e-10 * (1.0 + std::abs(sc)));
    if (full) {
      SpinModel model = model_from_projection(g.proj, g.j, g.beta);
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        model.four_spin.push_back({pairs[i].endpoints, q.correctors[i].r});
      }
      const auto bf = brute_force_Z(model, opts.threads);
      checks.add("quasi_planar_brute_force", q.z, bf.z, rel(q.z, bf.z), 1e-9);
    }
  } else if (full && g.proj.is_planar() && have_couplings) {
    const auto pf = planar_partition_function(g.proj, g.k, oj, obeta);
    const auto bf = brute_force_Z(model_from_projection(g.proj, oj, obeta), opts.threads);
    checks.add("brute_force", pf.z, bf.z, rel(pf.z, bf.z), 1e-9);
  }

  if (!g.file.disorder_lines.empty()) {
    if (!g.proj.is_planar()) fail(ErrorCode::geometry, "disorder-line checks need a planar projection");
    const auto kern = resolvent(g.k, g.w);
    const double dirac = dirac_residual(kern);
    checks.add("dirac_residual", dirac, 0.0, dirac, 1e-10);
    for (const auto& line : g.file.disorder_lines) {
      const std::string what = "disorder line " + std::to_string(line.id);
      if (line.points.size() < 3) fail(ErrorCode::input, what + " needs at least one interior point");
      const int x2 = vertex_at(g.proj, line.points.front(), what);
      const int x1 = vertex_at(g.proj, line.points.back(), what);
      const Polyline middle{std::vector<Point2>(line.points.begin() + 1, line.points.end() - 1)};
      const auto tp = order_disorder_two_point(g.proj, g.w, kern, x1, x2, middle);
      const double oracle = oracle_two_point(g.proj, g.w, x1, x2, middle);
      checks.add("two_point_" + std::to_string(line.id), tp.value, oracle, std::abs(tp.value - oracle), 1e-9,
                 {{"imag_part", tp.imag_part}});
      if (full && have_couplings) {
        const SpinModel model = model_from_projection(g.proj, oj, obeta);
        const std::vector<int> spins{x1, x2};
        const std::vector<Polyline> lines{joined_line(g.proj, x1, x2, middle)};
        const double bf = mixed_disorder_expectation(g.proj, model, spins, lines, opts.threads, LineEnds::at_vertices);
        checks.add("two_point_brute_force_" + std::to_string(line.id), tp.value, bf, std::abs(tp.value - bf), 1e-9);
      }
    }
  }
  r["checks"] = checks.list;
  add_timing(r, opts, start);
  return finish(r, checks.all);
}

namespace {

struct PairsSpec {
  std::optional<Point2> grand_central;
  std::vector<OrderDisorderPair> pairs;
};

PairsSpec parse_pairs(const std::string& arg, const FaithfulProjection& proj) {
  if (arg.empty()) fail(ErrorCode::input, "--pairs is required");
  const auto first = arg.find_first_not_of(" \t\r\n");
  const std::string text = first != std::string::npos && arg[first] == '{' ? arg : read_text_file(arg);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::input, std::string("malformed pairs JSON: ") + e.what());
  }
  auto point = [](const nlohmann::json& v, const char* what) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      fail(ErrorCode::input, std::string(what) + " must be [x, y]");
    }
    return Point2{v[0].get<double>(), v[1].get<double>()};
  };
  PairsSpec spec;
  if (!doc.is_object() || !doc.contains("pairs") || !doc["pairs"].is_array()) {
    fail(ErrorCode::input, "pairs spec needs a 'pairs' array");
  }
  if (doc.contains("grand_central")) spec.grand_central = point(doc["grand_central"], "grand_central");
  for (const auto& p : doc["pairs"]) {
    if (!p.is_object() || !p.contains("site") || !p["site"].is_number_integer() || !p.contains("star")) {
      fail(ErrorCode::input, "each pair needs an integer 'site' and a 'star' point");
    }
    spec.pairs.push_back({proj.vertex_index(p["site"].get<std::int64_t>()), point(p["star"], "star")});
  }
  if (spec.pairs.size() < 2) fail(ErrorCode::input, "at least two pairs are needed");
  return spec;
}

}  // namespace

CommandResult run_correlator(std::string_view text, const CommandOptions& opts) {
  const auto start = Clock::now();
  const Loaded g = load(text, opts);
  if (!g.proj.is_planar()) fail(ErrorCode::geometry, "correlators need a planar projection");
  const PairsSpec spec = parse_pairs(opts.pairs, g.proj);
  ReportJson r = make_report("correlator", digest(text, opts));
  Checks checks;
  const auto kern = resolvent(g.k, g.w);
  const double dirac = dirac_residual(kern);
  checks.add("dirac_residual", dirac, 0.0, dirac, 1e-10);

  const std::size_t n = spec.pairs.size();
  auto middle_for = [&](std::size_t i, std::size_t j) {
    if (spec.grand_central) return Polyline{{spec.pairs[j].star, *spec.grand_central, spec.pairs[i].star}};
    return straight_link(g.proj, spec.pairs[i], spec.pairs[j]);
  };
  const bool oracle = g.proj.edge_count() <= kDefaultEvenSubgraphEdgeCap;
  ReportJson values = ReportJson::array();
  ReportJson oracle_values = ReportJson::array();
  double worst = 0.0;
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 1.0)), o(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Polyline middle = middle_for(i, j);
      m[i][j] = m[j][i] =
          order_disorder_two_point(g.proj, g.w, kern, spec.pairs[i].site, spec.pairs[j].site, middle).value;
      if (oracle) {
        o[i][j] = o[j][i] = oracle_two_point(g.proj, g.w, spec.pairs[i].site, spec.pairs[j].site, middle);
        worst = std::max(worst, std::abs(m[i][j] - o[i][j]));
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    values.push_back(m[i]);
    oracle_values.push_back(o[i]);
  }
  r["outputs"]["two_point"] = values;
  if (oracle) {
    r["outputs"]["oracle_two_point"] = oracle_values;
    checks.add("two_point_vs_oracle", 0.0, 0.0, worst, 1e-9);
  }
  if (opts.check_pfaffian) {
    if (!spec.grand_central) fail(ErrorCode::input, "--check-pfaffian needs a grand_central point");
    const auto pf = pfaffian_correlation_check(g.proj, g.w, kern, spec.pairs, *spec.grand_central);
    r["outputs"]["pfaffian"] = {{"lhs", pf.lhs}, {"rhs", pf.rhs}};
    checks.add("pfaffian", pf.rhs, pf.lhs, pf.residual, 1e-8 * (1.0 + std::abs(pf.lhs)));
  }
  if (opts.check_dotsenko) {
    const OrderDisorderPair& mu0 = spec.pairs[0];
    ReportJson placements = ReportJson::array();
    int used = 0;
    for (int e = 0; e < g.proj.edge_count(); ++e) {
      const auto [a, b] = g.proj.graph().edges[e];
      if (a == mu0.site || b == mu0.site) continue;
      if (g.proj.curve(directed(e, true)).points.size() != 2) continue;
      try {
        const auto pl = dotsenko_placement(g.proj, e, mu0.star);
        const auto d = dotsenko_check(g.proj, g.w, kern, pl, mu0);
        ++used;
        const std::string tag = "dotsenko_edge_" + std::to_string(g.proj.edge_id(e));
        checks.add(tag + "_first", 0.0, 0.0, d.residual_1, 1e-9);
        checks.add(tag + "_second", 0.0, 0.0, d.residual_2, 1e-9);
        placements.push_back({{"edge", g.proj.edge_id(e)}, {"chi", d.chi}});
      } catch (const Error& err) {
        if (err.code() != ErrorCode::geometry) throw;
      }
    }
    r["outputs"]["dotsenko_placements"] = placements;
    if (used == 0) fail(ErrorCode::geometry, "no edge admits a Dotsenko placement for the first pair");
  }
  r["checks"] = checks.list;
  add_timing(r, opts, start);
  return finish(r, checks.all);
}

CommandResult run_zeta(std::string_view text, const CommandOptions& opts) {
  const auto start = Clock::now();
  if (!opts.u) fail(ErrorCode::input, "--u is required");
  if (!std::isfinite(*opts.u)) fail(ErrorCode::input, "--u must be finite");
  if (opts.max_len < 1) fail(ErrorCode::input, "--max-len must be positive");
  const Loaded g = load(text, opts);
  ReportJson r = make_report("zeta", digest(text, opts));
  const FlowMatrix m = make_flow_matrix(weighted(g.k.k, g.w), g.k.space);
  const auto z = zeta_truncated_product(m, g.k.space, *opts.u, opts.max_len);
  r["inputs"]["u"] = *opts.u;
  r["inputs"]["max_len"] = opts.max_len;
  r["outputs"]["determinant"] = complex_json(z.determinant);
  r["outputs"]["product"] = complex_json(z.product);
  r["outputs"]["classes"] = z.classes;
  r["outputs"]["norm_inf"] = matrix_inf_norm(m);
  r["residuals"]["truncation"] = z.residual;
  r["residuals"]["tail_bound"] = z.tail_bound;
  add_timing(r, opts, start);
  return finish(r, z.residual <= z.tail_bound + 1e-12);
}

CommandResult run_onsager(const CommandOptions& opts) {
  if (opts.steps < 1) fail(ErrorCode::input, "--steps must be at least 1");
  if (!std::isfinite(opts.beta_j_min) || !std::isfinite(opts.beta_j_max) || opts.beta_j_min < 0.0 ||
      opts.beta_j_min > opts.beta_j_max) {
    fail(ErrorCode::input, "invalid betaJ range");
  }
  if (opts.quad_order < 1) fail(ErrorCode::input, "--quad-order must be positive");
  std::vector<int> sizes = opts.sizes.empty() ? std::vector<int>{128} : opts.sizes;
  for (int L : sizes) {
    if (L < 2) fail(ErrorCode::input, "torus sizes must be at least 2");
  }
  std::string out = "betaJ,psi_integral";
  for (int L : sizes) out += ",psi_torus_L" + std::to_string(L);
  for (int L : sizes) out += ",abs_diff_L" + std::to_string(L);
  out += ",flag\n";
  auto cell = [](double x) { return std::isnan(x) ? std::string("nan") : format_double(x); };
  for (int i = 0; i < opts.steps; ++i) {
    const double bj = opts.steps == 1 ? opts.beta_j_min
                                      : opts.beta_j_min + (opts.beta_j_max - opts.beta_j_min) * i / (opts.steps - 1);
    const bool critical = is_critical(bj, 1.0);
    const double psi = critical ? NAN : onsager_pressure(bj, 1.0, opts.quad_order);
    std::vector<double> torus;
    for (int L : sizes) {
      const auto d = torus_log_det_per_site({L, 1.0, bj}, opts.threads);
      torus.push_back(d.singular ? NAN : std::log(2.0) + 2.0 * log_cosh(bj) + 0.5 * d.per_site);
    }
    out += cell(bj) + "," + cell(psi);
    for (double t : torus) out += "," + cell(t);
    for (double t : torus) out += "," + cell(critical ? NAN : std::abs(psi - t));
    out += critical ? ",critical\n" : ",\n";
  }
  return {out, 0};
}

}  // namespace kw
