#include "kacward/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <thread>

#include "kacward/error.hpp"
#include "kacward/linalg.hpp"

namespace kw {

SpinModel model_from_projection(const FaithfulProjection& proj, std::span<const double> j, double beta) {
  if (static_cast<int>(j.size()) != proj.edge_count()) fail(ErrorCode::input, "coupling count mismatch");
  SpinModel m;
  m.vertex_count = proj.vertex_count();
  m.beta = beta;
  for (int e = 0; e < proj.edge_count(); ++e) {
    m.pairs.push_back({proj.graph().edges[e][0], proj.graph().edges[e][1], j[e]});
  }
  return m;
}

namespace {

// Configuration index bit i set means spin i is -1.
class Sweep {
 public:
  Sweep(const SpinModel& model, std::span<const int> observable) : n_(model.vertex_count) {
    if (n_ > kMaxBruteForceSpins) {
      fail(ErrorCode::scale, "brute force limited to " + std::to_string(kMaxBruteForceSpins) + " spins, got " +
                                 std::to_string(n_));
    }
    flips_.assign(n_, {});
    auto add = [&](double coeff, std::vector<int> sites) {
      std::vector<int> odd(n_, 0);
      for (int s : sites) {
        if (s < 0 || s >= n_) fail(ErrorCode::input, "spin term references a missing vertex");
        odd[s] ^= 1;
      }
      const int t = static_cast<int>(coeff_.size());
      coeff_.push_back(coeff);
      std::uint64_t mask = 0;
      for (int s = 0; s < n_; ++s) {
        if (odd[s]) {
          flips_[s].push_back(t);
          mask |= 1ULL << s;
        }
      }
      masks_.push_back(mask);
    };
    for (const auto& p : model.pairs) add(-p.j, {p.u, p.v});
    if (model.h != 0.0) {
      for (int x = 0; x < n_; ++x) add(-model.h, {x});
    }
    for (const auto& f : model.four_spin) add(f.r, {f.sites[0], f.sites[1], f.sites[2], f.sites[3]});
    for (int s : observable) {
      if (s < 0 || s >= n_) fail(ErrorCode::input, "observable references a missing vertex");
      observable_ ^= 1ULL << s;
    }
  }

  std::uint64_t configs() const { return 1ULL << n_; }

  // Visits (energy, observable sign) for Gray-code indices [begin, end).
  template <class F>
  void run(std::uint64_t begin, std::uint64_t end, F&& f) const {
    std::uint64_t cfg = begin ^ (begin >> 1);
    std::vector<double> sign(coeff_.size());
    double energy = 0.0;
    for (std::size_t t = 0; t < coeff_.size(); ++t) {
      sign[t] = (std::popcount(cfg & masks_[t]) & 1) ? -1.0 : 1.0;
      energy += coeff_[t] * sign[t];
    }
    double obs = (std::popcount(cfg & observable_) & 1) ? -1.0 : 1.0;
    f(energy, obs);
    for (std::uint64_t g = begin + 1; g < end; ++g) {
      const int bit = std::countr_zero(g);
      for (int t : flips_[bit]) {
        energy -= 2.0 * coeff_[t] * sign[t];
        sign[t] = -sign[t];
      }
      if ((observable_ >> bit) & 1ULL) obs = -obs;
      f(energy, obs);
    }
  }

 private:
  int n_;
  std::vector<double> coeff_;
  std::vector<std::uint64_t> masks_;
  std::vector<std::vector<int>> flips_;
  std::uint64_t observable_ = 0;
};

template <class Chunk, class Result>
std::vector<Result> run_chunks(std::uint64_t total, int threads, Chunk&& chunk) {
  const std::uint64_t nchunks = std::min<std::uint64_t>(total, 64);
  const std::uint64_t size = total / nchunks;
  std::vector<Result> results(nchunks);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&]() {
    for (std::uint64_t c = next++; c < nchunks; c = next++) results[c] = chunk(c * size, (c + 1) * size);
  };
  const int nt = std::max(1, std::min<int>(threads, static_cast<int>(nchunks)));
  if (nt == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return results;
}

double min_energy(const Sweep& sweep, int threads) {
  auto mins = run_chunks<std::function<double(std::uint64_t, std::uint64_t)>, double>(
      sweep.configs(), threads, [&](std::uint64_t b, std::uint64_t e) {
        double best = std::numeric_limits<double>::infinity();
        sweep.run(b, e, [&](double en, double) { best = std::min(best, en); });
        return best;
      });
  return *std::min_element(mins.begin(), mins.end());
}

struct Sums {
  double weight = 0.0;
  double observable = 0.0;
};

// Sums of e^{-beta (E - shift)} and of the observable-weighted terms.
Sums weighted_sums(const Sweep& sweep, double beta, double shift, int threads) {
  struct Partial {
    CompensatedSum w, o;
  };
  auto parts = run_chunks<std::function<Partial(std::uint64_t, std::uint64_t)>, Partial>(
      sweep.configs(), threads, [&](std::uint64_t b, std::uint64_t e) {
        Partial p;
        sweep.run(b, e, [&](double en, double obs) {
          const double x = std::exp(-beta * (en - shift));
          p.w.add(x);
          p.o.add(obs * x);
        });
        return p;
      });
  CompensatedSum w, o;
  for (const auto& p : parts) {
    w.add(p.w.value());
    o.add(p.o.value());
  }
  return {w.value(), o.value()};
}

double shift_for(const Sweep& sweep, double beta, int threads) {
  if (beta == 0.0) return 0.0;
  // Largest Boltzmann weight sits at the minimum (beta > 0) or maximum (beta < 0) energy.
  if (beta > 0) return min_energy(sweep, threads);
  return -min_energy(sweep, threads);
}

}  // namespace

BruteForceZ brute_force_Z(const SpinModel& model, int threads) {
  const Sweep sweep(model, {});
  const double shift = model.beta >= 0 ? shift_for(sweep, model.beta, threads) : 0.0;
  const Sums s = weighted_sums(sweep, model.beta, shift, threads);
  BruteForceZ out;
  out.log_z = std::log(s.weight) - model.beta * shift;
  out.z = std::exp(out.log_z);
  return out;
}

double brute_force_correlation(const SpinModel& model, std::span<const int> sites, int threads) {
  const Sweep sweep(model, sites);
  const double shift = model.beta >= 0 ? shift_for(sweep, model.beta, threads) : 0.0;
  const Sums s = weighted_sums(sweep, model.beta, shift, threads);
  return s.observable / s.weight;
}

std::vector<char> disorder_parity(const FaithfulProjection& proj, std::span<const Polyline> lines, LineEnds ends) {
  std::vector<char> parity(proj.edge_count(), 0);
  for (const auto& line : lines) {
    const auto counts = line_crossings(proj, line, ends);
    for (int e = 0; e < proj.edge_count(); ++e) parity[e] ^= static_cast<char>(counts[e] & 1);
  }
  return parity;
}

double signed_even_sum(const FaithfulProjection& proj, std::span<const double> w,
                       std::span<const int> boundary, std::span<const Polyline> disorder_lines, LineEnds ends) {
  const int m = proj.edge_count();
  if (static_cast<int>(w.size()) != m) fail(ErrorCode::input, "weight count mismatch");
  if (m > kDefaultEvenSubgraphEdgeCap) {
    fail(ErrorCode::scale, "oracle scale exceeded: " + std::to_string(m) + " edges");
  }
  std::vector<EdgeSet> cross_upper(m, 0);
  for (const auto& x : proj.crossings()) cross_upper[x.edge_a] ^= 1ULL << x.edge_b;
  EdgeSet lines_mask = 0;
  const auto parity = disorder_parity(proj, disorder_lines, ends);
  for (int e = 0; e < m; ++e) {
    if (parity[e]) lines_mask |= 1ULL << e;
  }
  CompensatedSum total;
  enumerate_even_subgraphs(proj.graph(), boundary, [&](EdgeSet g) {
    int sign = std::popcount(g & lines_mask);
    double weight = 1.0;
    for (EdgeSet rest = g; rest; rest &= rest - 1) {
      const int e = std::countr_zero(rest);
      weight *= w[e];
      sign += std::popcount(cross_upper[e] & g);
    }
    total.add((sign & 1) ? -weight : weight);
  });
  return total.value();
}

int kw_step1_check(const FaithfulProjection& proj, EdgeSet edges) {
  int total = 0;
  loop_decompositions(proj.graph(), edges, [&](const std::vector<std::vector<int>>& loops) {
    int sign = 1;
    for (const auto& loop : loops) {
      if (loop_geometry(proj, loop).crossings & 1) sign = -sign;
    }
    total += sign;
  });
  return total;
}

namespace {

void pairing_sum(std::vector<int>& partner, int n2, long long& total) {
  int first = -1;
  for (int i = 0; i < n2; ++i) {
    if (partner[i] < 0) {
      first = i;
      break;
    }
  }
  if (first < 0) {
    int crossings = 0;
    for (int a = 0; a < n2; ++a) {
      const int b = partner[a];
      if (b < a) continue;
      for (int c = a + 1; c < b; ++c) {
        if (partner[c] > b) ++crossings;
      }
    }
    total += (crossings & 1) ? -1 : 1;
    return;
  }
  for (int j = first + 1; j < n2; ++j) {
    if (partner[j] >= 0) continue;
    partner[first] = j;
    partner[j] = first;
    pairing_sum(partner, n2, total);
    partner[first] = -1;
    partner[j] = -1;
  }
}

}  // namespace

long long pairing_parity_sum(int n) {
  if (n < 1 || n > kMaxPairingParityN) {
    fail(ErrorCode::scale, "pairing_parity_sum supports 1 <= n <= " + std::to_string(kMaxPairingParityN));
  }
  std::vector<int> partner(2 * n, -1);
  long long total = 0;
  pairing_sum(partner, 2 * n, total);
  return total;
}

double mixed_disorder_expectation(const FaithfulProjection& proj, const SpinModel& model,
                                  std::span<const int> spins, std::span<const Polyline> disorder_lines,
                                  int threads, LineEnds ends) {
  if (static_cast<int>(model.pairs.size()) != proj.edge_count()) {
    fail(ErrorCode::input, "model pair couplings must correspond to projection edges");
  }
  const auto parity = disorder_parity(proj, disorder_lines, ends);
  SpinModel flipped = model;
  for (int e = 0; e < proj.edge_count(); ++e) {
    if (parity[e]) flipped.pairs[e].j = -flipped.pairs[e].j;
  }
  const Sweep base(model, {});
  const Sweep alt(flipped, spins);
  const double beta = model.beta;
  const double s0 = beta > 0 ? min_energy(base, threads) : 0.0;
  const double s1 = beta > 0 ? min_energy(alt, threads) : 0.0;
  const Sums z = weighted_sums(base, beta, s0, threads);
  const Sums num = weighted_sums(alt, beta, s1, threads);
  return num.observable / z.weight * std::exp(-beta * (s1 - s0));
}

}  // namespace kw
