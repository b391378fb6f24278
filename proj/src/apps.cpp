#include "qcongest/apps.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <set>

#include "qcongest/pqalg.hpp"

namespace qcongest {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMeanScale = 1048576.0;  // 2^20, fixed-point mean encoding

int bits_for(std::uint64_t top) { return std::max(1, ceil_log2(top + 1)); }

// smallest s >= 1 with s*s*den >= num
int ceil_sqrt_frac(int num, int den) {
  int s = 1;
  while (static_cast<long long>(s) * s * den < num) ++s;
  return s;
}

// smallest s >= 1 with (s*p)^2 * s >= k*k
int ceil_pow23(int k, int p) {
  int s = 1;
  while (static_cast<long long>(s) * s * s * p * p <
         static_cast<long long>(k) * k)
    ++s;
  return s;
}

// election, bfs, one convergecast and one broadcast all fit here
int infra_allowance(int diameter) { return 6 * (diameter + 1); }

// the plain broadcast insists on one message per edge, so wide results
// go down the tree in width-sized chunks
int broadcast_wide(const Graph& g, const BfsTree& tree, std::uint64_t value,
                   int bits, RoundLedger& ledger) {
  const int w = ledger.width();
  int chunks = 0;
  for (int lo = 0; lo < bits; lo += w, ++chunks) {
    const int nb = std::min(w, bits - lo);
    const std::uint64_t mask =
        nb >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << nb) - 1);
    broadcast_value(g, tree, (value >> lo) & mask, nb, ledger);
  }
  return chunks;
}

// a-priori ceiling for broadcast_wide, one tree sweep per chunk
int bcast_allowance(int diameter, int bits, int width) {
  return (diameter + 1) * ceil_div(bits, width);
}

// mirror of the batch schedule mean_estimate runs, for the a-priori bound
int mean_batches(int v_max, double eps, int p) {
  if (v_max <= 0) return 0;
  const double eps_t = 0.9 * eps / v_max;
  const double theta_res = 0.8 * eps_t;
  std::vector<int> powers{0};
  int m = 1;
  while (2 * m + 1 < kPi / (2.0 * theta_res)) {
    powers.push_back(m);
    m *= 2;
  }
  powers.push_back(m);
  long long per = 0;
  for (int mj : powers) per += 18LL * (mj + 1);
  return static_cast<int>(per *
                          static_cast<long long>(ceil_div(v_max, std::max(1, p))));
}

// Shortest cycle in an arbitrary undirected edge list: for every edge,
// BFS with that edge removed and close the loop. Exact, O(m^2).
std::optional<std::vector<int>> shortest_cycle(
    const std::vector<std::pair<int, int>>& edges_in) {
  std::set<std::pair<int, int>> eset;
  for (auto [a, b] : edges_in) {
    if (a == b) continue;
    eset.insert({std::min(a, b), std::max(a, b)});
  }
  std::map<int, std::vector<int>> adj;
  for (auto [a, b] : eset) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  int best_len = std::numeric_limits<int>::max();
  std::vector<int> best;
  for (auto [a, b] : eset) {
    std::map<int, int> parent;
    std::map<int, int> dist;
    std::deque<int> queue{a};
    parent[a] = a;
    dist[a] = 0;
    while (!queue.empty() && !dist.count(b)) {
      const int v = queue.front();
      queue.pop_front();
      for (int u : adj[v]) {
        if (v == a && u == b) continue;
        if (v == b && u == a) continue;
        if (parent.count(u)) continue;
        parent[u] = v;
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
    }
    if (!dist.count(b)) continue;
    const int len = dist[b] + 1;
    if (len < 3 || len >= best_len) continue;
    std::vector<int> path;
    for (int v = b; v != a; v = parent[v]) path.push_back(v);
    path.push_back(a);
    std::reverse(path.begin(), path.end());
    best_len = len;
    best = std::move(path);
  }
  if (best.empty()) return std::nullopt;
  return best;
}

struct SweepHit {
  int length = 0;
  std::vector<int> cycle;
};

// Staggered token flood: every source's id floods through the allowed
// subgraph to the given depth, one token per edge per round, and every
// arrival is remembered per sending neighbor. After quiescence, any
// vertex with two arrivals of one token via distinct neighbors (or a
// source hearing its own token) pins down a closed walk; its edge set is
// handed to the exact cycle extractor, so only real cycles come back.
std::optional<SweepHit> token_sweep(const Graph& g,
                                    const std::vector<int>& sources,
                                    const std::vector<char>& allowed,
                                    int delta, int max_len,
                                    RoundLedger& ledger) {
  if (delta < 1 || sources.empty() || max_len < 3) return std::nullopt;
  const int n = g.n;
  const int id_bits = std::max(1, ceil_log2(n));
  const int depth_bits = std::max(1, ceil_log2(delta + 1));
  const int bits = id_bits + depth_bits;

  // best[v][src] = (smallest arrival depth, its sender)
  std::vector<std::map<int, std::pair<int, int>>> best(n);
  // arrivals[v][src][sender] = smallest depth seen from that sender
  std::vector<std::map<int, std::map<int, int>>> arrivals(n);
  std::map<std::pair<int, int>, std::deque<std::uint64_t>> queues;

  auto forward = [&](int v, int src, int d) {
    if (d >= delta) return;
    const std::uint64_t payload =
        (static_cast<std::uint64_t>(src) << depth_bits) |
        static_cast<std::uint64_t>(d + 1);
    for (int u : g.adj[v])
      if (allowed[u]) queues[{v, u}].push_back(payload);
  };
  for (int s : sources) {
    best[s][s] = {0, -1};
    forward(s, s, 0);
  }

  int guard = 0;
  while (true) {
    std::vector<Packet> out;
    for (auto& [edge, q] : queues) {
      if (q.empty()) continue;
      out.push_back({edge.first, edge.second, q.front(), bits});
      q.pop_front();
    }
    if (out.empty()) break;
    if (++guard > 64 * n * (delta + 1))
      throw StateError("token sweep failed to quiesce");
    const auto inbox = exchange_round(g, ledger, out);
    for (int v = 0; v < n; ++v) {
      for (const auto& pkt : inbox[v]) {
        const int src = static_cast<int>(pkt.payload >> depth_bits);
        const int d =
            static_cast<int>(pkt.payload & ((1ULL << depth_bits) - 1));
        auto& by = arrivals[v][src];
        auto slot = by.find(pkt.from);
        if (slot == by.end() || d < slot->second) by[pkt.from] = d;
        auto it = best[v].find(src);
        if (it == best[v].end()) {
          best[v][src] = {d, pkt.from};
          forward(v, src, d);
        } else if (d < it->second.first) {
          it->second = {d, pkt.from};
          forward(v, src, d);
        }
      }
    }
  }

  // walk the final predecessor chain from x back to src
  auto chain_edges = [&](int x, int src,
                         std::vector<std::pair<int, int>>& out_edges) {
    int cur = x;
    int steps = 0;
    while (cur != src) {
      auto it = best[cur].find(src);
      if (it == best[cur].end()) return false;
      const int pred = it->second.second;
      if (pred < 0) return false;
      out_edges.push_back({pred, cur});
      cur = pred;
      if (++steps > n) return false;
    }
    return true;
  };

  std::optional<SweepHit> hit;
  auto consider = [&](const std::vector<std::pair<int, int>>& edges) {
    const auto cyc = shortest_cycle(edges);
    if (!cyc) return;
    const int len = static_cast<int>(cyc->size());
    if (len > max_len) return;
    if (!hit || len < hit->length) hit = SweepHit{len, *cyc};
  };

  for (int v = 0; v < n; ++v) {
    for (const auto& [src, by] : arrivals[v]) {
      // keep the four shallowest senders; the optimal meeting pair is
      // always among the two shallowest
      std::vector<std::pair<int, int>> senders(by.begin(), by.end());
      std::sort(senders.begin(), senders.end(),
                [](const auto& a, const auto& b) {
                  return std::pair(a.second, a.first) <
                         std::pair(b.second, b.first);
                });
      if (senders.size() > 4) senders.resize(4);
      if (src == v) {
        for (const auto& [w, d] : senders) {
          std::vector<std::pair<int, int>> edges;
          if (!chain_edges(w, src, edges)) continue;
          edges.push_back({w, v});
          consider(edges);
        }
        continue;
      }
      for (std::size_t i = 0; i < senders.size(); ++i) {
        for (std::size_t j = i + 1; j < senders.size(); ++j) {
          std::vector<std::pair<int, int>> edges;
          if (!chain_edges(senders[i].first, src, edges)) continue;
          if (!chain_edges(senders[j].first, src, edges)) continue;
          edges.push_back({senders[i].first, v});
          edges.push_back({senders[j].first, v});
          consider(edges);
        }
      }
    }
  }
  return hit;
}

struct Infra {
  RoundLedger ledger;
  int leader = -1;
  BfsTree tree;
  int diameter = 0;

  explicit Infra(const Graph& g) : ledger(message_width(g.n)) {
    leader = elect_leader(g, ledger);
    tree = build_bfs(g, leader, ledger);
    diameter = g.diameter();
  }
};

void validate_rows(const Graph& g,
                   const std::vector<std::vector<std::uint64_t>>& rows) {
  if (static_cast<int>(rows.size()) != g.n)
    throw ParameterError("need one input row per node");
  if (rows[0].empty()) throw ParameterError("input rows are empty");
  for (const auto& r : rows)
    if (r.size() != rows[0].size())
      throw ParameterError("input rows differ in length");
}

std::uint64_t max_column_sum(
    const std::vector<std::vector<std::uint64_t>>& rows) {
  std::uint64_t best = 0;
  for (std::size_t i = 0; i < rows[0].size(); ++i) {
    std::uint64_t s = 0;
    for (const auto& r : rows) s += r[i];
    best = std::max(best, s);
  }
  return best;
}

void validate_cycle_params(const CycleParams& params) {
  if (params.k < 4) throw ParameterError("cycle length cap must be >= 4");
  if (params.beta < 0.0 || params.beta >= 1.0)
    throw ParameterError("beta must lie in [0, 1)");
  if (params.mu <= 0.0) throw ParameterError("mu must be positive");
}

}  // namespace

// ---- Reference oracle -------------------------------------------------

BruteOracle brute_oracle(const Graph& g,
                         const std::vector<std::vector<std::uint64_t>>& rows) {
  if (g.n > 64) throw CapacityError("reference oracle caps at 64 nodes");
  if (g.n == 0) throw ParameterError("empty graph");
  if (!g.connected()) throw ConnectivityError("reference oracle needs a "
                                              "connected graph");
  BruteOracle b;
  b.dist.resize(g.n);
  for (int v = 0; v < g.n; ++v) b.dist[v] = g.bfs_dist(v);
  b.ecc = g.eccentricities();
  b.diameter = g.diameter();
  b.radius = g.radius();
  double acc = 0.0;
  for (int e : b.ecc) acc += e;
  b.avg_ecc = acc / g.n;

  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v < g.n; ++v)
    for (int u : g.adj[v])
      if (u > v) edges.push_back({v, u});
  if (const auto cyc = shortest_cycle(edges)) {
    b.girth = static_cast<int>(cyc->size());
    b.girth_cycle = *cyc;
  }

  if (!rows.empty()) {
    validate_rows(g, rows);
    const std::size_t k = rows[0].size();
    b.column_sums.assign(k, 0);
    for (const auto& r : rows)
      for (std::size_t i = 0; i < k; ++i) b.column_sums[i] += r[i];
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        if (b.column_sums[i] == b.column_sums[j])
          b.collisions.push_back({static_cast<int>(i), static_cast<int>(j)});
  }
  return b;
}

bool valid_simple_cycle(const Graph& g, const std::vector<int>& cycle) {
  const int l = static_cast<int>(cycle.size());
  if (l < 3) return false;
  std::set<int> seen;
  for (int v : cycle) {
    if (v < 0 || v >= g.n) return false;
    if (!seen.insert(v).second) return false;
  }
  for (int i = 0; i < l; ++i)
    if (!g.has_edge(cycle[i], cycle[(i + 1) % l])) return false;
  return true;
}

// ---- Scheduling -------------------------------------------------------

ScheduleRun meeting_schedule(
    const Graph& g, const std::vector<std::vector<std::uint64_t>>& calendars,
    Rng& rng, int p_override) {
  validate_rows(g, calendars);
  for (const auto& r : calendars)
    for (std::uint64_t b : r)
      if (b > 1) throw ParameterError("calendar entries must be 0 or 1");
  const int k = static_cast<int>(calendars[0].size());

  ScheduleRun res;
  if (g.n == 1) {
    for (int i = 0; i < k; ++i)
      if (calendars[0][i] > res.count || res.slot < 0) {
        res.slot = i;
        res.count = calendars[0][i];
      }
    return res;
  }

  Infra inf(g);
  const int p = p_override > 0 ? p_override : std::max(1, inf.tree.depth);
  OracleSpec spec;
  spec.k = k;
  spec.value_bits = bits_for(g.n);
  spec.node_tables = calendars;
  spec.combine = [](std::uint64_t a, std::uint64_t b) { return a + b; };

  MinResult m;
  const AlgoFn algo = [&m](ParallelOracle& o, Rng& r) {
    m = parallel_min(o, r, 1, true);
    if (!m.found) return ~std::uint64_t{0};
    return (static_cast<std::uint64_t>(m.index) << 32) | m.value;
  };
  res.run = execute_framework(g, inf.tree, spec, p, algo, rng, inf.ledger);
  if (m.found) {
    res.slot = m.index;
    res.count = m.value;
  }
  const int out_bits = bits_for(k) + spec.value_bits;
  broadcast_wide(g, inf.tree, res.run.result, out_bits, inf.ledger);

  res.stats.leader = inf.leader;
  res.stats.p = p;
  res.stats.rounds_used = inf.ledger.rounds_used();
  const int b_max = 9 * ceil_sqrt_frac(k, std::min(p, k));
  res.stats.round_bound =
      infra_allowance(inf.diameter) +
      bcast_allowance(inf.diameter, out_bits, inf.ledger.width()) +
      framework_round_bound(g.n, inf.diameter, k, spec.value_bits, p, b_max, 0);
  return res;
}

// ---- Element distinctness --------------------------------------------

namespace {

EdRun ed_common(const Graph& g,
                const std::vector<std::vector<std::uint64_t>>& rows, Rng& rng,
                int p_override) {
  const int k = static_cast<int>(rows[0].size());
  EdRun res;
  if (g.n == 1) {
    for (int i = 0; i < k && !res.found; ++i)
      for (int j = i + 1; j < k; ++j)
        if (rows[0][i] == rows[0][j]) {
          res.found = true;
          res.first = i;
          res.second = j;
          res.value = rows[0][i];
          break;
        }
    return res;
  }

  Infra inf(g);
  const int p = p_override > 0 ? p_override : std::max(1, inf.tree.depth);
  OracleSpec spec;
  spec.k = k;
  spec.value_bits = bits_for(max_column_sum(rows));
  spec.node_tables = rows;
  spec.combine = [](std::uint64_t a, std::uint64_t b) { return a + b; };

  EdResult ed;
  const AlgoFn algo = [&ed, k](ParallelOracle& o, Rng& r) {
    ed = element_distinctness(o, r);
    if (!ed.found) return std::uint64_t{0};
    return static_cast<std::uint64_t>(ed.first) * k + ed.second + 1;
  };
  res.run = execute_framework(g, inf.tree, spec, p, algo, rng, inf.ledger);
  res.found = ed.found;
  res.first = ed.first;
  res.second = ed.second;
  res.value = ed.value;
  const int out_bits = 2 * bits_for(k);
  broadcast_wide(g, inf.tree, res.run.result, out_bits, inf.ledger);

  res.stats.leader = inf.leader;
  res.stats.p = p;
  res.stats.rounds_used = inf.ledger.rounds_used();
  const int b_max = 12 * ceil_pow23(k, std::min(p, k));
  res.stats.round_bound =
      infra_allowance(inf.diameter) +
      bcast_allowance(inf.diameter, out_bits, inf.ledger.width()) +
      framework_round_bound(g.n, inf.diameter, k, spec.value_bits, p, b_max, 0);
  return res;
}

}  // namespace

EdRun ed_vector(const Graph& g,
                const std::vector<std::vector<std::uint64_t>>& vectors,
                Rng& rng, int p_override) {
  validate_rows(g, vectors);
  return ed_common(g, vectors, rng, p_override);
}

EdRun ed_nodes(const Graph& g, const std::vector<std::uint64_t>& values,
               Rng& rng, int p_override) {
  if (static_cast<int>(values.size()) != g.n)
    throw ParameterError("need one value per node");
  // one-hot rows shifted by one so absent entries never collide
  std::vector<std::vector<std::uint64_t>> rows(
      g.n, std::vector<std::uint64_t>(g.n, 0));
  for (int v = 0; v < g.n; ++v) rows[v][v] = values[v] + 1;
  return ed_common(g, rows, rng, p_override);
}

// ---- Constant versus balanced ----------------------------------------

DjRun distributed_dj(const Graph& g,
                     const std::vector<std::vector<std::uint64_t>>& strings,
                     Rng& rng, bool debug) {
  validate_rows(g, strings);
  const int k = static_cast<int>(strings[0].size());
  if ((k & (k - 1)) != 0) throw ParameterError("table size must be a power "
                                               "of two");
  for (const auto& r : strings)
    for (std::uint64_t b : r)
      if (b > 1) throw ParameterError("rows must be bit strings");

  DjRun res;
  auto column = [&](int i) {
    std::uint64_t x = 0;
    for (const auto& r : strings) x ^= r[i];
    return x;
  };
  if (debug) {
    int ones = 0;
    for (int i = 0; i < k; ++i) ones += static_cast<int>(column(i));
    res.promise_ok = ones == 0 || ones == k || 2 * ones == k;
  }
  if (g.n == 1) {
    int ones = 0;
    for (int i = 0; i < k; ++i) ones += static_cast<int>(column(i));
    res.constant = ones == 0 || ones == k;
    return res;
  }

  Infra inf(g);
  OracleSpec spec;
  spec.k = k;
  spec.value_bits = 1;
  spec.node_tables = strings;
  spec.combine = [](std::uint64_t a, std::uint64_t b) { return a ^ b; };

  DjResult dj;
  const AlgoFn algo = [&dj](ParallelOracle& o, Rng& r) {
    dj = deutsch_jozsa(o, r);
    return std::uint64_t{dj.constant ? 1u : 0u};
  };
  res.run = execute_framework(g, inf.tree, spec, 1, algo, rng, inf.ledger);
  res.constant = dj.constant;
  broadcast_value(g, inf.tree, res.run.result, 1, inf.ledger);

  res.stats.leader = inf.leader;
  res.stats.p = 1;
  res.stats.rounds_used = inf.ledger.rounds_used();
  res.stats.round_bound =
      infra_allowance(inf.diameter) +
      framework_round_bound(g.n, inf.diameter, k, 1, 1, 1, 0);
  return res;
}

// ---- Eccentricity extremes -------------------------------------------

EccRun diameter_radius(const Graph& g, bool maximize, Rng& rng,
                       int p_override) {
  EccRun res;
  if (g.n == 1) {
    res.ok = true;
    res.argnode = 0;
    return res;
  }

  Infra inf(g);
  const int p = p_override > 0 ? p_override : std::max(1, inf.tree.depth);
  const std::vector<int> ecc = g.eccentricities();
  const int depth = std::max(1, inf.tree.depth);

  OracleSpec spec;
  spec.k = g.n;
  spec.value_bits = bits_for(g.n - 1);
  spec.compute = [ecc](int i) { return static_cast<std::uint64_t>(ecc[i]); };
  spec.alpha = [depth](int pp) { return 4 * (pp + depth); };

  MinResult m;
  const AlgoFn algo = [&m, maximize](ParallelOracle& o, Rng& r) {
    m = parallel_min(o, r, 1, maximize);
    if (!m.found) return std::uint64_t{0xFFFF};
    return (static_cast<std::uint64_t>(m.index) << 16) | m.value;
  };
  res.run = execute_framework(g, inf.tree, spec, p, algo, rng, inf.ledger);
  if (m.found) {
    res.ok = true;
    res.value = static_cast<int>(m.value);
    res.argnode = m.index;
  }
  const int out_bits = 16 + spec.value_bits;
  broadcast_wide(g, inf.tree, res.run.result, out_bits, inf.ledger);

  res.stats.leader = inf.leader;
  res.stats.p = p;
  res.stats.rounds_used = inf.ledger.rounds_used();
  const int b_max = 9 * ceil_sqrt_frac(g.n, std::min(p, g.n));
  res.stats.round_bound =
      infra_allowance(inf.diameter) +
      bcast_allowance(inf.diameter, out_bits, inf.ledger.width()) +
      framework_round_bound(g.n, inf.diameter, g.n, spec.value_bits, p, b_max,
                            4 * (p + depth));
  return res;
}

// ---- Average eccentricity --------------------------------------------

AvgEccRun avg_eccentricity(const Graph& g, double eps, Rng& rng,
                           int p_override) {
  if (eps <= 0.0) throw ParameterError("eps must be positive");
  AvgEccRun res;
  if (g.n == 1) return res;

  Infra inf(g);
  const int p = p_override > 0 ? p_override : std::max(1, inf.tree.depth);
  const std::vector<int> ecc = g.eccentricities();
  const int depth = std::max(1, inf.tree.depth);
  const int v_max = std::min(g.n - 1, 2 * inf.tree.depth);

  OracleSpec spec;
  spec.k = g.n;
  spec.value_bits = bits_for(v_max);
  spec.compute = [ecc](int i) { return static_cast<std::uint64_t>(ecc[i]); };
  spec.alpha = [depth](int pp) { return 4 * (pp + depth); };

  MeanResult mr;
  const AlgoFn algo = [&mr, v_max, eps](ParallelOracle& o, Rng& r) {
    mr = mean_estimate(o, static_cast<std::uint64_t>(v_max), eps, r);
    return static_cast<std::uint64_t>(
        std::llround(mr.mean * kMeanScale));
  };
  res.run = execute_framework(g, inf.tree, spec, p, algo, rng, inf.ledger);
  res.estimate = static_cast<double>(res.run.result) / kMeanScale;
  broadcast_wide(g, inf.tree, res.run.result, 32, inf.ledger);

  res.stats.leader = inf.leader;
  res.stats.p = p;
  res.stats.rounds_used = inf.ledger.rounds_used();
  const int b_max = mean_batches(v_max, eps, p);
  res.stats.round_bound =
      infra_allowance(inf.diameter) +
      bcast_allowance(inf.diameter, 32, inf.ledger.width()) +
      framework_round_bound(g.n, inf.diameter, g.n, spec.value_bits, p, b_max,
                            4 * (p + depth));
  return res;
}

// ---- Short cycles -----------------------------------------------------

double cycle_beta(int n, int depth, int k) {
  if (n < 2) return 0.5;
  const double ln = std::log(static_cast<double>(n));
  const int delta = (k + 1) / 2;
  const double x =
      (1.0 + std::log(static_cast<double>(std::max(1, depth))) / ln) /
      (1.0 + 2.0 * delta);
  return std::clamp(x, 1e-3, 0.5);
}

HeavyTable heavy_cycle_table(const Graph& g, int k_search) {
  HeavyTable t;
  t.value.assign(g.n, static_cast<std::uint64_t>(k_search) + 1);
  t.witness.resize(g.n);
  if (g.n < 3 || k_search < 3) return t;
  const int delta = (k_search + 1) / 2;
  const std::vector<char> all(g.n, 1);
  for (int s = 0; s < g.n; ++s) {
    RoundLedger scratch(message_width(g.n));
    const auto h1 = token_sweep(g, {s}, all, delta, k_search, scratch);
    const int kappa = h1 ? h1->length : k_search;
    std::optional<SweepHit> h2;
    if (!g.adj[s].empty()) {
      std::vector<char> mask = all;
      mask[s] = 0;
      h2 = token_sweep(g, g.adj[s], mask, (kappa + 1) / 2, kappa, scratch);
    }
    const SweepHit* pick = h1 ? &*h1 : nullptr;
    if (h2 && (!pick || h2->length < pick->length)) pick = &*h2;
    if (pick) {
      t.value[s] = static_cast<std::uint64_t>(pick->length);
      t.witness[s] = pick->cycle;
    }
  }
  return t;
}

CycleRun find_short_cycle(const Graph& g, const CycleParams& params, Rng& rng,
                          int p_override) {
  validate_cycle_params(params);
  CycleRun res;
  if (g.n < 3) return res;

  Infra inf(g);
  const int depth = std::max(1, inf.tree.depth);
  const int k_search = std::min(params.k, g.n);
  const int delta = (k_search + 1) / 2;
  res.beta = params.beta > 0.0 ? params.beta
                               : cycle_beta(g.n, depth, params.k);
  const double thr = std::pow(static_cast<double>(g.n), res.beta);
  bool any_heavy = false;
  for (int v = 0; v < g.n; ++v)
    if (g.degree(v) > thr) any_heavy = true;
  const bool use_heavy = thr >= 2.0 && any_heavy && k_search >= 3;

  // deterministic sweep over the low-degree side (the whole graph when
  // the split is degenerate)
  std::vector<char> allowed(g.n, 1);
  if (use_heavy)
    for (int v = 0; v < g.n; ++v) allowed[v] = g.degree(v) <= thr ? 1 : 0;
  std::vector<int> sources;
  for (int v = 0; v < g.n; ++v)
    if (allowed[v]) sources.push_back(v);
  std::optional<SweepHit> light;
  if (k_search >= 3 && !sources.empty())
    light = token_sweep(g, sources, allowed, delta, k_search, inf.ledger);

  // sampled two-phase detection around the heavy side
  std::optional<SweepHit> heavy;
  int p = 0;
  int hint = 1;
  if (use_heavy) {
    res.heavy_ran = true;
    p = p_override > 0 ? p_override : std::max(1, depth + k_search);
    hint = std::max(1, static_cast<int>(std::floor(thr)));
    const HeavyTable table = heavy_cycle_table(g, k_search);
    OracleSpec spec;
    spec.k = g.n;
    spec.value_bits = bits_for(k_search + 1);
    spec.compute = [&table](int i) { return table.value[i]; };
    spec.alpha = [depth, k_search](int pp) {
      return 4 * (pp + k_search + depth);
    };
    MinResult m;
    const AlgoFn algo = [&m, hint](ParallelOracle& o, Rng& r) {
      m = parallel_min(o, r, hint, false);
      if (!m.found) return std::uint64_t{0xFFFF};
      return (static_cast<std::uint64_t>(m.index) << 16) | m.value;
    };
    res.run = execute_framework(g, inf.tree, spec, p, algo, rng, inf.ledger);
    if (m.found && m.value <= static_cast<std::uint64_t>(k_search))
      heavy = SweepHit{static_cast<int>(m.value), table.witness[m.index]};
  }

  const SweepHit* pick = light ? &*light : nullptr;
  if (heavy && (!pick || heavy->length < pick->length)) pick = &*heavy;
  if (pick && valid_simple_cycle(g, pick->cycle) &&
      pick->length <= params.k) {
    res.found = true;
    res.length = pick->length;
    res.cycle = pick->cycle;
  }
  broadcast_value(g, inf.tree, res.found ? res.length : 0,
                  bits_for(k_search + 1), inf.ledger);

  res.stats.leader = inf.leader;
  res.stats.p = p;
  res.stats.rounds_used = inf.ledger.rounds_used();
  res.stats.round_bound =
      infra_allowance(inf.diameter) + 4 * (delta + g.n);
  if (use_heavy) {
    const int b_max = 9 * ceil_sqrt_frac(g.n, hint * std::min(p, g.n));
    res.stats.round_bound += framework_round_bound(
        g.n, inf.diameter, g.n, bits_for(k_search + 1), p, b_max,
        4 * (p + k_search + depth));
  }
  return res;
}

CycleRun find_short_cycle_clustered(const Graph& g, const CycleParams& params,
                                    Rng& rng, int p_override) {
  validate_cycle_params(params);
  CycleRun res;
  res.beta = params.beta;
  if (g.n < 3) return res;

  Infra inf(g);
  const auto cl = cluster_decompose(g, 2 * params.k, inf.ledger);
  const int nc = static_cast<int>(cl.center.size());

  // every cluster grows its k-fringe ball, one color phase at a time
  std::vector<std::vector<int>> ball(nc);
  for (int c = 0; c < nc; ++c) {
    std::vector<int> dist(g.n, -1);
    std::deque<int> queue;
    for (int v = 0; v < g.n; ++v)
      if (cl.cluster_of[v] == c) {
        dist[v] = 0;
        queue.push_back(v);
      }
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      if (dist[v] == params.k) continue;
      for (int u : g.adj[v])
        if (dist[u] < 0) {
          dist[u] = dist[v] + 1;
          queue.push_back(u);
        }
    }
    for (int v = 0; v < g.n; ++v)
      if (dist[v] >= 0) ball[c].push_back(v);
  }
  inf.ledger.charge_rounds(cl.num_colors * params.k, inf.ledger.width());

  for (int col = 0; col < cl.num_colors; ++col) {
    std::vector<char> seen(g.n, 0);
    for (int c = 0; c < nc; ++c) {
      if (cl.color[c] != col) continue;
      for (int v : ball[c]) {
        if (seen[v]) throw StateError("same-color balls overlap");
        seen[v] = 1;
      }
    }
  }

  const std::uint64_t salt = rng.raw();
  std::vector<int> color_rounds(cl.num_colors, 0);
  std::vector<int> color_bound(cl.num_colors, 0);
  int best_cluster = -1;
  CycleRun best_sub;
  for (int c = 0; c < nc; ++c) {
    if (static_cast<int>(ball[c].size()) < 3) continue;
    const std::vector<int>& ids = ball[c];
    std::vector<int> back(g.n, -1);
    for (int i = 0; i < static_cast<int>(ids.size()); ++i) back[ids[i]] = i;
    std::vector<std::pair<int, int>> edges;
    for (int v : ids)
      for (int u : g.adj[v])
        if (u > v && back[u] >= 0) edges.push_back({back[v], back[u]});
    const Graph sub =
        Graph::from_edges(static_cast<int>(ids.size()), edges);
    if (!sub.connected()) continue;
    Rng child(salt, static_cast<std::uint64_t>(c));
    CycleRun r = find_short_cycle(sub, params, child, p_override);
    color_rounds[cl.color[c]] =
        std::max(color_rounds[cl.color[c]], r.stats.rounds_used);
    color_bound[cl.color[c]] =
        std::max(color_bound[cl.color[c]], r.stats.round_bound);
    res.heavy_ran = res.heavy_ran || r.heavy_ran;
    if (r.found) {
      for (int& v : r.cycle) v = ids[v];
      if (best_cluster < 0 || r.length < best_sub.length) {
        best_cluster = c;
        best_sub = std::move(r);
      }
    }
  }
  for (int col = 0; col < cl.num_colors; ++col)
    inf.ledger.charge_rounds(color_rounds[col], inf.ledger.width());

  const int bits = bits_for(params.k + 1);
  std::vector<std::uint64_t> vals(
      g.n, static_cast<std::uint64_t>(params.k) + 1);
  if (best_cluster >= 0)
    vals[cl.center[best_cluster]] =
        static_cast<std::uint64_t>(best_sub.length);
  const std::uint64_t agg = converge_combine(
      g, inf.tree, vals,
      [](std::uint64_t a, std::uint64_t b) { return std::min(a, b); }, bits,
      inf.ledger);
  broadcast_value(g, inf.tree, agg, bits, inf.ledger);

  if (best_cluster >= 0 && valid_simple_cycle(g, best_sub.cycle)) {
    res.found = true;
    res.length = best_sub.length;
    res.cycle = best_sub.cycle;
    res.beta = best_sub.beta;
    res.run = std::move(best_sub.run);
  }
  res.stats.leader = inf.leader;
  res.stats.p = best_sub.stats.p;
  res.stats.rounds_used = inf.ledger.rounds_used();
  res.stats.round_bound = infra_allowance(inf.diameter) + cl.rounds_charged +
                          cl.num_colors * params.k;
  for (int col = 0; col < cl.num_colors; ++col)
    res.stats.round_bound += color_bound[col];
  return res;
}

// ---- Girth ------------------------------------------------------------

GirthRun girth(const Graph& g, double mu, Rng& rng) {
  if (mu <= 0.0) throw ParameterError("mu must be positive");
  GirthRun res;
  if (g.n < 3) {
    res.acyclic = true;
    return res;
  }

  Infra inf(g);
  const int idb = std::max(1, ceil_log2(g.n));

  // adjacency-list exchange: every node ships its list to each neighbor
  int tri_rounds = 0;
  for (int v = 0; v < g.n; ++v)
    tri_rounds = std::max(
        tri_rounds, static_cast<int>(ceil_div(
                        static_cast<std::uint64_t>(g.degree(v)) * idb,
                        inf.ledger.width())));
  inf.ledger.charge_rounds(tri_rounds, inf.ledger.width());
  for (int v = 0; v < g.n && !res.triangle_swept; ++v)
    for (int u : g.adj[v]) {
      if (u < v) continue;
      for (int w : g.adj[v]) {
        if (w <= u) continue;
        if (g.has_edge(u, w)) {
          res.triangle_swept = true;
          res.girth = 3;
          res.cycle = {v, u, w};
          break;
        }
      }
      if (res.triangle_swept) break;
    }

  int bound_sum = 0;
  if (!res.triangle_swept) {
    const int cap = std::min(4 * std::max(1, inf.tree.depth) + 1, g.n);
    const std::uint64_t salt = rng.raw();
    int k = 4;
    bool found = false;
    while (true) {
      const int k_run = std::min(k, cap);
      CycleParams params;
      params.k = k_run;
      params.mu = mu;
      Rng child(salt, static_cast<std::uint64_t>(res.scales));
      const CycleRun r = find_short_cycle_clustered(g, params, child, 0);
      ++res.scales;
      inf.ledger.charge_rounds(r.stats.rounds_used, inf.ledger.width());
      bound_sum += r.stats.round_bound;
      if (r.found) {
        res.girth = r.length;
        res.cycle = r.cycle;
        found = true;
        break;
      }
      if (k_run >= cap) break;
      k = std::max(k + 1,
                   static_cast<int>(std::ceil(k * (1.0 + mu))));
    }
    res.acyclic = !found;
  }
  broadcast_value(g, inf.tree, res.acyclic ? 0 : res.girth,
                  bits_for(g.n), inf.ledger);

  res.stats.leader = inf.leader;
  res.stats.rounds_used = inf.ledger.rounds_used();
  res.stats.round_bound =
      infra_allowance(inf.diameter) + tri_rounds + bound_sum;
  return res;
}

}  // namespace qcongest
