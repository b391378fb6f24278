#include "qcongest/congest.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <limits>
#include <queue>
#include <set>
#include <sstream>

namespace qcongest {

namespace {

std::atomic<std::uint64_t> g_audits{0};

constexpr int kInf = std::numeric_limits<int>::max();

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

// ---- Graph ------------------------------------------------------------

int Graph::m() const {
  int total = 0;
  for (const auto& a : adj) total += static_cast<int>(a.size());
  return total / 2;
}

bool Graph::has_edge(int u, int v) const {
  const auto& a = adj[u];
  return std::binary_search(a.begin(), a.end(), v);
}

Graph Graph::from_edges(int n,
                        const std::vector<std::pair<int, int>>& edges) {
  if (n <= 0) throw ParameterError("graph needs at least one node");
  Graph g;
  g.n = n;
  g.adj.resize(n);
  for (auto [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw ParameterError("edge endpoint out of range");
    if (u == v) throw ParameterError("self loop at node " + std::to_string(u));
    g.adj[u].push_back(v);
    g.adj[v].push_back(u);
  }
  for (auto& a : g.adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  return g;
}

Graph Graph::parse(const std::string& text) {
  std::vector<std::pair<int, int>> edges;
  std::set<int> mentioned;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<long long> nums;
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        nums.push_back(std::stoll(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(lineno) +
                         ": expected an integer, got '" + tok + "'");
      }
    }
    if (nums.empty()) continue;
    if (nums.size() > 2)
      throw ParseError("line " + std::to_string(lineno) +
                       ": expected 'u v' or a single node id");
    for (long long v : nums)
      if (v < 0)
        throw ParseError("line " + std::to_string(lineno) +
                         ": negative node id");
    if (nums.size() == 1) {
      mentioned.insert(static_cast<int>(nums[0]));
    } else {
      const int u = static_cast<int>(nums[0]);
      const int v = static_cast<int>(nums[1]);
      if (u == v)
        throw ParseError("line " + std::to_string(lineno) + ": self loop");
      mentioned.insert(u);
      mentioned.insert(v);
      edges.emplace_back(u, v);
    }
  }
  if (mentioned.empty()) throw ParseError("graph file declares no nodes");
  const int n = *mentioned.rbegin() + 1;
  if (static_cast<int>(mentioned.size()) != n)
    throw ParseError("node ids must be contiguous 0.." + std::to_string(n - 1) +
                     " but only " + std::to_string(mentioned.size()) +
                     " ids appear");
  return from_edges(n, edges);
}

Graph Graph::load(const std::string& path) { return parse(read_file(path)); }

bool Graph::connected() const {
  if (n == 0) return false;
  const auto d = bfs_dist(0);
  return std::none_of(d.begin(), d.end(), [](int x) { return x < 0; });
}

std::vector<int> Graph::bfs_dist(int src) const {
  if (src < 0 || src >= n) throw ParameterError("bfs source out of range");
  std::vector<int> dist(n, -1);
  std::queue<int> q;
  dist[src] = 0;
  q.push(src);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int v : adj[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        q.push(v);
      }
    }
  }
  return dist;
}

std::vector<int> Graph::eccentricities() const {
  std::vector<int> ecc(n, 0);
  for (int s = 0; s < n; ++s) {
    const auto d = bfs_dist(s);
    for (int v = 0; v < n; ++v) {
      if (d[v] < 0) throw ConnectivityError("graph is disconnected");
      ecc[s] = std::max(ecc[s], d[v]);
    }
  }
  return ecc;
}

int Graph::diameter() const {
  const auto e = eccentricities();
  return *std::max_element(e.begin(), e.end());
}

int Graph::radius() const {
  const auto e = eccentricities();
  return *std::min_element(e.begin(), e.end());
}

// ---- Inputs sidecar ---------------------------------------------------

std::map<int, std::vector<std::uint64_t>> parse_inputs(
    const std::string& text) {
  std::map<int, std::vector<std::uint64_t>> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos)
      throw ParseError("inputs line " + std::to_string(lineno) +
                       ": expected 'node: values'");
    int node = 0;
    try {
      node = std::stoi(line.substr(0, colon));
    } catch (const std::exception&) {
      throw ParseError("inputs line " + std::to_string(lineno) +
                       ": bad node id");
    }
    if (node < 0)
      throw ParseError("inputs line " + std::to_string(lineno) +
                       ": negative node id");
    if (out.count(node))
      throw ParseError("inputs line " + std::to_string(lineno) +
                       ": duplicate node " + std::to_string(node));
    std::string rest = line.substr(colon + 1);
    std::vector<std::uint64_t> vals;
    if (rest.find(',') != std::string::npos) {
      std::string item;
      std::istringstream rs(rest);
      while (std::getline(rs, item, ',')) {
        try {
          vals.push_back(std::stoull(item));
        } catch (const std::exception&) {
          throw ParseError("inputs line " + std::to_string(lineno) +
                           ": bad integer '" + item + "'");
        }
      }
    } else {
      std::string digits;
      for (char c : rest)
        if (!std::isspace(static_cast<unsigned char>(c))) digits.push_back(c);
      if (digits.empty())
        throw ParseError("inputs line " + std::to_string(lineno) +
                         ": no values");
      const bool binary = digits.find_first_not_of("01") == std::string::npos;
      if (binary) {
        for (char c : digits) vals.push_back(c == '1' ? 1 : 0);
      } else {
        try {
          vals.push_back(std::stoull(digits));
        } catch (const std::exception&) {
          throw ParseError("inputs line " + std::to_string(lineno) +
                           ": bad value '" + digits + "'");
        }
      }
    }
    out[node] = std::move(vals);
  }
  return out;
}

std::map<int, std::vector<std::uint64_t>> load_inputs(
    const std::string& path) {
  return parse_inputs(read_file(path));
}

// ---- Ledger -----------------------------------------------------------

int message_width(int n) { return 2 * std::max(1, ceil_log2(n)); }

RoundLedger::RoundLedger(int width_bits, bool keep_entries)
    : width_(width_bits), keep_entries_(keep_entries) {
  if (width_bits <= 0) throw ParameterError("message width must be positive");
}

void RoundLedger::audit(int bits) const {
  g_audits.fetch_add(1, std::memory_order_relaxed);
  if (bits < 0 || bits > width_)
    throw BandwidthError("message of " + std::to_string(bits) +
                         " bits exceeds width " + std::to_string(width_));
}

void RoundLedger::open_round() {
  if (open_) throw ContractError("round already open");
  open_ = true;
}

void RoundLedger::send(int from, int to, int bits) {
  if (!open_) throw ContractError("send outside a round");
  int& total = in_flight_[{from, to}];
  total += bits;
  audit(total);
  if (keep_entries_) entries_.push_back({rounds_, from, to, bits});
}

void RoundLedger::close_round() {
  if (!open_) throw ContractError("no round open");
  in_flight_.clear();
  open_ = false;
  ++rounds_;
}

void RoundLedger::charge_rounds(int rounds, int bits_per_edge) {
  if (open_) throw ContractError("bulk charge during an open round");
  if (rounds < 0) throw ParameterError("negative round charge");
  audit(bits_per_edge);
  rounds_ += rounds;
}

std::uint64_t RoundLedger::audits() {
  return g_audits.load(std::memory_order_relaxed);
}

std::vector<std::vector<Packet>> exchange_round(const Graph& g,
                                                RoundLedger& ledger,
                                                const std::vector<Packet>& out) {
  ledger.open_round();
  std::vector<std::vector<Packet>> inbox(g.n);
  std::vector<Packet> sorted = out;
  std::sort(sorted.begin(), sorted.end(), [](const Packet& a, const Packet& b) {
    return std::tie(a.to, a.from) < std::tie(b.to, b.from);
  });
  for (const auto& pkt : sorted) {
    if (pkt.from < 0 || pkt.from >= g.n || pkt.to < 0 || pkt.to >= g.n ||
        !g.has_edge(pkt.from, pkt.to))
      throw ConnectivityError("message on a missing edge " +
                              std::to_string(pkt.from) + "-" +
                              std::to_string(pkt.to));
    ledger.send(pkt.from, pkt.to, pkt.bits);
    inbox[pkt.to].push_back(pkt);
  }
  ledger.close_round();
  return inbox;
}

// ---- Leader election --------------------------------------------------

int elect_leader(const Graph& g, RoundLedger& ledger) {
  const int id_bits = std::max(1, ceil_log2(g.n));
  std::vector<int> best(g.n);
  std::vector<char> changed(g.n, 1);
  for (int v = 0; v < g.n; ++v) best[v] = v;
  while (true) {
    std::vector<Packet> out;
    for (int v = 0; v < g.n; ++v) {
      if (!changed[v]) continue;
      for (int u : g.adj[v])
        out.push_back({v, u, static_cast<std::uint64_t>(best[v]), id_bits});
      changed[v] = 0;
    }
    if (out.empty()) break;
    auto inbox = exchange_round(g, ledger, out);
    for (int v = 0; v < g.n; ++v) {
      for (const auto& pkt : inbox[v]) {
        const int cand = static_cast<int>(pkt.payload);
        if (cand > best[v]) {
          best[v] = cand;
          changed[v] = 1;
        }
      }
    }
  }
  for (int v = 0; v < g.n; ++v)
    if (best[v] != g.n - 1)
      throw ConnectivityError("leader election did not converge; graph "
                              "appears disconnected");
  return g.n - 1;
}

// ---- BFS --------------------------------------------------------------

BfsTree build_bfs(const Graph& g, int root, RoundLedger& ledger) {
  if (root < 0 || root >= g.n) throw ParameterError("bfs root out of range");
  const int dist_bits = std::max(1, ceil_log2(g.n));
  BfsTree t;
  t.root = root;
  t.parent.assign(g.n, -1);
  t.dist.assign(g.n, kInf);
  t.dist[root] = 0;
  std::vector<int> frontier{root};
  int rounds = 0;
  while (!frontier.empty()) {
    std::vector<Packet> out;
    for (int v : frontier)
      for (int u : g.adj[v])
        out.push_back({v, u, static_cast<std::uint64_t>(t.dist[v]), dist_bits});
    auto inbox = exchange_round(g, ledger, out);
    ++rounds;
    std::vector<int> next;
    for (int v = 0; v < g.n; ++v) {
      if (t.dist[v] != kInf || inbox[v].empty()) continue;
      int parent = inbox[v][0].from;
      int d = static_cast<int>(inbox[v][0].payload);
      for (const auto& pkt : inbox[v])
        if (pkt.from < parent) {
          parent = pkt.from;
          d = static_cast<int>(pkt.payload);
        }
      t.parent[v] = parent;
      t.dist[v] = d + 1;
      t.depth = std::max(t.depth, t.dist[v]);
      next.push_back(v);
    }
    frontier = std::move(next);
  }
  for (int v = 0; v < g.n; ++v)
    if (t.dist[v] == kInf)
      throw ConnectivityError("bfs did not reach node " + std::to_string(v));
  t.rounds = rounds;
  return t;
}

// ---- Multi-source BFS -------------------------------------------------

MultiBfs multi_source_bfs(const Graph& g, const std::vector<int>& sources,
                          const BfsTree& tree, RoundLedger& ledger) {
  if (sources.empty()) throw ParameterError("no bfs sources");
  for (int s : sources)
    if (s < 0 || s >= g.n) throw ParameterError("bfs source out of range");
  std::vector<int> order = sources;
  std::sort(order.begin(), order.end());
  const int S = static_cast<int>(order.size());
  const int rank_bits = std::max(1, ceil_log2(S));
  const int dist_bits = std::max(1, ceil_log2(g.n));

  MultiBfs res;
  res.sources = order;
  res.dist.assign(S, std::vector<int>(g.n, kInf));
  // pending[v][u]: ranks v still owes to neighbor u
  std::vector<std::map<int, std::set<int>>> pending(g.n);
  const int rounds_before = ledger.rounds_used();

  auto relax = [&](int rank, int v, int d) {
    if (d >= res.dist[rank][v]) return;
    res.dist[rank][v] = d;
    for (int u : g.adj[v]) pending[v][u].insert(rank);
  };

  int t = 0;
  while (true) {
    if (t < S) relax(t, order[t], 0);
    std::vector<Packet> out;
    for (int v = 0; v < g.n; ++v) {
      for (auto& [u, ranks] : pending[v]) {
        if (ranks.empty()) continue;
        int pick = -1;
        for (int r : ranks)
          if (pick < 0 || std::make_pair(res.dist[r][v], r) <
                              std::make_pair(res.dist[pick][v], pick))
            pick = r;
        ranks.erase(pick);
        const std::uint64_t payload =
            (static_cast<std::uint64_t>(pick) << dist_bits) |
            static_cast<std::uint64_t>(res.dist[pick][v]);
        out.push_back({v, u, payload, rank_bits + dist_bits});
      }
    }
    if (out.empty() && t >= S) break;
    if (out.empty()) {
      ledger.open_round();
      ledger.close_round();
    } else {
      auto inbox = exchange_round(g, ledger, out);
      for (int v = 0; v < g.n; ++v)
        for (const auto& pkt : inbox[v]) {
          const int rank = static_cast<int>(pkt.payload >> dist_bits);
          const int d =
              static_cast<int>(pkt.payload & ((1ULL << dist_bits) - 1));
          relax(rank, v, d + 1);
        }
    }
    ++t;
  }

  for (int r = 0; r < S; ++r)
    for (int v = 0; v < g.n; ++v)
      if (res.dist[r][v] == kInf)
        throw ConnectivityError("graph is disconnected");

  // Pipelined eccentricity convergecast up the tree: node v may push
  // rank r once every child has contributed that rank.
  std::vector<std::vector<int>> agg(g.n, std::vector<int>(S));
  std::vector<std::vector<int>> got(g.n, std::vector<int>(S, 0));
  std::vector<int> kids(g.n, 0);
  for (int v = 0; v < g.n; ++v)
    if (v != tree.root) ++kids[tree.parent[v]];
  for (int v = 0; v < g.n; ++v)
    for (int r = 0; r < S; ++r) agg[v][r] = res.dist[r][v];
  std::vector<int> next_rank(g.n, 0);
  const int ecc_bits = dist_bits;
  while (true) {
    std::vector<Packet> out;
    for (int v = 0; v < g.n; ++v) {
      if (v == tree.root || next_rank[v] >= S) continue;
      const int r = next_rank[v];
      if (got[v][r] < kids[v]) continue;
      const std::uint64_t payload = (static_cast<std::uint64_t>(r) << ecc_bits) |
                                    static_cast<std::uint64_t>(agg[v][r]);
      out.push_back({v, tree.parent[v], payload, rank_bits + ecc_bits});
      ++next_rank[v];
    }
    if (out.empty()) break;
    auto inbox = exchange_round(g, ledger, out);
    for (int v = 0; v < g.n; ++v)
      for (const auto& pkt : inbox[v]) {
        const int r = static_cast<int>(pkt.payload >> ecc_bits);
        const int val =
            static_cast<int>(pkt.payload & ((1ULL << ecc_bits) - 1));
        agg[v][r] = std::max(agg[v][r], val);
        ++got[v][r];
      }
  }
  res.ecc.assign(S, 0);
  for (int r = 0; r < S; ++r) {
    if (got[tree.root][r] < kids[tree.root])
      throw ContractError("eccentricity convergecast incomplete");
    res.ecc[r] = agg[tree.root][r];
  }
  res.rounds = ledger.rounds_used() - rounds_before;
  return res;
}

// ---- Clustering -------------------------------------------------------

Clustering cluster_decompose(const Graph& g, int d, RoundLedger& ledger) {
  if (d <= 0) throw ParameterError("cluster radius step must be positive");
  const int L = std::max(1, ceil_log2(g.n));
  Clustering c;
  c.d = d;
  c.cluster_of.assign(g.n, -1);

  auto residual_ball = [&](int center, int radius) {
    std::vector<int> dist(g.n, -1);
    std::queue<int> q;
    dist[center] = 0;
    q.push(center);
    std::vector<int> ball{center};
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      if (dist[u] == radius) continue;
      for (int v : g.adj[u]) {
        if (dist[v] >= 0 || c.cluster_of[v] >= 0) continue;
        dist[v] = dist[u] + 1;
        ball.push_back(v);
        q.push(v);
      }
    }
    return ball;
  };

  for (int v = 0; v < g.n; ++v) {
    if (c.cluster_of[v] >= 0) continue;
    int r = 0;
    auto ball = residual_ball(v, 0);
    while (true) {
      auto bigger = residual_ball(v, r + d);
      if (bigger.size() <= 2 * ball.size()) break;
      r += d;
      ball = std::move(bigger);
    }
    const int id = static_cast<int>(c.center.size());
    for (int u : ball) c.cluster_of[u] = id;
    c.center.push_back(v);
    c.radius.push_back(r);
  }

  // Contact graph: clusters closer than d hops interfere.
  const int num = static_cast<int>(c.center.size());
  std::vector<std::vector<int>> near(num);
  for (int s = 0; s < g.n; ++s) {
    const auto dist = g.bfs_dist(s);
    for (int v = 0; v < g.n; ++v) {
      if (dist[v] < 0 || dist[v] >= d) continue;
      const int a = c.cluster_of[s];
      const int b = c.cluster_of[v];
      if (a != b) near[a].push_back(b);
    }
  }
  c.color.assign(num, -1);
  for (int i = 0; i < num; ++i) {
    std::set<int> used;
    for (int j : near[i])
      if (c.color[j] >= 0) used.insert(c.color[j]);
    int col = 0;
    while (used.count(col)) ++col;
    c.color[i] = col;
    c.num_colors = std::max(c.num_colors, col + 1);
  }
  if (c.num_colors > 4 * L)
    throw ContractError("cluster coloring exceeded its bound");

  c.rounds_charged = 4 * d * L * L;
  ledger.charge_rounds(c.rounds_charged, ledger.width());
  return c;
}

// ---- Tree aggregation -------------------------------------------------

std::uint64_t converge_combine(
    const Graph& g, const BfsTree& tree, const std::vector<std::uint64_t>& vals,
    const std::function<std::uint64_t(std::uint64_t, std::uint64_t)>& op,
    int bits, RoundLedger& ledger) {
  if (static_cast<int>(vals.size()) != g.n)
    throw ParameterError("one value per node required");
  std::vector<std::uint64_t> acc = vals;
  std::vector<int> kids(g.n, 0);
  for (int v = 0; v < g.n; ++v)
    if (v != tree.root) ++kids[tree.parent[v]];
  std::vector<char> sent(g.n, 0);
  while (true) {
    std::vector<Packet> out;
    for (int v = 0; v < g.n; ++v) {
      if (v == tree.root || sent[v] || kids[v] > 0) continue;
      out.push_back({v, tree.parent[v], acc[v], bits});
      sent[v] = 1;
    }
    if (out.empty()) break;
    auto inbox = exchange_round(g, ledger, out);
    for (int v = 0; v < g.n; ++v)
      for (const auto& pkt : inbox[v]) {
        acc[v] = op(acc[v], pkt.payload);
        --kids[v];
      }
  }
  for (int v = 0; v < g.n; ++v)
    if (v != tree.root && !sent[v])
      throw ContractError("convergecast stalled below node " +
                          std::to_string(v));
  return acc[tree.root];
}

void broadcast_value(const Graph& g, const BfsTree& tree, std::uint64_t value,
                     int bits, RoundLedger& ledger) {
  std::vector<std::vector<int>> kids(g.n);
  for (int v = 0; v < g.n; ++v)
    if (v != tree.root) kids[tree.parent[v]].push_back(v);
  std::vector<int> frontier{tree.root};
  while (true) {
    std::vector<Packet> out;
    std::vector<int> next;
    for (int v : frontier)
      for (int u : kids[v]) {
        out.push_back({v, u, value, bits});
        next.push_back(u);
      }
    if (out.empty()) break;
    exchange_round(g, ledger, out);
    frontier = std::move(next);
  }
}

}  // namespace qcongest
