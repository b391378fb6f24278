#pragma once

// Synchronous message-passing layer: graphs, the per-round bandwidth
// ledger, and the classical protocols the quantum layer rides on
// (leader election, BFS, staggered multi-source BFS, ball-carving
// decomposition, tree aggregation).
//
// Message width is w = 2*ceil(log2 n) bits per edge per round; every
// charge is audited against w when it is appended.

#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qcongest/common.hpp"

namespace qcongest {

struct Graph {
  int n = 0;
  std::vector<std::vector<int>> adj;  // sorted, no duplicates, no loops

  int m() const;
  bool has_edge(int u, int v) const;
  int degree(int v) const { return static_cast<int>(adj[v].size()); }

  static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges);
  // Text format: "u v" per line for an edge, a single integer declares an
  // isolated node, '#' starts a comment. Ids must cover 0..n-1.
  static Graph parse(const std::string& text);
  static Graph load(const std::string& path);

  bool connected() const;
  std::vector<int> bfs_dist(int src) const;
  std::vector<int> eccentricities() const;
  int diameter() const;
  int radius() const;
};

// Per-node inputs sidecar: "v: 0110" (one bit per char) or "v: 3,1,4"
// (comma-separated integers).
std::map<int, std::vector<std::uint64_t>> parse_inputs(
    const std::string& text);
std::map<int, std::vector<std::uint64_t>> load_inputs(
    const std::string& path);

int message_width(int n);  // 2 * ceil(log2 n), at least 2

class RoundLedger {
 public:
  struct Entry {
    int round;
    int from;
    int to;
    int bits;
  };

  explicit RoundLedger(int width_bits, bool keep_entries = false);

  int width() const { return width_; }
  int rounds_used() const { return rounds_; }
  const std::vector<Entry>& entries() const { return entries_; }

  void open_round();
  // Charges bits on the directed edge (from, to) in the open round; the
  // per-edge per-round total must stay within the width.
  void send(int from, int to, int bits);
  void close_round();
  bool round_open() const { return open_; }

  // Bulk charge for phases whose schedule guarantees at most
  // bits_per_edge on any edge in any of the rounds.
  void charge_rounds(int rounds, int bits_per_edge);

  // Process-wide count of width audits that ran (acceptance evidence).
  static std::uint64_t audits();

 private:
  void audit(int bits) const;

  int width_;
  bool keep_entries_;
  bool open_ = false;
  int rounds_ = 0;
  std::map<std::pair<int, int>, int> in_flight_;
  std::vector<Entry> entries_;
};

// One synchronous round: every message must ride an existing edge; the
// per-edge totals are audited and charged to the ledger. Returns the
// inbox of each node, messages sorted by sender.
struct Packet {
  int from;
  int to;
  std::uint64_t payload;
  int bits;
};
std::vector<std::vector<Packet>> exchange_round(const Graph& g,
                                                RoundLedger& ledger,
                                                const std::vector<Packet>& out);

struct BfsTree {
  int root = 0;
  std::vector<int> parent;  // -1 at the root
  std::vector<int> dist;
  int depth = 0;
  int rounds = 0;
};

// Max-id flooding to quiescence; returns n-1 within 2(D+1) rounds.
int elect_leader(const Graph& g, RoundLedger& ledger);

// Synchronous BFS announce; ties broken toward the smallest neighbor id.
BfsTree build_bfs(const Graph& g, int root, RoundLedger& ledger);

struct MultiBfs {
  std::vector<int> sources;
  std::vector<std::vector<int>> dist;  // dist[rank][v]
  std::vector<int> ecc;                // per rank, gathered at the tree root
  int rounds = 0;
};

// Staggered BFS from every source with one token per edge per round,
// then a pipelined eccentricity convergecast up the given tree.
MultiBfs multi_source_bfs(const Graph& g, const std::vector<int>& sources,
                          const BfsTree& tree, RoundLedger& ledger);

struct Clustering {
  int d = 0;
  std::vector<int> cluster_of;
  std::vector<int> center;  // per cluster
  std::vector<int> radius;  // per cluster, within its residual graph
  std::vector<int> color;   // per cluster
  int num_colors = 0;
  int rounds_charged = 0;
};

// Ball-carving with the doubling rule in steps of d: cluster strong
// diameter is at most 2d*ceil(log2 n); clusters whose distance is below
// d get distinct colors, at most 4*ceil(log2 n) of them.
Clustering cluster_decompose(const Graph& g, int d, RoundLedger& ledger);

// One value per node combined up the tree (pipelined, one message per
// tree edge per round); result lands at the root.
std::uint64_t converge_combine(
    const Graph& g, const BfsTree& tree, const std::vector<std::uint64_t>& vals,
    const std::function<std::uint64_t(std::uint64_t, std::uint64_t)>& op,
    int bits, RoundLedger& ledger);

// Root value delivered to every node along tree edges.
void broadcast_value(const Graph& g, const BfsTree& tree, std::uint64_t value,
                     int bits, RoundLedger& ledger);

}  // namespace qcongest
