#pragma once

// End-to-end network algorithms assembled from the classical layer, the
// query framework, and the search routines: slot scheduling, element
// distinctness, constant-versus-balanced, eccentricity extremes, average
// eccentricity, and short-cycle / girth detection. Every app owns one
// round ledger covering leader election, tree building, its framework
// batches, and the final broadcast, and reports the documented round
// bound it stayed within. brute_oracle is the harness-side ground truth
// the tests compare against; it never touches a ledger.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qcongest/bridge.hpp"

namespace qcongest {

// Exhaustive reference answers for a graph (and optional per-node rows):
// all-pairs distances, eccentricity summary, girth with a witness, and
// the column sums / colliding pairs of the summed rows. Capped at 64
// nodes; dist entries are -1 for unreachable pairs.
struct BruteOracle {
  std::vector<std::vector<int>> dist;
  std::vector<int> ecc;
  int diameter = 0;
  int radius = 0;
  double avg_ecc = 0.0;
  int girth = 0;  // 0 when acyclic
  std::vector<int> girth_cycle;
  std::vector<std::uint64_t> column_sums;
  std::vector<std::pair<int, int>> collisions;
};
BruteOracle brute_oracle(
    const Graph& g,
    const std::vector<std::vector<std::uint64_t>>& rows = {});

// A witness is a vertex sequence v0..v_{l-1} with every consecutive pair
// and the closing pair adjacent, all vertices distinct, l >= 3.
bool valid_simple_cycle(const Graph& g, const std::vector<int>& cycle);

struct AppStats {
  int leader = -1;
  int p = 0;
  int rounds_used = 0;
  int round_bound = 0;
};

// Slot with the most attendees: argmax over slots of the summed
// availability column, found by the descent with the order flipped.
struct ScheduleRun {
  int slot = -1;
  std::uint64_t count = 0;
  FrameworkRun run;
  AppStats stats;
};
ScheduleRun meeting_schedule(
    const Graph& g, const std::vector<std::vector<std::uint64_t>>& calendars,
    Rng& rng, int p_override = 0);

struct EdRun {
  bool found = false;
  int first = -1;
  int second = -1;
  std::uint64_t value = 0;
  FrameworkRun run;
  AppStats stats;
};
// Colliding pair of the entrywise sum of the per-node rows; absence of a
// report means no collision survived verification within the budget.
EdRun ed_vector(const Graph& g,
                const std::vector<std::vector<std::uint64_t>>& vectors,
                Rng& rng, int p_override = 0);
// Node-value variant: each node contributes a one-hot row carrying its
// own value, so a collision names two nodes with equal inputs.
EdRun ed_nodes(const Graph& g, const std::vector<std::uint64_t>& values,
               Rng& rng, int p_override = 0);

struct DjRun {
  bool constant = false;
  bool promise_ok = true;  // filled when debug is set
  FrameworkRun run;
  AppStats stats;
};
// Exact constant-versus-balanced on the XOR of the per-node bit rows.
// k must be a power of two; debug checks the promise against the rows.
DjRun distributed_dj(const Graph& g,
                     const std::vector<std::vector<std::uint64_t>>& strings,
                     Rng& rng, bool debug = false);

struct EccRun {
  bool ok = false;
  int value = 0;
  int argnode = -1;
  FrameworkRun run;
  AppStats stats;
};
// Diameter (maximize) or radius (minimize) by threshold descent over the
// eccentricity oracle; values come from the staggered multi-source BFS
// subprotocol, charged per batch through the alpha hook.
EccRun diameter_radius(const Graph& g, bool maximize, Rng& rng,
                       int p_override = 0);

struct AvgEccRun {
  double estimate = 0.0;
  FrameworkRun run;
  AppStats stats;
};
AvgEccRun avg_eccentricity(const Graph& g, double eps, Rng& rng,
                           int p_override = 0);

// Knobs for the cycle hunters. k is the target length cap; beta = 0
// derives the degree split from n and the tree depth; mu is the girth
// schedule growth; g carries harness ground truth and is never read by
// the protocols.
struct CycleParams {
  int k = 4;
  double beta = 0.0;
  double mu = 1.0;
  int g = 0;

  int delta_k() const { return (k + 1) / 2; }
};

struct CycleRun {
  bool found = false;
  int length = 0;
  std::vector<int> cycle;
  double beta = 0.0;
  bool heavy_ran = false;
  FrameworkRun run;
  AppStats stats;
};

// Degree split exponent derived from the instance, clamped to (0, 1/2].
double cycle_beta(int n, int depth, int k);

// Per-start values the heavy branch minimizes over: the length of the
// shortest verified cycle within reach of s (through s itself, or
// through a neighbor once s is removed), k_search + 1 when none.
// Exposed so a centralized reference run can replay the same table.
struct HeavyTable {
  std::vector<std::uint64_t> value;
  std::vector<std::vector<int>> witness;
};
HeavyTable heavy_cycle_table(const Graph& g, int k_search);
// Smallest cycle of length at most k: deterministic token sweep over the
// low-degree subgraph plus sampled two-phase detection around heavy
// vertices. Witnesses are always structurally verified before they are
// reported, so a hit is never spurious.
CycleRun find_short_cycle(const Graph& g, const CycleParams& params, Rng& rng,
                          int p_override = 0);
// Same contract, but ball-carving first: every cluster hunts inside its
// own k-fringe ball, same-color clusters run the same rounds, and their
// balls are asserted disjoint.
CycleRun find_short_cycle_clustered(const Graph& g, const CycleParams& params,
                                    Rng& rng, int p_override = 0);

struct GirthRun {
  bool acyclic = false;
  int girth = 0;
  std::vector<int> cycle;
  bool triangle_swept = false;  // classical sweep decided g = 3
  int scales = 0;
  AppStats stats;
};
// Girth by a classical triangle sweep followed by clustered short-cycle
// runs at k = 4, 4(1+mu), ...; exhausting every scale up to the distance
// cap reports Acyclic. One-sided: any reported cycle is real.
GirthRun girth(const Graph& g, double mu, Rng& rng);

}  // namespace qcongest
