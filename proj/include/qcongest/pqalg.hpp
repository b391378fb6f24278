#pragma once

// Parallel-query algorithms simulated faithfully: amplitudes follow the
// true input, algorithmic choices (iteration counts, schedules) may use
// only batch results and caller-supplied hints. Every result that names
// an index was confirmed by a classical verification batch, and every
// algorithm stops at its stated batch budget.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qcongest/oracle.hpp"

namespace qcongest {

// Search budget 9*ceil(sqrt(k/(t*p))) for t marked items (t=1 when no
// hint is given).
int grover_budget(int k, int p, int marked_hint);

struct GroverResult {
  bool found = false;
  int index = -1;
  std::uint64_t value = 0;
  int batches = 0;
  int budget = 0;
};

// Finds an index whose value satisfies the predicate. With a hint t the
// phase lengths are tuned for t marked items; without one a growing
// random schedule is used. marked_hint = 0 means unknown.
GroverResult grover_any(ParallelOracle& oracle,
                        const std::function<bool(std::uint64_t)>& marked,
                        Rng& rng, int marked_hint = 0);

struct MinResult {
  bool found = false;
  int index = -1;
  std::uint64_t value = 0;
  int batches = 0;
  int budget = 0;
};

// Threshold-descent minimum finding under budget
// 9*ceil(sqrt(k/(h*p))) where h is the caller's lower bound on the
// multiplicity of the minimum (1 when unknown). The maximize flag flips
// the order, so the same descent finds a maximum.
MinResult parallel_min(ParallelOracle& oracle, Rng& rng,
                       int multiplicity_hint = 1, bool maximize = false);

struct EdResult {
  bool found = false;
  int first = -1;
  int second = -1;
  std::uint64_t value = 0;
  int batches = 0;
  int budget = 0;
};

// Collision finding by a walk on z-subsets with the stored-value check;
// stationary reflections are charged as ceil(1/sqrt(gap)) batches for
// the p-step exchange walk. Budget 12*ceil((k/p)^(2/3)). A reported
// pair is always confirmed by fresh classical queries.
EdResult element_distinctness(ParallelOracle& oracle, Rng& rng);

// Spectral gap of the p-step replacement walk on z-subsets of [k].
double johnson_gap(int k, int z, int p);

struct DjResult {
  bool constant = false;
  int batches = 0;
};

// Exact constant-vs-balanced decision with a single width-1 coherent
// batch; the table size must be a power of two.
DjResult deutsch_jozsa(ParallelOracle& oracle, Rng& rng);

struct MeanResult {
  double mean = 0.0;
  int batches = 0;
};

// Mean of the table to additive eps: the mean is the sum over
// thresholds T of the fraction of entries >= T; each fraction is
// estimated by maximum-likelihood amplitude estimation, with up to p
// thresholds packed into each batch.
MeanResult mean_estimate(ParallelOracle& oracle, std::uint64_t value_max,
                         double eps, Rng& rng);

}  // namespace qcongest
