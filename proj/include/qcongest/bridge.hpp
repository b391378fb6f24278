#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qcongest/congest.hpp"
#include "qcongest/oracle.hpp"
#include "qcongest/statevector.hpp"

namespace qcongest {

// A q-qubit logical register replicated across every node: the global state
// carries one copy per node, perfectly correlated in the computational basis.
struct DistributedRegister {
  int width = 0;
  int root = 0;
  std::vector<std::string> copies;  // copies[v] is node v's register name
};

// Fans the leader's register out along the tree so the global state becomes
// sum_i alpha_i |i>^(n). Charges depth + ceil(q/L) rounds, L = ceil(log2 n)
// qubits per edge per round; the documented bound is 3*(D + ceil(q/L)).
DistributedRegister distribute_state(const Graph& g, const BfsTree& tree,
                                     StateVector& st, const std::string& reg,
                                     RoundLedger& ledger);

// Adjoint of distribute_state: uncomputes every non-root copy and releases
// it. Releasing enforces that each copy ends in |0>, so a state that is not
// in distributed form fails loudly. Same round charge as distribution.
void collect_state(const Graph& g, const BfsTree& tree, StateVector& st,
                   const DistributedRegister& dreg, RoundLedger& ledger);

// How the network answers queries. Memory mode: node v holds table
// node_tables[v] and the oracle value is the entrywise semigroup combination
// combine(x^(0)_i, ..., x^(n-1)_i). Computed mode: a subprotocol produces
// value compute(i) and a batch of width p costs an extra alpha(p) rounds.
struct OracleSpec {
  int k = 0;
  int value_bits = 1;
  std::vector<std::vector<std::uint64_t>> node_tables;
  std::function<std::uint64_t(std::uint64_t, std::uint64_t)> combine;
  std::function<std::uint64_t(int)> compute;
  std::function<int(int)> alpha;

  bool computed() const { return static_cast<bool>(compute); }
  std::uint64_t combined_value(int i) const;
};

struct FrameworkRun {
  std::uint64_t result = 0;
  QueryTranscript transcript;
  int p = 0;
  int batches = 0;
  int rounds_used = 0;
  int round_bound = 0;
  int hygiene_checks = 0;  // coherent aggregation sweeps played and verified
};

using AlgoFn = std::function<std::uint64_t(ParallelOracle&, Rng&)>;

// Runs a parallel-query algorithm with its queries answered by the network.
// Every batch is charged: indices stream down the tree, values aggregate up
// with children uncomputed after the parent combines, and the index
// distribution is reversed. The result and transcript match a centralized
// run of the same algorithm against i -> combined_value(i) with the same rng
// stream. On instances small enough for the statevector, the first batches
// additionally play the aggregation circuit coherently and verify that the
// leader's accumulator is correct in superposition and that every ancilla
// returns to |0>.
FrameworkRun execute_framework(const Graph& g, const BfsTree& tree,
                               const OracleSpec& spec, int p,
                               const AlgoFn& algo, Rng& rng,
                               RoundLedger& ledger);

// The bound execute_framework enforces, with b the number of batches used:
// 6*(D + b*((D+p)*ceil(q/L) + p*ceil(log2 k/L) + alpha(p))), q = log2 k +
// value_bits.
int framework_round_bound(int n, int diameter, int k, int value_bits, int p,
                          int batches, int alpha_rounds);

}  // namespace qcongest
