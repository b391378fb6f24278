#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qcongest/congest.hpp"
#include "qcongest/statevector.hpp"

namespace qcongest {

// A distributed preparation protocol: from the all-zero state it produces
// sqrt(1-p)|phi0>|0> + sqrt(p)|phi1>|1> across the nodes' registers, with
// the marker qubit at flag on flag_node. unprepare must be the exact
// adjoint.
struct AmplitudeProblem {
  std::vector<std::vector<std::pair<std::string, int>>> node_regs;
  std::function<void(StateVector&)> prepare;
  std::function<void(StateVector&)> unprepare;
  QubitRef flag;
  int flag_node = 0;
  int prep_rounds = 0;
  double p_max = 1.0;
};

// A shared eigenstate and a black-box unitary with U|psi> = e^{i theta}|psi>.
// controlled_power applies sum_t |t><t| (x) U^t over the named control
// register; apply_once is plain U, used to verify the eigenstate relation.
struct PhaseProblem {
  std::vector<std::vector<std::pair<std::string, int>>> node_regs;
  std::function<void(StateVector&)> prepare;
  std::function<void(StateVector&, const std::string&)> controlled_power;
  std::function<void(StateVector&)> apply_once;
  int u_rounds = 1;
  double theta = 0.0;
  int control_bits = 0;  // forces the control width when positive
};

// Allocates every node's registers into one fresh state.
StateVector problem_state(const AmplitudeProblem& prob);

// Checks that prepare followed by unprepare is the identity (1e-9).
void check_preparer(const AmplitudeProblem& prob);

// One amplification step: Z at the flag, adjoint-prepare, a reflection
// about the all-zero state realized as a reversible AND of per-node
// all-zero checks swept to the leader and back, re-prepare, global minus.
// Acts as the exact rotation by 2*arcsin(sqrt(p)) on the invariant plane.
// Charges 2*prep_rounds + 2*depth rounds; bounded by 4*(prep_rounds + D).
void aa_iterate(const Graph& g, const BfsTree& tree,
                const AmplitudeProblem& prob, StateVector& st,
                RoundLedger& ledger);

// Repeated-measurement amplification with an exponential schedule. On
// success st holds the good branch (flag collapsed to 1). Stops before the
// round budget 4*(prep_rounds+depth restricted to >=1)*ceil(1/sqrt(p_floor))
// *max(1,ceil(log2(1/delta))) is exceeded and reports failure then.
bool amplitude_amplify(const Graph& g, const BfsTree& tree,
                       const AmplitudeProblem& prob, double delta, Rng& rng,
                       StateVector& st, RoundLedger& ledger,
                       double p_floor = 1.0 / 64.0);

// Control register width used for precision eps (radians), at least 1:
// ceil(log2(2*pi/eps)) + 2, unless the problem forces a width.
int phase_control_bits(double eps);

// Median-boosted phase estimation run coherently: the leader's control
// superposition is distributed with distribute_state, controlled powers of
// U act under the shared copies, the controls are collected back and the
// leader applies the inverse QFT. Returns the circular median estimate of
// theta over 8*max(1,ceil(log2(1/delta))) repetitions.
double phase_estimate(const Graph& g, const BfsTree& tree,
                      const PhaseProblem& prob, double eps, double delta,
                      Rng& rng, RoundLedger& ledger);

// Ledger ceiling for phase_estimate as implemented: with c control bits and
// reps repetitions, reps*((2^c - 1)*R + 2*(D + ceil(c/L))).
int phase_estimate_bound(int n, int diameter, int u_rounds, double eps,
                         double delta, int control_bits = 0);

// Estimates p by phase estimation on the amplification iterate. The
// iterate's exact two-eigenphase structure (certified separately against
// the statevector) lets the pointer measurement be sampled from its exact
// distribution, so precision is limited only by the control width
// ceil(log2(4*pi*sqrt(p_max)/eps)) + 2.
double amplitude_estimate(const Graph& g, const BfsTree& tree,
                          const AmplitudeProblem& prob, double eps,
                          double delta, Rng& rng, RoundLedger& ledger);

int amplitude_estimate_bound(int n, int diameter, int prep_rounds, double eps,
                             double delta, double p_max);

}  // namespace qcongest
