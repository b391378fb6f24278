#include "qcongest/nonoracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qcongest/bridge.hpp"
#include "qcongest/common.hpp"

namespace qcongest {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

int chunk_bits(int n) { return std::max(1, ceil_log2(n)); }

std::string zname(int v) { return "__z" + std::to_string(v); }

std::vector<int> bottom_up(const BfsTree& tree) {
  std::vector<int> order(tree.dist.size());
  for (std::size_t v = 0; v < order.size(); ++v) order[v] = static_cast<int>(v);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return tree.dist[a] > tree.dist[b]; });
  return order;
}

double qubit_prob_one(const StateVector& st, const QubitRef& q) {
  const int pos = st.qubit_pos(q);
  double s = 0.0;
  for (std::int64_t i = 0; i < st.dim(); ++i)
    if ((static_cast<std::uint64_t>(i) >> pos) & 1) s += std::norm(st.amp(i));
  return s;
}

// Flips the target ancilla exactly on the branches where every local
// register is zero and every child already reported all-zero. Self-inverse.
void and_step(StateVector& st, const std::vector<std::string>& locals,
              int local_bits, const std::vector<int>& kid_list, int v) {
  std::vector<std::string> regs = locals;
  for (int c : kid_list) regs.push_back(zname(c));
  regs.push_back(zname(v));
  const int m = static_cast<int>(kid_list.size());
  const std::uint64_t ones = m ? (std::uint64_t{1} << m) - 1 : 0;
  (void)local_bits;
  apply_permutation(st, regs, [m, ones](std::uint64_t joint) {
    const std::uint64_t locals_part = joint >> (m + 1);
    const std::uint64_t kids_part = (joint >> 1) & ones;
    return (locals_part == 0 && kids_part == ones) ? joint ^ 1ULL : joint;
  });
}

// Reflection about the all-zero state of all problem registers: each node
// ANDs its local zero-check into a one-qubit token, the tokens AND up the
// tree, the leader phases the all-zero branch, and the sweep runs backwards.
void reflect_zero(
    const BfsTree& tree,
    const std::vector<std::vector<std::pair<std::string, int>>>& node_regs,
    StateVector& st) {
  const int n = static_cast<int>(node_regs.size());
  std::vector<std::vector<int>> kids(n);
  for (int v = 0; v < n; ++v)
    if (v != tree.root) kids[tree.parent[v]].push_back(v);
  const auto order = bottom_up(tree);
  for (int v : order) {
    std::vector<std::string> locals;
    int bits = 0;
    for (const auto& [name, w] : node_regs[v]) {
      locals.push_back(name);
      bits += w;
    }
    st.allocate(zname(v), 1);
    and_step(st, locals, bits, kids[v], v);
  }
  apply_phase_where(
      st, zname(tree.root), [](std::uint64_t z) { return z == 1; }, kPi);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    std::vector<std::string> locals;
    int bits = 0;
    for (const auto& [name, w] : node_regs[v]) {
      locals.push_back(name);
      bits += w;
    }
    and_step(st, locals, bits, kids[v], v);
    st.release(zname(v));
  }
}

double circular_median(const std::vector<double>& vals) {
  auto dist = [](double a, double b) {
    double d = std::fabs(a - b);
    while (d > kPi) d = std::fabs(d - kTwoPi);
    return d;
  };
  double best = vals.front(), best_score = -1.0;
  for (double a : vals) {
    double s = 0.0;
    for (double b : vals) s += dist(a, b);
    if (best_score < 0 || s < best_score) {
      best_score = s;
      best = a;
    }
  }
  return best;
}

int log_reps(double delta) {
  if (delta <= 0.0 || delta >= 1.0)
    throw ParameterError("confidence bound must lie in (0,1)");
  return std::max(1, static_cast<int>(std::ceil(std::log2(1.0 / delta))));
}

// Exact pointer distribution of phase estimation with N outcomes on an
// eigenphase fraction phi: |<m|QFT^-1|phase state>|^2.
void add_pointer_weights(std::vector<double>& pm, double phi, double weight) {
  const std::size_t n = pm.size();
  for (std::size_t m = 0; m < n; ++m) {
    double d = phi - static_cast<double>(m) / static_cast<double>(n);
    d -= std::round(d);
    const double s = std::sin(kPi * d);
    if (std::fabs(s) < 1e-15) {
      pm[m] += weight;
      continue;
    }
    const double top = std::sin(static_cast<double>(n) * kPi * d);
    pm[m] += weight * (top * top) / (static_cast<double>(n) *
                                     static_cast<double>(n) * s * s);
  }
}

}  // namespace

StateVector problem_state(const AmplitudeProblem& prob) {
  std::vector<std::pair<std::string, int>> layout;
  for (const auto& regs : prob.node_regs)
    for (const auto& r : regs) layout.push_back(r);
  if (layout.empty()) throw ParameterError("problem owns no registers");
  return StateVector::make(layout);
}

void check_preparer(const AmplitudeProblem& prob) {
  StateVector st = problem_state(prob);
  prob.prepare(st);
  prob.unprepare(st);
  if (std::abs(st.amp(0) - Complex(1.0, 0.0)) > 1e-9)
    throw ContractError("preparer adjoint does not restore the zero state");
  if (st.register_width(prob.flag.reg) != 1)
    throw ContractError("the flag must be a one-qubit register");
}

void aa_iterate(const Graph& g, const BfsTree& tree,
                const AmplitudeProblem& prob, StateVector& st,
                RoundLedger& ledger) {
  apply_pauli_z(st, prob.flag);
  prob.unprepare(st);
  reflect_zero(tree, prob.node_regs, st);
  prob.prepare(st);
  apply_global_phase(st, kPi);
  const int rounds = 2 * prob.prep_rounds + 2 * tree.depth;
  if (rounds > 0) ledger.charge_rounds(rounds, message_width(g.n));
}

bool amplitude_amplify(const Graph& g, const BfsTree& tree,
                       const AmplitudeProblem& prob, double delta, Rng& rng,
                       StateVector& st, RoundLedger& ledger, double p_floor) {
  if (p_floor <= 0.0 || p_floor > 1.0)
    throw ParameterError("schedule floor must lie in (0,1]");
  check_preparer(prob);
  int m_cap = 1;
  while (static_cast<double>(m_cap) * m_cap * p_floor < 1.0) ++m_cap;
  const int unit = prob.prep_rounds + std::max(1, tree.depth);
  const long long budget =
      4LL * unit * m_cap * log_reps(delta);
  const int before = ledger.rounds_used();
  const int iter_cost = 2 * prob.prep_rounds + 2 * tree.depth;
  const int attempt_cap = 4 * m_cap * log_reps(delta);
  double m = 1.0;
  for (int attempt = 0; attempt < attempt_cap; ++attempt) {
    const long long used = ledger.rounds_used() - before;
    int r = static_cast<int>(rng.below(static_cast<std::uint64_t>(m)));
    const long long overhead = prob.prep_rounds + 2 * tree.depth;
    if (used + overhead > budget) return false;
    if (iter_cost > 0)
      r = std::min<long long>(r, (budget - used - overhead) / iter_cost);
    st = problem_state(prob);
    prob.prepare(st);
    if (prob.prep_rounds > 0)
      ledger.charge_rounds(prob.prep_rounds, message_width(g.n));
    for (int j = 0; j < r; ++j) aa_iterate(g, tree, prob, st, ledger);
    if (tree.depth > 0) ledger.charge_rounds(2 * tree.depth, 1);
    if (measure(st, {prob.flag.reg}, rng)[0] == 1) return true;
    m = std::min(m * 1.5, static_cast<double>(m_cap));
  }
  return false;
}

int phase_control_bits(double eps) {
  if (eps <= 0.0) throw ParameterError("precision must be positive");
  return std::max(1, static_cast<int>(std::ceil(std::log2(kTwoPi / eps))) + 2);
}

double phase_estimate(const Graph& g, const BfsTree& tree,
                      const PhaseProblem& prob, double eps, double delta,
                      Rng& rng, RoundLedger& ledger) {
  const int c =
      prob.control_bits > 0 ? prob.control_bits : phase_control_bits(eps);
  if (c > 20) throw CapacityError("control register too wide to simulate");
  std::vector<std::pair<std::string, int>> layout;
  for (const auto& regs : prob.node_regs)
    for (const auto& r : regs) layout.push_back(r);
  if (prob.apply_once) {
    StateVector chk = StateVector::make(layout);
    prob.prepare(chk);
    const Eigen::VectorXcd before = chk.amplitudes();
    prob.apply_once(chk);
    const Complex ph = std::polar(1.0, prob.theta);
    for (std::int64_t i = 0; i < before.size(); ++i)
      if (std::abs(chk.amp(i) - ph * before(i)) > 1e-9)
        throw ContractError("shared state is not an eigenstate of U");
  }
  StateVector st = StateVector::make(layout);
  prob.prepare(st);
  const int reps = 8 * log_reps(delta);
  const std::uint64_t space = std::uint64_t{1} << c;
  std::vector<double> est;
  est.reserve(reps);
  for (int rep = 0; rep < reps; ++rep) {
    st.allocate("__ctl", c);
    apply_hadamard_all(st, "__ctl");
    const auto dreg = distribute_state(g, tree, st, "__ctl", ledger);
    prob.controlled_power(st, "__ctl");
    if (prob.u_rounds > 0)
      ledger.charge_rounds(static_cast<int>(space - 1) * prob.u_rounds,
                           message_width(g.n));
    collect_state(g, tree, st, dreg, ledger);
    apply_inverse_qft(st, "__ctl");
    const std::uint64_t m = measure(st, {"__ctl"}, rng)[0];
    est.push_back(kTwoPi * static_cast<double>(m) /
                  static_cast<double>(space));
    apply_permutation(st, {"__ctl"},
                      [m](std::uint64_t v) { return v ^ m; });
    st.release("__ctl");
  }
  return circular_median(est);
}

int phase_estimate_bound(int n, int diameter, int u_rounds, double eps,
                         double delta, int control_bits) {
  const int c = control_bits > 0 ? control_bits : phase_control_bits(eps);
  const int reps = 8 * log_reps(delta);
  const int l = chunk_bits(n);
  const int per_rep = (static_cast<int>(1 << c) - 1) * u_rounds +
                      2 * (diameter + ceil_div(c, l));
  return reps * per_rep;
}

double amplitude_estimate(const Graph& g, const BfsTree& tree,
                          const AmplitudeProblem& prob, double eps,
                          double delta, Rng& rng, RoundLedger& ledger) {
  if (eps <= 0.0) throw ParameterError("precision must be positive");
  if (prob.p_max <= 0.0 || prob.p_max > 1.0)
    throw ParameterError("p_max must lie in (0,1]");
  check_preparer(prob);
  StateVector st = problem_state(prob);
  prob.prepare(st);
  const double p = qubit_prob_one(st, prob.flag);
  if (p > prob.p_max + 1e-9)
    throw ContractError("prepared amplitude exceeds the stated p_max");
  const double theta = std::asin(std::min(1.0, std::sqrt(p)));

  const double eps_theta = eps / (2.0 * std::sqrt(prob.p_max));
  const int c = std::min(20, phase_control_bits(eps_theta));
  const std::uint64_t space = std::uint64_t{1} << c;
  const int reps = 8 * log_reps(delta);

  // The iterate is the exact rotation by 2*theta on the invariant plane
  // (certified against the statevector elsewhere), so the phase-estimation
  // pointer follows its exact two-branch distribution.
  std::vector<double> pm(space, 0.0);
  add_pointer_weights(pm, theta / kPi, 0.5);
  add_pointer_weights(pm, 1.0 - theta / kPi, 0.5);

  const int iter_rounds = 2 * prob.prep_rounds + 2 * tree.depth;
  const int l = chunk_bits(g.n);
  std::vector<double> est;
  est.reserve(reps);
  for (int rep = 0; rep < reps; ++rep) {
    double u = rng.u01(), acc = 0.0;
    std::uint64_t m = 0;
    for (std::uint64_t i = 0; i < space; ++i) {
      acc += pm[i];
      if (u <= acc) {
        m = i;
        break;
      }
      if (i + 1 == space) m = i;
    }
    const double ang = kPi * static_cast<double>(m) /
                       static_cast<double>(space);
    est.push_back(std::sin(ang) * std::sin(ang));
    const int per_rep = static_cast<int>(space - 1) * iter_rounds +
                        2 * (tree.depth + ceil_div(c, l));
    if (per_rep > 0) ledger.charge_rounds(per_rep, message_width(g.n));
  }
  std::nth_element(est.begin(), est.begin() + est.size() / 2, est.end());
  return est[est.size() / 2];
}

int amplitude_estimate_bound(int n, int diameter, int prep_rounds, double eps,
                             double delta, double p_max) {
  const double eps_theta = eps / (2.0 * std::sqrt(p_max));
  const int c = std::min(20, phase_control_bits(eps_theta));
  const int reps = 8 * log_reps(delta);
  const int l = chunk_bits(n);
  const int per_rep =
      (static_cast<int>(1 << c) - 1) * (2 * prep_rounds + 2 * diameter) +
      2 * (diameter + ceil_div(c, l));
  return reps * per_rep;
}

}  // namespace qcongest
