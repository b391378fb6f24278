#include "qcongest/bridge.hpp"

#include <algorithm>

#include "qcongest/common.hpp"

namespace qcongest {

namespace {

int chunk_bits(int n) { return std::max(1, ceil_log2(n)); }

std::string copy_name(const std::string& reg, int node) {
  return reg + "#" + std::to_string(node);
}

// root first, then level by level down the tree
std::vector<int> depth_order(const BfsTree& tree) {
  std::vector<int> order(tree.dist.size());
  for (std::size_t v = 0; v < order.size(); ++v) order[v] = static_cast<int>(v);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return tree.dist[a] < tree.dist[b]; });
  return order;
}

}  // namespace

DistributedRegister distribute_state(const Graph& g, const BfsTree& tree,
                                     StateVector& st, const std::string& reg,
                                     RoundLedger& ledger) {
  const int n = g.n;
  const int q = st.register_width(reg);
  if (static_cast<long long>(n) * q > kMaxQubits)
    throw CapacityError("replicating " + std::to_string(q) + " qubits over " +
                        std::to_string(n) + " nodes exceeds the simulator");
  DistributedRegister out;
  out.width = q;
  out.root = tree.root;
  out.copies.assign(n, "");
  out.copies[tree.root] = reg;
  for (int v : depth_order(tree)) {
    if (v == tree.root) continue;
    const std::string name = copy_name(reg, v);
    st.allocate(name, q);
    apply_cnot_copy(st, out.copies[tree.parent[v]], name);
    out.copies[v] = name;
  }
  if (n > 1) {
    const int l = chunk_bits(n);
    ledger.charge_rounds(tree.depth + ceil_div(q, l), l);
  }
  return out;
}

void collect_state(const Graph& g, const BfsTree& tree, StateVector& st,
                   const DistributedRegister& dreg, RoundLedger& ledger) {
  const auto order = depth_order(tree);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int v = *it;
    if (v == tree.root) continue;
    apply_cnot_copy(st, dreg.copies[tree.parent[v]], dreg.copies[v]);
    st.release(dreg.copies[v]);
  }
  if (g.n > 1) {
    const int l = chunk_bits(g.n);
    ledger.charge_rounds(tree.depth + ceil_div(dreg.width, l), l);
  }
}

std::uint64_t OracleSpec::combined_value(int i) const {
  if (computed()) return compute(i);
  std::uint64_t acc = node_tables.at(0).at(i);
  for (std::size_t v = 1; v < node_tables.size(); ++v)
    acc = combine(acc, node_tables[v].at(i));
  return acc;
}

int framework_round_bound(int n, int diameter, int k, int value_bits, int p,
                          int batches, int alpha_rounds) {
  const int l = chunk_bits(n);
  const int idx_bits = std::max(1, ceil_log2(k));
  const int q = idx_bits + value_bits;
  const int per_batch = (diameter + p) * ceil_div(q, l) +
                        p * ceil_div(idx_bits, l) + alpha_rounds;
  return 6 * (diameter + batches * per_batch);
}

namespace {

class FrameworkOracle final : public ParallelOracle {
 public:
  FrameworkOracle(const Graph& g, const BfsTree& tree, const OracleSpec& spec,
                  int p, RoundLedger& ledger)
      : ParallelOracle(spec.k, p, spec.value_bits),
        g_(g),
        tree_(tree),
        spec_(spec),
        ledger_(ledger) {}

  int hygiene_checks = 0;

 protected:
  std::uint64_t value_at(int i) override { return spec_.combined_value(i); }

  void on_batch(const QueryBatch& b) override {
    const int width =
        b.coherent ? b.width : static_cast<int>(b.indices.size());
    const int alpha =
        spec_.computed() && spec_.alpha ? spec_.alpha(parallelism()) : 0;
    int rounds = alpha;
    if (g_.n > 1) {
      const int l = chunk_bits(g_.n);
      const int idx_chunks = ceil_div(std::max(1, ceil_log2(size())), l);
      const int val_chunks = ceil_div(value_bits(), l);
      // indices stream down and back up, values aggregate up and uncompute
      rounds += 4 * tree_.depth + 2 * width * (idx_chunks + val_chunks);
    }
    if (rounds > 0) ledger_.charge_rounds(rounds, chunk_bits(g_.n));
    if (!spec_.computed() && g_.n > 1 && hygiene_checks < 2 &&
        play_aggregation()) {
      ++hygiene_checks;
    }
  }

 private:
  // Plays one superposed query through the tree on a real statevector:
  // fan the index out, aggregate child values upward with each child
  // uncomputed as soon as its parent has combined, verify the leader's
  // accumulator against the expected aggregate for every branch, then run
  // the whole circuit backwards. Every release asserts the register is
  // back in |0>, so a hygiene violation cannot pass silently.
  bool play_aggregation() {
    const int n = g_.n;
    const int idx_bits = std::max(1, ceil_log2(size()));
    const int vb = value_bits();
    if (static_cast<long long>(n) * (idx_bits + vb) + vb > kMaxQubits)
      return false;
    const std::uint64_t big = std::uint64_t{1} << idx_bits;
    const std::uint64_t vmask = (std::uint64_t{1} << vb) - 1;

    // per-node values padded with 0 past k, then subtree aggregates
    std::vector<std::vector<std::uint64_t>> sub(
        n, std::vector<std::uint64_t>(big, 0));
    for (int v = 0; v < n; ++v)
      for (std::uint64_t i = 0; i < big; ++i)
        if (i < static_cast<std::uint64_t>(size()))
          sub[v][i] = spec_.node_tables[v][i];
    const auto order = depth_order(tree_);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const int v = *it;
      if (v == tree_.root) continue;
      for (std::uint64_t i = 0; i < big; ++i)
        sub[tree_.parent[v]][i] =
            spec_.combine(sub[tree_.parent[v]][i], sub[v][i]) & vmask;
    }
    std::vector<std::vector<int>> kids(n);
    for (int v = 0; v < n; ++v)
      if (v != tree_.root) kids[tree_.parent[v]].push_back(v);

    auto ireg = [](int v) { return "i" + std::to_string(v); };
    auto sreg = [](int v) { return "s" + std::to_string(v); };
    StateVector st = StateVector::make({{ireg(tree_.root), idx_bits}});
    apply_hadamard_all(st, ireg(tree_.root));
    for (int v : order) {
      if (v == tree_.root) continue;
      st.allocate(ireg(v), idx_bits);
      apply_cnot_copy(st, ireg(tree_.parent[v]), ireg(v));
    }

    auto own_value = [&](int v, std::uint64_t i) -> std::uint64_t {
      if (i >= static_cast<std::uint64_t>(size())) return 0;
      return spec_.node_tables[v][i];
    };
    auto combine_into = [&](int v) {
      std::vector<std::string> regs{ireg(v)};
      for (int c : kids[v]) regs.push_back(sreg(c));
      regs.push_back(sreg(v));
      const int m = static_cast<int>(kids[v].size());
      apply_permutation(st, regs, [&, m](std::uint64_t joint) {
        const std::uint64_t t = joint & vmask;
        const std::uint64_t i = joint >> ((m + 1) * vb);
        std::uint64_t acc = own_value(v, i);
        for (int j = 0; j < m; ++j) {
          const std::uint64_t a = (joint >> ((m - j) * vb)) & vmask;
          acc = spec_.combine(acc, a) & vmask;
        }
        return (joint ^ t) | (t ^ acc);
      });
    };
    auto xor_subtree = [&](int v) {
      apply_permutation(st, {ireg(v), sreg(v)}, [&](std::uint64_t joint) {
        const std::uint64_t i = joint >> vb;
        return joint ^ (sub[v][i] & vmask);
      });
    };
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const int v = *it;
      st.allocate(sreg(v), vb);
      combine_into(v);
      for (int c : kids[v]) {
        xor_subtree(c);
        st.release(sreg(c));
      }
    }

    const double want = 1.0 / std::sqrt(static_cast<double>(big));
    for (std::uint64_t i = 0; i < big; ++i) {
      std::uint64_t basis = 0;
      for (int r = 0; r < n; ++r) basis = (basis << idx_bits) | i;
      basis = (basis << vb) | sub[tree_.root][i];
      if (std::abs(st.amp(static_cast<std::int64_t>(basis)) - Complex(want)) >
          1e-9)
        throw ContractError("aggregated value wrong in superposition");
    }

    xor_subtree(tree_.root);
    st.release(sreg(tree_.root));
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const int v = *it;
      if (v == tree_.root) continue;
      apply_cnot_copy(st, ireg(tree_.parent[v]), ireg(v));
      st.release(ireg(v));
    }
    apply_hadamard_all(st, ireg(tree_.root));
    st.release(ireg(tree_.root));
    return true;
  }

  const Graph& g_;
  const BfsTree& tree_;
  const OracleSpec& spec_;
  RoundLedger& ledger_;
};

void validate_spec(const Graph& g, const OracleSpec& spec) {
  if (spec.k < 1) throw ParameterError("oracle needs at least one index");
  if (spec.value_bits < 1 || spec.value_bits > 62)
    throw ParameterError("value width out of range");
  if (spec.computed()) return;
  if (static_cast<int>(spec.node_tables.size()) != g.n)
    throw ContractError("expected one value table per node");
  for (const auto& t : spec.node_tables)
    if (static_cast<int>(t.size()) != spec.k)
      throw ContractError("node table length differs from the index range");
  if (g.n > 1 && !spec.combine)
    throw ContractError("memory mode needs a combining operation");
  const std::uint64_t limit = std::uint64_t{1} << spec.value_bits;
  for (int i = 0; i < spec.k; ++i)
    if (spec.combined_value(i) >= limit)
      throw ContractError("combined value overflows the declared width");
  if (g.n > 1) {
    // commutativity and associativity, sampled on actual table entries
    Rng probe(0x51603, 0);
    std::vector<std::uint64_t> pool;
    for (const auto& t : spec.node_tables)
      for (std::uint64_t v : t) pool.push_back(v);
    for (int rep = 0; rep < 32; ++rep) {
      const std::uint64_t a = pool[probe.below(pool.size())];
      const std::uint64_t b = pool[probe.below(pool.size())];
      const std::uint64_t c = pool[probe.below(pool.size())];
      if (spec.combine(a, b) != spec.combine(b, a) ||
          spec.combine(spec.combine(a, b), c) !=
              spec.combine(a, spec.combine(b, c)))
        throw ContractError("combining operation is not a semigroup");
    }
  }
}

}  // namespace

FrameworkRun execute_framework(const Graph& g, const BfsTree& tree,
                               const OracleSpec& spec, int p,
                               const AlgoFn& algo, Rng& rng,
                               RoundLedger& ledger) {
  if (g.n > 64)
    throw CapacityError("framework runs are capped at 64 nodes");
  validate_spec(g, spec);
  FrameworkRun run;
  run.p = p;
  const int before = ledger.rounds_used();
  if (g.n > 1) ledger.charge_rounds(tree.depth, chunk_bits(g.n));
  FrameworkOracle oracle(g, tree, spec, p, ledger);
  run.result = algo(oracle, rng);
  run.transcript = oracle.transcript();
  run.batches = oracle.queries_used();
  run.hygiene_checks = oracle.hygiene_checks;
  run.rounds_used = ledger.rounds_used() - before;
  const int alpha_rounds =
      spec.computed() && spec.alpha ? spec.alpha(p) : 0;
  run.round_bound = framework_round_bound(g.n, g.diameter(), spec.k,
                                          spec.value_bits, p, run.batches,
                                          alpha_rounds);
  if (run.rounds_used > run.round_bound)
    throw ContractError("framework run exceeded its round bound");
  return run;
}

}  // namespace qcongest
