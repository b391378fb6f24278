// Acceptance suite: eleven criteria, one [PASS]/[FAIL] line each, exit
// code equal to the number of failures. Every criterion carries its own
// runtime cap; a breach fails the line even if the checks held.
#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "qcongest/apps.hpp"
#include "qcongest/nonoracle.hpp"
#include "qcongest/pqalg.hpp"

using namespace qcongest;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMeanScale = 1048576.0;

bool g_bandwidth_violation = false;

int bits_for(std::uint64_t top) { return std::max(1, ceil_log2(top + 1)); }

int ceil_sqrt_frac(int num, int den) {
  int s = 1;
  while (static_cast<long long>(s) * s * den < num) ++s;
  return s;
}

int ceil_pow23(int k, int p) {
  int s = 1;
  while (static_cast<long long>(s) * s * s * p * p <
         static_cast<long long>(k) * k)
    ++s;
  return s;
}

Graph path(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph::from_edges(n, e);
}

Graph cycle(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return Graph::from_edges(n, e);
}

Graph star(int leaves) {
  std::vector<std::pair<int, int>> e;
  for (int i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return Graph::from_edges(leaves + 1, e);
}

Graph complete(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph::from_edges(n, e);
}

Graph petersen() {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);
    e.emplace_back(5 + i, 5 + (i + 2) % 5);
    e.emplace_back(i, 5 + i);
  }
  return Graph::from_edges(10, e);
}

Graph chorded_c5() {
  return Graph::from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {1, 3}});
}

Graph two_cluster() {
  std::vector<std::pair<int, int>> e{{0, 1}, {1, 2}, {2, 3}, {3, 0},
                                     {4, 5}, {5, 6}, {6, 7}, {7, 4}};
  e.insert(e.end(), {{3, 8}, {8, 9}, {9, 10}, {10, 11}, {11, 12}, {12, 13},
                     {13, 14}, {14, 4}});
  return Graph::from_edges(15, e);
}

Graph random_connected(int n, int extra, Rng& rng) {
  std::vector<std::pair<int, int>> e;
  for (int v = 1; v < n; ++v)
    e.emplace_back(v, static_cast<int>(rng.below(v)));
  for (int t = 0; t < extra; ++t) {
    const int u = static_cast<int>(rng.below(n));
    const int v = static_cast<int>(rng.below(n));
    if (u != v) e.emplace_back(u, v);
  }
  return Graph::from_edges(n, e);
}

Graph random_tree(int n, Rng& rng) { return random_connected(n, 0, rng); }

BfsTree leader_tree(const Graph& g) {
  RoundLedger setup(message_width(g.n));
  const int leader = elect_leader(g, setup);
  return build_bfs(g, leader, setup);
}

void randomize(StateVector& st, Rng& rng) {
  double norm2 = 0.0;
  for (std::int64_t i = 0; i < st.dim(); ++i) {
    const Complex a(rng.u01() - 0.5, rng.u01() - 0.5);
    st.set_amp(i, a);
    norm2 += std::norm(a);
  }
  const double s = 1.0 / std::sqrt(norm2);
  for (std::int64_t i = 0; i < st.dim(); ++i) st.set_amp(i, st.amp(i) * s);
}

void ry(StateVector& st, const QubitRef& q, double angle) {
  Eigen::Matrix2cd u;
  u << std::cos(angle / 2), -std::sin(angle / 2), std::sin(angle / 2),
      std::cos(angle / 2);
  apply_single_qubit(st, q, u);
}

AmplitudeProblem flag_problem(const Graph& g, double p) {
  AmplitudeProblem prob;
  prob.node_regs.assign(g.n, {});
  prob.node_regs[0] = {{"f", 1}};
  prob.flag = QubitRef{"f", 0};
  prob.flag_node = 0;
  prob.p_max = 1.0;
  const double th = std::asin(std::sqrt(p));
  prob.prepare = [th](StateVector& st) { ry(st, {"f", 0}, 2 * th); };
  prob.unprepare = [th](StateVector& st) { ry(st, {"f", 0}, -2 * th); };
  return prob;
}

PhaseProblem phase_problem(const Graph& g, double theta, int control_bits) {
  PhaseProblem prob;
  prob.node_regs.assign(g.n, {});
  prob.node_regs[0] = {{"t", 1}};
  prob.theta = theta;
  prob.control_bits = control_bits;
  prob.u_rounds = 1;
  prob.prepare = [](StateVector& st) { apply_pauli_x(st, {"t", 0}); };
  prob.apply_once = [theta](StateVector& st) {
    apply_phase_where(
        st, "t", [](std::uint64_t v) { return v == 1; }, theta);
  };
  prob.controlled_power = [theta](StateVector& st, const std::string& ctl) {
    const int c = st.register_width(ctl);
    for (int b = 0; b < c; ++b)
      apply_controlled_phase(st, {ctl, b}, {"t", 0},
                             theta * static_cast<double>(1ULL << (c - 1 - b)));
  };
  return prob;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// ---- 1. distribution lemma -------------------------------------------

bool c1_distribution(std::string& detail) {
  Rng gen(101);
  int checked = 0;
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 2 + static_cast<int>(gen.below(7));
    const int qmax = std::min<int>(6, 24 / n);
    const int q = 1 + static_cast<int>(gen.below(qmax));
    const Graph g = random_tree(n, gen);
    const BfsTree tree = leader_tree(g);

    StateVector st = StateVector::make({{"w", q}});
    randomize(st, gen);
    const Eigen::VectorXcd before = st.amplitudes();

    RoundLedger out_l(message_width(n)), back_l(message_width(n));
    const auto dreg = distribute_state(g, tree, st, "w", out_l);

    std::vector<int> lb(n);
    for (int v = 0; v < n; ++v) lb[v] = st.low_bit(dreg.copies[v]);
    const std::uint64_t mask = (std::uint64_t{1} << q) - 1;
    for (std::int64_t j = 0; j < st.dim(); ++j) {
      const std::uint64_t i =
          (static_cast<std::uint64_t>(j) >> lb[0]) & mask;
      bool same = true;
      for (int v = 1; v < n && same; ++v)
        same = ((static_cast<std::uint64_t>(j) >> lb[v]) & mask) == i;
      const Complex want = same ? before(static_cast<std::int64_t>(i))
                                : Complex(0, 0);
      if (std::abs(st.amp(j) - want) > 1e-9) {
        detail = fmt("rep %d: amplitude mismatch at index %lld", rep,
                     static_cast<long long>(j));
        return false;
      }
    }

    const int bound =
        3 * (g.diameter() + ceil_div(q, std::max(1, ceil_log2(n))));
    if (out_l.rounds_used() > bound) {
      detail = fmt("rep %d: %d rounds over bound %d", rep,
                   out_l.rounds_used(), bound);
      return false;
    }

    collect_state(g, tree, st, dreg, back_l);
    if (st.dim() != before.size()) {
      detail = fmt("rep %d: collect left %lld amplitudes", rep,
                   static_cast<long long>(st.dim()));
      return false;
    }
    for (std::int64_t i = 0; i < before.size(); ++i)
      if (std::abs(st.amp(i) - before(i)) > 1e-9) {
        detail = fmt("rep %d: round trip broke amplitude %lld", rep,
                     static_cast<long long>(i));
        return false;
      }
    ++checked;
  }
  detail = fmt("%d trees exact to 1e-9, ledgers within 3*(D+ceil(q/L))",
               checked);
  return true;
}

// ---- 2. parallel Grover ----------------------------------------------

bool c2_grover(std::string& detail) {
  const std::vector<int> ks{4, 8, 16, 32, 64};
  const std::vector<int> ts{1, 2, 4};
  const std::vector<int> ps{1, 2, 4, 8};
  double worst = 1.01;
  std::string worst_cell;
  int cell = 0;
  for (const int k : ks)
    for (const int t : ts)
      for (const int p : ps) {
        const int bound = 9 * ceil_sqrt_frac(k, t * std::min(p, k));
        int succ = 0;
        for (int trial = 0; trial < 500; ++trial) {
          Rng rng(2000 + cell, trial);
          std::vector<std::uint64_t> table(k, 0);
          int placed = 0;
          while (placed < t) {
            const int i = static_cast<int>(rng.below(k));
            if (table[i] == 0) {
              table[i] = 1;
              ++placed;
            }
          }
          TableOracle o(table, p, 1);
          const auto r = grover_any(
              o, [](std::uint64_t v) { return v == 1; }, rng, t);
          if (!r.found) continue;
          if (table[r.index] != 1) {
            detail = fmt("false positive at k=%d t=%d p=%d", k, t, p);
            return false;
          }
          if (r.batches > bound) {
            detail = fmt("%d batches over %d at k=%d t=%d p=%d", r.batches,
                         bound, k, t, p);
            return false;
          }
          ++succ;
        }
        const double rate = succ / 500.0;
        if (rate < worst) {
          worst = rate;
          worst_cell = fmt("k=%d t=%d p=%d", k, t, p);
        }
        ++cell;
      }
  if (worst < 0.66) {
    detail = fmt("success %.3f at %s", worst, worst_cell.c_str());
    return false;
  }
  detail = fmt("60 cells, worst success %.3f (%s), batches within "
               "9*ceil(sqrt(k/(t*p)))",
               worst, worst_cell.c_str());
  return true;
}

// ---- 3. parallel minimum ---------------------------------------------

bool c3_minimum(std::string& detail) {
  const std::vector<int> ks{4, 8, 16, 32, 64};
  const std::vector<int> ps{1, 2, 4, 8};
  double worst = 1.01;
  std::string worst_cell;
  int cell = 0;
  for (const int k : ks)
    for (const int p : ps) {
      const int bound = 9 * ceil_sqrt_frac(k, std::min(p, k));
      int succ = 0;
      for (int trial = 0; trial < 500; ++trial) {
        Rng rng(3000 + cell, trial);
        std::vector<std::uint64_t> table(k);
        for (auto& x : table) x = rng.below(16);
        const std::uint64_t best =
            *std::min_element(table.begin(), table.end());
        TableOracle o(table, p, 4);
        const auto r = parallel_min(o, rng);
        if (r.batches > bound) {
          detail = fmt("%d batches over %d at k=%d p=%d", r.batches, bound,
                       k, p);
          return false;
        }
        if (r.found && table[r.index] == r.value && r.value == best) ++succ;
      }
      const double rate = succ / 500.0;
      if (rate < worst) {
        worst = rate;
        worst_cell = fmt("k=%d p=%d", k, p);
      }
      ++cell;
    }
  if (worst < 0.66) {
    detail = fmt("success %.3f at %s", worst, worst_cell.c_str());
    return false;
  }

  // planted duplicates tighten the budget through the multiplicity hint
  double dup_worst = 1.01;
  cell = 0;
  for (const int k : {16, 64})
    for (const int ell : {2, 4})
      for (const int p : ps) {
        const int bound = 9 * ceil_sqrt_frac(k, ell * std::min(p, k));
        int succ = 0;
        for (int trial = 0; trial < 500; ++trial) {
          Rng rng(3100 + cell, trial);
          std::vector<std::uint64_t> table(k);
          for (auto& x : table) x = 1 + rng.below(15);
          int placed = 0;
          while (placed < ell) {
            const int i = static_cast<int>(rng.below(k));
            if (table[i] != 0) {
              table[i] = 0;
              ++placed;
            }
          }
          TableOracle o(table, p, 4);
          const auto r = parallel_min(o, rng, ell);
          if (r.batches > bound) {
            detail = fmt("dup: %d batches over %d at k=%d l=%d p=%d",
                         r.batches, bound, k, ell, p);
            return false;
          }
          if (r.found && r.value == 0 && table[r.index] == 0) ++succ;
        }
        dup_worst = std::min(dup_worst, succ / 500.0);
        ++cell;
      }
  if (dup_worst < 0.66) {
    detail = fmt("duplicate grid success %.3f", dup_worst);
    return false;
  }
  detail = fmt("worst success %.3f plain, %.3f with duplicates; budgets "
               "9*ceil(sqrt(k/(l*p))) held",
               worst, dup_worst);
  return true;
}

// ---- 4. element distinctness -----------------------------------------

bool c4_distinctness(std::string& detail) {
  double worst = 1.01;
  int cell = 0;
  for (const int k : {6, 9, 12})
    for (const int p : {1, 2}) {
      const int bound = 12 * ceil_pow23(k, p);
      int succ = 0;
      for (int trial = 0; trial < 500; ++trial) {
        Rng rng(4000 + cell, trial);
        std::vector<std::uint64_t> pool(64);
        for (int i = 0; i < 64; ++i) pool[i] = i;
        for (int i = 0; i < k; ++i) {
          const int j = i + static_cast<int>(rng.below(64 - i));
          std::swap(pool[i], pool[j]);
        }
        std::vector<std::uint64_t> table(pool.begin(), pool.begin() + k);
        const int a = static_cast<int>(rng.below(k));
        int b = static_cast<int>(rng.below(k));
        while (b == a) b = static_cast<int>(rng.below(k));
        table[b] = table[a];
        TableOracle o(table, p, 6);
        const auto r = element_distinctness(o, rng);
        if (r.batches > bound) {
          detail = fmt("%d batches over %d at k=%d p=%d", r.batches, bound,
                       k, p);
          return false;
        }
        if (r.found) {
          if (r.first >= r.second || table[r.first] != table[r.second]) {
            detail = fmt("unverified false positive at k=%d p=%d", k, p);
            return false;
          }
          ++succ;
        }
      }
      worst = std::min(worst, succ / 500.0);
      ++cell;
    }
  if (worst < 0.66) {
    detail = fmt("success %.3f", worst);
    return false;
  }
  detail = fmt("worst success %.3f, batches within 12*ceil((k/p)^(2/3)), "
               "no false positives",
               worst);
  return true;
}

// ---- 5. Deutsch-Jozsa ------------------------------------------------

bool c5_dj(std::string& detail) {
  int runs = 0;
  for (const int k : {2, 4, 8}) {
    std::vector<std::vector<std::uint64_t>> columns;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << k); ++bits) {
      const int ones = std::popcount(bits);
      if (ones != 0 && ones != k && 2 * ones != k) continue;
      std::vector<std::uint64_t> c(k);
      for (int i = 0; i < k; ++i) c[i] = (bits >> i) & 1;
      columns.push_back(std::move(c));
    }
    for (const int n : {2, 3, 4}) {
      std::vector<Graph> shapes{path(n)};
      if (n > 2) shapes.push_back(star(n - 1));
      for (const auto& g : shapes) {
        const int dd = g.diameter();
        const int ll = std::max(1, ceil_log2(n));
        const int q = ceil_log2(k) + 1;
        const int bound = 6 * (dd + (dd + 1) * ceil_div(q, ll) +
                               ceil_div(std::max(1, ceil_log2(k)), ll));
        int idx = 0;
        for (const auto& col : columns) {
          Rng split(500 + k, idx);
          std::vector<std::vector<std::uint64_t>> rows(
              g.n, std::vector<std::uint64_t>(k, 0));
          for (int i = 0; i < k; ++i) {
            std::uint64_t acc = 0;
            for (int v = 0; v + 1 < g.n; ++v) {
              rows[v][i] = split.below(2);
              acc ^= rows[v][i];
            }
            rows[g.n - 1][i] = acc ^ col[i];
          }
          const int ones =
              static_cast<int>(std::count(col.begin(), col.end(), 1));
          Rng rng(510 + k, idx++);
          const auto r = distributed_dj(g, rows, rng, true);
          if (!r.promise_ok || r.constant != (ones == 0 || ones == k)) {
            detail = fmt("wrong answer at k=%d n=%d", k, n);
            return false;
          }
          if (r.stats.rounds_used > bound) {
            detail = fmt("%d rounds over 6*(D+(D+p)ceil(q/L)+p*ceil(log2k/"
                         "L))=%d at k=%d n=%d",
                         r.stats.rounds_used, bound, k, n);
            return false;
          }
          ++runs;
        }
      }
    }
  }
  detail = fmt("%d promise instances, zero errors, ledgers within the "
               "stated formula",
               runs);
  return true;
}

// ---- 6. framework equivalence ----------------------------------------

struct TwinCheck {
  const char* name;
  std::function<bool(int, std::string&)> once;  // instance index
};

bool memory_hygiene_expected(int n, int k, int vb) {
  const int idx_bits = std::max(1, ceil_log2(k));
  return n > 1 &&
         static_cast<long long>(n) * (idx_bits + vb) + vb <= 24;
}

bool c6_equivalence(std::string& detail) {
  int hygiene_total = 0;

  const auto check_run = [&hygiene_total](const FrameworkRun& run,
                                          std::uint64_t want_result,
                                          const QueryTranscript& want_tr,
                                          bool expect_hygiene,
                                          std::string& why) {
    if (run.result != want_result) {
      why = "result diverged from the centralized twin";
      return false;
    }
    if (!(run.transcript == want_tr)) {
      why = "transcript diverged from the centralized twin";
      return false;
    }
    if (expect_hygiene && run.hygiene_checks < 1) {
      why = "no coherent aggregation sweep on a qualifying instance";
      return false;
    }
    hygiene_total += run.hygiene_checks;
    return true;
  };

  std::vector<TwinCheck> checks;

  checks.push_back({"schedule", [&](int i, std::string& why) {
    Rng gr(6000, i);
    const Graph g = random_connected(3 + static_cast<int>(gr.below(4)),
                                     static_cast<int>(gr.below(3)), gr);
    const int k = 4 + static_cast<int>(gr.below(5));
    std::vector<std::vector<std::uint64_t>> rows(
        g.n, std::vector<std::uint64_t>(k));
    for (auto& r : rows)
      for (auto& x : r) x = gr.below(2);
    Rng rng(6001, i);
    const auto res = meeting_schedule(g, rows, rng);

    const BfsTree tree = leader_tree(g);
    const int p = std::max(1, tree.depth);
    std::vector<std::uint64_t> sums(k, 0);
    for (int c = 0; c < k; ++c)
      for (int v = 0; v < g.n; ++v) sums[c] += rows[v][c];
    const int vb = bits_for(g.n);
    TableOracle o(sums, p, vb);
    Rng twin(6001, i);
    const auto m = parallel_min(o, twin, 1, true);
    const std::uint64_t want =
        m.found ? (static_cast<std::uint64_t>(m.index) << 32) | m.value
                : ~std::uint64_t{0};
    return check_run(res.run, want, o.transcript(),
                     memory_hygiene_expected(g.n, k, vb), why);
  }});

  checks.push_back({"ed", [&](int i, std::string& why) {
    Rng gr(6010, i);
    const Graph g = random_connected(3 + static_cast<int>(gr.below(3)),
                                     static_cast<int>(gr.below(3)), gr);
    const int k = 6 + 3 * static_cast<int>(gr.below(3));
    std::vector<std::vector<std::uint64_t>> rows(
        g.n, std::vector<std::uint64_t>(k));
    for (auto& r : rows)
      for (auto& x : r) x = gr.below(4);
    Rng rng(6011, i);
    const auto res = ed_vector(g, rows, rng);

    const BfsTree tree = leader_tree(g);
    const int p = std::max(1, tree.depth);
    std::vector<std::uint64_t> sums(k, 0);
    std::uint64_t top = 0;
    for (int c = 0; c < k; ++c) {
      for (int v = 0; v < g.n; ++v) sums[c] += rows[v][c];
      top = std::max(top, sums[c]);
    }
    const int vb = bits_for(top);
    TableOracle o(sums, p, vb);
    Rng twin(6011, i);
    const auto ed = element_distinctness(o, twin);
    const std::uint64_t want =
        ed.found ? static_cast<std::uint64_t>(ed.first) * k + ed.second + 1
                 : 0;
    return check_run(res.run, want, o.transcript(),
                     memory_hygiene_expected(g.n, k, vb), why);
  }});

  checks.push_back({"ed-nodes", [&](int i, std::string& why) {
    Rng gr(6020, i);
    const Graph g = random_connected(3 + static_cast<int>(gr.below(4)),
                                     static_cast<int>(gr.below(3)), gr);
    std::vector<std::uint64_t> vals(g.n);
    for (auto& v : vals) v = gr.below(6);
    Rng rng(6021, i);
    const auto res = ed_nodes(g, vals, rng);

    const BfsTree tree = leader_tree(g);
    const int p = std::max(1, tree.depth);
    std::vector<std::uint64_t> shifted(g.n);
    std::uint64_t top = 0;
    for (int v = 0; v < g.n; ++v) {
      shifted[v] = vals[v] + 1;
      top = std::max(top, shifted[v]);
    }
    const int vb = bits_for(top);
    TableOracle o(shifted, p, vb);
    Rng twin(6021, i);
    const auto ed = element_distinctness(o, twin);
    const std::uint64_t want =
        ed.found
            ? static_cast<std::uint64_t>(ed.first) * g.n + ed.second + 1
            : 0;
    return check_run(res.run, want, o.transcript(),
                     memory_hygiene_expected(g.n, g.n, vb), why);
  }});

  checks.push_back({"dj", [&](int i, std::string& why) {
    Rng gr(6030, i);
    const Graph g = random_connected(2 + static_cast<int>(gr.below(4)),
                                     static_cast<int>(gr.below(2)), gr);
    const int k = 1 << static_cast<int>(1 + gr.below(3));
    std::vector<std::uint64_t> col(k, 0);
    const int kind = static_cast<int>(gr.below(3));
    if (kind == 1)
      for (auto& b : col) b = 1;
    if (kind == 2) {
      int placed = 0;
      while (placed < k / 2) {
        const int j = static_cast<int>(gr.below(k));
        if (col[j] == 0) {
          col[j] = 1;
          ++placed;
        }
      }
    }
    std::vector<std::vector<std::uint64_t>> rows(
        g.n, std::vector<std::uint64_t>(k, 0));
    for (int c = 0; c < k; ++c) {
      std::uint64_t acc = 0;
      for (int v = 0; v + 1 < g.n; ++v) {
        rows[v][c] = gr.below(2);
        acc ^= rows[v][c];
      }
      rows[g.n - 1][c] = acc ^ col[c];
    }
    Rng rng(6031, i);
    const auto res = distributed_dj(g, rows, rng);

    TableOracle o(col, 1, 1);
    Rng twin(6031, i);
    const auto dj = deutsch_jozsa(o, twin);
    return check_run(res.run, std::uint64_t{dj.constant ? 1u : 0u},
                     o.transcript(), memory_hygiene_expected(g.n, k, 1),
                     why);
  }});

  for (const bool maximize : {true, false})
    checks.push_back({maximize ? "diameter" : "radius",
                      [&, maximize](int i, std::string& why) {
      Rng gr(6040 + maximize, i);
      const Graph g = random_connected(3 + static_cast<int>(gr.below(6)),
                                       static_cast<int>(gr.below(4)), gr);
      Rng rng(6042, i);
      const auto res = diameter_radius(g, maximize, rng);

      const BfsTree tree = leader_tree(g);
      const int p = std::max(1, tree.depth);
      const auto ecc = g.eccentricities();
      std::vector<std::uint64_t> table(g.n);
      for (int v = 0; v < g.n; ++v)
        table[v] = static_cast<std::uint64_t>(ecc[v]);
      TableOracle o(table, p, bits_for(g.n - 1));
      Rng twin(6042, i);
      const auto m = parallel_min(o, twin, 1, maximize);
      const std::uint64_t want =
          m.found ? (static_cast<std::uint64_t>(m.index) << 16) | m.value
                  : std::uint64_t{0xFFFF};
      return check_run(res.run, want, o.transcript(), false, why);
    }});

  checks.push_back({"avgecc", [&](int i, std::string& why) {
    Rng gr(6050, i);
    const Graph g = random_connected(3 + static_cast<int>(gr.below(5)),
                                     static_cast<int>(gr.below(3)), gr);
    const double eps = i % 2 == 0 ? 0.25 : 0.5;
    Rng rng(6051, i);
    const auto res = avg_eccentricity(g, eps, rng);

    const BfsTree tree = leader_tree(g);
    const int p = std::max(1, tree.depth);
    const int v_max = std::min(g.n - 1, 2 * tree.depth);
    const auto ecc = g.eccentricities();
    std::vector<std::uint64_t> table(g.n);
    for (int v = 0; v < g.n; ++v)
      table[v] = static_cast<std::uint64_t>(ecc[v]);
    TableOracle o(table, p, bits_for(v_max));
    Rng twin(6051, i);
    const auto mr =
        mean_estimate(o, static_cast<std::uint64_t>(v_max), eps, twin);
    const auto want = static_cast<std::uint64_t>(
        std::llround(mr.mean * kMeanScale));
    return check_run(res.run, want, o.transcript(), false, why);
  }});

  checks.push_back({"cycle", [&](int i, std::string& why) {
    Rng gr(6060, i);
    const int n = 8 + static_cast<int>(gr.below(5));
    std::vector<std::pair<int, int>> e;
    for (int v = 1; v < n; ++v)
      e.emplace_back(v, static_cast<int>(gr.below(v)));
    for (int v = 1; v <= 5; ++v) e.emplace_back(0, v);  // heavy hub
    const Graph g = Graph::from_edges(n, e);
    CycleParams params;
    params.k = 4 + static_cast<int>(gr.below(3));
    params.beta = 0.34;
    Rng rng(6061, i);
    const auto res = find_short_cycle(g, params, rng);
    if (!res.heavy_ran) {
      why = "heavy phase did not run on a hub instance";
      return false;
    }

    const BfsTree tree = leader_tree(g);
    const int depth = std::max(1, tree.depth);
    const int k_search = std::min(params.k, g.n);
    const int p = std::max(1, depth + k_search);
    const double thr = std::pow(static_cast<double>(g.n), params.beta);
    const int hint = std::max(1, static_cast<int>(std::floor(thr)));
    const auto table = heavy_cycle_table(g, k_search);
    TableOracle o(table.value, p, bits_for(k_search + 1));
    Rng twin(6061, i);
    const auto m = parallel_min(o, twin, hint);
    const std::uint64_t want =
        m.found ? (static_cast<std::uint64_t>(m.index) << 16) | m.value
                : std::uint64_t{0xFFFF};
    return check_run(res.run, want, o.transcript(), false, why);
  }});

  for (const auto& chk : checks)
    for (int i = 0; i < 25; ++i) {
      std::string why;
      if (!chk.once(i, why)) {
        detail = fmt("%s instance %d: %s", chk.name, i, why.c_str());
        return false;
      }
    }

  // composed searches: same seed, identical outcome and transcript
  for (int i = 0; i < 25; ++i) {
    Rng gr(6070, i);
    const Graph g = random_connected(6 + static_cast<int>(gr.below(7)),
                                     static_cast<int>(gr.below(5)), gr);
    CycleParams params;
    params.k = 4 + static_cast<int>(gr.below(3));
    Rng a(6071, i), b(6071, i);
    const auto r1 = find_short_cycle_clustered(g, params, a);
    const auto r2 = find_short_cycle_clustered(g, params, b);
    if (r1.found != r2.found || r1.length != r2.length ||
        r1.cycle != r2.cycle ||
        r1.stats.rounds_used != r2.stats.rounds_used ||
        !(r1.run.transcript == r2.run.transcript)) {
      detail = fmt("clustered instance %d not seed-deterministic", i);
      return false;
    }
    Rng c(6072, i), d(6072, i);
    const auto g1 = girth(g, 1.0, c);
    const auto g2 = girth(g, 1.0, d);
    if (g1.acyclic != g2.acyclic || g1.girth != g2.girth ||
        g1.cycle != g2.cycle ||
        g1.stats.rounds_used != g2.stats.rounds_used) {
      detail = fmt("girth instance %d not seed-deterministic", i);
      return false;
    }
  }

  detail = fmt("8 oracle apps transcript-identical to centralized twins "
               "over 25 instances each; %d hygiene sweeps all clean; "
               "composed searches seed-deterministic",
               hygiene_total);
  return true;
}

// ---- 7. diameter and radius ------------------------------------------

bool c7_extremes(std::string& detail) {
  std::vector<Graph> graphs{path(5), cycle(6), complete(4), star(5)};
  Rng gen(700);
  for (int i = 0; i < 25; ++i)
    graphs.push_back(random_connected(4 + static_cast<int>(gen.below(13)),
                                      static_cast<int>(gen.below(6)), gen));
  double worst = 1.01;
  int majority_ok = 0, majority_total = 0;
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const Graph& g = graphs[gi];
    const int truth_d = g.diameter();
    const int truth_r = g.radius();
    for (const bool maximize : {true, false}) {
      const int want = maximize ? truth_d : truth_r;
      int agree = 0;
      for (int t = 0; t < 200; ++t) {
        Rng rng(7200 + 2 * static_cast<int>(gi) + maximize, t);
        const auto r = diameter_radius(g, maximize, rng);
        if (r.stats.rounds_used > r.stats.round_bound) {
          detail = fmt("rounds over bound on graph %zu", gi);
          return false;
        }
        if (r.ok && r.value == want) ++agree;
      }
      worst = std::min(worst, agree / 200.0);

      for (int s = 0; s < 15; ++s) {
        std::map<int, int> freq;
        for (int j = 0; j < 7; ++j) {
          Rng rng(7600 + 2 * static_cast<int>(gi) + maximize, 7 * s + j);
          const auto r = diameter_radius(g, maximize, rng);
          ++freq[r.ok ? r.value : -1];
        }
        int best = -1, count = -1;
        for (const auto& [v, c] : freq)
          if (c > count) best = v, count = c;
        if (best == want) ++majority_ok;
        ++majority_total;
      }
    }
  }
  const double maj = static_cast<double>(majority_ok) / majority_total;
  if (worst < 0.66) {
    detail = fmt("per-run agreement %.3f below 0.66", worst);
    return false;
  }
  if (maj < 0.975) {
    detail = fmt("7-fold majority agreement %.4f below 0.975", maj);
    return false;
  }
  detail = fmt("29 graphs, worst per-run agreement %.3f, majority "
               "agreement %.4f over %d wrapped runs",
               worst, maj, majority_total);
  return true;
}

// ---- 8. average eccentricity -----------------------------------------

bool c8_avgecc(std::string& detail) {
  struct Case {
    Graph g;
    double mean;
    const char* name;
  };
  const std::vector<Case> cases{{star(5), 11.0 / 6.0, "S5"},
                                {path(5), 3.2, "P5"}};
  double worst = 1.01;
  std::string worst_cell;
  int cell = 0;
  for (const auto& c : cases)
    for (const double eps : {0.25, 0.5}) {
      int hits = 0;
      for (int t = 0; t < 200; ++t) {
        Rng rng(800 + cell, t);
        const auto r = avg_eccentricity(c.g, eps, rng);
        if (r.stats.rounds_used > r.stats.round_bound) {
          detail = fmt("rounds over bound on %s", c.name);
          return false;
        }
        if (std::abs(r.estimate - c.mean) <= eps) ++hits;
      }
      const double rate = hits / 200.0;
      if (rate < worst) {
        worst = rate;
        worst_cell = fmt("%s eps=%.2f", c.name, eps);
      }
      ++cell;
    }
  if (worst < 0.66) {
    detail = fmt("success %.3f at %s", worst, worst_cell.c_str());
    return false;
  }
  detail = fmt("S5 and P5 at eps 0.25/0.5, worst success %.3f (%s)", worst,
               worst_cell.c_str());
  return true;
}

// ---- 9. cycles and girth ---------------------------------------------

bool c9_cycles(std::string& detail) {
  Rng gen(900);
  for (int i = 0; i < 30; ++i) {
    const Graph g = random_tree(4 + static_cast<int>(gen.below(10)), gen);
    for (int s = 0; s < 3; ++s) {
      CycleParams params;
      params.k = 6;
      Rng r1(901, 3 * i + s);
      if (find_short_cycle(g, params, r1).found) {
        detail = fmt("cycle reported in a tree (instance %d)", i);
        return false;
      }
      Rng r2(902, 3 * i + s);
      const auto gr = girth(g, 1.0, r2);
      if (!gr.acyclic || gr.girth != 0) {
        detail = fmt("tree not reported acyclic (instance %d)", i);
        return false;
      }
    }
  }

  struct Case {
    Graph g;
    int k;
    int want;
    const char* name;
  };
  const std::vector<Case> cases{{cycle(8), 8, 8, "C8"},
                                {petersen(), 8, 5, "petersen"},
                                {chorded_c5(), 4, 3, "chorded"},
                                {two_cluster(), 4, 4, "two-cluster"}};
  double worst = 1.01;
  std::string worst_cell;
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const auto& c = cases[ci];
    CycleParams params;
    params.k = c.k;
    int flat_hits = 0, clus_hits = 0, girth_hits = 0;
    for (int t = 0; t < 200; ++t) {
      Rng rf(910 + static_cast<int>(ci), t);
      const auto rr = find_short_cycle(c.g, params, rf);
      if (rr.found) {
        if (!valid_simple_cycle(c.g, rr.cycle) || rr.length != c.want) {
          detail = fmt("%s: bad flat witness or length", c.name);
          return false;
        }
        ++flat_hits;
      }
      Rng rc(920 + static_cast<int>(ci), t);
      const auto cc = find_short_cycle_clustered(c.g, params, rc);
      if (cc.found) {
        if (!valid_simple_cycle(c.g, cc.cycle) || cc.length != c.want) {
          detail = fmt("%s: bad clustered witness or length", c.name);
          return false;
        }
        ++clus_hits;
      }
      if (rr.found && cc.found && rr.length != cc.length) {
        detail = fmt("%s: clustered and flat disagree", c.name);
        return false;
      }
      Rng rg(930 + static_cast<int>(ci), t);
      const auto gg = girth(c.g, 1.0, rg);
      if (!gg.acyclic) {
        if (!valid_simple_cycle(c.g, gg.cycle)) {
          detail = fmt("%s: girth witness invalid", c.name);
          return false;
        }
        if (gg.girth == c.want) ++girth_hits;
      }
    }
    for (const auto& [hits, label] :
         {std::pair<int, const char*>{flat_hits, "flat"},
          {clus_hits, "clustered"},
          {girth_hits, "girth"}}) {
      const double rate = hits / 200.0;
      if (rate < worst) {
        worst = rate;
        worst_cell = fmt("%s %s", c.name, label);
      }
    }
  }
  if (worst < 0.66) {
    detail = fmt("success %.3f at %s", worst, worst_cell.c_str());
    return false;
  }
  detail = fmt("trees always acyclic; four named graphs, worst success "
               "%.3f (%s); all witnesses valid; clustered agrees with flat",
               worst, worst_cell.c_str());
  return true;
}

// ---- 11. non-oracle suite --------------------------------------------

bool c11_nonoracle(std::string& detail) {
  {
    const Graph g = star(4);
    const BfsTree tree = leader_tree(g);
    const AmplitudeProblem prob = flag_problem(g, 0.25);
    const double th = std::asin(0.5);
    for (int r = 0; r <= 6; ++r) {
      StateVector st = problem_state(prob);
      prob.prepare(st);
      RoundLedger ledger(message_width(g.n));
      for (int j = 0; j < r; ++j) aa_iterate(g, tree, prob, st, ledger);
      const double amp = std::sqrt(st.probability("f", 1));
      if (std::fabs(amp - std::fabs(std::sin((2 * r + 1) * th))) > 1e-9) {
        detail = fmt("iterate drifted from the rotation at r=%d", r);
        return false;
      }
      if (ledger.rounds_used() > r * 4 * g.diameter()) {
        detail = fmt("iterate ledger over 4*(R+D) at r=%d", r);
        return false;
      }
    }
  }

  {
    const Graph g = path(3);
    const BfsTree tree = leader_tree(g);
    const double theta = 2 * kPi * (3.0 / 8.0);
    const PhaseProblem prob = phase_problem(g, theta, 3);
    RoundLedger ledger(message_width(g.n));
    Rng rng(1101);
    const double est = phase_estimate(g, tree, prob, 0.3, 0.1, rng, ledger);
    if (std::fabs(est - theta) > 1e-9) {
      detail = fmt("phase estimate %.12f != 2*pi*3/8", est);
      return false;
    }
    if (ledger.rounds_used() >
        phase_estimate_bound(g.n, g.diameter(), 1, 0.3, 0.1, 3)) {
      detail = "phase estimation ledger over its bound";
      return false;
    }
  }

  {
    const Graph g = path(3);
    const BfsTree tree = leader_tree(g);
    const AmplitudeProblem prob = flag_problem(g, 0.25);
    const int bound =
        amplitude_estimate_bound(g.n, g.diameter(), 0, 0.05, 0.2, 1.0);
    int hits = 0;
    for (int t = 0; t < 200; ++t) {
      RoundLedger ledger(message_width(g.n));
      Rng rng(1102, t);
      const double est =
          amplitude_estimate(g, tree, prob, 0.05, 0.2, rng, ledger);
      if (ledger.rounds_used() > bound) {
        detail = "amplitude estimation ledger over its bound";
        return false;
      }
      if (std::fabs(est - 0.25) <= 0.05) ++hits;
    }
    if (hits < 132) {
      detail = fmt("amplitude estimate success %.3f", hits / 200.0);
      return false;
    }
    detail = fmt("iterate exact to 1e-9, phase exact on 3 control bits, "
                 "amplitude success %.3f, ledgers within bounds",
                 hits / 200.0);
  }
  return true;
}

struct Criterion {
  int id;
  const char* name;
  double cap_seconds;
  std::function<bool(std::string&)> run;
};

}  // namespace

int main() {
  const std::uint64_t audits_before = RoundLedger::audits();
  std::vector<Criterion> list{
      {1, "distribution lemma", 60, c1_distribution},
      {2, "parallel Grover", 300, c2_grover},
      {3, "parallel minimum", 300, c3_minimum},
      {4, "element distinctness", 300, c4_distinctness},
      {5, "Deutsch-Jozsa", 120, c5_dj},
      {6, "framework equivalence", 300, c6_equivalence},
      {7, "diameter and radius", 300, c7_extremes},
      {8, "average eccentricity", 300, c8_avgecc},
      {9, "cycles and girth", 600, c9_cycles},
      {11, "non-oracle suite", 180, c11_nonoracle},
  };

  struct Line {
    int id;
    bool pass;
    std::string text;
  };
  std::vector<Line> lines;
  int fails = 0;
  for (auto& c : list) {
    std::string detail;
    bool pass = false;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      pass = c.run(detail);
    } catch (const BandwidthError& e) {
      g_bandwidth_violation = true;
      detail = fmt("bandwidth violation: %s", e.what());
    } catch (const SimError& e) {
      detail = fmt("unexpected error: %s", e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (pass && secs > c.cap_seconds) {
      pass = false;
      detail = fmt("runtime %.1fs over the %gs cap", secs, c.cap_seconds);
    }
    if (!pass) ++fails;
    lines.push_back({c.id, pass,
                     fmt("%s %2d. %s (%.1fs): %s", pass ? "[PASS]" : "[FAIL]",
                         c.id, c.name, secs, detail.c_str())});
  }

  // bandwidth: every send in every criterion above went through the
  // ledger's width audit; a violation would have thrown
  const std::uint64_t audited = RoundLedger::audits() - audits_before;
  const bool bw_pass = audited > 0 && !g_bandwidth_violation;
  lines.push_back(
      {10, bw_pass,
       fmt("%s 10. bandwidth invariant (0.0s): %llu width audits, %s",
           bw_pass ? "[PASS]" : "[FAIL]",
           static_cast<unsigned long long>(audited),
           g_bandwidth_violation ? "violation observed" : "zero violations")});
  if (!bw_pass) ++fails;

  std::sort(lines.begin(), lines.end(),
            [](const Line& a, const Line& b) { return a.id < b.id; });
  for (const auto& l : lines) std::puts(l.text.c_str());
  std::printf("%d/%zu criteria passed\n", static_cast<int>(lines.size()) - fails,
              lines.size());
  return fails;
}
