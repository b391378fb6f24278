#include "qcongest/pqalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "qcongest/statevector.hpp"

namespace qcongest {

namespace {

constexpr double kPi = std::numbers::pi;

// smallest s >= 1 with s*s*den >= num
int ceil_sqrt_frac(int num, int den) {
  int s = 1;
  while (static_cast<long long>(s) * s * den < num) ++s;
  return s;
}

// smallest s >= 1 with (s*p)^2 * s >= k*k, i.e. s >= (k/p)^(2/3)
int ceil_pow23(int k, int p) {
  int s = 1;
  while (static_cast<long long>(s) * s * s * p * p <
         static_cast<long long>(k) * k)
    ++s;
  return s;
}

// C(k-t, p) / C(k, p): chance a uniform p-subset misses all t marked
double miss_fraction(int k, int t, int p) {
  if (t == 0) return 1.0;
  if (k - t < p) return 0.0;
  double f = 1.0;
  for (int j = 0; j < p; ++j)
    f *= static_cast<double>(k - t - j) / static_cast<double>(k - j);
  return f;
}

std::vector<int> sample_subset_of(const std::vector<int>& pool, int p,
                                  Rng& rng) {
  std::vector<int> items = pool;
  for (int j = 0; j < p; ++j) {
    const int pick = j + static_cast<int>(rng.below(items.size() - j));
    std::swap(items[j], items[pick]);
  }
  items.resize(p);
  std::sort(items.begin(), items.end());
  return items;
}

std::vector<int> sample_subset(int k, int p, Rng& rng) {
  std::vector<int> all(k);
  std::iota(all.begin(), all.end(), 0);
  return sample_subset_of(all, p, rng);
}

bool contains_any(const std::vector<int>& sorted_subset,
                  const std::vector<char>& marked) {
  for (int i : sorted_subset)
    if (marked[i]) return true;
  return false;
}

struct CoreState {
  bool have_marked = false;
  std::vector<char> marked;
  int marked_count = 0;
};

GroverResult grover_core(ParallelOracle& o,
                         const std::function<bool(std::uint64_t)>& pred,
                         Rng& rng, int budget, int hint,
                         std::vector<std::pair<int, std::uint64_t>>* seen) {
  const int k = o.size();
  const int pw = std::min(o.parallelism(), k);
  const int start = o.queries_used();
  GroverResult res;
  res.budget = budget;
  auto used = [&] { return o.queries_used() - start; };

  if (o.parallelism() >= k) {
    std::vector<int> all(k);
    std::iota(all.begin(), all.end(), 0);
    const auto vals = o.classical_batch(all);
    for (int i = 0; i < k; ++i) {
      if (seen) seen->push_back({i, vals[i]});
      if (!res.found && pred(vals[i])) {
        res.found = true;
        res.index = i;
        res.value = vals[i];
      }
    }
    res.batches = used();
    return res;
  }

  CoreState cs;
  auto ensure_marked = [&](const ValueFn& value) {
    if (cs.have_marked) return;
    cs.marked.assign(k, 0);
    for (int i = 0; i < k; ++i)
      if (pred(value(i))) {
        cs.marked[i] = 1;
        ++cs.marked_count;
      }
    cs.have_marked = true;
  };

  // Runs r oracle iterations and one verification batch; the measured
  // subset is drawn inside the final coherent batch, where the state
  // (and so the table) is last touched.
  auto run_phase = [&](int r) {
    std::vector<int> outcome;
    if (r == 0) {
      outcome = sample_subset(k, pw, rng);
    } else {
      for (int j = 0; j < r; ++j) {
        o.coherent_batch(pw, [&](const ValueFn& value) {
          ensure_marked(value);
          if (j != r - 1) return;
          const double eps = 1.0 - miss_fraction(k, cs.marked_count, pw);
          const double theta =
              std::asin(std::min(1.0, std::sqrt(std::max(0.0, eps))));
          const double amp = std::sin((2.0 * r + 1.0) * theta);
          if (rng.coin(amp * amp)) {
            // uniform among subsets that hit the marked set
            for (int tries = 0; tries < 100000; ++tries) {
              auto s = sample_subset(k, pw, rng);
              if (contains_any(s, cs.marked)) {
                outcome = std::move(s);
                break;
              }
            }
            if (outcome.empty())
              throw ContractError("marked subset sampling starved");
          } else {
            std::vector<int> pool;
            for (int i = 0; i < k; ++i)
              if (!cs.marked[i]) pool.push_back(i);
            outcome = sample_subset_of(pool, pw, rng);
          }
        });
      }
    }
    const auto vals = o.classical_batch(outcome);
    for (std::size_t i = 0; i < outcome.size(); ++i) {
      if (seen) seen->push_back({outcome[i], vals[i]});
      if (!res.found && pred(vals[i])) {
        res.found = true;
        res.index = outcome[i];
        res.value = vals[i];
      }
    }
  };

  if (hint > 0) {
    const double eps_h = 1.0 - miss_fraction(k, std::min(hint, k), pw);
    const double theta_h = std::asin(std::min(1.0, std::sqrt(eps_h)));
    const int r_star =
        theta_h <= 0.0
            ? 0
            : std::max(0, static_cast<int>(std::lround(
                              kPi / (4.0 * theta_h) - 0.5)));
    bool first = true;
    while (!res.found) {
      int r = first ? r_star : static_cast<int>(rng.below(r_star + 1));
      first = false;
      if (used() + r + 1 > budget) r = budget - used() - 1;
      if (r < 0) break;
      run_phase(r);
    }
  } else {
    double m = 1.0;
    const double m_cap = std::sqrt(static_cast<double>(k) / pw) + 1.0;
    while (!res.found) {
      int r = static_cast<int>(rng.below(static_cast<std::uint64_t>(m) + 1));
      if (used() + r + 1 > budget) r = budget - used() - 1;
      if (r < 0) break;
      run_phase(r);
      m = std::min(m * 1.2, m_cap);
    }
  }
  res.batches = used();
  return res;
}

std::uint64_t draw_binomial(int shots, double prob, Rng& rng) {
  std::uint64_t c = 0;
  for (int i = 0; i < shots; ++i)
    if (rng.coin(prob)) ++c;
  return c;
}

}  // namespace

int grover_budget(int k, int p, int marked_hint) {
  const int t = std::max(1, marked_hint);
  return 9 * ceil_sqrt_frac(k, t * std::min(p, k));
}

GroverResult grover_any(ParallelOracle& oracle,
                        const std::function<bool(std::uint64_t)>& marked,
                        Rng& rng, int marked_hint) {
  return grover_core(oracle, marked, rng,
                     grover_budget(oracle.size(), oracle.parallelism(),
                                   marked_hint),
                     marked_hint, nullptr);
}

MinResult parallel_min(ParallelOracle& oracle, Rng& rng,
                       int multiplicity_hint, bool maximize) {
  const int k = oracle.size();
  const int pw = std::min(oracle.parallelism(), k);
  const int h = std::max(1, multiplicity_hint);
  const int budget = 9 * ceil_sqrt_frac(k, h * pw);
  const int conf_cap = 3 * ceil_sqrt_frac(k, pw) + 2;
  const int start = oracle.queries_used();

  MinResult res;
  res.budget = budget;
  bool have = false;
  std::uint64_t best = 0;
  auto better = [maximize](std::uint64_t a, std::uint64_t b) {
    return maximize ? a > b : a < b;
  };
  while (true) {
    const int remaining = budget - (oracle.queries_used() - start);
    if (remaining <= 0) break;
    const int sub = std::min(remaining, conf_cap);
    std::vector<std::pair<int, std::uint64_t>> seen;
    auto pred = [&](std::uint64_t v) { return !have || better(v, best); };
    const auto g = grover_core(oracle, pred, rng, sub, 0, &seen);
    for (const auto& [idx, val] : seen) {
      if (!have || better(val, best)) {
        have = true;
        best = val;
        res.index = idx;
        res.value = val;
      }
    }
    // not finding anything below the threshold ends the descent, whether
    // the sweep ran to full confidence or the budget ran dry
    if (!g.found) break;
  }
  res.found = have;
  res.batches = oracle.queries_used() - start;
  return res;
}

double johnson_gap(int k, int z, int p) {
  if (z < 2 || z > k - 1) throw ParameterError("bad subset size");
  const double denom = static_cast<double>(z) * (k - z);
  const double l2 =
      (static_cast<double>(z - 1) * (k - z - 1) - 1.0) / denom;
  const double lmin = 1.0 / static_cast<double>(k - z);
  const double worst = std::max(std::abs(l2), lmin);
  return 1.0 - std::pow(worst, p);
}

EdResult element_distinctness(ParallelOracle& oracle, Rng& rng) {
  const int k = oracle.size();
  const int p = std::min(oracle.parallelism(), k);
  const int start = oracle.queries_used();
  EdResult res;
  res.budget = 12 * ceil_pow23(k, p);

  const double zf = std::pow(static_cast<double>(k), 2.0 / 3.0) *
                    std::pow(static_cast<double>(p), 1.0 / 3.0);
  int z = static_cast<int>(std::lround(zf));
  z = std::clamp(z, std::min(p + 1, k / 2), k / 2);
  z = std::max(z, 2);
  if (z >= k) throw ParameterError("table too small for a subset walk");

  // enumerate z-subsets in lexicographic order
  std::vector<std::vector<int>> subsets;
  std::vector<int> cur(z);
  std::iota(cur.begin(), cur.end(), 0);
  while (true) {
    subsets.push_back(cur);
    int i = z - 1;
    while (i >= 0 && cur[i] == k - z + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < z; ++j) cur[j] = cur[j - 1] + 1;
  }
  const std::uint64_t count = subsets.size();
  if (count > 924)
    throw CapacityError("subset walk space exceeds the desk cap");

  const double gap = johnson_gap(k, z, p);
  const int walk_cost = static_cast<int>(std::ceil(1.0 / std::sqrt(gap)));
  const int setup_cost = ceil_div(z, p);
  const int verify_cost = ceil_div(2, p);

  // single-collision tuning
  double eps_h = static_cast<double>(z) * (z - 1) /
                 (static_cast<double>(k) * (k - 1));
  const double theta_h = std::asin(std::min(1.0, std::sqrt(eps_h)));
  const int r_star = std::max(
      0, static_cast<int>(std::lround(kPi / (4.0 * theta_h) - 0.5)));

  auto used = [&] { return oracle.queries_used() - start; };
  const int bits = std::max(1, ceil_log2(count));

  std::vector<char> marked;
  std::vector<std::pair<int, int>> pair_of;
  bool first_phase = true;
  auto fill_memory = [&](const ValueFn& value) {
    if (!marked.empty()) return;
    marked.assign(count, 0);
    pair_of.assign(count, {-1, -1});
    std::vector<std::uint64_t> vals(k);
    for (int i = 0; i < k; ++i) vals[i] = value(i);
    for (std::uint64_t r = 0; r < count; ++r) {
      const auto& s = subsets[r];
      for (int a = 0; a < z && !marked[r]; ++a)
        for (int b = a + 1; b < z; ++b)
          if (vals[s[a]] == vals[s[b]]) {
            marked[r] = 1;
            pair_of[r] = {s[a], s[b]};
            break;
          }
    }
  };

  while (!res.found) {
    const int fixed = setup_cost + verify_cost;
    int r = first_phase ? r_star : static_cast<int>(rng.below(r_star + 1));
    if (fixed + r * walk_cost > res.budget - used())
      r = (res.budget - used() - fixed) / walk_cost;
    if (fixed > res.budget - used() || r < 0) break;
    first_phase = false;

    StateVector st = StateVector::make({{"walk", bits}});
    auto& amps = st.amplitudes();
    const double a0 = 1.0 / std::sqrt(static_cast<double>(count));
    for (std::uint64_t v = 0; v < count; ++v) amps(v) = a0;
    for (std::int64_t v = count; v < st.dim(); ++v) amps(v) = 0.0;

    for (int j = 0; j < setup_cost; ++j)
      oracle.coherent_batch(std::min(p, z - j * p),
                            [&](const ValueFn& value) { fill_memory(value); });
    for (int it = 0; it < r; ++it) {
      apply_oracle_reflection(
          st, "walk", [&](std::uint64_t v) { return v < count && marked[v]; });
      for (int stp = 0; stp < walk_cost; ++stp)
        oracle.coherent_batch(p, [](const ValueFn&) {});
      apply_diffusion(st, "walk", count);
    }
    const std::uint64_t rank = measure(st, {"walk"}, rng)[0];
    const auto [i, j] = pair_of[rank];
    if (i < 0) continue;
    std::vector<std::uint64_t> vals;
    if (p >= 2) {
      vals = oracle.classical_batch({i, j});
    } else {
      vals.push_back(oracle.classical_batch({i})[0]);
      vals.push_back(oracle.classical_batch({j})[0]);
    }
    if (vals[0] == vals[1] && i != j) {
      res.found = true;
      res.first = i;
      res.second = j;
      res.value = vals[0];
    }
  }
  res.batches = used();
  return res;
}

DjResult deutsch_jozsa(ParallelOracle& oracle, Rng& rng) {
  const int k = oracle.size();
  if (k < 2 || (k & (k - 1)) != 0)
    throw ParameterError("table size must be a power of two");
  const int bits = ceil_log2(k);
  const int start = oracle.queries_used();
  StateVector st = StateVector::make({{"idx", bits}});
  apply_hadamard_all(st, "idx");
  oracle.coherent_batch(1, [&](const ValueFn& value) {
    apply_phase_where(
        st, "idx", [&](std::uint64_t v) { return (value(static_cast<int>(v)) & 1) != 0; },
        kPi);
  });
  apply_hadamard_all(st, "idx");
  DjResult res;
  res.constant = (measure(st, {"idx"}, rng)[0] == 0);
  res.batches = oracle.queries_used() - start;
  return res;
}

MeanResult mean_estimate(ParallelOracle& oracle, std::uint64_t value_max,
                         double eps, Rng& rng) {
  if (eps <= 0.0) throw ParameterError("eps must be positive");
  const int k = oracle.size();
  const int p = oracle.parallelism();
  const int start = oracle.queries_used();
  MeanResult res;
  if (value_max == 0) return res;
  const int v_max = static_cast<int>(value_max);

  const double eps_t = 0.9 * eps / v_max;
  const double theta_res = 0.8 * eps_t;
  std::vector<int> powers{0};
  int m = 1;
  while (2 * m + 1 < kPi / (2.0 * theta_res)) {
    powers.push_back(m);
    m *= 2;
  }
  powers.push_back(m);
  const int shots = 18;

  std::vector<double> frac(v_max + 1, 0.0);
  bool have_frac = false;
  auto fill_frac = [&](const ValueFn& value) {
    if (have_frac) return;
    for (int i = 0; i < k; ++i) {
      const std::uint64_t v = value(i);
      if (v > value_max)
        throw ContractError("table value above the declared maximum");
      for (int t = 1; t <= static_cast<int>(v); ++t) frac[t] += 1.0;
    }
    for (int t = 1; t <= v_max; ++t) frac[t] /= k;
    have_frac = true;
  };

  double mean = 0.0;
  for (int lo = 1; lo <= v_max; lo += p) {
    const int hi = std::min(v_max, lo + p - 1);
    const int width = hi - lo + 1;
    std::vector<std::vector<std::uint64_t>> hits(
        width, std::vector<std::uint64_t>(powers.size()));
    for (std::size_t j = 0; j < powers.size(); ++j) {
      for (int s = 0; s < shots; ++s) {
        for (int it = 0; it < powers[j]; ++it)
          oracle.coherent_batch(width, [&](const ValueFn& value) {
            fill_frac(value);
          });
        oracle.coherent_batch(width, [&](const ValueFn& value) {
          fill_frac(value);
        });
      }
      for (int t = 0; t < width; ++t) {
        const double theta = std::asin(std::sqrt(frac[lo + t]));
        const double q = std::pow(std::sin((2.0 * powers[j] + 1.0) * theta), 2);
        hits[t][j] = draw_binomial(shots, q, rng);
      }
    }
    // maximum-likelihood angle on a coarse-then-fine grid
    for (int t = 0; t < width; ++t) {
      auto loglik = [&](double theta) {
        double l = 0.0;
        for (std::size_t j = 0; j < powers.size(); ++j) {
          double q = std::pow(std::sin((2.0 * powers[j] + 1.0) * theta), 2);
          q = std::clamp(q, 1e-12, 1.0 - 1e-12);
          l += hits[t][j] * std::log(q) +
               (shots - hits[t][j]) * std::log(1.0 - q);
        }
        return l;
      };
      const int coarse = 700;
      double best_th = 0.0, best_l = -1e300;
      for (int g = 0; g <= coarse; ++g) {
        const double th = (kPi / 2.0) * g / coarse;
        const double l = loglik(th);
        if (l > best_l) {
          best_l = l;
          best_th = th;
        }
      }
      const double half = (kPi / 2.0) / coarse;
      for (int g = -80; g <= 80; ++g) {
        const double th =
            std::clamp(best_th + half * g / 80.0, 0.0, kPi / 2.0);
        const double l = loglik(th);
        if (l > best_l) {
          best_l = l;
          best_th = th;
        }
      }
      mean += std::pow(std::sin(best_th), 2);
    }
  }
  res.mean = mean;
  res.batches = oracle.queries_used() - start;
  return res;
}

}  // namespace qcongest
