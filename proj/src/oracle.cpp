#include "qcongest/oracle.hpp"

#include <string>

namespace qcongest {

ParallelOracle::ParallelOracle(int k, int p, int value_bits)
    : k_(k), p_(p), value_bits_(value_bits) {
  if (k <= 0) throw ParameterError("oracle needs a positive input count");
  if (p <= 0) throw ParameterError("parallelism must be positive");
  if (value_bits <= 0 || value_bits > 62)
    throw ParameterError("value width out of range");
}

std::vector<std::uint64_t> ParallelOracle::classical_batch(
    const std::vector<int>& indices) {
  const int width = static_cast<int>(indices.size());
  if (width == 0) throw ContractError("empty query batch");
  if (width > p_)
    throw ContractError("batch of " + std::to_string(width) +
                        " queries exceeds parallelism " + std::to_string(p_));
  for (int idx : indices)
    if (idx < 0 || idx >= k_)
      throw AddressError("query index " + std::to_string(idx) +
                         " out of range");
  QueryBatch batch{false, width, indices};
  transcript_.batches.push_back(batch);
  on_batch(batch);
  std::vector<std::uint64_t> out;
  out.reserve(indices.size());
  for (int idx : indices) out.push_back(value_at(idx));
  return out;
}

void ParallelOracle::coherent_batch(
    int width, const std::function<void(const ValueFn&)>& body) {
  if (width <= 0) throw ContractError("empty query batch");
  if (width > p_)
    throw ContractError("batch of " + std::to_string(width) +
                        " queries exceeds parallelism " + std::to_string(p_));
  QueryBatch batch{true, width, {}};
  transcript_.batches.push_back(batch);
  on_batch(batch);
  auto live = std::make_shared<bool>(true);
  ValueFn fn = [this, live](int index) -> std::uint64_t {
    if (!*live)
      throw ContractError("oracle access escaped its query batch");
    if (index < 0 || index >= k_)
      throw AddressError("query index " + std::to_string(index) +
                         " out of range");
    return value_at(index);
  };
  body(fn);
  *live = false;
}

TableOracle::TableOracle(std::vector<std::uint64_t> table, int p,
                         int value_bits)
    : ParallelOracle(static_cast<int>(table.size()), p, value_bits),
      table_(std::move(table)) {
  const std::uint64_t cap = std::uint64_t{1} << value_bits;
  for (std::uint64_t v : table_)
    if (v >= cap) throw ParameterError("table value exceeds declared width");
}

}  // namespace qcongest
