#pragma once

// Parallel-query oracle access with transcript accounting.
//
// An algorithm with parallelism p may touch the input table only through
// batches: a classical batch reads up to p explicit indices, a coherent
// batch applies a unitary that depends on the table (simulated with full
// table access) and records only its width. The transcript lists every
// batch in order; its length is the query depth b an algorithm is charged.

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "qcongest/common.hpp"

namespace qcongest {

struct QueryBatch {
  bool coherent = false;
  int width = 0;
  std::vector<int> indices;  // classical batches only

  friend bool operator==(const QueryBatch&, const QueryBatch&) = default;
};

struct QueryTranscript {
  std::vector<QueryBatch> batches;

  int depth() const { return static_cast<int>(batches.size()); }
  friend bool operator==(const QueryTranscript&, const QueryTranscript&) =
      default;
};

// Table accessor handed to a coherent batch body; dies with the batch.
using ValueFn = std::function<std::uint64_t(int)>;

class ParallelOracle {
 public:
  ParallelOracle(int k, int p, int value_bits);
  virtual ~ParallelOracle() = default;

  int size() const { return k_; }
  int parallelism() const { return p_; }
  int value_bits() const { return value_bits_; }

  std::vector<std::uint64_t> classical_batch(const std::vector<int>& indices);
  void coherent_batch(int width,
                      const std::function<void(const ValueFn&)>& body);

  const QueryTranscript& transcript() const { return transcript_; }
  int queries_used() const { return transcript_.depth(); }
  void reset_transcript() { transcript_.batches.clear(); }

 protected:
  virtual std::uint64_t value_at(int index) = 0;
  virtual void on_batch(const QueryBatch& batch) { (void)batch; }

 private:
  int k_;
  int p_;
  int value_bits_;
  QueryTranscript transcript_;
};

class TableOracle : public ParallelOracle {
 public:
  TableOracle(std::vector<std::uint64_t> table, int p, int value_bits);

  const std::vector<std::uint64_t>& table() const { return table_; }

 protected:
  std::uint64_t value_at(int index) override { return table_[index]; }

 private:
  std::vector<std::uint64_t> table_;
};

}  // namespace qcongest
