#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>  // vendored single-header nlohmann/json

#include "clockforge/common.hpp"

namespace clockforge::spins {

// Real symmetric sparse operator whose basis indices carry human-readable
// bit/trit-string labels.  Entries are stored once with row <= col.
struct LabeledSparseOperator {
  std::int64_t dimension = 0;
  std::vector<std::string> labels;
  struct Entry {
    std::int64_t row;
    std::int64_t col;
    double value;
  };
  std::vector<Entry> entries;
};

// Accumulating builder; merges duplicate coordinates and drops exact zeros.
class OperatorBuilder {
 public:
  OperatorBuilder(std::int64_t dimension, std::vector<std::string> labels);

  // Adds v at (r,c) and, for r != c, symmetrically at (c,r).
  void add(std::int64_t r, std::int64_t c, double v);

  LabeledSparseOperator finish();

 private:
  std::int64_t dimension_;
  std::vector<std::string> labels_;
  std::map<std::pair<std::int64_t, std::int64_t>, double> acc_;
};

Eigen::VectorXd apply(const LabeledSparseOperator& op,
                      const Eigen::VectorXd& x);

Eigen::MatrixXd to_dense(const LabeledSparseOperator& op);

struct SectorDecomposition {
  std::string key_name;
  std::map<long long, std::vector<std::int64_t>> sectors;
};

// Partitions the basis by key(label) and asserts block-diagonality by
// scanning every stored entry; throws not_conserved naming the offender.
SectorDecomposition sector_decompose(
    const LabeledSparseOperator& op,
    const std::function<long long(const std::string&)>& key,
    const std::string& key_name);

struct RestrictedBlock {
  Eigen::MatrixXd matrix;
  std::vector<std::string> labels;
};

// Principal submatrix in the given index order, labels carried along.
RestrictedBlock restrict_to(const LabeledSparseOperator& op,
                            const std::vector<std::int64_t>& indices);

// JSON triple-list format {dimension, labels, entries} for golden files.
nlohmann::json to_json(const LabeledSparseOperator& op);
LabeledSparseOperator operator_from_json(const nlohmann::json& j);

}  // namespace clockforge::spins
