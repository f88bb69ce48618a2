#include "clockforge/sparse_op.hpp"

#include <algorithm>

namespace clockforge::spins {

OperatorBuilder::OperatorBuilder(std::int64_t dimension,
                                 std::vector<std::string> labels)
    : dimension_(dimension), labels_(std::move(labels)) {
  if (dimension_ <= 0) throw domain_error("OperatorBuilder: empty dimension");
  if (static_cast<std::int64_t>(labels_.size()) != dimension_)
    throw domain_error("OperatorBuilder: one label per basis index required");
}

void OperatorBuilder::add(std::int64_t r, std::int64_t c, double v) {
  if (r < 0 || c < 0 || r >= dimension_ || c >= dimension_)
    throw index_error("OperatorBuilder: entry out of range");
  if (v == 0) return;
  if (r > c) std::swap(r, c);
  acc_[{r, c}] += v;
}

LabeledSparseOperator OperatorBuilder::finish() {
  LabeledSparseOperator op;
  op.dimension = dimension_;
  op.labels = std::move(labels_);
  op.entries.reserve(acc_.size());
  for (const auto& [rc, v] : acc_)
    if (v != 0) op.entries.push_back({rc.first, rc.second, v});
  return op;
}

Eigen::VectorXd apply(const LabeledSparseOperator& op,
                      const Eigen::VectorXd& x) {
  if (x.size() != op.dimension)
    throw domain_error("apply: vector dimension mismatch");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(op.dimension);
  for (const auto& e : op.entries) {
    y[e.row] += e.value * x[e.col];
    if (e.row != e.col) y[e.col] += e.value * x[e.row];
  }
  return y;
}

Eigen::MatrixXd to_dense(const LabeledSparseOperator& op) {
  if (op.dimension > 1 << 14)
    throw size_error("to_dense: operator too large for a dense matrix");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(op.dimension, op.dimension);
  for (const auto& e : op.entries) {
    m(e.row, e.col) = e.value;
    m(e.col, e.row) = e.value;
  }
  return m;
}

SectorDecomposition sector_decompose(
    const LabeledSparseOperator& op,
    const std::function<long long(const std::string&)>& key,
    const std::string& key_name) {
  SectorDecomposition d;
  d.key_name = key_name;
  std::vector<long long> key_of(op.dimension);
  for (std::int64_t i = 0; i < op.dimension; ++i) {
    key_of[i] = key(op.labels[i]);
    d.sectors[key_of[i]].push_back(i);
  }
  for (const auto& e : op.entries) {
    if (key_of[e.row] != key_of[e.col])
      throw not_conserved("sector key '" + key_name + "' not conserved: (" +
                          op.labels[e.row] + ", " + op.labels[e.col] +
                          ") = " + std::to_string(e.value));
  }
  return d;
}

RestrictedBlock restrict_to(const LabeledSparseOperator& op,
                            const std::vector<std::int64_t>& indices) {
  const auto n = static_cast<std::int64_t>(indices.size());
  std::map<std::int64_t, std::int64_t> pos;
  for (std::int64_t i = 0; i < n; ++i) {
    const std::int64_t idx = indices[i];
    if (idx < 0 || idx >= op.dimension)
      throw index_error("restrict_to: index out of range");
    if (!pos.emplace(idx, i).second)
      throw index_error("restrict_to: duplicate index");
  }
  RestrictedBlock block;
  block.matrix = Eigen::MatrixXd::Zero(n, n);
  block.labels.reserve(n);
  for (std::int64_t idx : indices) block.labels.push_back(op.labels[idx]);
  for (const auto& e : op.entries) {
    auto r = pos.find(e.row);
    auto c = pos.find(e.col);
    if (r == pos.end() || c == pos.end()) continue;
    block.matrix(r->second, c->second) = e.value;
    block.matrix(c->second, r->second) = e.value;
  }
  return block;
}

nlohmann::json to_json(const LabeledSparseOperator& op) {
  nlohmann::json j;
  j["dimension"] = op.dimension;
  j["labels"] = op.labels;
  auto entries = nlohmann::json::array();
  for (const auto& e : op.entries)
    entries.push_back({e.row, e.col, e.value});
  j["entries"] = std::move(entries);
  return j;
}

LabeledSparseOperator operator_from_json(const nlohmann::json& j) {
  LabeledSparseOperator op;
  op.dimension = j.at("dimension").get<std::int64_t>();
  op.labels = j.at("labels").get<std::vector<std::string>>();
  for (const auto& e : j.at("entries")) {
    if (!e.is_array() || e.size() != 3)
      throw domain_error("operator_from_json: entries must be [row,col,value]");
    LabeledSparseOperator::Entry entry{e[0].get<std::int64_t>(),
                                       e[1].get<std::int64_t>(),
                                       e[2].get<double>()};
    if (entry.row > entry.col)
      throw domain_error("operator_from_json: entries must have row <= col");
    op.entries.push_back(entry);
  }
  return op;
}

}  // namespace clockforge::spins
