#include "limeaudit/synthdata.hpp"

#include <cmath>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "limeaudit/errors.hpp"
#include "limeaudit/rng.hpp"

namespace limeaudit {

std::vector<int> LeafSpec::active_set() const {
  std::vector<int> out;
  for (int j = 0; j < beta.size(); ++j)
    if (beta(j) != 0.0) out.push_back(j);
  return out;
}

double Box::volume() const {
  double v = 1.0;
  for (int j = 0; j < lo.size(); ++j) v *= hi(j) - lo(j);
  return v;
}

Eigen::VectorXd Box::centroid() const { return 0.5 * (lo + hi); }

bool Box::contains(const Eigen::VectorXd& x) const {
  // Half-open on split boundaries, matching the descent rule; the outer
  // face of the cube (hi == 1) stays closed so the boxes cover [0,1]^N.
  for (int j = 0; j < lo.size(); ++j) {
    if (x(j) < lo(j)) return false;
    if (x(j) >= hi(j) && !(hi(j) == 1.0 && x(j) == 1.0)) return false;
  }
  return true;
}

PartitionSpec::PartitionSpec(int n_features, std::vector<Node> nodes,
                             std::vector<LeafSpec> leaves)
    : n_features_(n_features), nodes_(std::move(nodes)), leaves_(std::move(leaves)) {
  if (n_features_ < 1) throw ArgumentError("PartitionSpec: n_features must be >= 1");
  if (nodes_.empty()) throw ArgumentError("PartitionSpec: empty tree");
  std::set<int> ids;
  int leaf_count = 0;
  for (const auto& node : nodes_) {
    if (node.feature >= 0) {
      if (node.feature >= n_features_)
        throw ArgumentError("PartitionSpec: split feature out of range");
      if (!(node.threshold > 0.0 && node.threshold < 1.0))
        throw ArgumentError("PartitionSpec: threshold must lie in (0,1)");
      if (node.left < 0 || node.right < 0 ||
          node.left >= static_cast<int>(nodes_.size()) ||
          node.right >= static_cast<int>(nodes_.size()))
        throw ArgumentError("PartitionSpec: bad child index");
    } else {
      if (node.leaf_pos < 0 || node.leaf_pos >= static_cast<int>(leaves_.size()))
        throw ArgumentError("PartitionSpec: bad leaf position");
      ++leaf_count;
    }
  }
  if (leaf_count != static_cast<int>(leaves_.size()))
    throw ArgumentError("PartitionSpec: leaf nodes and leaf specs disagree");
  for (const auto& leaf : leaves_) {
    if (leaf.beta.size() != n_features_)
      throw ArgumentError("PartitionSpec: leaf beta length mismatch");
    if (!ids.insert(leaf.leaf_id).second)
      throw ArgumentError("PartitionSpec: duplicate leaf id");
  }
}

int PartitionSpec::leaf_pos_of(const Eigen::VectorXd& x) const {
  int at = 0;
  while (nodes_[static_cast<std::size_t>(at)].feature >= 0) {
    const Node& node = nodes_[static_cast<std::size_t>(at)];
    at = x(node.feature) < node.threshold ? node.left : node.right;
  }
  return nodes_[static_cast<std::size_t>(at)].leaf_pos;
}

int PartitionSpec::leaf_of(const Eigen::VectorXd& x) const {
  if (x.size() != n_features_)
    throw ArgumentError("leaf_of: point dimension mismatch");
  for (int j = 0; j < x.size(); ++j)
    if (!(x(j) >= 0.0 && x(j) <= 1.0))
      throw ArgumentError("leaf_of: point outside the unit cube");
  return leaves_[static_cast<std::size_t>(leaf_pos_of(x))].leaf_id;
}

int PartitionSpec::descend(const Eigen::VectorXd& x) const {
  if (x.size() != n_features_)
    throw ArgumentError("descend: point dimension mismatch");
  return leaves_[static_cast<std::size_t>(leaf_pos_of(x))].leaf_id;
}

const LeafSpec& PartitionSpec::leaf_by_id(int leaf_id) const {
  for (const auto& leaf : leaves_)
    if (leaf.leaf_id == leaf_id) return leaf;
  throw ArgumentError("leaf_by_id: unknown leaf id " + std::to_string(leaf_id));
}

std::vector<Box> PartitionSpec::leaf_regions() const {
  std::vector<Box> regions(leaves_.size());
  Box root{Eigen::VectorXd::Zero(n_features_), Eigen::VectorXd::Ones(n_features_)};
  // Recursive walk carrying the box narrowed by each split.
  const auto walk = [&](auto&& self, int at, Box box) -> void {
    const Node& node = nodes_[static_cast<std::size_t>(at)];
    if (node.feature < 0) {
      regions[static_cast<std::size_t>(node.leaf_pos)] = std::move(box);
      return;
    }
    Box left = box;
    left.hi(node.feature) = node.threshold;
    Box right = std::move(box);
    right.lo(node.feature) = node.threshold;
    self(self, node.left, std::move(left));
    self(self, node.right, std::move(right));
  };
  walk(walk, 0, std::move(root));
  return regions;
}

nlohmann::json PartitionSpec::to_json() const {
  const auto encode = [&](auto&& self, int at) -> nlohmann::json {
    const Node& node = nodes_[static_cast<std::size_t>(at)];
    if (node.feature < 0) {
      const LeafSpec& leaf = leaves_[static_cast<std::size_t>(node.leaf_pos)];
      std::vector<double> beta(leaf.beta.data(), leaf.beta.data() + leaf.beta.size());
      return {{"leaf_id", leaf.leaf_id}, {"beta", beta}};
    }
    return {{"feature", node.feature},
            {"threshold", node.threshold},
            {"left", self(self, node.left)},
            {"right", self(self, node.right)}};
  };
  return {{"n_features", n_features_}, {"splits", encode(encode, 0)}};
}

PartitionSpec PartitionSpec::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n_features") || !j.contains("splits"))
    throw DataError("partition JSON: expected {n_features, splits}");
  const int n_features = j.at("n_features").get<int>();
  std::vector<Node> nodes;
  std::vector<LeafSpec> leaves;
  const auto decode = [&](auto&& self, const nlohmann::json& nj) -> int {
    const int at = static_cast<int>(nodes.size());
    nodes.emplace_back();
    if (nj.contains("leaf_id")) {
      LeafSpec leaf;
      leaf.leaf_id = nj.at("leaf_id").get<int>();
      const auto beta = nj.at("beta").get<std::vector<double>>();
      leaf.beta = Eigen::Map<const Eigen::VectorXd>(beta.data(),
                                                    static_cast<Eigen::Index>(beta.size()));
      nodes[static_cast<std::size_t>(at)].leaf_pos = static_cast<int>(leaves.size());
      leaves.push_back(std::move(leaf));
    } else {
      nodes[static_cast<std::size_t>(at)].feature = nj.at("feature").get<int>();
      nodes[static_cast<std::size_t>(at)].threshold = nj.at("threshold").get<double>();
      const int left = self(self, nj.at("left"));
      nodes[static_cast<std::size_t>(at)].left = left;
      const int right = self(self, nj.at("right"));
      nodes[static_cast<std::size_t>(at)].right = right;
    }
    return at;
  };
  try {
    decode(decode, j.at("splits"));
    return PartitionSpec(n_features, std::move(nodes), std::move(leaves));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("partition JSON: ") + e.what());
  }
}

namespace {

Eigen::VectorXd beta_from(int n, std::initializer_list<int> active) {
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(n);
  for (int j : active) beta(j) = 1.0;
  return beta;
}

}  // namespace

PartitionSpec default_partition_8() {
  using Node = PartitionSpec::Node;
  // Tree: f0, then f1 on both sides, then f2 on the outer branches.
  // Leaves left to right, ids 0..5.
  std::vector<Node> nodes(11);
  nodes[0] = {0, 0.5, 1, 2, -1};
  nodes[1] = {1, 0.5, 3, 4, -1};    // x0 < 0.5
  nodes[2] = {1, 0.5, 5, 6, -1};    // x0 >= 0.5
  nodes[3] = {2, 0.5, 7, 8, -1};    // x0 < 0.5, x1 < 0.5
  nodes[4] = {-1, 0.0, -1, -1, 2};  // leaf 2
  nodes[5] = {-1, 0.0, -1, -1, 3};  // leaf 3
  nodes[6] = {2, 0.5, 9, 10, -1};   // x0 >= 0.5, x1 >= 0.5
  nodes[7] = {-1, 0.0, -1, -1, 0};  // leaf 0
  nodes[8] = {-1, 0.0, -1, -1, 1};  // leaf 1
  nodes[9] = {-1, 0.0, -1, -1, 4};  // leaf 4
  nodes[10] = {-1, 0.0, -1, -1, 5};  // leaf 5

  std::vector<LeafSpec> leaves{
      {0, beta_from(8, {0, 1, 2})},
      {1, beta_from(8, {1, 2, 3})},
      {2, beta_from(8, {0, 2, 4})},
      {3, beta_from(8, {3, 4, 5})},
      {4, beta_from(8, {4, 5, 6})},
      {5, beta_from(8, {5, 6, 7})},
  };
  return PartitionSpec(8, std::move(nodes), std::move(leaves));
}

PartitionSpec default_partition_4() {
  using Node = PartitionSpec::Node;
  // Quadrants of (x0, x1): leaf 0 = (low, low), 1 = (low, high),
  // 2 = (high, low), 3 = (high, high).
  std::vector<Node> nodes(7);
  nodes[0] = {0, 0.5, 1, 2, -1};
  nodes[1] = {1, 0.5, 3, 4, -1};
  nodes[2] = {1, 0.5, 5, 6, -1};
  nodes[3] = {-1, 0.0, -1, -1, 0};
  nodes[4] = {-1, 0.0, -1, -1, 1};
  nodes[5] = {-1, 0.0, -1, -1, 2};
  nodes[6] = {-1, 0.0, -1, -1, 3};

  std::vector<LeafSpec> leaves{
      {0, beta_from(4, {0, 1})},
      {1, beta_from(4, {2, 3})},
      {2, beta_from(4, {1, 3})},
      {3, beta_from(4, {0, 2})},
  };
  return PartitionSpec(4, std::move(nodes), std::move(leaves));
}

int assign_label(const Eigen::VectorXd& x, const Eigen::VectorXd& beta) {
  if (x.size() != beta.size())
    throw ArgumentError("assign_label: dimension mismatch");
  const double score = (x.array() - 0.5).matrix().dot(beta);
  return score >= 0.0 ? 1 : 0;
}

int TabularDataset::n_classes() const {
  return y.size() > 0 ? y.maxCoeff() + 1 : 0;
}

void compute_feature_stats(TabularDataset& data) {
  const auto n = data.X.rows();
  const auto p = data.X.cols();
  data.feature_means = data.X.colwise().mean();
  data.feature_stds.resize(p);
  data.constant_features.clear();
  for (Eigen::Index j = 0; j < p; ++j) {
    const double var =
        n > 1 ? (data.X.col(j).array() - data.feature_means(j)).square().sum() /
                    static_cast<double>(n - 1)
              : 0.0;
    double sd = std::sqrt(var);
    if (sd <= 0.0) {
      sd = 1.0;
      data.constant_features.push_back(static_cast<int>(j));
    }
    data.feature_stds(j) = sd;
  }
}

TabularDataset generate_dataset(const PartitionSpec& spec, int n_samples,
                                std::uint64_t seed) {
  if (n_samples < 1) throw ArgumentError("generate_dataset: n_samples must be >= 1");
  const int n_feat = spec.n_features();
  Rng rng(seed);

  TabularDataset data;
  data.X.resize(n_samples, n_feat);
  data.y.resize(n_samples);
  data.leaf_ids.resize(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i)
    for (int j = 0; j < n_feat; ++j) data.X(i, j) = rng.uniform();

  Eigen::VectorXd x(n_feat);
  for (int i = 0; i < n_samples; ++i) {
    x = data.X.row(i);
    const int leaf = spec.leaf_of(x);
    data.leaf_ids[static_cast<std::size_t>(i)] = leaf;
    data.y(i) = assign_label(x, spec.leaf_by_id(leaf).beta);
  }

  data.feature_names.reserve(static_cast<std::size_t>(n_feat));
  for (int j = 0; j < n_feat; ++j)
    data.feature_names.push_back("x" + std::to_string(j));
  compute_feature_stats(data);
  return data;
}

}  // namespace limeaudit
