#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace limeaudit {

/// One leaf of the partition tree: a region id plus the coefficient vector
/// of its local labeling rule.
struct LeafSpec {
  int leaf_id = 0;
  Eigen::VectorXd beta;  ///< length n_features

  std::vector<int> active_set() const;
};

/// Axis-aligned box, used for leaf regions of the unit cube.
struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  double volume() const;
  Eigen::VectorXd centroid() const;
  bool contains(const Eigen::VectorXd& x) const;
};

/// A binary decision-tree partition of [0,1]^N with one LeafSpec per leaf.
/// Descent rule: x[feature] < threshold goes left, otherwise right, so
/// boundary points land in the right subtree deterministically.
class PartitionSpec {
 public:
  struct Node {
    int feature = -1;  ///< -1 marks a leaf
    double threshold = 0.0;
    int left = -1;   ///< child node index
    int right = -1;  ///< child node index
    int leaf_pos = -1;  ///< index into leaves() when this is a leaf
  };

  PartitionSpec(int n_features, std::vector<Node> nodes,
                std::vector<LeafSpec> leaves);

  int n_features() const { return n_features_; }
  const std::vector<LeafSpec>& leaves() const { return leaves_; }
  const std::vector<Node>& nodes() const { return nodes_; }

  /// Leaf id for a point of the unit cube; throws outside [0,1]^N.
  int leaf_of(const Eigen::VectorXd& x) const;

  /// Unchecked tree descent for arbitrary real input (used by black boxes,
  /// whose perturbed queries may leave the cube).
  int descend(const Eigen::VectorXd& x) const;

  const LeafSpec& leaf_by_id(int leaf_id) const;

  /// Axis bounds of each leaf's region, aligned with leaves().
  std::vector<Box> leaf_regions() const;

  nlohmann::json to_json() const;
  static PartitionSpec from_json(const nlohmann::json& j);

 private:
  int leaf_pos_of(const Eigen::VectorXd& x) const;

  int n_features_ = 0;
  std::vector<Node> nodes_;  ///< node 0 is the root
  std::vector<LeafSpec> leaves_;  ///< left-to-right tree order
};

/// The canonical eight-feature spec: six leaves from splits on features
/// 0-2 at threshold 0.5, three active features per leaf, leaf 5 active on
/// {5,6,7} and leaves 3-4 active away from the split features.
PartitionSpec default_partition_8();

/// The four-feature spec: quadrant leaves on (feature 0, feature 1) at 0.5,
/// two active features per leaf.
PartitionSpec default_partition_4();

/// Local labeling rule on centered coordinates: 1 iff (x - 0.5)' beta >= 0.
int assign_label(const Eigen::VectorXd& x, const Eigen::VectorXd& beta);

struct TabularDataset {
  Eigen::MatrixXd X;  ///< sample by feature
  Eigen::VectorXi y;  ///< labels
  std::vector<std::string> feature_names;
  Eigen::VectorXd feature_means;
  Eigen::VectorXd feature_stds;  ///< > 0; constant features pinned to 1
  std::vector<int> leaf_ids;     ///< per-sample leaf, empty when not applicable
  std::vector<int> constant_features;  ///< features whose std was pinned

  int n_samples() const { return static_cast<int>(X.rows()); }
  int n_features() const { return static_cast<int>(X.cols()); }
  int n_classes() const;
};

/// Compute means/stds/constant flags for an existing matrix (sample std,
/// n-1 denominator; constant columns get std 1 and a warning flag).
void compute_feature_stats(TabularDataset& data);

/// Uniform samples on [0,1]^N labeled by the per-leaf rule of the spec.
/// Byte-identical for equal seeds.
TabularDataset generate_dataset(const PartitionSpec& spec, int n_samples,
                                std::uint64_t seed);

}  // namespace limeaudit
