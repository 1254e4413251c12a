#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "limeaudit/synthdata.hpp"

namespace limeaudit {

enum class ModelKind {
  ground_truth,
  cart,
  random_forest,
  gradient_boosting,
  multinomial_nb,
};

const char* to_string(ModelKind kind);

/// Sparse feature vector: (index, value) pairs with strictly increasing indices.
using SparseVec = std::vector<std::pair<int, double>>;

/// Anything exposing class-probability prediction. Outputs are valid
/// distributions: length n_classes, entries in [0,1], summing to 1 within
/// 1e-9. Fitted models are immutable and safe for concurrent prediction.
class BlackBox {
 public:
  virtual ~BlackBox() = default;

  Eigen::VectorXd predict_proba(const Eigen::VectorXd& x) const;
  Eigen::VectorXd predict_proba_sparse(const SparseVec& x) const;

  virtual int n_features() const = 0;
  virtual int n_classes() const = 0;
  virtual ModelKind kind() const = 0;
  virtual nlohmann::json to_json() const = 0;

 protected:
  virtual Eigen::VectorXd do_predict(const Eigen::VectorXd& x) const = 0;
  /// Sparse fast path; the default densifies.
  virtual Eigen::VectorXd do_predict_sparse(const SparseVec& x) const;
};

/// One node of a binary tree. Leaves (feature < 0) carry a value vector:
/// a class distribution for classifiers, a single score for regression.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  Eigen::VectorXd value;

  bool is_leaf() const { return feature < 0; }
};

/// Exact oracle for a tree partition: predict_proba is the one-hot of the
/// local labeling rule. Training-free.
class GroundTruthModel final : public BlackBox {
 public:
  explicit GroundTruthModel(PartitionSpec spec);
  int n_features() const override { return spec_.n_features(); }
  int n_classes() const override { return 2; }
  ModelKind kind() const override { return ModelKind::ground_truth; }
  nlohmann::json to_json() const override;
  const PartitionSpec& partition() const { return spec_; }

 protected:
  Eigen::VectorXd do_predict(const Eigen::VectorXd& x) const override;

 private:
  PartitionSpec spec_;
};

class CartModel final : public BlackBox {
 public:
  CartModel(std::vector<TreeNode> nodes, int n_features, int n_classes);
  int n_features() const override { return n_features_; }
  int n_classes() const override { return n_classes_; }
  ModelKind kind() const override { return ModelKind::cart; }
  nlohmann::json to_json() const override;
  const std::vector<TreeNode>& nodes() const { return nodes_; }

 protected:
  Eigen::VectorXd do_predict(const Eigen::VectorXd& x) const override;

 private:
  std::vector<TreeNode> nodes_;
  int n_features_ = 0;
  int n_classes_ = 0;
};

class RandomForestModel final : public BlackBox {
 public:
  RandomForestModel(std::vector<CartModel> trees, int n_features, int n_classes);
  int n_features() const override { return n_features_; }
  int n_classes() const override { return n_classes_; }
  ModelKind kind() const override { return ModelKind::random_forest; }
  nlohmann::json to_json() const override;
  const std::vector<CartModel>& trees() const { return trees_; }

 protected:
  Eigen::VectorXd do_predict(const Eigen::VectorXd& x) const override;

 private:
  std::vector<CartModel> trees_;
  int n_features_ = 0;
  int n_classes_ = 0;
};

class GradientBoostingModel final : public BlackBox {
 public:
  GradientBoostingModel(std::vector<std::vector<TreeNode>> trees,
                        double base_score, double learning_rate,
                        int n_features);
  int n_features() const override { return n_features_; }
  int n_classes() const override { return 2; }
  ModelKind kind() const override { return ModelKind::gradient_boosting; }
  nlohmann::json to_json() const override;
  /// Additive score before the logistic link.
  double decision_score(const Eigen::VectorXd& x) const;

 protected:
  Eigen::VectorXd do_predict(const Eigen::VectorXd& x) const override;

 private:
  std::vector<std::vector<TreeNode>> trees_;
  double base_score_ = 0.0;
  double learning_rate_ = 0.1;
  int n_features_ = 0;
};

class MultinomialNbModel final : public BlackBox {
 public:
  MultinomialNbModel(Eigen::VectorXd class_log_prior,
                     Eigen::MatrixXd feature_log_prob);
  int n_features() const override {
    return static_cast<int>(feature_log_prob_.cols());
  }
  int n_classes() const override {
    return static_cast<int>(class_log_prior_.size());
  }
  ModelKind kind() const override { return ModelKind::multinomial_nb; }
  nlohmann::json to_json() const override;

 protected:
  Eigen::VectorXd do_predict(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd do_predict_sparse(const SparseVec& x) const override;

 private:
  Eigen::VectorXd scores_to_proba(Eigen::VectorXd scores) const;

  Eigen::VectorXd class_log_prior_;   // length C
  Eigen::MatrixXd feature_log_prob_;  // C x V
};

GroundTruthModel ground_truth_classifier(const PartitionSpec& spec);

/// Greedy Gini CART. Split candidates are midpoints between consecutive
/// sorted distinct values; ties in gain go to the lower feature index, then
/// the lower threshold. Deterministic given the data.
CartModel fit_cart(const TabularDataset& data, int max_depth, int min_leaf);

/// Bagged CART trees with a random feature subset per split. Tree t draws
/// its randomness from substream(seed, t), so results are independent of
/// any scheduling order. bootstrap=false trains every tree on the full
/// sample (with n_trees=1 and max_features=N this reduces to fit_cart).
RandomForestModel fit_random_forest(const TabularDataset& data, int n_trees,
                                    int max_features, int max_depth,
                                    int min_leaf, std::uint64_t seed,
                                    bool bootstrap = true);

/// Stagewise regression trees on the negative gradient of the logistic
/// loss, Newton leaf values, logistic link on the summed score. Training is
/// deterministic; the seed is recorded for interface uniformity only.
/// stage_loss, when given, receives the training log-loss after each stage.
GradientBoostingModel fit_gradient_boosting(const TabularDataset& data,
                                            int n_trees, int max_depth,
                                            double learning_rate,
                                            std::uint64_t seed,
                                            std::vector<double>* stage_loss = nullptr);

/// Multinomial naive Bayes with additive smoothing over summed term
/// weights. Rows are documents as sparse term-weight vectors.
MultinomialNbModel fit_multinomial_nb(const std::vector<SparseVec>& term_matrix,
                                      const std::vector<int>& labels,
                                      int vocab_size, double alpha);
MultinomialNbModel fit_multinomial_nb(const Eigen::MatrixXd& term_matrix,
                                      const Eigen::VectorXi& labels,
                                      double alpha);

std::shared_ptr<BlackBox> model_from_json(const nlohmann::json& j);

/// Fraction of rows whose argmax class matches y.
double accuracy(const BlackBox& model, const Eigen::MatrixXd& X,
                const Eigen::VectorXi& y);

}  // namespace limeaudit
