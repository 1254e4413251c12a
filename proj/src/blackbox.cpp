#include "limeaudit/blackbox.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <nlohmann/json.hpp>

#include "limeaudit/errors.hpp"
#include "limeaudit/rng.hpp"

namespace limeaudit {

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::ground_truth: return "ground_truth";
    case ModelKind::cart: return "cart";
    case ModelKind::random_forest: return "random_forest";
    case ModelKind::gradient_boosting: return "gradient_boosting";
    case ModelKind::multinomial_nb: return "multinomial_nb";
  }
  return "unknown";
}

Eigen::VectorXd BlackBox::predict_proba(const Eigen::VectorXd& x) const {
  if (x.size() != n_features())
    throw ArgumentError("predict_proba: expected " + std::to_string(n_features()) +
                        " features, got " + std::to_string(x.size()));
  return do_predict(x);
}

Eigen::VectorXd BlackBox::predict_proba_sparse(const SparseVec& x) const {
  for (const auto& [idx, value] : x) {
    (void)value;
    if (idx < 0 || idx >= n_features())
      throw ArgumentError("predict_proba_sparse: index out of range");
  }
  return do_predict_sparse(x);
}

Eigen::VectorXd BlackBox::do_predict_sparse(const SparseVec& x) const {
  Eigen::VectorXd dense = Eigen::VectorXd::Zero(n_features());
  for (const auto& [idx, value] : x) dense(idx) = value;
  return do_predict(dense);
}

// ---------------------------------------------------------------------------
// ground truth

GroundTruthModel::GroundTruthModel(PartitionSpec spec) : spec_(std::move(spec)) {}

Eigen::VectorXd GroundTruthModel::do_predict(const Eigen::VectorXd& x) const {
  const LeafSpec& leaf = spec_.leaf_by_id(spec_.descend(x));
  const int label = assign_label(x, leaf.beta);
  Eigen::VectorXd proba(2);
  proba << 1.0 - label, label;
  return proba;
}

nlohmann::json GroundTruthModel::to_json() const {
  return {{"format", "limeaudit-model"},
          {"version", 1},
          {"kind", "ground_truth"},
          {"partition", spec_.to_json()}};
}

GroundTruthModel ground_truth_classifier(const PartitionSpec& spec) {
  return GroundTruthModel(spec);
}

// ---------------------------------------------------------------------------
// trees

namespace {

int descend_tree(const std::vector<TreeNode>& nodes, const Eigen::VectorXd& x) {
  int at = 0;
  while (!nodes[static_cast<std::size_t>(at)].is_leaf()) {
    const TreeNode& node = nodes[static_cast<std::size_t>(at)];
    at = x(node.feature) < node.threshold ? node.left : node.right;
  }
  return at;
}

double gini(const Eigen::VectorXd& counts, double total) {
  if (total <= 0.0) return 0.0;
  return 1.0 - (counts / total).squaredNorm();
}

struct SplitChoice {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double score = 0.0;  // impurity after the split; lower is better
};

// Shared split search. Candidate features must be in ascending order so
// exact score ties resolve to the lower feature, then lower threshold.
// stat_for(i) returns the per-sample statistics accumulated on the left
// side; score_of(left, right, n_left, n_right) evaluates a candidate.
template <typename Stat, typename StatFor, typename ScoreOf>
SplitChoice best_split(const Eigen::MatrixXd& X, const std::vector<int>& rows,
                       const std::vector<int>& features, int min_leaf,
                       const Stat& zero, const StatFor& stat_for,
                       const ScoreOf& score_of) {
  SplitChoice best;
  const auto n = static_cast<int>(rows.size());
  std::vector<int> order(rows.size());
  for (int f : features) {
    order = rows;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double va = X(a, f);
      const double vb = X(b, f);
      if (va != vb) return va < vb;
      return a < b;
    });
    Stat total = zero;
    for (int i : order) stat_for(i, total);
    Stat left = zero;
    int n_left = 0;
    for (int at = 0; at < n - 1; ++at) {
      stat_for(order[static_cast<std::size_t>(at)], left);
      ++n_left;
      const double v = X(order[static_cast<std::size_t>(at)], f);
      const double v_next = X(order[static_cast<std::size_t>(at + 1)], f);
      if (v == v_next) continue;  // only between distinct values
      if (n_left < min_leaf || n - n_left < min_leaf) continue;
      Stat right = total;
      right -= left;
      const double score = score_of(left, right, n_left, n - n_left);
      if (!best.found || score < best.score) {
        best.found = true;
        best.feature = f;
        best.threshold = 0.5 * (v + v_next);
        best.score = score;
      }
    }
  }
  return best;
}

struct ClassCounts {
  Eigen::VectorXd counts;
  ClassCounts& operator-=(const ClassCounts& other) {
    counts -= other.counts;
    return *this;
  }
};

struct CartBuilder {
  const Eigen::MatrixXd& X;
  const Eigen::VectorXi& y;
  int n_classes;
  int max_depth;
  int min_leaf;
  int max_features;  // 0 means all
  Rng* rng = nullptr;

  std::vector<TreeNode> nodes;

  std::vector<int> candidate_features() {
    const auto p = static_cast<int>(X.cols());
    if (max_features <= 0 || max_features >= p || rng == nullptr) {
      std::vector<int> all(static_cast<std::size_t>(p));
      std::iota(all.begin(), all.end(), 0);
      return all;
    }
    auto subset = rng->sample_without_replacement(p, max_features);
    std::sort(subset.begin(), subset.end());
    return subset;
  }

  int build(const std::vector<int>& rows, int depth) {
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(n_classes);
    for (int i : rows) counts(y(i)) += 1.0;
    const double total = static_cast<double>(rows.size());
    const double impurity = gini(counts, total);

    const int at = static_cast<int>(nodes.size());
    nodes.emplace_back();
    const bool can_split = depth < max_depth && impurity > 0.0 &&
                           static_cast<int>(rows.size()) >= 2 * min_leaf;
    if (can_split) {
      const ClassCounts zero{Eigen::VectorXd::Zero(n_classes)};
      const auto stat_for = [&](int i, ClassCounts& s) { s.counts(y(i)) += 1.0; };
      const auto score_of = [&](const ClassCounts& l, const ClassCounts& r,
                                int nl, int nr) {
        return (nl * gini(l.counts, nl) + nr * gini(r.counts, nr)) / total;
      };
      const SplitChoice split = best_split(X, rows, candidate_features(),
                                           min_leaf, zero, stat_for, score_of);
      if (split.found && split.score < impurity) {
        std::vector<int> left_rows;
        std::vector<int> right_rows;
        for (int i : rows) {
          if (X(i, split.feature) < split.threshold)
            left_rows.push_back(i);
          else
            right_rows.push_back(i);
        }
        nodes[static_cast<std::size_t>(at)].feature = split.feature;
        nodes[static_cast<std::size_t>(at)].threshold = split.threshold;
        const int left = build(left_rows, depth + 1);
        nodes[static_cast<std::size_t>(at)].left = left;
        const int right = build(right_rows, depth + 1);
        nodes[static_cast<std::size_t>(at)].right = right;
        return at;
      }
    }
    nodes[static_cast<std::size_t>(at)].value = counts / total;
    return at;
  }
};

struct RegressionStat {
  double sum = 0.0;
  double sum_sq = 0.0;
  RegressionStat& operator-=(const RegressionStat& other) {
    sum -= other.sum;
    sum_sq -= other.sum_sq;
    return *this;
  }
};

// Squared-error regression tree; leaf values are Newton steps
// sum(gradient) / sum(hessian) for the logistic loss.
struct RegressionTreeBuilder {
  const Eigen::MatrixXd& X;
  const Eigen::VectorXd& residual;
  const Eigen::VectorXd& hessian;
  int max_depth;
  int min_leaf;
  double max_leaf_value;

  std::vector<TreeNode> nodes;

  int build(const std::vector<int>& rows, int depth) {
    const int at = static_cast<int>(nodes.size());
    nodes.emplace_back();
    const auto n = static_cast<double>(rows.size());

    if (depth < max_depth && static_cast<int>(rows.size()) >= 2 * min_leaf) {
      const auto p = static_cast<int>(X.cols());
      std::vector<int> all_features(static_cast<std::size_t>(p));
      std::iota(all_features.begin(), all_features.end(), 0);
      const RegressionStat zero{};
      const auto stat_for = [&](int i, RegressionStat& s) {
        s.sum += residual(i);
        s.sum_sq += residual(i) * residual(i);
      };
      const auto score_of = [&](const RegressionStat& l, const RegressionStat& r,
                                int nl, int nr) {
        const double sse_l = l.sum_sq - l.sum * l.sum / nl;
        const double sse_r = r.sum_sq - r.sum * r.sum / nr;
        return sse_l + sse_r;
      };
      const SplitChoice split = best_split(X, rows, all_features, min_leaf,
                                           zero, stat_for, score_of);
      double sum = 0.0;
      double sum_sq = 0.0;
      for (int i : rows) {
        sum += residual(i);
        sum_sq += residual(i) * residual(i);
      }
      const double sse_parent = sum_sq - sum * sum / n;
      if (split.found && split.score < sse_parent) {
        std::vector<int> left_rows;
        std::vector<int> right_rows;
        for (int i : rows) {
          if (X(i, split.feature) < split.threshold)
            left_rows.push_back(i);
          else
            right_rows.push_back(i);
        }
        nodes[static_cast<std::size_t>(at)].feature = split.feature;
        nodes[static_cast<std::size_t>(at)].threshold = split.threshold;
        const int left = build(left_rows, depth + 1);
        nodes[static_cast<std::size_t>(at)].left = left;
        const int right = build(right_rows, depth + 1);
        nodes[static_cast<std::size_t>(at)].right = right;
        return at;
      }
    }
    double grad_sum = 0.0;
    double hess_sum = 0.0;
    for (int i : rows) {
      grad_sum += residual(i);
      hess_sum += hessian(i);
    }
    double value = grad_sum / std::max(hess_sum, 1e-12);
    value = std::clamp(value, -max_leaf_value, max_leaf_value);
    Eigen::VectorXd v(1);
    v << value;
    nodes[static_cast<std::size_t>(at)].value = v;
    return at;
  }
};

void check_training_data(const TabularDataset& data) {
  if (data.X.rows() == 0 || data.X.cols() == 0)
    throw ArgumentError("fit: empty training data");
  if (data.y.size() != data.X.rows())
    throw ArgumentError("fit: labels and rows disagree");
  if (data.y.minCoeff() < 0) throw ArgumentError("fit: negative label");
}

std::vector<int> all_rows(const TabularDataset& data) {
  std::vector<int> rows(static_cast<std::size_t>(data.X.rows()));
  std::iota(rows.begin(), rows.end(), 0);
  return rows;
}

}  // namespace

// ---------------------------------------------------------------------------
// CART

CartModel::CartModel(std::vector<TreeNode> nodes, int n_features, int n_classes)
    : nodes_(std::move(nodes)), n_features_(n_features), n_classes_(n_classes) {}

Eigen::VectorXd CartModel::do_predict(const Eigen::VectorXd& x) const {
  return nodes_[static_cast<std::size_t>(descend_tree(nodes_, x))].value;
}

CartModel fit_cart(const TabularDataset& data, int max_depth, int min_leaf) {
  check_training_data(data);
  if (max_depth < 0 || min_leaf < 1)
    throw ArgumentError("fit_cart: bad depth or leaf size");
  const int n_classes = std::max(2, data.n_classes());
  CartBuilder builder{data.X, data.y, n_classes, max_depth, min_leaf, 0, nullptr, {}};
  builder.build(all_rows(data), 0);
  return CartModel(std::move(builder.nodes), data.n_features(), n_classes);
}

// ---------------------------------------------------------------------------
// random forest

RandomForestModel::RandomForestModel(std::vector<CartModel> trees,
                                     int n_features, int n_classes)
    : trees_(std::move(trees)), n_features_(n_features), n_classes_(n_classes) {
  if (trees_.empty()) throw ArgumentError("RandomForestModel: no trees");
}

Eigen::VectorXd RandomForestModel::do_predict(const Eigen::VectorXd& x) const {
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(n_classes_);
  for (const CartModel& tree : trees_) acc += tree.predict_proba(x);
  return acc / static_cast<double>(trees_.size());
}

RandomForestModel fit_random_forest(const TabularDataset& data, int n_trees,
                                    int max_features, int max_depth,
                                    int min_leaf, std::uint64_t seed,
                                    bool bootstrap) {
  check_training_data(data);
  if (n_trees < 1) throw ArgumentError("fit_random_forest: n_trees must be >= 1");
  if (max_features < 1 || max_features > data.n_features())
    throw ArgumentError("fit_random_forest: max_features out of range");
  const int n_classes = std::max(2, data.n_classes());
  const auto n = static_cast<int>(data.X.rows());

  std::vector<CartModel> trees;
  trees.reserve(static_cast<std::size_t>(n_trees));
  for (int t = 0; t < n_trees; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    std::vector<int> rows;
    if (bootstrap) {
      rows.resize(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i)
        rows[static_cast<std::size_t>(i)] =
            static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    } else {
      rows = all_rows(data);
    }
    CartBuilder builder{data.X, data.y, n_classes, max_depth,
                        min_leaf, max_features, &rng, {}};
    builder.build(rows, 0);
    trees.emplace_back(std::move(builder.nodes), data.n_features(), n_classes);
  }
  return RandomForestModel(std::move(trees), data.n_features(), n_classes);
}

// ---------------------------------------------------------------------------
// gradient boosting

namespace {
double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }
}  // namespace

GradientBoostingModel::GradientBoostingModel(
    std::vector<std::vector<TreeNode>> trees, double base_score,
    double learning_rate, int n_features)
    : trees_(std::move(trees)),
      base_score_(base_score),
      learning_rate_(learning_rate),
      n_features_(n_features) {}

double GradientBoostingModel::decision_score(const Eigen::VectorXd& x) const {
  double score = base_score_;
  for (const auto& tree : trees_)
    score += learning_rate_ *
             tree[static_cast<std::size_t>(descend_tree(tree, x))].value(0);
  return score;
}

Eigen::VectorXd GradientBoostingModel::do_predict(const Eigen::VectorXd& x) const {
  const double p1 = sigmoid(decision_score(x));
  Eigen::VectorXd proba(2);
  proba << 1.0 - p1, p1;
  return proba;
}

GradientBoostingModel fit_gradient_boosting(const TabularDataset& data,
                                            int n_trees, int max_depth,
                                            double learning_rate,
                                            std::uint64_t seed,
                                            std::vector<double>* stage_loss) {
  (void)seed;  // training has no stochastic component
  check_training_data(data);
  if (data.y.maxCoeff() > 1)
    throw ArgumentError("fit_gradient_boosting: binary labels required");
  if (n_trees < 0) throw ArgumentError("fit_gradient_boosting: n_trees < 0");

  const auto n = static_cast<int>(data.X.rows());
  const double pos_rate = std::clamp(
      data.y.cast<double>().mean(), 1e-12, 1.0 - 1e-12);
  const double base = std::log(pos_rate / (1.0 - pos_rate));

  Eigen::VectorXd score = Eigen::VectorXd::Constant(n, base);
  Eigen::VectorXd residual(n);
  Eigen::VectorXd hessian(n);
  const std::vector<int> rows = all_rows(data);

  const auto log_loss = [&]() {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      const double p = std::clamp(sigmoid(score(i)), 1e-15, 1.0 - 1e-15);
      total += data.y(i) == 1 ? -std::log(p) : -std::log(1.0 - p);
    }
    return total / n;
  };

  std::vector<std::vector<TreeNode>> trees;
  trees.reserve(static_cast<std::size_t>(n_trees));
  for (int t = 0; t < n_trees; ++t) {
    for (int i = 0; i < n; ++i) {
      const double p = sigmoid(score(i));
      residual(i) = static_cast<double>(data.y(i)) - p;
      hessian(i) = std::max(p * (1.0 - p), 1e-12);
    }
    RegressionTreeBuilder builder{data.X, residual, hessian,
                                  max_depth, 1, 10.0, {}};
    builder.build(rows, 0);
    for (int i = 0; i < n; ++i) {
      const auto leaf = static_cast<std::size_t>(
          descend_tree(builder.nodes, data.X.row(i).transpose()));
      score(i) += learning_rate * builder.nodes[leaf].value(0);
    }
    trees.push_back(std::move(builder.nodes));
    if (stage_loss != nullptr) stage_loss->push_back(log_loss());
  }
  return GradientBoostingModel(std::move(trees), base, learning_rate,
                               data.n_features());
}

// ---------------------------------------------------------------------------
// multinomial naive Bayes

MultinomialNbModel::MultinomialNbModel(Eigen::VectorXd class_log_prior,
                                       Eigen::MatrixXd feature_log_prob)
    : class_log_prior_(std::move(class_log_prior)),
      feature_log_prob_(std::move(feature_log_prob)) {
  if (class_log_prior_.size() != feature_log_prob_.rows())
    throw ArgumentError("MultinomialNbModel: class dimension mismatch");
}

Eigen::VectorXd MultinomialNbModel::scores_to_proba(Eigen::VectorXd scores) const {
  scores.array() -= scores.maxCoeff();
  Eigen::VectorXd p = scores.array().exp();
  return p / p.sum();
}

Eigen::VectorXd MultinomialNbModel::do_predict(const Eigen::VectorXd& x) const {
  return scores_to_proba(class_log_prior_ + feature_log_prob_ * x);
}

Eigen::VectorXd MultinomialNbModel::do_predict_sparse(const SparseVec& x) const {
  Eigen::VectorXd scores = class_log_prior_;
  for (const auto& [idx, value] : x) scores += value * feature_log_prob_.col(idx);
  return scores_to_proba(std::move(scores));
}

MultinomialNbModel fit_multinomial_nb(const std::vector<SparseVec>& term_matrix,
                                      const std::vector<int>& labels,
                                      int vocab_size, double alpha) {
  if (vocab_size < 1) throw ArgumentError("fit_multinomial_nb: empty vocabulary");
  if (alpha <= 0.0) throw ArgumentError("fit_multinomial_nb: alpha must be > 0");
  if (term_matrix.empty() || term_matrix.size() != labels.size())
    throw ArgumentError("fit_multinomial_nb: documents and labels disagree");
  const int n_classes =
      *std::max_element(labels.begin(), labels.end()) + 1;
  if (n_classes < 2) throw ArgumentError("fit_multinomial_nb: need two classes");

  Eigen::MatrixXd term_totals = Eigen::MatrixXd::Zero(n_classes, vocab_size);
  Eigen::VectorXd class_counts = Eigen::VectorXd::Zero(n_classes);
  for (std::size_t d = 0; d < term_matrix.size(); ++d) {
    const int c = labels[d];
    if (c < 0) throw ArgumentError("fit_multinomial_nb: negative label");
    class_counts(c) += 1.0;
    for (const auto& [idx, value] : term_matrix[d]) {
      if (idx < 0 || idx >= vocab_size)
        throw ArgumentError("fit_multinomial_nb: term index out of range");
      if (value < 0.0)
        throw ArgumentError("fit_multinomial_nb: negative term weight");
      term_totals(c, idx) += value;
    }
  }

  Eigen::VectorXd log_prior(n_classes);
  Eigen::MatrixXd log_prob(n_classes, vocab_size);
  const auto n_docs = static_cast<double>(term_matrix.size());
  for (int c = 0; c < n_classes; ++c) {
    log_prior(c) = std::log(std::max(class_counts(c), 1e-300) / n_docs);
    const double denom = term_totals.row(c).sum() + alpha * vocab_size;
    log_prob.row(c) =
        ((term_totals.row(c).array() + alpha) / denom).log();
  }
  return MultinomialNbModel(std::move(log_prior), std::move(log_prob));
}

MultinomialNbModel fit_multinomial_nb(const Eigen::MatrixXd& term_matrix,
                                      const Eigen::VectorXi& labels,
                                      double alpha) {
  std::vector<SparseVec> rows(static_cast<std::size_t>(term_matrix.rows()));
  for (Eigen::Index i = 0; i < term_matrix.rows(); ++i)
    for (Eigen::Index j = 0; j < term_matrix.cols(); ++j)
      if (term_matrix(i, j) != 0.0)
        rows[static_cast<std::size_t>(i)].emplace_back(static_cast<int>(j),
                                                       term_matrix(i, j));
  std::vector<int> label_vec(labels.data(), labels.data() + labels.size());
  return fit_multinomial_nb(rows, label_vec,
                            static_cast<int>(term_matrix.cols()), alpha);
}

// ---------------------------------------------------------------------------
// serialization

namespace {

nlohmann::json nodes_to_json(const std::vector<TreeNode>& nodes) {
  nlohmann::json arr = nlohmann::json::array();
  for (const TreeNode& node : nodes) {
    if (node.is_leaf()) {
      std::vector<double> value(node.value.data(),
                                node.value.data() + node.value.size());
      arr.push_back({{"value", value}});
    } else {
      arr.push_back({{"feature", node.feature},
                     {"threshold", node.threshold},
                     {"left", node.left},
                     {"right", node.right}});
    }
  }
  return arr;
}

std::vector<TreeNode> nodes_from_json(const nlohmann::json& arr) {
  std::vector<TreeNode> nodes;
  nodes.reserve(arr.size());
  for (const auto& nj : arr) {
    TreeNode node;
    if (nj.contains("value")) {
      const auto value = nj.at("value").get<std::vector<double>>();
      node.value = Eigen::Map<const Eigen::VectorXd>(
          value.data(), static_cast<Eigen::Index>(value.size()));
    } else {
      node.feature = nj.at("feature").get<int>();
      node.threshold = nj.at("threshold").get<double>();
      node.left = nj.at("left").get<int>();
      node.right = nj.at("right").get<int>();
    }
    nodes.push_back(std::move(node));
  }
  return nodes;
}

std::vector<double> to_vec(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

}  // namespace

nlohmann::json CartModel::to_json() const {
  return {{"format", "limeaudit-model"},
          {"version", 1},
          {"kind", "cart"},
          {"n_features", n_features_},
          {"n_classes", n_classes_},
          {"nodes", nodes_to_json(nodes_)}};
}

nlohmann::json RandomForestModel::to_json() const {
  nlohmann::json trees = nlohmann::json::array();
  for (const CartModel& tree : trees_) trees.push_back(nodes_to_json(tree.nodes()));
  return {{"format", "limeaudit-model"},
          {"version", 1},
          {"kind", "random_forest"},
          {"n_features", n_features_},
          {"n_classes", n_classes_},
          {"trees", trees}};
}

nlohmann::json GradientBoostingModel::to_json() const {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& tree : trees_) trees.push_back(nodes_to_json(tree));
  return {{"format", "limeaudit-model"},
          {"version", 1},
          {"kind", "gradient_boosting"},
          {"n_features", n_features_},
          {"base_score", base_score_},
          {"learning_rate", learning_rate_},
          {"trees", trees}};
}

nlohmann::json MultinomialNbModel::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index c = 0; c < feature_log_prob_.rows(); ++c) {
    const Eigen::VectorXd row = feature_log_prob_.row(c);
    rows.push_back(to_vec(row));
  }
  return {{"format", "limeaudit-model"},
          {"version", 1},
          {"kind", "multinomial_nb"},
          {"class_log_prior", to_vec(class_log_prior_)},
          {"feature_log_prob", rows}};
}

std::shared_ptr<BlackBox> model_from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", "") != "limeaudit-model")
      throw DataError("model JSON: missing format tag");
    if (j.value("version", 0) != 1)
      throw DataError("model JSON: unsupported version");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "ground_truth")
      return std::make_shared<GroundTruthModel>(
          PartitionSpec::from_json(j.at("partition")));
    if (kind == "cart")
      return std::make_shared<CartModel>(nodes_from_json(j.at("nodes")),
                                         j.at("n_features").get<int>(),
                                         j.at("n_classes").get<int>());
    if (kind == "random_forest") {
      std::vector<CartModel> trees;
      const int n_features = j.at("n_features").get<int>();
      const int n_classes = j.at("n_classes").get<int>();
      for (const auto& tj : j.at("trees"))
        trees.emplace_back(nodes_from_json(tj), n_features, n_classes);
      return std::make_shared<RandomForestModel>(std::move(trees), n_features,
                                                 n_classes);
    }
    if (kind == "gradient_boosting") {
      std::vector<std::vector<TreeNode>> trees;
      for (const auto& tj : j.at("trees")) trees.push_back(nodes_from_json(tj));
      return std::make_shared<GradientBoostingModel>(
          std::move(trees), j.at("base_score").get<double>(),
          j.at("learning_rate").get<double>(), j.at("n_features").get<int>());
    }
    if (kind == "multinomial_nb") {
      const auto prior = j.at("class_log_prior").get<std::vector<double>>();
      const auto& rows = j.at("feature_log_prob");
      const auto n_classes = static_cast<Eigen::Index>(prior.size());
      const auto vocab = static_cast<Eigen::Index>(rows.at(0).size());
      Eigen::MatrixXd log_prob(n_classes, vocab);
      for (Eigen::Index c = 0; c < n_classes; ++c) {
        const auto row = rows.at(static_cast<std::size_t>(c)).get<std::vector<double>>();
        log_prob.row(c) = Eigen::Map<const Eigen::VectorXd>(
            row.data(), static_cast<Eigen::Index>(row.size()));
      }
      return std::make_shared<MultinomialNbModel>(
          Eigen::Map<const Eigen::VectorXd>(prior.data(), n_classes), log_prob);
    }
    throw DataError("model JSON: unknown kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("model JSON: ") + e.what());
  }
}

double accuracy(const BlackBox& model, const Eigen::MatrixXd& X,
                const Eigen::VectorXi& y) {
  if (X.rows() != y.size()) throw ArgumentError("accuracy: dimension mismatch");
  if (X.rows() == 0) return 0.0;
  int hits = 0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    Eigen::Index argmax = 0;
    model.predict_proba(X.row(i).transpose()).maxCoeff(&argmax);
    if (static_cast<int>(argmax) == y(i)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(X.rows());
}

}  // namespace limeaudit
