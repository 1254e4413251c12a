#include "limeaudit/lime.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "limeaudit/errors.hpp"
#include "limeaudit/lasso.hpp"

namespace limeaudit {

FeatureStats stats_of(const TabularDataset& data) {
  return {data.feature_means, data.feature_stds, data.feature_names};
}

nlohmann::json Explanation::to_json() const {
  nlohmann::json selected_json = nlohmann::json::array();
  for (const SelectedFeature& f : selected)
    selected_json.push_back({{"feature", f.feature},
                             {"label", f.label},
                             {"coefficient", f.coefficient}});
  return {{"target_id", target_id},
          {"selected", selected_json},
          {"k", k},
          {"n_samples", n_samples},
          {"proximity_scale", proximity_scale},
          {"kernel_width", kernel_width},
          {"seed", seed}};
}

Eigen::MatrixXd perturb_tabular(const Eigen::VectorXd& x,
                                const FeatureStats& stats,
                                const TabularExplainerConfig& cfg, Rng& rng) {
  if (stats.stds.size() != x.size() || stats.means.size() != x.size())
    throw ArgumentError("perturb_tabular: stats do not match the point");
  if (cfg.proximity_scale <= 0.0)
    throw ArgumentError("perturb_tabular: proximity_scale must be > 0");
  if (cfg.n_samples < 1) throw ArgumentError("perturb_tabular: n_samples < 1");

  const auto n_feat = x.size();
  Eigen::MatrixXd samples(cfg.n_samples, n_feat);
  samples.row(0) = x.transpose();
  for (int i = 1; i < cfg.n_samples; ++i)
    for (Eigen::Index j = 0; j < n_feat; ++j)
      samples(i, j) = x(j) + rng.gauss() * cfg.proximity_scale * stats.stds(j);
  return samples;
}

Eigen::MatrixXd perturb_text(int n_tokens, int n_samples, Rng& rng) {
  if (n_tokens < 2)
    throw ArgumentError("perturb_text: need at least 2 distinct feature words");
  if (n_samples < 1) throw ArgumentError("perturb_text: n_samples < 1");
  Eigen::MatrixXd masks = Eigen::MatrixXd::Ones(n_samples, n_tokens);
  for (int i = 1; i < n_samples; ++i) {
    const auto u = static_cast<int>(
        1 + rng.below(static_cast<std::uint64_t>(n_tokens - 1)));
    for (int removed : rng.sample_without_replacement(n_tokens, u))
      masks(i, removed) = 0.0;
  }
  return masks;
}

double kernel_weight(double distance, double width) {
  if (width <= 0.0) throw ArgumentError("kernel_weight: width must be > 0");
  return std::exp(-(distance * distance) / (width * width));
}

namespace {

void check_explained_probability(double p) {
  if (!std::isfinite(p))
    throw ModelError("black box returned a non-finite probability");
}

std::vector<SelectedFeature> selection_to_features(
    const KLassoSelection& sel, const std::vector<std::string>& labels) {
  std::vector<SelectedFeature> out;
  out.reserve(sel.selected.size());
  for (std::size_t i = 0; i < sel.selected.size(); ++i) {
    const int feature = sel.selected[i];
    out.push_back({feature, labels[static_cast<std::size_t>(feature)],
                   sel.refit_coefficients(static_cast<Eigen::Index>(i))});
  }
  return out;
}

}  // namespace

Explanation explain_tabular(const BlackBox& model, const Eigen::VectorXd& x,
                            const TabularExplainerConfig& cfg,
                            const FeatureStats& stats,
                            const std::string& target_id) {
  if (model.n_features() != x.size())
    throw ArgumentError("explain_tabular: point does not match the model");
  if (cfg.k < 1) throw ArgumentError("explain_tabular: K must be >= 1");
  if (cfg.n_samples < cfg.k + 2)
    throw ArgumentError("explain_tabular: n_samples must be >= K + 2");
  if (cfg.target_class < 0 || cfg.target_class >= model.n_classes())
    throw ArgumentError("explain_tabular: target_class out of range");

  const auto n_feat = x.size();
  const double width =
      cfg.kernel_width > 0.0
          ? cfg.kernel_width
          : 0.75 * std::sqrt(static_cast<double>(n_feat));

  Rng rng(cfg.seed);
  const Eigen::MatrixXd samples = perturb_tabular(x, stats, cfg, rng);

  Eigen::VectorXd target(cfg.n_samples);
  for (int i = 0; i < cfg.n_samples; ++i) {
    const double p =
        model.predict_proba(samples.row(i).transpose())(cfg.target_class);
    check_explained_probability(p);
    target(i) = p;
  }

  // Standardize by the training stats; distances and the surrogate both
  // live in this space.
  Eigen::MatrixXd z = samples;
  z.rowwise() -= stats.means.transpose();
  z.array().rowwise() /= stats.stds.transpose().array();

  Eigen::VectorXd weights(cfg.n_samples);
  if (cfg.constant_kernel) {
    weights.setOnes();
  } else {
    for (int i = 0; i < cfg.n_samples; ++i)
      weights(i) = kernel_weight((z.row(i) - z.row(0)).norm(), width);
  }

  const KLassoSelection sel = k_lasso_select(z, target, weights, cfg.k);

  Explanation exp;
  exp.target_id = target_id;
  exp.selected = selection_to_features(sel, stats.names);
  exp.k = cfg.k;
  exp.n_samples = cfg.n_samples;
  exp.proximity_scale = cfg.proximity_scale;
  exp.kernel_width = width;
  exp.seed = cfg.seed;
  return exp;
}

TextDocument make_text_document(const std::vector<std::string>& raw_tokens,
                                const TfidfVocabulary& vocab,
                                const std::string& id) {
  std::map<std::string, double> counts;
  for (const auto& token : raw_tokens)
    if (vocab.index_of(token) >= 0) counts[token] += 1.0;
  TextDocument doc;
  doc.id = id;
  for (const auto& [token, count] : counts) {
    doc.tokens.push_back(token);
    doc.counts.push_back(count);
  }
  return doc;
}

Explanation explain_text(const BlackBox& model, const TextDocument& doc,
                         const TextExplainerConfig& cfg,
                         const TfidfVocabulary& vocab) {
  const auto m = static_cast<int>(doc.tokens.size());
  if (m < 2)
    throw ArgumentError("explain_text: need at least 2 distinct feature words");
  if (doc.counts.size() != doc.tokens.size())
    throw ArgumentError("explain_text: token counts missing");
  if (cfg.k < 1) throw ArgumentError("explain_text: K must be >= 1");
  if (cfg.n_samples < cfg.k + 2)
    throw ArgumentError("explain_text: n_samples must be >= K + 2");
  if (cfg.target_class < 0 || cfg.target_class >= model.n_classes())
    throw ArgumentError("explain_text: target_class out of range");

  std::vector<int> vocab_index(static_cast<std::size_t>(m));
  for (int t = 0; t < m; ++t) {
    const int idx = vocab.index_of(doc.tokens[static_cast<std::size_t>(t)]);
    if (idx < 0)
      throw ArgumentError("explain_text: token '" +
                          doc.tokens[static_cast<std::size_t>(t)] +
                          "' is not in the vocabulary");
    vocab_index[static_cast<std::size_t>(t)] = idx;
  }

  Rng rng(cfg.seed);
  const Eigen::MatrixXd masks = perturb_text(m, cfg.n_samples, rng);

  // Each mask maps to a tf-idf vector over the surviving counts.
  Eigen::VectorXd target(cfg.n_samples);
  SparseVec weights_vec;
  for (int i = 0; i < cfg.n_samples; ++i) {
    weights_vec.clear();
    double norm_sq = 0.0;
    for (int t = 0; t < m; ++t) {
      if (masks(i, t) == 0.0) continue;
      const int idx = vocab_index[static_cast<std::size_t>(t)];
      const double w = doc.counts[static_cast<std::size_t>(t)] * vocab.idf(idx);
      weights_vec.emplace_back(idx, w);
      norm_sq += w * w;
    }
    if (norm_sq > 0.0) {
      const double inv = 1.0 / std::sqrt(norm_sq);
      for (auto& [idx, w] : weights_vec) w *= inv;
    }
    std::sort(weights_vec.begin(), weights_vec.end());
    const double p = model.predict_proba_sparse(weights_vec)(cfg.target_class);
    check_explained_probability(p);
    target(i) = p;
  }

  // Cosine distance of each mask to the all-ones row.
  Eigen::VectorXd weights(cfg.n_samples);
  for (int i = 0; i < cfg.n_samples; ++i) {
    const double kept = masks.row(i).sum();
    const double cosine =
        kept > 0.0 ? std::sqrt(kept / static_cast<double>(m)) : 0.0;
    weights(i) = kernel_weight(1.0 - cosine, cfg.kernel_width);
  }

  const KLassoSelection sel = k_lasso_select(masks, target, weights, cfg.k);

  Explanation exp;
  exp.target_id = doc.id;
  exp.selected = selection_to_features(sel, doc.tokens);
  exp.k = cfg.k;
  exp.n_samples = cfg.n_samples;
  exp.proximity_scale = 1.0;
  exp.kernel_width = cfg.kernel_width;
  exp.seed = cfg.seed;
  return exp;
}

}  // namespace limeaudit
