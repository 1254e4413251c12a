#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "limeaudit/blackbox.hpp"
#include "limeaudit/ingest.hpp"
#include "limeaudit/rng.hpp"

namespace limeaudit {

struct TabularExplainerConfig {
  int n_samples = 5000;
  int k = 3;                     ///< number of surrogate features kept
  double proximity_scale = 1.0;  ///< multiplier on per-feature training std
  double kernel_width = 0.0;     ///< 0 resolves to 0.75 * sqrt(N)
  bool constant_kernel = false;  ///< sensitivity mode: unit weights
  int target_class = 1;          ///< class whose probability is regressed
  std::uint64_t seed = 0;
};

struct TextExplainerConfig {
  int n_samples = 1000;
  int k = 3;
  double kernel_width = 0.25;  ///< on cosine distance between masks
  int target_class = 1;
  std::uint64_t seed = 0;
};

/// Per-feature training statistics the sampler scales by.
struct FeatureStats {
  Eigen::VectorXd means;
  Eigen::VectorXd stds;
  std::vector<std::string> names;
};

FeatureStats stats_of(const TabularDataset& data);

struct SelectedFeature {
  int feature = -1;     ///< column (tabular) or document token position (text)
  std::string label;    ///< feature name or token
  double coefficient = 0.0;
};

/// One LIME trial: the K selected features with surrogate coefficients plus
/// full provenance. Pure function of (model, target, config).
struct Explanation {
  std::string target_id;
  std::vector<SelectedFeature> selected;  ///< at most K, unique features
  int k = 0;
  int n_samples = 0;
  double proximity_scale = 1.0;
  double kernel_width = 0.0;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
};

/// Gaussian cloud around x: row i = x + z_i .* (proximity_scale * std),
/// z_i standard normal per coordinate; row 0 is x itself. Samples are not
/// clipped to [0,1].
Eigen::MatrixXd perturb_tabular(const Eigen::VectorXd& x,
                                const FeatureStats& stats,
                                const TabularExplainerConfig& cfg, Rng& rng);

/// Token-presence masks: row 0 keeps every token; each other row removes
/// u distinct tokens, u uniform on {1, ..., m-1}. Needs m >= 2.
Eigen::MatrixXd perturb_text(int n_tokens, int n_samples, Rng& rng);

/// exp(-distance^2 / width^2), in (0, 1].
double kernel_weight(double distance, double width);

/// Fit the sparse local surrogate at x: perturb, label with the black box's
/// target-class probability, weight by the exponential kernel on Euclidean
/// distance in standardized coordinates, select K features by K-LASSO.
Explanation explain_tabular(const BlackBox& model, const Eigen::VectorXd& x,
                            const TabularExplainerConfig& cfg,
                            const FeatureStats& stats,
                            const std::string& target_id = "");

/// A document prepared for text explanation: its distinct in-vocabulary
/// feature words with term counts.
struct TextDocument {
  std::vector<std::string> tokens;  ///< unique feature words
  std::vector<double> counts;       ///< occurrences per token
  std::string id;
};

/// Build a TextDocument from raw tokens, keeping vocabulary words only.
TextDocument make_text_document(const std::vector<std::string>& raw_tokens,
                                const TfidfVocabulary& vocab,
                                const std::string& id = "");

/// Text-mode surrogate: mask perturbations, tf-idf recomputed on surviving
/// counts, kernel on cosine distance between masks, K-LASSO on the masks.
Explanation explain_text(const BlackBox& model, const TextDocument& doc,
                         const TextExplainerConfig& cfg,
                         const TfidfVocabulary& vocab);

}  // namespace limeaudit
