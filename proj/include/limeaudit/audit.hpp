#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "limeaudit/lime.hpp"

namespace limeaudit {

/// Per-feature empirical selection probabilities over T repeated
/// explanations of one target, plus the raw per-trial selections.
/// probability(f) = count(f) / T exactly, so probability * T is integral
/// and the probabilities sum to (sum of per-trial selection sizes) / T <= K.
struct AuditReport {
  std::string target_id;
  int trials = 0;  ///< T
  int k = 0;
  std::uint64_t master_seed = 0;
  double proximity_scale = 1.0;
  std::vector<std::string> feature_labels;
  std::vector<int> selection_counts;            ///< per feature
  std::vector<double> selection_probability;    ///< counts / T
  std::vector<std::vector<int>> trial_selections;  ///< sorted indices per trial
  std::optional<double> stability;  ///< pairwise mean Jaccard, set when T >= 2
  std::vector<int> informative_features;  ///< caller-declared, may be empty
  nlohmann::json config;  ///< explainer configuration snapshot

  nlohmann::json to_json() const;
  static AuditReport from_json(const nlohmann::json& j);
};

struct ProximitySweep {
  std::vector<double> scales;
  std::vector<AuditReport> reports;  ///< aligned with scales

  nlohmann::json to_json() const;
  static ProximitySweep from_json(const nlohmann::json& j);
};

/// Fraction of selection-probability mass on a declared informative
/// feature set, per audited point.
struct CredibilitySummary {
  std::vector<std::string> target_ids;
  std::vector<double> informativeness;  ///< per point, in [0,1]
  double gap_threshold = 0.3;
  std::vector<int> flagged;  ///< points far below the best-informed point
  std::vector<std::string> notes;

  nlohmann::json to_json() const;
};

/// Fold per-trial selections into an AuditReport. Selections must be
/// indexed by trial; the fold is deterministic and order-free.
AuditReport aggregate_trials(std::vector<std::vector<int>> trial_selections,
                             std::vector<std::string> feature_labels, int k,
                             std::uint64_t master_seed,
                             const std::string& target_id);

/// T independent tabular explanations with per-trial seeds
/// derive_seed(master_seed, trial); aggregated counts and stability.
AuditReport run_trials_tabular(const BlackBox& model, const Eigen::VectorXd& x,
                               const TabularExplainerConfig& cfg,
                               const FeatureStats& stats, int trials,
                               std::uint64_t master_seed,
                               const std::string& target_id);

AuditReport run_trials_text(const BlackBox& model, const TextDocument& doc,
                            const TextExplainerConfig& cfg,
                            const TfidfVocabulary& vocab, int trials,
                            std::uint64_t master_seed);

/// One run_trials per scale with scale-keyed seed substreams
/// derive_seed(master_seed, scale index); T and K identical across scales.
ProximitySweep proximity_sweep(const BlackBox& model, const Eigen::VectorXd& x,
                               const TabularExplainerConfig& cfg,
                               const FeatureStats& stats,
                               const std::vector<double>& scales, int trials,
                               std::uint64_t master_seed,
                               const std::string& target_id);

/// Mean Jaccard similarity over all pairs of trial selections; T >= 2.
double stability_summary(const AuditReport& report);

/// informativeness(point) = sum of probability over its informative set /
/// sum over all features. Points more than `gap` below the most informed
/// point are flagged.
CredibilitySummary credibility_compare(
    const std::vector<AuditReport>& reports,
    const std::vector<std::vector<int>>& informative_sets, double gap = 0.3);

}  // namespace limeaudit
