#include "limeaudit/audit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "limeaudit/errors.hpp"

namespace limeaudit {

namespace {

double jaccard(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::vector<int> inter;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(inter));
  const std::size_t uni = a.size() + b.size() - inter.size();
  return static_cast<double>(inter.size()) / static_cast<double>(uni);
}

double mean_pairwise_jaccard(const std::vector<std::vector<int>>& selections) {
  const std::size_t t = selections.size();
  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t j = i + 1; j < t; ++j) {
      total += jaccard(selections[i], selections[j]);
      ++pairs;
    }
  return total / static_cast<double>(pairs);
}

nlohmann::json tabular_config_json(const TabularExplainerConfig& cfg,
                                   double resolved_width) {
  return {{"mode", "tabular"},
          {"n_samples", cfg.n_samples},
          {"k", cfg.k},
          {"proximity_scale", cfg.proximity_scale},
          {"kernel_width", resolved_width},
          {"constant_kernel", cfg.constant_kernel},
          {"target_class", cfg.target_class}};
}

nlohmann::json text_config_json(const TextExplainerConfig& cfg) {
  return {{"mode", "text"},
          {"n_samples", cfg.n_samples},
          {"k", cfg.k},
          {"kernel_width", cfg.kernel_width},
          {"target_class", cfg.target_class}};
}

}  // namespace

AuditReport aggregate_trials(std::vector<std::vector<int>> trial_selections,
                             std::vector<std::string> feature_labels, int k,
                             std::uint64_t master_seed,
                             const std::string& target_id) {
  const auto t = static_cast<int>(trial_selections.size());
  if (t < 1) throw ArgumentError("aggregate_trials: need at least one trial");

  AuditReport report;
  report.target_id = target_id;
  report.trials = t;
  report.k = k;
  report.master_seed = master_seed;
  report.feature_labels = std::move(feature_labels);
  report.selection_counts.assign(report.feature_labels.size(), 0);
  for (auto& selection : trial_selections) {
    std::sort(selection.begin(), selection.end());
    for (int feature : selection) {
      if (feature < 0 || feature >= static_cast<int>(report.feature_labels.size()))
        throw ArgumentError("aggregate_trials: selection index out of range");
      ++report.selection_counts[static_cast<std::size_t>(feature)];
    }
  }
  report.selection_probability.resize(report.feature_labels.size());
  for (std::size_t f = 0; f < report.selection_counts.size(); ++f)
    report.selection_probability[f] =
        static_cast<double>(report.selection_counts[f]) / static_cast<double>(t);
  report.trial_selections = std::move(trial_selections);
  if (t >= 2) report.stability = mean_pairwise_jaccard(report.trial_selections);
  return report;
}

AuditReport run_trials_tabular(const BlackBox& model, const Eigen::VectorXd& x,
                               const TabularExplainerConfig& cfg,
                               const FeatureStats& stats, int trials,
                               std::uint64_t master_seed,
                               const std::string& target_id) {
  if (trials < 1) throw ArgumentError("run_trials: T must be >= 1");
  std::vector<std::vector<int>> selections(static_cast<std::size_t>(trials));
  double resolved_width = cfg.kernel_width;
  for (int t = 0; t < trials; ++t) {
    TabularExplainerConfig trial_cfg = cfg;
    trial_cfg.seed = derive_seed(master_seed, static_cast<std::uint64_t>(t));
    try {
      const Explanation exp =
          explain_tabular(model, x, trial_cfg, stats, target_id);
      resolved_width = exp.kernel_width;
      for (const SelectedFeature& f : exp.selected)
        selections[static_cast<std::size_t>(t)].push_back(f.feature);
    } catch (const ArgumentError& e) {
      throw ArgumentError("trial " + std::to_string(t) + ": " + e.what());
    } catch (const ModelError& e) {
      throw ModelError("trial " + std::to_string(t) + ": " + e.what());
    } catch (const std::exception& e) {
      throw std::runtime_error("trial " + std::to_string(t) + ": " + e.what());
    }
  }
  AuditReport report = aggregate_trials(std::move(selections), stats.names,
                                        cfg.k, master_seed, target_id);
  report.proximity_scale = cfg.proximity_scale;
  report.config = tabular_config_json(cfg, resolved_width);
  return report;
}

AuditReport run_trials_text(const BlackBox& model, const TextDocument& doc,
                            const TextExplainerConfig& cfg,
                            const TfidfVocabulary& vocab, int trials,
                            std::uint64_t master_seed) {
  if (trials < 1) throw ArgumentError("run_trials: T must be >= 1");
  std::vector<std::vector<int>> selections(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    TextExplainerConfig trial_cfg = cfg;
    trial_cfg.seed = derive_seed(master_seed, static_cast<std::uint64_t>(t));
    try {
      const Explanation exp = explain_text(model, doc, trial_cfg, vocab);
      for (const SelectedFeature& f : exp.selected)
        selections[static_cast<std::size_t>(t)].push_back(f.feature);
    } catch (const ArgumentError& e) {
      throw ArgumentError("trial " + std::to_string(t) + ": " + e.what());
    } catch (const ModelError& e) {
      throw ModelError("trial " + std::to_string(t) + ": " + e.what());
    } catch (const std::exception& e) {
      throw std::runtime_error("trial " + std::to_string(t) + ": " + e.what());
    }
  }
  AuditReport report = aggregate_trials(std::move(selections), doc.tokens,
                                        cfg.k, master_seed, doc.id);
  report.proximity_scale = 1.0;
  report.config = text_config_json(cfg);
  return report;
}

ProximitySweep proximity_sweep(const BlackBox& model, const Eigen::VectorXd& x,
                               const TabularExplainerConfig& cfg,
                               const FeatureStats& stats,
                               const std::vector<double>& scales, int trials,
                               std::uint64_t master_seed,
                               const std::string& target_id) {
  if (scales.empty()) throw ArgumentError("proximity_sweep: no scales given");
  for (double scale : scales)
    if (!(scale > 0.0)) throw ArgumentError("proximity_sweep: scales must be > 0");

  ProximitySweep sweep;
  sweep.scales = scales;
  sweep.reports.reserve(scales.size());
  for (std::size_t s = 0; s < scales.size(); ++s) {
    TabularExplainerConfig scale_cfg = cfg;
    scale_cfg.proximity_scale = scales[s];
    sweep.reports.push_back(run_trials_tabular(
        model, x, scale_cfg, stats, trials,
        derive_seed(master_seed, static_cast<std::uint64_t>(s)), target_id));
  }
  return sweep;
}

double stability_summary(const AuditReport& report) {
  if (report.trials < 2)
    throw ArgumentError("stability_summary: need at least 2 trials");
  return mean_pairwise_jaccard(report.trial_selections);
}

CredibilitySummary credibility_compare(
    const std::vector<AuditReport>& reports,
    const std::vector<std::vector<int>>& informative_sets, double gap) {
  if (reports.size() != informative_sets.size())
    throw ArgumentError("credibility_compare: reports and informative sets disagree");
  if (reports.empty())
    throw ArgumentError("credibility_compare: no reports");

  CredibilitySummary summary;
  summary.gap_threshold = gap;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const AuditReport& report = reports[i];
    double total = 0.0;
    for (double p : report.selection_probability) total += p;
    double informative = 0.0;
    for (int f : informative_sets[i]) {
      if (f < 0 || f >= static_cast<int>(report.selection_probability.size()))
        throw ArgumentError("credibility_compare: informative index out of range");
      informative += report.selection_probability[static_cast<std::size_t>(f)];
    }
    summary.target_ids.push_back(report.target_id);
    summary.informativeness.push_back(total > 0.0 ? informative / total : 0.0);
  }
  const double best = *std::max_element(summary.informativeness.begin(),
                                        summary.informativeness.end());
  for (std::size_t i = 0; i < summary.informativeness.size(); ++i) {
    if (best - summary.informativeness[i] > gap) {
      summary.flagged.push_back(static_cast<int>(i));
      summary.notes.push_back(
          summary.target_ids[i] + ": informativeness " +
          std::to_string(summary.informativeness[i]) + " trails the best point (" +
          std::to_string(best) + ") by more than " + std::to_string(gap));
    }
  }
  return summary;
}

// ---------------------------------------------------------------------------
// serialization

nlohmann::json AuditReport::to_json() const {
  nlohmann::json j{{"format", "limeaudit-audit-report"},
                   {"version", 1},
                   {"target_id", target_id},
                   {"trials", trials},
                   {"k", k},
                   {"master_seed", master_seed},
                   {"proximity_scale", proximity_scale},
                   {"features", feature_labels},
                   {"selection_counts", selection_counts},
                   {"selection_probability", selection_probability},
                   {"trial_selections", trial_selections},
                   {"informative_features", informative_features},
                   {"config", config}};
  if (stability.has_value()) j["stability"] = *stability;
  return j;
}

AuditReport AuditReport::from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", "") != "limeaudit-audit-report")
      throw DataError("audit report JSON: missing format tag");
    AuditReport report;
    report.target_id = j.at("target_id").get<std::string>();
    report.trials = j.at("trials").get<int>();
    report.k = j.at("k").get<int>();
    report.master_seed = j.at("master_seed").get<std::uint64_t>();
    report.proximity_scale = j.at("proximity_scale").get<double>();
    report.feature_labels = j.at("features").get<std::vector<std::string>>();
    report.selection_counts = j.at("selection_counts").get<std::vector<int>>();
    report.selection_probability =
        j.at("selection_probability").get<std::vector<double>>();
    report.trial_selections =
        j.at("trial_selections").get<std::vector<std::vector<int>>>();
    report.informative_features =
        j.at("informative_features").get<std::vector<int>>();
    report.config = j.value("config", nlohmann::json::object());
    if (j.contains("stability")) report.stability = j.at("stability").get<double>();
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("audit report JSON: ") + e.what());
  }
}

nlohmann::json ProximitySweep::to_json() const {
  nlohmann::json reports_json = nlohmann::json::array();
  for (const AuditReport& report : reports) reports_json.push_back(report.to_json());
  return {{"format", "limeaudit-proximity-sweep"},
          {"version", 1},
          {"scales", scales},
          {"reports", reports_json}};
}

ProximitySweep ProximitySweep::from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", "") != "limeaudit-proximity-sweep")
      throw DataError("sweep JSON: missing format tag");
    ProximitySweep sweep;
    sweep.scales = j.at("scales").get<std::vector<double>>();
    for (const auto& rj : j.at("reports"))
      sweep.reports.push_back(AuditReport::from_json(rj));
    if (sweep.scales.size() != sweep.reports.size())
      throw DataError("sweep JSON: scales and reports disagree");
    return sweep;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("sweep JSON: ") + e.what());
  }
}

nlohmann::json CredibilitySummary::to_json() const {
  return {{"format", "limeaudit-credibility-summary"},
          {"version", 1},
          {"target_ids", target_ids},
          {"informativeness", informativeness},
          {"gap_threshold", gap_threshold},
          {"flagged", flagged},
          {"notes", notes}};
}

}  // namespace limeaudit
