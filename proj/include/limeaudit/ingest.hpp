#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "limeaudit/blackbox.hpp"
#include "limeaudit/synthdata.hpp"

namespace limeaudit {

/// Tokenized documents with binary labels.
struct Corpus {
  std::vector<std::vector<std::string>> documents;
  std::vector<int> labels;
  std::vector<std::string> label_names;  ///< label value -> category name
  std::vector<std::string> doc_ids;      ///< source file names
};

struct NewsgroupsData {
  Corpus train;
  Corpus test;
};

/// Lowercase, split on non-alphanumeric runs, keep tokens of length >= 2.
/// Stop words are retained.
std::vector<std::string> tokenize(const std::string& text);

/// Read a two-category slice of a 20-Newsgroups style directory tree:
/// <root>/<split>/<category>/<doc file>, where <split> is either
/// 20news-bydate-train / 20news-bydate-test or train / test. Files are
/// read in sorted name order; the first category gets label 0.
NewsgroupsData load_newsgroups(const std::filesystem::path& root,
                               const std::string& category_a,
                               const std::string& category_b);

/// Term -> column mapping plus smoothed idf weights:
/// idf(t) = ln((1 + n) / (1 + df(t))) + 1. Vectors are L2-normalized.
class TfidfVocabulary {
 public:
  TfidfVocabulary() = default;

  int size() const { return static_cast<int>(idf_.size()); }
  int n_documents_fit() const { return n_documents_; }
  /// Column of a term, or -1 when unseen.
  int index_of(const std::string& term) const;
  double idf(int index) const { return idf_[static_cast<std::size_t>(index)]; }
  const std::vector<std::string>& terms() const { return terms_; }

  nlohmann::json to_json() const;
  static TfidfVocabulary from_json(const nlohmann::json& j);

  friend TfidfVocabulary fit_tfidf(const Corpus& corpus);

 private:
  std::map<std::string, int> term_to_index_;
  std::vector<std::string> terms_;  ///< index -> term, sorted
  std::vector<double> idf_;
  int n_documents_ = 0;
};

/// Build the vocabulary from a training corpus. Terms are indexed in
/// sorted order, so the mapping is deterministic.
TfidfVocabulary fit_tfidf(const Corpus& corpus);

/// tf(term, doc) * idf(term), L2-normalized; unseen terms are dropped.
/// Throws StateError when the vocabulary is empty (fit not called).
SparseVec transform_tfidf(const TfidfVocabulary& vocab,
                          const std::vector<std::string>& document);

/// The twelve retained COMPAS columns after encoding. Labels follow
/// score_text with Low=0, Medium=1, High=2.
struct CompasTable {
  Eigen::MatrixXd X;
  Eigen::VectorXi y;
  std::vector<std::string> feature_names;      ///< encoded column names
  std::map<std::string, std::vector<std::string>> encoders;  ///< column -> categories
  int rows_read = 0;
  int rows_dropped_null = 0;
  int rows_dropped_bad_timestamp = 0;

  TabularDataset as_dataset() const;
  nlohmann::json manifest() const;
};

/// Load the ProPublica COMPAS CSV: keep the twelve configured columns,
/// drop null rows, derive days_in_jail from the jail in/out timestamps,
/// one-hot encode sex / race / charge degree, label-encode score_text.
CompasTable load_compas(const std::filesystem::path& csv_path);

}  // namespace limeaudit
