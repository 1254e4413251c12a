#include "limeaudit/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "limeaudit/errors.hpp"

namespace limeaudit {

namespace fs = std::filesystem;

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char ch : text) {
    if (std::isalnum(ch)) {
      current.push_back(static_cast<char>(std::tolower(ch)));
    } else if (!current.empty()) {
      if (current.size() >= 2) tokens.push_back(current);
      current.clear();
    }
  }
  if (current.size() >= 2) tokens.push_back(current);
  return tokens;
}

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path split_dir(const fs::path& root, bool train) {
  const fs::path bydate = root / (train ? "20news-bydate-train" : "20news-bydate-test");
  if (fs::is_directory(bydate)) return bydate;
  const fs::path plain = root / (train ? "train" : "test");
  if (fs::is_directory(plain)) return plain;
  throw DataError("newsgroups root " + root.string() +
                  " has neither 20news-bydate-* nor train/test splits");
}

void append_category(Corpus& corpus, const fs::path& dir, int label) {
  if (!fs::is_directory(dir))
    throw DataError("missing category directory " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file()) files.push_back(entry.path());
  if (files.empty()) throw DataError("empty category directory " + dir.string());
  std::sort(files.begin(), files.end());
  for (const fs::path& file : files) {
    corpus.documents.push_back(tokenize(read_file(file)));
    corpus.labels.push_back(label);
    corpus.doc_ids.push_back(file.filename().string());
  }
}

}  // namespace

NewsgroupsData load_newsgroups(const fs::path& root, const std::string& category_a,
                               const std::string& category_b) {
  if (!fs::is_directory(root))
    throw DataError("newsgroups root not found: " + root.string());
  NewsgroupsData data;
  data.train.label_names = {category_a, category_b};
  data.test.label_names = {category_a, category_b};
  for (const bool train : {true, false}) {
    Corpus& corpus = train ? data.train : data.test;
    const fs::path base = split_dir(root, train);
    append_category(corpus, base / category_a, 0);
    append_category(corpus, base / category_b, 1);
  }
  return data;
}

// ---------------------------------------------------------------------------
// tf-idf

int TfidfVocabulary::index_of(const std::string& term) const {
  const auto it = term_to_index_.find(term);
  return it == term_to_index_.end() ? -1 : it->second;
}

TfidfVocabulary fit_tfidf(const Corpus& corpus) {
  if (corpus.documents.empty()) throw ArgumentError("fit_tfidf: empty corpus");
  std::map<std::string, int> df;
  for (const auto& doc : corpus.documents) {
    std::set<std::string> seen(doc.begin(), doc.end());
    for (const auto& term : seen) ++df[term];
  }
  TfidfVocabulary vocab;
  vocab.n_documents_ = static_cast<int>(corpus.documents.size());
  const double n = static_cast<double>(vocab.n_documents_);
  int index = 0;
  for (const auto& [term, count] : df) {  // std::map iterates sorted
    vocab.term_to_index_[term] = index++;
    vocab.terms_.push_back(term);
    vocab.idf_.push_back(std::log((1.0 + n) / (1.0 + count)) + 1.0);
  }
  return vocab;
}

SparseVec transform_tfidf(const TfidfVocabulary& vocab,
                          const std::vector<std::string>& document) {
  if (vocab.size() == 0)
    throw StateError("transform_tfidf: vocabulary not fitted");
  std::map<int, double> counts;
  for (const auto& term : document) {
    const int idx = vocab.index_of(term);
    if (idx >= 0) counts[idx] += 1.0;
  }
  SparseVec out;
  out.reserve(counts.size());
  double norm_sq = 0.0;
  for (const auto& [idx, tf] : counts) {
    const double weight = tf * vocab.idf(idx);
    out.emplace_back(idx, weight);
    norm_sq += weight * weight;
  }
  if (norm_sq > 0.0) {
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& [idx, weight] : out) weight *= inv;
  }
  return out;
}

nlohmann::json TfidfVocabulary::to_json() const {
  return {{"format", "limeaudit-tfidf-vocabulary"},
          {"version", 1},
          {"n_documents_fit", n_documents_},
          {"terms", terms_},
          {"idf", idf_}};
}

TfidfVocabulary TfidfVocabulary::from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", "") != "limeaudit-tfidf-vocabulary")
      throw DataError("tfidf JSON: missing format tag");
    TfidfVocabulary vocab;
    vocab.n_documents_ = j.at("n_documents_fit").get<int>();
    vocab.terms_ = j.at("terms").get<std::vector<std::string>>();
    vocab.idf_ = j.at("idf").get<std::vector<double>>();
    if (vocab.terms_.size() != vocab.idf_.size())
      throw DataError("tfidf JSON: terms and idf disagree");
    for (std::size_t i = 0; i < vocab.terms_.size(); ++i)
      vocab.term_to_index_[vocab.terms_[i]] = static_cast<int>(i);
    return vocab;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("tfidf JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// COMPAS

namespace {

// RFC-4180-ish CSV row reader: quoted fields, embedded commas and quotes.
// Returns false at end of stream.
bool read_csv_row(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  std::string field;
  bool in_quotes = false;
  bool any = false;
  int ch = 0;
  while ((ch = in.get()) != EOF) {
    any = true;
    const char c = static_cast<char>(ch);
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          field.push_back('"');
          in.get();
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  if (!any) return false;
  fields.push_back(std::move(field));
  return true;
}

// "YYYY-MM-DD HH:MM:SS" or "YYYY-MM-DD" to seconds since an arbitrary
// fixed epoch (days-in-jail only needs differences).
bool parse_timestamp(const std::string& text, double& seconds_out) {
  int year = 0;
  int month = 0;
  int day = 0;
  int hour = 0;
  int minute = 0;
  int second = 0;
  const int matched = std::sscanf(text.c_str(), "%d-%d-%d %d:%d:%d", &year,
                                  &month, &day, &hour, &minute, &second);
  if (matched != 3 && matched != 6) return false;
  if (month < 1 || month > 12 || day < 1 || day > 31) return false;
  if (hour < 0 || hour > 23 || minute < 0 || minute > 59 || second < 0 ||
      second > 60)
    return false;
  // Days since civil epoch (Howard Hinnant's algorithm), no timezone.
  const int y_adj = year - (month <= 2 ? 1 : 0);
  const int era = (y_adj >= 0 ? y_adj : y_adj - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y_adj - era * 400);
  const unsigned doy =
      static_cast<unsigned>((153 * (month + (month > 2 ? -3 : 9)) + 2) / 5 +
                            day - 1);
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  const long long days =
      static_cast<long long>(era) * 146097 + static_cast<long long>(doe);
  seconds_out = static_cast<double>(days) * 86400.0 +
                static_cast<double>(hour * 3600 + minute * 60 + second);
  return true;
}

const std::vector<std::string> kCompasColumns = {
    "sex",          "age",
    "race",         "juv_fel_count",
    "juv_misd_count", "juv_other_count",
    "priors_count", "c_charge_degree",
    "days_b_screening_arrest", "c_jail_in",
    "c_jail_out",   "score_text"};

const std::vector<std::string> kCategoricalColumns = {"sex", "race",
                                                      "c_charge_degree"};

bool is_categorical(const std::string& column) {
  return std::find(kCategoricalColumns.begin(), kCategoricalColumns.end(),
                   column) != kCategoricalColumns.end();
}

int score_label(const std::string& text) {
  if (text == "Low") return 0;
  if (text == "Medium") return 1;
  if (text == "High") return 2;
  return -1;
}

}  // namespace

TabularDataset CompasTable::as_dataset() const {
  TabularDataset data;
  data.X = X;
  data.y = y;
  data.feature_names = feature_names;
  compute_feature_stats(data);
  return data;
}

nlohmann::json CompasTable::manifest() const {
  return {{"rows_read", rows_read},
          {"rows_dropped_null", rows_dropped_null},
          {"rows_dropped_bad_timestamp", rows_dropped_bad_timestamp},
          {"rows_kept", static_cast<int>(X.rows())},
          {"columns", kCompasColumns},
          {"encoders", encoders},
          {"feature_names", feature_names}};
}

CompasTable load_compas(const fs::path& csv_path) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw DataError("cannot read COMPAS CSV: " + csv_path.string());

  std::vector<std::string> header;
  if (!read_csv_row(in, header)) throw DataError("COMPAS CSV is empty");

  std::map<std::string, int> column_of;
  for (std::size_t i = 0; i < header.size(); ++i)
    column_of[header[i]] = static_cast<int>(i);
  for (const auto& column : kCompasColumns)
    if (column_of.find(column) == column_of.end())
      throw DataError("COMPAS CSV is missing required column '" + column + "'");

  struct Row {
    std::map<std::string, std::string> raw;
    double days_in_jail = 0.0;
    int label = 0;
  };
  CompasTable table;
  std::vector<Row> rows;
  std::vector<std::string> fields;
  while (read_csv_row(in, fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;  // trailing newline
    ++table.rows_read;
    Row row;
    bool null_found = false;
    for (const auto& column : kCompasColumns) {
      const auto at = static_cast<std::size_t>(column_of[column]);
      const std::string value = at < fields.size() ? fields[at] : "";
      if (value.empty() || value == "NA" || value == "N/A") {
        null_found = true;
        break;
      }
      row.raw[column] = value;
    }
    if (null_found) {
      ++table.rows_dropped_null;
      continue;
    }
    double jail_in = 0.0;
    double jail_out = 0.0;
    if (!parse_timestamp(row.raw["c_jail_in"], jail_in) ||
        !parse_timestamp(row.raw["c_jail_out"], jail_out)) {
      ++table.rows_dropped_bad_timestamp;
      continue;
    }
    row.days_in_jail = (jail_out - jail_in) / 86400.0;
    row.label = score_label(row.raw["score_text"]);
    if (row.label < 0) {
      ++table.rows_dropped_null;  // unknown label text counts as null
      continue;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("COMPAS CSV has no usable rows");

  // Discover categories in sorted order for a deterministic encoding.
  for (const auto& column : kCategoricalColumns) {
    std::set<std::string> values;
    for (const auto& row : rows) values.insert(row.raw.at(column));
    table.encoders[column] = {values.begin(), values.end()};
  }

  const std::vector<std::string> numeric_columns = {
      "age", "juv_fel_count", "juv_misd_count", "juv_other_count",
      "priors_count", "days_b_screening_arrest"};
  for (const auto& column : numeric_columns)
    table.feature_names.push_back(column);
  table.feature_names.push_back("days_in_jail");
  for (const auto& column : kCategoricalColumns)
    for (const auto& value : table.encoders[column])
      table.feature_names.push_back(column + "=" + value);

  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto p = static_cast<Eigen::Index>(table.feature_names.size());
  table.X = Eigen::MatrixXd::Zero(n, p);
  table.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Row& row = rows[static_cast<std::size_t>(i)];
    Eigen::Index at = 0;
    for (const auto& column : numeric_columns) {
      try {
        table.X(i, at++) = std::stod(row.raw.at(column));
      } catch (const std::exception&) {
        throw DataError("COMPAS CSV: non-numeric value in column '" + column +
                        "'");
      }
    }
    table.X(i, at++) = row.days_in_jail;
    for (const auto& column : kCategoricalColumns) {
      const auto& categories = table.encoders[column];
      const auto it = std::find(categories.begin(), categories.end(),
                                row.raw.at(column));
      table.X(i, at + (it - categories.begin())) = 1.0;
      at += static_cast<Eigen::Index>(categories.size());
    }
    table.y(i) = row.label;
  }
  return table;
}

}  // namespace limeaudit
