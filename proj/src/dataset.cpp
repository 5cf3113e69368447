#include "bcpred/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "bcpred/error.hpp"
#include "bcpred/random.hpp"

namespace bcpred {

char diagnosis_code(Diagnosis d) noexcept { return d == Diagnosis::Malignant ? 'M' : 'B'; }
int label_of(Diagnosis d) noexcept { return static_cast<int>(d); }

Dataset::Dataset(std::vector<std::string> feature_names, std::vector<RawRecord> records)
    : feature_names_(std::move(feature_names)), records_(std::move(records)) {
  std::set<std::string> seen;
  for (const auto& name : feature_names_) {
    if (!seen.insert(name).second) throw ParseError("duplicate feature name '" + name + "'");
  }
  for (const auto& r : records_) {
    if (r.features.size() != feature_names_.size()) {
      throw PreconditionError("record '" + r.id + "' has " +
                              std::to_string(r.features.size()) + " features, expected " +
                              std::to_string(feature_names_.size()));
    }
  }
}

std::vector<int> Dataset::labels() const {
  std::vector<int> out;
  out.reserve(records_.size());
  for (const auto& r : records_) out.push_back(label_of(r.diagnosis));
  return out;
}

Matrix Dataset::features(const std::vector<std::size_t>& rows) const {
  Matrix out;
  if (rows.empty()) {
    out = Matrix(records_.size(), feature_count());
    for (std::size_t i = 0; i < records_.size(); ++i)
      std::copy(records_[i].features.begin(), records_[i].features.end(), out.row(i).begin());
    return out;
  }
  out = Matrix(rows.size(), feature_count());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& f = records_.at(rows[i]).features;
    std::copy(f.begin(), f.end(), out.row(i).begin());
  }
  return out;
}

std::size_t Dataset::count(Diagnosis d) const {
  return static_cast<std::size_t>(std::count_if(
      records_.begin(), records_.end(), [d](const RawRecord& r) { return r.diagnosis == d; }));
}

std::size_t Dataset::feature_index(const std::string& name) const {
  const auto it = std::find(feature_names_.begin(), feature_names_.end(), name);
  if (it == feature_names_.end()) throw PreconditionError("unknown feature '" + name + "'");
  return static_cast<std::size_t>(it - feature_names_.begin());
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool parse_double(const std::string& text, double& out) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && first != last;
}

}  // namespace

Dataset parse_wdbc_csv_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;

  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (!trim(line).empty()) {
      header = split_csv_line(line);
      break;
    }
  }
  if (header.empty()) throw ParseError("empty dataset: no header row");
  for (auto& h : header) h = trim(h);
  // Kaggle exports end every line with a comma.
  const bool trailing_empty = header.size() == 2 + kWdbcFeatureCount + 1 && header.back().empty();
  if (trailing_empty) header.pop_back();
  if (header.size() != 2 + kWdbcFeatureCount) {
    throw ParseError("header has " + std::to_string(header.size()) + " columns, expected " +
                     std::to_string(2 + kWdbcFeatureCount) + " (id, diagnosis, 30 features)");
  }
  if (header[0] != "id" || header[1] != "diagnosis") {
    throw ParseError("header must start with 'id,diagnosis', got '" + header[0] + "," +
                     header[1] + "'");
  }
  std::vector<std::string> names(header.begin() + 2, header.end());

  std::vector<RawRecord> records;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    auto fields = split_csv_line(line);
    if (fields.size() == header.size() + 1 && trim(fields.back()).empty()) fields.pop_back();
    if (fields.size() != header.size()) {
      throw ParseError("row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                       " columns, expected " + std::to_string(header.size()));
    }
    RawRecord rec;
    rec.id = trim(fields[0]);
    const std::string diag = trim(fields[1]);
    if (diag == "M") {
      rec.diagnosis = Diagnosis::Malignant;
    } else if (diag == "B") {
      rec.diagnosis = Diagnosis::Benign;
    } else {
      throw ParseError("unknown diagnosis '" + diag + "' at row " + std::to_string(row));
    }
    rec.features.resize(kWdbcFeatureCount);
    for (std::size_t j = 0; j < kWdbcFeatureCount; ++j) {
      const std::string cell = trim(fields[j + 2]);
      double v = 0.0;
      if (!parse_double(cell, v) || !std::isfinite(v)) {
        throw ParseError("non-numeric value '" + cell + "' for feature '" + names[j] +
                         "' at row " + std::to_string(row));
      }
      rec.features[j] = v;
    }
    records.push_back(std::move(rec));
  }
  if (records.empty()) throw ParseError("empty dataset: header but no records");
  return Dataset(std::move(names), std::move(records));
}

Dataset parse_wdbc_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError(path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_wdbc_csv_text(buf.str());
}

// ---------------------------------------------------------------------------
// Standardization

StandardizationParams StandardizationParams::restricted(
    const std::vector<std::size_t>& columns) const {
  StandardizationParams out;
  for (auto c : columns) {
    out.feature_names.push_back(feature_names.at(c));
    out.means.push_back(means.at(c));
    out.std_devs.push_back(std_devs.at(c));
  }
  return out;
}

StandardizationParams standardize_fit(const Matrix& features,
                                      const std::vector<std::string>& names) {
  if (names.size() != features.cols()) {
    throw PreconditionError("feature name count does not match matrix width");
  }
  if (features.rows() < 2) {
    throw PreconditionError("standardization needs at least 2 rows, got " +
                            std::to_string(features.rows()));
  }
  const auto n = static_cast<double>(features.rows());
  StandardizationParams p;
  p.feature_names = names;
  p.means.assign(features.cols(), 0.0);
  p.std_devs.assign(features.cols(), 0.0);
  std::string constant;
  for (std::size_t j = 0; j < features.cols(); ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < features.rows(); ++i) sum += features(i, j);
    const double mean = sum / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < features.rows(); ++i) {
      const double d = features(i, j) - mean;
      ss += d * d;
    }
    p.means[j] = mean;
    p.std_devs[j] = std::sqrt(ss / (n - 1.0));
    if (!(p.std_devs[j] > 0.0)) constant += (constant.empty() ? "" : ", ") + names[j];
  }
  if (!constant.empty()) throw PreconditionError("zero-variance feature(s): " + constant);
  return p;
}

StandardizationParams standardize_fit(const Dataset& data,
                                      const std::vector<std::size_t>& rows) {
  if (rows.empty()) throw PreconditionError("standardize_fit: empty row set");
  return standardize_fit(data.features(rows), data.feature_names());
}

std::vector<double> standardize_apply(std::span<const double> features,
                                      const StandardizationParams& params) {
  if (features.size() != params.size()) {
    throw PreconditionError("standardize_apply: got " + std::to_string(features.size()) +
                            " values, params expect " + std::to_string(params.size()));
  }
  std::vector<double> out(features.size());
  for (std::size_t j = 0; j < features.size(); ++j)
    out[j] = (features[j] - params.means[j]) / params.std_devs[j];
  return out;
}

std::vector<double> standardize_invert(std::span<const double> standardized,
                                       const StandardizationParams& params) {
  if (standardized.size() != params.size()) {
    throw PreconditionError("standardize_invert: arity mismatch");
  }
  std::vector<double> out(standardized.size());
  for (std::size_t j = 0; j < standardized.size(); ++j)
    out[j] = standardized[j] * params.std_devs[j] + params.means[j];
  return out;
}

Matrix standardize_apply(const Matrix& features, const StandardizationParams& params) {
  if (features.cols() != params.size()) {
    throw PreconditionError("standardize_apply: matrix width does not match params");
  }
  Matrix out(features.rows(), features.cols());
  for (std::size_t i = 0; i < features.rows(); ++i)
    for (std::size_t j = 0; j < features.cols(); ++j)
      out(i, j) = (features(i, j) - params.means[j]) / params.std_devs[j];
  return out;
}

// ---------------------------------------------------------------------------
// Split

SplitIndices stratified_split(const std::vector<int>& labels, double test_fraction,
                              std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw PreconditionError("test_fraction must lie in (0, 1)");
  }
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 0 && labels[i] != 1) throw PreconditionError("labels must be 0 or 1");
    by_class[labels[i]].push_back(i);
  }
  for (int c = 0; c < 2; ++c) {
    if (by_class[c].size() < 2) {
      throw PreconditionError("stratified_split needs at least 2 records of each class");
    }
  }

  // Largest-remainder apportionment of round(n * f) test slots.
  const auto total = static_cast<std::size_t>(std::llround(labels.size() * test_fraction));
  std::size_t quota[2];
  double remainder[2];
  for (int c = 0; c < 2; ++c) {
    const double exact = static_cast<double>(by_class[c].size()) * test_fraction;
    quota[c] = static_cast<std::size_t>(std::floor(exact));
    remainder[c] = exact - std::floor(exact);
  }
  while (quota[0] + quota[1] < total) {
    int pick;
    if (remainder[0] != remainder[1]) {
      pick = remainder[0] > remainder[1] ? 0 : 1;
    } else {
      pick = by_class[0].size() <= by_class[1].size() ? 0 : 1;
    }
    ++quota[pick];
    remainder[pick] = -1.0;
  }
  for (int c = 0; c < 2; ++c) {
    if (quota[c] == 0 || quota[c] >= by_class[c].size()) {
      throw PreconditionError("test_fraction " + std::to_string(test_fraction) +
                              " leaves an empty train or test partition for a class");
    }
  }

  SplitIndices out;
  out.seed = seed;
  SplitMix64 rng(seed);
  for (int c = 0; c < 2; ++c) {
    auto idx = by_class[c];
    rng.shuffle(std::span<std::size_t>(idx));
    out.test.insert(out.test.end(), idx.begin(), idx.begin() + quota[c]);
    out.train.insert(out.train.end(), idx.begin() + quota[c], idx.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

SplitIndices stratified_split(const Dataset& data, double test_fraction, std::uint64_t seed) {
  return stratified_split(data.labels(), test_fraction, seed);
}

// ---------------------------------------------------------------------------
// Correlation

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw PreconditionError("pearson_correlation: length mismatch");
  if (x.size() < 2) throw PreconditionError("pearson_correlation: need at least 2 values");
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw PreconditionError("correlation undefined for a constant vector");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CorrelationMatrix correlation_matrix(const Dataset& data, const std::vector<std::size_t>& rows) {
  const Matrix x = data.features(rows);
  if (x.rows() < 2) throw PreconditionError("correlation_matrix: need at least 2 rows");
  const std::size_t n = x.cols();
  std::vector<std::vector<double>> cols(n);
  for (std::size_t j = 0; j < n; ++j) {
    cols[j] = x.column(j);
    const auto [lo, hi] = std::minmax_element(cols[j].begin(), cols[j].end());
    if (*lo == *hi) {
      throw PreconditionError("correlation undefined: feature '" + data.feature_names()[j] +
                              "' is constant over the selected rows");
    }
  }
  CorrelationMatrix out{data.feature_names(), Matrix(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    out.values(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double r = pearson_correlation(cols[i], cols[j]);
      out.values(i, j) = r;
      out.values(j, i) = r;
    }
  }
  return out;
}

std::string correlation_csv(const CorrelationMatrix& corr) {
  std::string out = "feature";
  for (const auto& name : corr.feature_names) out += "," + name;
  out += '\n';
  char buf[32];
  for (std::size_t i = 0; i < corr.feature_names.size(); ++i) {
    out += corr.feature_names[i];
    for (std::size_t j = 0; j < corr.feature_names.size(); ++j) {
      std::snprintf(buf, sizeof buf, ",%.17g", corr.values(i, j));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace bcpred
