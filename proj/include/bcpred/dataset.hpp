#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bcpred/matrix.hpp"

namespace bcpred {

/// Number of numeric measurements per WDBC record.
inline constexpr std::size_t kWdbcFeatureCount = 30;

/// Class labels. Malignant is the positive class everywhere in the library.
enum class Diagnosis : int { Benign = 0, Malignant = 1 };

char diagnosis_code(Diagnosis d) noexcept;  // 'B' or 'M'
int label_of(Diagnosis d) noexcept;

struct RawRecord {
  std::string id;
  Diagnosis diagnosis = Diagnosis::Benign;
  std::vector<double> features;

  friend bool operator==(const RawRecord&, const RawRecord&) = default;
};

/// Parsed WDBC table. Immutable once built.
class Dataset {
 public:
  Dataset(std::vector<std::string> feature_names, std::vector<RawRecord> records);

  std::size_t size() const noexcept { return records_.size(); }
  std::size_t feature_count() const noexcept { return feature_names_.size(); }
  const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
  const std::vector<RawRecord>& records() const noexcept { return records_; }
  const RawRecord& record(std::size_t i) const { return records_.at(i); }

  /// Labels encoded M -> 1, B -> 0, in record order.
  std::vector<int> labels() const;
  /// Feature matrix for the selected rows (all rows when `rows` is empty).
  Matrix features(const std::vector<std::size_t>& rows = {}) const;
  std::size_t count(Diagnosis d) const;

  /// Index of a feature by name; throws PreconditionError naming it if absent.
  std::size_t feature_index(const std::string& name) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<std::string> feature_names_;
  std::vector<RawRecord> records_;
};

/// Reads a WDBC CSV: header `id,diagnosis,<30 features>`, comma separated,
/// one record per line. A trailing empty column is tolerated. Errors name the
/// 1-based data row.
Dataset parse_wdbc_csv(const std::filesystem::path& path);
Dataset parse_wdbc_csv_text(const std::string& text);

struct StandardizationParams {
  std::vector<std::string> feature_names;
  std::vector<double> means;
  std::vector<double> std_devs;

  std::size_t size() const noexcept { return means.size(); }
  StandardizationParams restricted(const std::vector<std::size_t>& columns) const;

  friend bool operator==(const StandardizationParams&,
                         const StandardizationParams&) = default;
};

/// Sample mean and sample standard deviation (n - 1 denominator) of each
/// feature over `rows`. Zero-variance features are reported by name.
StandardizationParams standardize_fit(const Dataset& data,
                                      const std::vector<std::size_t>& rows);
StandardizationParams standardize_fit(const Matrix& features,
                                      const std::vector<std::string>& names);

std::vector<double> standardize_apply(std::span<const double> features,
                                      const StandardizationParams& params);
std::vector<double> standardize_invert(std::span<const double> standardized,
                                       const StandardizationParams& params);
Matrix standardize_apply(const Matrix& features, const StandardizationParams& params);

struct SplitIndices {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
  std::uint64_t seed = 0;
};

/// Stratified train/test partition. The test partition holds round(n * f)
/// records, apportioned to the classes by largest remainder so each class
/// gets floor or ceil of its count * f. Members are drawn by a seeded shuffle
/// of each class.
SplitIndices stratified_split(const Dataset& data, double test_fraction,
                              std::uint64_t seed);
SplitIndices stratified_split(const std::vector<int>& labels, double test_fraction,
                              std::uint64_t seed);

/// Pearson r, clamped to [-1, 1]. Throws on constant input.
double pearson_correlation(std::span<const double> x, std::span<const double> y);

struct CorrelationMatrix {
  std::vector<std::string> feature_names;
  Matrix values;
};

CorrelationMatrix correlation_matrix(const Dataset& data,
                                     const std::vector<std::size_t>& rows);

/// CSV with a header row and a leading column of feature names; 17 significant
/// digits per entry.
std::string correlation_csv(const CorrelationMatrix& corr);

}  // namespace bcpred
