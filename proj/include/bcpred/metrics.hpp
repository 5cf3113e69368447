#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace bcpred {

/// Binary confusion counts with malignant (1) as the positive class.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const noexcept { return tp + fp + fn + tn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

ConfusionMatrix confusion_matrix(std::span<const int> y_true, std::span<const int> y_pred);

/// (tp + tn) / total. Throws on an empty matrix.
double accuracy(const ConfusionMatrix& cm);

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  // Set when the corresponding ratio was 0/0 and reported as 0.
  bool precision_degenerate = false;
  bool recall_degenerate = false;
  bool f1_degenerate = false;
};

PrecisionRecall precision_recall_f1(const ConfusionMatrix& cm);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  /// Score cut-off producing this point; +inf for the origin sentinel.
  double threshold = 0.0;
};

/// ROC sweep over the distinct scores, highest first. A sample is called
/// positive when score >= threshold. Tied scores enter together, so each tie
/// group contributes one vertex. Starts at (0, 0) and ends at (1, 1).
std::vector<RocPoint> roc_curve(std::span<const int> y_true, std::span<const double> scores);

/// Trapezoid-rule area. The curve must be sorted by fpr then tpr and run
/// from (0, 0) to (1, 1).
double auc_trapezoid(std::span<const RocPoint> roc);

struct EvaluationReport {
  ConfusionMatrix confusion;
  double accuracy = 0.0;
  PrecisionRecall pr;
  double auc = 0.0;
  std::vector<RocPoint> roc;
  std::size_t n_test = 0;
  std::string protocol;
};

/// Scores, labels at `threshold`, and summarizes one evaluation set.
EvaluationReport evaluate_scores(std::span<const int> y_true, std::span<const double> scores,
                                 double threshold, std::string protocol);

/// key=value text, one field per line, reals with 17 significant digits.
std::string report_text(const EvaluationReport& report);
/// Inverse of report_text for the scalar fields (the ROC curve travels in its
/// own CSV).
EvaluationReport parse_report_text(const std::string& text);

/// `fpr,tpr` header plus one line per ROC point.
std::string roc_csv(std::span<const RocPoint> roc);
std::vector<RocPoint> parse_roc_csv(const std::string& text);

}  // namespace bcpred
