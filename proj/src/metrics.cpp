#include "bcpred/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "bcpred/error.hpp"
#include "bcpred/logreg.hpp"

namespace bcpred {

ConfusionMatrix confusion_matrix(std::span<const int> y_true, std::span<const int> y_pred) {
  if (y_true.size() != y_pred.size()) throw PreconditionError("confusion_matrix: length mismatch");
  if (y_true.empty()) throw PreconditionError("confusion_matrix: no samples");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const int t = y_true[i];
    const int p = y_pred[i];
    if ((t != 0 && t != 1) || (p != 0 && p != 1)) {
      throw PreconditionError("confusion_matrix: non-binary value at index " + std::to_string(i));
    }
    if (t == 1 && p == 1) ++cm.tp;
    else if (t == 0 && p == 1) ++cm.fp;
    else if (t == 1) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

double accuracy(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw PreconditionError("accuracy of an empty confusion matrix");
  return static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
}

PrecisionRecall precision_recall_f1(const ConfusionMatrix& cm) {
  PrecisionRecall r;
  const auto ratio = [](std::size_t num, std::size_t den, bool& degenerate) {
    if (den == 0) {
      degenerate = true;
      return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
  };
  r.precision = ratio(cm.tp, cm.tp + cm.fp, r.precision_degenerate);
  r.recall = ratio(cm.tp, cm.tp + cm.fn, r.recall_degenerate);
  if (r.precision + r.recall == 0.0) {
    r.f1_degenerate = true;
    r.f1 = 0.0;
  } else {
    r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  }
  return r;
}

std::vector<RocPoint> roc_curve(std::span<const int> y_true, std::span<const double> scores) {
  if (y_true.size() != scores.size()) throw PreconditionError("roc_curve: length mismatch");
  std::size_t pos = 0;
  for (int t : y_true) {
    if (t != 0 && t != 1) throw PreconditionError("roc_curve: labels must be 0 or 1");
    pos += static_cast<std::size_t>(t);
  }
  const std::size_t neg = y_true.size() - pos;
  if (pos == 0 || neg == 0) throw PreconditionError("roc_curve needs both classes in y_true");
  for (double s : scores) {
    if (std::isnan(s)) throw PreconditionError("roc_curve: NaN score");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  std::vector<RocPoint> roc;
  roc.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double s = scores[order[i]];
    for (; i < order.size() && scores[order[i]] == s; ++i) {
      if (y_true[order[i]] == 1) ++tp;
      else ++fp;
    }
    roc.push_back({static_cast<double>(fp) / static_cast<double>(neg),
                   static_cast<double>(tp) / static_cast<double>(pos), s});
  }
  return roc;
}

double auc_trapezoid(std::span<const RocPoint> roc) {
  if (roc.size() < 2) throw PreconditionError("ROC curve needs at least two points");
  if (roc.front().fpr != 0.0 || roc.front().tpr != 0.0 || roc.back().fpr != 1.0 ||
      roc.back().tpr != 1.0) {
    throw PreconditionError("ROC curve must start at (0,0) and end at (1,1)");
  }
  double area = 0.0;
  for (std::size_t i = 1; i < roc.size(); ++i) {
    const auto& a = roc[i - 1];
    const auto& b = roc[i];
    if (b.fpr < a.fpr || (b.fpr == a.fpr && b.tpr < a.tpr)) {
      throw PreconditionError("ROC curve is not sorted at point " + std::to_string(i));
    }
    area += (b.fpr - a.fpr) * (a.tpr + b.tpr) * 0.5;
  }
  return area;
}

EvaluationReport evaluate_scores(std::span<const int> y_true, std::span<const double> scores,
                                 double threshold, std::string protocol) {
  std::vector<int> pred(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i)
    pred[i] = label_for_probability(scores[i], threshold);
  EvaluationReport r;
  r.confusion = confusion_matrix(y_true, pred);
  r.accuracy = accuracy(r.confusion);
  r.pr = precision_recall_f1(r.confusion);
  r.roc = roc_curve(y_true, scores);
  r.auc = auc_trapezoid(r.roc);
  r.n_test = y_true.size();
  r.protocol = std::move(protocol);
  return r;
}

// ---------------------------------------------------------------------------
// Text formats

namespace {

std::string fmt_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_real(const std::string& s, const std::string& what) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("invalid number '" + s + "' for " + what);
  }
  return v;
}

std::size_t parse_count(const std::string& s, const std::string& what) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("invalid count '" + s + "' for " + what);
  }
  return v;
}

}  // namespace

std::string report_text(const EvaluationReport& r) {
  std::ostringstream out;
  out << "# evaluation report (positive class = M)\n"
      << "n_test=" << r.n_test << '\n'
      << "tp=" << r.confusion.tp << '\n'
      << "fp=" << r.confusion.fp << '\n'
      << "fn=" << r.confusion.fn << '\n'
      << "tn=" << r.confusion.tn << '\n'
      << "accuracy=" << fmt_real(r.accuracy) << '\n'
      << "precision=" << fmt_real(r.pr.precision) << '\n'
      << "precision_degenerate=" << (r.pr.precision_degenerate ? "true" : "false") << '\n'
      << "recall=" << fmt_real(r.pr.recall) << '\n'
      << "recall_degenerate=" << (r.pr.recall_degenerate ? "true" : "false") << '\n'
      << "f1=" << fmt_real(r.pr.f1) << '\n'
      << "f1_degenerate=" << (r.pr.f1_degenerate ? "true" : "false") << '\n'
      << "auc=" << fmt_real(r.auc) << '\n'
      << "roc_points=" << r.roc.size() << '\n'
      << "protocol=" << r.protocol << '\n';
  return out.str();
}

EvaluationReport parse_report_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("report line without '=': " + line);
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  const auto get = [&](const std::string& key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw ParseError("report is missing field '" + key + "'");
    return it->second;
  };
  EvaluationReport r;
  r.n_test = parse_count(get("n_test"), "n_test");
  r.confusion = {parse_count(get("tp"), "tp"), parse_count(get("fp"), "fp"),
                 parse_count(get("fn"), "fn"), parse_count(get("tn"), "tn")};
  r.accuracy = parse_real(get("accuracy"), "accuracy");
  r.pr.precision = parse_real(get("precision"), "precision");
  r.pr.precision_degenerate = get("precision_degenerate") == "true";
  r.pr.recall = parse_real(get("recall"), "recall");
  r.pr.recall_degenerate = get("recall_degenerate") == "true";
  r.pr.f1 = parse_real(get("f1"), "f1");
  r.pr.f1_degenerate = get("f1_degenerate") == "true";
  r.auc = parse_real(get("auc"), "auc");
  r.protocol = get("protocol");
  return r;
}

std::string roc_csv(std::span<const RocPoint> roc) {
  std::string out = "fpr,tpr\n";
  for (const auto& p : roc) out += fmt_real(p.fpr) + "," + fmt_real(p.tpr) + "\n";
  return out;
}

std::vector<RocPoint> parse_roc_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "fpr,tpr") throw ParseError("ROC CSV must start with 'fpr,tpr'");
  std::vector<RocPoint> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError("ROC CSV line without comma: " + line);
    out.push_back({parse_real(line.substr(0, comma), "fpr"),
                   parse_real(line.substr(comma + 1), "tpr"), 0.0});
  }
  return out;
}

}  // namespace bcpred
