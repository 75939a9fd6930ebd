#include "imbboost/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "imbboost/error.hpp"

namespace imbboost::metrics {

namespace {

Score ratio(double num, double den) {
  if (den == 0.0) return std::nullopt;
  return num / den;
}

void require_same_length(std::size_t a, std::size_t b) {
  if (a != b) throw Error("length mismatch: " + std::to_string(a) + " labels vs " + std::to_string(b) + " values");
}

void require_ordered(std::span<const double> scores) {
  if (std::any_of(scores.begin(), scores.end(), [](double s) { return std::isnan(s); })) {
    throw Error("scores contain NaN");
  }
}

std::string full_precision(const Score& s) {
  if (!s) return {};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", *s);
  return buf;
}

}  // namespace

ConfusionMatrix confusion(std::span<const std::uint8_t> labels, std::span<const std::uint8_t> predictions) {
  require_same_length(labels.size(), predictions.size());
  if (labels.empty()) throw Error("empty input");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool y = labels[i] != 0;
    const bool p = predictions[i] != 0;
    if (y && p) {
      ++cm.tp;
    } else if (!y && p) {
      ++cm.fp;
    } else if (!y && !p) {
      ++cm.tn;
    } else {
      ++cm.fn;
    }
  }
  return cm;
}

Score precision(const ConfusionMatrix& cm) {
  return ratio(static_cast<double>(cm.tp), static_cast<double>(cm.tp + cm.fp));
}

Score recall(const ConfusionMatrix& cm) {
  return ratio(static_cast<double>(cm.tp), static_cast<double>(cm.tp + cm.fn));
}

Score f_beta(const ConfusionMatrix& cm, double beta) {
  const Score p = precision(cm);
  const Score r = recall(cm);
  if (!p || !r) return std::nullopt;
  const double b2 = beta * beta;
  return ratio((1.0 + b2) * *p * *r, b2 * *p + *r);
}

Score accuracy(const ConfusionMatrix& cm) {
  return ratio(static_cast<double>(cm.tp + cm.tn), static_cast<double>(cm.total()));
}

Score mcc(const ConfusionMatrix& cm) {
  const auto tp = static_cast<double>(cm.tp);
  const auto fp = static_cast<double>(cm.fp);
  const auto tn = static_cast<double>(cm.tn);
  const auto fn = static_cast<double>(cm.fn);
  const double den = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
  if (den == 0.0) return std::nullopt;
  return (tp * tn - fp * fn) / std::sqrt(den);
}

MetricReport report(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw Error("empty input: confusion matrix has no samples");
  MetricReport r;
  r.precision = precision(cm);
  r.recall = recall(cm);
  r.f1 = f_beta(cm, 1.0);
  r.f_half = f_beta(cm, 0.5);
  r.f2 = f_beta(cm, 2.0);
  r.accuracy = accuracy(cm);
  r.mcc = mcc(cm);
  r.baseline_prc = static_cast<double>(cm.positives()) / static_cast<double>(cm.total());
  return r;
}

double baseline_prc(std::span<const std::uint8_t> labels) {
  if (labels.empty()) throw Error("empty input");
  const auto p = std::count_if(labels.begin(), labels.end(), [](std::uint8_t y) { return y != 0; });
  return static_cast<double>(p) / static_cast<double>(labels.size());
}

PRCurve pr_curve(std::span<const std::uint8_t> labels, std::span<const double> scores) {
  require_same_length(labels.size(), scores.size());
  require_ordered(scores);
  const auto total_pos =
      static_cast<std::size_t>(std::count_if(labels.begin(), labels.end(), [](std::uint8_t y) { return y != 0; }));
  if (total_pos == 0) throw Error("pr curve undefined: no positive labels");

  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  PRCurve curve;
  std::size_t tp = 0;
  std::size_t seen = 0;
  double prev_recall = 0.0;
  for (std::size_t k = 0; k < order.size();) {
    const double s = scores[order[k]];
    // Every row sharing this score enters together.
    while (k < order.size() && scores[order[k]] == s) {
      tp += labels[order[k]] != 0 ? 1 : 0;
      ++seen;
      ++k;
    }
    const double r = static_cast<double>(tp) / static_cast<double>(total_pos);
    const double p = static_cast<double>(tp) / static_cast<double>(seen);
    curve.points.push_back({s, r, p});
    curve.auc += (r - prev_recall) * p;
    prev_recall = r;
  }
  return curve;
}

double auc_pr(std::span<const std::uint8_t> labels, std::span<const double> scores) {
  return pr_curve(labels, scores).auc;
}

double precision_at_n(std::span<const std::uint8_t> labels, std::span<const double> scores, std::size_t n) {
  require_same_length(labels.size(), scores.size());
  if (n == 0) throw Error("precision@n: n must be positive");
  if (n > labels.size()) throw Error("precision@n: n exceeds the number of rows");
  require_ordered(scores);
  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::size_t hits = 0;
  for (std::size_t k = 0; k < n; ++k) hits += labels[order[k]] != 0 ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(n);
}

std::vector<std::uint8_t> threshold_predictions(std::span<const double> probabilities, double threshold) {
  std::vector<std::uint8_t> out(probabilities.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = probabilities[i] >= threshold ? 1 : 0;
  return out;
}

double f1_at(std::span<const std::uint8_t> labels, std::span<const double> probabilities, double threshold) {
  return f_beta(confusion(labels, threshold_predictions(probabilities, threshold)), 1.0).value_or(0.0);
}

std::string format_score(const Score& s, int decimals) {
  if (!s) return "!";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, *s);
  return buf;
}

std::string report_csv_header() {
  return "tp,fp,tn,fn,precision,recall,f1,f_half,f2,accuracy,mcc,baseline_prc";
}

std::string report_csv_row(const ConfusionMatrix& cm, const MetricReport& r) {
  std::ostringstream os;
  os << cm.tp << ',' << cm.fp << ',' << cm.tn << ',' << cm.fn << ',' << full_precision(r.precision) << ','
     << full_precision(r.recall) << ',' << full_precision(r.f1) << ',' << full_precision(r.f_half) << ','
     << full_precision(r.f2) << ',' << full_precision(r.accuracy) << ',' << full_precision(r.mcc) << ','
     << full_precision(r.baseline_prc);
  return os.str();
}

std::string report_text(const ConfusionMatrix& cm, const MetricReport& r) {
  std::ostringstream os;
  os << "N             " << cm.negatives() << '\n'
     << "P             " << cm.positives() << '\n'
     << "TN            " << cm.tn << '\n'
     << "TP            " << cm.tp << '\n'
     << "FN            " << cm.fn << '\n'
     << "FP            " << cm.fp << '\n'
     << "Precision     " << format_score(r.precision) << '\n'
     << "Recall        " << format_score(r.recall) << '\n'
     << "F1            " << format_score(r.f1) << '\n'
     << "F0.5          " << format_score(r.f_half) << '\n'
     << "F2            " << format_score(r.f2) << '\n'
     << "Accuracy      " << format_score(r.accuracy) << '\n'
     << "MCC           " << format_score(r.mcc) << '\n'
     << "Baseline PRC  " << format_score(r.baseline_prc) << '\n';
  return os.str();
}

void write_pr_curve_csv(const std::filesystem::path& path, const PRCurve& curve) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "recall,precision\n";
  char buf[64];
  for (const auto& p : curve.points) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.recall, p.precision);
    out << buf;
  }
}

}  // namespace imbboost::metrics
