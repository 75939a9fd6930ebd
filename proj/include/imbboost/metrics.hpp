#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace imbboost::metrics {

struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::uint64_t positives() const { return tp + fn; }
  std::uint64_t negatives() const { return tn + fp; }
  std::uint64_t total() const { return tp + fp + tn + fn; }

  bool operator==(const ConfusionMatrix&) const = default;
};

// A score, or nullopt when its denominator is zero (printed as "!").
using Score = std::optional<double>;

struct MetricReport {
  Score precision;
  Score recall;
  Score f1;
  Score f_half;
  Score f2;
  Score accuracy;
  Score mcc;
  double baseline_prc = 0.0;
};

ConfusionMatrix confusion(std::span<const std::uint8_t> labels, std::span<const std::uint8_t> predictions);

Score precision(const ConfusionMatrix& cm);
Score recall(const ConfusionMatrix& cm);
// (1 + b^2) P R / (b^2 P + R); undefined if P or R is, or the denominator is 0.
Score f_beta(const ConfusionMatrix& cm, double beta);
Score accuracy(const ConfusionMatrix& cm);
Score mcc(const ConfusionMatrix& cm);

MetricReport report(const ConfusionMatrix& cm);

double baseline_prc(std::span<const std::uint8_t> labels);

struct PRPoint {
  double threshold = 0.0;
  double recall = 0.0;
  double precision = 0.0;
};

struct PRCurve {
  // One point per distinct score, strictest threshold first.
  std::vector<PRPoint> points;
  // Average precision: sum over points of (R_i - R_{i-1}) * P_i.
  double auc = 0.0;
};

PRCurve pr_curve(std::span<const std::uint8_t> labels, std::span<const double> scores);
double auc_pr(std::span<const std::uint8_t> labels, std::span<const double> scores);

// Precision among the n highest scores; ties keep original row order.
double precision_at_n(std::span<const std::uint8_t> labels, std::span<const double> scores, std::size_t n);

std::vector<std::uint8_t> threshold_predictions(std::span<const double> probabilities, double threshold = 0.5);

// F1 at the threshold, with an undefined F1 counted as 0.
double f1_at(std::span<const std::uint8_t> labels, std::span<const double> probabilities, double threshold = 0.5);

// "0.50"-style two-decimal text, "!" when undefined.
std::string format_score(const Score& s, int decimals = 2);

std::string report_csv_header();
std::string report_csv_row(const ConfusionMatrix& cm, const MetricReport& r);
std::string report_text(const ConfusionMatrix& cm, const MetricReport& r);
void write_pr_curve_csv(const std::filesystem::path& path, const PRCurve& curve);

}  // namespace imbboost::metrics
