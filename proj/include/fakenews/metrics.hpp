#pragma once

#include <cstddef>
#include <span>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "fakenews/dataset.hpp"

namespace fakenews {

/// 2x2 counts relative to a chosen positive class.
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
  Label positive = Label::fake;

  std::size_t total() const { return tp + fp + fn + tn; }

  /// Labels and predictions are 0 (fake) / 1 (real); sizes must match.
  static ConfusionMatrix tally(std::span<const int> labels, std::span<const int> predicted,
                               Label positive = Label::fake);
  /// Same counts seen from the other class.
  ConfusionMatrix swapped() const { return {tn, fn, fp, tp, positive == Label::fake ? Label::real : Label::fake}; }

  /// {"tp":..,"fp":..,"fn":..,"tn":..}
  nlohmann::json to_json() const;
  /// Actual-by-predicted grid, rows and columns ordered fake, real.
  std::string to_text() const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct Metrics {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  double accuracy = 0;
  /// Set when a ratio was 0/0 and reported as 0.
  bool degenerate = false;
};

/// precision TP/(TP+FP), recall TP/(TP+FN), F1 2TP/(2TP+FP+FN),
/// accuracy (TP+TN)/total. Throws DataError on an all-zero matrix.
Metrics compute_metrics(const ConfusionMatrix& cm);

struct ClassScores {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

struct EvalReport {
  ClassScores fake;
  ClassScores real;
  ClassScores macro;  // unweighted mean of fake and real
  double accuracy = 0;
  ConfusionMatrix confusion;  // fake as positive
  bool degenerate = false;

  nlohmann::json to_json() const;
  /// Aligned table: rows Fake / Real / Average, columns Precision, Recall,
  /// F1 Score, Accuracy.
  std::string to_table() const;
};

/// Scores both classes from (label, prediction) pairs. Throws DataError when empty.
EvalReport evaluate_predictions(std::span<const int> labels, std::span<const int> predicted);

}  // namespace fakenews
