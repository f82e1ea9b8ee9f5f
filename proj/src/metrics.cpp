#include "fakenews/metrics.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "fakenews/error.hpp"

namespace fakenews {
namespace {

double ratio(std::size_t num, std::size_t den, bool& degenerate) {
  if (den == 0) {
    degenerate = true;
    return 0.0;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

nlohmann::json scores_json(const ClassScores& s) {
  return {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
}

std::string pct(double v) { return fmt::format("{:.2f}%", 100.0 * v); }

}  // namespace

ConfusionMatrix ConfusionMatrix::tally(std::span<const int> labels,
                                       std::span<const int> predicted, Label positive) {
  if (labels.size() != predicted.size()) {
    throw DataError("label and prediction counts differ");
  }
  const int pos = static_cast<int>(positive);
  ConfusionMatrix cm;
  cm.positive = positive;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool actual = labels[i] == pos;
    const bool guess = predicted[i] == pos;
    if (actual && guess) ++cm.tp;
    else if (!actual && guess) ++cm.fp;
    else if (actual) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

nlohmann::json ConfusionMatrix::to_json() const {
  return {{"tp", tp}, {"fp", fp}, {"fn", fn}, {"tn", tn}, {"positive", to_string(positive)}};
}

std::string ConfusionMatrix::to_text() const {
  // Map back to actual/predicted by class regardless of which one is positive.
  const ConfusionMatrix f = positive == Label::fake ? *this : swapped();
  std::string out;
  out += fmt::format("{:<14}{:>16}{:>16}\n", "", "predicted fake", "predicted real");
  out += fmt::format("{:<14}{:>16}{:>16}\n", "actual fake", f.tp, f.fn);
  out += fmt::format("{:<14}{:>16}{:>16}\n", "actual real", f.fp, f.tn);
  return out;
}

Metrics compute_metrics(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw DataError("confusion matrix is empty");
  Metrics m;
  m.precision = ratio(cm.tp, cm.tp + cm.fp, m.degenerate);
  m.recall = ratio(cm.tp, cm.tp + cm.fn, m.degenerate);
  m.f1 = ratio(2 * cm.tp, 2 * cm.tp + cm.fp + cm.fn, m.degenerate);
  m.accuracy = ratio(cm.tp + cm.tn, cm.total(), m.degenerate);
  return m;
}

EvalReport evaluate_predictions(std::span<const int> labels, std::span<const int> predicted) {
  if (labels.empty()) throw DataError("empty evaluation set");
  EvalReport r;
  r.confusion = ConfusionMatrix::tally(labels, predicted, Label::fake);
  const Metrics fake = compute_metrics(r.confusion);
  const Metrics real = compute_metrics(r.confusion.swapped());
  r.fake = {fake.precision, fake.recall, fake.f1};
  r.real = {real.precision, real.recall, real.f1};
  r.macro = {(fake.precision + real.precision) / 2.0, (fake.recall + real.recall) / 2.0,
             (fake.f1 + real.f1) / 2.0};
  r.accuracy = fake.accuracy;
  r.degenerate = fake.degenerate || real.degenerate;
  return r;
}

nlohmann::json EvalReport::to_json() const {
  return {{"fake", scores_json(fake)},
          {"real", scores_json(real)},
          {"macro_average", scores_json(macro)},
          {"accuracy", accuracy},
          {"confusion_matrix", confusion.to_json()},
          {"examples", confusion.total()},
          {"degenerate", degenerate}};
}

std::string EvalReport::to_table() const {
  std::string out = fmt::format("{:<10}{:>12}{:>12}{:>12}{:>12}\n", "", "Precision", "Recall",
                                "F1 Score", "Accuracy");
  out += fmt::format("{:<10}{:>12}{:>12}{:>12}{:>12}\n", "Fake", pct(fake.precision),
                     pct(fake.recall), pct(fake.f1), pct(accuracy));
  out += fmt::format("{:<10}{:>12}{:>12}{:>12}\n", "Real", pct(real.precision), pct(real.recall),
                     pct(real.f1));
  out += fmt::format("{:<10}{:>12}{:>12}{:>12}\n", "Average", pct(macro.precision),
                     pct(macro.recall), pct(macro.f1));
  return out;
}

}  // namespace fakenews
