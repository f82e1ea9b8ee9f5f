#pragma once

#include <cstddef>
#include <string_view>

#include "fakenews/bundle.hpp"
#include "fakenews/dataset.hpp"
#include "fakenews/metrics.hpp"

namespace fakenews {

struct Prediction {
  Label label = Label::fake;
  double probability = 0;  // P(real)
  bool empty_text = false; // nothing survived cleaning; input was all padding
};

/// Full preprocessing then forward; real when p >= 0.5.
Prediction predict(const ModelBundle& model, std::string_view headline, std::string_view content);

/// Predicts every document at threshold 0.5 and scores both classes.
EvalReport evaluate(const ModelBundle& model, const Corpus& test, std::size_t threads = 1);

}  // namespace fakenews
