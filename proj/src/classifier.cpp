#include "fakenews/classifier.hpp"

#include "fakenews/error.hpp"
#include "fakenews/trainer.hpp"

namespace fakenews {

Prediction predict(const ModelBundle& model, std::string_view headline,
                   std::string_view content) {
  const auto encoder = model.encoder();
  const auto tokens = encoder.tokens(headline, content);
  const auto ids = pad(encode(tokens, model.vocabulary), encoder.seq_len());
  Prediction out;
  out.empty_text = tokens.empty();
  out.probability = nn::predict_proba<float>(ids, model.params, model.config.clip_epsilon);
  out.label = out.probability >= 0.5 ? Label::real : Label::fake;
  return out;
}

EvalReport evaluate(const ModelBundle& model, const Corpus& test, std::size_t threads) {
  if (test.empty()) throw DataError("empty test set");
  const auto examples = model.encoder().encode_all(test, model.vocabulary);
  const auto probs =
      predict_probabilities(model.params, examples, model.config.clip_epsilon, threads);
  std::vector<int> labels, predicted;
  labels.reserve(examples.size());
  predicted.reserve(examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i) {
    labels.push_back(examples[i].label);
    predicted.push_back(probs[i] >= 0.5f ? 1 : 0);
  }
  return evaluate_predictions(labels, predicted);
}

}  // namespace fakenews
