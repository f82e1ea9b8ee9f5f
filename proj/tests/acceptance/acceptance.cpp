// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--real-data PATH] [--only AC4]
//
// The real-data check of AC7 runs only when PATH exists (default
// data/bangla_fake_news.csv in the source tree).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "fakenews/bundle.hpp"
#include "fakenews/classifier.hpp"
#include "fakenews/cli.hpp"
#include "fakenews/dataset.hpp"
#include "fakenews/error.hpp"
#include "fakenews/metrics.hpp"
#include "fakenews/nn.hpp"
#include "fakenews/rng.hpp"
#include "fakenews/synthetic.hpp"
#include "fakenews/text.hpp"
#include "fakenews/vectorizer.hpp"

namespace fs = std::filesystem;
using namespace fakenews;
using json = nlohmann::json;

namespace {

// Collects failed sub-checks of one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void note(const std::string& s) { notes_.push_back(s); }
  bool ok() const { return failures_.empty(); }
  std::string summary() const {
    std::string out;
    for (const auto& n : notes_) out += (out.empty() ? "" : "; ") + n;
    for (const auto& f : failures_) out += (out.empty() ? "FAILED: " : "; FAILED: ") + f;
    return out;
  }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(std::vector<std::string> args, std::string* out_text = nullptr) {
  args.insert(args.begin(), "fakenews");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (out_text) *out_text = out.str();
  if (code != cli::kExitOk) std::cerr << err.str();
  return code;
}

fs::path scratch_dir(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("fakenews_acceptance_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::vector<std::vector<double>> read_history(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::string line;
  std::getline(in, line);  // header
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------

void ac1(Check& c) {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto r = nn::grad_check(nn::grad_check_hyperparams(), seed);
    worst = std::max(worst, r.max_relative_error);
    c.expect(r.max_relative_error < 1e-4, fmt::format("seed {} error {:.3g}", seed, r.max_relative_error));
  }
  const double elapsed = seconds_since(t0);
  c.expect(elapsed < 30.0, fmt::format("runtime {:.1f}s", elapsed));
  const auto broken = nn::grad_check(nn::grad_check_hyperparams(), 1, 1e-3,
                                     [](nn::GradSet<double>& g) { g.W[0] = -g.W[0]; });
  const auto broken_out = nn::grad_check(nn::grad_check_hyperparams(), 1, 1e-3,
                                         [](nn::GradSet<double>& g) { g.b_out = -g.b_out; });
  c.expect(broken.max_relative_error > 0.1, "mutated W gradient not detected");
  c.expect(broken_out.max_relative_error > 0.1, "mutated b_out gradient not detected");
  c.note(fmt::format("max rel error {:.2e} over 3 seeds in {:.2f}s; mutants {:.2f}/{:.2f}", worst,
                     elapsed, broken.max_relative_error, broken_out.max_relative_error));
}

void ac2(Check& c) {
  const auto hand = compute_metrics(ConfusionMatrix{3, 1, 2, 4, Label::fake});
  c.expect(std::abs(hand.precision - 0.75) < 1e-12 && std::abs(hand.recall - 0.6) < 1e-12 &&
               std::abs(hand.f1 - 2.0 / 3.0) < 1e-12 && std::abs(hand.accuracy - 0.7) < 1e-12,
           "hand case");

  Rng rng(20240501);
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> y(1000), p(1000);
    for (std::size_t i = 0; i < y.size(); ++i) {
      y[i] = static_cast<int>(rng.below(2));
      p[i] = static_cast<int>(rng.below(2));
    }
    const auto r = evaluate_predictions(y, p);
    for (int pos : {0, 1}) {
      long tp = 0, fp = 0, fn = 0, tn = 0;
      for (std::size_t i = 0; i < y.size(); ++i) {
        const bool a = y[i] == pos, g = p[i] == pos;
        tp += a && g;
        fp += !a && g;
        fn += a && !g;
        tn += !a && !g;
      }
      const auto cm = ConfusionMatrix::tally(y, p, static_cast<Label>(pos));
      if (cm.tp != static_cast<std::size_t>(tp) || cm.fp != static_cast<std::size_t>(fp) ||
          cm.fn != static_cast<std::size_t>(fn) || cm.tn != static_cast<std::size_t>(tn)) {
        ++mismatches;
      }
      const double prec = tp + fp ? double(tp) / double(tp + fp) : 0.0;
      const double rec = tp + fn ? double(tp) / double(tp + fn) : 0.0;
      const double f1 = prec + rec > 0 ? 2 * prec * rec / (prec + rec) : 0.0;
      const double acc = double(tp + tn) / double(y.size());
      const ClassScores& s = pos == 0 ? r.fake : r.real;
      if (std::abs(s.precision - prec) > 1e-12 || std::abs(s.recall - rec) > 1e-12 ||
          std::abs(s.f1 - f1) > 1e-12 || std::abs(r.accuracy - acc) > 1e-12) {
        ++mismatches;
      }
    }
  }
  c.expect(mismatches == 0, fmt::format("{} oracle mismatches", mismatches));
  c.note("hand case + 100 trials x 1000 pairs, both classes as positive");
}

void ac3(Check& c) {
  const double l1 = nn::bce_loss(0.5, 1), l0 = nn::bce_loss(0.5, 0);
  c.expect(std::abs(l1 - std::numbers::ln2) < 1e-9 && std::abs(l0 - std::numbers::ln2) < 1e-9,
           "bce(0.5) != ln 2");

  nn::Hyperparams hp;
  const auto zero = nn::ModelParams<float>::zeros(hp.vocab_rows, hp.embed_dim, hp.gru_units);
  Rng rng(3);
  std::vector<TokenId> ids(hp.seq_len);
  for (auto& id : ids) id = static_cast<TokenId>(rng.below(hp.vocab_rows));
  c.expect(nn::predict_proba<float>(ids, zero, hp.clip_epsilon) == 0.5f, "zero-weight p != 0.5");

  // Fresh Adam step in 64-bit on gradients with |g| in [1e-3, 10].
  auto params = nn::init_params<double>(hp, 7);
  const auto before = params;
  auto grads = nn::ModelParams<double>::zeros_like(params);
  grads.for_each_tensor([&](std::span<double> s) {
    for (auto& g : s) {
      const double mag = std::pow(10.0, rng.uniform(-3.0, 1.0));
      g = rng.below(2) ? mag : -mag;
    }
  });
  auto state = nn::AdamState<double>::fresh(params);
  nn::adam_step(params, grads, state, hp);
  std::vector<double> a, b, g;
  params.for_each_tensor([&](std::span<const double> s) { a.insert(a.end(), s.begin(), s.end()); });
  before.for_each_tensor([&](std::span<const double> s) { b.insert(b.end(), s.begin(), s.end()); });
  grads.for_each_tensor([&](std::span<const double> s) { g.insert(g.end(), s.begin(), s.end()); });
  double worst = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double target = -hp.learning_rate * (g[i] > 0 ? 1.0 : -1.0);
    worst = std::max(worst, std::abs((a[i] - b[i]) - target) / std::abs(target));
  }
  c.expect(worst < 1e-4, fmt::format("adam first step rel error {:.3g}", worst));
  c.note(fmt::format("|bce-ln2| {:.1e}; adam step rel error {:.2e} over {} entries",
                     std::abs(l1 - std::numbers::ln2), worst, a.size()));
}

void ac4(Check& c) {
  const auto dir = scratch_dir("ac4");
  const auto t0 = std::chrono::steady_clock::now();
  const int train_code = run_cli({"train", "--synthetic", "2000", "--seed", "42", "--out", dir.string()});
  const double train_s = seconds_since(t0);
  c.expect(train_code == cli::kExitOk, "train failed");
  if (train_code != cli::kExitOk) return;
  const int eval_code = run_cli({"evaluate", "--model", (dir / "model.bundle").string()});
  const double total_s = seconds_since(t0);
  c.expect(eval_code == cli::kExitOk, "evaluate failed");
  if (eval_code != cli::kExitOk) return;

  const auto hist = read_history(dir / "history.csv");
  c.expect(hist.size() == 10, "history does not have 10 epochs");
  const auto report = json::parse(slurp(dir / "eval_report.json"));
  const double acc = report["accuracy"];
  c.expect(acc >= 0.95, fmt::format("test accuracy {:.4f}", acc));
  if (hist.size() == 10) {
    c.expect(hist[9][1] < hist[0][1], "epoch-10 loss not below epoch 1");
    c.note(fmt::format("loss {:.4f} -> {:.4f}", hist[0][1], hist[9][1]));
  }
  c.expect(total_s < 300.0, fmt::format("runtime {:.1f}s", total_s));
  c.note(fmt::format("test accuracy {:.4f} on {} docs; train {:.1f}s, total {:.1f}s", acc,
                     report["examples"].get<int>(), train_s, total_s));
}

void ac5(Check& c) {
  Rng rng(55);
  const auto& sv = synthetic_vocabulary();

  // Oversampling and splits on skewed corpora.
  for (int trial = 0; trial < 20; ++trial) {
    Corpus corpus;
    const std::size_t n_fake = 10 + rng.below(100), n_real = 10 + rng.below(300);
    for (std::size_t i = 0; i < n_fake + n_real; ++i) {
      corpus.documents.push_back({fmt::format("h{}", i), fmt::format("c{} {}", i, rng.below(1000)),
                                  i < n_fake ? Label::fake : Label::real});
    }
    rng.shuffle(std::span(corpus.documents));
    const auto split = stratified_split(corpus, {}, trial);
    const auto again = stratified_split(corpus, {}, trial);
    c.expect(split.train_rows == again.train_rows && split.test_rows == again.test_rows,
             "split not deterministic");
    std::vector<std::size_t> all = split.train_rows;
    all.insert(all.end(), split.validation_rows.begin(), split.validation_rows.end());
    all.insert(all.end(), split.test_rows.begin(), split.test_rows.end());
    std::sort(all.begin(), all.end());
    bool covering = all.size() == corpus.size();
    for (std::size_t i = 0; covering && i < all.size(); ++i) covering = all[i] == i;
    c.expect(covering, "split parts not disjoint/covering");
    const auto whole = class_counts(corpus);
    const double q = double(whole.fake) / double(corpus.size());
    for (const Corpus* part : {&split.train, &split.validation, &split.test}) {
      const auto cc = class_counts(*part);
      c.expect(std::abs(double(cc.fake) - double(part->size()) * q) <= 1.0 + 1e-9 &&
                   std::abs(double(cc.real) - double(part->size()) * (1 - q)) <= 1.0 + 1e-9,
               "split not stratified within 1 document");
    }

    const auto over = oversample(split.train, trial);
    const auto oc = class_counts(over);
    c.expect(oc.fake == oc.real, "oversample not balanced");
    bool prefix = std::equal(split.train.documents.begin(), split.train.documents.end(),
                             over.documents.begin());
    c.expect(prefix, "oversample lost or reordered originals");
    std::set<std::string> originals;
    for (const auto& d : split.train.documents) originals.insert(d.headline + '\x1f' + d.content);
    for (std::size_t i = split.train.size(); i < over.size(); ++i) {
      const auto& d = over.documents[i];
      c.expect(originals.count(d.headline + '\x1f' + d.content) == 1, "oversample invented a document");
    }
  }

  // Padding and cleaning.
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<TokenId> ids(rng.below(300));
    for (auto& id : ids) id = static_cast<TokenId>(rng.below(50));
    c.expect(pad(ids, 100).size() == 100, "pad length != 100");

    std::string raw;
    const std::size_t n = rng.below(30);
    for (std::size_t i = 0; i < n; ++i) {
      switch (rng.below(4)) {
        case 0: raw += sv.filler[rng.below(sv.filler.size())]; break;
        case 1: raw += "।,!?\t\n"[rng.below(6)]; break;
        case 2: raw += static_cast<char>('A' + rng.below(26)); break;
        default: raw += "\xe0\xa6"; raw += static_cast<char>(0x80 + rng.below(64)); break;
      }
      if (rng.below(2)) raw += ' ';
    }
    const auto once = clean_text(raw);
    c.expect(clean_text(once.value).value == once.value, "clean_text not idempotent");
  }

  // Vocabulary cap and tie-breaking.
  std::vector<TokenSequence> streams = {{"b", "a", "c", "a", "d", "b", "e"}};
  const auto v = build_vocab(streams, 3);
  c.expect(v.words() == std::vector<std::string>{"b", "a", "c"}, "vocabulary order");
  c.expect(v.id_of("b") == 2 && v.id_of("d") == kOovId, "vocabulary ids");
  for (int trial = 0; trial < 20; ++trial) {
    TokenSequence t(500);
    for (auto& w : t) w = sv.filler[rng.below(sv.filler.size())];
    const std::vector<TokenSequence> s1 = {t};
    const auto cap = 1 + rng.below(40);
    const auto v1 = build_vocab(s1, cap), v2 = build_vocab(s1, cap);
    c.expect(v1 == v2 && v1.size() <= cap, "vocabulary cap/determinism");
  }

  c.expect(encode_label("fake") == 0 && encode_label("real") == 1, "label encoding");
  c.note("splits, oversampling, padding, cleaning, vocabulary, labels");
}

void ac6(Check& c) {
  const auto dir = scratch_dir("ac6");
  std::vector<std::string> args = {"train", "--synthetic", "200", "--epochs", "3", "--threads", "1"};
  auto a = args, b = args;
  a.insert(a.end(), {"--out", (dir / "a").string()});
  b.insert(b.end(), {"--out", (dir / "b").string()});
  c.expect(run_cli(a) == cli::kExitOk && run_cli(b) == cli::kExitOk, "train failed");
  const auto ha = slurp(dir / "a/history.csv"), hb = slurp(dir / "b/history.csv");
  c.expect(!ha.empty() && ha == hb, "history CSV differs between identical runs");

  const auto bundle_path = dir / "a/model.bundle";
  const auto original = load_model(bundle_path);
  const auto resaved = dir / "resaved.bundle";
  save_model(original, resaved);
  const auto loaded = load_model(resaved);
  c.expect(slurp(resaved) == slurp(bundle_path), "re-serialised bundle differs");

  Rng rng(66);
  const auto& sv = synthetic_vocabulary();
  std::size_t differ = 0;
  for (int i = 0; i < 100; ++i) {
    std::string h, t;
    for (std::size_t k = rng.below(6); k > 0; --k) h += sv.fake_keywords[rng.below(20)] + " ";
    for (std::size_t k = rng.below(40); k > 0; --k) {
      const auto& pool = rng.below(2) ? sv.filler : sv.real_keywords;
      t += pool[rng.below(pool.size())] + " ";
    }
    const auto p1 = predict(original, h, t), p2 = predict(loaded, h, t);
    differ += p1.probability != p2.probability || p1.label != p2.label;
  }
  c.expect(differ == 0, fmt::format("{} of 100 predictions differ after reload", differ));

  const auto bytes = slurp(bundle_path);
  std::string diagnostic;
  try {
    deserialize_bundle(std::string_view(bytes).substr(0, bytes.size() - 4));
  } catch (const DataError& e) {
    diagnostic = e.what();
  }
  c.expect(!diagnostic.empty(), "truncated bundle accepted");
  c.note(fmt::format("history {} bytes identical; 100/100 predictions equal; truncation -> \"{}\"",
                     ha.size(), diagnostic));
}

void ac7(Check& c, const fs::path& real_data) {
  const auto dir = scratch_dir("ac7");
  save_corpus(make_synthetic_corpus(400, 9), dir / "input.csv");
  {
    std::ofstream cfg(dir / "config.json");
    cfg << json{{"data_path", (dir / "input.csv").string()},
                {"output_dir", (dir / "run").string()},
                {"embed_dim", 32},
                {"gru_units", 16},
                {"seq_len", 40},
                {"learning_rate", 3e-3},
                {"epochs", 4}}
               .dump(2);
  }
  const std::string cfg = (dir / "config.json").string();
  c.expect(run_cli({"prepare", "--config", cfg}) == cli::kExitOk, "prepare failed");
  c.expect(run_cli({"train", "--config", cfg}) == cli::kExitOk, "train failed");
  std::string report;
  c.expect(run_cli({"evaluate", "--model", (dir / "run/model.bundle").string()}, &report) ==
               cli::kExitOk,
           "evaluate failed");
  const auto table = slurp(dir / "run/eval_report.txt");
  for (const char* row : {"Precision", "Recall", "F1 Score", "Accuracy", "Fake", "Real", "Average"}) {
    c.expect(table.find(row) != std::string::npos, fmt::format("report lacks \"{}\"", row));
  }
  c.note("CSV prepare/train/evaluate OK");

  if (real_data.empty() || !fs::exists(real_data)) {
    c.note("real-data check SKIPPED (no file at " + (real_data.empty() ? std::string("<none>") : real_data.string()) + ")");
    return;
  }
  const auto real_dir = scratch_dir("ac7_real");
  c.expect(run_cli({"prepare", "--data", real_data.string(), "--out", real_dir.string()}) ==
               cli::kExitOk,
           "real-data prepare failed");
  const auto load = json::parse(slurp(real_dir / "load_report.json"));
  const auto counts = json::parse(slurp(real_dir / "class_counts.json"));
  const std::size_t kept = load["kept"], distinct = counts["distinct_tokens_corpus"],
                    vocab = counts["vocabulary_size"];
  c.expect(kept == 58478, fmt::format("loaded {} rows, expected 58478", kept));
  c.expect(distinct == 100534, fmt::format("{} distinct tokens, expected 100534", distinct));
  c.expect(vocab == 10000, fmt::format("vocabulary {} words, expected 10000", vocab));
  c.expect(run_cli({"train", "--data", real_data.string(), "--out", real_dir.string()}) ==
               cli::kExitOk,
           "real-data train failed");
  c.expect(run_cli({"evaluate", "--model", (real_dir / "model.bundle").string()}) == cli::kExitOk,
           "real-data evaluate failed");
  c.note(fmt::format("real data: {} rows, {} distinct tokens, vocabulary {}", kept, distinct, vocab));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  std::string real_data = std::string(FAKENEWS_SOURCE_DIR) + "/data/bangla_fake_news.csv";
  std::vector<std::string> only;
  app.add_option("--real-data", real_data, "Full labelled corpus for the conditional check");
  app.add_option("--only", only, "Run only these criteria (e.g. AC4)");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<void(Check&)>>> criteria = {
      {"AC1 gradient check", ac1},
      {"AC2 metric oracle", ac2},
      {"AC3 closed-form values", ac3},
      {"AC4 end-to-end learning", ac4},
      {"AC5 pipeline invariants", ac5},
      {"AC6 reproducibility and persistence", ac6},
      {"AC7 CSV pathway", [&](Check& c) { ac7(c, real_data); }},
  };

  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    if (!only.empty() && std::none_of(only.begin(), only.end(), [&](const std::string& o) {
          return name.starts_with(o + " ");
        })) {
      continue;
    }
    Check c;
    try {
      fn(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    failed += !c.ok();
    std::cout << (c.ok() ? "[PASS] " : "[FAIL] ") << name << " -- " << c.summary() << std::endl;
  }
  std::cout << (failed ? fmt::format("{} criteria failed\n", failed) : "all criteria passed\n");
  return failed ? 1 : 0;
}
