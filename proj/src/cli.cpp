#include "fakenews/cli.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "fakenews/bundle.hpp"
#include "fakenews/classifier.hpp"
#include "fakenews/config.hpp"
#include "fakenews/csv.hpp"
#include "fakenews/dataset.hpp"
#include "fakenews/error.hpp"
#include "fakenews/rng.hpp"
#include "fakenews/synthetic.hpp"
#include "fakenews/trainer.hpp"

namespace fakenews::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::string_view kSyntheticPrefix = "synthetic:";
constexpr double kGradCheckTolerance = 1e-4;

// Flags that overlay a RunConfig. Only options given on the command line
// override the config file.
struct ConfigFlags {
  std::string config_file;
  RunConfig values;
  std::string text_source;
  std::string lemmatizer;
  std::size_t synthetic = 0;
  bool no_oversample = false;
  CLI::Option* synthetic_opt = nullptr;
  CLI::Option* no_oversample_opt = nullptr;
  CLI::Option* text_source_opt = nullptr;
  CLI::Option* lemmatizer_opt = nullptr;
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> setters;

  template <typename M>
  void bind(CLI::App& app, const std::string& name, M RunConfig::*member,
            const std::string& desc) {
    auto* opt = app.add_option(name, values.*member, desc);
    setters.emplace_back(opt, [this, member](RunConfig& c) { c.*member = values.*member; });
  }

  void add_to(CLI::App& app, bool data_flags) {
    app.add_option("--config", config_file, "JSON config file; flags override its values")
        ->check(CLI::ExistingFile);
    bind(app, "--out", &RunConfig::output_dir, "Output directory");
    bind(app, "--seed", &RunConfig::seed, "Seed for splits, oversampling, init and shuffling");
    bind(app, "--threads", &RunConfig::threads, "Worker threads (results do not depend on it)");
    if (!data_flags) return;
    bind(app, "--data", &RunConfig::data_path, "Input CSV with headLine, content, label columns");
    synthetic_opt = app.add_option("--synthetic", synthetic,
                                   "Use a generated keyword-separable corpus of N documents");
    auto* tr = app.add_option("--train-ratio", values.ratios.train, "Training fraction");
    auto* va = app.add_option("--val-ratio", values.ratios.validation, "Validation fraction");
    auto* te = app.add_option("--test-ratio", values.ratios.test, "Test fraction");
    setters.emplace_back(tr, [this](RunConfig& c) { c.ratios.train = values.ratios.train; });
    setters.emplace_back(va, [this](RunConfig& c) { c.ratios.validation = values.ratios.validation; });
    setters.emplace_back(te, [this](RunConfig& c) { c.ratios.test = values.ratios.test; });
    no_oversample_opt = app.add_flag("--no-oversample", no_oversample,
                                     "Keep the training split's class imbalance");
    text_source_opt = app.add_option("--text-source", text_source, "headline, content or both");
    lemmatizer_opt = app.add_option("--lemmatizer", lemmatizer, "identity or suffix_strip");
    bind(app, "--suffix-file", &RunConfig::suffix_file, "Suffix list, one per line (UTF-8)");
    bind(app, "--max-words", &RunConfig::max_words, "Vocabulary cap (content words)");
    bind(app, "--seq-len", &RunConfig::seq_len, "Padded sequence length");
    bind(app, "--embed-dim", &RunConfig::embed_dim, "Embedding dimension");
    bind(app, "--gru-units", &RunConfig::gru_units, "GRU hidden units");
    bind(app, "--lr", &RunConfig::learning_rate, "Adam learning rate");
    bind(app, "--beta1", &RunConfig::beta1, "Adam beta1");
    bind(app, "--beta2", &RunConfig::beta2, "Adam beta2");
    bind(app, "--adam-epsilon", &RunConfig::adam_epsilon, "Adam epsilon");
    bind(app, "--clip-epsilon", &RunConfig::clip_epsilon, "Probability clipping epsilon");
    bind(app, "--batch-size", &RunConfig::batch_size, "Mini-batch size");
    bind(app, "--epochs", &RunConfig::epochs, "Training epochs");
  }

  RunConfig resolve(RunConfig base = {}) const {
    RunConfig c = config_file.empty() ? std::move(base)
                                      : RunConfig::from_file(config_file, std::move(base));
    for (const auto& [opt, set] : setters) {
      if (opt->count() > 0) set(c);
    }
    if (synthetic_opt && synthetic_opt->count() > 0) {
      c.data_path = std::string(kSyntheticPrefix) + std::to_string(synthetic);
    }
    if (no_oversample_opt && no_oversample_opt->count() > 0) c.oversample = false;
    if (text_source_opt && text_source_opt->count() > 0) c.text_source = parse_text_source(text_source);
    if (lemmatizer_opt && lemmatizer_opt->count() > 0) c.lemmatizer = parse_lemma_mode(lemmatizer);
    c.validate();
    return c;
  }
};

void write_file(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("file not found or unreadable: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string hex64(std::uint64_t v) { return fmt::format("{:016x}", v); }

struct LoadedData {
  Corpus corpus;
  LoadReport report;
  std::string input_hash;
};

LoadedData load_data(const RunConfig& cfg) {
  if (cfg.data_path.empty()) throw ConfigError("no input data: pass --data FILE or --synthetic N");
  LoadedData d;
  if (cfg.data_path.starts_with(kSyntheticPrefix)) {
    std::size_t n = 0;
    try {
      n = std::stoul(cfg.data_path.substr(kSyntheticPrefix.size()));
    } catch (const std::exception&) {
      throw ConfigError("bad synthetic data spec: " + cfg.data_path);
    }
    d.corpus = make_synthetic_corpus(n, cfg.seed);
    d.report.data_rows = d.report.kept = d.corpus.size();
    d.input_hash = hex64(fnv1a64(corpus_to_csv(d.corpus)));
    return d;
  }
  const std::string text = read_file(cfg.data_path);
  d.input_hash = hex64(fnv1a64(text));
  d.corpus = parse_corpus(text, cfg.data_path, &d.report);
  return d;
}

std::vector<std::string> resolve_suffixes(const RunConfig& cfg) {
  if (cfg.lemmatizer == LemmaMode::identity) return {};
  if (cfg.suffix_file.empty()) return Lemmatizer::default_suffixes();
  return Lemmatizer::read_suffix_file(cfg.suffix_file);
}

// Split, rebalance and vocabulary shared by prepare and train.
struct Prepared {
  LoadedData data;
  SplitSet split;
  Corpus train;  // oversampled when enabled
  std::vector<std::string> suffixes;
  Vocabulary vocabulary;
  std::size_t distinct_tokens = 0;         // training split
  std::size_t corpus_distinct_tokens = 0;  // whole corpus
};

Prepared prepare_data(const RunConfig& cfg) {
  Prepared p;
  p.data = load_data(cfg);
  p.split = stratified_split(p.data.corpus, cfg.ratios, cfg.seed);
  p.train = cfg.oversample ? oversample(p.split.train, cfg.seed) : p.split.train;
  p.suffixes = resolve_suffixes(cfg);
  const TextEncoder encoder(cfg.text_source, Lemmatizer(cfg.lemmatizer, p.suffixes), cfg.seq_len);
  VocabBuilder builder;
  encoder.count(p.split.train, builder);
  p.distinct_tokens = builder.distinct();
  p.vocabulary = builder.build(cfg.max_words);
  VocabBuilder whole;
  encoder.count(p.data.corpus, whole);
  p.corpus_distinct_tokens = whole.distinct();
  return p;
}

json counts_json(const ClassCounts& c) { return {{"fake", c.fake}, {"real", c.real}}; }

json run_manifest(std::string_view command, const RunConfig& cfg, const std::string& input_hash) {
  return {{"command", command},
          {"config", cfg.to_json()},
          {"seed", cfg.seed},
          {"inputs", {{"data_path", cfg.data_path}, {"fnv1a64", input_hash}}}};
}

fs::path ensure_dir(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw DataError("cannot create output directory " + dir + ": " + ec.message());
  return p;
}

int cmd_prepare(const RunConfig& cfg, std::ostream& out) {
  const auto p = prepare_data(cfg);
  const auto dir = ensure_dir(cfg.output_dir);
  write_file(dir / "load_report.json", p.data.report.to_json().dump(2) + "\n");
  const json counts = {{"corpus", counts_json(class_counts(p.data.corpus))},
                       {"train", counts_json(class_counts(p.split.train))},
                       {"train_oversampled", counts_json(class_counts(p.train))},
                       {"validation", counts_json(class_counts(p.split.validation))},
                       {"test", counts_json(class_counts(p.split.test))},
                       {"distinct_tokens_train", p.distinct_tokens},
                       {"distinct_tokens_corpus", p.corpus_distinct_tokens},
                       {"vocabulary_size", p.vocabulary.size()}};
  write_file(dir / "class_counts.json", counts.dump(2) + "\n");
  const json splits = {{"seed", cfg.seed},
                       {"ratios", {cfg.ratios.train, cfg.ratios.validation, cfg.ratios.test}},
                       {"train", p.split.train_rows},
                       {"validation", p.split.validation_rows},
                       {"test", p.split.test_rows}};
  write_file(dir / "splits.json", splits.dump() + "\n");
  write_file(dir / "vocabulary.json", p.vocabulary.to_json().dump() + "\n");
  write_file(dir / "run_manifest.json", run_manifest("prepare", cfg, p.data.input_hash).dump(2) + "\n");

  out << fmt::format("rows loaded: {} (dropped {} missing, {} bad label)\n", p.data.report.kept,
                     p.data.report.dropped_missing, p.data.report.dropped_bad_label);
  out << fmt::format("split train/val/test: {}/{}/{} (train after oversampling: {})\n",
                     p.split.train.size(), p.split.validation.size(), p.split.test.size(),
                     p.train.size());
  out << fmt::format("distinct tokens: {} corpus, {} train; vocabulary size: {}\n",
                     p.corpus_distinct_tokens, p.distinct_tokens, p.vocabulary.size());
  return kExitOk;
}

int cmd_train(const RunConfig& cfg, std::ostream& out) {
  const auto p = prepare_data(cfg);
  ModelBundle bundle;
  bundle.config = cfg;
  bundle.suffixes = p.suffixes;
  bundle.vocabulary = p.vocabulary;
  const auto encoder = bundle.encoder();
  const auto train_set = encoder.encode_all(p.train, p.vocabulary);
  const auto val_set = encoder.encode_all(p.split.validation, p.vocabulary);

  TrainOptions opts;
  opts.threads = cfg.threads;
  opts.on_epoch = [&out](const EpochRecord& r) {
    out << fmt::format("epoch {:>3}  loss {:.6f}  acc {:.4f}  val_loss {:.6f}  val_acc {:.4f}\n",
                       r.epoch, r.train_loss, r.train_accuracy, r.val_loss, r.val_accuracy)
        << std::flush;
  };
  auto result = train(train_set, val_set, bundle.hyperparams(), opts);
  bundle.params = std::move(result.params);

  const auto dir = ensure_dir(cfg.output_dir);
  save_model(bundle, dir / "model.bundle");
  write_file(dir / "history.csv", history_csv(result.history));
  write_file(dir / "run_manifest.json", run_manifest("train", cfg, p.data.input_hash).dump(2) + "\n");
  out << "model written to " << (dir / "model.bundle").string() << "\n";
  return kExitOk;
}

struct EvalArgs {
  std::string model;
  std::string split = "test";
  std::string data;
  std::size_t synthetic = 0;
  std::string out_dir;
  std::size_t threads = 0;
};

int cmd_evaluate(const EvalArgs& args, std::ostream& out) {
  const auto bundle = load_model(args.model);
  // Split settings come from the bundle so the held-out part is the one used in training.
  RunConfig cfg = bundle.config;
  if (!args.data.empty()) cfg.data_path = args.data;
  if (args.synthetic > 0) cfg.data_path = std::string(kSyntheticPrefix) + std::to_string(args.synthetic);
  const std::size_t threads = args.threads > 0 ? args.threads : cfg.threads;
  const std::string out_dir = args.out_dir.empty() ? cfg.output_dir : args.out_dir;
  const std::string& split_name = args.split;

  const auto data = load_data(cfg);
  const auto split = stratified_split(data.corpus, cfg.ratios, cfg.seed);
  const Corpus* part = nullptr;
  if (split_name == "test") part = &split.test;
  else if (split_name == "validation") part = &split.validation;
  else part = &data.corpus;

  const auto report = evaluate(bundle, *part, threads);
  const auto dir = ensure_dir(out_dir);
  write_file(dir / "eval_report.json", report.to_json().dump(2) + "\n");
  write_file(dir / "eval_report.txt", report.to_table());
  write_file(dir / "confusion_matrix.json", report.confusion.to_json().dump(2) + "\n");
  write_file(dir / "confusion_matrix.txt", report.confusion.to_text());
  RunConfig manifest_cfg = cfg;
  manifest_cfg.output_dir = out_dir;
  json manifest = run_manifest("evaluate", manifest_cfg, data.input_hash);
  manifest["model"] = args.model;
  manifest["split"] = split_name;
  write_file(dir / "run_manifest.json", manifest.dump(2) + "\n");

  out << fmt::format("evaluated {} documents ({} split)\n", part->size(), split_name);
  out << report.to_table() << "\n" << report.confusion.to_text();
  if (report.degenerate) out << "warning: some metrics were 0/0 and are reported as 0\n";
  return kExitOk;
}

json prediction_json(const Prediction& p) {
  return {{"label", to_string(p.label)}, {"probability", p.probability}};
}

int cmd_predict(const std::string& model_path, const std::string& headline,
                const std::string& content, const std::string& input_csv,
                const std::string& output_csv, std::ostream& out, std::ostream& err) {
  const auto bundle = load_model(model_path);
  if (input_csv.empty()) {
    const auto p = predict(bundle, headline, content);
    if (p.empty_text) err << "warning: no usable text after cleaning; predicting on padding only\n";
    out << prediction_json(p).dump() << "\n";
    return kExitOk;
  }

  const auto records = csv::parse(read_file(input_csv));
  if (records.empty()) throw DataError("empty input CSV: " + input_csv);
  std::optional<std::size_t> col_h, col_c;
  for (std::size_t i = 0; i < records[0].fields.size(); ++i) {
    std::string name = records[0].fields[i];
    for (char& ch : name) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (name == "headline" && !col_h) col_h = i;
    if (name == "content" && !col_c) col_c = i;
  }
  if (!col_h && !col_c) throw DataError("input CSV needs a headLine or content column");
  std::string result = "row,label,probability\n";
  std::size_t empty_rows = 0;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& f = records[r].fields;
    auto get = [&](std::optional<std::size_t> c) {
      return c && *c < f.size() ? std::string_view(f[*c]) : std::string_view{};
    };
    const auto p = predict(bundle, get(col_h), get(col_c));
    empty_rows += p.empty_text;
    result += fmt::format("{},{},{:.9g}\n", r, to_string(p.label), p.probability);
  }
  if (empty_rows) err << "warning: " << empty_rows << " rows had no usable text after cleaning\n";
  if (output_csv.empty()) {
    out << result;
  } else {
    write_file(output_csv, result);
  }
  return kExitOk;
}

int cmd_gradcheck(const std::vector<std::uint64_t>& seeds, std::ostream& out) {
  double worst = 0;
  json runs = json::array();
  for (auto seed : seeds) {
    const auto r = nn::grad_check(nn::grad_check_hyperparams(), seed);
    worst = std::max(worst, r.max_relative_error);
    runs.push_back({{"seed", seed},
                    {"max_relative_error", r.max_relative_error},
                    {"entries", r.entries_checked}});
  }
  const bool pass = worst < kGradCheckTolerance;
  out << json{{"max_relative_error", worst},
              {"tolerance", kGradCheckTolerance},
              {"pass", pass},
              {"runs", runs}}
             .dump()
      << "\n";
  return pass ? kExitOk : kExitNumeric;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bangla fake-news detection with a from-scratch GRU classifier", "fakenews"};
  app.require_subcommand(1);
  app.fallthrough(false);

  ConfigFlags prepare_flags, train_flags;
  auto* prepare_cmd = app.add_subcommand("prepare", "Load, split, rebalance and build the vocabulary");
  prepare_flags.add_to(*prepare_cmd, true);

  auto* train_cmd = app.add_subcommand("train", "Train a model and write model.bundle + history.csv");
  train_flags.add_to(*train_cmd, true);

  auto* eval_cmd = app.add_subcommand("evaluate", "Score a model on a held-out split");
  EvalArgs eval_args;
  eval_cmd->add_option("--model", eval_args.model, "Model bundle")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--split", eval_args.split, "test, validation or all")
      ->check(CLI::IsMember({"test", "validation", "all"}));
  eval_cmd->add_option("--data", eval_args.data,
                       "Input CSV (defaults to the one recorded in the bundle)");
  eval_cmd->add_option("--synthetic", eval_args.synthetic, "Use the generated corpus of N documents");
  eval_cmd->add_option("--out", eval_args.out_dir, "Output directory (defaults to the bundle's)");
  eval_cmd->add_option("--threads", eval_args.threads, "Worker threads");

  auto* predict_cmd = app.add_subcommand("predict", "Classify one document or a CSV of documents");
  std::string pred_model, headline, content, input_csv, output_csv;
  predict_cmd->add_option("--model", pred_model, "Model bundle")->required()->check(CLI::ExistingFile);
  auto* h_opt = predict_cmd->add_option("--headline", headline, "Headline text");
  auto* c_opt = predict_cmd->add_option("--content", content, "Content text");
  auto* in_opt = predict_cmd->add_option("--input", input_csv, "CSV with headLine/content columns")
                     ->check(CLI::ExistingFile);
  predict_cmd->add_option("--output", output_csv, "Write predictions CSV here instead of stdout");
  in_opt->excludes(h_opt)->excludes(c_opt);

  auto* grad_cmd = app.add_subcommand("gradcheck", "Compare analytic and numeric gradients");
  std::vector<std::uint64_t> seeds{1, 2, 3};
  grad_cmd->add_option("--seed", seeds, "Seeds to check (repeatable)");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (prepare_cmd->parsed()) return cmd_prepare(prepare_flags.resolve(), out);
    if (train_cmd->parsed()) return cmd_train(train_flags.resolve(), out);
    if (eval_cmd->parsed()) return cmd_evaluate(eval_args, out);
    if (predict_cmd->parsed()) {
      if (input_csv.empty() && h_opt->count() == 0 && c_opt->count() == 0) {
        throw ConfigError("predict needs --headline/--content or --input");
      }
      return cmd_predict(pred_model, headline, content, input_csv, output_csv, out, err);
    }
    if (grad_cmd->parsed()) return cmd_gradcheck(seeds, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace fakenews::cli
