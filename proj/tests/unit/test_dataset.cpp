#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>

#include <nlohmann/json.hpp>

#include "fakenews/dataset.hpp"
#include "fakenews/error.hpp"
#include "fakenews/rng.hpp"

using namespace fakenews;

namespace {

Corpus make_corpus(std::size_t fake, std::size_t real, std::uint64_t seed = 0) {
  Corpus c;
  Rng rng(seed);
  std::size_t i = 0;
  while (fake + real > 0) {
    const bool pick_fake = fake > 0 && (real == 0 || rng.below(fake + real) < fake);
    const Label label = pick_fake ? Label::fake : Label::real;
    (pick_fake ? fake : real) -= 1;
    c.documents.push_back({"headline " + std::to_string(i), "content " + std::to_string(i), label});
    ++i;
  }
  return c;
}

std::size_t doc_hash(const Document& d) {
  return std::hash<std::string>{}(d.headline + '\x1f' + d.content + '\x1f' +
                                  std::string(to_string(d.label)));
}

}  // namespace

TEST_CASE("load drops rows with a blank field") {
  const std::string text =
      "headLine,content,label\n"
      "h1,c1,fake\n"
      "h2,,real\n"
      "h3,c3,Real \n"
      "h4,c4,FAKE\n"
      "h5,c5,real\n";
  LoadReport report;
  const auto corpus = parse_corpus(text, "mem", &report);
  CHECK(corpus.size() == 4);
  CHECK(report.data_rows == 5);
  CHECK(report.dropped_missing == 1);
  CHECK(corpus.documents[1].label == Label::real);
  CHECK(corpus.documents[2].label == Label::fake);
  CHECK(report.to_json()["kept"] == 4);
}

TEST_CASE("load matches header names case-insensitively in any order") {
  const auto corpus = parse_corpus("LABEL,extra,Content,HEADLINE\nreal,x,body,title\n", "mem");
  REQUIRE(corpus.size() == 1);
  CHECK(corpus.documents[0] == Document{"title", "body", Label::real});
}

TEST_CASE("load counts unparseable labels separately") {
  LoadReport report;
  const auto corpus = parse_corpus("headLine,content,label\na,b,satire\nc,d,fake\n   ,e,fake\n",
                                   "mem", &report);
  CHECK(corpus.size() == 1);
  CHECK(report.dropped_bad_label == 1);
  CHECK(report.dropped_missing == 1);
}

TEST_CASE("load errors") {
  CHECK_THROWS_WITH_AS(parse_corpus("headLine,content,label\n", "mem"), doctest::Contains("empty corpus"),
                       DataError);
  CHECK_THROWS_AS(parse_corpus("headLine,label\nx,fake\n", "mem"), DataError);
  CHECK_THROWS_AS(load_corpus("/nonexistent/definitely/missing.csv"), DataError);
  CHECK_THROWS_WITH_AS(parse_corpus("headLine,content,label\n\"x,y,fake\n", "mem"),
                       doctest::Contains("line 2"), DataError);
}

TEST_CASE("save and load round-trip a corpus with awkward text") {
  Corpus c;
  c.documents = {{"কমা, \"উদ্ধৃতি\"", "দুই\nলাইন", Label::fake}, {"plain", "text", Label::real}};
  const auto path = std::filesystem::temp_directory_path() / "fakenews_roundtrip.csv";
  save_corpus(c, path);
  const auto back = load_corpus(path);
  CHECK(back.documents == c.documents);
  std::filesystem::remove(path);
}

TEST_CASE("class_counts") {
  Corpus c;
  c.documents = {{"a", "a", Label::fake}, {"b", "b", Label::fake}, {"c", "c", Label::real}};
  CHECK(class_counts(c) == ClassCounts{2, 1});
  CHECK(class_counts(Corpus{}) == ClassCounts{0, 0});

  // Scan-and-tally oracle on a random corpus.
  const auto big = make_corpus(437, 563, 9);
  std::size_t fake = 0, real = 0;
  for (const auto& d : big.documents) {
    if (to_string(d.label) == "fake") ++fake;
    else ++real;
  }
  CHECK(class_counts(big) == ClassCounts{fake, real});
  CHECK(class_counts(big).total() == big.size());
}

TEST_CASE("stratified split of a balanced 100-document corpus") {
  const auto c = make_corpus(50, 50, 1);
  const auto s = stratified_split(c, {0.8, 0.1, 0.1}, 42);
  CHECK(class_counts(s.train) == ClassCounts{40, 40});
  CHECK(class_counts(s.validation) == ClassCounts{5, 5});
  CHECK(class_counts(s.test) == ClassCounts{5, 5});

  const auto again = stratified_split(c, {0.8, 0.1, 0.1}, 42);
  CHECK(again.train_rows == s.train_rows);
  CHECK(again.validation_rows == s.validation_rows);
  CHECK(again.test_rows == s.test_rows);
  CHECK(stratified_split(c, {0.8, 0.1, 0.1}, 43).test_rows != s.test_rows);
}

TEST_CASE("stratified split of 997 documents matches an independent re-partition") {
  const auto c = make_corpus(297, 700, 3);
  const std::uint64_t seed = 11;
  const SplitRatios ratios{0.8, 0.1, 0.1};
  const auto s = stratified_split(c, ratios, seed);

  // Oracle: same seed policy, written independently.
  Rng rng(derive_seed(seed, "stratified_split"));
  std::set<std::size_t> train, val, test;
  for (Label label : {Label::fake, Label::real}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c.documents[i].label == label) idx.push_back(i);
    }
    for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng.below(i)]);
    const auto nv = static_cast<std::size_t>(std::floor(idx.size() * ratios.validation + 0.5));
    const auto nt = static_cast<std::size_t>(std::floor(idx.size() * ratios.test + 0.5));
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (k < idx.size() - nv - nt) train.insert(idx[k]);
      else if (k < idx.size() - nt) val.insert(idx[k]);
      else test.insert(idx[k]);
    }
  }
  CHECK(std::vector<std::size_t>(train.begin(), train.end()) == s.train_rows);
  CHECK(std::vector<std::size_t>(val.begin(), val.end()) == s.validation_rows);
  CHECK(std::vector<std::size_t>(test.begin(), test.end()) == s.test_rows);

  // Hand arithmetic: fake 297 -> 30/30/237, real 700 -> 70/70/560.
  CHECK(class_counts(s.train) == ClassCounts{237, 560});
  CHECK(class_counts(s.validation) == ClassCounts{30, 70});
  CHECK(class_counts(s.test) == ClassCounts{30, 70});
}

TEST_CASE("split invariants hold for random corpora and ratios") {
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t fake = 3 + rng.below(200);
    const std::size_t real = 3 + rng.below(200);
    const auto c = make_corpus(fake, real, trial);
    const double val = 0.05 + 0.25 * rng.unit();
    const double test = 0.05 + 0.25 * rng.unit();
    const SplitRatios ratios{1.0 - val - test, val, test};
    const auto s = stratified_split(c, ratios, trial);

    std::vector<std::size_t> all;
    for (const auto* rows : {&s.train_rows, &s.validation_rows, &s.test_rows}) {
      all.insert(all.end(), rows->begin(), rows->end());
    }
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> expected(c.size());
    for (std::size_t i = 0; i < expected.size(); ++i) expected[i] = i;
    REQUIRE(all == expected);  // disjoint and covering

    const auto whole = class_counts(c);
    const std::pair<const Corpus*, double> parts[] = {
        {&s.train, ratios.train}, {&s.validation, ratios.validation}, {&s.test, ratios.test}};
    ClassCounts sum;
    for (const auto& [part, r] : parts) {
      const auto cc = class_counts(*part);
      sum.fake += cc.fake;
      sum.real += cc.real;
      CHECK(std::abs(static_cast<double>(cc.fake) - r * whole.fake) <= 1.0 + 1e-9);
      CHECK(std::abs(static_cast<double>(cc.real) - r * whole.real) <= 1.0 + 1e-9);
      // Class share of the part against the whole, in documents.
      const double n_part = static_cast<double>(part->size());
      const double q = static_cast<double>(whole.fake) / static_cast<double>(c.size());
      CHECK(std::abs(static_cast<double>(cc.fake) - n_part * q) <= 1.0 + 1e-9);
      CHECK(std::abs(static_cast<double>(cc.real) - n_part * (1.0 - q)) <= 1.0 + 1e-9);
    }
    CHECK(sum == whole);
  }
}

TEST_CASE("split errors") {
  CHECK_THROWS_WITH_AS(stratified_split(make_corpus(2, 50), {}, 1),
                       doctest::Contains("class too small to stratify"), DataError);
  CHECK_THROWS_AS(stratified_split(make_corpus(10, 10), {0.8, 0.1, 0.2}, 1), ConfigError);
  CHECK_THROWS_AS(stratified_split(make_corpus(10, 10), {0.9, 0.1, 0.0}, 1), ConfigError);
}

TEST_CASE("oversample 5 real / 2 fake") {
  const auto c = make_corpus(2, 5, 4);
  const auto out = oversample(c, 1);
  CHECK(class_counts(out) == ClassCounts{5, 5});
  REQUIRE(out.size() == 10);
  CHECK(std::equal(c.documents.begin(), c.documents.end(), out.documents.begin()));
  for (std::size_t i = c.size(); i < out.size(); ++i) {
    CHECK(out.documents[i].label == Label::fake);
    CHECK(std::find(c.documents.begin(), c.documents.end(), out.documents[i]) != c.documents.end());
  }
}

TEST_CASE("oversample is the identity on balanced input") {
  const auto c = make_corpus(4, 4, 2);
  CHECK(oversample(c, 9).documents == c.documents);
  const auto balanced = oversample(make_corpus(3, 17, 5), 5);
  CHECK(oversample(balanced, 123).documents == balanced.documents);
}

TEST_CASE("oversample 480 real / 13 fake: every added row is an original fake row") {
  const auto c = make_corpus(13, 480, 6);
  const auto out = oversample(c, 7);
  CHECK(out.size() == 960);
  CHECK(class_counts(out) == ClassCounts{480, 480});
  std::set<std::size_t> fake_hashes;
  for (const auto& d : c.documents) {
    if (d.label == Label::fake) fake_hashes.insert(doc_hash(d));
  }
  REQUIRE(fake_hashes.size() == 13);
  for (const auto& d : out.documents) {
    if (d.label == Label::fake) CHECK(fake_hashes.count(doc_hash(d)) == 1);
  }
  CHECK(oversample(c, 7).documents == out.documents);
}

TEST_CASE("oversample rejects single-class input") {
  CHECK_THROWS_WITH_AS(oversample(make_corpus(0, 5), 1), doctest::Contains("nothing to balance"),
                       DataError);
}

TEST_CASE("oversampling the training split leaves validation and test untouched") {
  const auto c = make_corpus(60, 240, 8);
  const auto s = stratified_split(c, {}, 3);
  const auto train = oversample(s.train, 3);
  std::set<std::size_t> train_hashes;
  for (const auto& d : train.documents) train_hashes.insert(doc_hash(d));
  for (const auto* part : {&s.validation, &s.test}) {
    for (const auto& d : part->documents) CHECK(train_hashes.count(doc_hash(d)) == 0);
  }
}
