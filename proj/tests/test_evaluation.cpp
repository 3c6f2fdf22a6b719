#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "spamdet/evaluation.hpp"
#include "spamdet/synthetic.hpp"
#include "spamdet/treequery.hpp"

using namespace spamdet;

namespace {

AdPhraseList demo_phrases() {
  return AdPhraseList::parse(
      "highly recommended\nbest ever\ntry it\nmust have\ngreat value\n"
      "works perfectly\nguaranteed\n");
}

CategoryLexicon demo_lexicon() {
  return CategoryLexicon::parse("POSEMO\tgreat\nPOSEMO\tlove*\nI\ti\n");
}

LabeledCorpus small_corpus(std::uint64_t seed = 7) {
  SyntheticSpec spec;
  spec.deceptive_per_domain = {{Domain::Books, 12},
                               {Domain::Health, 12},
                               {Domain::Electronics, 12},
                               {Domain::Movies, 12},
                               {Domain::Other, 12}};
  spec.products_per_domain = 4;
  return generate_synthetic_corpus(spec, demo_phrases(), seed);
}

ProtocolConfig small_config() {
  ProtocolConfig config;
  config.features.families = {Family::UpRules, Family::Pos,
                              Family::AdPhrases, Family::Complexity};
  config.features.min_df = 2;
  config.lexicon = demo_lexicon();
  config.phrases = demo_phrases();
  config.classifier.max_iter = 200;
  return config;
}

}  // namespace

TEST_CASE("prf hand confusion matrix") {
  // gold [D,D,T,T], pred [D,T,D,T]: tp=1 fp=1 fn=1
  auto t = prf({true, false, true, false}, {true, true, false, false});
  CHECK(t.recall == doctest::Approx(0.5));
  CHECK(t.precision == doctest::Approx(0.5));
  CHECK(t.f1 == doctest::Approx(0.5));

  auto perfect = prf({true, false}, {true, false});
  CHECK(perfect.recall == 1.0);
  CHECK(perfect.precision == 1.0);
  CHECK(perfect.f1 == 1.0);

  auto nothing = prf({false, false, false}, {true, true, false});
  CHECK(nothing.recall == 0.0);
  CHECK(nothing.precision == 0.0);
  CHECK(nothing.f1 == 0.0);

  CHECK_THROWS_AS(prf({true}, {false}), std::runtime_error);
  CHECK_THROWS_AS(prf({true, true}, {true}), std::runtime_error);
}

TEST_CASE("prf f1 bound holds on random inputs") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<bool> pred(20), gold(20);
    for (int i = 0; i < 20; ++i) {
      pred[i] = rng() & 1;
      gold[i] = rng() & 1;
    }
    if (std::none_of(gold.begin(), gold.end(), [](bool b) { return b; }))
      gold[0] = true;
    auto t = prf(pred, gold);
    CHECK(t.f1 >= 0.0);
    CHECK(t.f1 <= std::min(2 * t.recall, 2 * t.precision) + 1e-12);
  }
}

TEST_CASE("macro_average is the component-wise mean") {
  std::vector<Triple> rows = {{0.48, 0.61, 0.54},
                              {0.32, 0.64, 0.43},
                              {0.38, 0.54, 0.44},
                              {0.43, 0.55, 0.48}};
  auto m = macro_average(rows);
  CHECK(m.recall == doctest::Approx(0.4025));
  // published rounded figure for this recall row is 40.2
  CHECK(std::abs(m.recall - 0.402) <= 0.005);

  auto single = macro_average({{0.1, 0.2, 0.3}});
  CHECK(single.recall == doctest::Approx(0.1));
  CHECK(single.f1 == doctest::Approx(0.3));

  // permutation invariance
  auto shuffled = rows;
  std::swap(shuffled[0], shuffled[3]);
  std::swap(shuffled[1], shuffled[2]);
  auto m2 = macro_average(shuffled);
  CHECK(m2.recall == doctest::Approx(m.recall));
  CHECK(m2.precision == doctest::Approx(m.precision));
  CHECK(m2.f1 == doctest::Approx(m.f1));
}

TEST_CASE("synthetic corpus is deterministic and plants the ad signal") {
  auto a = small_corpus(123);
  auto b = small_corpus(123);
  REQUIRE(a.reviews.size() == b.reviews.size());
  CHECK(a.reviews.size() == 12 * 4 * 5);
  for (std::size_t i = 0; i < a.reviews.size(); ++i) {
    CHECK(a.reviews[i].review.review_id == b.reviews[i].review.review_id);
    CHECK(a.reviews[i].review.body == b.reviews[i].review.body);
    CHECK(a.reviews[i].label == b.reviews[i].label);
  }
  // empirical ad-phrase presence separates the classes
  auto phrases = demo_phrases();
  double dec_hits = 0, dec_n = 0, aut_hits = 0, aut_n = 0;
  for (const auto& lr : a.reviews) {
    bool hit = !ad_phrase_features(lr.review, phrases).empty();
    if (lr.label == Label::Deceptive) {
      dec_hits += hit;
      ++dec_n;
    } else {
      aut_hits += hit;
      ++aut_n;
    }
  }
  CHECK(dec_hits / dec_n > aut_hits / aut_n + 0.2);
  // planted sentence-length contrast
  double dec_words = 0, aut_words = 0, dec_sents = 0, aut_sents = 0;
  for (const auto& lr : a.reviews) {
    auto profile = complexity_profile(parse_sentences(lr.review));
    if (lr.label == Label::Deceptive) {
      dec_words += profile.words;
      dec_sents += profile.sentences;
    } else {
      aut_words += profile.words;
      aut_sents += profile.sentences;
    }
  }
  CHECK(aut_words / aut_sents > dec_words / dec_sents + 2.0);
}

TEST_CASE("kfold_indomain is deterministic and stratified") {
  auto corpus = small_corpus();
  auto config = small_config();
  auto a = kfold_indomain(corpus, Domain::Books, 4, config, 99);
  auto b = kfold_indomain(corpus, Domain::Books, 4, config, 99);
  CHECK(a.to_csv() == b.to_csv());
  REQUIRE(a.runs.size() == 1);
  CHECK(a.runs[0].per_test.size() == 4);
  for (const auto& [name, t] : a.runs[0].per_test) {
    CHECK(t.recall >= 0.0);
    CHECK(t.recall <= 1.0);
  }
  CHECK(a.meta_macro.f1 == a.runs[0].macro.f1);
  // too many folds for the deceptive count
  CHECK_THROWS_AS(kfold_indomain(corpus, Domain::Books, 100, config, 99),
                  std::runtime_error);
}

TEST_CASE("kfold leave-one-out boundary runs without error") {
  auto corpus = small_corpus();
  auto config = small_config();
  // sampled Books corpus has 12 deceptive + 36 authentic = 48 reviews;
  // folds without a deceptive review are skipped
  auto report = kfold_indomain(corpus, Domain::Books, 48, config, 5);
  CHECK(report.runs[0].per_test.size() == 12);
}

TEST_CASE("cross_domain produces four runs of three tests each") {
  auto corpus = small_corpus();
  auto config = small_config();
  auto report = cross_domain(corpus, config, false, 2718);
  REQUIRE(report.runs.size() == 4);
  std::vector<Triple> macros;
  for (const auto& run : report.runs) {
    CHECK(run.per_test.size() == 3);
    std::vector<Triple> triples;
    for (auto& [name, t] : run.per_test) {
      CHECK(name != run.name);  // never tests on the train domain
      triples.push_back(t);
    }
    CHECK(run.macro.f1 == doctest::Approx(macro_average(triples).f1));
    macros.push_back(run.macro);
  }
  CHECK(report.meta_macro.f1 ==
        doctest::Approx(macro_average(macros).f1));
  CHECK(!report.augmented);

  auto again = cross_domain(corpus, config, false, 2718);
  CHECK(report.to_csv() == again.to_csv());

  auto augmented = cross_domain(corpus, config, true, 2718);
  CHECK(augmented.augmented);
  CHECK(augmented.runs.size() == 4);
}

TEST_CASE("learning curve length and fraction-zero consistency") {
  auto corpus = small_corpus();
  auto config = small_config();
  std::uint64_t seed = 31;
  auto points =
      learning_curve(corpus, Domain::Electronics, {0.0, 0.5, 1.0}, config,
                     seed);
  REQUIRE(points.size() == 3);
  CHECK(points[0].added_deceptive == 0);
  CHECK(points[2].added_deceptive == 12);
  // fraction 0 reproduces the unaugmented cross-domain run for this domain
  auto cross = cross_domain(corpus, config, false, seed);
  const EvalReport::Run* electronics_run = nullptr;
  for (const auto& run : cross.runs)
    if (run.name == "Electronics") electronics_run = &run;
  REQUIRE(electronics_run != nullptr);
  CHECK(points[0].macro_f1 == doctest::Approx(electronics_run->macro.f1));

  auto csv = curve_to_csv(points);
  CHECK(csv.find("fraction,added_deceptive,macro_f1") == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("reviewer transfer rejects overlap and is deterministic") {
  auto corpus = small_corpus();
  auto config = small_config();
  std::set<std::string> dec_ids;
  for (const auto& lr : corpus.reviews)
    if (lr.label == Label::Deceptive) dec_ids.insert(lr.review.reviewer_id);
  REQUIRE(dec_ids.size() >= 4);
  auto it = dec_ids.begin();
  std::set<std::string> train_ids = {*it++, *it++};
  std::set<std::string> test_ids = {*it++, *it++};

  CHECK_THROWS_AS(
      reviewer_transfer(corpus, train_ids, train_ids, config, 1),
      std::runtime_error);

  auto a = reviewer_transfer(corpus, train_ids, test_ids, config, 17);
  auto b = reviewer_transfer(corpus, train_ids, test_ids, config, 17);
  CHECK(a.to_csv() == b.to_csv());
  REQUIRE(a.runs.size() == 1);
  CHECK(a.runs[0].macro.recall >= 0.0);
  CHECK(a.runs[0].macro.recall <= 1.0);
}

TEST_CASE("reports render as text, csv, and json") {
  auto corpus = small_corpus();
  auto config = small_config();
  auto report = kfold_indomain(corpus, Domain::Movies, 3, config, 8);
  auto text = report.to_text();
  CHECK(text.find("protocol: indomain") != std::string::npos);
  CHECK(text.find("Movies") != std::string::npos);
  auto csv = report.to_csv();
  CHECK(csv.find("run,test,recall,precision,f1") == 0);
  auto j = report.to_json();
  CHECK(j.find("\"protocol\"") != std::string::npos);
  CHECK(j.find("\"meta_macro\"") != std::string::npos);
}
