#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "spamdet/corpus.hpp"

using namespace spamdet;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path.string();
}

std::string review_line(const std::string& id, const std::string& reviewer,
                        const std::string& product, int rating = 5,
                        const std::string& category = "Kindle Edition") {
  return "{\"review_id\":\"" + id + "\",\"reviewer_id\":\"" + reviewer +
         "\",\"product_id\":\"" + product + "\",\"category\":\"" + category +
         "\",\"rating\":" + std::to_string(rating) +
         ",\"title\":\"t\",\"body\":\"b\",\"sentences\":[],"
         "\"verified_purchase\":true,\"posted_at\":\"2015-03-02\"}";
}

}  // namespace

TEST_CASE("load_reviews parses well-formed records") {
  auto path = write_temp("spamdet_reviews_ok.jsonl",
                         review_line("r1", "u1", "p1") + "\n" +
                             review_line("r2", "u1", "p2") + "\n" +
                             review_line("r3", "u2", "p1") + "\n");
  Snapshot snap = load_reviews(path);
  CHECK(snap.reviews.size() == 3);
  CHECK(snap.reviewer_ids.size() == 2);
  CHECK(snap.reviews[0].rating == 5);
  CHECK(snap.reviews[0].verified_purchase);
}

TEST_CASE("duplicate review ids are rejected with the id") {
  auto path = write_temp("spamdet_reviews_dup.jsonl",
                         review_line("r1", "u1", "p1") + "\n" +
                             review_line("r1", "u2", "p2") + "\n");
  CHECK_THROWS_WITH_AS(load_reviews(path),
                       doctest::Contains("duplicate id r1"),
                       std::runtime_error);
}

TEST_CASE("out-of-range rating names the line") {
  auto path = write_temp("spamdet_reviews_rating.jsonl",
                         review_line("r1", "u1", "p1") + "\n" +
                             review_line("r2", "u1", "p2", 7) + "\n");
  CHECK_THROWS_WITH_AS(load_reviews(path), doctest::Contains(":2:"),
                       std::runtime_error);
}

TEST_CASE("malformed json names the line") {
  auto path = write_temp("spamdet_reviews_bad.jsonl",
                         review_line("r1", "u1", "p1") + "\nnot json\n");
  CHECK_THROWS_WITH_AS(load_reviews(path), doctest::Contains(":2:"),
                       std::runtime_error);
}

TEST_CASE("assign_broad_domain maps the ten categories and defaults to Other") {
  CHECK(assign_broad_domain("Kindle Edition") == Domain::Books);
  CHECK(assign_broad_domain("Hardcover") == Domain::Books);
  CHECK(assign_broad_domain("Paperback") == Domain::Books);
  CHECK(assign_broad_domain("Health and Beauty") == Domain::Health);
  CHECK(assign_broad_domain("Health and Personal Care") == Domain::Health);
  CHECK(assign_broad_domain("Electronics") == Domain::Electronics);
  CHECK(assign_broad_domain("Personal Computers") == Domain::Electronics);
  CHECK(assign_broad_domain("Cell Phones") == Domain::Electronics);
  CHECK(assign_broad_domain("Movies and TV") == Domain::Movies);
  CHECK(assign_broad_domain("DVD") == Domain::Movies);
  CHECK(assign_broad_domain("Kitchen") == Domain::Other);
  CHECK(assign_broad_domain("") == Domain::Other);
  // case-insensitive exact match
  CHECK(assign_broad_domain("kindle edition") == Domain::Books);
  CHECK(assign_broad_domain("dvd") == Domain::Movies);
  CHECK(assign_broad_domain("Kindle Editions") == Domain::Other);
}

TEST_CASE("sieve label truth table") {
  Snapshot snap;
  snap.reviews = {
      review_from_json_line(review_line("r1", "flagged", "task_p")),
      review_from_json_line(review_line("r2", "flagged", "clean_p")),
      review_from_json_line(review_line("r3", "clean", "task_p")),
      review_from_json_line(review_line("r4", "clean", "clean_p")),
  };
  TaskSet tasks;
  tasks.root_products = {"task_p"};
  LabeledCorpus corpus = sieve_labels(snap, {"flagged"}, tasks);
  REQUIRE(corpus.reviews.size() == 4);
  CHECK(corpus.reviews[0].label == Label::Deceptive);
  CHECK(corpus.reviews[1].label == Label::Excluded);
  CHECK(corpus.reviews[2].label == Label::Excluded);
  CHECK(corpus.reviews[3].label == Label::Authentic);
}

TEST_CASE("sieve soundness is directly assertable") {
  Snapshot snap;
  for (int i = 0; i < 40; ++i) {
    snap.reviews.push_back(review_from_json_line(review_line(
        "r" + std::to_string(i), "u" + std::to_string(i % 7),
        "p" + std::to_string(i % 5))));
  }
  TaskSet tasks;
  tasks.root_products = {"p0", "p3"};
  std::set<std::string> flagged = {"u1", "u4"};
  LabeledCorpus corpus = sieve_labels(snap, flagged, tasks);
  for (const auto& lr : corpus.reviews) {
    if (lr.label == Label::Deceptive) {
      CHECK(flagged.count(lr.review.reviewer_id) == 1);
      CHECK(tasks.root_products.count(lr.review.product_id) == 1);
    } else if (lr.label == Label::Authentic) {
      CHECK(flagged.count(lr.review.reviewer_id) == 0);
      CHECK(tasks.root_products.count(lr.review.product_id) == 0);
    }
  }
}

namespace {
std::vector<LabeledReview> make_pool(int deceptive, int authentic) {
  std::vector<LabeledReview> pool;
  for (int i = 0; i < deceptive + authentic; ++i) {
    LabeledReview lr;
    lr.review.review_id = "r" + std::to_string(i);
    lr.label = i < deceptive ? Label::Deceptive : Label::Authentic;
    pool.push_back(lr);
  }
  return pool;
}
}  // namespace

TEST_CASE("sample_truthful keeps deceptive reviews and samples 3x authentic") {
  auto pool = make_pool(10, 100);
  auto sample = sample_truthful(pool, 3, 42);
  CHECK(sample.size() == 40);
  int dec = 0, aut = 0;
  for (const auto& lr : sample) {
    (lr.label == Label::Deceptive ? dec : aut)++;
  }
  CHECK(dec == 10);
  CHECK(aut == 30);
}

TEST_CASE("sample_truthful is seed-deterministic") {
  auto pool = make_pool(10, 100);
  auto a = sample_truthful(pool, 3, 42);
  auto b = sample_truthful(pool, 3, 42);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(a[i].review.review_id == b[i].review.review_id);
  // Different seed: deceptive set identical, authentic subset may differ.
  auto c = sample_truthful(pool, 3, 43);
  for (std::size_t i = 0; i < 10; ++i)
    CHECK(a[i].review.review_id == c[i].review.review_id);
}

TEST_CASE("sample_truthful reports the shortfall") {
  auto pool = make_pool(10, 20);
  CHECK_THROWS_WITH_AS(sample_truthful(pool, 3, 1),
                       doctest::Contains("shortfall 10"), std::runtime_error);
}

TEST_CASE("corpus_stats counts per label and per domain") {
  Snapshot snap;
  snap.reviews = {
      review_from_json_line(review_line("r1", "u1", "p1", 5, "Kindle Edition")),
      review_from_json_line(review_line("r2", "u1", "p2", 5, "DVD")),
      review_from_json_line(review_line("r3", "u2", "p1", 5, "Kindle Edition")),
  };
  TaskSet tasks;
  tasks.root_products = {"p1"};
  LabeledCorpus corpus = sieve_labels(snap, {"u1"}, tasks);
  StatsReport stats = corpus_stats(corpus);
  CHECK(stats.by_label[Label::Deceptive].reviews == 1);
  CHECK(stats.by_label[Label::Excluded].reviews == 2);
  CHECK(stats.by_domain[Domain::Books][Label::Deceptive].reviews == 1);
  CHECK(stats.to_csv().find("Books,deceptive,1,1,1") != std::string::npos);

  StatsReport empty = corpus_stats(LabeledCorpus{});
  CHECK(empty.by_label.empty());
  CHECK(empty.to_csv().find("all,deceptive,0,0,0") != std::string::npos);
}

TEST_CASE("parse_iso_date accepts calendar dates and rejects junk") {
  CHECK(parse_iso_date("1970-01-01") == 0);
  CHECK(parse_iso_date("1970-01-02") == 1);
  CHECK(parse_iso_date("2015-03-02") > 16000);
  CHECK_THROWS_AS(parse_iso_date("2015-13-02"), std::runtime_error);
  CHECK_THROWS_AS(parse_iso_date("2015-02-30"), std::runtime_error);
  CHECK_THROWS_AS(parse_iso_date("yesterday"), std::runtime_error);
}
