#ifndef SPAMDET_CORPUS_HPP
#define SPAMDET_CORPUS_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace spamdet {

struct Review {
  std::string review_id;
  std::string reviewer_id;
  std::string product_id;
  std::string category;
  int rating = 0;  // 1..5
  std::string title;
  std::string body;
  std::vector<std::string> sentences;  // bracketed parse trees, may be empty
  bool verified_purchase = false;
  std::string posted_at;  // ISO-8601 calendar date
};

struct Product {
  std::string product_id;
  std::string title;
  std::string description;
  std::string category;
};

// Products named in crowdsourced review-writing tasks.
struct TaskSet {
  std::set<std::string> root_products;
};

enum class Domain { Books, Health, Electronics, Movies, Other };

const char* domain_name(Domain d);
const std::vector<Domain>& all_domains();
// The four evaluated domains (everything but Other).
const std::vector<Domain>& core_domains();

enum class Label { Deceptive, Authentic, Excluded };
const char* label_name(Label l);

struct LabeledReview {
  Review review;
  Label label = Label::Excluded;
  Domain domain = Domain::Other;
};

struct LabeledCorpus {
  std::vector<LabeledReview> reviews;
  std::map<std::string, Product> products;

  const Product* find_product(const std::string& product_id) const;
};

struct Snapshot {
  std::vector<Review> reviews;
  std::map<std::string, Product> products;
  std::set<std::string> reviewer_ids;
};

// Line-delimited JSON readers. Throw std::runtime_error naming the line
// number for malformed records and the id for duplicates.
Snapshot load_reviews(const std::string& path);
std::map<std::string, Product> load_products(const std::string& path);
TaskSet load_tasks(const std::string& path);

Review review_from_json_line(const std::string& line);
std::string review_to_json_line(const Review& r);
std::string product_to_json_line(const Product& p);

// Case-insensitive exact match on the ten merged category names;
// everything else is Other. Total and deterministic.
Domain assign_broad_domain(const std::string& category);

// Two-condition sieve: deceptive iff flagged reviewer AND root-task
// product; authentic iff neither reviewer nor product flagged; everything
// else excluded.
LabeledCorpus sieve_labels(const Snapshot& snapshot,
                           const std::set<std::string>& deceptive_reviewers,
                           const TaskSet& tasks);

// Keeps all deceptive reviews plus a seeded uniform sample (without
// replacement) of ratio x |deceptive| authentic reviews. Throws on
// shortfall, reporting how many authentic reviews are missing.
std::vector<LabeledReview> sample_truthful(
    const std::vector<LabeledReview>& pool, int ratio, std::uint64_t seed);

struct StatsReport {
  struct Cell {
    std::size_t reviews = 0;
    std::size_t reviewers = 0;
    std::size_t products = 0;
  };
  std::map<Label, Cell> by_label;
  std::map<Domain, std::map<Label, Cell>> by_domain;

  std::string to_text() const;
  std::string to_csv() const;
};

StatsReport corpus_stats(const LabeledCorpus& corpus);

// Days since 1970-01-01 for an ISO-8601 date; throws on malformed input.
std::int64_t parse_iso_date(const std::string& date);

}  // namespace spamdet

#endif
