#include "spamdet/corpus.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace spamdet {

namespace {

using nlohmann::json;

std::string lower_ascii(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

[[noreturn]] void line_error(const std::string& path, std::size_t line_no,
                             const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

template <typename Fn>
void for_each_line(const std::string& path, Fn fn) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    fn(line, line_no);
  }
}

}  // namespace

const char* domain_name(Domain d) {
  switch (d) {
    case Domain::Books: return "Books";
    case Domain::Health: return "Health";
    case Domain::Electronics: return "Electronics";
    case Domain::Movies: return "Movies";
    case Domain::Other: return "Other";
  }
  return "?";
}

const std::vector<Domain>& all_domains() {
  static const std::vector<Domain> d = {Domain::Books, Domain::Health,
                                        Domain::Electronics, Domain::Movies,
                                        Domain::Other};
  return d;
}

const std::vector<Domain>& core_domains() {
  static const std::vector<Domain> d = {Domain::Books, Domain::Health,
                                        Domain::Electronics, Domain::Movies};
  return d;
}

const char* label_name(Label l) {
  switch (l) {
    case Label::Deceptive: return "deceptive";
    case Label::Authentic: return "authentic";
    case Label::Excluded: return "excluded";
  }
  return "?";
}

const Product* LabeledCorpus::find_product(
    const std::string& product_id) const {
  auto it = products.find(product_id);
  return it == products.end() ? nullptr : &it->second;
}

Review review_from_json_line(const std::string& line) {
  json j = json::parse(line);
  Review r;
  r.review_id = j.at("review_id").get<std::string>();
  r.reviewer_id = j.at("reviewer_id").get<std::string>();
  r.product_id = j.at("product_id").get<std::string>();
  r.category = j.at("category").get<std::string>();
  r.rating = j.at("rating").get<int>();
  if (r.rating < 1 || r.rating > 5)
    throw std::runtime_error("rating out of range [1,5]: " +
                             std::to_string(r.rating));
  r.title = j.value("title", "");
  r.body = j.value("body", "");
  if (j.contains("sentences"))
    r.sentences = j.at("sentences").get<std::vector<std::string>>();
  r.verified_purchase = j.value("verified_purchase", false);
  r.posted_at = j.value("posted_at", "");
  if (!r.posted_at.empty()) parse_iso_date(r.posted_at);
  return r;
}

std::string review_to_json_line(const Review& r) {
  json j;
  j["review_id"] = r.review_id;
  j["reviewer_id"] = r.reviewer_id;
  j["product_id"] = r.product_id;
  j["category"] = r.category;
  j["rating"] = r.rating;
  j["title"] = r.title;
  j["body"] = r.body;
  j["sentences"] = r.sentences;
  j["verified_purchase"] = r.verified_purchase;
  j["posted_at"] = r.posted_at;
  return j.dump();
}

std::string product_to_json_line(const Product& p) {
  json j;
  j["product_id"] = p.product_id;
  j["title"] = p.title;
  j["description"] = p.description;
  j["category"] = p.category;
  return j.dump();
}

Snapshot load_reviews(const std::string& path) {
  Snapshot snap;
  std::set<std::string> seen;
  for_each_line(path, [&](const std::string& line, std::size_t line_no) {
    Review r;
    try {
      r = review_from_json_line(line);
    } catch (const std::exception& e) {
      line_error(path, line_no, std::string("malformed review: ") + e.what());
    }
    if (!seen.insert(r.review_id).second)
      line_error(path, line_no, "duplicate id " + r.review_id);
    snap.reviewer_ids.insert(r.reviewer_id);
    snap.reviews.push_back(std::move(r));
  });
  return snap;
}

std::map<std::string, Product> load_products(const std::string& path) {
  std::map<std::string, Product> products;
  for_each_line(path, [&](const std::string& line, std::size_t line_no) {
    Product p;
    try {
      json j = json::parse(line);
      p.product_id = j.at("product_id").get<std::string>();
      p.title = j.value("title", "");
      p.description = j.value("description", "");
      p.category = j.value("category", "");
    } catch (const std::exception& e) {
      line_error(path, line_no, std::string("malformed product: ") + e.what());
    }
    if (!products.emplace(p.product_id, p).second)
      line_error(path, line_no, "duplicate id " + p.product_id);
  });
  return products;
}

TaskSet load_tasks(const std::string& path) {
  TaskSet tasks;
  for_each_line(path, [&](const std::string& line, std::size_t line_no) {
    try {
      json j = json::parse(line);
      tasks.root_products.insert(j.at("product_id").get<std::string>());
    } catch (const std::exception& e) {
      line_error(path, line_no, std::string("malformed task: ") + e.what());
    }
  });
  return tasks;
}

Domain assign_broad_domain(const std::string& category) {
  const std::string c = lower_ascii(category);
  if (c == "hardcover" || c == "paperback" || c == "kindle edition")
    return Domain::Books;
  if (c == "health and beauty" || c == "health and personal care")
    return Domain::Health;
  if (c == "electronics" || c == "personal computers" || c == "cell phones")
    return Domain::Electronics;
  if (c == "movies and tv" || c == "dvd") return Domain::Movies;
  return Domain::Other;
}

LabeledCorpus sieve_labels(const Snapshot& snapshot,
                           const std::set<std::string>& deceptive_reviewers,
                           const TaskSet& tasks) {
  LabeledCorpus corpus;
  corpus.products = snapshot.products;
  corpus.reviews.reserve(snapshot.reviews.size());
  for (const auto& r : snapshot.reviews) {
    bool reviewer_flagged = deceptive_reviewers.count(r.reviewer_id) > 0;
    bool product_flagged = tasks.root_products.count(r.product_id) > 0;
    LabeledReview lr;
    lr.review = r;
    lr.domain = assign_broad_domain(r.category);
    if (reviewer_flagged && product_flagged) {
      lr.label = Label::Deceptive;
    } else if (!reviewer_flagged && !product_flagged) {
      lr.label = Label::Authentic;
    } else {
      lr.label = Label::Excluded;
    }
    corpus.reviews.push_back(std::move(lr));
  }
  return corpus;
}

std::vector<LabeledReview> sample_truthful(
    const std::vector<LabeledReview>& pool, int ratio, std::uint64_t seed) {
  if (ratio < 1) throw std::runtime_error("sampling ratio must be >= 1");
  std::vector<LabeledReview> out;
  std::vector<std::size_t> authentic_idx;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (pool[i].label == Label::Deceptive) out.push_back(pool[i]);
    else if (pool[i].label == Label::Authentic) authentic_idx.push_back(i);
  }
  std::size_t want = out.size() * static_cast<std::size_t>(ratio);
  if (authentic_idx.size() < want) {
    throw std::runtime_error(
        "not enough authentic reviews: need " + std::to_string(want) +
        ", have " + std::to_string(authentic_idx.size()) + " (shortfall " +
        std::to_string(want - authentic_idx.size()) + ")");
  }
  std::mt19937_64 rng(seed);
  std::shuffle(authentic_idx.begin(), authentic_idx.end(), rng);
  authentic_idx.resize(want);
  std::sort(authentic_idx.begin(), authentic_idx.end());
  for (std::size_t i : authentic_idx) out.push_back(pool[i]);
  return out;
}

StatsReport corpus_stats(const LabeledCorpus& corpus) {
  StatsReport report;
  std::map<Label, std::set<std::string>> reviewers, products;
  std::map<Domain, std::map<Label, std::set<std::string>>> d_reviewers,
      d_products;
  for (const auto& lr : corpus.reviews) {
    report.by_label[lr.label].reviews++;
    reviewers[lr.label].insert(lr.review.reviewer_id);
    products[lr.label].insert(lr.review.product_id);
    report.by_domain[lr.domain][lr.label].reviews++;
    d_reviewers[lr.domain][lr.label].insert(lr.review.reviewer_id);
    d_products[lr.domain][lr.label].insert(lr.review.product_id);
  }
  for (auto& [label, cell] : report.by_label) {
    cell.reviewers = reviewers[label].size();
    cell.products = products[label].size();
  }
  for (auto& [domain, cells] : report.by_domain) {
    for (auto& [label, cell] : cells) {
      cell.reviewers = d_reviewers[domain][label].size();
      cell.products = d_products[domain][label].size();
    }
  }
  return report;
}

namespace {

const std::vector<Label> kLabels = {Label::Deceptive, Label::Authentic,
                                    Label::Excluded};

StatsReport::Cell cell_of(const std::map<Label, StatsReport::Cell>& m,
                          Label l) {
  auto it = m.find(l);
  return it == m.end() ? StatsReport::Cell{} : it->second;
}

}  // namespace

std::string StatsReport::to_text() const {
  std::ostringstream os;
  auto row = [&](const std::string& name,
                 const std::map<Label, Cell>& cells) {
    os << name;
    os << std::string(name.size() < 14 ? 14 - name.size() : 1, ' ');
    for (Label l : kLabels) {
      Cell c = cell_of(cells, l);
      std::string t = std::to_string(c.reviews) + "/" +
                      std::to_string(c.reviewers) + "/" +
                      std::to_string(c.products);
      os << t << std::string(t.size() < 20 ? 20 - t.size() : 1, ' ');
    }
    os << "\n";
  };
  os << "scope         deceptive r/u/p    authentic r/u/p    excluded "
        "r/u/p\n";
  row("all", by_label);
  for (Domain d : all_domains()) {
    auto it = by_domain.find(d);
    row(domain_name(d), it == by_domain.end()
                            ? std::map<Label, Cell>{}
                            : it->second);
  }
  return os.str();
}

std::string StatsReport::to_csv() const {
  std::ostringstream os;
  os << "scope,label,reviews,reviewers,products\n";
  auto rows = [&](const std::string& name,
                  const std::map<Label, Cell>& cells) {
    for (Label l : kLabels) {
      Cell c = cell_of(cells, l);
      os << name << "," << label_name(l) << "," << c.reviews << ","
         << c.reviewers << "," << c.products << "\n";
    }
  };
  rows("all", by_label);
  for (Domain d : all_domains()) {
    auto it = by_domain.find(d);
    rows(domain_name(d), it == by_domain.end()
                             ? std::map<Label, Cell>{}
                             : it->second);
  }
  return os.str();
}

std::int64_t parse_iso_date(const std::string& date) {
  int y = 0, m = 0, d = 0;
  char dash1 = 0, dash2 = 0;
  std::istringstream is(date);
  is >> y >> dash1 >> m >> dash2 >> d;
  if (is.fail() || dash1 != '-' || dash2 != '-' || m < 1 || m > 12 || d < 1 ||
      d > 31)
    throw std::runtime_error("malformed ISO-8601 date: " + date);
  std::chrono::year_month_day ymd{std::chrono::year{y},
                                  std::chrono::month{unsigned(m)},
                                  std::chrono::day{unsigned(d)}};
  if (!ymd.ok()) throw std::runtime_error("invalid calendar date: " + date);
  return std::chrono::sys_days(ymd).time_since_epoch().count();
}

}  // namespace spamdet
