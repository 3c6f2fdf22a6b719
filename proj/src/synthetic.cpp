#include "spamdet/synthetic.hpp"

#include <algorithm>

namespace spamdet {

namespace {

ParseTree leaf(const std::string& word) {
  ParseTree t;
  t.token = word;
  return t;
}

ParseTree pt(const std::string& tag, const std::string& word) {
  ParseTree t;
  t.label = tag;
  t.children.push_back(leaf(word));
  return t;
}

ParseTree node(const std::string& label, std::vector<ParseTree> children) {
  ParseTree t;
  t.label = label;
  t.children = std::move(children);
  return t;
}

const std::vector<std::string> kNouns = {
    "book",   "story",  "battery", "screen", "cream",  "lotion",
    "film",   "plot",   "device",  "charger", "flavor", "bottle",
    "cover",  "author", "cable",   "scent",   "ending", "camera"};
const std::vector<std::string> kAdjectives = {
    "great", "solid", "bright", "smooth", "long", "strange",
    "quiet", "heavy", "small",  "clear",  "soft", "odd"};
const std::vector<std::string> kVerbsPresent = {"works", "looks", "feels",
                                                "smells", "reads", "runs"};
const std::vector<std::string> kVerbsPast = {"bought",  "noticed", "expected",
                                             "returned", "enjoyed", "found"};

template <typename T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& pool) {
  std::uniform_int_distribution<std::size_t> d(0, pool.size() - 1);
  return pool[d(rng)];
}

bool coin(std::mt19937_64& rng, double p) {
  std::uniform_real_distribution<double> d(0.0, 1.0);
  return d(rng) < p;
}

ParseTree simple_np(std::mt19937_64& rng, bool with_adj) {
  std::vector<ParseTree> kids;
  kids.push_back(pt("DT", coin(rng, 0.5) ? "the" : "a"));
  if (with_adj) kids.push_back(pt("JJ", pick(rng, kAdjectives)));
  kids.push_back(pt("NN", pick(rng, kNouns)));
  return node("NP", std::move(kids));
}

ParseTree pp(std::mt19937_64& rng) {
  return node("PP", {pt("IN", coin(rng, 0.5) ? "with" : "for"),
                     simple_np(rng, false)});
}

// Short declarative: ~10-13 words, one clause, no subordination.
ParseTree deceptive_sentence(std::mt19937_64& rng) {
  std::vector<ParseTree> vp_kids;
  vp_kids.push_back(pt("VBZ", pick(rng, kVerbsPresent)));
  vp_kids.push_back(simple_np(rng, true));
  vp_kids.push_back(pp(rng));
  if (coin(rng, 0.5)) vp_kids.push_back(pp(rng));
  return node("S", {simple_np(rng, true), node("VP", std::move(vp_kids)),
                    pt(".", ".")});
}

// Long sentence with subordination and coordination: ~18-23 words.
ParseTree authentic_sentence(std::mt19937_64& rng) {
  ParseTree coord_np = node(
      "NP", {simple_np(rng, true), pt("CC", "and"), simple_np(rng, true)});
  ParseTree inner_vp =
      node("VP", {pt("VBD", pick(rng, kVerbsPast)), simple_np(rng, true),
                  pp(rng)});
  ParseTree inner_clause =
      node("S", {node("NP", {pt("PRP", "it")}), std::move(inner_vp)});
  ParseTree sbar = node(
      "SBAR", {pt("IN", coin(rng, 0.5) ? "because" : "although"),
               std::move(inner_clause)});
  std::vector<ParseTree> vp_kids;
  vp_kids.push_back(pt("VBD", pick(rng, kVerbsPast)));
  vp_kids.push_back(std::move(coord_np));
  if (coin(rng, 0.5)) vp_kids.push_back(pp(rng));
  vp_kids.push_back(std::move(sbar));
  return node("S", {node("NP", {pt("PRP", coin(rng, 0.5) ? "I" : "we")}),
                    node("VP", std::move(vp_kids)), pt(".", ".")});
}

std::string join_tokens(const ParseTree& tree) {
  std::string out;
  for (const auto& tok : tree_tokens(tree)) {
    if (tok == ".") {
      out += ".";
      continue;
    }
    if (!out.empty()) out += ' ';
    out += tok;
  }
  return out;
}

std::string domain_category(Domain d) {
  switch (d) {
    case Domain::Books: return "Kindle Edition";
    case Domain::Health: return "Health and Beauty";
    case Domain::Electronics: return "Electronics";
    case Domain::Movies: return "DVD";
    case Domain::Other: return "Kitchen";
  }
  return "Kitchen";
}

}  // namespace

ParseTree random_tree(std::mt19937_64& rng, int max_depth, int max_children) {
  static const std::vector<std::string> kLabels = {"S",  "NP",   "VP", "PP",
                                                   "SBAR", "ADJP", "X",  "Y"};
  static const std::vector<std::string> kTags = {"DT", "NN", "VBZ", "IN",
                                                 "JJ", "CC", "RB"};
  static const std::vector<std::string> kWords = {
      "alpha", "beta", "gamma", "delta", "omega", "kappa", "sigma"};
  std::uniform_int_distribution<int> nchildren(1, max_children);
  if (max_depth <= 1 || coin(rng, 0.3)) {
    return pt(pick(rng, kTags), pick(rng, kWords));
  }
  std::vector<ParseTree> kids;
  int n = nchildren(rng);
  for (int i = 0; i < n; ++i)
    kids.push_back(random_tree(rng, max_depth - 1, max_children));
  return node(pick(rng, kLabels), std::move(kids));
}

LabeledCorpus generate_synthetic_corpus(const SyntheticSpec& spec,
                                        const AdPhraseList& phrases,
                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  LabeledCorpus corpus;
  int review_counter = 0;
  int reviewer_counter = 0;

  for (Domain domain : all_domains()) {
    auto it = spec.deceptive_per_domain.find(domain);
    if (it == spec.deceptive_per_domain.end() || it->second == 0) continue;
    std::size_t n_deceptive = it->second;
    std::size_t n_authentic =
        n_deceptive * std::size_t(spec.authentic_per_deceptive);

    // Products for this domain.
    std::vector<std::string> product_ids;
    for (std::size_t p = 0; p < spec.products_per_domain; ++p) {
      Product prod;
      prod.product_id =
          std::string("p_") + domain_name(domain) + "_" + std::to_string(p);
      std::string n1 = pick(rng, kNouns), n2 = pick(rng, kNouns);
      std::string adj = pick(rng, kAdjectives);
      prod.title = adj + " " + n1 + " " + n2;
      prod.description = "a " + adj + " " + n1 + " with a " +
                         pick(rng, kAdjectives) + " " + n2;
      prod.category = domain_category(domain);
      product_ids.push_back(prod.product_id);
      corpus.products[prod.product_id] = prod;
    }

    auto make_review = [&](bool deceptive) {
      LabeledReview lr;
      lr.label = deceptive ? Label::Deceptive : Label::Authentic;
      lr.domain = domain;
      Review& r = lr.review;
      r.review_id = "r" + std::to_string(review_counter++);
      if (review_counter % 8 == 0) ++reviewer_counter;
      r.reviewer_id = std::string(deceptive ? "du" : "au") +
                      std::to_string(reviewer_counter);
      r.product_id = pick(rng, product_ids);
      r.category = domain_category(domain);
      std::uniform_int_distribution<int> day(1, 28);
      std::uniform_int_distribution<int> month(1, 12);
      char date[16];
      std::snprintf(date, sizeof(date), "2015-%02d-%02d", month(rng),
                    day(rng));
      r.posted_at = date;
      if (deceptive) {
        r.rating = coin(rng, 0.85) ? 5 : 4;
        r.verified_purchase = coin(rng, 0.1);
      } else {
        std::uniform_int_distribution<int> stars(1, 5);
        r.rating = stars(rng);
        r.verified_purchase = coin(rng, 0.85);
      }
      const Product& prod = corpus.products.at(r.product_id);
      r.title = deceptive ? ("great " + prod.title)
                          : (pick(rng, kAdjectives) + " " +
                             pick(rng, kNouns));
      std::string body;
      for (int s = 0; s < spec.sentences_per_review; ++s) {
        ParseTree tree = deceptive ? deceptive_sentence(rng)
                                   : authentic_sentence(rng);
        if (!body.empty()) body += ' ';
        body += join_tokens(tree);
        r.sentences.push_back(render_bracketed(tree));
      }
      double ad_rate = deceptive ? spec.ad_phrase_rate_deceptive
                                 : spec.ad_phrase_rate_authentic;
      if (!phrases.raw.empty() && coin(rng, ad_rate)) {
        body += " " + pick(rng, phrases.raw) + ".";
      }
      double echo_rate =
          deceptive ? spec.title_echo_deceptive : spec.title_echo_authentic;
      if (coin(rng, echo_rate)) {
        body += " the " + prod.title + " is worth it.";
      }
      r.body = body;
      corpus.reviews.push_back(std::move(lr));
    };

    for (std::size_t i = 0; i < n_deceptive; ++i) make_review(true);
    for (std::size_t i = 0; i < n_authentic; ++i) make_review(false);
  }
  return corpus;
}

}  // namespace spamdet
