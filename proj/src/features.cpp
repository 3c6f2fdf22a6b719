#include "spamdet/features.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "spamdet/treequery.hpp"

namespace spamdet {

namespace {

bool is_word_byte(unsigned char c) {
  return std::isalnum(c) || c >= 0x80;
}

std::string lower_ascii(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)v);
  return buf;
}

}  // namespace

const char* family_name(Family f) {
  switch (f) {
    case Family::Unigram: return "unigram";
    case Family::Pos: return "pos";
    case Family::Lexicon: return "lexicon";
    case Family::ApRules: return "ap_rules";
    case Family::UpRules: return "up_rules";
    case Family::AdPhrases: return "ad_phrases";
    case Family::TitleOverlap: return "title_overlap";
    case Family::Complexity: return "complexity";
  }
  return "?";
}

std::optional<Family> family_from_name(const std::string& name) {
  for (Family f : all_families()) {
    if (name == family_name(f)) return f;
  }
  return std::nullopt;
}

const std::vector<Family>& all_families() {
  static const std::vector<Family> fams = {
      Family::Unigram,   Family::Pos,          Family::Lexicon,
      Family::ApRules,   Family::UpRules,      Family::AdPhrases,
      Family::TitleOverlap, Family::Complexity};
  return fams;
}

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string cur;
  auto word_at = [&](std::size_t i) {
    return i < text.size() && is_word_byte(text[i]);
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    unsigned char c = text[i];
    if (is_word_byte(c)) {
      cur += static_cast<char>(std::tolower(c));
    } else if ((c == '\'' || c == '-') && !cur.empty() && word_at(i + 1)) {
      cur += static_cast<char>(c);
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

std::vector<std::string> review_tokens(const Review& review) {
  return tokenize(review.title + " " + review.body);
}

std::vector<ParseTree> parse_sentences(const Review& review) {
  std::vector<ParseTree> trees;
  trees.reserve(review.sentences.size());
  for (const auto& s : review.sentences) trees.push_back(parse_bracketed(s));
  return trees;
}

CategoryLexicon CategoryLexicon::parse(const std::string& text) {
  CategoryLexicon lex;
  std::map<std::string, std::size_t> index;
  std::istringstream is(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error("lexicon line " + std::to_string(line_no) +
                               ": expected category<TAB>entry");
    std::string cat = line.substr(0, tab);
    std::string entry = lower_ascii(line.substr(tab + 1));
    if (entry.empty())
      throw std::runtime_error("lexicon line " + std::to_string(line_no) +
                               ": empty entry");
    auto [it, fresh] = index.emplace(cat, lex.categories.size());
    if (fresh) lex.categories.push_back({cat, {}, {}});
    Category& c = lex.categories[it->second];
    if (entry.back() == '*') {
      entry.pop_back();
      c.prefixes.push_back(entry);
    } else {
      c.exact.push_back(entry);
    }
  }
  return lex;
}

CategoryLexicon CategoryLexicon::load(const std::string& path) {
  return parse(read_file(path));
}

std::string CategoryLexicon::serialize() const {
  std::string out;
  for (const auto& c : categories) {
    for (const auto& e : c.exact) out += c.name + "\t" + e + "\n";
    for (const auto& p : c.prefixes) out += c.name + "\t" + p + "*\n";
  }
  return out;
}

AdPhraseList AdPhraseList::parse(const std::string& text) {
  AdPhraseList list;
  std::set<std::string> seen;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto toks = tokenize(line);
    if (toks.empty() || toks.size() > 4)
      throw std::runtime_error("ad phrase must be 1-4 tokens: " + line);
    std::string norm;
    for (const auto& t : toks) {
      if (!norm.empty()) norm += ' ';
      norm += t;
    }
    if (!seen.insert(norm).second) continue;  // drop duplicates
    list.phrases.push_back(std::move(toks));
    list.raw.push_back(std::move(norm));
  }
  return list;
}

AdPhraseList AdPhraseList::load(const std::string& path) {
  return parse(read_file(path));
}

std::string AdPhraseList::serialize() const {
  std::string out;
  for (const auto& p : raw) out += p + "\n";
  return out;
}

const std::vector<std::string>& pos_tag_set() {
  static const std::vector<std::string> tags = {
      "CC",  "CD",  "DT",   "EX",   "FW",  "IN",  "JJ",   "JJR",  "JJS",
      "LS",  "MD",  "NN",   "NNP",  "NNPS", "NNS", "PDT",  "POS",  "PRP",
      "PRP$", "RB",  "RBR",  "RBS",  "RP",  "SYM", "TO",   "UH",   "VB",
      "VBD", "VBG", "VBN",  "VBP",  "VBZ", "WDT", "WP",   "WP$",  "WRB",
      ".",   ",",   ":",    "''",   "``",  "-LRB-", "-RRB-", "#",  "$"};
  return tags;
}

std::vector<std::string> build_vocab(const std::vector<LabeledReview>& corpus,
                                     Family family, int min_df) {
  std::map<std::string, int> df;
  for (const auto& lr : corpus) {
    std::set<std::string> doc_items;
    if (family == Family::Unigram) {
      for (const auto& t : review_tokens(lr.review)) doc_items.insert(t);
    } else if (family == Family::ApRules || family == Family::UpRules) {
      bool lexicalized = family == Family::ApRules;
      for (const auto& tree : parse_sentences(lr.review)) {
        for (const auto& rule : production_rules(tree, lexicalized))
          doc_items.insert(rule.to_string());
      }
    } else {
      throw std::runtime_error(std::string("no document vocabulary for ") +
                               family_name(family));
    }
    for (const auto& item : doc_items) df[item]++;
  }
  std::vector<std::string> vocab;
  for (const auto& [item, count] : df) {
    if (count >= min_df) vocab.push_back(item);
  }
  if (vocab.empty())
    throw std::runtime_error(std::string("empty vocabulary for ") +
                             family_name(family));
  return vocab;  // std::map iteration is already lexicographic
}

std::vector<std::pair<std::size_t, double>> unigram_features(
    const Review& review, const std::vector<std::string>& vocab) {
  auto tokens = review_tokens(review);
  std::vector<std::pair<std::size_t, double>> out;
  if (tokens.empty()) return out;
  std::map<std::string, int> tf;
  for (const auto& t : tokens) tf[t]++;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    auto it = tf.find(vocab[i]);
    if (it != tf.end())
      out.emplace_back(i, double(it->second) / double(tokens.size()));
  }
  return out;
}

std::vector<std::pair<std::size_t, double>> pos_features(
    const std::vector<ParseTree>& trees) {
  const auto& tags = pos_tag_set();
  std::map<std::string, int> counts;
  int total = 0;
  for (const auto& t : trees) {
    for (const auto& tag : pos_tags(t)) {
      counts[tag]++;
      ++total;
    }
  }
  std::vector<std::pair<std::size_t, double>> out;
  if (total == 0) return out;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    auto it = counts.find(tags[i]);
    if (it != counts.end())
      out.emplace_back(i, double(it->second) / double(total));
  }
  return out;
}

std::vector<std::pair<std::size_t, double>> lexicon_features(
    const Review& review, const CategoryLexicon& lexicon) {
  auto tokens = review_tokens(review);
  std::vector<std::pair<std::size_t, double>> out;
  if (tokens.empty()) return out;
  for (std::size_t ci = 0; ci < lexicon.categories.size(); ++ci) {
    const auto& cat = lexicon.categories[ci];
    int hits = 0;
    for (const auto& t : tokens) {
      bool hit = std::find(cat.exact.begin(), cat.exact.end(), t) !=
                 cat.exact.end();
      if (!hit) {
        hit = std::any_of(cat.prefixes.begin(), cat.prefixes.end(),
                          [&](const std::string& p) {
                            return t.size() >= p.size() &&
                                   t.compare(0, p.size(), p) == 0;
                          });
      }
      if (hit) ++hits;
    }
    if (hits > 0) out.emplace_back(ci, double(hits) / double(tokens.size()));
  }
  return out;
}

std::vector<std::pair<std::size_t, double>> production_features(
    const std::vector<ParseTree>& trees, bool lexicalized,
    const std::vector<std::string>& vocab) {
  std::map<std::string, int> counts;
  int total = 0;
  for (const auto& t : trees) {
    for (const auto& rule : production_rules(t, lexicalized)) {
      counts[rule.to_string()]++;
      ++total;
    }
  }
  std::vector<std::pair<std::size_t, double>> out;
  if (total == 0) return out;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    auto it = counts.find(vocab[i]);
    if (it != counts.end())
      out.emplace_back(i, double(it->second) / double(total));
  }
  return out;
}

std::vector<std::pair<std::size_t, double>> ad_phrase_features(
    const Review& review, const AdPhraseList& phrases) {
  auto tokens = review_tokens(review);
  std::vector<std::pair<std::size_t, double>> out;
  for (std::size_t pi = 0; pi < phrases.phrases.size(); ++pi) {
    const auto& phrase = phrases.phrases[pi];
    if (phrase.size() > tokens.size()) continue;
    bool found = false;
    for (std::size_t i = 0; i + phrase.size() <= tokens.size() && !found;
         ++i) {
      found = std::equal(phrase.begin(), phrase.end(), tokens.begin() + i);
    }
    if (found) out.emplace_back(pi, 1.0);
  }
  return out;
}

std::pair<double, double> title_overlap_features(const Review& review,
                                                 const Product& product) {
  auto rev = review_tokens(review);
  auto prod = tokenize(product.title + " " + product.description);
  std::set<std::string> rev_uni(rev.begin(), rev.end());
  std::set<std::string> prod_uni(prod.begin(), prod.end());
  double uni = 0;
  for (const auto& t : rev_uni) uni += prod_uni.count(t);

  auto bigrams = [](const std::vector<std::string>& toks) {
    std::set<std::string> out;
    for (std::size_t i = 0; i + 1 < toks.size(); ++i)
      out.insert(toks[i] + " " + toks[i + 1]);
    return out;
  };
  auto rev_bi = bigrams(rev);
  auto prod_bi = bigrams(prod);
  double bi = 0;
  for (const auto& b : rev_bi) bi += prod_bi.count(b);
  return {uni, bi};
}

void FeatureSpace::finalize() {
  names_.clear();
  offsets_.clear();
  dim_ = 0;
  for (Family f : all_families()) {
    if (!config_.families.count(f)) continue;
    offsets_[f] = dim_;
    const auto& vocab = vocabs_.at(f);
    for (const auto& item : vocab) {
      names_.push_back(std::string(family_name(f)) + ":" + item);
    }
    dim_ += vocab.size();
  }
}

FeatureSpace FeatureSpace::build(const std::vector<LabeledReview>& training,
                                 const FeatureConfig& config,
                                 const CategoryLexicon& lexicon,
                                 const AdPhraseList& phrases) {
  FeatureSpace space;
  space.config_ = config;
  space.lexicon_ = lexicon;
  space.phrases_ = phrases;
  for (Family f : all_families()) {
    if (!config.families.count(f)) continue;
    std::vector<std::string> vocab;
    switch (f) {
      case Family::Unigram:
      case Family::ApRules:
      case Family::UpRules:
        vocab = build_vocab(training, f, config.min_df);
        break;
      case Family::Pos:
        vocab = pos_tag_set();
        break;
      case Family::Lexicon:
        for (const auto& c : lexicon.categories) vocab.push_back(c.name);
        break;
      case Family::AdPhrases:
        vocab = phrases.raw;
        break;
      case Family::TitleOverlap:
        vocab = {"unigram", "bigram"};
        break;
      case Family::Complexity:
        vocab = ComplexityVector::ratio_names();
        break;
    }
    if (vocab.empty())
      throw std::runtime_error(std::string("empty vocabulary for ") +
                               family_name(f));
    space.vocabs_[f] = std::move(vocab);
  }
  space.finalize();
  return space;
}

std::size_t FeatureSpace::family_offset(Family f) const {
  auto it = offsets_.find(f);
  if (it == offsets_.end())
    throw std::runtime_error(std::string("family not enabled: ") +
                             family_name(f));
  return it->second;
}

std::size_t FeatureSpace::family_size(Family f) const {
  return vocab(f).size();
}

const std::vector<std::string>& FeatureSpace::vocab(Family f) const {
  auto it = vocabs_.find(f);
  if (it == vocabs_.end())
    throw std::runtime_error(std::string("family not enabled: ") +
                             family_name(f));
  return it->second;
}

const std::string& FeatureSpace::dimension_name(std::size_t index) const {
  return names_.at(index);
}

std::string FeatureSpace::manifest() const {
  std::ostringstream os;
  os << "min_df " << config_.min_df << "\n";
  os << "families";
  for (Family f : all_families()) {
    if (config_.families.count(f)) os << " " << family_name(f);
  }
  os << "\n";
  for (Family f : all_families()) {
    if (!config_.families.count(f)) continue;
    const auto& vocab = vocabs_.at(f);
    os << "[vocab " << family_name(f) << " " << vocab.size() << "]\n";
    for (const auto& item : vocab) os << item << "\n";
  }
  std::string lex = lexicon_.serialize();
  os << "[lexicon]\n" << lex;
  os << "[phrases]\n";
  for (const auto& p : phrases_.raw) os << p << "\n";
  std::string body = os.str();
  return "spamdet-feature-space v1\nhash " + hex64(fnv1a(body)) + "\n" + body;
}

std::uint64_t FeatureSpace::content_hash() const {
  return fnv1a(manifest());
}

FeatureSpace FeatureSpace::from_manifest(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  auto next = [&](const char* what) {
    if (!std::getline(is, line))
      throw std::runtime_error(std::string("truncated manifest: expected ") +
                               what);
    return line;
  };
  if (next("header") != "spamdet-feature-space v1")
    throw std::runtime_error("unrecognized feature-space manifest header");
  std::string hash_line = next("hash");
  if (hash_line.rfind("hash ", 0) != 0)
    throw std::runtime_error("manifest missing hash line");
  std::string rest((std::istreambuf_iterator<char>(is)),
                   std::istreambuf_iterator<char>());
  // getline consumed the newline after the hash line; rest is the body.
  if ("hash " + hex64(fnv1a(rest)) != hash_line)
    throw std::runtime_error("feature-space manifest hash mismatch");

  FeatureSpace space;
  std::istringstream body(rest);
  auto bnext = [&](const char* what) {
    if (!std::getline(body, line))
      throw std::runtime_error(std::string("truncated manifest: expected ") +
                               what);
    return line;
  };
  {
    std::istringstream ls(bnext("min_df"));
    std::string key;
    ls >> key >> space.config_.min_df;
    if (key != "min_df") throw std::runtime_error("manifest missing min_df");
  }
  {
    std::istringstream ls(bnext("families"));
    std::string key, name;
    ls >> key;
    if (key != "families")
      throw std::runtime_error("manifest missing families");
    while (ls >> name) {
      auto f = family_from_name(name);
      if (!f) throw std::runtime_error("unknown family " + name);
      space.config_.families.insert(*f);
    }
  }
  std::string lex_text, phrase_text;
  enum class Section { Vocab, Lexicon, Phrases } section = Section::Vocab;
  Family cur_family = Family::Unigram;
  std::size_t remaining = 0;
  while (std::getline(body, line)) {
    if (line.rfind("[vocab ", 0) == 0) {
      std::istringstream ls(line.substr(7));
      std::string name;
      ls >> name >> remaining;
      auto f = family_from_name(name);
      if (!f) throw std::runtime_error("unknown family " + name);
      cur_family = *f;
      section = Section::Vocab;
      space.vocabs_[cur_family] = {};
      space.vocabs_[cur_family].reserve(remaining);
    } else if (line == "[lexicon]") {
      section = Section::Lexicon;
    } else if (line == "[phrases]") {
      section = Section::Phrases;
    } else if (section == Section::Vocab) {
      space.vocabs_[cur_family].push_back(line);
    } else if (section == Section::Lexicon) {
      lex_text += line + "\n";
    } else {
      phrase_text += line + "\n";
    }
  }
  space.lexicon_ = CategoryLexicon::parse(lex_text);
  space.phrases_ = AdPhraseList::parse(phrase_text);
  space.finalize();
  return space;
}

FeatureVector assemble(const Review& review, const Product* product,
                       const FeatureSpace& space) {
  FeatureVector vec;
  std::vector<ParseTree> trees;
  bool trees_parsed = false;
  auto ensure_trees = [&]() {
    if (!trees_parsed) {
      trees = parse_sentences(review);
      trees_parsed = true;
    }
  };
  auto append = [&](Family f,
                    const std::vector<std::pair<std::size_t, double>>& vals) {
    std::size_t off = space.family_offset(f);
    for (const auto& [i, v] : vals) vec.push(off + i, v);
  };
  for (Family f : all_families()) {
    if (!space.config().families.count(f)) continue;
    switch (f) {
      case Family::Unigram:
        append(f, unigram_features(review, space.vocab(f)));
        break;
      case Family::Pos:
        ensure_trees();
        append(f, pos_features(trees));
        break;
      case Family::Lexicon:
        append(f, lexicon_features(review, space.lexicon()));
        break;
      case Family::ApRules:
        ensure_trees();
        append(f, production_features(trees, true, space.vocab(f)));
        break;
      case Family::UpRules:
        ensure_trees();
        append(f, production_features(trees, false, space.vocab(f)));
        break;
      case Family::AdPhrases:
        append(f, ad_phrase_features(review, space.phrases()));
        break;
      case Family::TitleOverlap: {
        double uni = 0, bi = 0;
        if (product) std::tie(uni, bi) = title_overlap_features(review, *product);
        std::size_t off = space.family_offset(f);
        vec.push(off, uni);
        vec.push(off + 1, bi);
        break;
      }
      case Family::Complexity: {
        ensure_trees();
        auto ratios = complexity_profile(trees).ratios();
        std::size_t off = space.family_offset(f);
        for (std::size_t i = 0; i < ratios.size(); ++i)
          vec.push(off + i, ratios[i]);
        break;
      }
    }
  }
  return vec;
}

}  // namespace spamdet
