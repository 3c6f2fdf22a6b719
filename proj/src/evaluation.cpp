#include "spamdet/evaluation.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace spamdet {

namespace {

using nlohmann::json;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t x = seed ^ (salt * 0x9e3779b97f4a7c15ull);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

std::vector<LabeledReview> domain_pool(const LabeledCorpus& corpus,
                                       Domain domain) {
  std::vector<LabeledReview> pool;
  for (const auto& lr : corpus.reviews) {
    if (lr.domain == domain && lr.label != Label::Excluded)
      pool.push_back(lr);
  }
  return pool;
}

struct Prepared {
  std::vector<TrainExample> examples;
  std::vector<bool> gold;
};

Prepared featurize_all(const std::vector<LabeledReview>& reviews,
                       const LabeledCorpus& corpus,
                       const FeatureSpace& space) {
  Prepared out;
  out.examples.reserve(reviews.size());
  for (const auto& lr : reviews) {
    const Product* product = corpus.find_product(lr.review.product_id);
    FeatureVector vec = assemble(lr.review, product, space);
    TrainExample ex;
    ex.features = std::move(vec.values);
    ex.deceptive = lr.label == Label::Deceptive;
    out.gold.push_back(ex.deceptive);
    out.examples.push_back(std::move(ex));
  }
  return out;
}

MaxentModel train_on(const std::vector<LabeledReview>& training,
                     const LabeledCorpus& corpus, const ProtocolConfig& config,
                     FeatureSpace& space_out) {
  space_out = FeatureSpace::build(training, config.features, config.lexicon,
                                  config.phrases);
  Prepared prep = featurize_all(training, corpus, space_out);
  MaxentModel model =
      train(prep.examples, space_out.dim(), config.classifier);
  model.feature_space_hash = space_out.content_hash();
  return model;
}

Triple evaluate_on(const MaxentModel& model, const FeatureSpace& space,
                   const std::vector<LabeledReview>& test,
                   const LabeledCorpus& corpus) {
  Prepared prep = featurize_all(test, corpus, space);
  std::vector<bool> pred;
  pred.reserve(prep.examples.size());
  for (const auto& ex : prep.examples)
    pred.push_back(predict(model, ex.features));
  return prf(pred, prep.gold);
}

std::vector<std::string> family_names(const FeatureConfig& config) {
  std::vector<std::string> out;
  for (Family f : all_families()) {
    if (config.families.count(f)) out.push_back(family_name(f));
  }
  return out;
}

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v * 100.0);
  return buf;
}

}  // namespace

Triple prf(const std::vector<bool>& predictions,
           const std::vector<bool>& gold) {
  if (predictions.size() != gold.size())
    throw std::runtime_error("prediction/gold length mismatch");
  double tp = 0, fp = 0, fn = 0, pos = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i]) ++pos;
    if (predictions[i] && gold[i]) ++tp;
    else if (predictions[i]) ++fp;
    else if (gold[i]) ++fn;
  }
  if (pos == 0) throw std::runtime_error("no gold deceptive examples");
  Triple t;
  t.recall = tp / pos;
  t.precision = (tp + fp) > 0 ? tp / (tp + fp) : 0.0;
  t.f1 = (t.recall + t.precision) > 0
             ? 2.0 * t.recall * t.precision / (t.recall + t.precision)
             : 0.0;
  return t;
}

Triple macro_average(const std::vector<Triple>& triples) {
  Triple out;
  if (triples.empty()) return out;
  for (const auto& t : triples) {
    out.recall += t.recall;
    out.precision += t.precision;
    out.f1 += t.f1;
  }
  double n = double(triples.size());
  out.recall /= n;
  out.precision /= n;
  out.f1 /= n;
  return out;
}

std::string EvalReport::to_text() const {
  std::ostringstream os;
  os << "protocol: " << protocol;
  if (!train_scope.empty()) os << "  train: " << train_scope;
  if (augmented) os << "  (augmented with Other)";
  os << "\nfeatures:";
  for (const auto& f : families) os << " " << f;
  os << "\nseed: " << seed << "\n\n";
  os << "run                 test                r/p/f1\n";
  for (const auto& run : runs) {
    for (const auto& [name, t] : run.per_test) {
      std::string col1 = run.name;
      col1.resize(std::max<std::size_t>(col1.size() + 1, 20), ' ');
      std::string col2 = name;
      col2.resize(std::max<std::size_t>(col2.size() + 1, 20), ' ');
      os << col1 << col2 << pct(t.recall) << "/" << pct(t.precision) << "/"
         << pct(t.f1) << "\n";
    }
    std::string col1 = run.name;
    col1.resize(std::max<std::size_t>(col1.size() + 1, 20), ' ');
    os << col1 << "macro               " << pct(run.macro.recall) << "/"
       << pct(run.macro.precision) << "/" << pct(run.macro.f1) << "\n";
  }
  os << "meta-macro: " << pct(meta_macro.recall) << "/"
     << pct(meta_macro.precision) << "/" << pct(meta_macro.f1) << "\n";
  return os.str();
}

std::string EvalReport::to_csv() const {
  std::ostringstream os;
  os << "run,test,recall,precision,f1\n";
  char buf[64];
  auto row = [&](const std::string& a, const std::string& b,
                 const Triple& t) {
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f", t.recall, t.precision,
                  t.f1);
    os << a << "," << b << "," << buf << "\n";
  };
  for (const auto& run : runs) {
    for (const auto& [name, t] : run.per_test) row(run.name, name, t);
    row(run.name, "macro", run.macro);
  }
  row("all", "meta-macro", meta_macro);
  return os.str();
}

std::string EvalReport::to_json() const {
  json j;
  j["protocol"] = protocol;
  j["families"] = families;
  j["seed"] = seed;
  j["train_scope"] = train_scope;
  j["augmented"] = augmented;
  auto triple_json = [](const Triple& t) {
    return json{{"recall", t.recall},
                {"precision", t.precision},
                {"f1", t.f1}};
  };
  j["runs"] = json::array();
  for (const auto& run : runs) {
    json r;
    r["name"] = run.name;
    r["per_test"] = json::array();
    for (const auto& [name, t] : run.per_test) {
      json e = triple_json(t);
      e["test"] = name;
      r["per_test"].push_back(e);
    }
    r["macro"] = triple_json(run.macro);
    j["runs"].push_back(r);
  }
  j["meta_macro"] = triple_json(meta_macro);
  return j.dump(2) + "\n";
}

EvalReport kfold_indomain(const LabeledCorpus& corpus, Domain domain, int k,
                          const ProtocolConfig& config, std::uint64_t seed) {
  if (k < 2) throw std::runtime_error("k must be >= 2");
  auto pool = domain_pool(corpus, domain);
  auto sampled =
      sample_truthful(pool, config.truthful_ratio, mix_seed(seed, 1));

  // Stratified folds: deal each class round-robin after a seeded shuffle.
  std::vector<std::size_t> pos_idx, neg_idx;
  for (std::size_t i = 0; i < sampled.size(); ++i) {
    (sampled[i].label == Label::Deceptive ? pos_idx : neg_idx).push_back(i);
  }
  if (sampled.size() < std::size_t(k))
    throw std::runtime_error("domain has fewer reviews than folds");
  std::mt19937_64 rng(mix_seed(seed, 2));
  std::shuffle(pos_idx.begin(), pos_idx.end(), rng);
  std::shuffle(neg_idx.begin(), neg_idx.end(), rng);
  std::vector<int> fold_of(sampled.size(), 0);
  for (std::size_t i = 0; i < pos_idx.size(); ++i)
    fold_of[pos_idx[i]] = int(i % k);
  for (std::size_t i = 0; i < neg_idx.size(); ++i)
    fold_of[neg_idx[i]] = int(i % k);

  EvalReport report;
  report.protocol = "indomain";
  report.families = family_names(config.features);
  report.seed = seed;
  report.train_scope = domain_name(domain);
  std::vector<Triple> fold_triples;
  EvalReport::Run run;
  run.name = domain_name(domain);
  for (int fold = 0; fold < k; ++fold) {
    std::vector<LabeledReview> train_set, test_set;
    for (std::size_t i = 0; i < sampled.size(); ++i) {
      (fold_of[i] == fold ? test_set : train_set).push_back(sampled[i]);
    }
    bool test_has_pos =
        std::any_of(test_set.begin(), test_set.end(), [](const auto& lr) {
          return lr.label == Label::Deceptive;
        });
    if (test_set.empty() || !test_has_pos) continue;
    FeatureSpace space;
    MaxentModel model = train_on(train_set, corpus, config, space);
    Triple t = evaluate_on(model, space, test_set, corpus);
    run.per_test.emplace_back("fold" + std::to_string(fold), t);
    fold_triples.push_back(t);
  }
  run.macro = macro_average(fold_triples);
  report.runs.push_back(run);
  report.meta_macro = run.macro;
  return report;
}

EvalReport cross_domain(const LabeledCorpus& corpus,
                        const ProtocolConfig& config, bool augment_with_other,
                        std::uint64_t seed) {
  EvalReport report;
  report.protocol = "cross";
  report.families = family_names(config.features);
  report.seed = seed;
  report.augmented = augment_with_other;

  std::vector<Triple> run_macros;
  for (std::size_t ti = 0; ti < core_domains().size(); ++ti) {
    Domain train_domain = core_domains()[ti];
    auto train_pool = domain_pool(corpus, train_domain);
    auto training = sample_truthful(train_pool, config.truthful_ratio,
                                    mix_seed(seed, 10 + ti));
    if (augment_with_other) {
      auto other_pool = domain_pool(corpus, Domain::Other);
      auto other_sample = sample_truthful(other_pool, config.truthful_ratio,
                                          mix_seed(seed, 20 + ti));
      training.insert(training.end(), other_sample.begin(),
                      other_sample.end());
    }
    FeatureSpace space;
    MaxentModel model = train_on(training, corpus, config, space);

    EvalReport::Run run;
    run.name = domain_name(train_domain);
    std::vector<Triple> test_triples;
    for (std::size_t si = 0; si < core_domains().size(); ++si) {
      Domain test_domain = core_domains()[si];
      if (test_domain == train_domain) continue;
      auto test_pool = domain_pool(corpus, test_domain);
      auto test_set = sample_truthful(test_pool, config.truthful_ratio,
                                      mix_seed(seed, 30 + si));
      Triple t = evaluate_on(model, space, test_set, corpus);
      run.per_test.emplace_back(domain_name(test_domain), t);
      test_triples.push_back(t);
    }
    run.macro = macro_average(test_triples);
    run_macros.push_back(run.macro);
    report.runs.push_back(std::move(run));
  }
  report.meta_macro = macro_average(run_macros);
  return report;
}

std::vector<CurvePoint> learning_curve(const LabeledCorpus& corpus,
                                       Domain train_domain,
                                       const std::vector<double>& fractions,
                                       const ProtocolConfig& config,
                                       std::uint64_t seed) {
  auto train_pool = domain_pool(corpus, train_domain);
  // Base training mirrors the unaugmented cross-domain run for this domain,
  // so the fraction-0 point reproduces that run's scores.
  std::uint64_t base_salt = 100;
  for (std::size_t ti = 0; ti < core_domains().size(); ++ti) {
    if (core_domains()[ti] == train_domain) base_salt = 10 + ti;
  }
  auto base_training = sample_truthful(train_pool, config.truthful_ratio,
                                       mix_seed(seed, base_salt));
  auto other_pool = domain_pool(corpus, Domain::Other);
  auto other_sample = sample_truthful(other_pool, config.truthful_ratio,
                                      mix_seed(seed, 101));
  // Shuffle Other by deceptive review so each prefix carries a fixed number
  // of deceptive reviews plus their ratio of authentic ones.
  std::vector<LabeledReview> other_pos, other_neg;
  for (auto& lr : other_sample) {
    (lr.label == Label::Deceptive ? other_pos : other_neg)
        .push_back(std::move(lr));
  }
  std::mt19937_64 rng(mix_seed(seed, 102));
  std::shuffle(other_pos.begin(), other_pos.end(), rng);
  std::shuffle(other_neg.begin(), other_neg.end(), rng);

  std::vector<CurvePoint> points;
  for (double fraction : fractions) {
    if (fraction < 0 || fraction > 1)
      throw std::runtime_error("curve fractions must lie in [0,1]");
    std::size_t pos_take =
        std::size_t(fraction * double(other_pos.size()) + 0.5);
    std::size_t neg_take = std::min(
        other_neg.size(), pos_take * std::size_t(config.truthful_ratio));
    auto training = base_training;
    training.insert(training.end(), other_pos.begin(),
                    other_pos.begin() + pos_take);
    training.insert(training.end(), other_neg.begin(),
                    other_neg.begin() + neg_take);
    FeatureSpace space;
    MaxentModel model = train_on(training, corpus, config, space);
    std::vector<Triple> test_triples;
    for (std::size_t si = 0; si < core_domains().size(); ++si) {
      Domain test_domain = core_domains()[si];
      if (test_domain == train_domain) continue;
      auto test_pool = domain_pool(corpus, test_domain);
      auto test_set = sample_truthful(test_pool, config.truthful_ratio,
                                      mix_seed(seed, 30 + si));
      test_triples.push_back(evaluate_on(model, space, test_set, corpus));
    }
    CurvePoint p;
    p.added_deceptive = pos_take;
    p.fraction = fraction;
    p.macro_f1 = macro_average(test_triples).f1;
    points.push_back(p);
  }
  return points;
}

std::string curve_to_csv(const std::vector<CurvePoint>& points) {
  std::ostringstream os;
  os << "fraction,added_deceptive,macro_f1\n";
  char buf[64];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof(buf), "%.4f,%zu,%.6f", p.fraction,
                  p.added_deceptive, p.macro_f1);
    os << buf << "\n";
  }
  return os.str();
}

EvalReport reviewer_transfer(const LabeledCorpus& corpus,
                             const std::set<std::string>& train_reviewers,
                             const std::set<std::string>& test_reviewers,
                             const ProtocolConfig& config,
                             std::uint64_t seed) {
  for (const auto& r : train_reviewers) {
    if (test_reviewers.count(r))
      throw std::runtime_error("train/test reviewer sets overlap: " + r);
  }
  // Shuffle the shared authentic pool once and split it so the train and
  // test 3x samples stay disjoint.
  std::vector<LabeledReview> train_pool, test_pool;
  std::vector<LabeledReview> authentic;
  for (const auto& lr : corpus.reviews) {
    if (lr.label == Label::Deceptive) {
      if (train_reviewers.count(lr.review.reviewer_id))
        train_pool.push_back(lr);
      else if (test_reviewers.count(lr.review.reviewer_id))
        test_pool.push_back(lr);
    } else if (lr.label == Label::Authentic &&
               !train_reviewers.count(lr.review.reviewer_id) &&
               !test_reviewers.count(lr.review.reviewer_id)) {
      authentic.push_back(lr);
    }
  }
  if (train_pool.empty() || test_pool.empty())
    throw std::runtime_error("no deceptive reviews for listed reviewers");
  std::mt19937_64 rng(mix_seed(seed, 200));
  std::shuffle(authentic.begin(), authentic.end(), rng);
  std::size_t train_neg = train_pool.size() * config.truthful_ratio;
  std::size_t test_neg = test_pool.size() * config.truthful_ratio;
  if (authentic.size() < train_neg + test_neg)
    throw std::runtime_error("not enough authentic reviews for transfer");
  train_pool.insert(train_pool.end(), authentic.begin(),
                    authentic.begin() + train_neg);
  test_pool.insert(test_pool.end(), authentic.begin() + train_neg,
                   authentic.begin() + train_neg + test_neg);

  FeatureSpace space;
  MaxentModel model = train_on(train_pool, corpus, config, space);
  Triple t = evaluate_on(model, space, test_pool, corpus);

  EvalReport report;
  report.protocol = "reviewer";
  report.families = family_names(config.features);
  report.seed = seed;
  std::string train_names, test_names;
  for (const auto& r : train_reviewers)
    train_names += (train_names.empty() ? "" : "+") + r;
  for (const auto& r : test_reviewers)
    test_names += (test_names.empty() ? "" : "+") + r;
  report.train_scope = train_names;
  EvalReport::Run run;
  run.name = train_names;
  run.per_test.emplace_back(test_names, t);
  run.macro = t;
  report.runs.push_back(run);
  report.meta_macro = t;
  return report;
}

}  // namespace spamdet
