#include "spamdet/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "spamdet/reviewer_graph.hpp"

namespace spamdet {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
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

std::string out_path(const RunConfig& config, const std::string& name) {
  return (fs::path(config.out_dir) / name).string();
}

void require_artifact(const std::string& stage, const std::string& path,
                      const std::string& what) {
  if (!fs::exists(path))
    throw StageError(stage, "missing " + what + " (" + path + ")");
}

json config_json(const RunConfig& config) {
  json j;
  j["reviews"] = config.reviews_path;
  j["products"] = config.products_path;
  j["tasks"] = config.tasks_path;
  j["lexicon"] = config.lexicon_path;
  j["phrases"] = config.phrases_path;
  j["deceptive_reviewers"] = config.deceptive_reviewers_path;
  j["seed_reviewers"] = config.seed_reviewers;
  json fam = json::array();
  for (Family f : all_families()) {
    if (config.features.families.count(f)) fam.push_back(family_name(f));
  }
  j["features"] = {{"families", fam}, {"min_df", config.features.min_df}};
  j["classifier"] = {{"C", config.classifier.C},
                     {"tol", config.classifier.tol},
                     {"max_iter", config.classifier.max_iter}};
  j["truthful_ratio"] = config.truthful_ratio;
  j["kfold"] = config.kfold;
  j["em_max_iter"] = config.em_max_iter;
  j["curve_train_domain"] = config.curve_train_domain;
  j["curve_fractions"] = config.curve_fractions;
  j["train_reviewers"] = config.train_reviewers;
  j["test_reviewers"] = config.test_reviewers;
  j["seed"] = config.seed;
  return j;
}

// Run manifest: config hash, seed, input hashes, outputs. No timestamps so
// reruns with identical inputs stay byte-identical.
void write_manifest(const RunConfig& config, const std::string& command,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs) {
  json j;
  j["command"] = command;
  j["config"] = config_json(config);
  j["config_hash"] = hex64(fnv1a(config_json(config).dump()));
  j["seed"] = config.seed;
  json in = json::object();
  for (const auto& path : inputs) {
    in[path] = hex64(fnv1a(read_file(path)));
  }
  j["inputs"] = in;
  j["outputs"] = outputs;
  write_file(out_path(config, "manifest_" + command + ".json"),
             j.dump(2) + "\n");
}

Domain domain_from_name(const std::string& name) {
  for (Domain d : all_domains()) {
    if (name == domain_name(d)) return d;
  }
  throw std::runtime_error("unknown domain name: " + name);
}

std::set<std::string> load_id_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::set<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) ids.insert(line);
  }
  return ids;
}

}  // namespace

RunConfig RunConfig::load(const std::string& path) {
  json j = json::parse(read_file(path));
  RunConfig config;
  std::vector<std::string> errors;
  auto get_string = [&](const char* key, std::string& out, bool required) {
    if (j.contains(key)) {
      if (!j[key].is_string()) errors.push_back(std::string(key) + ": expected string");
      else out = j[key].get<std::string>();
    } else if (required) {
      errors.push_back(std::string(key) + ": missing");
    }
  };
  get_string("reviews", config.reviews_path, true);
  get_string("products", config.products_path, true);
  get_string("tasks", config.tasks_path, true);
  get_string("lexicon", config.lexicon_path, false);
  get_string("phrases", config.phrases_path, false);
  get_string("deceptive_reviewers", config.deceptive_reviewers_path, false);
  get_string("out", config.out_dir, false);
  if (j.contains("seed_reviewers"))
    config.seed_reviewers = j["seed_reviewers"].get<std::vector<std::string>>();
  if (j.contains("features")) {
    const auto& f = j["features"];
    if (f.contains("families")) {
      for (const auto& name : f["families"]) {
        auto fam = family_from_name(name.get<std::string>());
        if (!fam) errors.push_back("unknown feature family: " +
                                   name.get<std::string>());
        else config.features.families.insert(*fam);
      }
    }
    config.features.min_df = f.value("min_df", 2);
    if (config.features.min_df < 1) errors.push_back("min_df must be >= 1");
  }
  if (config.features.families.empty())
    errors.push_back("features.families: at least one family required");
  if (j.contains("classifier")) {
    const auto& c = j["classifier"];
    config.classifier.C = c.value("C", 1.0);
    config.classifier.tol = c.value("tol", 1e-6);
    config.classifier.max_iter = c.value("max_iter", 1000);
    if (config.classifier.C <= 0) errors.push_back("classifier.C must be > 0");
  }
  config.truthful_ratio = j.value("truthful_ratio", 3);
  if (config.truthful_ratio < 1) errors.push_back("truthful_ratio must be >= 1");
  config.kfold = j.value("kfold", 5);
  config.em_max_iter = j.value("em_max_iter", 50);
  config.curve_train_domain =
      j.value("curve_train_domain", std::string("Electronics"));
  if (j.contains("curve_fractions"))
    config.curve_fractions = j["curve_fractions"].get<std::vector<double>>();
  if (j.contains("train_reviewers"))
    config.train_reviewers = j["train_reviewers"].get<std::vector<std::string>>();
  if (j.contains("test_reviewers"))
    config.test_reviewers = j["test_reviewers"].get<std::vector<std::string>>();
  if (!j.contains("seed")) errors.push_back("seed: missing (mandatory)");
  else config.seed = j["seed"].get<std::uint64_t>();

  for (const auto& [key, p] :
       std::vector<std::pair<std::string, std::string>>{
           {"reviews", config.reviews_path},
           {"products", config.products_path},
           {"tasks", config.tasks_path},
           {"lexicon", config.lexicon_path},
           {"phrases", config.phrases_path}}) {
    if (!p.empty() && !fs::exists(p))
      errors.push_back(key + ": path does not exist: " + p);
  }
  if (!errors.empty()) {
    std::string msg = "config validation failed:";
    for (const auto& e : errors) msg += "\n  - " + e;
    throw std::runtime_error(msg);
  }
  return config;
}

ProtocolConfig make_protocol_config(const RunConfig& config) {
  ProtocolConfig pc;
  pc.features = config.features;
  pc.classifier = config.classifier;
  pc.truthful_ratio = config.truthful_ratio;
  if (!config.lexicon_path.empty())
    pc.lexicon = CategoryLexicon::load(config.lexicon_path);
  if (!config.phrases_path.empty())
    pc.phrases = AdPhraseList::load(config.phrases_path);
  return pc;
}

void save_labeled_corpus(const LabeledCorpus& corpus, const std::string& path,
                         const std::string& products_path) {
  std::string out;
  for (const auto& lr : corpus.reviews) {
    json j = json::parse(review_to_json_line(lr.review));
    j["label"] = label_name(lr.label);
    j["domain"] = domain_name(lr.domain);
    out += j.dump() + "\n";
  }
  write_file(path, out);
  std::string prods;
  for (const auto& [id, p] : corpus.products)
    prods += product_to_json_line(p) + "\n";
  write_file(products_path, prods);
}

LabeledCorpus load_labeled_corpus(const std::string& path,
                                  const std::string& products_path) {
  LabeledCorpus corpus;
  corpus.products = load_products(products_path);
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = json::parse(line);
    LabeledReview lr;
    lr.review = review_from_json_line(line);
    std::string label = j.at("label").get<std::string>();
    if (label == "deceptive") lr.label = Label::Deceptive;
    else if (label == "authentic") lr.label = Label::Authentic;
    else lr.label = Label::Excluded;
    lr.domain = domain_from_name(j.at("domain").get<std::string>());
    corpus.reviews.push_back(std::move(lr));
  }
  return corpus;
}

void cmd_ingest(const RunConfig& config) {
  Snapshot snap = load_reviews(config.reviews_path);
  snap.products = load_products(config.products_path);
  TaskSet tasks = load_tasks(config.tasks_path);
  if (tasks.root_products.empty())
    throw StageError("ingest", "task set is empty");

  std::string reviews_out;
  for (const auto& r : snap.reviews) reviews_out += review_to_json_line(r) + "\n";
  write_file(out_path(config, "reviews.normalized.jsonl"), reviews_out);
  std::string products_out;
  for (const auto& [id, p] : snap.products)
    products_out += product_to_json_line(p) + "\n";
  write_file(out_path(config, "products.normalized.jsonl"), products_out);
  std::string tasks_out;
  for (const auto& p : tasks.root_products)
    tasks_out += json{{"product_id", p}}.dump() + "\n";
  write_file(out_path(config, "tasks.normalized.jsonl"), tasks_out);
  write_manifest(config, "ingest",
                 {config.reviews_path, config.products_path,
                  config.tasks_path},
                 {"reviews.normalized.jsonl", "products.normalized.jsonl",
                  "tasks.normalized.jsonl"});
}

void cmd_cluster(const RunConfig& config) {
  std::string reviews = out_path(config, "reviews.normalized.jsonl");
  std::string tasks_path = out_path(config, "tasks.normalized.jsonl");
  require_artifact("cluster", reviews, "normalized corpus (run ingest)");
  require_artifact("cluster", tasks_path, "normalized task set (run ingest)");
  Snapshot snap = load_reviews(reviews);
  TaskSet tasks = load_tasks(tasks_path);
  std::set<std::string> seeds(config.seed_reviewers.begin(),
                              config.seed_reviewers.end());
  ReviewerGraph graph = build_graph(snap.reviews, tasks, seeds);
  EmResult em = em_cluster(graph, MRFParams{}, config.em_max_iter);

  std::string list;
  for (const auto& id : deceptive_reviewers(graph, em.assignment))
    list += id + "\n";
  write_file(out_path(config, "deceptive_reviewers.txt"), list);
  write_file(out_path(config, "assignment.tsv"),
             dump_assignment(graph, em.assignment));
  write_file(out_path(config, "graph.txt"), dump_graph(graph));
  std::string trace = "iteration,energy\n";
  for (std::size_t i = 0; i < em.energy_trace.size(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%zu,%.12g\n", i, em.energy_trace[i]);
    trace += buf;
  }
  write_file(out_path(config, "em_trace.csv"), trace);
  write_manifest(config, "cluster", {reviews, tasks_path},
                 {"deceptive_reviewers.txt", "assignment.tsv", "graph.txt",
                  "em_trace.csv"});
}

void cmd_sieve(const RunConfig& config) {
  std::string reviews = out_path(config, "reviews.normalized.jsonl");
  std::string products = out_path(config, "products.normalized.jsonl");
  std::string tasks_path = out_path(config, "tasks.normalized.jsonl");
  require_artifact("sieve", reviews, "normalized corpus (run ingest)");
  std::string reviewer_list = config.deceptive_reviewers_path;
  if (reviewer_list.empty())
    reviewer_list = out_path(config, "deceptive_reviewers.txt");
  require_artifact("sieve", reviewer_list,
                   "deceptive reviewer list (run cluster or set "
                   "deceptive_reviewers in the config)");
  Snapshot snap = load_reviews(reviews);
  snap.products = load_products(products);
  TaskSet tasks = load_tasks(tasks_path);
  auto flagged = load_id_list(reviewer_list);
  LabeledCorpus corpus = sieve_labels(snap, flagged, tasks);
  save_labeled_corpus(corpus, out_path(config, "labeled.jsonl"),
                      out_path(config, "labeled.products.jsonl"));
  StatsReport stats = corpus_stats(corpus);
  write_file(out_path(config, "stats.txt"), stats.to_text());
  write_file(out_path(config, "stats.csv"), stats.to_csv());
  write_manifest(config, "sieve", {reviews, products, reviewer_list},
                 {"labeled.jsonl", "labeled.products.jsonl", "stats.txt",
                  "stats.csv"});
}

void cmd_featurize(const RunConfig& config) {
  std::string labeled = out_path(config, "labeled.jsonl");
  require_artifact("featurize", labeled, "labeled corpus (run sieve)");
  LabeledCorpus corpus = load_labeled_corpus(
      labeled, out_path(config, "labeled.products.jsonl"));
  ProtocolConfig pc = make_protocol_config(config);
  auto sampled =
      sample_truthful(corpus.reviews, config.truthful_ratio, config.seed);
  FeatureSpace space =
      FeatureSpace::build(sampled, pc.features, pc.lexicon, pc.phrases);
  write_file(out_path(config, "feature_space.txt"), space.manifest());

  std::string vectors;
  char buf[64];
  for (const auto& lr : sampled) {
    const Product* product = corpus.find_product(lr.review.product_id);
    FeatureVector vec = assemble(lr.review, product, space);
    vectors += lr.review.review_id;
    vectors += '\t';
    vectors += label_name(lr.label);
    for (const auto& [i, v] : vec.values) {
      std::snprintf(buf, sizeof(buf), " %zu:%.17g", i, v);
      vectors += buf;
    }
    vectors += '\n';
  }
  write_file(out_path(config, "vectors.tsv"), vectors);
  write_manifest(config, "featurize", {labeled},
                 {"feature_space.txt", "vectors.tsv"});
}

void cmd_train(const RunConfig& config) {
  std::string space_path = out_path(config, "feature_space.txt");
  std::string vectors_path = out_path(config, "vectors.tsv");
  require_artifact("train", space_path, "feature manifest (run featurize)");
  require_artifact("train", vectors_path, "feature vectors (run featurize)");
  FeatureSpace space = FeatureSpace::from_manifest(read_file(space_path));

  std::vector<TrainExample> data;
  std::ifstream in(vectors_path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string review_id, label;
    ls >> review_id >> label;
    TrainExample ex;
    ex.deceptive = label == "deceptive";
    std::string item;
    while (ls >> item) {
      auto colon = item.find(':');
      ex.features.emplace_back(std::stoull(item.substr(0, colon)),
                               std::stod(item.substr(colon + 1)));
    }
    data.push_back(std::move(ex));
  }
  MaxentModel model = train(data, space.dim(), config.classifier);
  model.feature_space_hash = space.content_hash();
  write_file(out_path(config, "model.txt"), model_to_text(model, &space));
  write_manifest(config, "train", {space_path, vectors_path}, {"model.txt"});
}

void cmd_eval(const RunConfig& config, const std::string& protocol) {
  std::string labeled = out_path(config, "labeled.jsonl");
  require_artifact("eval", labeled, "labeled corpus (run sieve)");
  LabeledCorpus corpus = load_labeled_corpus(
      labeled, out_path(config, "labeled.products.jsonl"));
  ProtocolConfig pc = make_protocol_config(config);

  std::vector<std::string> outputs;
  auto emit = [&](const EvalReport& report, const std::string& stem) {
    write_file(out_path(config, stem + ".txt"), report.to_text());
    write_file(out_path(config, stem + ".csv"), report.to_csv());
    write_file(out_path(config, stem + ".json"), report.to_json());
    outputs.push_back(stem + ".txt");
    outputs.push_back(stem + ".csv");
    outputs.push_back(stem + ".json");
  };

  if (protocol == "indomain") {
    std::vector<Triple> domain_macros;
    EvalReport combined;
    combined.protocol = "indomain";
    combined.seed = config.seed;
    for (Domain d : core_domains()) {
      EvalReport r =
          kfold_indomain(corpus, d, config.kfold, pc, config.seed);
      combined.families = r.families;
      combined.runs.push_back(r.runs.at(0));
      domain_macros.push_back(r.runs.at(0).macro);
    }
    combined.meta_macro = macro_average(domain_macros);
    emit(combined, "report_indomain");
  } else if (protocol == "cross") {
    emit(cross_domain(corpus, pc, false, config.seed), "report_cross");
    emit(cross_domain(corpus, pc, true, config.seed),
         "report_cross_augmented");
  } else if (protocol == "curve") {
    auto points =
        learning_curve(corpus, domain_from_name(config.curve_train_domain),
                       config.curve_fractions, pc, config.seed);
    write_file(out_path(config, "curve.csv"), curve_to_csv(points));
    outputs.push_back("curve.csv");
  } else if (protocol == "reviewer") {
    std::set<std::string> train_ids(config.train_reviewers.begin(),
                                    config.train_reviewers.end());
    std::set<std::string> test_ids(config.test_reviewers.begin(),
                                   config.test_reviewers.end());
    if (train_ids.empty() || test_ids.empty())
      throw StageError("eval",
                       "reviewer protocol needs train_reviewers and "
                       "test_reviewers in the config");
    emit(reviewer_transfer(corpus, train_ids, test_ids, pc, config.seed),
         "report_reviewer");
  } else {
    throw StageError("eval", "unknown protocol " + protocol);
  }
  write_manifest(config, "eval_" + protocol, {labeled}, outputs);
}

}  // namespace spamdet
