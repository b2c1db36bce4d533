#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>

#include "csv.hpp"
#include "stance/corpus.hpp"
#include "stance/embed.hpp"
#include "stance/error.hpp"
#include "stance/eval/analysis.hpp"
#include "stance/eval/phenomena.hpp"
#include "stance/eval/scoring.hpp"
#include "stance/eval/sentiment.hpp"
#include "stance/gtr.hpp"
#include "stance/model/baselines.hpp"
#include "stance/model/features.hpp"
#include "stance/model/hpsearch.hpp"
#include "stance/model/tga.hpp"
#include "stance/model/tga_train.hpp"
#include "stance/rng.hpp"
#include "stance/topicx.hpp"

namespace stance::cli {

namespace fs = std::filesystem;

namespace {

// --- shared plumbing ----------------------------------------------------------------

struct Globals {
  std::uint64_t seed = 0;
  std::string out = ".";
};

struct TrainFlags {
  double lr = 0.001;
  int epochs = 20;
  int patience = 3;
  int batch = 64;
  int hidden = 64;

  model::TrainConfig config(std::uint64_t seed) const {
    model::TrainConfig c;
    c.learning_rate = lr;
    c.epochs = epochs;
    c.patience = patience;
    c.batch_size = batch;
    c.hidden = hidden;
    c.seed = seed;
    c.validate();
    return c;
  }
};

void add_train_flags(CLI::App* sub, TrainFlags& f) {
  sub->add_option("--lr", f.lr, "Adam learning rate")->capture_default_str();
  sub->add_option("--epochs", f.epochs, "Maximum epochs")->capture_default_str();
  sub->add_option("--patience", f.patience, "Epochs without dev improvement before stopping")
      ->capture_default_str();
  sub->add_option("--batch", f.batch, "Mini-batch size")->capture_default_str();
  sub->add_option("--hidden", f.hidden, "Hidden units of the classifier head")->capture_default_str();
}

fs::path out_dir(const Globals& g) {
  fs::path p(g.out);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create output directory " + p.string() + ": " + ec.message());
  return p;
}

// Config files split comma lists into several values; rejoin them.
void comma_list(CLI::Option* opt) { opt->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::Join); }

DatasetSplit load_split(const fs::path& dir) {
  DatasetSplit split;
  split.train = read_dataset(dir / "train.jsonl");
  split.dev = read_dataset(dir / "dev.jsonl");
  split.test = read_dataset(dir / "test.jsonl");
  assign_shot_subsets(split);
  return split;
}

const std::vector<StanceExample>& pick_set(const DatasetSplit& split, const std::string& name) {
  if (name == "dev") return split.dev;
  if (name == "test") return split.test;
  return split.train;
}

std::pair<const std::vector<std::size_t>*, const std::vector<std::size_t>*> pick_subsets(
    const DatasetSplit& split, const std::string& name) {
  if (name == "dev") return {&split.zero_shot_dev, &split.few_shot_dev};
  return {&split.zero_shot_test, &split.few_shot_test};
}

StanceLabel parse_label(const std::string& s, const std::string& where) {
  if (s == "con" || s == "0") return StanceLabel::Con;
  if (s == "pro" || s == "1") return StanceLabel::Pro;
  if (s == "neutral" || s == "2") return StanceLabel::Neutral;
  throw Error(ErrorCode::BadLabel, where + ": unknown label '" + s + "'");
}

std::string predictions_csv(const std::vector<StanceExample>& examples,
                            const std::vector<StanceLabel>& labels) {
  std::string out = "example_id,label\n";
  for (std::size_t i = 0; i < examples.size(); ++i)
    out += csv_row({examples[i].example_id, std::string(label_name(labels[i]))});
  return out;
}

std::vector<std::pair<std::string, StanceLabel>> read_predictions(const fs::path& path) {
  std::vector<std::string> header;
  auto rows = read_csv(path, &header);
  if (header.size() < 2 || header[0] != "example_id" || header[1] != "label")
    throw Error(ErrorCode::MalformedRecord, path.string() + ":1: expected header example_id,label");
  std::vector<std::pair<std::string, StanceLabel>> out;
  for (const auto& r : rows)
    out.emplace_back(r.fields[0], parse_label(r.fields[1], path.string() + ":" + std::to_string(r.line)));
  return out;
}

std::vector<double> parse_doubles(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CLI::ValidationError(what, "'" + item + "' is not a number");
    }
  }
  return out;
}

std::string report_header() {
  return "subset,n,macro_f1,f1_con,f1_pro,f1_neutral,precision_con,precision_pro,precision_neutral,"
         "recall_con,recall_pro,recall_neutral\n";
}

std::string report_row(const std::string& subset, const eval::EvalReport& r) {
  std::vector<std::string> f{subset, std::to_string(r.count), num(r.macro_f1)};
  for (double v : r.f1) f.push_back(num(v));
  for (double v : r.precision) f.push_back(num(v));
  for (double v : r.recall) f.push_back(num(v));
  return csv_row(f);
}

struct Features {
  embed::EmbeddingStore store;
  std::optional<gtr::ClusterModel> clusters;
  embed::TfIdfModel tfidf;
  std::unique_ptr<model::Featurizer> featurizer;
};

std::unique_ptr<Features> load_features(const DatasetSplit& split, const std::string& store_path,
                                        const std::string& clusters_path) {
  auto f = std::make_unique<Features>();
  f->store = embed::read_store(store_path);
  if (!clusters_path.empty()) f->clusters = gtr::read_model(clusters_path);
  f->tfidf = model::fit_store_tfidf(split.train, f->store);
  f->featurizer = std::make_unique<model::Featurizer>(
      f->store, f->clusters ? &*f->clusters : nullptr, f->tfidf);
  return f;
}

// --- subcommands ---------------------------------------------------------------------

struct IngestArgs {
  std::string annotations;
  double min_agreement = 0.5;
  bool inverted = false;
};

void cmd_ingest(const Globals& g, const IngestArgs& a, std::ostream& log) {
  auto records = read_annotations(a.annotations);
  AggregationOptions opts;
  opts.min_agreement = a.min_agreement;
  opts.inverted_scale = a.inverted;
  auto dataset = aggregate_annotations(records, opts);
  auto dir = out_dir(g);
  write_dataset(dataset, dir / "dataset.jsonl");
  std::string agreement = "worker_id,agreement\n";
  for (const auto& [worker, score] : worker_agreement(records, a.inverted))
    agreement += csv_row({worker, num(score)});
  write_text(dir / "worker_agreement.csv", agreement);
  log << "ingest: " << records.size() << " annotations -> " << dataset.size() << " examples in "
      << (dir / "dataset.jsonl").string() << "\n";
}

struct TopicsArgs {
  std::string trees;
  std::string categories;
};

void cmd_topics(const Globals& g, const TopicsArgs& a, std::ostream& log) {
  std::map<std::string, std::vector<std::string>> categories;
  if (!a.categories.empty()) {
    for (const auto& line : read_lines(a.categories)) {
      auto tab = line.find('\t');
      if (line.empty() || tab == std::string::npos) continue;
      categories[line.substr(0, tab)].push_back(line.substr(tab + 1));
    }
  }
  auto lines = read_lines(a.trees);
  std::string out = "doc_id\ttopic\tsource\n";
  std::size_t docs = 0, topics = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& line = lines[i];
    if (line.empty()) continue;
    auto tab = line.find('\t');
    std::string id = tab == std::string::npos ? std::to_string(i + 1) : line.substr(0, tab);
    std::string text = tab == std::string::npos ? line : line.substr(tab + 1);
    topicx::ParseTree tree;
    try {
      tree = topicx::parse_bracketed(text);
    } catch (const Error& e) {
      throw Error(e.code(), a.trees + ":" + std::to_string(i + 1) + ": " + e.detail());
    }
    ++docs;
    auto found = topicx::extract_candidate_topics(tree);
    std::string source = "tree";
    if (found.empty()) {
      auto it = categories.find(id);
      if (it != categories.end()) found = topicx::fallback_category_topics(it->second);
      source = "category";
    }
    for (const auto& t : found) {
      out += id + "\t" + t + "\t" + source + "\n";
      ++topics;
    }
  }
  auto dir = out_dir(g);
  write_text(dir / "topics.tsv", out);
  log << "topics: " << topics << " candidate topics from " << docs << " documents\n";
}

struct NeutralsArgs {
  std::string dataset;
  double p = 0.5;
};

void cmd_neutrals(const Globals& g, const NeutralsArgs& a, std::ostream& log) {
  auto dataset = read_dataset(a.dataset);
  auto out = generate_neutrals(dataset, a.p, rng::derive_seed(g.seed, "neutrals"));
  auto dir = out_dir(g);
  write_dataset(out, dir / "dataset_neutrals.jsonl");
  log << "neutrals: added " << out.size() - dataset.size() << " synthetic neutral examples ("
      << out.size() << " total)\n";
}

struct SplitArgs {
  std::string dataset;
  std::string ratios = "0.7,0.15,0.15";
};

void cmd_split(const Globals& g, const SplitArgs& a, std::ostream& log) {
  auto r = parse_doubles(a.ratios, "--ratios");
  if (r.size() != 3) throw CLI::ValidationError("--ratios", "expected three comma-separated ratios");
  auto dataset = read_dataset(a.dataset);
  auto split = split_dataset(dataset, SplitRatios{r[0], r[1], r[2]}, rng::derive_seed(g.seed, "split"));
  auto dir = out_dir(g);
  write_dataset(split.train, dir / "train.jsonl");
  write_dataset(split.dev, dir / "dev.jsonl");
  write_dataset(split.test, dir / "test.jsonl");
  std::string subsets = "partition,example_id,subset\n";
  auto emit = [&](const char* part, const std::vector<StanceExample>& ex,
                  const std::vector<std::size_t>& zero) {
    std::set<std::size_t> z(zero.begin(), zero.end());
    for (std::size_t i = 0; i < ex.size(); ++i)
      subsets += csv_row({part, ex[i].example_id, z.count(i) ? "zero_shot" : "few_shot"});
  };
  emit("dev", split.dev, split.zero_shot_dev);
  emit("test", split.test, split.zero_shot_test);
  write_text(dir / "subsets.csv", subsets);
  log << "split: train " << split.train.size() << ", dev " << split.dev.size() << " ("
      << split.zero_shot_dev.size() << " zero-shot), test " << split.test.size() << " ("
      << split.zero_shot_test.size() << " zero-shot)\n";
}

struct EmbedArgs {
  std::string split;
  std::string dataset;
  std::uint32_t dim = 32;
};

void cmd_embed_stub(const Globals& g, const EmbedArgs& a, std::ostream& log) {
  std::vector<StanceExample> examples;
  if (!a.split.empty()) {
    auto split = load_split(a.split);
    for (auto* part : {&split.train, &split.dev, &split.test})
      examples.insert(examples.end(), part->begin(), part->end());
  } else {
    examples = read_dataset(a.dataset);
  }
  auto store = embed::build_stub_store(examples, a.dim, rng::derive_seed(g.seed, "embed"));
  auto dir = out_dir(g);
  embed::write_store(store, dir / "store.tgae");
  log << "embed-stub: dim " << store.dim << ", " << store.joint.size() << " joint, "
      << store.sep_docs.size() << " documents, " << store.sep_topics.size() << " topics\n";
}

struct ClusterArgs {
  std::string split;
  std::string store;
  std::size_t k = 0;
  std::size_t k_lo = 50;
  std::size_t k_hi = 300;
  std::size_t k_trials = 20;
};

void cmd_cluster(const Globals& g, const ClusterArgs& a, std::ostream& log) {
  auto split = load_split(a.split);
  auto store = embed::read_store(a.store);
  auto tfidf = model::fit_store_tfidf(split.train, store);
  auto train_pts = model::pair_points(split.train, store, tfidf);
  auto dir = out_dir(g);
  std::size_t k = a.k;
  std::string trials = "k,dev_ssd,train_sse\n";
  if (k == 0) {
    auto dev_pts = model::pair_points(split.dev, store, tfidf);
    auto sel = gtr::select_k(train_pts.points, dev_pts.points, a.k_trials, a.k_lo, a.k_hi,
                             rng::derive_seed(g.seed, "select_k"));
    for (const auto& t : sel.trials)
      trials += csv_row({std::to_string(t.k), num(t.dev_ssd), num(t.train_sse)});
    k = sel.best_k;
  }
  write_text(dir / "k_selection.csv", trials);
  auto clusters = gtr::ward_cluster(train_pts.points, train_pts.ids, k);
  gtr::write_model(clusters, dir / "clusters.bin");
  std::string stats = "cluster,size,unique_topics,con,pro,neutral\n";
  for (const auto& s : gtr::cluster_stats(clusters, split.train))
    stats += csv_row({std::to_string(s.cluster), std::to_string(s.size), std::to_string(s.unique_topics),
                      std::to_string(s.labels[0]), std::to_string(s.labels[1]),
                      std::to_string(s.labels[2])});
  write_text(dir / "cluster_stats.csv", stats);
  log << "cluster: k=" << k << " over " << train_pts.ids.size() << " training pairs\n";
}

struct ModelArgs {
  std::string which;
  std::string split;
  std::string store;
  std::string clusters;
  TrainFlags train;
  std::size_t vocab_cap = 10000;
  double l2 = 1e-3;
};

std::optional<model::PooledMode> pooled_mode(const std::string& which) {
  if (which == "pooled-joint") return model::PooledMode::Joint;
  if (which == "pooled-sep") return model::PooledMode::Separate;
  return std::nullopt;
}

// Trains one model; returns dev/test predictions and, for neural models, history.
struct Trained {
  std::vector<StanceLabel> dev, test;
  std::vector<model::EpochRecord> history;
  std::optional<model::TgaParams> tga;
};

Trained train_model(const Globals& g, const ModelArgs& a, const DatasetSplit& split) {
  Trained t;
  if (a.which == "bowv") {
    model::BowvOptions opts;
    opts.vocab_cap = a.vocab_cap;
    opts.l2 = a.l2;
    auto m = model::baseline_bowv(split.train, opts);
    for (const auto& ex : split.dev) t.dev.push_back(m.predict(ex));
    for (const auto& ex : split.test) t.test.push_back(m.predict(ex));
    return t;
  }
  bool needs_clusters = a.which == "tga" || a.which == "cffnn" || a.which == "cmaj";
  if (a.store.empty()) throw CLI::ValidationError("--store", "required for model " + a.which);
  if (needs_clusters && a.clusters.empty())
    throw CLI::ValidationError("--clusters", "required for model " + a.which);
  auto f = load_features(split, a.store, needs_clusters ? a.clusters : "");
  const auto& feat = *f->featurizer;
  if (a.which == "cmaj") {
    auto m = model::baseline_cmaj(*f->clusters, split.train);
    for (const auto& ex : split.dev) t.dev.push_back(m.predict_cluster(feat.generalized_topic(ex).cluster));
    for (const auto& ex : split.test) t.test.push_back(m.predict_cluster(feat.generalized_topic(ex).cluster));
    return t;
  }
  auto config = a.train.config(rng::derive_seed(g.seed, "train"));
  if (a.which == "tga") {
    auto m = model::train(split, feat, config);
    t.dev = model::predict_all(split.dev, feat, m.params);
    t.test = model::predict_all(split.test, feat, m.params);
    t.history = m.history;
    t.tga = m.params;
    return t;
  }
  model::HeadModel head;
  std::vector<Eigen::VectorXd> dev_x, test_x;
  if (a.which == "cffnn") {
    head = model::baseline_cffnn(split, feat, config);
    dev_x = model::cffnn_inputs(split.dev, feat);
    test_x = model::cffnn_inputs(split.test, feat);
  } else {
    auto mode = *pooled_mode(a.which);
    head = model::baseline_pooled_head(mode, split, feat, config);
    dev_x = model::pooled_inputs(split.dev, feat, mode);
    test_x = model::pooled_inputs(split.test, feat, mode);
  }
  for (const auto& x : dev_x) t.dev.push_back(head.predict(x));
  for (const auto& x : test_x) t.test.push_back(head.predict(x));
  t.history = head.history;
  return t;
}

double zero_shot_dev_f1(const DatasetSplit& split, const std::vector<StanceLabel>& dev_pred) {
  auto r = eval::subset_eval(split.dev, split.zero_shot_dev, split.few_shot_dev, dev_pred);
  return r.zero_shot ? r.zero_shot->macro_f1 : r.all.macro_f1;
}

void cmd_train(const Globals& g, const ModelArgs& a, std::ostream& log) {
  auto split = load_split(a.split);
  auto t = train_model(g, a, split);
  auto dir = out_dir(g);
  write_text(dir / (a.which + "_dev.csv"), predictions_csv(split.dev, t.dev));
  write_text(dir / (a.which + "_test.csv"), predictions_csv(split.test, t.test));
  if (!t.history.empty()) write_text(dir / (a.which + "_history.csv"), model::history_csv(t.history));
  if (t.tga) model::write_params(*t.tga, dir / "tga_params.bin");
  log << a.which << ": zero-shot dev macro_f1=" << num(zero_shot_dev_f1(split, t.dev)) << "\n";
}

struct EvalArgs {
  std::string split;
  std::string pred;
  std::string pred_b;
  std::string set = "test";
  std::size_t resamples = 10000;
};

void cmd_eval(const Globals& g, const EvalArgs& a, std::ostream& log) {
  auto split = load_split(a.split);
  const auto& examples = pick_set(split, a.set);
  auto [zero, few] = pick_subsets(split, a.set);
  auto pred = eval::align_predictions(examples, read_predictions(a.pred));
  auto reports = eval::subset_eval(examples, *zero, *few, pred);

  std::string report = report_header() + report_row("all", reports.all);
  if (reports.zero_shot) report += report_row("zero_shot", *reports.zero_shot);
  if (reports.few_shot) report += report_row("few_shot", *reports.few_shot);
  auto dir = out_dir(g);
  write_text(dir / "eval_report.csv", report);

  std::vector<StanceExample> context;
  for (auto* part : {&split.train, &split.dev, &split.test})
    context.insert(context.end(), part->begin(), part->end());
  auto tags = eval::tag_phenomena(examples, context, eval::default_quote_chars());
  auto gold = eval::gold_labels(examples);
  std::string phen = "phenomenon,n_with,macro_f1_with,n_without,macro_f1_without\n";
  for (const auto& row : eval::phenomenon_eval(gold, pred, tags))
    phen += csv_row({eval::phenomenon_name(row.phenomenon), std::to_string(row.n_with),
                     row.with ? num(row.with->macro_f1) : "", std::to_string(row.n_without),
                     row.without ? num(row.without->macro_f1) : ""});
  write_text(dir / "phenomena.csv", phen);

  if (!a.pred_b.empty()) {
    auto pred_b = eval::align_predictions(examples, read_predictions(a.pred_b));
    double p = eval::paired_bootstrap(gold, pred, pred_b, a.resamples, rng::derive_seed(g.seed, "bootstrap"));
    std::string sig = "macro_f1_a,macro_f1_b,p_value,resamples\n";
    sig += csv_row({num(reports.all.macro_f1), num(eval::macro_f1(gold, pred_b).macro_f1), num(p),
                    std::to_string(a.resamples)});
    write_text(dir / "significance.csv", sig);
  }
  log << "eval: macro_f1=" << num(reports.all.macro_f1);
  if (reports.zero_shot) log << " zero_shot=" << num(reports.zero_shot->macro_f1);
  if (reports.few_shot) log << " few_shot=" << num(reports.few_shot->macro_f1);
  log << "\n";
}

struct AnalyzeArgs {
  std::string kind;
  std::string split;
  std::string dataset;
  std::string set = "test";
  std::string word_vectors;
  double theta = 0.9;
  std::string lexicon;
  std::string synonyms;
  std::string params;
  std::string clusters;
  std::string store;
  std::uint32_t dim = 32;
  std::string pred_a;
  std::string pred_b;
  std::string stat = "size";
  std::string bins = "1,2,5,10,20,50";
};

void require(const std::string& value, const char* flag, const std::string& kind) {
  if (value.empty()) throw CLI::ValidationError(flag, std::string("required for analyze ") + kind);
}

void analyze_lexsim(const Globals& g, const AnalyzeArgs& a, std::ostream& log) {
  require(a.split, "--split", a.kind);
  require(a.word_vectors, "--word-vectors", a.kind);
  auto split = load_split(a.split);
  auto wv = embed::load_word_vectors(a.word_vectors);
  const auto& examples = pick_set(split, a.set);
  auto [zero, few] = pick_subsets(split, a.set);
  (void)few;
  std::map<std::string, std::vector<std::string>> test_topics, train_topics;
  for (std::size_t i : *zero) test_topics[topic_key(examples[i].topic_tokens)] = examples[i].topic_tokens;
  for (const auto& ex : split.train) train_topics[topic_key(ex.topic_tokens)] = ex.topic_tokens;
  std::vector<std::vector<std::string>> test, train;
  for (auto& [k, v] : test_topics) test.push_back(v);
  for (auto& [k, v] : train_topics) train.push_back(v);
  auto r = eval::lexsim_topics(test, train, wv, a.theta);
  std::string out = "topic,max_similarity,flagged\n";
  std::size_t i = 0;
  for (const auto& [key, tokens] : test_topics) {
    out += csv_row({key, r.max_sim[i] ? num(*r.max_sim[i]) : "", r.flagged[i] ? "1" : "0"});
    ++i;
  }
  write_text(out_dir(g) / "lexsim.csv", out);
  log << "lexsim: " << r.flagged_count << " of " << test.size() << " zero-shot topics flagged at theta "
      << num(a.theta) << " (" << r.uncovered << " without vocabulary coverage)\n";
}

void analyze_sentiment(const Globals& g, const AnalyzeArgs& a, std::ostream& log) {
  require(a.lexicon, "--lexicon", a.kind);
  std::vector<StanceExample> examples;
  if (!a.dataset.empty()) {
    examples = read_dataset(a.dataset);
  } else {
    require(a.split, "--split", a.kind);
    examples = pick_set(load_split(a.split), a.set);
  }
  auto lex = eval::load_lexicon(a.lexicon);
  auto table = eval::sentiment_by_label(examples, lex);
  std::string out = "label,m_plus,m_minus,tie\n";
  for (StanceLabel l : kAllLabels) {
    const auto& c = table.counts[label_index(l)];
    out += csv_row({std::string(label_name(l)), std::to_string(c[0]), std::to_string(c[1]),
                    std::to_string(c[2])});
  }
  write_text(out_dir(g) / "sentiment_by_label.csv", out);
  log << "sentiment: " << examples.size() << " examples tabulated against " << lex.size()
      << " lexicon words\n";
}

void analyze_swap(const Globals& g, const AnalyzeArgs& a, std::ostream& log) {
  require(a.split, "--split", a.kind);
  require(a.lexicon, "--lexicon", a.kind);
  require(a.synonyms, "--synonyms", a.kind);
  auto split = load_split(a.split);
  auto lex = eval::load_lexicon(a.lexicon, fs::path(a.synonyms));
  const auto& examples = pick_set(split, a.set);

  std::vector<eval::NamedPredictor> predictors;
  auto bowv = std::make_shared<model::BowvModel>(model::baseline_bowv(split.train));
  predictors.push_back({"bowv", [bowv](const StanceExample& ex) { return bowv->predict(ex); }});

  // TGA needs embeddings of the perturbed text, which only the stub encoder can
  // produce in-process; the salt must match the one used by embed-stub.
  struct TgaState {
    embed::EmbeddingStore train_store;
    embed::TfIdfModel tfidf;
    gtr::ClusterModel clusters;
    model::TgaParams params;
    std::uint64_t salt = 0;
    std::uint32_t dim = 0;
  };
  if (!a.params.empty()) {
    require(a.clusters, "--clusters", a.kind);
    auto st = std::make_shared<TgaState>();
    st->salt = rng::derive_seed(g.seed, "embed");
    st->params = model::read_params(a.params);
    st->dim = static_cast<std::uint32_t>(st->params.dim());
    st->clusters = gtr::read_model(a.clusters);
    st->train_store = embed::build_stub_store(split.train, st->dim, st->salt);
    st->tfidf = model::fit_store_tfidf(split.train, st->train_store);
    predictors.push_back({"tga", [st](const StanceExample& ex) {
                            auto store = embed::build_stub_store({ex}, st->dim, st->salt);
                            model::Featurizer f(store, &st->clusters, st->tfidf);
                            return model::predict(ex, f, st->params).label;
                          }});
  }
  auto rows = eval::swap_eval(predictors, examples, lex, rng::derive_seed(g.seed, "swap"));
  std::string out = "model,label,direction,n,skipped,macro_f1_before,macro_f1_after,delta\n";
  for (const auto& r : rows)
    out += csv_row({r.model, std::string(label_name(r.label)), eval::direction_name(r.direction),
                    std::to_string(r.n), std::to_string(r.skipped), num(r.f1_before), num(r.f1_after),
                    num(r.delta())});
  write_text(out_dir(g) / "swap.csv", out);
  log << "swap: " << rows.size() << " rows for " << predictors.size() << " models\n";
}

void analyze_cluster_compare(const Globals& g, const AnalyzeArgs& a, std::ostream& log) {
  require(a.split, "--split", a.kind);
  require(a.store, "--store", a.kind);
  require(a.clusters, "--clusters", a.kind);
  require(a.pred_a, "--pred-a", a.kind);
  require(a.pred_b, "--pred-b", a.kind);
  if (a.stat != "size" && a.stat != "topics")
    throw CLI::ValidationError("--stat", "expected size or topics");
  auto split = load_split(a.split);
  auto f = load_features(split, a.store, a.clusters);
  const auto& examples = pick_set(split, a.set);
  auto pa = eval::align_predictions(examples, read_predictions(a.pred_a));
  auto pb = eval::align_predictions(examples, read_predictions(a.pred_b));

  std::map<std::uint32_t, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < examples.size(); ++i)
    members[f->featurizer->generalized_topic(examples[i]).cluster].push_back(i);
  std::map<std::uint32_t, gtr::ClusterStat> stats;
  for (const auto& s : gtr::cluster_stats(*f->clusters, split.train)) stats[s.cluster] = s;

  std::vector<double> stat, sa, sb;
  for (const auto& [c, idx] : members) {
    std::vector<StanceLabel> gold, a_pred, b_pred;
    for (std::size_t i : idx) {
      gold.push_back(examples[i].label);
      a_pred.push_back(pa[i]);
      b_pred.push_back(pb[i]);
    }
    const auto it = stats.find(c);
    double v = it == stats.end() ? 0.0
                                 : double(a.stat == "size" ? it->second.size : it->second.unique_topics);
    stat.push_back(v);
    sa.push_back(eval::macro_f1(gold, a_pred).macro_f1);
    sb.push_back(eval::macro_f1(gold, b_pred).macro_f1);
  }
  auto curve = eval::cluster_comparison(stat, sa, sb, parse_doubles(a.bins, "--bins"));
  write_text(out_dir(g) / "cluster_compare.csv", eval::curve_csv(curve));
  log << "cluster-compare: " << stat.size() << " clusters, " << curve.size() << " thresholds\n";
}

struct HpArgs {
  ModelArgs model;
  std::string space;
  std::size_t trials = 10;
};

void cmd_hpsearch(const Globals& g, const HpArgs& a, std::ostream& log) {
  auto split = load_split(a.model.split);
  auto space = model::parse_space(a.space);
  auto objective = [&](const model::HpConfig& hp) {
    ModelArgs m = a.model;
    for (const auto& [name, v] : hp) {
      if (name == "lr") m.train.lr = v;
      else if (name == "epochs") m.train.epochs = int(v);
      else if (name == "patience") m.train.patience = int(v);
      else if (name == "batch") m.train.batch = int(v);
      else if (name == "hidden") m.train.hidden = int(v);
      else if (name == "l2") m.l2 = v;
      else if (name == "vocab_cap") m.vocab_cap = std::size_t(v);
      else throw Error(ErrorCode::InvalidArgument, "unknown hyperparameter '" + name + "'");
    }
    return zero_shot_dev_f1(split, train_model(g, m, split).dev);
  };
  auto result = model::hp_search(space, a.trials, rng::derive_seed(g.seed, "hpsearch"), objective);

  std::vector<std::string> names;
  for (const auto& [name, dim] : space) names.push_back(name);
  std::vector<std::string> header{"trial"};
  header.insert(header.end(), names.begin(), names.end());
  header.push_back("zero_shot_dev_macro_f1");
  std::string trials = csv_row(header);
  std::vector<double> scores;
  for (std::size_t i = 0; i < result.trials.size(); ++i) {
    std::vector<std::string> row{std::to_string(i)};
    for (const auto& n : names) row.push_back(num(result.trials[i].config.at(n)));
    row.push_back(num(result.trials[i].score));
    trials += csv_row(row);
    scores.push_back(result.trials[i].score);
  }
  auto dir = out_dir(g);
  write_text(dir / "hpsearch_trials.csv", trials);
  std::string evp = "n,expected_max\n";
  auto curve = model::expected_validation_performance(scores);
  for (std::size_t n = 0; n < curve.size(); ++n) evp += csv_row({std::to_string(n + 1), num(curve[n])});
  write_text(dir / "hpsearch_evp.csv", evp);
  log << "hpsearch: best trial " << result.best_index << " with zero-shot dev macro_f1="
      << num(result.trials[result.best_index].score) << "\n";
}

struct ReportArgs {
  std::vector<std::string> inputs;
};

void cmd_report(const Globals& g, const ReportArgs& a, std::ostream& log) {
  std::string out = "run,subset,n,macro_f1\n";
  std::string best_run;
  double best = -1.0;
  for (const auto& in : a.inputs) {
    fs::path p(in);
    std::string run = p.parent_path().filename().string();
    if (run.empty()) run = p.stem().string();
    std::vector<std::string> header;
    auto rows = read_csv(p, &header);
    if (header.size() < 3 || header[0] != "subset" || header[2] != "macro_f1")
      throw Error(ErrorCode::MalformedRecord, in + ":1: not an eval report");
    for (const auto& r : rows) {
      out += csv_row({run, r.fields[0], r.fields[1], r.fields[2]});
      if (r.fields[0] == "zero_shot") {
        double v = std::stod(r.fields[2]);
        if (v > best) {
          best = v;
          best_run = run;
        }
      }
    }
  }
  write_text(out_dir(g) / "report.csv", out);
  log << "report: " << a.inputs.size() << " runs";
  if (!best_run.empty()) log << ", best zero-shot " << best_run << " (" << num(best) << ")";
  log << "\n";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zero-shot stance detection pipeline", "stance"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_config("--config", "", "Read options from a key=value file; flags given on the command line win");

  Globals g;
  app.add_option("--seed", g.seed, "Master seed; each stage derives its own sub-seed")->capture_default_str();
  app.add_option("--out", g.out, "Output directory")->capture_default_str();

  IngestArgs ingest;
  auto* s_ingest = app.add_subcommand("ingest", "Aggregate crowd annotations into a dataset");
  s_ingest->add_option("--annotations", ingest.annotations, "Annotation JSONL")->required()->check(CLI::ExistingFile);
  s_ingest->add_option("--min-agreement", ingest.min_agreement, "Worker agreement threshold")->capture_default_str();
  s_ingest->add_flag("--inverted-scale", ingest.inverted, "Annotation scale runs pro to con");

  TopicsArgs topics;
  auto* s_topics = app.add_subcommand("topics", "Extract candidate topics from parse trees");
  s_topics->add_option("--trees", topics.trees, "One bracketed tree per line, optionally id<TAB>tree")
      ->required()->check(CLI::ExistingFile);
  s_topics->add_option("--categories", topics.categories, "id<TAB>category lines used as fallback")
      ->check(CLI::ExistingFile);

  NeutralsArgs neutrals;
  auto* s_neutrals = app.add_subcommand("neutrals", "Add synthetic neutral examples");
  s_neutrals->add_option("--dataset", neutrals.dataset, "Dataset JSONL")->required()->check(CLI::ExistingFile);
  s_neutrals->add_option("--p", neutrals.p, "Conversion probability")->capture_default_str();

  SplitArgs split;
  auto* s_split = app.add_subcommand("split", "Document-disjoint train/dev/test split");
  s_split->add_option("--dataset", split.dataset, "Dataset JSONL")->required()->check(CLI::ExistingFile);
  comma_list(s_split->add_option("--ratios", split.ratios, "train,dev,test ratios")->capture_default_str());

  EmbedArgs emb;
  auto* s_embed = app.add_subcommand("embed-stub", "Write a deterministic stub embedding store");
  auto* emb_split = s_embed->add_option("--split", emb.split, "Split directory")->check(CLI::ExistingDirectory);
  auto* emb_data = s_embed->add_option("--dataset", emb.dataset, "Dataset JSONL")->check(CLI::ExistingFile);
  emb_split->excludes(emb_data);
  s_embed->add_option("--dim", emb.dim, "Embedding dimension")->capture_default_str()->check(CLI::PositiveNumber);

  ClusterArgs cl;
  auto* s_cluster = app.add_subcommand("cluster", "Ward clustering of training pairs with k selection");
  s_cluster->add_option("--split", cl.split, "Split directory")->required()->check(CLI::ExistingDirectory);
  s_cluster->add_option("--store", cl.store, "Embedding store")->required()->check(CLI::ExistingFile);
  s_cluster->add_option("--k", cl.k, "Fixed number of clusters (skips selection)");
  s_cluster->add_option("--k-lo", cl.k_lo, "Smallest k sampled")->capture_default_str();
  s_cluster->add_option("--k-hi", cl.k_hi, "Largest k sampled")->capture_default_str();
  s_cluster->add_option("--k-trials", cl.k_trials, "Number of k values sampled")->capture_default_str();

  ModelArgs tr;
  auto* s_train = app.add_subcommand("train", "Train a neural model and write predictions");
  s_train->add_option("model", tr.which, "tga, cffnn, pooled-joint or pooled-sep")
      ->required()->check(CLI::IsMember({"tga", "cffnn", "pooled-joint", "pooled-sep"}));
  s_train->add_option("--split", tr.split, "Split directory")->required()->check(CLI::ExistingDirectory);
  s_train->add_option("--store", tr.store, "Embedding store")->required()->check(CLI::ExistingFile);
  s_train->add_option("--clusters", tr.clusters, "Cluster model (tga, cffnn)")->check(CLI::ExistingFile);
  add_train_flags(s_train, tr.train);

  ModelArgs bl;
  auto* s_base = app.add_subcommand("baseline", "Fit a non-neural baseline and write predictions");
  s_base->add_option("model", bl.which, "cmaj or bowv")->required()->check(CLI::IsMember({"cmaj", "bowv"}));
  s_base->add_option("--split", bl.split, "Split directory")->required()->check(CLI::ExistingDirectory);
  s_base->add_option("--store", bl.store, "Embedding store (cmaj)")->check(CLI::ExistingFile);
  s_base->add_option("--clusters", bl.clusters, "Cluster model (cmaj)")->check(CLI::ExistingFile);
  s_base->add_option("--vocab-cap", bl.vocab_cap, "Document vocabulary size (bowv)")->capture_default_str();
  s_base->add_option("--l2", bl.l2, "L2 penalty (bowv)")->capture_default_str();

  EvalArgs ev;
  auto* s_eval = app.add_subcommand("eval", "Score predictions by subset and phenomenon");
  s_eval->add_option("--split", ev.split, "Split directory")->required()->check(CLI::ExistingDirectory);
  s_eval->add_option("--pred", ev.pred, "Predictions CSV (example_id,label)")->required()->check(CLI::ExistingFile);
  s_eval->add_option("--pred-b", ev.pred_b, "Second predictions CSV for a paired bootstrap")
      ->check(CLI::ExistingFile);
  s_eval->add_option("--set", ev.set, "dev or test")->capture_default_str()->check(CLI::IsMember({"dev", "test"}));
  s_eval->add_option("--resamples", ev.resamples, "Bootstrap resamples")->capture_default_str();

  AnalyzeArgs an;
  auto* s_an = app.add_subcommand("analyze", "Error analyses");
  s_an->add_option("kind", an.kind, "lexsim, sentiment, swap or cluster-compare")
      ->required()->check(CLI::IsMember({"lexsim", "sentiment", "swap", "cluster-compare"}));
  s_an->add_option("--split", an.split, "Split directory")->check(CLI::ExistingDirectory);
  s_an->add_option("--dataset", an.dataset, "Dataset JSONL (sentiment)")->check(CLI::ExistingFile);
  s_an->add_option("--set", an.set, "dev or test")->capture_default_str()->check(CLI::IsMember({"dev", "test"}));
  s_an->add_option("--word-vectors", an.word_vectors, "Static word vectors (lexsim)")->check(CLI::ExistingFile);
  s_an->add_option("--theta", an.theta, "Cosine threshold (lexsim)")->capture_default_str();
  s_an->add_option("--lexicon", an.lexicon, "word<TAB>positive|negative")->check(CLI::ExistingFile);
  s_an->add_option("--synonyms", an.synonyms, "word<TAB>synonym<TAB>polarity")->check(CLI::ExistingFile);
  s_an->add_option("--params", an.params, "TGA parameters trained on stub embeddings (swap)")
      ->check(CLI::ExistingFile);
  s_an->add_option("--clusters", an.clusters, "Cluster model")->check(CLI::ExistingFile);
  s_an->add_option("--store", an.store, "Embedding store (cluster-compare)")->check(CLI::ExistingFile);
  s_an->add_option("--pred-a", an.pred_a, "Model A predictions")->check(CLI::ExistingFile);
  s_an->add_option("--pred-b", an.pred_b, "Model B predictions")->check(CLI::ExistingFile);
  s_an->add_option("--stat", an.stat, "Cluster statistic: size or topics")->capture_default_str();
  comma_list(s_an->add_option("--bins", an.bins, "Comma-separated thresholds")->capture_default_str());

  HpArgs hp;
  auto* s_hp = app.add_subcommand("hpsearch", "Random hyperparameter search with expected validation performance");
  s_hp->add_option("model", hp.model.which, "tga, cffnn, pooled-joint, pooled-sep or bowv")
      ->required()->check(CLI::IsMember({"tga", "cffnn", "pooled-joint", "pooled-sep", "bowv"}));
  s_hp->add_option("--split", hp.model.split, "Split directory")->required()->check(CLI::ExistingDirectory);
  s_hp->add_option("--store", hp.model.store, "Embedding store")->check(CLI::ExistingFile);
  s_hp->add_option("--clusters", hp.model.clusters, "Cluster model")->check(CLI::ExistingFile);
  comma_list(s_hp->add_option("--space", hp.space, "e.g. lr=0.0001:0.01,hidden=16|32|64")->required());
  s_hp->add_option("--trials", hp.trials, "Number of sampled configurations")->capture_default_str();
  add_train_flags(s_hp, hp.model.train);

  ReportArgs rep;
  auto* s_rep = app.add_subcommand("report", "Collect eval reports into one table");
  s_rep->add_option("inputs", rep.inputs, "eval_report.csv files")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (emb_split->count() == 0 && emb_data->count() == 0 && s_embed->parsed())
      throw CLI::ValidationError("embed-stub", "one of --split or --dataset is required");
    if (s_ingest->parsed()) cmd_ingest(g, ingest, out);
    else if (s_topics->parsed()) cmd_topics(g, topics, out);
    else if (s_neutrals->parsed()) cmd_neutrals(g, neutrals, out);
    else if (s_split->parsed()) cmd_split(g, split, out);
    else if (s_embed->parsed()) cmd_embed_stub(g, emb, out);
    else if (s_cluster->parsed()) cmd_cluster(g, cl, out);
    else if (s_train->parsed()) cmd_train(g, tr, out);
    else if (s_base->parsed()) cmd_train(g, bl, out);
    else if (s_eval->parsed()) cmd_eval(g, ev, out);
    else if (s_an->parsed()) {
      if (an.kind == "lexsim") analyze_lexsim(g, an, out);
      else if (an.kind == "sentiment") analyze_sentiment(g, an, out);
      else if (an.kind == "swap") analyze_swap(g, an, out);
      else analyze_cluster_compare(g, an, out);
    } else if (s_hp->parsed()) cmd_hpsearch(g, hp, out);
    else if (s_rep->parsed()) cmd_report(g, rep, out);
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace stance::cli
