#include "discsense/pipeline.hpp"

#include "discsense/adapter.hpp"
#include "discsense/error.hpp"
#include "discsense/hashing.hpp"
#include "discsense/log.hpp"
#include "discsense/predictions.hpp"
#include "discsense/text.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include <fstream>
#include <limits>
#include <sstream>

namespace discsense {

namespace fs = std::filesystem;

namespace {

template <typename T>
T read_value(const boost::property_tree::ptree& tree, const std::string& key, T fallback) {
    auto node = tree.get_optional<std::string>(key);
    if (!node) return fallback;
    const std::string v(text::trim(*node));
    if constexpr (std::is_same_v<T, bool>) {
        const auto l = text::to_lower(v);
        if (l == "true" || l == "yes" || l == "1") return true;
        if (l == "false" || l == "no" || l == "0") return false;
    } else if constexpr (std::is_same_v<T, double>) {
        try {
            return text::parse_double(v);
        } catch (const std::invalid_argument&) {
        }
    } else if constexpr (std::is_same_v<T, std::string>) {
        return v;
    } else {
        std::size_t n = 0;
        if (text::parse_size(v, n) && n <= std::numeric_limits<T>::max()) return static_cast<T>(n);
    }
    throw ConfigError("config key '" + key + "' has an invalid value '" + v + "'");
}

void ensure_dir(const fs::path& p) {
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw Error("cannot create directory " + p.string() + ": " + ec.message());
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
    if (!out) throw Error("write failed for " + path.string());
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<DatasetManifest> load_manifests(const PipelineConfig& cfg) {
    std::vector<DatasetManifest> out;
    for (const auto& p : cfg.manifests) {
        auto m = DatasetManifest::load(p);
        for (const auto& prev : out) {
            if (prev.dataset_id == m.dataset_id) throw ConfigError("dataset_id '" + m.dataset_id + "' used twice");
        }
        out.push_back(std::move(m));
    }
    return out;
}

std::vector<LabeledExample> read_all_adapted(const PipelineConfig& cfg, const OutputPaths& out) {
    std::vector<LabeledExample> all;
    for (const auto& m : load_manifests(cfg)) {
        auto part = read_adapted(out.adapted_file(m.dataset_id));
        std::move(part.begin(), part.end(), std::back_inserter(all));
    }
    return all;
}

std::string_view direction_name(RuleDirection d) {
    return d == RuleDirection::marker_to_category ? "marker_to_category" : "category_to_marker";
}

} // namespace

PipelineConfig PipelineConfig::load(const fs::path& path) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::read_ini(path.string(), tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    const fs::path base = path.parent_path();
    auto resolve = [&](const std::string& p) { return p.empty() ? fs::path() : base / p; };

    PipelineConfig cfg;
    cfg.seed = read_value<std::uint64_t>(tree, "seed", 0);
    cfg.output_dir = resolve(read_value<std::string>(tree, "output_dir", "out"));
    cfg.model_id = read_value<std::string>(tree, "model_id", cfg.model_id);
    const auto source = read_value<std::string>(tree, "model", "internal");
    if (source == "internal") {
        cfg.model_source = ModelSource::internal;
    } else if (source == "imported") {
        cfg.model_source = ModelSource::imported;
        cfg.imported_predictions = resolve(read_value<std::string>(tree, "imported_predictions", ""));
    } else {
        throw ConfigError("config key 'model' must be 'internal' or 'imported'");
    }

    cfg.corpus = resolve(read_value<std::string>(tree, "extract.corpus", ""));
    if (auto lex = read_value<std::string>(tree, "extract.lexicon", ""); !lex.empty()) cfg.lexicon = resolve(lex);
    auto& ex = cfg.extraction;
    ex.gap_min = read_value<std::size_t>(tree, "extract.gap_min", ex.gap_min);
    ex.gap_max = read_value<std::size_t>(tree, "extract.gap_max", ex.gap_max);
    ex.mask_probability = read_value<double>(tree, "extract.mask_probability", ex.mask_probability);
    ex.per_class_cap = read_value<std::size_t>(tree, "extract.per_class_cap", ex.per_class_cap);
    ex.sample_none = read_value<bool>(tree, "extract.sample_none", ex.sample_none);
    ex.rng_seed = cfg.seed;

    auto& tr = cfg.training;
    tr.learning_rate = read_value<double>(tree, "train.learning_rate", tr.learning_rate);
    tr.epochs = read_value<std::size_t>(tree, "train.epochs", tr.epochs);
    tr.l2 = read_value<double>(tree, "train.l2", tr.l2);
    tr.batch_size = read_value<std::size_t>(tree, "train.batch_size", tr.batch_size);
    tr.hash_dimension = read_value<std::uint32_t>(tree, "train.hash_dimension", tr.hash_dimension);
    tr.max_pair_features = read_value<std::uint32_t>(tree, "train.max_pair_features", tr.max_pair_features);
    tr.rng_seed = derive_seed(cfg.seed, "train");

    const auto manifest_list = read_value<std::string>(tree, "datasets.manifests", "");
    for (auto m : text::split(manifest_list, ',')) {
        auto t = text::trim(m);
        if (!t.empty()) cfg.manifests.push_back(resolve(std::string(t)));
    }

    auto& mi = cfg.mining;
    mi.min_marker_count = read_value<std::size_t>(tree, "mine.min_marker_count", mi.min_marker_count);
    mi.drop_none = read_value<bool>(tree, "mine.drop_none", mi.drop_none);
    const auto dir = read_value<std::string>(tree, "mine.direction", "marker_to_category");
    if (dir == "marker_to_category") {
        mi.direction = RuleDirection::marker_to_category;
    } else if (dir == "category_to_marker") {
        mi.direction = RuleDirection::category_to_marker;
    } else {
        throw ConfigError("mine.direction must be marker_to_category or category_to_marker");
    }
    cfg.validate();
    return cfg;
}

void PipelineConfig::validate() const {
    extraction.validate();
    training.validate();
    mining.validate();
    auto must_exist = [](const fs::path& p, const char* what) {
        if (p.empty()) throw ConfigError(std::string(what) + " is not set");
        if (!fs::exists(p)) throw ConfigError(std::string(what) + " does not exist: " + p.string());
    };
    must_exist(corpus, "extract.corpus");
    if (lexicon) must_exist(*lexicon, "extract.lexicon");
    for (const auto& m : manifests) must_exist(m, "dataset manifest");
    if (model_source == ModelSource::imported) must_exist(imported_predictions, "imported_predictions");
    if (output_dir.empty()) throw ConfigError("output_dir is not set");
    if (model_id.empty() || model_id.find('\t') != std::string::npos) throw ConfigError("model_id must be a non-empty single field");
}

MarkerLexicon PipelineConfig::load_lexicon() const {
    return lexicon ? MarkerLexicon::load(*lexicon) : MarkerLexicon::discovery_default();
}

fs::path OutputPaths::split_file(Split s) const { return dataset_dir() / (std::string(split_name(s)) + ".tsv"); }

fs::path OutputPaths::adapted_file(const std::string& dataset_id) const { return adapted_dir() / (dataset_id + ".tsv"); }

ExtractionReport cmd_extract(const PipelineConfig& cfg, const RunOptions& opts) {
    const OutputPaths out{cfg.output_dir};
    const auto lexicon = cfg.load_lexicon();
    const auto docs = read_corpus(cfg.corpus);
    if (docs.empty()) throw Error("corpus " + cfg.corpus.string() + " contains no documents");

    auto extracted = extract_corpus(docs, lexicon, cfg.extraction, opts.jobs);
    if (extracted.examples.empty()) throw Error("extraction produced no examples");

    ensure_dir(out.dataset_dir());
    std::vector<MarkerPairExample> parts[3];
    for (auto& ex : extracted.examples) parts[static_cast<int>(split_of(ex.source.doc_id))].push_back(std::move(ex));
    for (Split s : {Split::train, Split::valid, Split::test}) write_dataset(out.split_file(s), parts[static_cast<int>(s)]);

    std::ostringstream report;
    write_report(report, extracted.report);
    write_text(out.extraction_report(), report.str());
    log().info("extracted {} examples over {} classes from {} documents ({} duplicates removed, mask rate {:.4f})",
               extracted.report.total(), extracted.report.class_counts.size(), extracted.report.documents,
               extracted.report.duplicates_removed, extracted.report.mask_rate());
    return extracted.report;
}

void cmd_train(const PipelineConfig& cfg, const RunOptions& opts) {
    const OutputPaths out{cfg.output_dir};
    const auto classes = cfg.load_lexicon().class_names();
    const auto train_set = read_dataset(out.split_file(Split::train), classes);
    const auto valid_set = read_dataset(out.split_file(Split::valid), classes);
    if (train_set.empty()) throw Error("training split is empty");

    std::string metrics = "epoch\tobjective\ttrain_accuracy\tvalid_accuracy\n";
    auto model = train(train_set, valid_set, classes, cfg.training, [&](const EpochStats& s) {
        metrics += fmt::format("{}\t{}\t{}\t{}\n", s.epoch, text::format_double(s.train_objective),
                               text::format_double(s.train_accuracy),
                               s.valid_accuracy ? text::format_double(*s.valid_accuracy) : "NA");
    }, opts.jobs);
    save_model(out.model(), model);
    write_text(out.train_metrics(), metrics);
}

EvalSummary cmd_eval(const PipelineConfig& cfg, const RunOptions& opts) {
    const OutputPaths out{cfg.output_dir};
    const auto classes = cfg.load_lexicon().class_names();
    const auto model = load_model(out.model());
    if (model.params.class_names != classes) throw Error("model classes do not match the configured lexicon");
    auto test_set = read_dataset(out.split_file(Split::test), classes);
    if (test_set.empty()) throw Error("test split is empty");

    EvalSummary s;
    s.examples = test_set.size();
    s.accuracy = evaluate_accuracy(model, test_set, opts.jobs);
    s.majority = majority_baseline(test_set, classes);
    const auto balanced = 1.0 / static_cast<double>(classes.size());
    write_text(out.eval_report(), fmt::format("examples\t{}\naccuracy\t{}\nmajority_class\t{}\nmajority_frequency\t{}\n"
                                              "uniform_baseline\t{}\nclasses\t{}\n",
                                              s.examples, text::format_double(s.accuracy), s.majority.label,
                                              text::format_double(s.majority.frequency), text::format_double(balanced),
                                              classes.size()));
    log().info("test accuracy {:.2f}% over {} examples; majority baseline {:.2f}% ('{}')", 100.0 * s.accuracy,
               s.examples, 100.0 * s.majority.frequency, s.majority.label);
    return s;
}

std::size_t cmd_predict(const PipelineConfig& cfg, const RunOptions& opts) {
    const OutputPaths out{cfg.output_dir};
    const auto classes = cfg.load_lexicon().class_names();
    ensure_dir(out.adapted_dir());

    std::vector<LabeledExample> all;
    for (const auto& m : load_manifests(cfg)) {
        auto loaded = load_dataset(m);
        log().info("{}: {} examples ({} skipped, {} discarded by binning)", m.dataset_id, loaded.examples.size(),
                   loaded.skipped_rows, loaded.discarded);
        write_adapted(out.adapted_file(m.dataset_id), loaded.examples);
        std::move(loaded.examples.begin(), loaded.examples.end(), std::back_inserter(all));
    }

    std::vector<PredictionRecord> records;
    if (cfg.model_source == ModelSource::imported) {
        records = import_predictions(cfg.imported_predictions, classes);
        join_predictions(all, records);
        if (records.size() != all.size()) {
            log().warn("imported predictions cover {} of {} adapted examples", records.size(), all.size());
        }
    } else {
        const auto model = load_model(out.model());
        if (model.params.class_names != classes) throw Error("model classes do not match the configured lexicon");
        records = predict_records(model, all, cfg.model_id, opts.jobs);
    }
    write_predictions(out.predictions(), records);
    return records.size();
}

std::size_t cmd_mine(const PipelineConfig& cfg, const RunOptions&) {
    const OutputPaths out{cfg.output_dir};
    const auto classes = cfg.load_lexicon().class_names();
    const auto labeled = read_all_adapted(cfg, out);
    const auto predictions = import_predictions(out.predictions(), classes);
    if (predictions.empty()) log().warn("no predictions to mine; writing empty rule tables");

    const auto joins = join_predictions(labeled, predictions);
    const auto rules = joins.empty() ? std::vector<AssociationRule>{}
                                     : mine_rules(joins, compute_priors(labeled), cfg.mining);
    write_text(out.rules_tsv(), render_table(rules, TableFormat::tsv));
    write_text(out.rules_text(), render_table(rules, TableFormat::text));
    write_text(out.rules_markdown(), render_table(rules, TableFormat::markdown));
    log().info("mined {} rules from {} joined predictions", rules.size(), joins.size());
    return rules.size();
}

void cmd_report(const PipelineConfig& cfg, const RunOptions&) {
    const OutputPaths out{cfg.output_dir};
    std::string r;
    r += "# configuration\n";
    r += fmt::format("seed\t{}\n", cfg.seed);
    r += fmt::format("model\t{}\n", cfg.model_source == ModelSource::internal ? "internal" : "imported");
    r += fmt::format("model_id\t{}\n", cfg.model_id);
    const auto& ex = cfg.extraction;
    r += fmt::format("extract\tgap_min={} gap_max={} mask_probability={} per_class_cap={} sample_none={}\n", ex.gap_min,
                     ex.gap_max, text::format_double(ex.mask_probability), ex.per_class_cap, ex.sample_none);
    const auto& tr = cfg.training;
    r += fmt::format("train\tlearning_rate={} epochs={} l2={} batch_size={} hash_dimension={} max_pair_features={}\n",
                     text::format_double(tr.learning_rate), tr.epochs, text::format_double(tr.l2), tr.batch_size,
                     tr.hash_dimension, tr.max_pair_features);
    r += fmt::format("mine\tmin_marker_count={} drop_none={} direction={}\n", cfg.mining.min_marker_count,
                     cfg.mining.drop_none, direction_name(cfg.mining.direction));

    auto section = [&](const char* title, const fs::path& p) {
        if (!fs::exists(p)) return;
        r += fmt::format("\n# {}\n", title);
        r += read_text(p);
    };
    section("extraction", out.extraction_report());
    section("training", out.train_metrics());
    section("evaluation", out.eval_report());

    if (fs::exists(out.predictions())) {
        const auto labeled = read_all_adapted(cfg, out);
        const auto preds = import_predictions(out.predictions(), cfg.load_lexicon().class_names());
        std::map<std::string, std::pair<std::size_t, std::size_t>> per_dataset;
        for (const auto& e : labeled) ++per_dataset[e.dataset_id].first;
        for (const auto& p : preds) ++per_dataset[p.dataset_id].second;
        r += "\n# datasets\ndataset_id\texamples\tpredictions\n";
        for (const auto& [id, c] : per_dataset) r += fmt::format("{}\t{}\t{}\n", id, c.first, c.second);
    }

    if (fs::exists(out.rules_tsv())) {
        std::ifstream in(out.rules_tsv(), std::ios::binary);
        const auto rules = parse_rules_tsv(in, out.rules_tsv().string());
        std::map<std::string, std::vector<AssociationRule>> top;
        for (const auto& rule : rules) {
            auto& v = top[rule.dataset_id];
            if (v.size() < 5) v.push_back(rule);
        }
        r += fmt::format("\n# top rules per dataset ({} rules total)\n", rules.size());
        for (const auto& [id, v] : top) r += render_table(v, TableFormat::text);
    }
    write_text(out.report(), r);
}

void cmd_pipeline(const PipelineConfig& cfg, const RunOptions& opts) {
    cmd_extract(cfg, opts);
    if (cfg.model_source == ModelSource::internal) {
        cmd_train(cfg, opts);
        cmd_eval(cfg, opts);
    }
    cmd_predict(cfg, opts);
    cmd_mine(cfg, opts);
    cmd_report(cfg, opts);
}

} // namespace discsense
