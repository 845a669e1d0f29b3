// Acceptance gate: one PASS/FAIL line per criterion, each with its own
// tolerance and time budget. Exits non-zero if any criterion fails.

#include "discsense/adapter.hpp"
#include "discsense/error.hpp"
#include "discsense/extractor.hpp"
#include "discsense/log.hpp"
#include "discsense/miner.hpp"
#include "discsense/model.hpp"
#include "discsense/pipeline.hpp"
#include "discsense/synthetic.hpp"
#include "oracles.hpp"
#include "support.hpp"

#include <boost/uuid/detail/sha1.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

using namespace discsense;
namespace fs = std::filesystem;

namespace {

// Budgets in seconds.
constexpr double kBudgetBaseline = 1.0;
constexpr double kBudgetTable = 1.0;
constexpr double kBudgetMiner = 30.0;
constexpr double kBudgetGradient = 10.0;
constexpr double kBudgetDesk = 600.0;
constexpr double kBudgetExtraction = 120.0;
constexpr double kBudgetBinning = 1.0;
constexpr double kBudgetGolden = 60.0;

constexpr double kGradientRelTol = 1e-4;
constexpr double kGradientStep = 1e-5;
constexpr double kDeskMinAccuracy = 0.25;
constexpr double kMaskRate = 0.10;
constexpr double kMaskTol = 0.01;
constexpr std::ptrdiff_t kBinTol = 1;

const std::vector<std::string> kWiki20 = {
    "additionally", "as a result,", "but",           "curiously,",   "however", "in contrast,",   "in fact,",
    "initially,",   "instead,",     "likewise,",     "previously,",  "rather,", "sadly,",         "seriously,",
    "similarly,",   "so,",          "specifically,", "technically,", "then,",   "unfortunately,",
};

struct Outcome {
    bool pass = false;
    std::string detail;
};

int g_failures = 0;

void run(const std::string& name, double budget, const std::function<Outcome()>& check) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > budget) {
        o.pass = false;
        o.detail += fmt::format("; over time budget {}s", budget);
    }
    if (!o.pass) ++g_failures;
    fmt::print("{} {} ({:.2f}s) {}\n", o.pass ? "PASS" : "FAIL", name, secs, o.detail);
    std::fflush(stdout);
}

std::vector<std::string> markers_of(const MarkerLexicon& lex) {
    std::vector<std::string> out;
    for (const auto& e : lex.entries()) out.push_back(e.canonical);
    return out;
}

std::vector<Document> synthetic_docs(const MarkerLexicon& lex, std::size_t documents, std::uint64_t seed) {
    SyntheticLanguageConfig lc;
    lc.seed = seed;
    SyntheticCorpusConfig cc;
    cc.documents = documents;
    cc.seed = seed;
    return SyntheticLanguage(markers_of(lex), lc).corpus(cc);
}

std::string dataset_bytes(std::span<const MarkerPairExample> examples) {
    std::ostringstream out;
    write_dataset(out, examples);
    return out.str();
}

std::string sha1_hex(const std::string& bytes) {
    boost::uuids::detail::sha1 h;
    h.process_bytes(bytes.data(), bytes.size());
    boost::uuids::detail::sha1::digest_type d;
    h.get_digest(d);
    std::string out;
    for (unsigned w : d) out += fmt::format("{:08x}", w);
    return out;
}

// Majority baseline on balanced extractor output, rendered to one decimal.
Outcome majority_parity() {
    const auto full = MarkerLexicon::discovery_default();
    ExtractionConfig cfg;
    cfg.per_class_cap = 20;
    cfg.rng_seed = 175;
    const auto docs = synthetic_docs(full, 1500, 175);
    const auto ex175 = extract_corpus(docs, full, cfg).examples;
    const auto classes175 = full.class_names();
    const auto counts175 = class_counts(ex175);
    const bool balanced175 = counts175.size() == 175 &&
                             std::all_of(counts175.begin(), counts175.end(), [](const auto& c) { return c.second == 20; });
    const auto m175 = majority_baseline(ex175, classes175);
    const auto r175 = format_percent(100.0 * m175.frequency);

    const auto wiki = full.subset(kWiki20);
    cfg.sample_none = false;
    const auto ex20 = extract_corpus(synthetic_docs(wiki, 300, 20), wiki, cfg).examples;
    auto classes20 = wiki.class_names();
    classes20.pop_back();
    const auto counts20 = class_counts(ex20);
    const bool balanced20 = counts20.size() == 20 &&
                            std::all_of(counts20.begin(), counts20.end(), [](const auto& c) { return c.second == 20; });
    const auto m20 = majority_baseline(ex20, classes20);
    const auto r20 = format_percent(100.0 * m20.frequency);

    const bool ok = balanced175 && balanced20 && std::fabs(m175.frequency - 1.0 / 175.0) < 1e-15 &&
                    (r175 == "0.5" || r175 == "0.6") && m20.frequency == 0.05 && r20 == "5.0";
    return {ok, fmt::format("175 classes: {:.4f}% -> {} (balanced={}); 20 classes: {} (balanced={})",
                            100.0 * m175.frequency, r175, balanced175, r20, balanced20)};
}

Outcome table_arithmetic() {
    std::vector<LabeledExample> labeled;
    for (int i = 0; i < 500; ++i) {
        labeled.push_back(singleton_to_pair("CR", std::to_string(i), "s", i < 109 ? "negative" : "positive"));
    }
    std::vector<PredictionJoin> joins;
    for (int i = 0; i < 66; ++i) joins.push_back({"CR", std::to_string(i), "negative", "unfortunately,"});
    for (int i = 66; i < 86; ++i) joins.push_back({"CR", std::to_string(i), "negative", "sadly,"});
    joins.push_back({"CR", "400", "positive", "sadly,"});
    const auto rules = mine_rules(joins, compute_priors(labeled), MiningConfig{});
    auto find = [&](const std::string& m, const std::string& y) -> const AssociationRule* {
        for (const auto& r : rules) {
            if (r.marker == m && r.label == y) return &r;
        }
        return nullptr;
    };
    const auto* unf = find("unfortunately,", "negative");
    const auto* sad = find("sadly,", "negative");
    if (!unf || !sad) return {false, "expected rules missing"};
    const auto cell = [](const AssociationRule& r) {
        return format_percent(r.confidence) + " (" + format_percent(r.prior) + ")";
    };
    const bool ok = unf->support == 66 && cell(*unf) == "100.0 (21.8)" && sad->support == 20 &&
                    cell(*sad) == "95.2 (21.8)";
    return {ok, fmt::format("unfortunately, {} {}; sadly, {} {}", unf->support, cell(*unf), sad->support, cell(*sad))};
}

Outcome miner_oracle() {
    Rng rng(10000);
    std::size_t rules_checked = 0;
    for (int t = 0; t < 100; ++t) {
        const auto inst = oracle::random_instance(rng, 10000, 20, 8);
        MiningConfig cfg;
        cfg.min_marker_count = inst.min_count;
        const auto got = mine_rules(inst.joins, compute_priors(inst.labeled), cfg);
        auto want = oracle::brute_force_rules(inst.labeled, inst.joins, cfg.min_marker_count, true);
        if (got.size() != want.size()) return {false, fmt::format("instance {}: {} rules vs {}", t, got.size(), want.size())};
        auto key = [](const std::string& m, const std::string& d, const std::string& y) { return d + "\t" + m + "\t" + y; };
        std::map<std::string, const oracle::Rule*> by_key;
        for (const auto& r : want) by_key[key(r.marker, r.dataset, r.label)] = &r;
        for (const auto& r : got) {
            auto it = by_key.find(key(r.marker, r.dataset_id, r.label));
            if (it == by_key.end()) return {false, fmt::format("instance {}: unexpected rule", t)};
            const auto& w = *it->second;
            if (w.support != r.support || w.marker_total != r.marker_total || w.confidence != r.confidence ||
                w.prior != r.prior) {
                return {false, fmt::format("instance {}: mismatch on {} -> {}.{}", t, r.marker, r.dataset_id, r.label)};
            }
        }
        rules_checked += got.size();
    }
    return {true, fmt::format("100 instances, {} rules identical", rules_checked)};
}

Outcome gradient_check() {
    Rng rng(31);
    double worst = 0.0;
    for (int model = 0; model < 20; ++model) {
        const std::uint32_t dim = 50;
        const std::size_t k = 5;
        std::vector<std::string> names;
        for (std::size_t c = 0; c < k; ++c) names.push_back("c" + std::to_string(c));
        ModelParams p(dim, names);
        for (auto& w : p.weights) w = rng.uniform01() - 0.5;
        for (auto& b : p.bias) b = rng.uniform01() - 0.5;
        std::vector<TrainingExample> batch;
        for (int i = 0; i < 16; ++i) {
            FeatureVector fv;
            for (std::uint32_t f = 0; f < dim; ++f) {
                if (rng.bernoulli(0.2)) {
                    fv.indices.push_back(f);
                    fv.values.push_back(rng.uniform01() * 2.0 - 1.0);
                }
            }
            batch.push_back({fv, rng.uniform_below(k)});
        }
        const double l2 = 0.01;
        const auto g = loss_and_grad(p, batch, l2);
        auto check = [&](double& param, double analytic) {
            const double saved = param;
            param = saved + kGradientStep;
            const double up = loss_and_grad(p, batch, l2).loss;
            param = saved - kGradientStep;
            const double down = loss_and_grad(p, batch, l2).loss;
            param = saved;
            const double numeric = (up - down) / (2.0 * kGradientStep);
            const double denom = std::max({std::fabs(analytic), std::fabs(numeric), 1e-6});
            worst = std::max(worst, std::fabs(analytic - numeric) / denom);
        };
        for (std::size_t i = 0; i < p.weights.size(); ++i) check(p.weights[i], g.weights[i]);
        for (std::size_t c = 0; c < k; ++c) check(p.bias[c], g.bias[c]);
    }
    return {worst < kGradientRelTol, fmt::format("max relative error {:.3e} (tolerance {:.0e})", worst, kGradientRelTol)};
}

Outcome desk_learning() {
    const auto wiki = MarkerLexicon::discovery_default().subset(kWiki20);
    ExtractionConfig ecfg;
    ecfg.per_class_cap = 2000;
    ecfg.sample_none = false;
    ecfg.rng_seed = 47;
    const auto docs = synthetic_docs(wiki, 11000, 47);
    auto examples = extract_corpus(docs, wiki, ecfg).examples;
    const auto counts = class_counts(examples);
    const bool full = counts.size() == 20 &&
                      std::all_of(counts.begin(), counts.end(), [](const auto& c) { return c.second == 2000; });
    std::vector<MarkerPairExample> parts[3];
    for (auto& e : examples) parts[static_cast<int>(split_of(e.source.doc_id))].push_back(std::move(e));
    auto classes = wiki.class_names();
    classes.pop_back();
    TrainConfig tcfg; // library defaults
    tcfg.rng_seed = derive_seed(47, "train");
    const auto model = train(parts[0], parts[1], classes, tcfg);
    const double acc = evaluate_accuracy(model, parts[2]);
    const auto majority = majority_baseline(parts[2], classes);
    return {full && acc >= kDeskMinAccuracy,
            fmt::format("20 x 2000 examples (complete={}), test accuracy {:.2f}% on {} examples, majority {:.2f}%",
                        full, 100.0 * acc, parts[2].size(), 100.0 * majority.frequency)};
}

Outcome extraction_properties() {
    const auto wiki = MarkerLexicon::discovery_default().subset(kWiki20);
    const auto docs = synthetic_docs(wiki, 24000, 98);
    std::map<std::string, const Document*> by_id;
    for (const auto& d : docs) by_id[d.doc_id] = &d;

    ExtractionConfig cfg;
    cfg.rng_seed = 98;
    const auto big = extract_corpus(docs, wiki, cfg, 4);
    const auto n = big.examples.size();
    if (n < 100000) return {false, fmt::format("only {} examples", n)};
    std::size_t bad_adjacent = 0, bad_gap = 0, masked = 0;
    for (const auto& e : big.examples) {
        const auto& doc = *by_id.at(e.source.doc_id);
        const auto gap = e.source.s2_index - e.source.s1_index;
        if (e.s1 == kMaskPlaceholder) ++masked;
        else if (e.s1 != doc.sentences[e.source.s1_index]) ++bad_adjacent;
        if (e.label == kNoneClass) {
            bad_gap += gap < 2 || gap > 100;
        } else {
            auto m = match_marker(doc.sentences[e.source.s2_index], wiki);
            bad_adjacent += gap != 1 || !m || m->marker != e.label || m->stripped != e.s2;
        }
    }
    const double rate = static_cast<double>(masked) / static_cast<double>(n);

    cfg.per_class_cap = 1500;
    const auto capped = extract_corpus(docs, wiki, cfg, 1);
    bool caps_ok = true;
    for (const auto& [label, c] : class_counts(capped.examples)) caps_ok &= c <= 1500;

    const auto reference = dataset_bytes(capped.examples);
    bool identical = dataset_bytes(extract_corpus(docs, wiki, cfg, 1).examples) == reference;
    for (unsigned jobs : {4u, 8u}) identical &= dataset_bytes(extract_corpus(docs, wiki, cfg, jobs).examples) == reference;
    cfg.rng_seed = 99;
    const bool seed_matters = dataset_bytes(extract_corpus(docs, wiki, cfg, 1).examples) != reference;

    const bool ok = bad_adjacent == 0 && bad_gap == 0 && std::fabs(rate - kMaskRate) <= kMaskTol && caps_ok && identical &&
                    seed_matters;
    return {ok, fmt::format("{} examples, non-adjacent markers {}, NONE gaps out of range {}, mask rate {:.4f}, "
                            "caps {}, identical across reruns and jobs 1/4/8: {}",
                            n, bad_adjacent, bad_gap, rate, caps_ok ? "respected" : "violated", identical)};
}

Outcome sts_binning() {
    Rng rng(3000);
    std::vector<ScoredExample> rows;
    for (int i = 0; i < 3000; ++i) rows.push_back({"STS", std::to_string(i), "a", "b", rng.uniform01() * 5.0});
    const auto out = bin_scored_pairs(rows);
    std::ptrdiff_t dis = 0, sim = 0;
    double max_dis = -INFINITY, min_sim = INFINITY;
    std::set<std::string> ids;
    for (const auto& e : out) {
        const double r = rows[std::stoul(e.example_id)].rating;
        ids.insert(e.example_id);
        if (e.label == kDissimilar) {
            ++dis;
            max_dis = std::max(max_dis, r);
        } else {
            ++sim;
            min_sim = std::min(min_sim, r);
        }
    }
    const auto discarded = 3000 - static_cast<std::ptrdiff_t>(out.size());
    const bool ok = std::abs(dis - 1000) <= kBinTol && std::abs(sim - 1000) <= kBinTol && ids.size() == out.size() &&
                    max_dis < min_sim;
    return {ok, fmt::format("dissimilar {}, similar {}, discarded {}, monotone {}", dis, sim, discarded, max_dis < min_sim)};
}

Outcome golden_run() {
    const fs::path toy = DISCSENSE_TOY_DATA;
    testing::TempDir dir;
    auto cfg = PipelineConfig::load(toy / "pipeline.ini");
    cfg.output_dir = dir.path();
    cmd_pipeline(cfg, RunOptions{2});

    std::ifstream golden(DISCSENSE_GOLDEN);
    if (!golden) return {false, "golden hash file missing"};
    std::size_t checked = 0;
    std::string mismatches;
    std::string hash, name;
    while (golden >> hash >> name) {
        const auto actual = sha1_hex(testing::read_file(dir / name));
        ++checked;
        if (actual != hash) mismatches += " " + name + "=" + actual;
    }
    if (checked == 0) return {false, "golden hash file is empty"};
    return {mismatches.empty(), mismatches.empty() ? fmt::format("{} files match", checked) : "mismatch:" + mismatches};
}

} // namespace

int main() {
    set_log_level(spdlog::level::err);
    run("majority-baseline parity", kBudgetBaseline, majority_parity);
    run("rule table arithmetic", kBudgetTable, table_arithmetic);
    run("miner oracle equivalence", kBudgetMiner, miner_oracle);
    run("gradient check", kBudgetGradient, gradient_check);
    run("desk-scale learning", kBudgetDesk, desk_learning);
    run("extraction property suite", kBudgetExtraction, extraction_properties);
    run("rating binning", kBudgetBinning, sts_binning);
    run("end-to-end golden run", kBudgetGolden, golden_run);
    fmt::print("{} criteria failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
