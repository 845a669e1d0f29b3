// Writes the bundled toy inputs: a plain-text corpus, a 20-marker lexicon,
// three small classification datasets (one per task shape), their manifests
// and a pipeline config.

#include "discsense/error.hpp"
#include "discsense/hashing.hpp"
#include "discsense/lexicon.hpp"
#include "discsense/synthetic.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using discsense::Rng;

namespace {

const std::vector<std::string> kToyMarkers = {
    "additionally", "as a result,", "but",        "curiously,",   "however",      "in contrast,", "in fact,",
    "initially,",   "instead,",     "likewise,",  "previously,",  "rather,",      "sadly,",       "seriously,",
    "similarly,",   "so,",          "specifically,", "technically,", "then,",     "unfortunately,",
};

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw discsense::Error("cannot write " + p.string());
    out << content;
}

std::size_t index_of(const discsense::SyntheticLanguage& lang, const std::string& marker) {
    const auto& m = lang.markers();
    return static_cast<std::size_t>(std::find(m.begin(), m.end(), marker) - m.begin());
}

std::string capitalize(std::string s) {
    if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
    return s;
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generate the synthetic toy corpus and fixture datasets"};
    fs::path out_dir = "toy";
    std::uint64_t seed = 2020;
    std::size_t documents = 600;
    app.add_option("-o,--out", out_dir, "output directory");
    app.add_option("-s,--seed", seed, "generator seed");
    app.add_option("-d,--documents", documents, "number of corpus documents");
    CLI11_PARSE(app, argc, argv);

    try {
        fs::create_directories(out_dir);
        const auto lexicon = discsense::MarkerLexicon::discovery_default().subset(kToyMarkers);
        lexicon.save(out_dir / "lexicon.txt");
        std::vector<std::string> markers;
        for (const auto& e : lexicon.entries()) markers.push_back(e.canonical);

        discsense::SyntheticLanguageConfig lang_cfg;
        lang_cfg.seed = seed;
        const discsense::SyntheticLanguage lang(markers, lang_cfg);

        discsense::SyntheticCorpusConfig corpus_cfg;
        corpus_cfg.documents = documents;
        corpus_cfg.seed = seed;
        write_file(out_dir / "corpus.txt", discsense::render_plain_corpus(lang.corpus(corpus_cfg)));

        Rng rng(discsense::derive_seed(seed, "datasets"));
        auto pick = [&](const std::vector<std::string>& pool) { return index_of(lang, pool[rng.uniform_below(pool.size())]); };
        auto any_marker = [&] { return static_cast<std::size_t>(rng.uniform_below(markers.size())); };

        // Review sentences: 109 of 500 negative (21.8%).
        std::string cr = "id\tsentence\tlabel\n";
        for (std::size_t i = 0; i < 500; ++i) {
            const bool negative = i % 500 < 109;
            const std::size_t m = negative && rng.bernoulli(0.8) ? pick({"unfortunately,", "sadly,"}) : any_marker();
            cr += fmt::format("cr{:03}\t{}\t{}\n", i, capitalize(lang.continuation(m, rng)), negative ? "negative" : "positive");
        }
        write_file(out_dir / "cr.tsv", cr);
        write_file(out_dir / "cr.ini", "dataset_id = CR\ntask_shape = single_sentence\nformat = tsv\nheader = true\n"
                                       "data = cr.tsv\nid = id\nsentence1 = sentence\nlabel = label\n"
                                       "label_set = negative, positive\n");

        std::string mrpc = "sentence1,sentence2,quality\n";
        for (std::size_t i = 0; i < 300; ++i) {
            const bool paraphrase = rng.bernoulli(0.35);
            const std::size_t m = paraphrase && rng.bernoulli(0.8) ? pick({"similarly,", "likewise,"}) : any_marker();
            mrpc += fmt::format("{},{},{}\n", csv_quote(lang.setup_sentence(m, rng)),
                                csv_quote(capitalize(lang.continuation(m, rng))), paraphrase ? "1" : "0");
        }
        write_file(out_dir / "mrpc.csv", mrpc);
        write_file(out_dir / "mrpc.ini", "dataset_id = MRPC\ntask_shape = sentence_pair\nformat = csv\nheader = true\n"
                                         "data = mrpc.csv\nsentence1 = sentence1\nsentence2 = sentence2\n"
                                         "label = quality\nlabel_set = 0, 1\n");

        std::string sts;
        for (std::size_t i = 0; i < 300; ++i) {
            const double base = rng.uniform01() * 5.0;
            std::size_t m = any_marker();
            if (base > 3.5 && rng.bernoulli(0.7)) m = pick({"similarly,", "likewise,"});
            if (base < 1.5 && rng.bernoulli(0.7)) m = pick({"in contrast,", "rather,", "instead,"});
            nlohmann::json row = {{"pair_id", fmt::format("sts{:03}", i)},
                                  {"s1", lang.setup_sentence(m, rng)},
                                  {"s2", capitalize(lang.continuation(m, rng))},
                                  {"score", std::round(base * 100.0) / 100.0}};
            sts += row.dump() + "\n";
        }
        write_file(out_dir / "sts.jsonl", sts);
        write_file(out_dir / "sts.ini", "dataset_id = STS-B\ntask_shape = scored_pair\nformat = jsonl\n"
                                        "data = sts.jsonl\nid = pair_id\nsentence1 = s1\nsentence2 = s2\nrating = score\n");

        write_file(out_dir / "pipeline.ini",
                   "seed = 13\noutput_dir = out\nmodel = internal\nmodel_id = linear-hashed-ngrams\n\n"
                   "[extract]\ncorpus = corpus.txt\nlexicon = lexicon.txt\ngap_min = 2\ngap_max = 100\n"
                   "mask_probability = 0.1\nper_class_cap = 200\nsample_none = true\n\n"
                   "[train]\nlearning_rate = 4\nepochs = 3\nl2 = 1e-6\nbatch_size = 16\nhash_dimension = 65536\n"
                   "max_pair_features = 64\n\n"
                   "[datasets]\nmanifests = cr.ini, mrpc.ini, sts.ini\n\n"
                   "[mine]\nmin_marker_count = 5\ndrop_none = true\ndirection = marker_to_category\n");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
