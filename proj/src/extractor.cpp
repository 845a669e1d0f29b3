#include "discsense/extractor.hpp"

#include "discsense/error.hpp"
#include "discsense/hashing.hpp"
#include "discsense/log.hpp"
#include "discsense/parallel.hpp"
#include "discsense/text.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <ostream>
#include <unordered_set>

namespace discsense {

void ExtractionConfig::validate() const {
    if (gap_min < 2) throw ConfigError("gap_min must be at least 2");
    if (gap_max < gap_min) throw ConfigError("gap_max must be >= gap_min");
    if (!(mask_probability >= 0.0 && mask_probability <= 1.0)) {
        throw ConfigError("mask_probability must lie in [0, 1]");
    }
    if (per_class_cap < 1) throw ConfigError("per_class_cap must be >= 1");
}

std::vector<MarkerPairExample> extract_adjacent_pairs(const Document& doc, const MarkerLexicon& lexicon) {
    std::vector<MarkerPairExample> out;
    for (std::size_t i = 0; i + 1 < doc.sentences.size(); ++i) {
        auto match = match_marker(doc.sentences[i + 1], lexicon);
        if (!match) continue;
        out.push_back({doc.sentences[i], std::move(match->stripped), std::move(match->marker), {doc.doc_id, i, i + 1}});
    }
    return out;
}

std::vector<MarkerPairExample> sample_nonadjacent_pairs(const Document& doc, std::size_t count,
                                                        const ExtractionConfig& cfg, Rng& rng) {
    const std::size_t n = doc.sentences.size();
    std::vector<MarkerPairExample> out;
    if (n < cfg.gap_min + 1 || count == 0) return out;
    const std::size_t max_gap = std::min(cfg.gap_max, n - 1);

    std::size_t feasible = 0;
    for (std::size_t g = cfg.gap_min; g <= max_gap; ++g) feasible += n - g;

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    if (count >= feasible) {
        for (std::size_t g = cfg.gap_min; g <= max_gap; ++g) {
            for (std::size_t i = 0; i + g < n; ++i) pairs.emplace_back(i, i + g);
        }
    } else {
        std::vector<std::size_t> open_gaps(max_gap - cfg.gap_min + 1);
        std::iota(open_gaps.begin(), open_gaps.end(), cfg.gap_min);
        std::vector<std::size_t> used(max_gap + 1, 0);
        std::unordered_set<std::uint64_t> taken;
        while (pairs.size() < count) {
            const std::size_t slot = rng.uniform_below(open_gaps.size());
            const std::size_t g = open_gaps[slot];
            std::size_t i;
            do {
                i = rng.uniform_below(n - g);
            } while (!taken.insert(static_cast<std::uint64_t>(i) * (n + 1) + g).second);
            pairs.emplace_back(i, i + g);
            if (++used[g] == n - g) {
                open_gaps.erase(open_gaps.begin() + static_cast<std::ptrdiff_t>(slot));
            }
        }
    }

    std::sort(pairs.begin(), pairs.end());
    out.reserve(pairs.size());
    for (auto [i, j] : pairs) {
        out.push_back({doc.sentences[i], doc.sentences[j], std::string(kNoneClass), {doc.doc_id, i, j}});
    }
    return out;
}

std::size_t apply_s1_masking(std::span<MarkerPairExample> examples, double p, Rng& rng) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("mask probability must lie in [0, 1]");
    std::size_t masked = 0;
    for (auto& ex : examples) {
        if (rng.bernoulli(p)) {
            ex.s1 = kMaskPlaceholder;
            ++masked;
        }
    }
    return masked;
}

void sort_canonical(std::vector<MarkerPairExample>& examples) {
    std::sort(examples.begin(), examples.end(), [](const MarkerPairExample& a, const MarkerPairExample& b) {
        return std::tie(a.label, a.source, a.s1, a.s2) < std::tie(b.label, b.source, b.s1, b.s2);
    });
}

std::size_t deduplicate_pairs(std::vector<MarkerPairExample>& examples) {
    sort_canonical(examples);
    std::unordered_set<std::string> seen;
    seen.reserve(examples.size());
    std::vector<MarkerPairExample> kept;
    kept.reserve(examples.size());
    for (auto& ex : examples) {
        std::string key = ex.s1;
        key.push_back('\t');
        key += ex.s2;
        if (seen.insert(std::move(key)).second) kept.push_back(std::move(ex));
    }
    const std::size_t removed = examples.size() - kept.size();
    examples = std::move(kept);
    return removed;
}

std::vector<MarkerPairExample> balance_dataset(std::vector<MarkerPairExample> examples, std::size_t cap, Rng& rng) {
    if (cap < 1) throw ConfigError("balance cap must be >= 1");
    sort_canonical(examples);
    std::vector<MarkerPairExample> out;
    std::vector<std::string> under_cap;
    std::size_t begin = 0;
    while (begin < examples.size()) {
        std::size_t end = begin;
        while (end < examples.size() && examples[end].label == examples[begin].label) ++end;
        const std::size_t available = end - begin;
        if (available <= cap) {
            if (available < cap) under_cap.push_back(examples[begin].label);
            for (std::size_t k = begin; k < end; ++k) out.push_back(std::move(examples[k]));
        } else {
            std::vector<std::size_t> idx(available);
            std::iota(idx.begin(), idx.end(), begin);
            rng.shuffle(std::span(idx));
            idx.resize(cap);
            std::sort(idx.begin(), idx.end());
            for (auto k : idx) out.push_back(std::move(examples[k]));
        }
        begin = end;
    }
    if (!under_cap.empty()) {
        log().warn("{} class(es) have fewer than {} examples (first: '{}')", under_cap.size(), cap, under_cap.front());
    }
    return out;
}

std::map<std::string, std::size_t> class_counts(std::span<const MarkerPairExample> examples) {
    std::map<std::string, std::size_t> counts;
    for (const auto& ex : examples) ++counts[ex.label];
    return counts;
}

Split split_of(std::string_view doc_id) {
    const auto bucket = mix64(fnv1a64(doc_id)) % 100;
    if (bucket < 90) return Split::train;
    if (bucket < 95) return Split::valid;
    return Split::test;
}

std::string_view split_name(Split split) {
    switch (split) {
    case Split::train: return "train";
    case Split::valid: return "valid";
    case Split::test: return "test";
    }
    return "train";
}

double ExtractionReport::mask_rate() const {
    const auto n = total();
    return n == 0 ? 0.0 : static_cast<double>(masked) / static_cast<double>(n);
}

std::size_t ExtractionReport::total() const {
    std::size_t n = 0;
    for (const auto& [_, c] : class_counts) n += c;
    return n;
}

ExtractedCorpus extract_corpus(std::span<const Document> docs, const MarkerLexicon& lexicon,
                               const ExtractionConfig& cfg, unsigned jobs) {
    cfg.validate();
    std::vector<std::vector<MarkerPairExample>> adjacent(docs.size());
    std::vector<std::vector<MarkerPairExample>> none(docs.size());

    auto work = [&](std::size_t k) {
        const auto& doc = docs[k];
        if (doc.sentences.size() >= 2) adjacent[k] = extract_adjacent_pairs(doc, lexicon);
        if (cfg.sample_none && doc.sentences.size() >= cfg.gap_min + 1) {
            Rng rng(derive_seed(cfg.rng_seed, doc.doc_id));
            none[k] = sample_nonadjacent_pairs(doc, std::max<std::size_t>(1, adjacent[k].size()), cfg, rng);
        }
    };

    parallel_for(docs.size(), jobs, work);

    ExtractedCorpus result;
    auto& report = result.report;
    report.documents = docs.size();
    auto& examples = result.examples;
    for (std::size_t k = 0; k < docs.size(); ++k) {
        report.adjacent_candidates += adjacent[k].size();
        report.none_candidates += none[k].size();
        std::move(adjacent[k].begin(), adjacent[k].end(), std::back_inserter(examples));
        std::move(none[k].begin(), none[k].end(), std::back_inserter(examples));
    }

    report.duplicates_removed = deduplicate_pairs(examples);
    Rng balance_rng(derive_seed(cfg.rng_seed, "balance"));
    examples = balance_dataset(std::move(examples), cfg.per_class_cap, balance_rng);
    Rng mask_rng(derive_seed(cfg.rng_seed, "mask"));
    report.masked = apply_s1_masking(examples, cfg.mask_probability, mask_rng);

    report.class_counts = class_counts(examples);
    for (const auto& ex : examples) ++report.split_sizes[std::string(split_name(split_of(ex.source.doc_id)))];
    return result;
}

void write_dataset(std::ostream& out, std::span<const MarkerPairExample> examples) {
    out << "label\ts1\ts2\tsource\n";
    for (const auto& ex : examples) {
        out << ex.label << '\t' << text::sanitize_field(ex.s1) << '\t' << text::sanitize_field(ex.s2) << '\t'
            << ex.source.doc_id << ':' << ex.source.s1_index << ':' << ex.source.s2_index << '\n';
    }
}

void write_dataset(const std::filesystem::path& path, std::span<const MarkerPairExample> examples) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write dataset " + path.string());
    write_dataset(out, examples);
    if (!out) throw Error("write failed for " + path.string());
}

std::vector<MarkerPairExample> read_dataset(std::istream& in, const std::vector<std::string>& class_names,
                                            const std::string& source_name) {
    std::unordered_set<std::string> known(class_names.begin(), class_names.end());
    std::vector<MarkerPairExample> out;
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError(source_name, 1, "missing header");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "label\ts1\ts2\tsource") throw ParseError(source_name, line_no, "unexpected header '" + line + "'");

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto f = text::split(line, '\t');
        if (f.size() != 4) {
            throw ParseError(source_name, line_no, "expected 4 columns, found " + std::to_string(f.size()));
        }
        MarkerPairExample ex{std::string(f[1]), std::string(f[2]), std::string(f[0]), {}};
        if (!known.count(ex.label)) throw ParseError(source_name, line_no, "unknown label '" + ex.label + "'");
        if (ex.s2.empty()) throw ParseError(source_name, line_no, "empty s2");

        auto src = f[3];
        auto p2 = src.rfind(':');
        auto p1 = p2 == std::string_view::npos || p2 == 0 ? std::string_view::npos : src.rfind(':', p2 - 1);
        if (p1 == std::string_view::npos || p1 == 0 || !text::parse_size(src.substr(p1 + 1, p2 - p1 - 1), ex.source.s1_index) ||
            !text::parse_size(src.substr(p2 + 1), ex.source.s2_index)) {
            throw ParseError(source_name, line_no, "malformed source '" + std::string(src) + "'");
        }
        ex.source.doc_id = std::string(src.substr(0, p1));
        out.push_back(std::move(ex));
    }
    return out;
}

std::vector<MarkerPairExample> read_dataset(const std::filesystem::path& path,
                                            const std::vector<std::string>& class_names) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open dataset " + path.string());
    return read_dataset(in, class_names, path.string());
}

void write_report(std::ostream& out, const ExtractionReport& r) {
    out << "documents\t" << r.documents << '\n';
    out << "adjacent_candidates\t" << r.adjacent_candidates << '\n';
    out << "none_candidates\t" << r.none_candidates << '\n';
    out << "duplicates_removed\t" << r.duplicates_removed << '\n';
    out << "examples\t" << r.total() << '\n';
    out << "masked\t" << r.masked << '\n';
    out << "mask_rate\t" << text::format_double(r.mask_rate()) << '\n';
    for (const auto& [split, n] : r.split_sizes) out << "split." << split << '\t' << n << '\n';
    for (const auto& [label, n] : r.class_counts) out << "class." << label << '\t' << n << '\n';
}

} // namespace discsense
