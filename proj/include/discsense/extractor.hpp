#pragma once

#include "discsense/corpus.hpp"
#include "discsense/lexicon.hpp"
#include "discsense/random.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace discsense {

inline constexpr std::string_view kMaskPlaceholder = "[S_1]";

struct SourceRef {
    std::string doc_id;
    std::size_t s1_index = 0;
    std::size_t s2_index = 0;
    auto operator<=>(const SourceRef&) const = default;
};

struct MarkerPairExample {
    std::string s1;
    std::string s2;
    std::string label;
    SourceRef source;
    bool operator==(const MarkerPairExample&) const = default;
};

struct ExtractionConfig {
    std::size_t gap_min = 2;
    std::size_t gap_max = 100;
    double mask_probability = 0.10;
    std::size_t per_class_cap = 20000;
    std::uint64_t rng_seed = 0;
    // Add the non-adjacent NONE class.
    bool sample_none = true;

    void validate() const;
};

std::vector<MarkerPairExample> extract_adjacent_pairs(const Document& doc, const MarkerLexicon& lexicon);

// Draws up to `count` distinct non-adjacent pairs (i, j) with
// gap_min <= j - i <= gap_max: the gap uniformly over gaps that still have
// unused positions, then the position uniformly over unused ones. When count
// reaches the number of feasible pairs, every feasible pair is returned.
// Documents shorter than gap_min + 1 sentences yield nothing.
std::vector<MarkerPairExample> sample_nonadjacent_pairs(const Document& doc, std::size_t count,
                                                        const ExtractionConfig& cfg, Rng& rng);

// Replaces each s1 by "[S_1]" independently with probability p.
// Returns the number of masked examples.
std::size_t apply_s1_masking(std::span<MarkerPairExample> examples, double p, Rng& rng);

// Canonical example order: label, then source.
void sort_canonical(std::vector<MarkerPairExample>& examples);

// Drops examples whose (s1, s2) text repeats an earlier one in canonical
// order. Returns the number removed; the result is canonically sorted.
std::size_t deduplicate_pairs(std::vector<MarkerPairExample>& examples);

// Keeps min(available, cap) examples per class, subsampled uniformly.
// Output is canonically sorted.
std::vector<MarkerPairExample> balance_dataset(std::vector<MarkerPairExample> examples, std::size_t cap, Rng& rng);

std::map<std::string, std::size_t> class_counts(std::span<const MarkerPairExample> examples);

enum class Split { train, valid, test };

// 90/5/5 by a hash of the document id.
Split split_of(std::string_view doc_id);
std::string_view split_name(Split split);

struct ExtractionReport {
    std::size_t documents = 0;
    std::size_t adjacent_candidates = 0;
    std::size_t none_candidates = 0;
    std::size_t duplicates_removed = 0;
    std::size_t masked = 0;
    std::map<std::string, std::size_t> class_counts;
    std::map<std::string, std::size_t> split_sizes;

    double mask_rate() const;
    std::size_t total() const;
};

struct ExtractedCorpus {
    std::vector<MarkerPairExample> examples; // canonical order
    ExtractionReport report;
};

// Full extraction: per-document pairs (run on `jobs` threads, each document
// with its own seed derived from (rng_seed, doc_id)), then dedup, balancing
// and masking in canonical order. Output does not depend on `jobs`.
ExtractedCorpus extract_corpus(std::span<const Document> docs, const MarkerLexicon& lexicon,
                               const ExtractionConfig& cfg, unsigned jobs = 1);

// Dataset TSV: header "label\ts1\ts2\tsource", source = "doc_id:i:j".
void write_dataset(const std::filesystem::path& path, std::span<const MarkerPairExample> examples);
void write_dataset(std::ostream& out, std::span<const MarkerPairExample> examples);
std::vector<MarkerPairExample> read_dataset(const std::filesystem::path& path,
                                            const std::vector<std::string>& class_names);
std::vector<MarkerPairExample> read_dataset(std::istream& in, const std::vector<std::string>& class_names,
                                            const std::string& source_name);

void write_report(std::ostream& out, const ExtractionReport& report);

} // namespace discsense
