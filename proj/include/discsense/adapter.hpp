#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace discsense {

enum class TaskShape { single_sentence, sentence_pair, scored_pair };
enum class FileFormat { tsv, csv, jsonl };

inline constexpr const char* kDissimilar = "dissimilar";
inline constexpr const char* kSimilar = "similar";

// Describes one classification dataset file. Columns are names when the
// file has a header (or for JSONL keys), 0-based indices otherwise.
struct DatasetManifest {
    std::string dataset_id;
    TaskShape shape = TaskShape::sentence_pair;
    FileFormat format = FileFormat::tsv;
    bool header = true;
    std::filesystem::path data_path;
    std::string id_column;        // optional; row index when empty
    std::string sentence1_column; // the sentence for single_sentence
    std::string sentence2_column;
    std::string label_column;
    std::string rating_column;
    std::vector<std::string> label_set;
    // scored_pair only: file whose ratings fix the bin thresholds.
    std::optional<std::filesystem::path> quantile_reference;

    void validate() const;

    // INI-style key = value file. Relative paths resolve against the
    // manifest's directory.
    static DatasetManifest load(const std::filesystem::path& path);
};

struct LabeledExample {
    std::string dataset_id;
    std::string example_id;
    std::string s1;
    std::string s2;
    std::string label;
    bool operator==(const LabeledExample&) const = default;
};

struct ScoredExample {
    std::string dataset_id;
    std::string example_id;
    std::string s1;
    std::string s2;
    double rating = 0.0;
};

struct LoadResult {
    std::vector<LabeledExample> examples;
    std::size_t skipped_rows = 0; // malformed rows
    std::size_t discarded = 0;    // middle third of scored pairs
};

// Reads the manifest's data file into labeled pairs. Single sentences are
// paired with the "[S_1]" placeholder; scored pairs are binned.
LoadResult load_dataset(const DatasetManifest& manifest);

std::vector<ScoredExample> load_scored_rows(const DatasetManifest& manifest, const std::filesystem::path& path,
                                            std::size_t* skipped = nullptr);

LabeledExample singleton_to_pair(std::string dataset_id, std::string example_id, std::string sentence,
                                 std::string label);

struct RatingThresholds {
    double lower = 0.0; // at or below -> dissimilar
    double upper = 0.0; // at or above -> similar
};

// Value at rank ceil(N/3) from the bottom and from the top of the sorted
// ratings. Needs at least 3 finite ratings; a distribution whose thresholds
// meet or cross is rejected as degenerate.
RatingThresholds rating_thresholds(std::span<const double> ratings);

// Keeps the bottom and top thirds as "dissimilar"/"similar", drops the rest.
std::vector<LabeledExample> bin_scored_pairs(std::span<const ScoredExample> examples,
                                             const RatingThresholds& thresholds);
std::vector<LabeledExample> bin_scored_pairs(std::span<const ScoredExample> examples);

// Adapted file: header "label\ts1\ts2\tdataset_id\texample_id".
void write_adapted(const std::filesystem::path& path, std::span<const LabeledExample> examples);
std::vector<LabeledExample> read_adapted(const std::filesystem::path& path);

} // namespace discsense
