#pragma once

#include "discsense/extractor.hpp"
#include "discsense/miner.hpp"
#include "discsense/model.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace discsense {

enum class ModelSource { internal, imported };

// Everything that affects results. Loaded from an INI file; relative paths
// resolve against the file's directory.
struct PipelineConfig {
    std::filesystem::path output_dir;
    std::filesystem::path corpus;
    std::optional<std::filesystem::path> lexicon; // bundled default when empty
    std::vector<std::filesystem::path> manifests;
    std::uint64_t seed = 0;
    ExtractionConfig extraction;
    TrainConfig training;
    MiningConfig mining;
    ModelSource model_source = ModelSource::internal;
    std::filesystem::path imported_predictions;
    std::string model_id = "linear-hashed-ngrams";

    static PipelineConfig load(const std::filesystem::path& path);
    // Checks settings and that every referenced input exists.
    void validate() const;
    MarkerLexicon load_lexicon() const;
};

// Tuning knobs that must not change any output.
struct RunOptions {
    unsigned jobs = 1;
};

// Output layout under output_dir.
struct OutputPaths {
    std::filesystem::path root;
    std::filesystem::path dataset_dir() const { return root / "dataset"; }
    std::filesystem::path split_file(Split s) const;
    std::filesystem::path extraction_report() const { return root / "extraction_report.tsv"; }
    std::filesystem::path model() const { return root / "model.bin"; }
    std::filesystem::path train_metrics() const { return root / "train_metrics.tsv"; }
    std::filesystem::path eval_report() const { return root / "eval_report.tsv"; }
    std::filesystem::path adapted_dir() const { return root / "adapted"; }
    std::filesystem::path adapted_file(const std::string& dataset_id) const;
    std::filesystem::path predictions() const { return root / "predictions.tsv"; }
    std::filesystem::path rules_tsv() const { return root / "rules.tsv"; }
    std::filesystem::path rules_text() const { return root / "rules.txt"; }
    std::filesystem::path rules_markdown() const { return root / "rules.md"; }
    std::filesystem::path report() const { return root / "report.txt"; }
};

struct EvalSummary {
    double accuracy = 0.0;
    MajorityBaseline majority;
    std::size_t examples = 0;
};

ExtractionReport cmd_extract(const PipelineConfig& cfg, const RunOptions& opts);
void cmd_train(const PipelineConfig& cfg, const RunOptions& opts);
EvalSummary cmd_eval(const PipelineConfig& cfg, const RunOptions& opts);
// Returns the number of prediction records written.
std::size_t cmd_predict(const PipelineConfig& cfg, const RunOptions& opts);
// Returns the number of rules.
std::size_t cmd_mine(const PipelineConfig& cfg, const RunOptions& opts);
void cmd_report(const PipelineConfig& cfg, const RunOptions& opts);
void cmd_pipeline(const PipelineConfig& cfg, const RunOptions& opts);

} // namespace discsense
