#pragma once

#include "discsense/adapter.hpp"
#include "discsense/model.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace discsense {

// The interchange unit between any marker model and the miner.
struct PredictionRecord {
    std::string dataset_id;
    std::string example_id;
    std::string predicted_marker;
    double probability = 0.0; // in (0, 1], written with 6 decimals
    std::string model_id;
    bool operator==(const PredictionRecord&) const = default;
};

inline constexpr const char* kPredictionHeader = "dataset_id\texample_id\tpredicted_marker\tprobability\tmodel_id";

// Argmax marker per example, probability rounded to the 6 decimals the file
// carries so records survive a write/read cycle unchanged. Order follows the
// input.
std::vector<PredictionRecord> predict_records(const MarkerModel& model, std::span<const LabeledExample> examples,
                                              const std::string& model_id, unsigned jobs = 1);

void write_predictions(std::ostream& out, std::span<const PredictionRecord> records);
void write_predictions(const std::filesystem::path& path, std::span<const PredictionRecord> records);

// Returns the number of records written.
std::size_t export_predictions(const MarkerModel& model, std::span<const LabeledExample> examples,
                               const std::filesystem::path& path, const std::string& model_id, unsigned jobs = 1);

// Validates every line: column count, probability range and marker
// membership in `vocabulary`.
std::vector<PredictionRecord> import_predictions(std::istream& in, const std::vector<std::string>& vocabulary,
                                                 const std::string& source_name);
std::vector<PredictionRecord> import_predictions(const std::filesystem::path& path,
                                                 const std::vector<std::string>& vocabulary);

} // namespace discsense
