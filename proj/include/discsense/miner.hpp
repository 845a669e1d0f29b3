#pragma once

#include "discsense/adapter.hpp"
#include "discsense/predictions.hpp"

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace discsense {

// One (y, m) pair: gold category and predicted marker of an example.
struct PredictionJoin {
    std::string dataset_id;
    std::string example_id;
    std::string category;
    std::string marker;
    bool operator==(const PredictionJoin&) const = default;
};

// dataset_id -> category -> P(y) in percent
using PriorTable = std::map<std::string, std::map<std::string, double>>;

enum class RuleDirection {
    marker_to_category, // confidence = P(y | m)
    category_to_marker, // confidence = P(m | y)
};

struct MiningConfig {
    std::size_t min_marker_count = 20;
    bool drop_none = true;
    RuleDirection direction = RuleDirection::marker_to_category;

    void validate() const;
};

struct AssociationRule {
    std::string marker;
    std::string dataset_id;
    std::string label;
    std::size_t support = 0;      // examples with this (m, y)
    std::size_t marker_total = 0; // predictions of m in the dataset
    double confidence = 0.0;      // percent, full precision
    double prior = 0.0;           // percent, full precision

    std::string category() const { return dataset_id + "." + label; }
    bool operator==(const AssociationRule&) const = default;
};

// Inner join on (dataset_id, example_id); one join per prediction.
// Predictions without an example, or two predictions for one example, are
// errors.
std::vector<PredictionJoin> join_predictions(std::span<const LabeledExample> labeled,
                                             std::span<const PredictionRecord> predictions);

// P(y) over all labeled examples of each dataset, before any filtering.
PriorTable compute_priors(std::span<const LabeledExample> labeled);

// Per dataset: drop NONE (if configured), drop markers predicted fewer than
// min_marker_count times, emit one rule per remaining (m, y). Sorted by
// dataset, then descending confidence, descending support, marker, label.
std::vector<AssociationRule> mine_rules(std::span<const PredictionJoin> joins, const PriorTable& priors,
                                        const MiningConfig& cfg);

// Rounds half away from zero to one decimal: 95.238 -> "95.2".
std::string format_percent(double value);

enum class TableFormat { text, tsv, markdown };

// text/markdown: marker | category | support | confidence (prior), one
// decimal. tsv: marker, category, support, confidence, prior, marker_total
// at full precision.
std::string render_table(std::span<const AssociationRule> rules, TableFormat format);

std::vector<AssociationRule> parse_rules_tsv(std::istream& in, const std::string& source_name = "<rules>");

} // namespace discsense
