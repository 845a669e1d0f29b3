#pragma once

// Reference implementations used as test oracles. They favour obviousness
// over speed and share no counting code with the library.

#include "discsense/adapter.hpp"
#include "discsense/miner.hpp"
#include "discsense/random.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

namespace oracle {

struct Rule {
    std::string marker, dataset, label;
    std::size_t support, marker_total;
    double confidence, prior;
};

// Nested loops over every (dataset, marker, label) triple.
inline std::vector<Rule> brute_force_rules(const std::vector<discsense::LabeledExample>& labeled,
                                           const std::vector<discsense::PredictionJoin>& joins, std::size_t min_count,
                                           bool drop_none) {
    std::set<std::string> datasets, markers, labels;
    for (const auto& j : joins) {
        datasets.insert(j.dataset_id);
        markers.insert(j.marker);
        labels.insert(j.category);
    }
    std::vector<Rule> out;
    for (const auto& d : datasets) {
        for (const auto& m : markers) {
            if (drop_none && m == "NONE") continue;
            std::size_t total = 0;
            for (const auto& j : joins) total += j.dataset_id == d && j.marker == m;
            if (total < min_count || total == 0) continue;
            for (const auto& y : labels) {
                std::size_t support = 0;
                for (const auto& j : joins) support += j.dataset_id == d && j.marker == m && j.category == y;
                if (support == 0) continue;
                std::size_t n = 0, ny = 0;
                for (const auto& e : labeled) {
                    if (e.dataset_id != d) continue;
                    ++n;
                    ny += e.label == y;
                }
                out.push_back({m, d, y, support, total, 100.0 * static_cast<double>(support) / static_cast<double>(total),
                               100.0 * static_cast<double>(ny) / static_cast<double>(n)});
            }
        }
    }
    return out;
}

struct MinerInstance {
    std::vector<discsense::LabeledExample> labeled;
    std::vector<discsense::PredictionJoin> joins;
    std::size_t min_count = 1;
};

// Random instance with up to `max_joins` joins over at most 3 datasets.
inline MinerInstance random_instance(discsense::Rng& rng, std::size_t max_joins, std::size_t max_markers,
                                     std::size_t max_labels) {
    MinerInstance inst;
    const std::size_t datasets = 1 + rng.uniform_below(3);
    const std::size_t markers = 1 + rng.uniform_below(max_markers);
    const std::size_t labels = 1 + rng.uniform_below(max_labels);
    const std::size_t n = 1 + rng.uniform_below(max_joins);
    for (std::size_t i = 0; i < n; ++i) {
        const std::string d = "D" + std::to_string(rng.uniform_below(datasets));
        const std::string y = "y" + std::to_string(rng.uniform_below(labels));
        // skewed marker choice so some markers clear the threshold and some do not
        const std::size_t m = rng.uniform_below(1 + rng.uniform_below(markers));
        const std::string marker = m == 0 && rng.bernoulli(0.2) ? "NONE" : "m" + std::to_string(m);
        const std::string id = "e" + std::to_string(i);
        inst.labeled.push_back({d, id, "[S_1]", "text", y});
        // a third of the examples have no prediction
        if (!rng.bernoulli(0.33)) inst.joins.push_back({d, id, y, marker});
    }
    inst.min_count = 1 + rng.uniform_below(std::max<std::size_t>(2, n / 10));
    return inst;
}

} // namespace oracle
