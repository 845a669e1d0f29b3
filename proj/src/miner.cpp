#include "discsense/miner.hpp"

#include "discsense/error.hpp"
#include "discsense/lexicon.hpp"
#include "discsense/log.hpp"
#include "discsense/text.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <sstream>
#include <unordered_map>

namespace discsense {

namespace {

constexpr const char* kRulesHeader = "marker\tcategory\tsupport\tconfidence\tprior\tmarker_total";

std::string join_key(std::string_view dataset, std::string_view example) {
    std::string k(dataset);
    k.push_back('\t');
    k.append(example);
    return k;
}

} // namespace

void MiningConfig::validate() const {
    if (min_marker_count < 1) throw ConfigError("min_marker_count must be >= 1");
}

std::vector<PredictionJoin> join_predictions(std::span<const LabeledExample> labeled,
                                             std::span<const PredictionRecord> predictions) {
    std::unordered_map<std::string, const LabeledExample*> by_id;
    by_id.reserve(labeled.size());
    for (const auto& ex : labeled) {
        if (!by_id.emplace(join_key(ex.dataset_id, ex.example_id), &ex).second) {
            throw Error("duplicate labeled example " + ex.dataset_id + "/" + ex.example_id);
        }
    }
    std::unordered_map<std::string, bool> used;
    std::vector<std::string> missing;
    std::vector<PredictionJoin> out;
    out.reserve(predictions.size());
    for (const auto& p : predictions) {
        auto key = join_key(p.dataset_id, p.example_id);
        auto it = by_id.find(key);
        if (it == by_id.end()) {
            missing.push_back(p.dataset_id + "/" + p.example_id);
            continue;
        }
        if (used[key]) throw Error("duplicate prediction for example " + p.dataset_id + "/" + p.example_id);
        used[key] = true;
        out.push_back({p.dataset_id, p.example_id, it->second->label, p.predicted_marker});
    }
    if (!missing.empty()) {
        std::string list;
        for (std::size_t i = 0; i < std::min<std::size_t>(missing.size(), 10); ++i) list += (i ? ", " : "") + missing[i];
        if (missing.size() > 10) list += fmt::format(" (+{} more)", missing.size() - 10);
        throw Error(fmt::format("{} prediction(s) have no labeled example: {}", missing.size(), list));
    }
    return out;
}

PriorTable compute_priors(std::span<const LabeledExample> labeled) {
    std::map<std::string, std::map<std::string, std::size_t>> counts;
    std::map<std::string, std::size_t> totals;
    for (const auto& ex : labeled) {
        ++counts[ex.dataset_id][ex.label];
        ++totals[ex.dataset_id];
    }
    PriorTable priors;
    for (const auto& [dataset, per_label] : counts) {
        const double n = static_cast<double>(totals[dataset]);
        for (const auto& [label, c] : per_label) priors[dataset][label] = 100.0 * static_cast<double>(c) / n;
    }
    return priors;
}

std::vector<AssociationRule> mine_rules(std::span<const PredictionJoin> joins, const PriorTable& priors,
                                        const MiningConfig& cfg) {
    cfg.validate();
    // dataset -> marker -> label -> count
    std::map<std::string, std::map<std::string, std::map<std::string, std::size_t>>> counts;
    for (const auto& j : joins) {
        if (cfg.drop_none && j.marker == kNoneClass) continue;
        ++counts[j.dataset_id][j.marker][j.category];
    }

    std::vector<AssociationRule> rules;
    for (const auto& [dataset, per_marker] : counts) {
        auto prior_it = priors.find(dataset);
        if (prior_it == priors.end()) throw Error("no priors for dataset " + dataset);

        std::map<std::string, std::size_t> marker_total;
        std::map<std::string, std::size_t> label_total;
        for (const auto& [marker, per_label] : per_marker) {
            for (const auto& [label, c] : per_label) {
                marker_total[marker] += c;
                label_total[label] += c;
            }
        }
        const std::size_t before = rules.size();
        for (const auto& [marker, per_label] : per_marker) {
            const std::size_t total = marker_total[marker];
            if (total < cfg.min_marker_count) continue;
            for (const auto& [label, c] : per_label) {
                auto p = prior_it->second.find(label);
                if (p == prior_it->second.end()) throw Error("no prior for category " + dataset + "." + label);
                const double denom = cfg.direction == RuleDirection::marker_to_category
                                         ? static_cast<double>(total)
                                         : static_cast<double>(label_total[label]);
                rules.push_back({marker, dataset, label, c, total, 100.0 * static_cast<double>(c) / denom, p->second});
            }
        }
        if (rules.size() == before) {
            log().warn("{}: no marker reaches {} predictions; dataset yields no rules", dataset, cfg.min_marker_count);
        }
    }

    std::sort(rules.begin(), rules.end(), [](const AssociationRule& a, const AssociationRule& b) {
        if (a.dataset_id != b.dataset_id) return a.dataset_id < b.dataset_id;
        if (a.confidence != b.confidence) return a.confidence > b.confidence;
        if (a.support != b.support) return a.support > b.support;
        if (a.marker != b.marker) return a.marker < b.marker;
        return a.label < b.label;
    });
    return rules;
}

std::string format_percent(double value) {
    const double tenths = std::round(value * 10.0);
    const auto t = static_cast<long long>(tenths);
    const bool neg = t < 0;
    const long long a = neg ? -t : t;
    return fmt::format("{}{}.{}", neg ? "-" : "", a / 10, a % 10);
}

std::string render_table(std::span<const AssociationRule> rules, TableFormat format) {
    std::string out;
    if (format == TableFormat::tsv) {
        out = std::string(kRulesHeader) + "\n";
        for (const auto& r : rules) {
            out += fmt::format("{}\t{}\t{}\t{}\t{}\t{}\n", r.marker, r.category(), r.support,
                               text::format_double(r.confidence), text::format_double(r.prior), r.marker_total);
        }
        return out;
    }

    std::vector<std::array<std::string, 4>> rows;
    rows.push_back({"marker", "category", "support", "confidence (prior)"});
    for (const auto& r : rules) {
        rows.push_back({r.marker, r.category(), std::to_string(r.support),
                        format_percent(r.confidence) + " (" + format_percent(r.prior) + ")"});
    }
    if (format == TableFormat::markdown) {
        auto line = [](const std::array<std::string, 4>& c) {
            return fmt::format("| {} | {} | {} | {} |\n", c[0], c[1], c[2], c[3]);
        };
        out += line(rows[0]);
        out += "|---|---|---:|---:|\n";
        for (std::size_t i = 1; i < rows.size(); ++i) out += line(rows[i]);
        return out;
    }

    std::array<std::size_t, 4> width{};
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < 4; ++c) width[c] = std::max(width[c], row[c].size());
    }
    for (const auto& row : rows) {
        out += fmt::format("{:>{}}  {:>{}}  {:>{}}  {:>{}}\n", row[0], width[0], row[1], width[1], row[2], width[2],
                           row[3], width[3]);
    }
    return out;
}

std::vector<AssociationRule> parse_rules_tsv(std::istream& in, const std::string& source) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line) || line != kRulesHeader) throw ParseError(source, 1, "missing or unexpected header");
    std::vector<AssociationRule> rules;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto f = text::split(line, '\t');
        if (f.size() != 6) throw ParseError(source, line_no, "expected 6 columns, found " + std::to_string(f.size()));
        AssociationRule r;
        r.marker = std::string(f[0]);
        const auto dot = f[1].find('.');
        if (dot == std::string_view::npos || dot == 0) throw ParseError(source, line_no, "category must be dataset.label");
        r.dataset_id = std::string(f[1].substr(0, dot));
        r.label = std::string(f[1].substr(dot + 1));
        try {
            r.confidence = text::parse_double(f[3]);
            r.prior = text::parse_double(f[4]);
        } catch (const std::invalid_argument& e) {
            throw ParseError(source, line_no, e.what());
        }
        if (!text::parse_size(f[2], r.support) || !text::parse_size(f[5], r.marker_total)) {
            throw ParseError(source, line_no, "support and marker_total must be non-negative integers");
        }
        rules.push_back(std::move(r));
    }
    return rules;
}

} // namespace discsense
