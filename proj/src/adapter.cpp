#include "discsense/adapter.hpp"

#include "discsense/error.hpp"
#include "discsense/extractor.hpp"
#include "discsense/log.hpp"
#include "discsense/text.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

namespace discsense {

namespace {

TaskShape parse_shape(const std::string& s) {
    if (s == "single_sentence") return TaskShape::single_sentence;
    if (s == "sentence_pair") return TaskShape::sentence_pair;
    if (s == "scored_pair") return TaskShape::scored_pair;
    throw ConfigError("unknown task_shape '" + s + "'");
}

FileFormat parse_format(const std::string& s) {
    if (s == "tsv") return FileFormat::tsv;
    if (s == "csv") return FileFormat::csv;
    if (s == "jsonl") return FileFormat::jsonl;
    throw ConfigError("unknown format '" + s + "'");
}

bool parse_bool(const std::string& s) {
    const auto v = text::to_lower(s);
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    throw ConfigError("expected a boolean, got '" + s + "'");
}

// RFC 4180 fields on one physical line: a quoted field may contain commas
// and doubled quotes. Throws on an unterminated quote or stray characters
// after a closing quote.
std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> out(1);
    std::size_t i = 0;
    while (true) {
        std::string& field = out.back();
        if (i < line.size() && line[i] == '"') {
            ++i;
            while (true) {
                if (i >= line.size()) throw std::invalid_argument("unterminated quoted field");
                if (line[i] == '"') {
                    if (i + 1 < line.size() && line[i + 1] == '"') {
                        field.push_back('"');
                        i += 2;
                        continue;
                    }
                    ++i;
                    break;
                }
                field.push_back(line[i++]);
            }
            if (i < line.size() && line[i] != ',') throw std::invalid_argument("text after closing quote");
        } else {
            while (i < line.size() && line[i] != ',') field.push_back(line[i++]);
        }
        if (i >= line.size()) return out;
        ++i; // comma
        out.emplace_back();
    }
}

// One data row with column lookup by manifest column spec.
class RowSource {
public:
    RowSource(const DatasetManifest& m, const std::filesystem::path& path) : m_(m), path_(path), in_(path) {
        if (!in_) throw Error("cannot open dataset file " + path.string());
        if (m_.format != FileFormat::jsonl && m_.header) {
            std::string line;
            if (!next_line(line)) throw ParseError(path_.string(), 1, "missing header row");
            auto names = split_fields(line);
            for (std::size_t i = 0; i < names.size(); ++i) header_.emplace(text::trim(names[i]), i);
        }
    }

    // False at end of file. `ok` is false for rows that cannot be parsed.
    bool next(bool& ok) {
        std::string line;
        do {
            if (!next_line(line)) return false;
        } while (text::trim(line).empty());
        ++row_;
        ok = true;
        fields_.clear();
        json_ = nlohmann::json();
        try {
            if (m_.format == FileFormat::jsonl) {
                json_ = nlohmann::json::parse(line);
                if (!json_.is_object()) ok = false;
            } else {
                fields_ = split_fields(line);
            }
        } catch (const std::exception&) {
            ok = false;
        }
        return true;
    }

    std::optional<std::string> get(const std::string& column) const {
        if (m_.format == FileFormat::jsonl) {
            auto it = json_.find(column);
            if (it == json_.end() || it->is_null()) return std::nullopt;
            if (it->is_string()) return it->get<std::string>();
            if (it->is_number()) return it->dump();
            return std::nullopt;
        }
        std::size_t idx = 0;
        if (m_.header) {
            auto it = header_.find(column);
            if (it == header_.end()) throw ConfigError(path_.string() + ": no column named '" + column + "'");
            idx = it->second;
        } else if (!text::parse_size(column, idx)) {
            throw ConfigError(path_.string() + ": column '" + column + "' must be an index for header-less files");
        }
        if (idx >= fields_.size()) return std::nullopt;
        return fields_[idx];
    }

    std::size_t row() const noexcept { return row_; }
    std::size_t line() const noexcept { return line_; }

private:
    bool next_line(std::string& line) {
        if (!std::getline(in_, line)) return false;
        ++line_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return true;
    }

    std::vector<std::string> split_fields(const std::string& line) const {
        std::vector<std::string> out;
        if (m_.format == FileFormat::tsv) {
            for (auto f : text::split(line, '\t')) out.emplace_back(f);
            return out;
        }
        return split_csv_line(line);
    }

    const DatasetManifest& m_;
    std::filesystem::path path_;
    std::ifstream in_;
    std::unordered_map<std::string, std::size_t> header_;
    std::vector<std::string> fields_;
    nlohmann::json json_;
    std::size_t row_ = 0;
    std::size_t line_ = 0;
};

void report_skip(const DatasetManifest& m, const RowSource& rows, const char* why) {
    log().warn("{}: skipping row {} (line {}): {}", m.dataset_id, rows.row() - 1, rows.line(), why);
}

} // namespace

void DatasetManifest::validate() const {
    if (dataset_id.empty()) throw ConfigError("manifest: dataset_id is required");
    for (char c : dataset_id) {
        if (c == '.' || c == '\t' || c == ':' || text::is_space(static_cast<unsigned char>(c))) {
            throw ConfigError("manifest: dataset_id '" + dataset_id + "' may not contain '.', ':' or whitespace");
        }
    }
    if (data_path.empty()) throw ConfigError("manifest " + dataset_id + ": data path is required");
    if (sentence1_column.empty()) throw ConfigError("manifest " + dataset_id + ": sentence1 column is required");
    if (shape != TaskShape::single_sentence && sentence2_column.empty()) {
        throw ConfigError("manifest " + dataset_id + ": sentence2 column is required for pair datasets");
    }
    if (shape == TaskShape::scored_pair) {
        if (rating_column.empty()) throw ConfigError("manifest " + dataset_id + ": rating column is required");
        if (!label_set.empty() && label_set != std::vector<std::string>{kDissimilar, kSimilar}) {
            throw ConfigError("manifest " + dataset_id + ": scored_pair label_set must be 'dissimilar,similar'");
        }
    } else {
        if (label_column.empty()) throw ConfigError("manifest " + dataset_id + ": label column is required");
        if (label_set.empty()) throw ConfigError("manifest " + dataset_id + ": label_set is required");
        std::unordered_set<std::string> seen;
        for (const auto& l : label_set) {
            if (l.empty() || !seen.insert(l).second) {
                throw ConfigError("manifest " + dataset_id + ": label_set has an empty or repeated label");
            }
        }
    }
}

DatasetManifest DatasetManifest::load(const std::filesystem::path& path) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::read_ini(path.string(), tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError("manifest " + path.string() + ": " + e.what());
    }
    const auto base = path.parent_path();
    auto str = [&](const char* key) { return tree.get<std::string>(key, ""); };

    DatasetManifest m;
    m.dataset_id = str("dataset_id");
    m.shape = parse_shape(str("task_shape"));
    m.format = parse_format(tree.get<std::string>("format", "tsv"));
    m.header = parse_bool(tree.get<std::string>("header", "true"));
    if (auto data = str("data"); !data.empty()) m.data_path = base / data;
    m.id_column = str("id");
    m.sentence1_column = str("sentence1");
    m.sentence2_column = str("sentence2");
    m.label_column = str("label");
    m.rating_column = str("rating");
    const auto label_list = str("label_set");
    for (auto l : text::split(label_list, ',')) {
        auto t = text::trim(l);
        if (!t.empty()) m.label_set.emplace_back(t);
    }
    if (auto ref = str("quantile_reference"); !ref.empty()) m.quantile_reference = base / ref;
    if (m.format == FileFormat::jsonl) m.header = false;
    m.validate();
    return m;
}

LabeledExample singleton_to_pair(std::string dataset_id, std::string example_id, std::string sentence,
                                 std::string label) {
    return {std::move(dataset_id), std::move(example_id), std::string(kMaskPlaceholder), std::move(sentence),
            std::move(label)};
}

std::vector<ScoredExample> load_scored_rows(const DatasetManifest& m, const std::filesystem::path& path,
                                            std::size_t* skipped) {
    RowSource rows(m, path);
    std::vector<ScoredExample> out;
    std::size_t bad = 0;
    bool ok = true;
    while (rows.next(ok)) {
        auto s1 = ok ? rows.get(m.sentence1_column) : std::nullopt;
        auto s2 = ok ? rows.get(m.sentence2_column) : std::nullopt;
        auto rating = ok ? rows.get(m.rating_column) : std::nullopt;
        auto id = m.id_column.empty() ? std::optional(std::to_string(rows.row() - 1)) : rows.get(m.id_column);
        double value = 0.0;
        bool parsed = false;
        if (rating) {
            try {
                value = text::parse_double(*rating);
                parsed = std::isfinite(value);
            } catch (const std::invalid_argument&) {
            }
        }
        if (!s1 || !s2 || text::trim(*s1).empty() || text::trim(*s2).empty() || !parsed || !id || id->empty()) {
            report_skip(m, rows, "missing field or unparsable rating");
            ++bad;
            continue;
        }
        out.push_back({m.dataset_id, *id, *s1, *s2, value});
    }
    if (skipped) *skipped = bad;
    return out;
}

LoadResult load_dataset(const DatasetManifest& m) {
    m.validate();
    LoadResult result;

    if (m.shape == TaskShape::scored_pair) {
        auto scored = load_scored_rows(m, m.data_path, &result.skipped_rows);
        if (scored.size() < 3) throw Error(m.dataset_id + ": binning needs at least 3 rated examples");
        RatingThresholds thresholds;
        if (m.quantile_reference) {
            auto ref = load_scored_rows(m, *m.quantile_reference);
            std::vector<double> ratings;
            for (const auto& r : ref) ratings.push_back(r.rating);
            thresholds = rating_thresholds(ratings);
        } else {
            std::vector<double> ratings;
            for (const auto& r : scored) ratings.push_back(r.rating);
            thresholds = rating_thresholds(ratings);
        }
        result.examples = bin_scored_pairs(scored, thresholds);
        result.discarded = scored.size() - result.examples.size();
        return result;
    }

    std::unordered_set<std::string> labels(m.label_set.begin(), m.label_set.end());
    RowSource rows(m, m.data_path);
    bool ok = true;
    while (rows.next(ok)) {
        auto s1 = ok ? rows.get(m.sentence1_column) : std::nullopt;
        std::optional<std::string> s2;
        if (ok && m.shape == TaskShape::sentence_pair) s2 = rows.get(m.sentence2_column);
        auto label = ok ? rows.get(m.label_column) : std::nullopt;
        auto id = m.id_column.empty() ? std::optional(std::to_string(rows.row() - 1)) : rows.get(m.id_column);
        const bool pair = m.shape == TaskShape::sentence_pair;
        if (!s1 || text::trim(*s1).empty() || (pair && (!s2 || text::trim(*s2).empty())) || !label || !id ||
            id->empty()) {
            report_skip(m, rows, "missing field or empty sentence");
            ++result.skipped_rows;
            continue;
        }
        if (!labels.count(*label)) {
            throw ParseError(m.data_path.string(), rows.line(),
                             "row " + std::to_string(rows.row() - 1) + ": label '" + *label + "' is not in the label_set of " +
                                 m.dataset_id);
        }
        if (pair) {
            result.examples.push_back({m.dataset_id, *id, *s1, *s2, *label});
        } else {
            result.examples.push_back(singleton_to_pair(m.dataset_id, *id, *s1, *label));
        }
    }
    if (result.skipped_rows > 0) log().warn("{}: skipped {} malformed row(s)", m.dataset_id, result.skipped_rows);
    return result;
}

RatingThresholds rating_thresholds(std::span<const double> ratings) {
    if (ratings.size() < 3) throw Error("rating binning needs at least 3 examples");
    std::vector<double> sorted(ratings.begin(), ratings.end());
    if (!std::all_of(sorted.begin(), sorted.end(), [](double r) { return std::isfinite(r); })) {
        throw Error("ratings must be finite");
    }
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const std::size_t rank = (n + 2) / 3;
    RatingThresholds t{sorted[rank - 1], sorted[n - rank]};
    if (!(t.lower < t.upper)) throw Error("degenerate rating distribution: bin thresholds coincide");
    return t;
}

std::vector<LabeledExample> bin_scored_pairs(std::span<const ScoredExample> examples,
                                             const RatingThresholds& t) {
    std::vector<LabeledExample> out;
    for (const auto& ex : examples) {
        if (ex.rating <= t.lower) {
            out.push_back({ex.dataset_id, ex.example_id, ex.s1, ex.s2, kDissimilar});
        } else if (ex.rating >= t.upper) {
            out.push_back({ex.dataset_id, ex.example_id, ex.s1, ex.s2, kSimilar});
        }
    }
    return out;
}

std::vector<LabeledExample> bin_scored_pairs(std::span<const ScoredExample> examples) {
    std::vector<double> ratings;
    ratings.reserve(examples.size());
    for (const auto& ex : examples) ratings.push_back(ex.rating);
    return bin_scored_pairs(examples, rating_thresholds(ratings));
}

void write_adapted(const std::filesystem::path& path, std::span<const LabeledExample> examples) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << "label\ts1\ts2\tdataset_id\texample_id\n";
    for (const auto& ex : examples) {
        out << text::sanitize_field(ex.label) << '\t' << text::sanitize_field(ex.s1) << '\t'
            << text::sanitize_field(ex.s2) << '\t' << ex.dataset_id << '\t' << text::sanitize_field(ex.example_id)
            << '\n';
    }
    if (!out) throw Error("write failed for " + path.string());
}

std::vector<LabeledExample> read_adapted(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) throw ParseError(path.string(), 1, "missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "label\ts1\ts2\tdataset_id\texample_id") {
        throw ParseError(path.string(), 1, "unexpected header '" + line + "'");
    }
    std::vector<LabeledExample> out;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto f = text::split(line, '\t');
        if (f.size() != 5) {
            throw ParseError(path.string(), line_no, "expected 5 columns, found " + std::to_string(f.size()));
        }
        if (f[2].empty()) throw ParseError(path.string(), line_no, "empty s2");
        out.push_back({std::string(f[3]), std::string(f[4]), std::string(f[1]), std::string(f[2]), std::string(f[0])});
    }
    return out;
}

} // namespace discsense
