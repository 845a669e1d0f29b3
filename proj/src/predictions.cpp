#include "discsense/predictions.hpp"

#include "discsense/error.hpp"
#include "discsense/parallel.hpp"
#include "discsense/text.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <unordered_set>

namespace discsense {

namespace {

double round6(double p) { return text::parse_double(fmt::format("{:.6f}", p)); }

} // namespace

std::vector<PredictionRecord> predict_records(const MarkerModel& model, std::span<const LabeledExample> examples,
                                              const std::string& model_id, unsigned jobs) {
    const Featurizer featurizer(model.features);
    std::vector<PredictionRecord> out(examples.size());
    parallel_for(examples.size(), jobs, [&](std::size_t i) {
        const auto& ex = examples[i];
        const auto pred = predict(model.params, featurizer(ex.s1, ex.s2));
        out[i] = {ex.dataset_id, ex.example_id, model.params.class_names[pred.argmax],
                  round6(pred.distribution[pred.argmax]), model_id};
    });
    return out;
}

void write_predictions(std::ostream& out, std::span<const PredictionRecord> records) {
    out << kPredictionHeader << '\n';
    for (const auto& r : records) {
        out << r.dataset_id << '\t' << text::sanitize_field(r.example_id) << '\t' << r.predicted_marker << '\t'
            << fmt::format("{:.6f}", r.probability) << '\t' << text::sanitize_field(r.model_id) << '\n';
    }
}

void write_predictions(const std::filesystem::path& path, std::span<const PredictionRecord> records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write predictions " + path.string());
    write_predictions(out, records);
    if (!out) throw Error("write failed for " + path.string());
}

std::size_t export_predictions(const MarkerModel& model, std::span<const LabeledExample> examples,
                               const std::filesystem::path& path, const std::string& model_id, unsigned jobs) {
    const auto records = predict_records(model, examples, model_id, jobs);
    write_predictions(path, records);
    return records.size();
}

std::vector<PredictionRecord> import_predictions(std::istream& in, const std::vector<std::string>& vocabulary,
                                                 const std::string& source) {
    const std::unordered_set<std::string> known(vocabulary.begin(), vocabulary.end());
    std::vector<PredictionRecord> out;
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) throw ParseError(source, 1, "missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kPredictionHeader) throw ParseError(source, 1, "unexpected header '" + line + "'");

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto f = text::split(line, '\t');
        if (f.size() != 5) throw ParseError(source, line_no, "expected 5 columns, found " + std::to_string(f.size()));
        PredictionRecord r{std::string(f[0]), std::string(f[1]), std::string(f[2]), 0.0, std::string(f[4])};
        if (r.dataset_id.empty() || r.example_id.empty()) throw ParseError(source, line_no, "empty dataset or example id");
        if (!known.count(r.predicted_marker)) {
            throw ParseError(source, line_no, "unknown marker '" + r.predicted_marker + "'");
        }
        try {
            r.probability = text::parse_double(f[3]);
        } catch (const std::invalid_argument&) {
            throw ParseError(source, line_no, "probability is not a number: '" + std::string(f[3]) + "'");
        }
        if (!(r.probability > 0.0 && r.probability <= 1.0)) {
            throw ParseError(source, line_no, "probability outside (0, 1]: " + std::string(f[3]));
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<PredictionRecord> import_predictions(const std::filesystem::path& path,
                                                 const std::vector<std::string>& vocabulary) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open predictions " + path.string());
    return import_predictions(in, vocabulary, path.string());
}

} // namespace discsense
