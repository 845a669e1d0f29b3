#include "discsense/model.hpp"

#include "discsense/error.hpp"
#include "discsense/hashing.hpp"
#include "discsense/log.hpp"
#include "discsense/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <unordered_map>

namespace discsense {

ModelParams::ModelParams(std::uint32_t dim, std::vector<std::string> names)
    : dimension(dim), class_names(std::move(names)) {
    if (dimension == 0) throw ConfigError("model dimension must be positive");
    if (class_names.empty()) throw ConfigError("model needs at least one class");
    weights.assign(static_cast<std::size_t>(dimension) * class_names.size(), 0.0);
    bias.assign(class_names.size(), 0.0);
}

std::optional<std::size_t> ModelParams::class_index(std::string_view name) const {
    auto it = std::find(class_names.begin(), class_names.end(), name);
    if (it == class_names.end()) return std::nullopt;
    return static_cast<std::size_t>(it - class_names.begin());
}

void ModelParams::validate() const {
    if (class_names.empty()) throw Error("model has no classes");
    if (weights.size() != static_cast<std::size_t>(dimension) * class_names.size() || bias.size() != class_names.size()) {
        throw Error("model parameter shapes do not match D x K");
    }
    auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(weights.begin(), weights.end(), finite) || !std::all_of(bias.begin(), bias.end(), finite)) {
        throw Error("model contains non-finite parameters");
    }
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw ConfigError("learning_rate must be positive");
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (!(l2 >= 0.0) || !std::isfinite(l2)) throw ConfigError("l2 must be non-negative");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (hash_dimension < 1) throw ConfigError("hash_dimension must be >= 1");
}

namespace {

// Scores with the weight matrix scaled by `scale` (lazy L2 decay).
void scores_into(const ModelParams& p, double scale, const FeatureVector& x, std::vector<double>& out) {
    const std::size_t k = p.num_classes();
    out.assign(p.bias.begin(), p.bias.end());
    std::vector<double> acc(k, 0.0);
    for (std::size_t n = 0; n < x.indices.size(); ++n) {
        const double v = x.values[n];
        const double* row = &p.weights[static_cast<std::size_t>(x.indices[n]) * k];
        for (std::size_t c = 0; c < k; ++c) acc[c] += v * row[c];
    }
    for (std::size_t c = 0; c < k; ++c) out[c] += scale * acc[c];
}

struct SparseGradient {
    std::unordered_map<std::uint32_t, std::size_t> slot;
    std::vector<std::uint32_t> rows;
    std::vector<double> values; // rows.size() * K
    std::vector<double> bias;

    double* row(std::uint32_t f, std::size_t k) {
        auto [it, inserted] = slot.emplace(f, rows.size());
        if (inserted) {
            rows.push_back(f);
            values.resize(values.size() + k, 0.0);
        }
        return &values[it->second * k];
    }
};

// Mean cross-entropy over the batch and its data gradient (no L2 term).
double data_gradient(const ModelParams& p, double scale, std::span<const TrainingExample> batch, SparseGradient& g) {
    const std::size_t k = p.num_classes();
    const double inv_n = 1.0 / static_cast<double>(batch.size());
    g.bias.assign(k, 0.0);
    std::vector<double> scores;
    double loss = 0.0;
    for (std::size_t n = 0; n < batch.size(); ++n) {
        const auto& ex = batch[n];
        if (ex.label >= k) throw Error("training example " + std::to_string(n) + " has an invalid class index");
        scores_into(p, scale, ex.features, scores);
        const double mx = *std::max_element(scores.begin(), scores.end());
        double z = 0.0;
        for (double s : scores) z += std::exp(s - mx);
        const double log_z = mx + std::log(z);
        const double ce = log_z - scores[ex.label];
        if (!std::isfinite(ce)) {
            throw Error("non-finite loss at batch example " + std::to_string(n) + " (class " +
                        p.class_names[ex.label] + ")");
        }
        loss += ce;
        for (std::size_t c = 0; c < k; ++c) scores[c] = std::exp(scores[c] - log_z) - (c == ex.label ? 1.0 : 0.0);
        for (std::size_t c = 0; c < k; ++c) g.bias[c] += inv_n * scores[c];
        for (std::size_t m = 0; m < ex.features.indices.size(); ++m) {
            double* r = g.row(ex.features.indices[m], k);
            const double v = inv_n * ex.features.values[m];
            for (std::size_t c = 0; c < k; ++c) r[c] += v * scores[c];
        }
    }
    return loss * inv_n;
}

double squared_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

} // namespace

LossAndGradient loss_and_grad(const ModelParams& params, std::span<const TrainingExample> batch, double l2) {
    if (batch.empty()) throw Error("loss_and_grad: empty batch");
    SparseGradient g;
    const double data_loss = data_gradient(params, 1.0, batch, g);
    const std::size_t k = params.num_classes();

    LossAndGradient out;
    out.loss = data_loss + 0.5 * l2 * squared_norm(params.weights);
    out.weights.resize(params.weights.size());
    for (std::size_t i = 0; i < params.weights.size(); ++i) out.weights[i] = l2 * params.weights[i];
    for (std::size_t r = 0; r < g.rows.size(); ++r) {
        double* dst = &out.weights[static_cast<std::size_t>(g.rows[r]) * k];
        for (std::size_t c = 0; c < k; ++c) dst[c] += g.values[r * k + c];
    }
    out.bias = std::move(g.bias);
    return out;
}

std::vector<double> class_scores(const ModelParams& params, const FeatureVector& x) {
    std::vector<double> s;
    scores_into(params, 1.0, x, s);
    return s;
}

std::vector<double> softmax(std::span<const double> scores) {
    std::vector<double> p(scores.begin(), scores.end());
    if (p.empty()) return p;
    const double mx = *std::max_element(p.begin(), p.end());
    double z = 0.0;
    for (auto& v : p) {
        v = std::exp(v - mx);
        z += v;
    }
    for (auto& v : p) v /= z;
    return p;
}

std::size_t argmax(std::span<const double> values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) best = i;
    }
    return best;
}

Prediction predict(const ModelParams& params, const FeatureVector& x) {
    const auto s = class_scores(params, x);
    return {softmax(s), argmax(s)};
}

Prediction predict(const MarkerModel& model, std::string_view s1, std::string_view s2) {
    return predict(model.params, Featurizer(model.features)(s1, s2));
}

std::vector<TrainingExample> featurize_examples(std::span<const MarkerPairExample> examples,
                                                const ModelParams& params, const Featurizer& featurizer,
                                                unsigned jobs) {
    std::unordered_map<std::string_view, std::size_t> index;
    for (std::size_t c = 0; c < params.class_names.size(); ++c) index.emplace(params.class_names[c], c);
    std::vector<TrainingExample> out(examples.size());
    parallel_for(examples.size(), jobs, [&](std::size_t i) {
        auto it = index.find(examples[i].label);
        if (it == index.end()) throw Error("label '" + examples[i].label + "' is not a model class");
        out[i] = {featurizer(examples[i].s1, examples[i].s2), it->second};
    });
    return out;
}

double accuracy(std::span<const std::size_t> predicted, std::span<const std::size_t> gold) {
    if (predicted.size() != gold.size() || gold.empty()) throw Error("accuracy: size mismatch or empty input");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) hits += predicted[i] == gold[i];
    return static_cast<double>(hits) / static_cast<double>(gold.size());
}

namespace {

struct Evaluation {
    double objective = 0.0;
    double accuracy = 0.0;
};

Evaluation evaluate(const ModelParams& params, std::span<const MarkerPairExample> examples,
                    const Featurizer& featurizer, double l2, unsigned jobs) {
    const auto data = featurize_examples(examples, params, featurizer, jobs);
    std::vector<double> ce(data.size());
    std::vector<std::size_t> predicted(data.size()), gold(data.size());
    parallel_for(data.size(), jobs, [&](std::size_t i) {
        const auto s = class_scores(params, data[i].features);
        const double mx = *std::max_element(s.begin(), s.end());
        double z = 0.0;
        for (double v : s) z += std::exp(v - mx);
        ce[i] = mx + std::log(z) - s[data[i].label];
        predicted[i] = argmax(s);
        gold[i] = data[i].label;
    });
    Evaluation e;
    for (double v : ce) e.objective += v;
    e.objective = e.objective / static_cast<double>(data.size()) + 0.5 * l2 * squared_norm(params.weights);
    e.accuracy = accuracy(predicted, gold);
    return e;
}

} // namespace

MarkerModel train(std::span<const MarkerPairExample> train_set, std::span<const MarkerPairExample> valid_set,
                  const std::vector<std::string>& class_names, const TrainConfig& cfg, const EpochCallback& on_epoch,
                  unsigned jobs) {
    cfg.validate();
    if (class_names.empty()) throw ConfigError("empty class vocabulary");
    if (train_set.empty()) throw Error("training set is empty");

    MarkerModel model{ModelParams(cfg.hash_dimension, class_names), FeatureConfig{cfg.hash_dimension, cfg.max_pair_features}};
    auto& p = model.params;
    const Featurizer featurizer(model.features);
    const std::size_t k = p.num_classes();

    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);
    Rng shuffle_rng(derive_seed(cfg.rng_seed, "shuffle"));
    const double decay = 1.0 - cfg.learning_rate * cfg.l2;
    if (!(decay > 0.0)) throw ConfigError("learning_rate * l2 must be below 1");

    std::vector<MarkerPairExample> batch_examples;
    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        shuffle_rng.shuffle(std::span(order));
        // W = scale * stored weights; folded back at the end of the epoch.
        double scale = 1.0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t end = std::min(order.size(), start + cfg.batch_size);
            batch_examples.clear();
            for (std::size_t i = start; i < end; ++i) batch_examples.push_back(train_set[order[i]]);
            const auto batch = featurize_examples(batch_examples, p, featurizer, jobs);

            SparseGradient g;
            const double loss = data_gradient(p, scale, batch, g);
            if (!std::isfinite(loss)) {
                throw Error("training diverged: non-finite loss in epoch " + std::to_string(epoch) + " at example offset " +
                            std::to_string(start));
            }
            scale *= decay;
            const double step = cfg.learning_rate / scale;
            for (std::size_t r = 0; r < g.rows.size(); ++r) {
                double* w = &p.weights[static_cast<std::size_t>(g.rows[r]) * k];
                for (std::size_t c = 0; c < k; ++c) w[c] -= step * g.values[r * k + c];
            }
            for (std::size_t c = 0; c < k; ++c) p.bias[c] -= cfg.learning_rate * g.bias[c];
            if (scale < 1e-150) {
                for (auto& w : p.weights) w *= scale;
                scale = 1.0;
            }
        }
        if (scale != 1.0) {
            for (auto& w : p.weights) w *= scale;
        }

        EpochStats stats;
        stats.epoch = epoch;
        const auto tr = evaluate(p, train_set, featurizer, cfg.l2, jobs);
        if (!std::isfinite(tr.objective)) {
            throw Error("training diverged: objective is " + std::to_string(tr.objective) + " after epoch " +
                        std::to_string(epoch));
        }
        stats.train_objective = tr.objective;
        stats.train_accuracy = tr.accuracy;
        if (!valid_set.empty()) stats.valid_accuracy = evaluate(p, valid_set, featurizer, cfg.l2, jobs).accuracy;
        log().info("epoch {}: objective {:.6f}, train accuracy {:.4f}{}", epoch, stats.train_objective,
                   stats.train_accuracy,
                   stats.valid_accuracy ? fmt::format(", validation accuracy {:.4f}", *stats.valid_accuracy) : "");
        if (on_epoch) on_epoch(stats);
    }
    return model;
}

double evaluate_accuracy(const MarkerModel& model, std::span<const MarkerPairExample> examples, unsigned jobs) {
    if (examples.empty()) throw Error("evaluate_accuracy: empty dataset");
    return evaluate(model.params, examples, Featurizer(model.features), 0.0, jobs).accuracy;
}

MajorityBaseline majority_baseline(std::span<const std::string> labels, const std::vector<std::string>& class_names) {
    if (labels.empty()) throw Error("majority_baseline: empty dataset");
    std::unordered_map<std::string_view, std::size_t> counts;
    for (const auto& l : labels) ++counts[l];
    MajorityBaseline best;
    std::size_t best_count = 0;
    for (std::size_t c = 0; c < class_names.size(); ++c) {
        auto it = counts.find(class_names[c]);
        const std::size_t n = it == counts.end() ? 0 : it->second;
        if (n > best_count) {
            best_count = n;
            best.label = class_names[c];
            best.class_index = c;
        }
    }
    if (best_count == 0) throw Error("majority_baseline: no label belongs to the class vocabulary");
    best.frequency = static_cast<double>(best_count) / static_cast<double>(labels.size());
    return best;
}

MajorityBaseline majority_baseline(std::span<const MarkerPairExample> examples,
                                   const std::vector<std::string>& class_names) {
    std::vector<std::string> labels;
    labels.reserve(examples.size());
    for (const auto& ex : examples) labels.push_back(ex.label);
    return majority_baseline(labels, class_names);
}

namespace {

constexpr char kModelMagic[8] = {'D', 'S', 'C', 'S', 'M', 'D', 'L', '\0'};
constexpr std::uint32_t kModelVersion = 1;

template <typename T>
void put(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in, const std::string& source) {
    T v{};
    if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) throw Error(source + ": truncated model file");
    return v;
}

} // namespace

void save_model(const std::filesystem::path& path, const MarkerModel& model) {
    const auto& p = model.params;
    p.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write model " + path.string());
    out.write(kModelMagic, sizeof(kModelMagic));
    put(out, kModelVersion);
    put(out, static_cast<std::uint64_t>(p.dimension));
    put(out, static_cast<std::uint64_t>(p.num_classes()));
    put(out, static_cast<std::uint64_t>(model.features.max_pair_features));
    for (const auto& name : p.class_names) {
        put(out, static_cast<std::uint64_t>(name.size()));
        out.write(name.data(), static_cast<std::streamsize>(name.size()));
    }
    for (double b : p.bias) put(out, b);

    const std::size_t k = p.num_classes();
    std::vector<std::uint32_t> nonzero;
    for (std::uint32_t f = 0; f < p.dimension; ++f) {
        const double* row = &p.weights[static_cast<std::size_t>(f) * k];
        if (std::any_of(row, row + k, [](double v) { return v != 0.0; })) nonzero.push_back(f);
    }
    put(out, static_cast<std::uint64_t>(nonzero.size()));
    for (auto f : nonzero) {
        put(out, f);
        out.write(reinterpret_cast<const char*>(&p.weights[static_cast<std::size_t>(f) * k]),
                  static_cast<std::streamsize>(k * sizeof(double)));
    }
    if (!out) throw Error("write failed for " + path.string());
}

MarkerModel load_model(const std::filesystem::path& path) {
    const std::string source = path.string();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open model " + source);
    char magic[sizeof(kModelMagic)];
    if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kModelMagic, sizeof(magic)) != 0) {
        throw Error(source + ": not a model file");
    }
    if (auto v = get<std::uint32_t>(in, source); v != kModelVersion) {
        throw Error(source + ": unsupported model version " + std::to_string(v));
    }
    const auto dim = get<std::uint64_t>(in, source);
    const auto k = get<std::uint64_t>(in, source);
    const auto pairs = get<std::uint64_t>(in, source);
    if (dim == 0 || dim > UINT32_MAX || k == 0 || k > 1'000'000) throw Error(source + ": implausible model dimensions");

    std::vector<std::string> names;
    for (std::uint64_t c = 0; c < k; ++c) {
        const auto len = get<std::uint64_t>(in, source);
        if (len > 4096) throw Error(source + ": implausible class name length");
        std::string name(len, '\0');
        if (!in.read(name.data(), static_cast<std::streamsize>(len))) throw Error(source + ": truncated model file");
        names.push_back(std::move(name));
    }
    MarkerModel model{ModelParams(static_cast<std::uint32_t>(dim), std::move(names)),
                      FeatureConfig{static_cast<std::uint32_t>(dim), static_cast<std::uint32_t>(pairs)}};
    auto& p = model.params;
    for (auto& b : p.bias) b = get<double>(in, source);
    const auto rows = get<std::uint64_t>(in, source);
    if (rows > dim) throw Error(source + ": too many weight rows");
    for (std::uint64_t r = 0; r < rows; ++r) {
        const auto f = get<std::uint32_t>(in, source);
        if (f >= dim) throw Error(source + ": weight row out of range");
        if (!in.read(reinterpret_cast<char*>(&p.weights[static_cast<std::size_t>(f) * k]),
                     static_cast<std::streamsize>(k * sizeof(double)))) {
            throw Error(source + ": truncated model file");
        }
    }
    p.validate();
    return model;
}

} // namespace discsense
