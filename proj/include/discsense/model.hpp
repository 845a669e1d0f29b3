#pragma once

#include "discsense/extractor.hpp"
#include "discsense/features.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace discsense {

// Multinomial logistic regression weights. Storage is feature-major: the K
// class weights of feature f are contiguous at [f * K, (f + 1) * K).
struct ModelParams {
    std::uint32_t dimension = 0;
    std::vector<std::string> class_names;
    std::vector<double> weights;
    std::vector<double> bias;

    ModelParams() = default;
    ModelParams(std::uint32_t dimension, std::vector<std::string> class_names);

    std::size_t num_classes() const noexcept { return class_names.size(); }
    double& weight(std::size_t cls, std::uint32_t feature) { return weights[feature * num_classes() + cls]; }
    double weight(std::size_t cls, std::uint32_t feature) const { return weights[feature * num_classes() + cls]; }
    std::optional<std::size_t> class_index(std::string_view name) const;

    // Throws unless dimensions agree and every entry is finite.
    void validate() const;
};

struct MarkerModel {
    ModelParams params;
    FeatureConfig features;
};

struct TrainingExample {
    FeatureVector features;
    std::size_t label = 0;
};

struct TrainConfig {
    double learning_rate = 0.1;
    std::size_t epochs = 2;
    double l2 = 1e-6;
    std::size_t batch_size = 64;
    std::uint64_t rng_seed = 0;
    std::uint32_t hash_dimension = 1u << 20;
    std::uint32_t max_pair_features = 64;

    void validate() const;
};

struct LossAndGradient {
    double loss = 0.0;
    std::vector<double> weights; // same layout as ModelParams::weights
    std::vector<double> bias;
};

// Mean cross-entropy over the batch plus l2 * ||W||^2 / 2, with its exact
// gradient. The bias is not regularized.
LossAndGradient loss_and_grad(const ModelParams& params, std::span<const TrainingExample> batch, double l2);

std::vector<double> class_scores(const ModelParams& params, const FeatureVector& x);

// Max-subtracted softmax.
std::vector<double> softmax(std::span<const double> scores);

// First index of the maximum.
std::size_t argmax(std::span<const double> values);

struct Prediction {
    std::vector<double> distribution;
    std::size_t argmax = 0;
};

Prediction predict(const ModelParams& params, const FeatureVector& x);
Prediction predict(const MarkerModel& model, std::string_view s1, std::string_view s2);

struct EpochStats {
    std::size_t epoch = 0;
    double train_objective = 0.0;
    double train_accuracy = 0.0;
    std::optional<double> valid_accuracy;
};

using EpochCallback = std::function<void(const EpochStats&)>;

// Mini-batch gradient descent with a fixed learning rate and a fresh shuffle
// each epoch. Deterministic for a given seed; `jobs` only parallelizes
// featurization.
MarkerModel train(std::span<const MarkerPairExample> train_set, std::span<const MarkerPairExample> valid_set,
                  const std::vector<std::string>& class_names, const TrainConfig& cfg,
                  const EpochCallback& on_epoch = {}, unsigned jobs = 1);

// Also used for training data on a fixed feature map.
std::vector<TrainingExample> featurize_examples(std::span<const MarkerPairExample> examples,
                                                const ModelParams& params, const Featurizer& featurizer,
                                                unsigned jobs = 1);

double accuracy(std::span<const std::size_t> predicted, std::span<const std::size_t> gold);

// Fraction of examples whose argmax equals the gold label. Gold labels
// outside the model's classes are an error.
double evaluate_accuracy(const MarkerModel& model, std::span<const MarkerPairExample> examples, unsigned jobs = 1);

struct MajorityBaseline {
    std::string label;
    std::size_t class_index = 0;
    double frequency = 0.0;
};

// Most frequent label; ties go to the lowest index in class_names.
MajorityBaseline majority_baseline(std::span<const std::string> labels, const std::vector<std::string>& class_names);
MajorityBaseline majority_baseline(std::span<const MarkerPairExample> examples,
                                   const std::vector<std::string>& class_names);

// Binary container: magic, version, D, K, feature config, class names,
// biases and the non-zero weight rows, all at full double precision.
void save_model(const std::filesystem::path& path, const MarkerModel& model);
MarkerModel load_model(const std::filesystem::path& path);

} // namespace discsense
