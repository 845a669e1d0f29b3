#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace discsense {

// Sparse vector over [0, dimension): indices strictly increasing.
struct FeatureVector {
    std::vector<std::uint32_t> indices;
    std::vector<double> values;
    bool operator==(const FeatureVector&) const = default;
};

struct FeatureConfig {
    std::uint32_t dimension = 1u << 20;
    // Cap on s1 x s2 word-pair features per example.
    std::uint32_t max_pair_features = 64;
};

enum class FeatureSpace : std::uint8_t {
    s1_word = 1,
    s1_bigram,
    s1_char,
    s2_word,
    s2_bigram,
    s2_char,
    word_pair,
    placeholder,
};

// Hashed word unigrams, word bigrams and character trigrams of both
// sentences (separate spaces per sentence), plus word-pair products of the
// last words of s1 with the first words of s2. A masked s1 ("[S_1]")
// contributes only the placeholder feature. Counts are scaled to unit L2
// norm.
class Featurizer {
public:
    explicit Featurizer(FeatureConfig cfg = {});

    FeatureVector operator()(std::string_view s1, std::string_view s2) const;

    std::uint32_t bucket(FeatureSpace space, std::string_view key) const;
    std::uint32_t placeholder_feature() const;
    const FeatureConfig& config() const noexcept { return cfg_; }

private:
    FeatureConfig cfg_;
};

} // namespace discsense
