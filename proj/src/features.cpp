#include "discsense/features.hpp"

#include "discsense/error.hpp"
#include "discsense/extractor.hpp"
#include "discsense/hashing.hpp"
#include "discsense/text.hpp"

#include <algorithm>
#include <cmath>

namespace discsense {

namespace {

constexpr std::size_t kPairWindow = 8;

void add_sentence(const Featurizer& fz, std::string_view sentence, FeatureSpace word, FeatureSpace bigram,
                  FeatureSpace chars, std::vector<std::uint32_t>& out) {
    const auto toks = text::words(sentence);
    for (std::size_t i = 0; i < toks.size(); ++i) {
        out.push_back(fz.bucket(word, toks[i]));
        if (i + 1 < toks.size()) out.push_back(fz.bucket(bigram, toks[i] + ' ' + toks[i + 1]));
    }
    const std::string padded = ' ' + text::to_lower(text::normalize_space(sentence)) + ' ';
    for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
        out.push_back(fz.bucket(chars, std::string_view(padded).substr(i, 3)));
    }
}

std::vector<std::string> unique_in_order(std::vector<std::string> toks) {
    std::vector<std::string> out;
    for (auto& t : toks) {
        if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(std::move(t));
    }
    return out;
}

} // namespace

Featurizer::Featurizer(FeatureConfig cfg) : cfg_(cfg) {
    if (cfg_.dimension == 0) throw ConfigError("feature dimension must be positive");
}

std::uint32_t Featurizer::bucket(FeatureSpace space, std::string_view key) const {
    const std::uint64_t seed = mix64(kFnvOffset ^ static_cast<std::uint64_t>(space));
    return static_cast<std::uint32_t>(mix64(fnv1a64(key, seed)) % cfg_.dimension);
}

std::uint32_t Featurizer::placeholder_feature() const { return bucket(FeatureSpace::placeholder, kMaskPlaceholder); }

FeatureVector Featurizer::operator()(std::string_view s1, std::string_view s2) const {
    std::vector<std::uint32_t> raw;
    raw.reserve(4 * (s1.size() + s2.size()) / 3 + cfg_.max_pair_features + 8);

    const bool masked = text::trim(s1) == kMaskPlaceholder;
    if (masked) {
        raw.push_back(placeholder_feature());
    } else {
        add_sentence(*this, s1, FeatureSpace::s1_word, FeatureSpace::s1_bigram, FeatureSpace::s1_char, raw);
    }
    add_sentence(*this, s2, FeatureSpace::s2_word, FeatureSpace::s2_bigram, FeatureSpace::s2_char, raw);

    if (!masked && cfg_.max_pair_features > 0) {
        auto left = text::words(s1);
        std::reverse(left.begin(), left.end());
        left = unique_in_order(std::move(left));
        auto right = unique_in_order(text::words(s2));
        left.resize(std::min(left.size(), kPairWindow));
        right.resize(std::min(right.size(), kPairWindow));
        std::uint32_t emitted = 0;
        for (const auto& a : left) {
            for (const auto& b : right) {
                if (emitted == cfg_.max_pair_features) break;
                raw.push_back(bucket(FeatureSpace::word_pair, a + '|' + b));
                ++emitted;
            }
        }
    }

    std::sort(raw.begin(), raw.end());
    FeatureVector fv;
    double norm2 = 0.0;
    for (std::size_t i = 0; i < raw.size();) {
        std::size_t j = i;
        while (j < raw.size() && raw[j] == raw[i]) ++j;
        const double count = static_cast<double>(j - i);
        fv.indices.push_back(raw[i]);
        fv.values.push_back(count);
        norm2 += count * count;
        i = j;
    }
    if (norm2 > 0.0) {
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& v : fv.values) v *= inv;
    }
    return fv;
}

} // namespace discsense
