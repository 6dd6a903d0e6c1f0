#pragma once

/// @file mutual_information.hpp
/// @brief Layer-wise representation similarity from feature-map samples.
///
/// Plug-in histogram estimate: every layer is reduced to one scalar per
/// sample (mean activation over features), both sides are quantized into
/// equal-frequency bins, and the discrete mutual information of the joint
/// histogram is summed over layers. Units are nats.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "phdnas/errors.hpp"

namespace phdnas {

/// Row-major n_samples x n_features activation matrix for one layer.
class LayerSamples {
public:
    LayerSamples(std::size_t samples, std::size_t features, std::vector<double> values)
        : samples_(samples), features_(features), values_(std::move(values)) {
        if (samples_ == 0 || features_ == 0) throw ShapeError("layer samples need at least one row and one column");
        if (values_.size() != samples_ * features_)
            throw ShapeError("layer holds " + std::to_string(values_.size()) + " values, expected " +
                             std::to_string(samples_ * features_));
    }

    /// One feature per sample.
    explicit LayerSamples(std::vector<double> column)
        : samples_(column.size()), features_(1), values_(std::move(column)) {
        if (samples_ == 0) throw ShapeError("layer samples need at least one row and one column");
    }

    [[nodiscard]] std::size_t samples() const noexcept { return samples_; }
    [[nodiscard]] std::size_t features() const noexcept { return features_; }
    [[nodiscard]] std::span<const double> sample(std::size_t i) const noexcept {
        return {values_.data() + i * features_, features_};
    }

    [[nodiscard]] std::vector<double> mean_activation() const {
        std::vector<double> out(samples_);
        for (std::size_t i = 0; i < samples_; ++i) {
            const auto row = sample(i);
            out[i] = std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(features_);
        }
        return out;
    }

private:
    std::size_t samples_;
    std::size_t features_;
    std::vector<double> values_;
};

/// Feature maps of one network: L >= 1 layers sharing the sample count.
class FeatureSample {
public:
    explicit FeatureSample(std::vector<LayerSamples> layers) : layers_(std::move(layers)) {
        if (layers_.empty()) throw ShapeError("a feature sample needs at least one layer");
        for (const auto& layer : layers_)
            if (layer.samples() != layers_.front().samples())
                throw ShapeError("all layers of a feature sample must share the sample count");
    }

    [[nodiscard]] std::size_t layers() const noexcept { return layers_.size(); }
    [[nodiscard]] std::size_t samples() const noexcept { return layers_.front().samples(); }
    [[nodiscard]] const LayerSamples& layer(std::size_t i) const { return layers_.at(i); }

private:
    std::vector<LayerSamples> layers_;
};

/// Equal-frequency bin of each value. Ties share a bin: a value's bin is
/// floor(#values strictly below it * bins / n).
[[nodiscard]] inline std::vector<std::size_t> equal_frequency_bins(std::span<const double> values, std::size_t bins) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<std::size_t> out(n);
    std::size_t below = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0 && values[order[k]] != values[order[k - 1]]) below = k;
        out[order[k]] = std::min(bins - 1, below * bins / n);
    }
    return out;
}

/// Plug-in mutual information (nats) of two discrete label sequences.
[[nodiscard]] inline double discrete_mutual_information(std::span<const std::size_t> x, std::span<const std::size_t> y,
                                                        std::size_t bins) {
    const std::size_t n = x.size();
    std::vector<double> joint(bins * bins, 0.0);
    std::vector<double> px(bins, 0.0);
    std::vector<double> py(bins, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        joint[x[i] * bins + y[i]] += 1.0;
        px[x[i]] += 1.0;
        py[y[i]] += 1.0;
    }
    const double total = static_cast<double>(n);
    double mi = 0.0;
    for (std::size_t a = 0; a < bins; ++a) {
        for (std::size_t b = 0; b < bins; ++b) {
            const double nab = joint[a * bins + b];
            if (nab == 0.0) continue;
            mi += (nab / total) * std::log(nab * total / (px[a] * py[b]));
        }
    }
    return std::max(0.0, mi);
}

/// Sum over layers of the estimated mutual information between the reference
/// and candidate representations.
[[nodiscard]] inline double estimate_layerwise_mi(const FeatureSample& reference, const FeatureSample& candidate,
                                                  std::size_t bins) {
    if (bins < 2) throw RangeError("mutual information needs at least 2 bins");
    if (reference.layers() != candidate.layers())
        throw ShapeError("layer count mismatch: " + std::to_string(reference.layers()) + " vs " +
                         std::to_string(candidate.layers()));
    if (reference.samples() != candidate.samples())
        throw ShapeError("sample count mismatch: " + std::to_string(reference.samples()) + " vs " +
                         std::to_string(candidate.samples()));

    double total = 0.0;
    for (std::size_t l = 0; l < reference.layers(); ++l) {
        const auto ref_bins = equal_frequency_bins(reference.layer(l).mean_activation(), bins);
        const auto cand_bins = equal_frequency_bins(candidate.layer(l).mean_activation(), bins);
        total += discrete_mutual_information(ref_bins, cand_bins, bins);
    }
    return total;
}

} // namespace phdnas
