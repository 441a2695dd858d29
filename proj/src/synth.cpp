// Copyright 2026 The sparseswaps Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include "sparseswaps/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "sparseswaps/error.hpp"

namespace sparseswaps::synth {

void SynthConfig::validate() const {
    auto fail = [](const std::string& why) { throw Error(ErrorCode::InvalidConfig, why); };
    if (d_in == 0 || d_out == 0 || n_cols == 0) fail("d_in, d_out and n_cols must be >= 1");
    if (corr_rank == 0 || corr_rank > d_in) fail("corr_rank must lie in [1, d_in]");
    if (outlier_count == 0 || outlier_count > d_in) fail("outlier_count must lie in [1, d_in]");
    if (!(outlier_scale >= 1.0) || !std::isfinite(outlier_scale)) fail("outlier_scale must be >= 1");
}

double Sampler::uniform() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

double Sampler::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

std::uint64_t Sampler::below(std::uint64_t n) {
    const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % n;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x >= limit);
    return x % n;
}

SyntheticLayer generate_layer(const SynthConfig& config) {
    config.validate();
    Sampler rng(config.seed);
    auto fill_normal = [&](DenseMatrix& m) {
        for (double& v : m.data()) v = rng.normal();
    };

    SyntheticLayer layer;
    layer.weights = DenseMatrix(config.d_out, config.d_in);
    fill_normal(layer.weights);

    DenseMatrix factors(config.d_in, config.corr_rank);
    DenseMatrix latent(config.corr_rank, config.n_cols);
    DenseMatrix noise(config.d_in, config.n_cols);
    fill_normal(factors);
    fill_normal(latent);
    fill_normal(noise);

    DenseMatrix x(config.d_in, config.n_cols);
    for (std::size_t i = 0; i < config.d_in; ++i) {
        for (std::size_t k = 0; k < config.n_cols; ++k) {
            double s = 0.0;
            for (std::size_t r = 0; r < config.corr_rank; ++r) s += factors(i, r) * latent(r, k);
            x(i, k) = s + kNoiseSigma * noise(i, k);
        }
    }

    // Partial Fisher-Yates picks the outlier features.
    std::vector<std::size_t> features(config.d_in);
    std::iota(features.begin(), features.end(), 0);
    for (std::size_t k = 0; k < config.outlier_count; ++k) {
        const std::size_t pick = k + rng.below(config.d_in - k);
        std::swap(features[k], features[pick]);
    }
    layer.outlier_rows.assign(features.begin(), features.begin() + config.outlier_count);
    std::sort(layer.outlier_rows.begin(), layer.outlier_rows.end());
    for (std::size_t i : layer.outlier_rows) {
        for (double& v : x.row(i)) v *= config.outlier_scale;
    }
    layer.activations = std::move(x);
    return layer;
}

}  // namespace sparseswaps::synth
