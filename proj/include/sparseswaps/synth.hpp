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

#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "sparseswaps/matrix.hpp"

namespace sparseswaps::synth {

inline constexpr double kNoiseSigma = 0.1;

struct SynthConfig {
    std::size_t d_in = 64;
    std::size_t d_out = 32;
    std::size_t n_cols = 256;
    std::size_t corr_rank = 4;
    std::size_t outlier_count = 4;
    double outlier_scale = 10.0;
    std::uint64_t seed = 0;

    // Throws InvalidConfig.
    void validate() const;
};

// Portable sampler: std::mt19937_64 (bit-exact by the standard) for raw
// bits, 53-bit uniforms, Box-Muller normals and rejection-sampled integers.
// The standard library distributions are avoided because their output is
// implementation-defined.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : engine_(seed) {}

    // Uniform in (0, 1].
    double uniform();
    double normal();
    // Uniform in [0, n). n > 0.
    std::uint64_t below(std::uint64_t n);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

struct SyntheticLayer {
    DenseMatrix weights;      // d_out x d_in, standard normal
    DenseMatrix activations;  // d_in x n_cols
    std::vector<std::size_t> outlier_rows;  // sorted
};

// W ~ N(0,1); X = F Z + 0.1 E with F (d_in x r), Z (r x B), E (d_in x B)
// standard normal; then outlier_count distinct rows of X are scaled by
// outlier_scale. Draw order: W, F, Z, E (all row-major), then the outlier rows.
SyntheticLayer generate_layer(const SynthConfig& config);

}  // namespace sparseswaps::synth
