// Copyright 2026 The thinlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "thinlab/prob_vec.hpp"

namespace thinlab {

/// Counter-based generator: the i-th output of stream s under seed k is a
/// SplitMix64 finalization of key(k, s) + i * gamma. Streams are independent
/// of each other and of how work is split across threads.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(finalize(finalize(seed) + (stream + 1) * kStreamGamma)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept { return finalize(key_ + (++counter_) * kGamma); }

    /// Uniform double in [0, 1).
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    std::uint64_t counter() const noexcept { return counter_; }

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
    static constexpr std::uint64_t kStreamGamma = 0xD1B54A32D192ED03ULL;

    static constexpr std::uint64_t finalize(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

enum class DistributionShape {
    general, ///< tilted simplex draw, arbitrary order
    sparse,  ///< general draw with random zeros (support may be disconnected)
    passive, ///< sorted non-increasing, all weights positive
};

/// Random distribution on {0, ..., n_max}: a uniform simplex sample tilted
/// by exp(-tau n) with tau ~ U[0, 0.5].
inline ProbVec random_distribution(CounterRng& rng, std::size_t n_max, DistributionShape shape) {
    const double tau = 0.5 * rng.uniform();
    std::vector<double> w(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) {
        w[n] = -std::log1p(-rng.uniform()) * std::exp(-tau * static_cast<double>(n));
    }
    if (shape == DistributionShape::sparse && n_max > 0) {
        const auto keep = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n_max + 1));
        for (std::size_t n = 0; n <= n_max; ++n) {
            if (n != keep && rng.uniform() < 0.3) {
                w[n] = 0.0;
            }
        }
    }
    double sum = 0.0;
    for (double x : w) {
        sum += x;
    }
    if (!(sum > 0.0)) {
        w.assign(n_max + 1, 0.0);
        w[0] = sum = 1.0;
    }
    for (double& x : w) {
        x /= sum;
    }
    if (shape == DistributionShape::passive) {
        std::sort(w.begin(), w.end(), std::greater<>{});
    }
    return make_probvec(std::move(w), Renormalize::yes);
}

/// Input number `index` of a seeded sweep.
inline ProbVec sweep_distribution(std::uint64_t seed, std::uint64_t index, std::size_t n_max,
                                  DistributionShape shape) {
    CounterRng rng(seed, index);
    return random_distribution(rng, n_max, shape);
}

} // namespace thinlab
