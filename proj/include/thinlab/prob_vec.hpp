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
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "thinlab/errors.hpp"

namespace thinlab {

/// Tolerance on the total mass of every ProbVec.
inline constexpr double kNormTolerance = 1e-12;

/// Tolerance on sorted partial sums when comparing for majorization.
inline constexpr double kMajorizationTolerance = 1e-12;

enum class Renormalize : bool { no = false, yes = true };

/// Probability distribution on {0, ..., N}: the photon-number diagonal of a
/// Fock-diagonal state. Immutable once built; construct with make_probvec.
class ProbVec {
public:
    /// Point mass at 0.
    ProbVec() : weights_{1.0} {}

    static ProbVec delta(std::size_t n, std::size_t max_index) {
        ProbVec p;
        p.weights_.assign(std::max(n, max_index) + 1, 0.0);
        p.weights_[n] = 1.0;
        return p;
    }

    static ProbVec delta(std::size_t n) { return delta(n, n); }

    std::span<const double> weights() const noexcept { return weights_; }
    const std::vector<double>& vector() const noexcept { return weights_; }
    double operator[](std::size_t n) const noexcept { return weights_[n]; }

    /// Weight at n, zero past the support.
    double at_or_zero(std::size_t n) const noexcept {
        return n < weights_.size() ? weights_[n] : 0.0;
    }

    std::size_t size() const noexcept { return weights_.size(); }
    std::size_t max_index() const noexcept { return weights_.size() - 1; }

    auto begin() const noexcept { return weights_.begin(); }
    auto end() const noexcept { return weights_.end(); }

    /// Deviation (sum - 1) removed by renormalization at construction; 0 if none.
    double correction() const noexcept { return correction_; }

    double mean() const noexcept {
        double m = 0.0;
        for (std::size_t n = 1; n < weights_.size(); ++n) {
            m += static_cast<double>(n) * weights_[n];
        }
        return m;
    }

    friend bool operator==(const ProbVec& a, const ProbVec& b) noexcept {
        return a.weights_ == b.weights_;
    }

private:
    friend ProbVec make_probvec(std::vector<double> weights, Renormalize renormalize);

    std::vector<double> weights_;
    double correction_ = 0.0;
};

/// Validates weights as a distribution. Without Renormalize::yes the sum must
/// already be 1 within kNormTolerance; with it, the weights are rescaled when
/// the drift exceeds that tolerance and the drift is kept in correction().
inline ProbVec make_probvec(std::vector<double> weights, Renormalize renormalize = Renormalize::no) {
    if (weights.empty()) {
        throw DomainError("probability vector must be nonempty");
    }
    double sum = 0.0;
    for (std::size_t n = 0; n < weights.size(); ++n) {
        const double w = weights[n];
        if (!std::isfinite(w)) {
            throw DomainError("weight " + std::to_string(n) + " is not finite");
        }
        if (w < 0.0) {
            throw DomainError("weight " + std::to_string(n) + " is negative");
        }
        sum += w;
    }
    ProbVec p;
    const double drift = sum - 1.0;
    if (std::abs(drift) > kNormTolerance) {
        if (renormalize == Renormalize::no) {
            throw NormalizationError("weights sum to " + std::to_string(sum) + ", expected 1");
        }
        if (!(sum > 0.0)) {
            throw DomainError("cannot renormalize weights with zero total mass");
        }
        for (double& w : weights) {
            w /= sum;
        }
        p.correction_ = drift;
    }
    p.weights_ = std::move(weights);
    return p;
}

inline ProbVec make_probvec(std::initializer_list<double> weights,
                            Renormalize renormalize = Renormalize::no) {
    return make_probvec(std::vector<double>(weights), renormalize);
}

/// Shannon entropy in nats, with 0 ln 0 = 0.
inline double shannon_entropy(std::span<const double> weights) noexcept {
    double h = 0.0;
    for (double w : weights) {
        if (w > 0.0) {
            h -= w * std::log(w);
        }
    }
    return h;
}

inline double shannon_entropy(const ProbVec& p) noexcept { return shannon_entropy(p.weights()); }

struct SupportProfile {
    bool connected = true;
    std::size_t last_positive_index = 0;
};

/// Connected means p_n > 0 for n <= N' and p_n = 0 beyond.
inline SupportProfile support_profile(const ProbVec& p) noexcept {
    SupportProfile profile;
    std::size_t last = 0;
    for (std::size_t n = 0; n < p.size(); ++n) {
        if (p[n] > 0.0) {
            last = n;
        }
    }
    profile.last_positive_index = last;
    for (std::size_t n = 0; n <= last; ++n) {
        if (!(p[n] > 0.0)) {
            profile.connected = false;
            break;
        }
    }
    return profile;
}

inline bool is_decreasing(const ProbVec& p) noexcept {
    return std::is_sorted(p.begin(), p.end(), std::greater<>{});
}

/// Sorts the weights into non-increasing order: the passive state with the
/// same spectrum.
inline ProbVec passive_rearrange(const ProbVec& p) {
    std::vector<double> w = p.vector();
    std::sort(w.begin(), w.end(), std::greater<>{});
    return make_probvec(std::move(w), Renormalize::yes);
}

/// True iff p majorizes q: every partial sum of the k+1 largest entries of p
/// dominates the corresponding sum for q. Shorter vectors are zero-padded.
inline bool majorizes(const ProbVec& p, const ProbVec& q) {
    const std::size_t len = std::max(p.size(), q.size());
    std::vector<double> a(len, 0.0);
    std::vector<double> b(len, 0.0);
    std::copy(p.begin(), p.end(), a.begin());
    std::copy(q.begin(), q.end(), b.begin());
    std::sort(a.begin(), a.end(), std::greater<>{});
    std::sort(b.begin(), b.end(), std::greater<>{});
    double sa = 0.0;
    double sb = 0.0;
    for (std::size_t k = 0; k < len; ++k) {
        sa += a[k];
        sb += b[k];
        if (sa < sb - kMajorizationTolerance) {
            return false;
        }
    }
    return true;
}

/// Keeps {0, ..., n_keep} of a decreasing distribution and renormalizes.
/// The result majorizes p, so its entropy never exceeds H(p).
inline ProbVec truncate_renormalize(const ProbVec& p, std::size_t n_keep) {
    if (n_keep > p.max_index()) {
        throw DomainError("truncation index " + std::to_string(n_keep) + " exceeds support " +
                          std::to_string(p.max_index()));
    }
    if (!is_decreasing(p)) {
        throw DomainError("truncate_renormalize requires decreasing weights");
    }
    const auto head = p.weights().first(n_keep + 1);
    const double kept = std::accumulate(head.begin(), head.end(), 0.0);
    if (!(kept > 0.0)) {
        throw DomainError("truncation keeps zero mass");
    }
    std::vector<double> w(head.begin(), head.end());
    if (n_keep == p.max_index()) {
        return p;
    }
    for (double& x : w) {
        x /= kept;
    }
    return make_probvec(std::move(w), Renormalize::yes);
}

} // namespace thinlab
