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
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "thinlab/entropy.hpp"
#include "thinlab/errors.hpp"
#include "thinlab/parallel.hpp"
#include "thinlab/prob_vec.hpp"
#include "thinlab/random.hpp"

namespace thinlab {

namespace detail {

/// Above this k the binomial coefficient is taken from log-factorials.
inline constexpr std::size_t kDirectBinomialLimit = 30;

/// Dense kernels are materialized up to this support index.
inline constexpr std::size_t kDenseKernelLimit = 2048;

inline std::uint64_t small_binomial(std::size_t k, std::size_t n) noexcept {
    n = std::min(n, k - n);
    std::uint64_t c = 1;
    for (std::size_t i = 1; i <= n; ++i) {
        c = c * (k - n + i) / i; // exact: c * (k-n+i) is divisible by i
    }
    return c;
}

/// ln C(k, n) accumulated term by term.
inline double log_binomial(std::size_t k, std::size_t n) noexcept {
    n = std::min(n, k - n);
    double acc = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        acc += std::log(static_cast<double>(k - n + i) / static_cast<double>(i));
    }
    return acc;
}

inline std::vector<double> log_factorials(std::size_t k_max) {
    std::vector<double> lf(k_max + 1, 0.0);
    for (std::size_t k = 2; k <= k_max; ++k) {
        lf[k] = lf[k - 1] + std::log(static_cast<double>(k));
    }
    return lf;
}

inline double binomial_term(std::size_t n, std::size_t k, double lambda, double log_choose) noexcept {
    if (n > k) {
        return 0.0;
    }
    if (lambda == 0.0) {
        return n == 0 ? 1.0 : 0.0;
    }
    if (lambda == 1.0) {
        return n == k ? 1.0 : 0.0;
    }
    const double nn = static_cast<double>(n);
    const double rest = static_cast<double>(k - n);
    if (k <= kDirectBinomialLimit) {
        return static_cast<double>(small_binomial(k, n)) * std::pow(lambda, nn) *
               std::pow(1.0 - lambda, rest);
    }
    return std::exp(log_choose + nn * std::log(lambda) + rest * std::log1p(-lambda));
}

} // namespace detail

/// r_{n|k} = C(k, n) lambda^n (1 - lambda)^(k - n): probability that n of k
/// quanta survive. Zero for k < n.
inline double transition_probability(std::size_t n, std::size_t k, double lambda) {
    detail::require_unit_interval(lambda, "lambda");
    if (n > k) {
        return 0.0;
    }
    const double lc = k > detail::kDirectBinomialLimit ? detail::log_binomial(k, n) : 0.0;
    return detail::binomial_term(n, k, lambda, lc);
}

/// Thinning kernel on {0, ..., N} for a fixed lambda. Dense up to
/// N = 2048; larger kernels evaluate entries on demand.
class TransitionKernel {
public:
    TransitionKernel(double lambda, std::size_t max_index)
        : lambda_(lambda), dim_(max_index + 1), log_fact_(detail::log_factorials(max_index)),
          column_scale_(dim_, 1.0) {
        detail::require_unit_interval(lambda, "lambda");
        // Log-space terms carry a shared relative error of about k * eps;
        // dividing by the computed column sum removes it.
        for (std::size_t k = detail::kDirectBinomialLimit + 1; k < dim_; ++k) {
            double sum = 0.0;
            for (std::size_t n = 0; n <= k; ++n) {
                sum += compute(n, k);
            }
            column_scale_[k] = 1.0 / sum;
        }
        if (max_index <= detail::kDenseKernelLimit) {
            dense_.assign(dim_ * dim_, 0.0);
            for (std::size_t k = 0; k < dim_; ++k) {
                for (std::size_t n = 0; n <= k; ++n) {
                    dense_[n * dim_ + k] = compute(n, k) * column_scale_[k];
                }
            }
        }
    }

    double lambda() const noexcept { return lambda_; }
    std::size_t max_index() const noexcept { return dim_ - 1; }
    bool is_dense() const noexcept { return !dense_.empty(); }

    double operator()(std::size_t n, std::size_t k) const noexcept {
        if (n > k || k >= dim_) {
            return 0.0;
        }
        return is_dense() ? dense_[n * dim_ + k] : compute(n, k) * column_scale_[k];
    }

    /// [T p]_n = sum_k r_{n|k} p_k. p may be shorter than the kernel.
    std::vector<double> apply(std::span<const double> p) const {
        std::vector<double> out(p.size(), 0.0);
        for (std::size_t n = 0; n < p.size(); ++n) {
            double acc = 0.0;
            for (std::size_t k = n; k < p.size(); ++k) {
                if (p[k] != 0.0) {
                    acc += (*this)(n, k) * p[k];
                }
            }
            out[n] = acc;
        }
        return out;
    }

    /// Largest |sum_n r_{n|k} - 1| over columns.
    double max_column_deviation() const noexcept {
        double worst = 0.0;
        for (std::size_t k = 0; k < dim_; ++k) {
            double s = 0.0;
            for (std::size_t n = 0; n <= k; ++n) {
                s += (*this)(n, k);
            }
            worst = std::max(worst, std::abs(s - 1.0));
        }
        return worst;
    }

private:
    double compute(std::size_t n, std::size_t k) const noexcept {
        const double lc = k > detail::kDirectBinomialLimit ? log_fact_[k] - log_fact_[n] - log_fact_[k - n] : 0.0;
        return detail::binomial_term(n, k, lambda_, lc);
    }

    double lambda_;
    std::size_t dim_;
    std::vector<double> log_fact_;
    std::vector<double> column_scale_;
    std::vector<double> dense_;
};

/// Binomial thinning T_lambda: each quantum survives independently with
/// probability lambda. Support never grows.
inline ProbVec thin(const ProbVec& p, double lambda) {
    detail::require_unit_interval(lambda, "lambda");
    if (lambda == 1.0) {
        return p;
    }
    const TransitionKernel kernel(lambda, p.max_index());
    return make_probvec(kernel.apply(p.weights()), Renormalize::yes);
}

/// Max entrywise deviation between T_l1(T_l2(p)) and T_{l1 l2}(p).
inline double compose_check(const ProbVec& p, double lambda1, double lambda2) {
    const ProbVec two_step = thin(thin(p, lambda2), lambda1);
    const ProbVec one_step = thin(p, lambda1 * lambda2);
    double worst = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) {
        worst = std::max(worst, std::abs(two_step[n] - one_step[n]));
    }
    return worst;
}

/// State of the attenuation flow at log-attenuation time t (lambda = e^{-t}).
struct FlowPoint {
    double t = 0.0;
    double lambda = 1.0;
    ProbVec p;
    double entropy = 0.0;
};

inline FlowPoint evolve(const ProbVec& p, double t) {
    if (!(t >= 0.0)) {
        throw DomainError("evolve: time must be >= 0, got " + std::to_string(t));
    }
    FlowPoint point;
    point.t = t;
    point.lambda = std::exp(-t);
    point.p = thin(p, point.lambda);
    point.entropy = shannon_entropy(point.p);
    return point;
}

/// d/dt p_n(t) at t = 0: (n+1) p_{n+1} - n p_n, with p_{N+1} = 0.
inline std::vector<double> derivative_initial(const ProbVec& p) {
    std::vector<double> d(p.size());
    for (std::size_t n = 0; n < p.size(); ++n) {
        const auto nn = static_cast<double>(n);
        d[n] = (nn + 1.0) * p.at_or_zero(n + 1) - nn * p[n];
    }
    return d;
}

/// Entropy production F(p) = sum_{n=1}^{N'} n p_n ln(p_{n-1} / p_n), equal to
/// -dH/dt of the flow at t = 0. Defined only on connected support.
inline double entropy_production(const ProbVec& p) {
    const SupportProfile support = support_profile(p);
    if (!support.connected) {
        throw DomainError("entropy_production: support is not connected");
    }
    double acc = 0.0;
    for (std::size_t n = 1; n <= support.last_positive_index; ++n) {
        acc += static_cast<double>(n) * p[n] * std::log(p[n - 1] / p[n]);
    }
    return acc;
}

struct IsoperimetricReport {
    double entropy = 0.0;
    double F_value = 0.0;
    double f_of_S = 0.0;
    /// -F(p) - f(H(p)); non-negative when the inequality holds.
    double slack = 0.0;
};

inline IsoperimetricReport isoperimetric_check(const ProbVec& p) {
    IsoperimetricReport r;
    r.F_value = entropy_production(p);
    r.entropy = shannon_entropy(p);
    r.f_of_S = f(r.entropy);
    r.slack = -r.F_value - r.f_of_S;
    return r;
}

/// Empirical thinning: draws N ~ p, keeps each of the N quanta with
/// probability lambda, and histograms the survivors. Sample i uses its own
/// counter stream, so the result depends only on the seed.
inline ProbVec monte_carlo_thin(const ProbVec& p, double lambda, std::size_t samples, std::uint64_t seed,
                                std::size_t workers = worker_count()) {
    detail::require_unit_interval(lambda, "lambda");
    if (samples == 0) {
        throw DomainError("monte_carlo_thin: samples must be >= 1");
    }
    std::vector<double> cdf(p.size());
    double acc = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) {
        acc += p[n];
        cdf[n] = acc;
    }
    const std::size_t last_positive = support_profile(p).last_positive_index;

    constexpr std::size_t kChunk = 1 << 14;
    const std::size_t chunks = (samples + kChunk - 1) / kChunk;
    std::vector<std::vector<std::uint64_t>> partial(chunks, std::vector<std::uint64_t>(p.size(), 0));
    parallel_for(
        chunks,
        [&](std::size_t c) {
            auto& hist = partial[c];
            const std::size_t end = std::min(samples, (c + 1) * kChunk);
            for (std::size_t i = c * kChunk; i < end; ++i) {
                CounterRng rng(seed, i);
                const double u = rng.uniform() * acc;
                auto count = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
                count = std::min(count, last_positive);
                std::size_t survivors = 0;
                for (std::size_t b = 0; b < count; ++b) {
                    if (rng.uniform() < lambda) {
                        ++survivors;
                    }
                }
                ++hist[survivors];
            }
        },
        workers);

    std::vector<std::uint64_t> total(p.size(), 0);
    for (const auto& hist : partial) {
        for (std::size_t n = 0; n < hist.size(); ++n) {
            total[n] += hist[n];
        }
    }
    std::vector<double> w(p.size());
    for (std::size_t n = 0; n < w.size(); ++n) {
        w[n] = static_cast<double>(total[n]) / static_cast<double>(samples);
    }
    return make_probvec(std::move(w), Renormalize::yes);
}

/// Total variation distance (1/2) sum |p_n - q_n|, zero-padding the shorter.
inline double total_variation(const ProbVec& p, const ProbVec& q) noexcept {
    const std::size_t len = std::max(p.size(), q.size());
    double acc = 0.0;
    for (std::size_t n = 0; n < len; ++n) {
        acc += std::abs(p.at_or_zero(n) - q.at_or_zero(n));
    }
    return 0.5 * acc;
}

} // namespace thinlab
