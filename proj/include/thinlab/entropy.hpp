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

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "thinlab/errors.hpp"
#include "thinlab/prob_vec.hpp"

namespace thinlab {

namespace detail {

inline void require_unit_interval(double lambda, const char* name) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw DomainError(std::string(name) + " must lie in [0, 1], got " + std::to_string(lambda));
    }
}

} // namespace detail

/// Entropy of the thermal state with mean photon number E:
/// g(E) = (E+1) ln(E+1) - E ln E, with g(0) = 0.
inline double g(double energy) {
    if (!(energy >= 0.0)) {
        throw DomainError("g: energy must be >= 0, got " + std::to_string(energy));
    }
    if (energy == 0.0) {
        return 0.0;
    }
    if (std::isinf(energy)) {
        return energy;
    }
    // Both forms are sums of non-negative terms, so neither cancels.
    if (energy < 1.0) {
        return (energy + 1.0) * std::log1p(energy) - energy * std::log(energy);
    }
    return std::log1p(energy) + energy * std::log1p(1.0 / energy);
}

/// g'(E) = ln(1 + 1/E); diverges at 0.
inline double g_prime(double energy) {
    if (!(energy > 0.0)) {
        throw DomainError("g_prime: energy must be > 0, got " + std::to_string(energy));
    }
    return std::log1p(1.0 / energy);
}

/// Inverse of g on [0, inf). Bracketed Newton with bisection fallback, run
/// until the step is at the rounding level of E.
inline double g_inv(double entropy) {
    if (!(entropy >= 0.0)) {
        throw DomainError("g_inv: entropy must be >= 0, got " + std::to_string(entropy));
    }
    if (entropy == 0.0) {
        return 0.0;
    }
    if (std::isinf(entropy)) {
        throw DomainError("g_inv: entropy must be finite");
    }
    double lo = 0.0;
    double hi = std::max(1.0, std::exp(std::min(entropy, 700.0)));
    while (g(hi) < entropy) {
        lo = hi;
        hi *= 2.0;
        if (std::isinf(hi)) {
            throw DomainError("g_inv: entropy too large for double energies");
        }
    }
    // Start from the large-E asymptote g(E) ~ ln(E) + 1, clamped into the bracket.
    double e = std::exp(entropy - 1.0);
    if (!(e > lo && e < hi)) {
        e = 0.5 * (lo + hi);
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (int iter = 0; iter < 200; ++iter) {
        const double r = g(e) - entropy;
        if (r == 0.0) {
            return e;
        }
        if (r > 0.0) {
            hi = e;
        } else {
            lo = e;
        }
        double next = e - r / g_prime(e);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        const double step = std::abs(next - e);
        e = next;
        if (step <= 2.0 * eps * e || hi - lo <= 2.0 * eps * hi) {
            break;
        }
    }
    return e;
}

/// f(S) = -g^{-1}(S) g'(g^{-1}(S)): the minimal entropy-production rate, with
/// f(0) = 0 by continuity. Always <= 0.
inline double f(double entropy) {
    const double e = g_inv(entropy);
    if (e == 0.0) {
        return 0.0;
    }
    return -e * std::log1p(1.0 / e);
}

/// Closed-form derivative f'(S) = 1 / ((1 + E) ln(1 + 1/E)) - 1, E = g^{-1}(S);
/// tends to -1 as S -> 0.
inline double f_prime(double entropy) {
    const double e = g_inv(entropy);
    if (e == 0.0) {
        return -1.0;
    }
    return 1.0 / ((1.0 + e) * std::log1p(1.0 / e)) - 1.0;
}

/// Truncation index of the geometric law with mean E: the smallest N with
/// (E/(E+1))^(N+1) < tail_mass_bound.
inline std::size_t thermal_truncation_index(double energy, double tail_mass_bound) {
    if (energy == 0.0) {
        return 0;
    }
    const double log_ratio = std::log(energy) - std::log1p(energy);
    const double k = std::floor(std::log(tail_mass_bound) / log_ratio);
    if (!(k < 5e7)) {
        throw DomainError("thermal_geometric: truncation index too large");
    }
    auto n = static_cast<std::size_t>(std::max(0.0, k));
    while (n > 0 && static_cast<double>(n) * log_ratio < std::log(tail_mass_bound)) {
        --n;
    }
    while (static_cast<double>(n + 1) * log_ratio >= std::log(tail_mass_bound)) {
        ++n;
    }
    return n;
}

/// Geometric (thermal) distribution p_n = (1/(E+1)) (E/(E+1))^n truncated
/// where the discarded tail drops below tail_mass_bound, then renormalized.
inline ProbVec thermal_geometric(double energy, double tail_mass_bound = 1e-14) {
    if (!(energy >= 0.0) || std::isinf(energy)) {
        throw DomainError("thermal_geometric: energy must be finite and >= 0");
    }
    if (!(tail_mass_bound > 0.0 && tail_mass_bound < 1.0)) {
        throw DomainError("thermal_geometric: tail mass bound must lie in (0, 1)");
    }
    if (energy == 0.0) {
        return ProbVec{};
    }
    const std::size_t n_max = thermal_truncation_index(energy, tail_mass_bound);
    const double ratio = energy / (energy + 1.0);
    std::vector<double> w(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) {
        w[n] = std::exp(static_cast<double>(n) * std::log(ratio)) / (energy + 1.0);
    }
    double sum = 0.0;
    for (double x : w) {
        sum += x;
    }
    for (double& x : w) {
        x /= sum;
    }
    return make_probvec(std::move(w), Renormalize::yes);
}

/// Output-entropy lower bound g(lambda g^{-1}(S)), saturated by thermal inputs.
inline double epni_bound(double entropy, double lambda) {
    detail::require_unit_interval(lambda, "lambda");
    return g(lambda * g_inv(entropy));
}

/// Entropy-power lower bound ln(lambda (e^S - 1) + 1).
inline double qepi_bound(double entropy, double lambda) {
    detail::require_unit_interval(lambda, "lambda");
    if (!(entropy >= 0.0)) {
        throw DomainError("qepi_bound: entropy must be >= 0");
    }
    return std::log1p(lambda * std::expm1(entropy));
}

/// phi0(t) = g(e^{-t} g^{-1}(S)), the solution of dphi/dt = f(phi) with
/// phi(0) = S. Defined for any real t.
inline double comparison_solution(double entropy, double t) {
    return g(std::exp(-t) * g_inv(entropy));
}

} // namespace thinlab
