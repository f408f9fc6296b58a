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

// Reference computations used only by the tests. None of them call into the
// library's numerics: thinning goes through polynomial composition of the
// generating function, entropies through long double sums.

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

using Real = long double;

/// Coefficients of sum_k p_k (1 - lambda + lambda x)^k via Horner's rule on
/// polynomials. Valid for any real lambda, including lambda > 1 where the
/// generating function continues the flow to negative time.
inline std::vector<Real> thin_poly(const std::vector<double>& p, Real lambda) {
    const std::size_t dim = p.size();
    std::vector<Real> acc(dim, 0.0L);
    // acc <- acc * (1 - lambda + lambda x) + p_k, for k from the top down
    for (std::size_t k = dim; k-- > 0;) {
        std::vector<Real> next(dim, 0.0L);
        for (std::size_t n = 0; n < dim; ++n) {
            next[n] += acc[n] * (1.0L - lambda);
            if (n + 1 < dim) {
                next[n + 1] += acc[n] * lambda;
            }
        }
        next[0] += p[k];
        acc = std::move(next);
    }
    return acc;
}

inline std::vector<double> thin(const std::vector<double>& p, double lambda) {
    const auto q = thin_poly(p, lambda);
    return {q.begin(), q.end()};
}

inline Real entropy(const std::vector<Real>& p) {
    Real h = 0.0L;
    for (Real x : p) {
        if (x > 0.0L) {
            h -= x * std::log(x);
        }
    }
    return h;
}

inline Real entropy(const std::vector<double>& p) { return entropy(std::vector<Real>(p.begin(), p.end())); }

/// H of the flow at time t (any sign) from the generating-function form.
inline Real flow_entropy(const std::vector<double>& p, Real t) { return entropy(thin_poly(p, std::exp(-t))); }

/// Central difference of the flow entropy at t = 0.
inline Real flow_slope_at_zero(const std::vector<double>& p, Real h = 1e-5L) {
    return (flow_entropy(p, h) - flow_entropy(p, -h)) / (2.0L * h);
}

/// Entropy of the geometric law with mean E by direct summation.
inline Real thermal_entropy_series(Real energy) {
    if (energy == 0.0L) {
        return 0.0L;
    }
    const Real z = energy / (energy + 1.0L);
    Real pn = 1.0L / (energy + 1.0L);
    Real h = 0.0L;
    for (int n = 0; n < 200000 && pn > 1e-300L; ++n) {
        h -= pn * std::log(pn);
        pn *= z;
    }
    return h;
}

/// r_{n|k} from the multiplicative recursion r_{n+1|k} = r_{n|k} (k-n)/(n+1) lambda/(1-lambda).
inline std::vector<std::vector<Real>> kernel_matrix(std::size_t max_index, Real lambda) {
    std::vector<std::vector<Real>> m(max_index + 1, std::vector<Real>(max_index + 1, 0.0L));
    for (std::size_t k = 0; k <= max_index; ++k) {
        if (lambda == 1.0L) {
            m[k][k] = 1.0L;
            continue;
        }
        Real r = std::pow(1.0L - lambda, static_cast<Real>(k));
        for (std::size_t n = 0; n <= k; ++n) {
            m[n][k] = r;
            r *= static_cast<Real>(k - n) / static_cast<Real>(n + 1) * lambda / (1.0L - lambda);
        }
    }
    return m;
}

inline std::vector<std::vector<Real>> matmul(const std::vector<std::vector<Real>>& a,
                                             const std::vector<std::vector<Real>>& b) {
    const std::size_t d = a.size();
    std::vector<std::vector<Real>> c(d, std::vector<Real>(d, 0.0L));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t k = 0; k < d; ++k) {
            for (std::size_t j = 0; j < d; ++j) {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    return c;
}

/// F through the chain rule: -dH/dt = sum_n p'_n (1 + ln p_n) with
/// p'_n = (n+1) p_{n+1} - n p_n.
inline Real production_from_derivative(const std::vector<double>& p) {
    Real acc = 0.0L;
    for (std::size_t n = 0; n < p.size(); ++n) {
        if (p[n] <= 0.0) {
            continue;
        }
        const Real next = n + 1 < p.size() ? static_cast<Real>(p[n + 1]) : 0.0L;
        const Real d = static_cast<Real>(n + 1) * next - static_cast<Real>(n) * p[n];
        acc += d * (1.0L + std::log(static_cast<Real>(p[n])));
    }
    return acc;
}

inline Real binary_entropy(Real x) {
    Real h = 0.0L;
    if (x > 0.0L) {
        h -= x * std::log(x);
    }
    if (x < 1.0L) {
        h -= (1.0L - x) * std::log1p(-x);
    }
    return h;
}

} // namespace oracle
