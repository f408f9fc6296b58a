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
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "thinlab/attenuator.hpp"
#include "thinlab/entropy.hpp"
#include "thinlab/parallel.hpp"
#include "thinlab/prob_vec.hpp"
#include "thinlab/random.hpp"

namespace thinlab {

/// Tolerance for an inequality row to count as a violation.
inline constexpr double kViolationTolerance = 1e-9;

/// Output entropy of one (input, lambda) cell against both lower bounds.
struct BoundReport {
    std::string input_id;
    double S_in = 0.0;
    double lambda = 0.0;
    double S_out = 0.0;
    double epni = 0.0;
    double qepi = 0.0;
    double slack_epni = 0.0; ///< S_out - epni
    double slack_qepi = 0.0; ///< S_out - qepi
};

inline BoundReport bound_report(std::string input_id, const ProbVec& p, double lambda) {
    BoundReport r;
    r.input_id = std::move(input_id);
    r.S_in = shannon_entropy(p);
    r.lambda = lambda;
    r.S_out = shannon_entropy(thin(p, lambda));
    r.epni = epni_bound(r.S_in, lambda);
    r.qepi = qepi_bound(r.S_in, lambda);
    r.slack_epni = r.S_out - r.epni;
    r.slack_qepi = r.S_out - r.qepi;
    return r;
}

inline std::vector<double> default_lambda_grid() {
    return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
}

inline std::string format_id(const char* prefix, double value) {
    std::ostringstream os;
    os << prefix << value;
    return os.str();
}

struct TestInput {
    std::string id;
    ProbVec p;
};

/// Random sweep inputs: index i draws from stream i, cycling through
/// general, passive, sparse, passive shapes.
inline std::vector<TestInput> sweep_inputs(std::size_t count, std::size_t n_max, std::uint64_t seed) {
    static constexpr DistributionShape kCycle[] = {DistributionShape::general, DistributionShape::passive,
                                                   DistributionShape::sparse, DistributionShape::passive};
    static constexpr const char* kNames[] = {"general", "passive", "sparse", "passive"};
    std::vector<TestInput> inputs(count);
    for (std::size_t i = 0; i < count; ++i) {
        std::ostringstream id;
        id << "rand-" << i << "-" << kNames[i % 4];
        inputs[i] = {id.str(), sweep_distribution(seed, i, n_max, kCycle[i % 4])};
    }
    return inputs;
}

inline constexpr double kGeometricSweepEnergies[] = {0.5, 1.0, 3.0};

struct EpniSweepOptions {
    std::size_t count = 1000;
    std::size_t n_max = 20;
    std::vector<double> lambdas = default_lambda_grid();
    std::uint64_t seed = 0;
    bool include_geometric = true;
};

struct EpniSummary {
    std::size_t rows = 0;
    double min_slack_epni = std::numeric_limits<double>::infinity();
    std::size_t violations = 0;
    double max_geometric_abs_slack = 0.0;
    std::size_t order_violations = 0; ///< rows with epni < qepi - 1e-12
};

struct EpniSweep {
    EpniSweepOptions options;
    std::vector<BoundReport> rows;
    EpniSummary summary;
};

/// Output-entropy bound over random inputs and every lambda, plus geometric
/// inputs that saturate it. Rows come out in (input, lambda) order.
inline EpniSweep verify_epni(const EpniSweepOptions& opts) {
    if (opts.count == 0 || opts.lambdas.empty()) {
        throw DomainError("verify_epni: count must be >= 1 and the lambda grid nonempty");
    }
    for (double l : opts.lambdas) {
        detail::require_unit_interval(l, "lambda");
    }
    std::vector<TestInput> inputs = sweep_inputs(opts.count, opts.n_max, opts.seed);
    const std::size_t random_count = inputs.size();
    if (opts.include_geometric) {
        for (double e : kGeometricSweepEnergies) {
            inputs.push_back({format_id("geom-", e), thermal_geometric(e, 1e-14)});
        }
    }
    EpniSweep sweep;
    sweep.options = opts;
    const std::size_t nl = opts.lambdas.size();
    sweep.rows.resize(inputs.size() * nl);
    parallel_for(inputs.size(), [&](std::size_t i) {
        for (std::size_t j = 0; j < nl; ++j) {
            sweep.rows[i * nl + j] = bound_report(inputs[i].id, inputs[i].p, opts.lambdas[j]);
        }
    });
    EpniSummary& s = sweep.summary;
    s.rows = sweep.rows.size();
    for (std::size_t r = 0; r < sweep.rows.size(); ++r) {
        const BoundReport& row = sweep.rows[r];
        s.min_slack_epni = std::min(s.min_slack_epni, row.slack_epni);
        if (row.slack_epni < -kViolationTolerance) {
            ++s.violations;
        }
        if (row.epni < row.qepi - 1e-12) {
            ++s.order_violations;
        }
        if (r / nl >= random_count) {
            s.max_geometric_abs_slack = std::max(s.max_geometric_abs_slack, std::abs(row.slack_epni));
        }
    }
    return sweep;
}

struct IsoRow {
    std::string input_id;
    std::size_t max_index = 0;
    IsoperimetricReport report;
};

struct IsoSummary {
    std::size_t rows = 0;
    double min_slack = std::numeric_limits<double>::infinity();
    std::size_t violations = 0;
    double max_geometric_abs_slack = 0.0;
};

struct IsoSweep {
    std::uint64_t seed = 0;
    std::vector<IsoRow> rows;
    IsoSummary summary;
};

/// Isoperimetric inequality -F(p) >= f(H(p)) over random passive inputs with
/// support size drawn from {2, ..., n_max + 1}, plus delta_0 and geometric rows.
inline IsoSweep verify_iso(std::size_t count, std::size_t n_max, std::uint64_t seed) {
    if (count == 0 || n_max == 0) {
        throw DomainError("verify_iso: count and n_max must be >= 1");
    }
    std::vector<TestInput> inputs(count);
    for (std::size_t i = 0; i < count; ++i) {
        CounterRng rng(seed, i);
        const auto draw = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n_max));
        std::ostringstream id;
        id << "rand-" << i << "-passive";
        inputs[i] = {id.str(), random_distribution(rng, 1 + std::min(draw, n_max - 1), DistributionShape::passive)};
    }
    inputs.push_back({"delta0", ProbVec{}});
    const std::size_t first_geometric = inputs.size();
    for (double e : kGeometricSweepEnergies) {
        inputs.push_back({format_id("geom-", e), thermal_geometric(e, 1e-14)});
    }
    IsoSweep sweep;
    sweep.seed = seed;
    sweep.rows.resize(inputs.size());
    parallel_for(inputs.size(), [&](std::size_t i) {
        sweep.rows[i] = {inputs[i].id, inputs[i].p.max_index(), isoperimetric_check(inputs[i].p)};
    });
    IsoSummary& s = sweep.summary;
    s.rows = sweep.rows.size();
    for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
        const double slack = sweep.rows[i].report.slack;
        s.min_slack = std::min(s.min_slack, slack);
        if (slack < -kViolationTolerance) {
            ++s.violations;
        }
        if (i >= first_geometric) {
            s.max_geometric_abs_slack = std::max(s.max_geometric_abs_slack, std::abs(slack));
        }
    }
    return sweep;
}

struct BoundComparisonRow {
    double S = 0.0;
    double lambda = 0.0;
    double epni = 0.0;
    double qepi = 0.0;
    double gap = 0.0; ///< epni - qepi
};

struct BoundComparison {
    std::vector<BoundComparisonRow> rows;
    std::size_t negative_gaps = 0;     ///< gap < -1e-12
    std::size_t non_strict_gaps = 0;   ///< gap <= 0 with S > 0 and 0 < lambda < 1
};

inline BoundComparison compare_bounds(const std::vector<double>& entropies, const std::vector<double>& lambdas) {
    if (entropies.empty() || lambdas.empty()) {
        throw DomainError("compare_bounds: grids must be nonempty");
    }
    BoundComparison out;
    for (double s : entropies) {
        for (double l : lambdas) {
            BoundComparisonRow row{s, l, epni_bound(s, l), qepi_bound(s, l), 0.0};
            row.gap = row.epni - row.qepi;
            if (row.gap < -1e-12) {
                ++out.negative_gaps;
            }
            if (s > 0.0 && l > 0.0 && l < 1.0 && !(row.gap > 0.0)) {
                ++out.non_strict_gaps;
            }
            out.rows.push_back(row);
        }
    }
    return out;
}

/// One grid point of the attenuation flow next to the comparison solution.
struct FlowRow {
    double t = 0.0;
    double lambda = 1.0;
    double entropy = 0.0;
    double F = std::numeric_limits<double>::quiet_NaN(); ///< NaN if support disconnected
    double f_of_S = 0.0;
    double phi0 = 0.0;
    double slope = std::numeric_limits<double>::quiet_NaN(); ///< finite-difference dH/dt
};

struct FlowTable {
    std::vector<FlowRow> rows;
    std::size_t bound_violations = 0; ///< H(p_t) < phi0(t) - 1e-9
    std::size_t slope_violations = 0; ///< slope < f(H) - 1e-5
    bool slopes_checked = false;
};

inline constexpr double kFlowStep = 1e-5;

/// dH/dt of the flow at t: central difference, or a second-order forward
/// difference when t - h would be negative.
inline double flow_entropy_slope(const ProbVec& p, double t, double h = kFlowStep) {
    const auto H = [&](double s) { return shannon_entropy(thin(p, std::exp(-s))); };
    if (t >= h) {
        return (H(t + h) - H(t - h)) / (2.0 * h);
    }
    return (-3.0 * H(t) + 4.0 * H(t + h) - H(t + 2.0 * h)) / (2.0 * h);
}

inline FlowTable entropy_flow(const ProbVec& p, double t_max, std::size_t steps) {
    if (!(t_max >= 0.0)) {
        throw DomainError("flow: t_max must be >= 0");
    }
    if (steps < 2) {
        throw DomainError("flow: steps must be >= 2");
    }
    const std::size_t count = t_max == 0.0 ? 1 : steps;
    const double s0 = shannon_entropy(p);
    FlowTable table;
    table.slopes_checked = count > 1;
    table.rows.resize(count);
    parallel_for(count, [&](std::size_t i) {
        FlowRow& row = table.rows[i];
        row.t = count == 1 ? 0.0 : t_max * static_cast<double>(i) / static_cast<double>(count - 1);
        const FlowPoint point = evolve(p, row.t);
        row.lambda = point.lambda;
        row.entropy = point.entropy;
        if (support_profile(point.p).connected) {
            row.F = entropy_production(point.p);
        } else if (row.t > 0.0 && point.lambda > 0.0) {
            throw std::logic_error("flow: thinning produced a disconnected support");
        }
        row.f_of_S = f(row.entropy);
        row.phi0 = comparison_solution(s0, row.t);
        if (table.slopes_checked) {
            row.slope = flow_entropy_slope(p, row.t);
        }
    });
    for (const FlowRow& row : table.rows) {
        if (row.entropy < row.phi0 - kViolationTolerance) {
            ++table.bound_violations;
        }
        if (table.slopes_checked && row.slope < row.f_of_S - 1e-5) {
            ++table.slope_violations;
        }
    }
    return table;
}

/// Boundary point of the superposition-coding region of the degraded
/// broadcast channel at power split beta.
struct RatePoint {
    double beta = 0.0;
    double R_A = 0.0;
    double R_B = 0.0;
    double lambda = 0.0;
    double E = 0.0;
};

inline RatePoint rate_point(double lambda, double energy, double beta) {
    RatePoint r{beta, g(lambda * beta * energy), 0.0, lambda, energy};
    r.R_B = g((1.0 - lambda) * energy) - g((1.0 - lambda) * beta * energy);
    return r;
}

inline std::vector<RatePoint> broadcast_rate_region(double lambda, double energy, std::size_t beta_steps) {
    if (!(lambda >= 0.5 && lambda <= 1.0)) {
        throw DomainError("broadcast region: the channel is degraded only for 1/2 <= lambda <= 1, got " +
                          std::to_string(lambda));
    }
    if (!(energy > 0.0) || std::isinf(energy)) {
        throw DomainError("broadcast region: energy must be finite and > 0");
    }
    if (beta_steps < 2) {
        throw DomainError("broadcast region: beta steps must be >= 2");
    }
    std::vector<RatePoint> curve(beta_steps);
    for (std::size_t i = 0; i < beta_steps; ++i) {
        const double beta = i + 1 == beta_steps ? 1.0 : static_cast<double>(i) / static_cast<double>(beta_steps - 1);
        curve[i] = rate_point(lambda, energy, beta);
    }
    return curve;
}

struct MonteCarloReport {
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    double lambda = 0.0;
    double total_variation = 0.0;
    double threshold = 0.0; ///< 5 / sqrt(samples)
    bool pass = false;
    ProbVec empirical;
    ProbVec exact;
};

inline MonteCarloReport monte_carlo_report(const ProbVec& p, double lambda, std::size_t samples, std::uint64_t seed) {
    MonteCarloReport r;
    r.samples = samples;
    r.seed = seed;
    r.lambda = lambda;
    r.empirical = monte_carlo_thin(p, lambda, samples, seed);
    r.exact = thin(p, lambda);
    r.total_variation = total_variation(r.empirical, r.exact);
    r.threshold = 5.0 / std::sqrt(static_cast<double>(samples));
    r.pass = r.total_variation <= r.threshold;
    return r;
}

} // namespace thinlab
