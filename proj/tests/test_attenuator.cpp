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


#include <gtest/gtest.h>

#include <cmath>

#include "thinlab/attenuator.hpp"
#include "thinlab/entropy.hpp"
#include "thinlab/random.hpp"

#include "oracles.hpp"

using namespace thinlab;

TEST(TransitionProbability, SmallCases) {
    EXPECT_DOUBLE_EQ(transition_probability(0, 1, 0.3), 0.7);
    EXPECT_DOUBLE_EQ(transition_probability(1, 1, 0.3), 0.3);
    EXPECT_NEAR(transition_probability(1, 2, 0.5), 0.5, 1e-16);
    EXPECT_EQ(transition_probability(3, 2, 0.5), 0.0);
    EXPECT_EQ(transition_probability(2, 5, 0.0), 0.0);
    EXPECT_EQ(transition_probability(0, 5, 0.0), 1.0);
    EXPECT_EQ(transition_probability(5, 5, 1.0), 1.0);
    EXPECT_EQ(transition_probability(4, 5, 1.0), 0.0);
}

TEST(TransitionProbability, MatchesRecursionOracle) {
    for (double l : {0.01, 0.3, 0.5, 0.9}) {
        const auto m = oracle::kernel_matrix(60, l);
        for (std::size_t k = 0; k <= 60; ++k) {
            for (std::size_t n = 0; n <= k; ++n) {
                const double ref = static_cast<double>(m[n][k]);
                EXPECT_NEAR(transition_probability(n, k, l), ref, 1e-13 * ref + 1e-300) << n << "|" << k;
            }
        }
    }
}

TEST(TransitionKernel, ColumnsAreStochastic) {
    for (double l : {0.1, 0.5, 0.77}) {
        EXPECT_LT(TransitionKernel(l, 300).max_column_deviation(), 1e-12);
    }
}

TEST(TransitionKernel, LargeKernelIsEvaluatedOnDemand) {
    const TransitionKernel k(0.5, 3000);
    EXPECT_FALSE(k.is_dense());
    EXPECT_NEAR(k(1500, 3000), std::exp(std::lgamma(3001.0) - 2 * std::lgamma(1501.0) - 3000 * std::log(2.0)), 1e-12);
    EXPECT_TRUE(TransitionKernel(0.5, 10).is_dense());
}

TEST(Thin, MatchesGeneratingFunction) {
    for (std::uint64_t i = 0; i < 40; ++i) {
        const ProbVec p = sweep_distribution(3, i, 25, DistributionShape::sparse);
        for (double l : {0.05, 0.4, 0.95}) {
            const ProbVec q = thin(p, l);
            const auto ref = oracle::thin(p.vector(), l);
            for (std::size_t n = 0; n < q.size(); ++n) {
                EXPECT_NEAR(q[n], ref[n], 1e-14);
            }
        }
    }
}

TEST(Thin, DeltaOneGivesBernoulli) {
    const ProbVec q = thin(ProbVec::delta(1), 0.3);
    EXPECT_NEAR(q[0], 0.7, 1e-16);
    EXPECT_NEAR(q[1], 0.3, 1e-16);
}

TEST(Thin, IdentityAndVacuum) {
    const ProbVec p = sweep_distribution(1, 1, 10, DistributionShape::general);
    EXPECT_EQ(thin(p, 1.0), p);
    const ProbVec v = thin(p, 0.0);
    EXPECT_NEAR(v[0], 1.0, 1e-15);
    EXPECT_EQ(v[5], 0.0);
    EXPECT_THROW(thin(p, 1.2), DomainError);
    EXPECT_THROW(thin(p, std::nan("")), DomainError);
}

TEST(Thin, ScalesTheMean) {
    for (std::uint64_t i = 0; i < 30; ++i) {
        const ProbVec p = sweep_distribution(2, i, 30, DistributionShape::general);
        EXPECT_NEAR(thin(p, 0.37).mean(), 0.37 * p.mean(), 1e-12);
    }
}

TEST(Thin, ThermalStatesStayThermal) {
    for (double e : {0.5, 1.0, 3.0}) {
        const ProbVec p = thermal_geometric(e, 1e-14);
        for (double l : {0.3, 0.7}) {
            EXPECT_NEAR(shannon_entropy(thin(p, l)), g(l * e), 1e-9);
        }
    }
}

TEST(Thin, SemigroupAgainstMatrixProduct) {
    const auto a = oracle::kernel_matrix(30, 0.6L);
    const auto b = oracle::kernel_matrix(30, 0.5L);
    const auto ab = oracle::matmul(a, b);
    const auto c = oracle::kernel_matrix(30, 0.3L);
    for (std::size_t i = 0; i <= 30; ++i) {
        for (std::size_t j = 0; j <= 30; ++j) {
            EXPECT_NEAR(static_cast<double>(ab[i][j]), static_cast<double>(c[i][j]), 1e-15);
        }
    }
    for (std::uint64_t i = 0; i < 20; ++i) {
        EXPECT_LE(compose_check(sweep_distribution(4, i, 30, DistributionShape::general), 0.6, 0.5), 1e-12);
    }
}

TEST(Flow, DerivativeAtZero) {
    const ProbVec p = make_probvec({0.4, 0.3, 0.2, 0.1});
    const auto d = derivative_initial(p);
    EXPECT_NEAR(d[0], 0.3, 1e-16);
    EXPECT_NEAR(d[1], 2 * 0.2 - 0.3, 1e-16);
    EXPECT_NEAR(d[3], -0.3, 1e-16);
    double total = 0.0;
    for (double x : d) {
        total += x;
    }
    EXPECT_NEAR(total, 0.0, 1e-16);
    // matches a forward difference of the flow
    const double h = 1e-7;
    const ProbVec q = evolve(p, h).p;
    for (std::size_t n = 0; n < p.size(); ++n) {
        EXPECT_NEAR((q[n] - p[n]) / h, d[n], 1e-6);
    }
}

TEST(Flow, EvolveRejectsNegativeTime) { EXPECT_THROW(evolve(ProbVec{}, -0.1), DomainError); }

TEST(EntropyProduction, ClosedFormsAndErrors) {
    EXPECT_EQ(entropy_production(ProbVec{}), 0.0);
    EXPECT_NEAR(entropy_production(make_probvec({0.5, 0.5})), 0.0, 1e-16);
    EXPECT_NEAR(entropy_production(make_probvec({0.75, 0.25})), 0.25 * std::log(3.0), 1e-16);
    EXPECT_THROW(entropy_production(make_probvec({0.5, 0.0, 0.5})), DomainError);
    // geometric input saturates -F = f(H)
    const ProbVec p = thermal_geometric(1.0, 1e-14);
    EXPECT_NEAR(entropy_production(p), -f(shannon_entropy(p)), 1e-9);
}

TEST(EntropyProduction, EqualsMinusEntropySlope) {
    for (std::uint64_t i = 0; i < 30; ++i) {
        const ProbVec p = sweep_distribution(6, i, 15, DistributionShape::general);
        const double F = entropy_production(p);
        EXPECT_NEAR(F, static_cast<double>(oracle::production_from_derivative(p.vector())), 1e-12 * std::max(1.0, std::abs(F)));
        // on passive inputs the flow is smooth enough for a plain central difference
        const ProbVec q = passive_rearrange(p);
        const double Fq = entropy_production(q);
        EXPECT_NEAR(Fq, -static_cast<double>(oracle::flow_slope_at_zero(q.vector())), 1e-7 * std::max(1.0, std::abs(Fq)));
    }
}

TEST(Isoperimetric, HoldsOnPassiveInputs) {
    for (std::uint64_t i = 0; i < 200; ++i) {
        const ProbVec p = sweep_distribution(8, i, 1 + i % 20, DistributionShape::passive);
        EXPECT_GE(isoperimetric_check(p).slack, -1e-9);
    }
}

TEST(MonteCarlo, DeterministicAndClose) {
    const ProbVec p = thermal_geometric(1.0, 1e-14);
    const ProbVec a = monte_carlo_thin(p, 0.5, 200000, 9, 1);
    const ProbVec b = monte_carlo_thin(p, 0.5, 200000, 9, 4);
    EXPECT_EQ(a, b);
    EXPECT_LT(total_variation(a, thin(p, 0.5)), 5.0 / std::sqrt(200000.0));
    EXPECT_EQ(total_variation(monte_carlo_thin(ProbVec{}, 0.5, 1000, 1), ProbVec{}), 0.0);
    EXPECT_THROW(monte_carlo_thin(p, 0.5, 0, 1), DomainError);
}

TEST(TotalVariation, PadsShorterVector) {
    EXPECT_NEAR(total_variation(ProbVec{}, ProbVec::delta(2)), 1.0, 0.0);
    EXPECT_NEAR(total_variation(make_probvec({0.5, 0.5}), make_probvec({0.5, 0.25, 0.25})), 0.25, 1e-16);
}

TEST(TransitionKernel, EntriesAreProbabilities) {
    for (std::size_t dim : {40u, 2500u}) {
        const TransitionKernel k(0.37, dim);
        for (std::size_t col : {dim / 3, dim}) {
            double sum = 0.0;
            for (std::size_t n = 0; n <= col; ++n) {
                const double r = k(n, col);
                ASSERT_GE(r, 0.0);
                ASSERT_LE(r, 1.0);
                sum += r;
            }
            EXPECT_NEAR(sum, 1.0, 1e-12);
        }
        EXPECT_EQ(k(3, 2), 0.0);
    }
}

TEST(Thin, GeometricToGeometricEntrywise) {
    const ProbVec q = thin(thermal_geometric(1.0, 1e-14), 0.5);
    const ProbVec ref = thermal_geometric(0.5, 1e-14);
    for (std::size_t n = 0; n < std::max(q.size(), ref.size()); ++n) {
        EXPECT_NEAR(q.at_or_zero(n), ref.at_or_zero(n), 1e-9);
    }
}

TEST(Thin, CompositionEdgeCases) {
    const ProbVec p = sweep_distribution(2, 5, 12, DistributionShape::general);
    EXPECT_EQ(compose_check(p, 1.0, 0.4), 0.0);
    EXPECT_EQ(compose_check(p, 0.0, 0.0), 0.0);
}

TEST(Flow, EndpointsOfTheFlow) {
    const ProbVec p = sweep_distribution(2, 6, 12, DistributionShape::general);
    EXPECT_EQ(evolve(p, 0.0).p, p);
    EXPECT_LE(evolve(p, 40.0).entropy, 1e-6);
    EXPECT_EQ(derivative_initial(ProbVec{}), std::vector<double>{0.0});
    EXPECT_EQ(derivative_initial(ProbVec::delta(1)), (std::vector<double>{1.0, -1.0}));
}

TEST(EntropyProduction, UnitEnergyGeometric) {
    EXPECT_NEAR(entropy_production(thermal_geometric(1.0, 1e-14)), std::log(2.0), 1e-9);
}

TEST(MonteCarlo, BernoulliAndIdentity) {
    const std::size_t samples = 1'000'000;
    const ProbVec q = monte_carlo_thin(ProbVec::delta(1), 0.3, samples, 0);
    const double se = std::sqrt(0.3 * 0.7 / static_cast<double>(samples));
    EXPECT_NEAR(q[1], 0.3, 3 * se);
    EXPECT_NEAR(q[0], 0.7, 3 * se);
    const ProbVec p = make_probvec({0.2, 0.3, 0.5});
    EXPECT_LT(total_variation(monte_carlo_thin(p, 1.0, samples, 1), p), 3e-3);
}
