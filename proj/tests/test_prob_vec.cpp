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

#include <algorithm>
#include <cmath>

#include "thinlab/errors.hpp"
#include "thinlab/prob_vec.hpp"
#include "thinlab/random.hpp"

#include "oracles.hpp"

using namespace thinlab;

TEST(ProbVec, DefaultIsPointMassAtZero) {
    ProbVec p;
    ASSERT_EQ(p.size(), 1u);
    EXPECT_EQ(p[0], 1.0);
    EXPECT_EQ(shannon_entropy(p), 0.0);
}

TEST(ProbVec, DeltaPadsWithZeros) {
    const ProbVec d = ProbVec::delta(2, 4);
    EXPECT_EQ(d.vector(), (std::vector<double>{0, 0, 1, 0, 0}));
    EXPECT_EQ(ProbVec::delta(3).max_index(), 3u);
}

TEST(ProbVec, RejectsBadWeights) {
    EXPECT_THROW(make_probvec(std::vector<double>{}), DomainError);
    EXPECT_THROW(make_probvec({0.5, -0.1, 0.6}), DomainError);
    EXPECT_THROW(make_probvec({0.5, std::nan(""), 0.5}), DomainError);
    EXPECT_THROW(make_probvec({0.5, INFINITY}), DomainError);
}

TEST(ProbVec, NormalizationIsCheckedUnlessRequested) {
    EXPECT_THROW(make_probvec({0.5, 0.6}), NormalizationError);
    const ProbVec p = make_probvec({1.0, 1.0, 2.0}, Renormalize::yes);
    EXPECT_DOUBLE_EQ(p[2], 0.5);
    EXPECT_DOUBLE_EQ(p.correction(), 3.0);
    EXPECT_THROW(make_probvec({0.0, 0.0}, Renormalize::yes), DomainError);
    // drift inside tolerance is accepted untouched
    const ProbVec q = make_probvec({0.5, 0.5 + 1e-13});
    EXPECT_EQ(q.correction(), 0.0);
}

TEST(ProbVec, EntropyMatchesLongDoubleSum) {
    CounterRng rng(7, 0);
    for (int i = 0; i < 50; ++i) {
        const ProbVec p = random_distribution(rng, 25, DistributionShape::sparse);
        EXPECT_NEAR(shannon_entropy(p), static_cast<double>(oracle::entropy(p.vector())), 1e-14);
    }
    EXPECT_NEAR(shannon_entropy(make_probvec({0.25, 0.25, 0.25, 0.25})), std::log(4.0), 1e-15);
}

TEST(ProbVec, SupportProfile) {
    EXPECT_TRUE(support_profile(make_probvec({0.5, 0.5, 0.0, 0.0})).connected);
    EXPECT_EQ(support_profile(make_probvec({0.5, 0.5, 0.0, 0.0})).last_positive_index, 1u);
    EXPECT_FALSE(support_profile(make_probvec({0.5, 0.0, 0.5})).connected);
    EXPECT_FALSE(support_profile(ProbVec::delta(2)).connected);
    EXPECT_TRUE(support_profile(ProbVec{}).connected);
}

TEST(ProbVec, PassiveRearrangementSortsDescending) {
    const ProbVec p = make_probvec({0.1, 0.4, 0.2, 0.3});
    const ProbVec r = passive_rearrange(p);
    EXPECT_EQ(r.vector(), (std::vector<double>{0.4, 0.3, 0.2, 0.1}));
    EXPECT_TRUE(is_decreasing(r));
    EXPECT_FALSE(is_decreasing(p));
    EXPECT_DOUBLE_EQ(shannon_entropy(r), shannon_entropy(p));
}

TEST(ProbVec, MajorizationOrder) {
    const ProbVec delta = ProbVec{};
    const ProbVec u = make_probvec({0.25, 0.25, 0.25, 0.25});
    const ProbVec p = make_probvec({0.1, 0.6, 0.3});
    EXPECT_TRUE(majorizes(delta, u));
    EXPECT_TRUE(majorizes(p, u));
    EXPECT_FALSE(majorizes(u, p));
    EXPECT_TRUE(majorizes(p, p));
}

TEST(ProbVec, MajorizationImpliesEntropyOrder) {
    CounterRng rng(11, 0);
    int checked = 0;
    for (int i = 0; i < 400; ++i) {
        const ProbVec a = random_distribution(rng, 6, DistributionShape::general);
        const ProbVec b = random_distribution(rng, 6, DistributionShape::sparse);
        if (majorizes(a, b)) {
            EXPECT_LE(shannon_entropy(a), shannon_entropy(b) + 1e-12);
            ++checked;
        }
        if (majorizes(b, a)) {
            EXPECT_LE(shannon_entropy(b), shannon_entropy(a) + 1e-12);
            ++checked;
        }
    }
    EXPECT_GT(checked, 0);
}

TEST(ProbVec, TruncateRenormalize) {
    const ProbVec p = make_probvec({0.5, 0.25, 0.125, 0.125});
    const ProbVec t = truncate_renormalize(p, 1);
    EXPECT_NEAR(t[0], 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(t[1], 1.0 / 3.0, 1e-15);
    EXPECT_EQ(truncate_renormalize(p, 3), p);
    EXPECT_THROW(truncate_renormalize(p, 4), DomainError);
    EXPECT_THROW(truncate_renormalize(make_probvec({0.2, 0.8}), 0), DomainError);
}

TEST(CounterRng, StreamsAreReproducibleAndDistinct) {
    CounterRng a(42, 3);
    CounterRng b(42, 3);
    CounterRng c(42, 4);
    for (int i = 0; i < 100; ++i) {
        const auto x = a();
        EXPECT_EQ(x, b());
        EXPECT_NE(x, c());
    }
}

TEST(CounterRng, UniformInUnitInterval) {
    CounterRng rng(1, 1);
    double mean = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        mean += u;
    }
    EXPECT_NEAR(mean / 100000.0, 0.5, 0.01);
}

TEST(RandomDistribution, ShapesHaveTheirProperties) {
    for (std::uint64_t i = 0; i < 200; ++i) {
        const ProbVec g = sweep_distribution(5, i, 20, DistributionShape::general);
        EXPECT_EQ(g.max_index(), 20u);
        EXPECT_TRUE(support_profile(g).connected);
        EXPECT_TRUE(is_decreasing(sweep_distribution(5, i, 20, DistributionShape::passive)));
        const ProbVec s = sweep_distribution(5, i, 20, DistributionShape::sparse);
        EXPECT_GT(*std::max_element(s.begin(), s.end()), 0.0);
    }
    EXPECT_EQ(sweep_distribution(9, 17, 12, DistributionShape::general),
              sweep_distribution(9, 17, 12, DistributionShape::general));
}

TEST(ProbVec, SmallExamples) {
    EXPECT_EQ(make_probvec({1.0}), ProbVec{});
    EXPECT_NEAR(shannon_entropy(make_probvec({0.5, 0.5})), 0.693147180559945, 1e-14);
    EXPECT_EQ(passive_rearrange(make_probvec({0.2, 0.5, 0.3})).vector(), (std::vector<double>{0.5, 0.3, 0.2}));
    const ProbVec sorted = make_probvec({0.5, 0.3, 0.2});
    EXPECT_EQ(passive_rearrange(sorted), sorted);
    EXPECT_FALSE(majorizes(make_probvec({0.5, 0.5}), make_probvec({0.6, 0.4})));
    EXPECT_TRUE(majorizes(make_probvec({0.6, 0.4}), make_probvec({0.5, 0.5})));
    const ProbVec t = truncate_renormalize(make_probvec({0.5, 0.25, 0.25}), 1);
    EXPECT_NEAR(t[0], 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(t[1], 1.0 / 3.0, 1e-15);
}

TEST(ProbVec, TruncationLowersEntropyOfDecreasingInputs) {
    for (std::uint64_t i = 0; i < 1000; ++i) {
        CounterRng rng(21, i);
        const ProbVec p = random_distribution(rng, 1 + i % 25, DistributionShape::passive);
        const auto keep = static_cast<std::size_t>(rng.uniform() * static_cast<double>(p.max_index() + 1));
        EXPECT_LE(shannon_entropy(truncate_renormalize(p, keep)), shannon_entropy(p) + 1e-12) << i;
    }
}
