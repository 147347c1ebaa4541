// Copyright 2026 The cpforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>

#include "cpforge/catalog.hpp"
#include "cpforge/error.hpp"
#include "cpforge/search.hpp"

namespace cpforge {
namespace {

// Distance modulo wrapping and global negation, in units of pi.
double set_distance(const std::vector<double> &phases, const std::vector<double> &want_over_pi) {
    double plus = 0.0, minus = 0.0;
    for (std::size_t i = 0; i < phases.size(); ++i) {
        plus = std::max(plus, std::abs(phase_distance(phases[i], want_over_pi[i] * kPi)));
        minus = std::max(minus, std::abs(phase_distance(-phases[i], want_over_pi[i] * kPi)));
    }
    return std::min(plus, minus) / kPi;
}

bool contains(const std::vector<Solution> &sols, const std::vector<double> &want_over_pi, double tol) {
    for (const auto &s : sols) {
        if (s.params.phases.size() == want_over_pi.size() && set_distance(s.params.phases, want_over_pi) < tol) {
            return true;
        }
    }
    return false;
}

SearchConfig small(int restarts, std::uint64_t seed = 1) {
    SearchConfig cfg;
    cfg.restarts = restarts;
    cfg.seed = seed;
    return cfg;
}

TEST(Search, NelderMeadFindsQuadraticMinimum) {
    const auto f = [](const std::vector<double> &x) {
        return (x[0] - 1.0) * (x[0] - 1.0) + 10.0 * (x[1] + 2.0) * (x[1] + 2.0);
    };
    const SimplexResult r = nelder_mead(f, {0.0, 0.0}, 0.5, 5000, 1e-24);
    EXPECT_NEAR(r.x[0], 1.0, 1e-8);
    EXPECT_NEAR(r.x[1], -2.0, 1e-8);
    EXPECT_GT(r.iterations, 0);
}

TEST(Search, LevenbergMarquardtSolvesRosenbrock) {
    const auto r = [](const std::vector<double> &x) {
        return std::vector<double>{10.0 * (x[1] - x[0] * x[0]), 1.0 - x[0]};
    };
    for (bool scaled : {true, false}) {
        const SimplexResult s = levenberg_marquardt(r, {-1.2, 1.0}, 400, scaled);
        EXPECT_NEAR(s.x[0], 1.0, 1e-8);
        EXPECT_NEAR(s.x[1], 1.0, 1e-8);
    }
}

TEST(Search, LevenbergMarquardtNeverWorsens) {
    const auto r = [](const std::vector<double> &x) { return std::vector<double>{std::sin(5.0 * x[0]) + 2.0}; };
    const SimplexResult s = levenberg_marquardt(r, {0.3}, 50, true);
    EXPECT_LE(s.value, std::pow(std::sin(1.5) + 2.0, 2) + 1e-15);
}

TEST(Search, CanonicalizeAndEquivalence) {
    const FreeParams a{{0.5, -0.25}, {kTwoPi + 0.5}};
    const FreeParams c = canonicalize(a);
    EXPECT_NEAR(c.phases[1], kTwoPi - 0.25, 1e-15);
    EXPECT_NEAR(c.extra_areas[0], kTwoPi - 0.5, 1e-12);
    const FreeParams neg{{-0.5, 0.25}, {kTwoPi + 0.5}};
    EXPECT_TRUE(equivalent(a, neg, 1e-9));
    const FreeParams other{{0.5, 0.25}, {kTwoPi + 0.5}};
    EXPECT_FALSE(equivalent(a, other, 1e-9));
}

TEST(Search, WorkerThreadCount) {
    SearchConfig cfg;
    cfg.threads = 3;
    EXPECT_EQ(worker_threads(cfg), 3);
    cfg.threads = 0;
    EXPECT_GE(worker_threads(cfg), 1);
}

TEST(Search, RediscoversA3) {
    const auto sols = random_search({Family::AN, kPi, 1, 0}, {ObjectiveKind::NbSu2, kPi, 1, 0}, small(50));
    ASSERT_FALSE(sols.empty());
    EXPECT_TRUE(contains(sols, {1.0 / 3.0, 1.0}, 1e-6));
}

TEST(Search, RediscoversA5Modified) {
    const auto sols = random_search({Family::ANm, kPi, 2, 0}, {ObjectiveKind::NbModSu2, kPi, 2, 0}, small(200));
    EXPECT_TRUE(contains(sols, {0.8, 1.6, 0.0}, 1e-6) || contains(sols, {1.2, 0.4, 0.0}, 1e-6));
}

TEST(Search, RediscoversNbOne) {
    const double chi = closed_form_chi(ClosedForm::NB1, kPi) / kPi;
    const auto sols = random_search({Family::WN, kPi, 2, 0}, {ObjectiveKind::NbSu2, kPi, 2, 0}, small(100));
    EXPECT_TRUE(contains(sols, {0.0, chi, -chi}, 1e-6));
}

TEST(Search, ClosedFormTemplateSearch) {
    const double chi = closed_form_chi(ClosedForm::PB1, kPi) / kPi;
    const auto sols = random_search(ClosedForm::PB1, {ObjectiveKind::PbSu2, kPi, 2, 2}, small(40));
    EXPECT_TRUE(contains(sols, {0.0, chi, -chi, -chi, chi}, 1e-6));
    EXPECT_THROW(random_search(ClosedForm::PB1, {ObjectiveKind::PbSu2, kPi, 1, 1}, small(4)), Error);
}

TEST(Search, SolutionsAreDistinctAndReevaluate) {
    const FamilySpec spec{Family::ANm, kPi, 2, 0};
    const ObjectiveSpec obj{ObjectiveKind::NbModSu2, kPi, 2, 0};
    const auto sols = random_search(spec, obj, small(200));
    for (std::size_t i = 0; i < sols.size(); ++i) {
        EXPECT_TRUE(sols[i].converged);
        EXPECT_LE(sols[i].loss, 1e-18);
        EXPECT_NEAR(loss(instantiate(spec, sols[i].params), obj), sols[i].loss, 1e-14);
        for (std::size_t j = 0; j < i; ++j) {
            EXPECT_FALSE(equivalent(sols[i].params, sols[j].params, 1e-6));
        }
    }
}

TEST(Search, DeterministicForFixedSeed) {
    const FamilySpec spec{Family::AN, 0.5 * kPi, 1, 0};
    const ObjectiveSpec obj{ObjectiveKind::NbSu2, 0.5 * kPi, 1, 0};
    SearchConfig one = small(40, 99);
    one.threads = 1;
    SearchConfig four = one;
    four.threads = 4;
    const auto a = random_search(spec, obj, one);
    const auto b = random_search(spec, obj, four);
    const auto c = random_search(spec, obj, one);
    ASSERT_EQ(a.size(), b.size());
    ASSERT_EQ(a.size(), c.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].params.phases, b[i].params.phases);
        EXPECT_EQ(a[i].params.phases, c[i].params.phases);
        EXPECT_EQ(a[i].loss, c[i].loss);
    }
}

TEST(Search, IncompatibleSpecsRejected) {
    EXPECT_THROW(random_search({Family::AN, kPi, 1, 0}, {ObjectiveKind::NbSu2, 0.5 * kPi, 1, 0}, small(2)), Error);
    EXPECT_THROW(random_search({Family::AN, kPi, 1, 0}, {ObjectiveKind::NbSu2, kPi, 2, 0}, small(2)), Error);
    EXPECT_THROW(random_search({Family::AN, kPi, 1, 0}, {ObjectiveKind::NbSu2, kPi, 1, 0}, small(0)), Error);
}

TEST(Search, UnderParameterizedTemplateDoesNotConverge) {
    // Three free phases cannot cancel fifth-order terms.
    const FamilySpec spec{Family::AN, kPi, 2, 0};
    const ObjectiveSpec obj{ObjectiveKind::NbModSu2, kPi, 5, 0};
    const Solution s = refine({{0.3, 1.9, 4.0}, {}}, spec, obj, SearchConfig{});
    EXPECT_FALSE(s.converged);
    EXPECT_GT(s.loss, 1e-6);
}

TEST(Search, RefineKeepsExactSolutions) {
    const FamilySpec spec{Family::AN, kPi, 1, 0};
    const ObjectiveSpec obj{ObjectiveKind::NbSu2, kPi, 1, 0};
    const FreeParams exact{{kPi / 3, kPi}, {}};
    const Solution s = refine(exact, spec, obj, SearchConfig{});
    EXPECT_TRUE(s.converged);
    EXPECT_LT(s.loss, 1e-20);
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_NEAR(s.params.phases[i], exact.phases[i], 1e-12);
    }
}

TEST(Search, RefineHadamardA7) {
    const FamilySpec spec{Family::AN, 0.5 * kPi, 2, 0};
    const ObjectiveSpec obj{ObjectiveKind::NbSu2, 0.5 * kPi, 2, 0};
    const FreeParams printed{{1.0 * kPi, 0.2954 * kPi, 0.8230 * kPi, 0.0}, {}};
    const double start = loss(instantiate(spec, printed), obj);
    const Solution s = refine(printed, spec, obj, SearchConfig{});
    EXPECT_TRUE(s.converged);
    EXPECT_LT(s.loss, 1e-18);
    EXPECT_LE(s.loss, start);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_LT(std::abs(phase_distance(s.params.phases[i], printed.phases[i])), 5e-4 * kPi);
    }
}

TEST(Search, RefineNeverIncreasesLoss) {
    const FamilySpec spec{Family::PN, kPi, 2, 2};
    const ObjectiveSpec obj{ObjectiveKind::PbReg, kPi, 2, 2};
    for (double shift : {0.0, 0.3, 1.7}) {
        const FreeParams start{{shift, 1.0, 2.0, 3.0, 4.0}, {}};
        const double before = loss(instantiate(spec, start), obj);
        SearchConfig cfg;
        cfg.max_iters_local = 200;
        cfg.polish_iters = 20;
        EXPECT_LE(refine(start, spec, obj, cfg).loss, before);
    }
}

}  // namespace
}  // namespace cpforge
