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
#include <random>

#include "cpforge/catalog.hpp"
#include "cpforge/error.hpp"
#include "cpforge/families.hpp"
#include "cpforge/objectives.hpp"
#include "oracle.hpp"

namespace cpforge {
namespace {

CompositeSequence single_pi() {
    CompositeSequence s;
    s.pulses = {Pulse(kPi, kTargetPhaseOffset)};
    return s;
}

// Loss rebuilt from the contour oracle, term by term.
double oracle_loss(const CompositeSequence &seq, const ObjectiveSpec &o) {
    const auto coeffs = [&](int row, int col, double c, int order) {
        return oracle::taylor([&](Complex e) { return oracle::chain(seq, e)[row][col]; }, c, order);
    };
    const auto trace = [&](double c, int order) {
        return oracle::taylor([&](Complex e) { return oracle::trace_fidelity(oracle::chain(seq, e), o.theta); }, c,
                              order);
    };
    const oracle::Mat u0 = oracle::chain(seq, 0.0);
    double total = std::norm(u0[0][0] - std::cos(0.5 * o.theta)) + std::norm(u0[0][1] - std::sin(0.5 * o.theta));
    auto add = [&](const std::vector<Complex> &c, int from, int to, double w = 1.0) {
        for (int k = from; k <= to; ++k) {
            total += w * std::norm(c[static_cast<std::size_t>(k)]);
        }
    };
    switch (o.kind) {
        case ObjectiveKind::NbSu2:
            for (double c : {-1.0, 1.0}) {
                add(coeffs(0, 0, c, o.n_s), 1, o.n_s);
                add(coeffs(0, 1, c, o.n_s), 1, o.n_s);
            }
            break;
        case ObjectiveKind::NbModSu2:
            for (double c : {-1.0, 1.0}) {
                add(coeffs(0, 1, c, 2 * o.n_s), 1, 2 * o.n_s);
            }
            break;
        case ObjectiveKind::PbSu2:
            add(coeffs(0, 0, 0.0, o.n_r), 1, o.n_r);
            add(coeffs(0, 1, 0.0, o.n_r), 1, o.n_r);
            for (double c : {-1.0, 1.0}) {
                add(coeffs(0, 0, c, o.n_s), 1, o.n_s);
                add(coeffs(0, 1, c, o.n_s), 1, o.n_s);
            }
            break;
        case ObjectiveKind::PbReg:
            for (double c : {0.0, -1.0, 1.0}) {
                add(trace(c, 2 * o.n_s), 1, 2 * o.n_s);
                add(coeffs(0, 0, c, 1), 1, 1, o.lambda);
                add(coeffs(0, 1, c, 1), 1, 1, o.lambda);
            }
            break;
        case ObjectiveKind::NbReg:
            for (double c : {-1.0, 1.0}) {
                add(trace(c, o.trace_order), 1, o.trace_order);
                add(coeffs(0, 0, c, 1), 1, 1, o.lambda);
                add(coeffs(0, 1, c, 1), 1, 1, o.lambda);
            }
            break;
    }
    return total;
}

TEST(Objectives, NamesRoundTrip) {
    for (auto k : {ObjectiveKind::NbSu2, ObjectiveKind::NbModSu2, ObjectiveKind::PbSu2, ObjectiveKind::PbReg,
                   ObjectiveKind::NbReg}) {
        EXPECT_EQ(parse_objective(to_string(k)), k);
    }
    EXPECT_FALSE(parse_objective("bb").has_value());
}

TEST(Objectives, ValidateRejectsBadSpecs) {
    EXPECT_THROW(validate(ObjectiveSpec{ObjectiveKind::NbSu2, kPi, 1, 1}), Error);
    EXPECT_THROW(validate(ObjectiveSpec{ObjectiveKind::PbSu2, kPi, 0, 1}), Error);
    EXPECT_THROW(validate(ObjectiveSpec{ObjectiveKind::PbReg, kPi, 2, 1}), Error);
    EXPECT_THROW(validate(ObjectiveSpec{ObjectiveKind::PbReg, kPi, 1, 1, 0.0}), Error);
    try {
        validate(ObjectiveSpec{ObjectiveKind::NbModSu2, 0.5 * kPi, 2, 0});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::UnsupportedTheta);
    }
}

TEST(Objectives, KindGuards) {
    const ObjectiveSpec nb{ObjectiveKind::NbSu2, kPi, 1, 0};
    EXPECT_THROW(loss_pb_su2(single_pi(), nb), Error);
    EXPECT_THROW(loss_nb_modified(single_pi(), nb), Error);
    EXPECT_NO_THROW(loss_nb_su2(single_pi(), nb));
}

TEST(Objectives, SinglePiPulseNarrowband) {
    EXPECT_NEAR(loss_nb_su2(single_pi(), {ObjectiveKind::NbSu2, kPi, 1, 0}), 0.5 * kPi * kPi, 1e-12);
    // Second-order U12 coefficients vanish at +-1, so the modified loss agrees.
    EXPECT_NEAR(loss_nb_modified(single_pi(), {ObjectiveKind::NbModSu2, kPi, 1, 0}), 0.5 * kPi * kPi, 1e-12);
}

TEST(Objectives, SinglePiPulseRegularized) {
    const ObjectiveSpec reg{ObjectiveKind::PbReg, kPi, 1, 1};
    const double v = loss_pb_reg(single_pi(), reg);
    EXPECT_GT(v, 1.0);
    EXPECT_NEAR(v, oracle_loss(single_pi(), reg), 1e-8);
}

TEST(Objectives, ExactA3) {
    const auto seq = instantiate({Family::AN, kPi, 1, 0}, {{kPi / 3, kPi}, {}});
    EXPECT_LT(loss_nb_su2(seq, {ObjectiveKind::NbSu2, kPi, 1, 0}), 1e-12);
    EXPECT_LT(loss_nb_modified(seq, {ObjectiveKind::NbModSu2, kPi, 1, 0}), 1e-12);
    const auto printed = instantiate({Family::AN, kPi, 1, 0}, {{0.3333 * kPi, kPi}, {}});
    EXPECT_LT(loss_nb_su2(printed, {ObjectiveKind::NbSu2, kPi, 1, 0}), 1e-6);
}

TEST(Objectives, ExactA5Modified) {
    const auto seq = instantiate({Family::ANm, kPi, 2, 0}, {{0.8 * kPi, 1.6 * kPi, 0.0}, {}});
    EXPECT_LT(loss_nb_modified(seq, {ObjectiveKind::NbModSu2, kPi, 2, 0}), 1e-12);
}

TEST(Objectives, DSevenTablePhases) {
    const auto &e = find_entry("D7a-X");
    EXPECT_LT(loss_pb_su2(e.sequence(), {ObjectiveKind::PbSu2, kPi, 2, 1}), 1e-5);
}

TEST(Objectives, PFiveTablePhases) {
    const auto &e = find_entry("P5-X");
    EXPECT_LT(loss_pb_reg(e.sequence(), {ObjectiveKind::PbReg, kPi, 2, 2}), 1e-5);
}

TEST(Objectives, TargetTermIsSharedAcrossNarrowbandKinds) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> ph(0.0, kTwoPi);
    for (int t = 0; t < 10; ++t) {
        const auto seq = instantiate({Family::ANm, kPi, 2, 0}, {{ph(rng), ph(rng), ph(rng)}, {}});
        const auto r1 = residuals(seq, {ObjectiveKind::NbSu2, kPi, 2, 0});
        const auto r2 = residuals(seq, {ObjectiveKind::NbModSu2, kPi, 2, 0});
        for (int i = 0; i < 4; ++i) {
            EXPECT_EQ(r1[static_cast<std::size_t>(i)], r2[static_cast<std::size_t>(i)]);
        }
        EXPECT_NEAR(target_error(seq, kPi), r1[0] * r1[0] + r1[1] * r1[1] + r1[2] * r1[2] + r1[3] * r1[3], 1e-15);
    }
}

TEST(Objectives, ResidualsSquareToLoss) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> ph(0.0, kTwoPi);
    const auto seq = instantiate({Family::PN, kPi, 2, 2}, {{ph(rng), ph(rng), ph(rng), ph(rng), ph(rng)}, {}});
    for (auto kind : {ObjectiveKind::PbSu2, ObjectiveKind::PbReg}) {
        const ObjectiveSpec o{kind, kPi, 2, 2, 0.7};
        double s = 0.0;
        for (double r : residuals(seq, o)) {
            s += r * r;
        }
        EXPECT_NEAR(s, loss(seq, o), 1e-12 * std::max(1.0, s));
    }
}

// 20 random sequences against the independent re-implementation.
TEST(Objectives, AgreeWithOracle) {
    std::mt19937_64 rng(20);
    std::uniform_real_distribution<double> ph(0.0, kTwoPi);
    for (int t = 0; t < 20; ++t) {
        const int ns = 1 + t % 3;
        std::vector<double> an(static_cast<std::size_t>(ns) + 2), pn(2 * static_cast<std::size_t>(ns) + 1),
            mod(static_cast<std::size_t>(ns) + 1);
        for (double &x : an) x = ph(rng);
        for (double &x : pn) x = ph(rng);
        for (double &x : mod) x = ph(rng);
        const auto an_seq = instantiate({Family::AN, 0.5 * kPi, ns, 0}, {an, {}});
        const auto mod_seq = instantiate({Family::ANm, kPi, ns, 0}, {mod, {}});
        const auto pn_seq = instantiate({Family::PN, 0.5 * kPi, ns, ns}, {pn, {}});
        const ObjectiveSpec specs[] = {
            {ObjectiveKind::NbSu2, 0.5 * kPi, ns, 0},
            {ObjectiveKind::NbModSu2, kPi, ns, 0},
            {ObjectiveKind::PbSu2, 0.5 * kPi, ns, ns},
            {ObjectiveKind::PbReg, 0.5 * kPi, ns, ns, 1.3},
            {ObjectiveKind::NbReg, 0.5 * kPi, ns, 0, 0.5, 2 * ns + 1},
        };
        const CompositeSequence *seqs[] = {&an_seq, &mod_seq, &pn_seq, &pn_seq, &an_seq};
        for (int k = 0; k < 5; ++k) {
            const double want = oracle_loss(*seqs[k], specs[k]);
            EXPECT_NEAR(loss(*seqs[k], specs[k]), want, 1e-8 * std::max(1.0, want)) << t << " kind " << k;
        }
    }
}

TEST(Objectives, PhaseNegationLeavesLossesUnchanged) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> ph(0.0, kTwoPi);
    for (int t = 0; t < 10; ++t) {
        std::vector<double> p(4);
        for (double &x : p) x = ph(rng);
        std::vector<double> q;
        for (double x : p) q.push_back(-x);
        const FamilySpec spec{Family::AN, 0.5 * kPi, 2, 0};
        const auto a = instantiate(spec, {p, {}});
        const auto b = instantiate(spec, {q, {}});
        const ObjectiveSpec nb{ObjectiveKind::NbSu2, 0.5 * kPi, 2, 0};
        const ObjectiveSpec reg{ObjectiveKind::NbReg, 0.5 * kPi, 2, 0, 1.0, 3};
        EXPECT_NEAR(loss(a, nb), loss(b, nb), 1e-10 * std::max(1.0, loss(a, nb)));
        EXPECT_NEAR(loss(a, reg), loss(b, reg), 1e-10 * std::max(1.0, loss(a, reg)));
    }
}

TEST(Objectives, PolishResidualsShareTheZeroSet) {
    // At an exact pari passu point both residual forms vanish.
    const auto sk1 = closed_form(ClosedForm::SK1, kPi);
    const ObjectiveSpec reg{ObjectiveKind::PbReg, kPi, 1, 1};
    double s = 0.0;
    for (double r : polish_residuals(sk1, reg)) {
        s += r * r;
    }
    EXPECT_LT(s, 1e-20);
    EXPECT_LT(loss(sk1, reg), 1e-20);
    // Away from it both are positive.
    CompositeSequence off = sk1;
    off.pulses[1] = Pulse(kTwoPi, off.pulses[1].phase() + 0.01);
    double t = 0.0;
    for (double r : polish_residuals(off, reg)) {
        t += r * r;
    }
    EXPECT_GT(t, 0.0);
    EXPECT_GT(loss(off, reg), 0.0);
}

TEST(Objectives, ConstraintsAreTaylorCoefficients) {
    const auto a3 = instantiate({Family::AN, kPi, 1, 0}, {{0.4, 2.0}, {}});
    const auto cs = constraints(a3, {ObjectiveKind::NbSu2, kPi, 1, 0});
    ASSERT_EQ(cs.size(), 4u);
    for (const auto &c : cs) {
        const int col = c.quantity == "U11" ? 0 : 1;
        const auto ref = oracle::taylor([&](Complex e) { return oracle::chain(a3, e)[0][col]; }, c.epsilon, 1);
        EXPECT_LT(std::abs(c.value - ref[1]), 1e-10) << c.quantity << " at " << c.epsilon;
        EXPECT_EQ(c.order, 1);
        EXPECT_EQ(c.weight, 1.0);
    }
    EXPECT_EQ(jet_order(ObjectiveSpec{ObjectiveKind::PbReg, kPi, 3, 3}), 6);
}

}  // namespace
}  // namespace cpforge
