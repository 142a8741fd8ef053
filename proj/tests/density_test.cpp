// Copyright 2026 The q3haar Authors
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

#include "q3haar/density.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "q3haar/random.hpp"

using namespace q3haar;

namespace {

struct Tuple {
    double t3, t4, t5, t6;
};

Tuple random_tuple(RandomStream& rng) {
    return {rng.uniform(0, kPi / 4), rng.uniform(0, kPi), rng.uniform(0, kPi / 2),
            rng.uniform(0, kPi)};
}

AngleSet14 random_angles(RandomStream& rng) {
    AngleSet14 a;
    for (std::size_t k = 0; k < 14; ++k) {
        a.theta[k] = rng.uniform(kRanges3q[k].lo, kRanges3q[k].hi);
    }
    return a;
}

}  // namespace

TEST(AlphaBeta, ZeroAngles) {
    const auto [a, b] = alpha_beta(0, 0, 0, 0);
    EXPECT_NEAR(std::abs(a[0] - cplx(1)), 0, 1e-15);
    EXPECT_NEAR(std::abs(a[1]), 0, 1e-15);
    EXPECT_NEAR(std::abs(b[0]), 0, 1e-15);
    EXPECT_NEAR(std::abs(b[1] - cplx(1)), 0, 1e-15);
}

TEST(AlphaBeta, NormalizedWithOverlapSin2Theta3) {
    RandomStream rng(41);
    for (int trial = 0; trial < 1000; ++trial) {
        const Tuple t = random_tuple(rng);
        const auto [a, b] = alpha_beta(t.t3, t.t4, t.t5, t.t6);
        EXPECT_NEAR(norm(a), 1, 1e-12);
        EXPECT_NEAR(norm(b), 1, 1e-12);
        EXPECT_NEAR(std::abs(inner(a, b) - cplx(std::sin(2 * t.t3))), 0, 1e-12);
    }
}

TEST(AlphaBeta, MatchesGateProduct) {
    // |alpha> = Z(t6) Y(t5) Z(t4) Y(t3)|0> and |beta> = Z(t6) Y(t5) Z(t4) X Y(t3)|0>,
    // both up to the common phase e^{-i(t4 + t6)}.
    RandomStream rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        const Tuple t = random_tuple(rng);
        const auto [a, b] = alpha_beta(t.t3, t.t4, t.t5, t.t6);
        auto tail = [&](Qubit v) {
            v = apply_rz(t.t4, v);
            v = apply_ry(t.t5, v);
            return apply_rz(t.t6, v);
        };
        const Qubit y3 = apply_ry(t.t3, Qubit{1.0, 0.0});
        const cplx ph = std::polar(1.0, -(t.t4 + t.t6));
        const Qubit ga = tail(y3);
        const Qubit gb = tail(Qubit{y3[1], y3[0]});
        for (int i = 0; i < 2; ++i) {
            EXPECT_NEAR(std::abs(ga[i] - ph * a[i]), 0, 1e-13);
            EXPECT_NEAR(std::abs(gb[i] - ph * b[i]), 0, 1e-13);
        }
    }
}

TEST(PhiTerms, ReductionAtZeroZAngles) {
    RandomStream rng(43);
    for (int trial = 0; trial < 100; ++trial) {
        const Tuple t = random_tuple(rng);
        const JointDensityTerms p = phi_terms(t.t3, 0, t.t5, 0);
        EXPECT_NEAR(p.cos2_phi1, std::pow(std::cos(2 * t.t5), 2), 1e-13);
        EXPECT_NEAR(p.cos_phi2, std::sin(2 * t.t3 - 2 * t.t5), 1e-13);
    }
}

TEST(PhiTerms, OverlapConsistency) {
    RandomStream rng(44);
    for (int trial = 0; trial < 10000; ++trial) {
        const Tuple t = random_tuple(rng);
        const JointDensityTerms p = phi_terms(t.t3, t.t4, t.t5, t.t6);
        const auto [a, b] = alpha_beta(t.t3, t.t4, t.t5, t.t6);
        const Qubit bbar = bit_flip(b);
        ASSERT_NEAR(p.cos2_phi1, std::norm(inner(a, bbar)), 1e-12);
        ASSERT_NEAR(std::abs(p.cos_phi2), std::abs(inner(b, bbar)), 1e-12);
        ASSERT_GE(p.sin2_phi1, -1e-15);
        ASSERT_LE(p.cos2_phi1, 1 + 1e-15);
    }
}

TEST(JointDensity, Zeros) {
    EXPECT_EQ(joint_density_3456(0.3, 1.0, 0.0, 2.0), 0.0);
    EXPECT_NEAR(joint_density_3456(kPi / 4, 1.0, 0.4, 2.0), 0.0, 1e-15);
    EXPECT_NEAR(joint_density_3456(kPi / 8, 0, kPi / 8, 0), 0.0, 1e-15);
}

TEST(JointDensity, BelowEnvelopeOnBox) {
    RandomStream rng(45);
    double worst = 0;
    for (int i = 0; i < 1'000'000; ++i) {
        const Tuple t = random_tuple(rng);
        worst = std::max(worst, joint_density_3456(t.t3, t.t4, t.t5, t.t6));
    }
    EXPECT_LE(worst, 0.85);
    EXPECT_GT(worst, 0.7);  // the bound is not loose by much
}

TEST(OneDimensional, Values) {
    EXPECT_EQ(density_theta1(0), 0.0);
    EXPECT_NEAR(density_theta1(kPi / 4), 0.0078125, 1e-16);
    EXPECT_NEAR(density_theta2(kPi / 8), 0.0625, 1e-16);
    EXPECT_NEAR(density_sin2(kPi / 4), 1.0, 1e-16);
    EXPECT_NEAR(density_cos2(0), 1.0, 1e-16);
}

TEST(OneDimensional, NormalizeToOne) {
    struct Law {
        double (*f)(double);
        double lo, hi;
    };
    for (const Law& law : {Law{density_theta1, 0, kPi / 2}, Law{density_theta2, 0, kPi / 4},
                           Law{density_sin2, 0, kPi / 2}, Law{density_cos2, -kPi / 4, kPi / 4}}) {
        const double c = normalization_constant(law.f, law.lo, law.hi);
        EXPECT_NEAR(c * integrate_1d(law.f, law.lo, law.hi), 1.0, 1e-9);
    }
    // Known integrals as a cross-check of the quadrature itself.
    EXPECT_NEAR(integrate_1d(density_sin2, 0, kPi / 2), 1.0, 1e-12);
    EXPECT_NEAR(integrate_1d(density_cos2, -kPi / 4, kPi / 4), 1.0, 1e-12);
}

TEST(TailFactors, Values) {
    AngleSet14 a;
    a(8) = kPi / 4;
    a(11) = kPi / 4;
    a(13) = 0;
    EXPECT_NEAR(density_tail_factors(a), 1.0, 1e-15);
    a(13) = kPi / 4;
    EXPECT_NEAR(density_tail_factors(a), 0.0, 1e-15);
}

TEST(TailFactors, IndependentOfUniformAngles) {
    RandomStream rng(46);
    for (int trial = 0; trial < 100; ++trial) {
        AngleSet14 a = random_angles(rng);
        const double ref = density_tail_factors(a);
        for (std::size_t k : {7u, 9u, 10u, 12u, 14u}) {
            a(k) = rng.uniform(0, kPi);
        }
        EXPECT_EQ(density_tail_factors(a), ref);
    }
}

TEST(Full14, Factorizes) {
    RandomStream rng(47);
    for (int trial = 0; trial < 1000; ++trial) {
        const AngleSet14 a = random_angles(rng);
        const double prod = density_theta1(a(1)) * density_theta2(a(2)) *
                            joint_density_3456(a(3), a(4), a(5), a(6)) * density_tail_factors(a);
        EXPECT_NEAR(density_full_14(a), prod, 1e-14);
        EXPECT_GE(density_full_14(a), 0.0);
        EXPECT_LE(density_full_14(a), 1.0);
    }
    AngleSet14 z = random_angles(rng);
    z(1) = 0;
    EXPECT_EQ(density_full_14(z), 0.0);
}

TEST(TwoQubit, Values) {
    AngleSet6 a;
    a(1) = kPi / 4;
    a(3) = 0.3;
    a(5) = 0.4;
    EXPECT_NEAR(density_2q(a), 0.0, 1e-16);
    a(1) = kPi / 8;
    a(3) = kPi / 4;
    a(5) = kPi / 4;
    a(2) = 0.9;
    a(4) = 0.1;
    a(6) = 2.0;
    EXPECT_NEAR(density_2q(a), std::sqrt(2.0) / 4, 1e-15);
}
