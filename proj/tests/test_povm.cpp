// Copyright 2026 The qlocal Authors
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


#include "qlocal/povm.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qlocal/catalog.hpp"
#include "qlocal/error.hpp"

namespace qlocal {
namespace {

/// Three outcomes at 120 degrees in the plane perpendicular to `normal`,
/// starting from `first`.
std::vector<PovmElement> trine(const BlochVector &first, const BlochVector &normal) {
    std::vector<PovmElement> out;
    BlochVector second = normal.normalized().cross(first);
    for (int k = 0; k < 3; ++k) {
        const double t = 2.0 * std::numbers::pi * k / 3.0;
        out.push_back({2.0 / 3.0, std::cos(t) * first + std::sin(t) * second});
    }
    return out;
}

TEST(MeasurementProjectors, ComputationalBasis) {
    auto ps = measurement_projectors(LocalMeasurement{AxisAssignment::computational(2)}, 2);
    ASSERT_EQ(ps.size(), 4u);
    for (int x = 0; x < 4; ++x) {
        CMatrix expected = CMatrix::Zero(4, 4);
        expected(x, x) = 1.0;
        EXPECT_LT(max_abs(ps[static_cast<std::size_t>(x)] - expected), 1e-15);
    }
}

TEST(MeasurementProjectors, LmccWithZAxesMatchesComputational) {
    LmccTree t;
    t.nqubits = 2;
    t.order = {1, 2};
    t.nodes.assign(3, BlochVector::UnitZ());
    auto a = measurement_projectors(Measurement{t}, 2);
    auto b = measurement_projectors(LocalMeasurement{AxisAssignment::computational(2)}, 2);
    for (std::size_t x = 0; x < 4; ++x) {
        EXPECT_LT(max_abs(a[x] - b[x]), 1e-15);
    }
}

TEST(MeasurementProjectors, HadamardBasisIsOrthogonal) {
    auto ps = measurement_projectors(LocalMeasurement{AxisAssignment::uniform(2, BlochVector::UnitX())}, 2);
    auto ref = oracle::product_projectors({BlochVector::UnitX(), BlochVector::UnitX()});
    for (std::size_t x = 0; x < 4; ++x) {
        EXPECT_LT(max_abs(ps[x] - ref[x]), 1e-15);
        for (std::size_t y = 0; y < 4; ++y) {
            const double overlap = std::abs((ps[x] * ps[y]).trace());
            EXPECT_NEAR(overlap, x == y ? 1.0 : 0.0, 1e-15);
        }
    }
}

TEST(MeasurementProjectors, RandomLocalMatchesOracle) {
    std::mt19937_64 rng(41);
    for (int n = 1; n <= 4; ++n) {
        std::vector<BlochVector> axes;
        for (int j = 0; j < n; ++j) {
            axes.push_back(oracle::random_axis(rng));
        }
        auto ps = measurement_projectors(LocalMeasurement{AxisAssignment(axes)}, n);
        auto ref = oracle::product_projectors(axes);
        for (std::size_t x = 0; x < ps.size(); ++x) {
            EXPECT_LT(max_abs(ps[x] - ref[x]), 1e-14);
        }
    }
}

TEST(MeasurementProjectors, ExplicitIsValidated) {
    std::vector<CMatrix> incomplete{CMatrix::Identity(2, 2) * 0.5};
    EXPECT_THROW(measurement_projectors(ExplicitMeasurement{incomplete}, 1), Error);
    std::vector<CMatrix> negative{2.0 * CMatrix::Identity(2, 2), -1.0 * CMatrix::Identity(2, 2)};
    EXPECT_THROW(measurement_projectors(ExplicitMeasurement{negative}, 1), Error);
}

TEST(OutcomeProbabilities, GhzComputational) {
    auto p = outcome_probabilities(ghz_state(2), LocalMeasurement{AxisAssignment::computational(2)});
    EXPECT_NEAR(p[0], 0.5, 1e-15);
    EXPECT_NEAR(p[1], 0.0, 1e-15);
    EXPECT_NEAR(p[2], 0.0, 1e-15);
    EXPECT_NEAR(p[3], 0.5, 1e-15);
}

TEST(OutcomeProbabilities, GhzHadamardPattern) {
    const double l = 0.35;
    Model model = build_catalog_model("ghz", 2);
    auto p = outcome_probabilities(encoded_state(model, l), LocalMeasurement{AxisAssignment::uniform(2, BlochVector::UnitX())});
    // Even parity outcomes carry cos^2(l), odd ones sin^2(l), split evenly.
    EXPECT_NEAR(p[0], 0.5 * std::pow(std::cos(l), 2), 1e-14);
    EXPECT_NEAR(p[3], 0.5 * std::pow(std::cos(l), 2), 1e-14);
    EXPECT_NEAR(p[1], 0.5 * std::pow(std::sin(l), 2), 1e-14);
    EXPECT_NEAR(p[2], 0.5 * std::pow(std::sin(l), 2), 1e-14);
}

TEST(OutcomeProbabilities, SumToOne) {
    std::mt19937_64 rng(42);
    for (int n = 1; n <= 4; ++n) {
        StateVector s(n, oracle::random_state(rng, n));
        std::vector<BlochVector> axes;
        for (int j = 0; j < n; ++j) {
            axes.push_back(oracle::random_axis(rng));
        }
        double total = 0.0;
        for (double v : outcome_probabilities(s, LocalMeasurement{AxisAssignment(axes)})) {
            EXPECT_GE(v, 0.0);
            total += v;
        }
        EXPECT_NEAR(total, 1.0, 1e-10);
    }
}

TEST(Cfi, GhzTwoQubitsHadamard) {
    Model model = build_catalog_model("ghz", 2);
    // p = cos^2(l)/2 twice and sin^2(l)/2 twice: CFI = 4 for every l.
    for (double l : {0.0, 0.3, 0.785398, 1.1}) {
        EXPECT_NEAR(cfi(model, LocalMeasurement{AxisAssignment::uniform(2, BlochVector::UnitX())}, l), 4.0, 1e-10);
    }
}

TEST(Cfi, GhzComputationalIsZero) {
    for (int n = 2; n <= 6; ++n) {
        EXPECT_NEAR(cfi(build_catalog_model("ghz", n), LocalMeasurement{AxisAssignment::computational(n)}, 0.4), 0.0,
                    1e-12);
    }
}

TEST(Cfi, MatchesProbabilityDifferences) {
    std::mt19937_64 rng(43);
    for (int i = 0; i < 10; ++i) {
        Model model = oracle::random_model(rng, 2);
        std::vector<BlochVector> axes{oracle::random_axis(rng), oracle::random_axis(rng)};
        auto state = [&](double l) { return encoded_state(model, l).amplitudes(); };
        const double expected = oracle::cfi_by_differences(state, oracle::product_projectors(axes), 0.3);
        EXPECT_NEAR(cfi(model, LocalMeasurement{AxisAssignment(axes)}, 0.3), expected, 1e-6);
    }
}

TEST(Cfi, ZeroProbabilityLimitTerm) {
    // At l = 0 the GHZ odd-parity outcomes in the x basis have p = 0; their
    // limit terms carry the whole Fisher information.
    Model model = build_catalog_model("ghz", 2);
    EXPECT_NEAR(cfi(model, LocalMeasurement{AxisAssignment::uniform(2, BlochVector::UnitX())}, 0.0), 4.0, 1e-12);
}

TEST(Cfi, W3ClosedFormMeasurementSaturates) {
    Model model = build_catalog_model("w3_xx");
    HocReport r = solve_planar_three_qubit(model, 0.4);
    ASSERT_TRUE(r.axes);
    EXPECT_NEAR(cfi(model, LocalMeasurement{*r.axes}, 0.4), qfi(model, 0.4), 1e-8);
}

TEST(Cfi, DataProcessingInequality) {
    std::mt19937_64 rng(44);
    for (int n = 1; n <= 4; ++n) {
        for (int i = 0; i < 10; ++i) {
            Model model = oracle::random_model(rng, n);
            std::vector<BlochVector> axes;
            for (int j = 0; j < n; ++j) {
                axes.push_back(oracle::random_axis(rng));
            }
            const double f = qfi(model, 0.2);
            EXPECT_LE(cfi(model, LocalMeasurement{AxisAssignment(axes)}, 0.2), f + 1e-8 * std::max(1.0, f));
        }
    }
}

TEST(Cfi, ExplicitMeasurementPath) {
    Model model = build_catalog_model("ghz", 2);
    auto ops = measurement_projectors(LocalMeasurement{AxisAssignment::uniform(2, BlochVector::UnitX())}, 2);
    EXPECT_NEAR(cfi(model, ExplicitMeasurement{ops}, 0.5), 4.0, 1e-10);
}

TEST(SaturationCheck, GhzExamples) {
    MMatrix m = m_matrix(build_catalog_model("ghz", 3), 0.2);
    auto good = saturation_check(m, LocalMeasurement{AxisAssignment::uniform(3, BlochVector::UnitX())});
    EXPECT_TRUE(good.saturates);
    auto bad = saturation_check(m, LocalMeasurement{AxisAssignment::computational(3)});
    EXPECT_FALSE(bad.saturates);
    EXPECT_NEAR(bad.residual, 3.0, 1e-12);
    // Dense oracle: max ||E M E||_max over the product projectors.
    double worst = 0.0;
    for (const CMatrix &e : oracle::product_projectors(std::vector<Eigen::Vector3d>(3, Eigen::Vector3d::UnitZ()))) {
        worst = std::max(worst, max_abs(e * m.matrix() * e));
    }
    EXPECT_NEAR(bad.residual, worst, 1e-12);
}

TEST(SaturationCheck, ZeroMatrix) {
    std::mt19937_64 rng(45);
    AxisAssignment a({oracle::random_axis(rng), oracle::random_axis(rng)});
    EXPECT_TRUE(saturation_check(MMatrix(CMatrix::Zero(4, 4)), LocalMeasurement{a}).saturates);
}

TEST(LocalPovm, ValidatesInvariants) {
    EXPECT_NO_THROW(LocalPovm({trine(BlochVector::UnitX(), BlochVector::UnitZ())}));
    std::vector<PovmElement> lopsided{{1.0, BlochVector::UnitX()}, {1.0, BlochVector::UnitY()}};
    EXPECT_THROW(LocalPovm({lopsided}), Error);
    std::vector<PovmElement> heavy{{1.5, BlochVector::UnitZ()}, {1.5, -BlochVector::UnitZ()}};
    EXPECT_THROW(LocalPovm({heavy}), Error);
    std::vector<PovmElement> zero_weight{{2.0, BlochVector::UnitZ()}, {0.0, -BlochVector::UnitZ()}};
    EXPECT_THROW(LocalPovm({zero_weight}), Error);
}

TEST(LocalPovm, ProjectorsAreComplete) {
    LocalPovm p({trine(BlochVector::UnitX(), BlochVector::UnitZ()), trine(BlochVector::UnitY(), BlochVector::UnitX())});
    auto ops = measurement_projectors(Measurement{p}, 2);
    EXPECT_EQ(ops.size(), 9u);
    CMatrix sum = CMatrix::Zero(4, 4);
    for (const auto &e : ops) {
        sum += e;
    }
    EXPECT_LT(max_abs(sum - CMatrix::Identity(4, 4)), 1e-10);
}

TEST(ReduceToProjective, TrinePreservesSaturation) {
    const int n = 3;
    Model model = build_catalog_model("ghz", n);
    MMatrix m = m_matrix(model, 0.3);
    std::vector<std::vector<PovmElement>> per_qubit(n, trine(BlochVector::UnitX(), BlochVector::UnitZ()));
    LocalPovm p(per_qubit);
    EXPECT_TRUE(saturation_check(m, Measurement{p}).saturates);
    LocalMeasurement lm = reduce_to_projective(p);
    EXPECT_TRUE(saturation_check(m, lm).saturates);
    EXPECT_NEAR(cfi(model, Measurement{p}, 0.3), n * n, 1e-9);
}

TEST(ReduceToProjective, ProjectiveInputKeepsAxes) {
    std::vector<PovmElement> proj{{1.0, BlochVector::UnitY()}, {1.0, -BlochVector::UnitY()}};
    LocalMeasurement lm = reduce_to_projective(LocalPovm({proj, proj}));
    EXPECT_EQ(lm.axes.axis(1), BlochVector::UnitY());
    EXPECT_EQ(lm.axes.axis(2), BlochVector::UnitY());
}

}  // namespace
}  // namespace qlocal
