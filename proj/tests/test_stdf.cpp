// Copyright 2026 The maxstable Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "maxstable/stdf.hpp"
#include "oracles.hpp"

using namespace maxstable;

namespace {

const double kLn2 = std::log(2.0);

double sum_of(const std::vector<double>& t) { return std::accumulate(t.begin(), t.end(), 0.0); }
double max_of(const std::vector<double>& t) { return t.empty() ? 0.0 : *std::max_element(t.begin(), t.end()); }

const StdfEvaluator kIndependence = [](std::span<const double> t) {
    return std::accumulate(t.begin(), t.end(), 0.0);
};
const StdfEvaluator kComonotone = [](std::span<const double> t) {
    return t.empty() ? 0.0 : *std::max_element(t.begin(), t.end());
};

}  // namespace

TEST(StdfExtremal, Examples) {
    const std::vector<double> e1{1, 0, 0};
    for (const auto& f : {UnitMeanCdf::dirac1(), UnitMeanCdf::frechet(0.5), UnitMeanCdf::two_point(kLn2),
                          UnitMeanCdf::unit_exponential()}) {
        EXPECT_NEAR(stdf_extremal(f, e1), 1.0, 1e-9);
    }
    const std::vector<double> t11{1, 1};
    EXPECT_NEAR(stdf_extremal(UnitMeanCdf::frechet(0.5), t11), std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(stdf_extremal_quadrature(UnitMeanCdf::frechet(0.5), t11), std::sqrt(2.0), 1e-7);
    EXPECT_NEAR(stdf_extremal(UnitMeanCdf::two_point(kLn2), std::vector<double>{1, 2}), 2.5, 1e-14);
    EXPECT_NEAR(stdf_extremal(UnitMeanCdf::unit_exponential(), t11), 1.5, 1e-9);
    EXPECT_EQ(stdf_extremal(UnitMeanCdf::unit_exponential(), std::vector<double>{0, 0}), 0.0);
    EXPECT_EQ(stdf_extremal(UnitMeanCdf::frechet(0.5), std::vector<double>{}), 0.0);
}

TEST(StdfExtremal, RejectsNegativeWeights) {
    EXPECT_THROW(stdf_extremal(UnitMeanCdf::dirac1(), std::vector<double>{1.0, -1.0}), DomainError);
}

TEST(StdfExtremal, ClosedFormsMatchOracles) {
    gen::Gen g(21);
    for (int i = 0; i < 50; ++i) {
        const auto t = g.sparse_weights(1 + g.index(7));
        const double theta = g.uniform(0.1, 3.0);
        const double alpha = g.uniform(0.1, 0.9);
        EXPECT_NEAR(stdf_extremal(UnitMeanCdf::two_point(theta), t), oracle::two_point(t, theta),
                    1e-12 * std::max(1.0, sum_of(t)));
        EXPECT_NEAR(stdf_extremal(UnitMeanCdf::frechet(alpha), t), oracle::logistic(t, alpha),
                    1e-12 * std::max(1.0, sum_of(t)));
        EXPECT_NEAR(stdf_extremal(UnitMeanCdf::unit_exponential(), t), oracle::unit_exponential(t),
                    1e-8 * std::max(1.0, sum_of(t)));
        EXPECT_EQ(stdf_extremal(UnitMeanCdf::dirac1(), t), max_of(t));
    }
}

TEST(StdfExtremal, DiscreteMatchesStepIntegral) {
    gen::Gen g(22);
    for (int i = 0; i < 30; ++i) {
        const auto f = g.discrete();
        const auto t = g.sparse_weights(1 + g.index(5));
        std::vector<double> points;
        for (double v : f.breakpoints()) {
            for (double x : t) points.push_back(v * x);
        }
        const double exact = oracle::step_integral(points, [&](double s) {
            double prod = 1.0;
            for (double x : t) {
                if (x > 0.0) prod *= f.cdf(s / x);
            }
            return 1.0 - prod;
        });
        EXPECT_NEAR(stdf_extremal(f, t), exact, 1e-12 * std::max(1.0, sum_of(t)));
    }
}

TEST(StdfExtremal, QuadratureAgreesWithClosedForms) {
    gen::Gen g(23);
    const std::vector<UnitMeanCdf> fams{UnitMeanCdf::frechet(0.3), UnitMeanCdf::frechet(0.7),
                                        UnitMeanCdf::two_point(0.9), UnitMeanCdf::dirac1(),
                                        UnitMeanCdf::unit_exponential()};
    for (const auto& f : fams) {
        for (int i = 0; i < 50; ++i) {
            const auto t = g.weights(1 + g.index(6));
            EXPECT_NEAR(stdf_extremal_quadrature(f, t), stdf_extremal(f, t), 1e-7);
        }
    }
}

TEST(StdfProperties, HomogeneityBoundsSymmetryMargins) {
    gen::Gen g(24);
    for (int i = 0; i < 40; ++i) {
        const auto model = g.model();
        const auto t = g.sparse_weights(1 + g.index(8));
        const double l = stdf_canonical(model, t);
        const double tol = 1e-7 * std::max(1.0, l);
        EXPECT_GE(l, max_of(t) - tol);
        EXPECT_LE(l, sum_of(t) + tol);
        for (double lambda : {0.1, 1.0, 7.3}) {
            std::vector<double> scaled = t;
            for (auto& x : scaled) x *= lambda;
            EXPECT_NEAR(stdf_canonical(model, scaled), lambda * l, 1e-7 * lambda * std::max(1.0, l));
        }
        EXPECT_NEAR(stdf_canonical(model, g.permutation_of(t)), l, 1e-12 * std::max(1.0, l));
        std::vector<double> padded = t;
        padded.push_back(0.0);
        EXPECT_NEAR(stdf_canonical(model, padded), l, 1e-12 * std::max(1.0, l));
    }
}

TEST(StdfCanonical, Examples) {
    EXPECT_EQ(stdf_canonical(CanonicalModel::independence(), std::vector<double>{2, 3}), 5.0);
    const CanonicalModel half(0.5, MixingMeasure::dirac(UnitMeanCdf::dirac1()));
    EXPECT_NEAR(stdf_canonical(half, std::vector<double>{1, 1}), 1.5, 1e-15);
    const CanonicalModel logistic(0.0, MixingMeasure::dirac(UnitMeanCdf::frechet(0.5)));
    EXPECT_NEAR(stdf_canonical(logistic, std::vector<double>{1, 1, 1, 1}), 2.0, 1e-14);
}

TEST(StdfCanonical, NormalizationForRandomModels) {
    gen::Gen g(25);
    for (int i = 0; i < 30; ++i) {
        EXPECT_NEAR(stdf_canonical(g.model(), std::vector<double>{1.0, 0.0, 0.0}), 1.0, 1e-9);
    }
}

TEST(Levy, BernsteinExamples) {
    const LevySpec mo(0.0, {{kLn2, 2.0}});
    EXPECT_NEAR(bernstein_psi(mo, 1.0), 1.0, 1e-15);
    EXPECT_EQ(bernstein_psi(mo, 0.0), 0.0);
    const LevySpec drift(1.0, {});
    for (double x : {0.0, 0.5, 3.0}) EXPECT_EQ(bernstein_psi(drift, x), x);
    EXPECT_NEAR(bernstein_psi(LevySpec(0.25, {{kLn2, 1.5}}), 2.0), 1.625, 1e-15);
    const LevySpec killed(0.0, {{kInf, 0.7}});
    EXPECT_EQ(bernstein_psi(killed, 0.0), 0.0);
    EXPECT_EQ(bernstein_psi(killed, 1e-9), 0.7);
}

TEST(Levy, BernsteinConcaveNonDecreasing) {
    const LevySpec s(0.1, {{0.3, 1.0}, {2.0, 0.4}, {kInf, 0.2}});
    double prev_value = 0.0;
    double prev_slope = kInf;
    for (int i = 1; i <= 200; ++i) {
        const double x = 0.05 * i;
        const double v = bernstein_psi(s, x);
        const double slope = (v - prev_value) / 0.05;
        EXPECT_GE(v, prev_value);
        if (i > 1) {
            EXPECT_LE(slope, prev_slope + 1e-12);
        }
        prev_value = v;
        prev_slope = slope;
    }
}

TEST(Levy, Examples) {
    EXPECT_NEAR(stdf_levy(LevySpec(1.0, {}), std::vector<double>{1, 1}), 2.0, 1e-15);
    const LevySpec mo(0.0, {{kLn2, 2.0}});
    EXPECT_NEAR(stdf_levy(mo, std::vector<double>{1, 1}), 1.5, 1e-15);
    EXPECT_NEAR(stdf_levy(mo, std::vector<double>{1, 2}), 2.5, 1e-15);
}

TEST(Levy, BridgeToCanonicalModel) {
    gen::Gen g(26);
    for (int i = 0; i < 50; ++i) {
        const double b = g.coin() ? 0.0 : g.uniform(0.0, 0.8);
        const double theta = g.uniform(0.1, 3.0);
        const LevySpec spec(b, {{theta, (1.0 - b) / -std::expm1(-theta)}});
        const auto model = spec.to_canonical();
        const auto t = g.sparse_weights(1 + g.index(6));
        EXPECT_NEAR(stdf_levy(spec, t), stdf_canonical(model, t), 1e-10);
    }
}

TEST(Levy, InfiniteJumpBecomesComonotoneAtom) {
    const LevySpec spec(0.5, {{kInf, 0.5}});
    const auto model = spec.to_canonical();
    EXPECT_EQ(model.mu()->cdf(0), UnitMeanCdf::dirac1());
    const std::vector<double> t{0.5, 2.0, 1.0};
    EXPECT_NEAR(stdf_levy(spec, t), stdf_canonical(model, t), 1e-14);
}

TEST(Copula, Examples) {
    gen::Gen g(27);
    for (int i = 0; i < 10; ++i) {
        EXPECT_NEAR(copula(g.model(), std::vector<double>{0.5, 1.0}), 0.5, 1e-9);
    }
    const CanonicalModel logistic(0.0, MixingMeasure::dirac(UnitMeanCdf::frechet(0.5)));
    const double e1 = std::exp(-1.0);
    EXPECT_NEAR(copula(logistic, std::vector<double>{e1, e1}), std::exp(-std::sqrt(2.0)), 1e-12);
    EXPECT_NEAR(copula(CanonicalModel::independence(), std::vector<double>{0.3, 0.7}), 0.21, 1e-15);
    EXPECT_THROW(copula(logistic, std::vector<double>{0.0, 0.5}), DomainError);
}

TEST(Copula, MaxStability) {
    gen::Gen g(28);
    for (int i = 0; i < 20; ++i) {
        const auto model = g.model();
        std::vector<double> u(1 + g.index(4));
        for (auto& x : u) x = g.uniform(0.05, 1.0);
        const double c = copula(model, u);
        for (double s : {2.0, 5.0}) {
            std::vector<double> us = u;
            for (auto& x : us) x = std::pow(x, s);
            EXPECT_NEAR(std::pow(copula(model, us), 1.0 / s), c, 1e-9);
        }
    }
}

TEST(StableTransform, Examples) {
    const std::vector<double> t11{1, 1};
    EXPECT_NEAR(stable_transform(kIndependence, 0.5, t11), std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(stable_transform(kComonotone, 0.3, std::vector<double>{1, 0, 0}), 1.0, 1e-15);
    const auto once = make_stable_transform(kIndependence, 0.5);
    EXPECT_NEAR(stable_transform(once, 0.5, t11), std::pow(2.0, 0.25), 1e-12);
    EXPECT_NEAR(stable_transform(once, 0.5, t11), stable_transform(kIndependence, 0.25, t11), 1e-12);
    EXPECT_THROW(stable_transform(kIndependence, 1.0, t11), DomainError);
}

TEST(StableTransform, StaysAStdf) {
    gen::Gen g(29);
    for (int i = 0; i < 20; ++i) {
        const auto l = make_stable_transform(make_evaluator(g.model()), g.uniform(0.1, 0.95));
        const auto t = g.weights(1 + g.index(5));
        const double v = l(t);
        EXPECT_GE(v, max_of(t) - 1e-7);
        EXPECT_LE(v, sum_of(t) + 1e-7);
        EXPECT_NEAR(l(std::vector<double>{1.0, 0.0}), 1.0, 1e-9);
    }
}

TEST(InclusionExclusion, Examples) {
    EXPECT_NEAR(inclusion_exclusion(kComonotone, std::vector<double>{2, 3}), 3.0, 1e-14);
    EXPECT_NEAR(inclusion_exclusion(kIndependence, std::vector<double>{1, 1}), 1.5, 1e-15);
    const auto logistic = make_stable_transform(kIndependence, 0.5);
    EXPECT_NEAR(inclusion_exclusion(logistic, std::vector<double>{1, 1}), 2.0 - std::pow(2.0, -0.5), 1e-12);
}

TEST(InclusionExclusion, ComonotoneFixpointAndBounds) {
    gen::Gen g(30);
    for (int i = 0; i < 30; ++i) {
        const auto t = g.sparse_weights(1 + g.index(8));
        EXPECT_NEAR(inclusion_exclusion(kComonotone, t), max_of(t), 1e-9 * std::max(1.0, sum_of(t)));
        const auto l = make_evaluator(g.model());
        const double v = inclusion_exclusion(l, t);
        EXPECT_GE(v, max_of(t) - 1e-8);
        EXPECT_LE(v, sum_of(t) + 1e-8);
    }
}

TEST(InclusionExclusion, CapacityCap) {
    EXPECT_THROW(inclusion_exclusion(kIndependence, std::vector<double>(21, 1.0)), CapacityError);
    std::vector<double> padded(20, 1.0);
    padded.insert(padded.end(), 5, 0.0);
    EXPECT_NO_THROW(inclusion_exclusion(kComonotone, padded));
}

TEST(PairwiseL2, Examples) {
    EXPECT_NEAR(pairwise_l2_identity(UnitMeanCdf::dirac1()), 1.0, 1e-15);
    EXPECT_NEAR(pairwise_l2_identity(UnitMeanCdf::unit_exponential()), 1.5, 1e-9);
    EXPECT_NEAR(pairwise_l2_identity(UnitMeanCdf::frechet(0.5)), std::sqrt(2.0), 1e-9);
}

TEST(PairwiseL2, MatchesBivariateValue) {
    gen::Gen g(31);
    for (int i = 0; i < 40; ++i) {
        const auto f = g.family();
        const double v = pairwise_l2_identity(f);
        EXPECT_NEAR(v, stdf_extremal(f, std::vector<double>{1, 1}), 1e-8);
        EXPECT_LT(v, 2.0);
    }
}

TEST(Drift, Examples) {
    for (std::size_t n : {2u, 10u, 1000u}) EXPECT_EQ(estimate_drift(CanonicalModel::independence(), n), 1.0);
    const CanonicalModel logistic(0.0, MixingMeasure::dirac(UnitMeanCdf::frechet(0.5)));
    EXPECT_LE(estimate_drift(logistic, 10000), 0.005);
    const CanonicalModel mixed(0.4, MixingMeasure::dirac(UnitMeanCdf::frechet(0.5)));
    EXPECT_NEAR(estimate_drift(mixed, 10000), 0.4 + 0.6 * (std::sqrt(10001.0) - 100.0), 1e-9);
    EXPECT_THROW(estimate_drift(mixed, 1), DomainError);
}

TEST(Drift, DifferencesDecreaseAndStayAboveDrift) {
    gen::Gen g(32);
    for (int i = 0; i < 10; ++i) {
        const auto model = g.model();
        const auto l = make_evaluator(model);
        double prev = kInf;
        std::vector<double> ones;
        double l_prev = 0.0;
        for (std::size_t n = 1; n <= 40; ++n) {
            ones.push_back(1.0);
            const double l_n = l(ones);
            const double diff = l_n - l_prev;
            EXPECT_LE(diff, prev + 1e-9);
            EXPECT_GE(diff, model.b() - 1e-9);
            prev = diff;
            l_prev = l_n;
        }
    }
}

TEST(ThreeMargin, Feasibility) {
    EXPECT_TRUE(check_3margin_ciid(1, 1, 1).feasible);
    EXPECT_FALSE(check_3margin_ciid(1, 2, 1).feasible);
    EXPECT_TRUE(check_3margin_ciid(2, 2, 2).feasible);
    EXPECT_NEAR(check_3margin_ciid(1, 1, 1).l3(std::vector<double>{1, 1, 1}), 1.75, 1e-15);
    EXPECT_THROW(check_3margin_ciid(0, 1, 1), DomainError);
}

TEST(ThreeMargin, EvaluatorIsAStdf) {
    gen::Gen g(33);
    for (int i = 0; i < 50; ++i) {
        const auto check = check_3margin_ciid(g.uniform(0.1, 3), g.uniform(0.1, 3), g.uniform(0.1, 3));
        const auto t = g.sparse_weights(3);
        const double v = check.l3(t);
        EXPECT_GE(v, max_of(t) - 1e-12);
        EXPECT_LE(v, sum_of(t) + 1e-12);
        EXPECT_NEAR(check.l3(g.permutation_of(t)), v, 1e-12);
        std::vector<double> scaled = t;
        for (auto& x : scaled) x *= 7.3;
        EXPECT_NEAR(check.l3(scaled), 7.3 * v, 1e-12 * std::max(1.0, v));
    }
}
