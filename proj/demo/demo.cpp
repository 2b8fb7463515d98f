// Copyright 2026 The maxstable Authors
// SPDX-License-Identifier: Apache-2.0

// Builds a mixed model, evaluates its extremal coefficients, and checks a
// sampler against the closed form.

#include <cstdio>
#include <iostream>
#include <vector>

#include "maxstable/maxstable.hpp"

using namespace maxstable;

int main() {
    // 30% independence, the rest split between logistic and Marshall-Olkin atoms.
    const CanonicalModel model(
        0.3, MixingMeasure({{0.5, UnitMeanCdf::frechet(0.5)},
                            {0.5, UnitMeanCdf::two_point(0.6931471805599453)}}));

    for (std::size_t d : {1, 2, 5, 10, 100}) {
        const std::vector<double> ones(d, 1.0);
        std::printf("extremal coefficient d=%-3zu %.6f\n", d, stdf_canonical(model, ones));
    }
    std::printf("drift estimate (n=10^4)    %.6f\n", estimate_drift(model, 10000));

    const std::vector<double> u{0.3, 0.6, 0.9};
    std::printf("copula(0.3, 0.6, 0.9)      %.6f\n", copula(model, u));

    Rng rng = make_rng(kDefaultSeed, 0);
    const auto y = sample_minstable(model, 4, rng);
    std::printf("one draw                   %.4f %.4f %.4f %.4f\n", y[0], y[1], y[2], y[3]);

    const std::vector<double> t{0.5, 1.0, 0.25};
    McOptions opts;
    opts.workers = 2;
    const std::vector<CheckReport> reports{mc_survival_check(model, t, 20000, opts),
                                           mc_pickands_check(model, t, 20000, opts),
                                           mc_margin_check(model, 20000, opts)};
    write_reports_csv(std::cout, reports);
}
