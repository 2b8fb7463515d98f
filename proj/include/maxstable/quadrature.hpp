// Copyright 2026 The maxstable Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "maxstable/errors.hpp"

namespace maxstable {

inline constexpr int kMaxSubdivisions = 10000;

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    int subdivisions = 0;
};

namespace detail {

struct Segment {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

// 21-point Kronrod rule with the embedded 10-point Gauss rule; error estimate
// follows the QUADPACK heuristic.
template <class F>
Segment kronrod21(F& f, double a, double b) {
    using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
    using Gauss = boost::math::quadrature::gauss<double, 10>;
    const auto& x = Kronrod::abscissa();
    const auto& wk = Kronrod::weights();
    const auto& wg = Gauss::weights();

    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    std::array<double, 21> fv{};
    fv[0] = f(center);
    for (std::size_t i = 1; i < x.size(); ++i) {
        fv[2 * i - 1] = f(center - half * x[i]);
        fv[2 * i] = f(center + half * x[i]);
    }

    double kronrod = wk[0] * fv[0];
    double gauss = 0.0;
    double abs_sum = std::abs(kronrod);
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double pair = fv[2 * i - 1] + fv[2 * i];
        kronrod += wk[i] * pair;
        abs_sum += wk[i] * (std::abs(fv[2 * i - 1]) + std::abs(fv[2 * i]));
        if (i % 2 == 1) gauss += wg[i / 2] * pair;
    }
    const double mean = 0.5 * kronrod;
    double asc = wk[0] * std::abs(fv[0] - mean);
    for (std::size_t i = 1; i < x.size(); ++i) {
        asc += wk[i] * (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean));
    }

    const double value = kronrod * half;
    double error = std::abs((kronrod - gauss) * half);
    asc *= std::abs(half);
    abs_sum *= std::abs(half);
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (asc != 0.0 && error != 0.0) {
        error = asc * std::min(1.0, std::pow(200.0 * error / asc, 1.5));
    }
    if (abs_sum > std::numeric_limits<double>::min() / (50.0 * eps)) {
        error = std::max(50.0 * eps * abs_sum, error);
    }
    return {a, b, value, error};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration of `f` over [cuts.front(),
/// cuts.back()], starting from the sub-intervals delimited by `cuts`.
/// Refines the worst segment until the summed error estimate is below
/// `abs_tol`; throws NumericFailure after `max_subdivisions` bisections.
template <class F>
QuadratureResult integrate(F&& f, std::span<const double> cuts, double abs_tol,
                           int max_subdivisions = kMaxSubdivisions) {
    if (cuts.size() < 2) throw DomainError("integrate: need at least two cut points");

    std::priority_queue<detail::Segment> heap;
    double total_error = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (!(cuts[i] < cuts[i + 1])) continue;
        auto seg = detail::kronrod21(f, cuts[i], cuts[i + 1]);
        total_error += seg.error;
        heap.push(seg);
    }

    std::vector<detail::Segment> frozen;  // too narrow to split further
    int subdivisions = 0;
    while (total_error > abs_tol && !heap.empty()) {
        if (subdivisions >= max_subdivisions) break;
        const auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(worst.a < mid && mid < worst.b)) {
            frozen.push_back(worst);
            continue;
        }
        const auto left = detail::kronrod21(f, worst.a, mid);
        const auto right = detail::kronrod21(f, mid, worst.b);
        heap.push(left);
        heap.push(right);
        ++subdivisions;

        // Recompute from scratch now and then to stop the running sum drifting.
        if (subdivisions % 64 == 0) {
            total_error = 0.0;
            auto copy = heap;
            while (!copy.empty()) {
                total_error += copy.top().error;
                copy.pop();
            }
            for (const auto& s : frozen) total_error += s.error;
        } else {
            total_error += left.error + right.error - worst.error;
        }
    }

    QuadratureResult result;
    result.subdivisions = subdivisions;
    std::vector<detail::Segment> all(frozen);
    while (!heap.empty()) {
        all.push_back(heap.top());
        heap.pop();
    }
    std::sort(all.begin(), all.end(),
              [](const auto& l, const auto& r) { return l.a < r.a; });
    for (const auto& s : all) {
        result.value += s.value;
        result.abs_error += s.error;
    }
    if (!(result.abs_error <= abs_tol)) {
        throw NumericFailure("adaptive quadrature did not converge",
                             result.abs_error);
    }
    return result;
}

/// Integral of a bounded, non-negative, eventually decaying `g` over
/// [lower, inf). Works in v = log(s), which turns power-law tails into
/// exponentially decaying ones. `scale` locates the bulk of the mass and
/// `breakpoints` lists points in s where g jumps or has a kink.
template <class G>
QuadratureResult integrate_tail(G&& g, double lower, double scale,
                                std::span<const double> breakpoints,
                                double abs_tol) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw DomainError("integrate_tail: scale must be positive and finite");
    }
    constexpr double kLowerCut = 46.0;  // e^-46 ~ 1e-20 relative to scale
    constexpr double kMaxLog = 700.0;

    auto h = [&g](double v) {
        const double s = std::exp(v);
        const double value = g(s);
        return value == 0.0 ? 0.0 : value * s;
    };

    const double v_lo = lower > 0.0 ? std::log(lower) : std::log(scale) - kLowerCut;

    // Walk the upper limit out until the remaining mass is negligible. The
    // remainder is estimated from the local exponential decay rate in v.
    double v_hi = std::max(v_lo, std::log(scale)) + 2.0;
    for (;;) {
        const double here = h(v_hi);
        if (here == 0.0) break;
        const double before = h(v_hi - 1.0);
        if (before > here) {
            const double rate = std::log(before / here);
            if (here / rate <= 0.01 * abs_tol) break;
        }
        if (v_hi >= kMaxLog) {
            throw NumericFailure("integrate_tail: integrand decays too slowly", here);
        }
        v_hi = std::min(kMaxLog, v_hi + 2.0);
    }

    std::vector<double> cuts{v_lo};
    for (double bp : breakpoints) {
        if (bp > 0.0 && std::isfinite(bp)) {
            const double v = std::log(bp);
            if (v > v_lo && v < v_hi) cuts.push_back(v);
        }
    }
    cuts.push_back(v_hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    return integrate(h, cuts, abs_tol);
}

}  // namespace maxstable
