// Copyright 2026 The maxstable Authors
// SPDX-License-Identifier: Apache-2.0

//! \file verify.hpp
//! Monte Carlo checks of the samplers against the analytic evaluators.
//!
//! Draws are generated in fixed blocks of kBlockSize, block i from its own
//! sub-stream of the seed, and reduced in block order. Reports are therefore
//! identical for any worker count.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "maxstable/distributions.hpp"
#include "maxstable/random.hpp"
#include "maxstable/samplers.hpp"
#include "maxstable/stdf.hpp"

namespace maxstable {

inline constexpr double kDefaultZThreshold = 4.0;

struct CheckReport {
    std::string name;
    double empirical = 0.0;
    double exact = 0.0;
    double std_error = 0.0;
    double z_score = 0.0;
    std::size_t n = 0;
    bool passed = false;
};

struct McOptions {
    std::uint64_t seed = kDefaultSeed;
    unsigned workers = 1;
    double z_threshold = kDefaultZThreshold;
    double tol = kDefaultSamplerTolerance;
};

enum class SurvivalSampler { minstable, conditional_iid };

/// n draws of `draw(rng)`, in block order.
template <class Draw>
std::vector<std::vector<double>> draw_batch(std::size_t n, std::uint64_t seed, unsigned workers,
                                            Draw&& draw) {
    std::vector<std::vector<double>> rows(n);
    run_blocks(block_count(n), workers, [&](std::size_t block) {
        Rng rng = make_rng(seed, block);
        const std::size_t end = std::min(n, (block + 1) * kBlockSize);
        for (std::size_t i = block * kBlockSize; i < end; ++i) rows[i] = draw(rng);
    });
    return rows;
}

namespace detail {

struct Moments {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t n = 0;

    void add(double x) {
        sum += x;
        sum_sq += x * x;
        ++n;
    }
    void merge(const Moments& o) {
        sum += o.sum;
        sum_sq += o.sum_sq;
        n += o.n;
    }
    double mean() const { return sum / static_cast<double>(n); }
    double variance() const {
        const double m = mean();
        return std::max(0.0, (sum_sq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1));
    }
};

// Per-block moments of `stat(rng)`, merged in block order.
template <class Stat>
Moments block_moments(std::size_t n, const McOptions& opts, Stat&& stat) {
    std::vector<Moments> parts(block_count(n));
    run_blocks(parts.size(), opts.workers, [&](std::size_t block) {
        Rng rng = make_rng(opts.seed, block);
        const std::size_t end = std::min(n, (block + 1) * kBlockSize);
        for (std::size_t i = block * kBlockSize; i < end; ++i) parts[block].add(stat(rng));
    });
    Moments total;
    for (const auto& p : parts) total.merge(p);
    return total;
}

inline std::string format_list(std::span<const double> t) {
    std::string out;
    char buf[32];
    for (std::size_t i = 0; i < t.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.6g", t[i]);
        if (i) out += ';';
        out += buf;
    }
    return out;
}

inline CheckReport finish_report(std::string name, double empirical, double exact, double se,
                                 std::size_t n, double threshold) {
    CheckReport r{std::move(name), empirical, exact, se, 0.0, n, false};
    if (se > 0.0) {
        r.z_score = (empirical - exact) / se;
    } else {
        const bool equal = std::abs(empirical - exact) <= 1e-12 * std::max(1.0, std::abs(exact));
        r.z_score = equal ? 0.0 : kInf;
    }
    r.passed = std::abs(r.z_score) <= threshold;
    return r;
}

inline void require_samples(std::size_t n) {
    if (n < 2) throw DomainError("Monte Carlo check: n must be >= 2");
}

}  // namespace detail

/// Empirical P(Y > t) against exp(-l(t)); SE uses the exact probability.
inline CheckReport mc_survival_check(const CanonicalModel& model, std::span<const double> t,
                                     std::size_t n, const McOptions& opts = {},
                                     SurvivalSampler sampler = SurvivalSampler::minstable) {
    detail::require_samples(n);
    validate_weights(t);
    const std::size_t d = std::max<std::size_t>(1, t.size());
    const std::vector<double> tv(t.begin(), t.end());
    const auto m = detail::block_moments(n, opts, [&](Rng& rng) {
        const auto y = sampler == SurvivalSampler::minstable
                           ? sample_minstable(model, d, rng, opts.tol)
                           : sample_conditional_iid(model, d, rng, opts.tol);
        for (std::size_t k = 0; k < tv.size(); ++k) {
            if (!(y[k] > tv[k])) return 0.0;
        }
        return 1.0;
    });
    const double p = std::exp(-stdf_canonical(model, t));
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    const char* label = sampler == SurvivalSampler::minstable ? "survival" : "survival_ciid";
    return detail::finish_report(std::string(label) + " t=" + detail::format_list(t), m.mean(), p,
                                 se, n, opts.z_threshold);
}

/// d * mean of max_k t_k X_k over Pickands draws against l(t).
inline CheckReport mc_pickands_check(const CanonicalModel& model, std::span<const double> t,
                                     std::size_t n, const McOptions& opts = {}) {
    detail::require_samples(n);
    validate_weights(t);
    const std::size_t d = effective_dimension(t);
    if (d < 1) throw DomainError("pickands check: t must have a positive entry");
    const std::vector<double> tv(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(d));
    const double scale = static_cast<double>(d);
    const auto m = detail::block_moments(n, opts, [&](Rng& rng) {
        const auto w = sample_pickands(model, d, rng);
        double best = 0.0;
        for (std::size_t k = 0; k < d; ++k) best = std::max(best, tv[k] * w.coords[k]);
        return scale * best;
    });
    const double se = std::sqrt(m.variance() / static_cast<double>(n));
    return detail::finish_report("pickands t=" + detail::format_list(t), m.mean(),
                                 stdf_canonical(model, t), se, n, opts.z_threshold);
}

/// Mean of each Pickands coordinate against 1/d, one report per coordinate.
inline std::vector<CheckReport> mc_pickands_mean_checks(const CanonicalModel& model, std::size_t d,
                                                        std::size_t n, const McOptions& opts = {}) {
    detail::require_samples(n);
    const auto rows =
        draw_batch(n, opts.seed, opts.workers, [&](Rng& rng) { return sample_pickands(model, d, rng).coords; });
    std::vector<CheckReport> out;
    for (std::size_t k = 0; k < d; ++k) {
        detail::Moments m;
        for (const auto& r : rows) m.add(r[k]);
        out.push_back(detail::finish_report("pickands_mean k=" + std::to_string(k + 1), m.mean(),
                                            1.0 / static_cast<double>(d),
                                            std::sqrt(m.variance() / static_cast<double>(n)), n,
                                            opts.z_threshold));
    }
    return out;
}

/// Kolmogorov-Smirnov distance between a sample and the unit exponential.
inline double ks_unit_exponential(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double dist = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = -std::expm1(-xs[i]);
        dist = std::max({dist, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return dist;
}

/// Mean of a sample of Y_1 against 1, with the KS distance in the name.
inline CheckReport margin_report(std::span<const double> y1, double z_threshold) {
    detail::require_samples(y1.size());
    detail::Moments m;
    for (double y : y1) m.add(y);
    char name[64];
    std::snprintf(name, sizeof name, "margin ks=%.6f",
                  ks_unit_exponential(std::vector<double>(y1.begin(), y1.end())));
    return detail::finish_report(name, m.mean(), 1.0, std::sqrt(m.variance() / static_cast<double>(y1.size())),
                                 y1.size(), z_threshold);
}

inline CheckReport mc_margin_check(const CanonicalModel& model, std::size_t n,
                                   const McOptions& opts = {}) {
    const auto rows = draw_batch(n, opts.seed, opts.workers,
                                 [&](Rng& rng) { return sample_minstable(model, 1, rng, opts.tol); });
    std::vector<double> y1;
    y1.reserve(n);
    for (const auto& r : rows) y1.push_back(r[0]);
    return margin_report(y1, opts.z_threshold);
}

/// Empirical P(Y > t) of given sample rows against exp(-l(t)).
inline CheckReport survival_report(const CanonicalModel& model, std::span<const double> t,
                                   const std::vector<std::vector<double>>& rows,
                                   double z_threshold) {
    detail::require_samples(rows.size());
    validate_weights(t);
    std::size_t hits = 0;
    for (const auto& r : rows) {
        if (r.size() < t.size()) throw DomainError("survival check: sample rows shorter than t");
        bool above = true;
        for (std::size_t k = 0; k < t.size() && above; ++k) above = r[k] > t[k];
        hits += above;
    }
    const double n = static_cast<double>(rows.size());
    const double p = std::exp(-stdf_canonical(model, t));
    return detail::finish_report("survival t=" + detail::format_list(t), static_cast<double>(hits) / n,
                                 p, std::sqrt(p * (1.0 - p) / n), rows.size(), z_threshold);
}

/// l(t) = l(perm(t)) to 1e-12, where perm(t)_i = t_{perm_i} (0-based).
inline bool exchangeability_check(const CanonicalModel& model, std::span<const double> t,
                                  std::span<const std::size_t> perm) {
    if (perm.size() != t.size()) throw DomainError("exchangeability: permutation size mismatch");
    std::vector<bool> seen(t.size(), false);
    std::vector<double> permuted(t.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (perm[i] >= t.size() || seen[perm[i]]) throw DomainError("exchangeability: not a permutation");
        seen[perm[i]] = true;
        permuted[i] = t[perm[i]];
    }
    const double a = stdf_canonical(model, t);
    const double b = stdf_canonical(model, permuted);
    return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a));
}

inline constexpr const char* kReportCsvHeader = "name,empirical,exact,std_error,z_score,n,passed";

inline std::string format_double(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void write_reports_csv(std::ostream& os, std::span<const CheckReport> reports) {
    os << kReportCsvHeader << '\n';
    for (const auto& r : reports) {
        os << r.name << ',' << format_double(r.empirical) << ',' << format_double(r.exact) << ','
           << format_double(r.std_error) << ',' << format_double(r.z_score) << ',' << r.n << ','
           << (r.passed ? "true" : "false") << '\n';
    }
}

}  // namespace maxstable
