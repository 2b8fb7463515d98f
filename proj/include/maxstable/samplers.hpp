// Copyright 2026 The maxstable Authors
// SPDX-License-Identifier: Apache-2.0

//! \file samplers.hpp
//! Samplers for min-stable exponential vectors, Pickands simplex vectors,
//! strong-IDT subordinator paths and first-passage (conditionally iid)
//! sequences.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "maxstable/distributions.hpp"
#include "maxstable/errors.hpp"
#include "maxstable/random.hpp"

namespace maxstable {

inline constexpr double kDefaultSamplerTolerance = 1e-8;
inline constexpr double kDefaultPathTolerance = 1e-6;
inline constexpr std::uint64_t kMaxPoissonArrivals = 10'000'000;
inline constexpr int kMaxPickandsResamples = 100;
inline constexpr int kMaxHorizonDoublings = 1'000'000;

namespace detail {

// Intensity of Poisson points at radius s that undercut at least one running
// minimum m_k: sum_i w_i (1 - prod_k F_i(s / m_k)). Per-component terms are
// written to `parts`.
inline double undercut_intensity(const MixingMeasure& mu, std::span<const double> m, double s,
                                 std::vector<double>& parts) {
    double total = 0.0;
    parts.resize(mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        double log_prod = 0.0;
        for (double mk : m) {
            log_prod += mu.cdf(i).log_cdf(s / mk);
            if (log_prod == -kInf) break;
        }
        parts[i] = mu.weight(i) * -std::expm1(log_prod);
        total += parts[i];
    }
    return total;
}

// Expected number of points beyond radius s that still undercut some m_k.
inline double undercut_remainder(const MixingMeasure& mu, std::span<const double> m, double s) {
    double bound = 0.0;
    for (double mk : m) {
        if (std::isinf(mk)) return kInf;
        bound += mk * mu.tail_integral(s / mk);
    }
    return bound;
}

// Draws X = (X_1..X_d) iid from F conditioned on X_k > a_k for some k.
inline void sample_exceedance(const UnitMeanCdf& f, std::span<const double> a, Rng& rng,
                              std::vector<double>& x) {
    const std::size_t d = a.size();
    std::vector<double> suffix(d + 1, 0.0);  // sum_{k >= j} log F(a_k)
    for (std::size_t j = d; j-- > 0;) suffix[j] = suffix[j + 1] + f.log_cdf(a[j]);
    x.resize(d);
    std::size_t j = 0;
    for (; j < d; ++j) {
        const double s = f.survival(a[j]);
        const double p_exceed = s / -std::expm1(suffix[j]);
        if (uniform_open(rng) < p_exceed) {
            x[j] = f.quantile_survival(uniform_open(rng) * s);
            ++j;
            break;
        }
        x[j] = f.quantile(uniform_open(rng) * (1.0 - s));
    }
    for (; j < d; ++j) x[j] = f.sample(rng);
}

}  // namespace detail

/// One draw of (Y_1..Y_d) with P(Y > t) = exp(-l(t)) for the canonical model.
///
/// The mixture part uses a Poisson construction Y_k = min_n Gamma_n / X_k^(n)
/// in which only points able to lower some running minimum are simulated
/// (thinning against a decreasing intensity). Simulation stops once the
/// expected number of remaining such points is at most `tol`, which bounds
/// the probability that any coordinate is too large.
inline std::vector<double> sample_minstable(const CanonicalModel& model, std::size_t d, Rng& rng,
                                            double tol = kDefaultSamplerTolerance) {
    if (d < 1) throw DomainError("sample_minstable: d must be >= 1");
    if (!(tol > 0.0)) throw DomainError("sample_minstable: tol must be > 0");
    const double b = model.b();
    std::vector<double> y(d);
    if (b == 1.0) {
        for (auto& v : y) v = exponential(rng);
        return y;
    }

    // Running minima of Y0 = min_n Gamma_n / X^(n), capped by the independent
    // part so that only relevant points are simulated.
    std::vector<double> m(d, kInf);
    if (b > 0.0) {
        for (auto& mk : m) mk = (1.0 - b) * exponential(rng) / b;
    }

    const MixingMeasure& mu = *model.mu();
    std::vector<double> parts;
    std::vector<double> a(d);
    std::vector<double> x;
    std::vector<double> cumulative(mu.size());
    double s = 0.0;
    std::uint64_t candidates = 0;
    while (true) {
        const double bound = detail::undercut_intensity(mu, m, s, parts);
        if (bound <= 0.0) break;
        const double remainder = detail::undercut_remainder(mu, m, s);
        if (remainder <= tol) break;
        if (++candidates > kMaxPoissonArrivals) {
            throw ResourceError("sample_minstable: Poisson arrival budget exhausted", remainder);
        }
        s += exponential(rng) / bound;
        const double rate = detail::undercut_intensity(mu, m, s, parts);
        if (uniform_open(rng) * bound >= rate) continue;

        double acc = 0.0;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            acc += parts[i];
            cumulative[i] = acc;
        }
        const std::size_t comp = categorical(rng, cumulative);
        for (std::size_t k = 0; k < d; ++k) a[k] = s / m[k];
        detail::sample_exceedance(mu.cdf(comp), a, rng, x);
        for (std::size_t k = 0; k < d; ++k) {
            if (x[k] > 0.0) m[k] = std::min(m[k], s / x[k]);
        }
    }
    for (std::size_t k = 0; k < d; ++k) y[k] = m[k] / (1.0 - b);
    return y;
}

/// A point of the unit simplex with a count of degenerate redraws.
struct PickandsSample {
    std::vector<double> coords;
    int resamples = 0;
};

/// One draw of the Pickands vector X^(d): l(t) = d E[max_k t_k X_k].
inline PickandsSample sample_pickands(const CanonicalModel& model, std::size_t d, Rng& rng) {
    if (d < 1) throw DomainError("sample_pickands: d must be >= 1");
    PickandsSample out;
    out.coords.assign(d, 0.0);
    for (int attempt = 0; attempt <= kMaxPickandsResamples; ++attempt) {
        const auto pick = std::min<std::size_t>(
            static_cast<std::size_t>(uniform_open(rng) * static_cast<double>(d)), d - 1);
        if (uniform_open(rng) < model.b()) {
            std::fill(out.coords.begin(), out.coords.end(), 0.0);
            out.coords[pick] = 1.0;
            return out;
        }
        const UnitMeanCdf& f = model.mu()->cdf(model.mu()->draw(rng));
        double total = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            out.coords[k] = k == pick ? f.sample_size_biased(rng) : f.sample(rng);
            total += out.coords[k];
        }
        if (total > 0.0) {
            for (auto& v : out.coords) v /= total;
            return out;
        }
        ++out.resamples;
    }
    throw ResourceError("sample_pickands: simplex normalizer vanished repeatedly",
                        static_cast<double>(out.resamples));
}

/// A jump of the LePage series: arrival time and its distribution function.
struct PathAtom {
    double gamma;
    UnitMeanCdf cdf;
};

/// Truncated LePage series H_t = b t + sum_k -log F_k((Gamma_k / (c t))-) on
/// [0, horizon], with Gamma_k the arrivals of a unit-rate Poisson process.
/// This is the form with E exp(-sum_j H_{t_j}) = exp(-b sum t - c int l_F dmu).
/// The omitted terms have expected total at most truncation_bound at every
/// t <= horizon.
class IdtPath {
  public:
    IdtPath(IdtTriplet triplet) : triplet_(std::move(triplet)) {}

    double drift() const { return triplet_.b; }
    double intensity() const { return triplet_.c; }
    double horizon() const { return horizon_; }
    double truncation_bound() const { return truncation_bound_; }
    const std::vector<PathAtom>& atoms() const { return atoms_; }
    /// First time the path reaches +inf (inf if it never does on the sampled atoms).
    double explosion_time() const { return explosion_; }

    double evaluate(double t) const {
        if (!(t >= 0.0)) throw DomainError("idt path: t must be >= 0");
        if (t > horizon_) throw DomainError("idt path: t beyond the sampled horizon");
        if (t == 0.0) return 0.0;
        if (t >= explosion_) return kInf;
        double jumps = 0.0;
        for (const auto& atom : atoms_) {
            const double u = atom.gamma / (triplet_.c * t);
            if (u > atom.cdf.upper_support()) continue;
            jumps -= atom.cdf.log_cdf(u, Limit::left);
        }
        return triplet_.b * t + jumps;
    }

    /// Times in (lo, hi] at which some atom produces a jump of H.
    std::vector<double> jump_times(double lo, double hi) const {
        std::vector<double> out;
        for (const auto& atom : atoms_) {
            if (!atom.cdf.is_atomic()) continue;
            for (double v : atom.cdf.breakpoints()) {
                if (v <= 0.0) continue;
                const double tau = atom.gamma / (triplet_.c * v);
                if (tau > lo && tau <= hi) out.push_back(tau);
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Draws further arrivals until the remainder bound on [0, horizon]
    /// is at most tol.
    void extend_to(double horizon, Rng& rng, double tol) {
        if (!(horizon > 0.0) || !std::isfinite(horizon)) {
            throw DomainError("idt path: horizon must be finite and > 0");
        }
        if (!(tol > 0.0)) throw DomainError("idt path: tol must be > 0");
        horizon_ = std::max(horizon_, horizon);
        std::uint64_t added = 0;
        while (true) {
            truncation_bound_ = remainder_bound();
            if (truncation_bound_ <= tol) break;
            if (++added > kMaxPoissonArrivals) {
                throw ResourceError("idt path: Poisson arrival budget exhausted", truncation_bound_);
            }
            last_gamma_ += exponential(rng);
            PathAtom atom{last_gamma_, triplet_.mu.cdf(triplet_.mu.draw(rng))};
            const double x0 = atom.cdf.lower_support();
            if (x0 > 0.0) explosion_ = std::min(explosion_, atom.gamma / (triplet_.c * x0));
            atoms_.push_back(std::move(atom));
        }
    }

  private:
    // c h sum_i w_i tail_i(a) / F_i(a-) with a = Gamma_n / (c h), using
    // -log x <= (1 - x) / x, and h the part of the horizon before explosion.
    double remainder_bound() const {
        const double h = std::min(horizon_, explosion_);
        const double a = last_gamma_ / (triplet_.c * h);
        double sum = 0.0;
        for (const auto& comp : triplet_.mu.components()) {
            const double tail = comp.cdf.tail_integral(a);
            if (tail == 0.0) continue;
            const double lower = comp.cdf.cdf(a, Limit::left);
            if (lower <= 0.0) return kInf;
            sum += comp.weight * tail / lower;
        }
        return triplet_.c * h * sum;
    }

    IdtTriplet triplet_;
    std::vector<PathAtom> atoms_;
    double horizon_ = 0.0;
    double last_gamma_ = 0.0;
    double explosion_ = kInf;
    double truncation_bound_ = kInf;
};

inline IdtPath sample_idt_path(const IdtTriplet& triplet, double horizon, Rng& rng,
                               double tol = kDefaultPathTolerance) {
    IdtPath path(triplet);
    path.extend_to(horizon, rng, tol);
    return path;
}

namespace detail {

// inf{t > 0 : H_t > eta} by bracketing and bisection, snapping to a jump of
// H when one sits inside the final bracket.
inline double first_passage(IdtPath& path, double eta, Rng& rng, double tol) {
    double lo = 0.0;
    double hi = 1.0;
    int doublings = 0;
    while (true) {
        if (hi > path.horizon()) path.extend_to(hi, rng, tol);
        if (path.evaluate(hi) > eta) break;
        if (++doublings > kMaxHorizonDoublings || !std::isfinite(2.0 * hi)) {
            throw ResourceError("first passage: no passage within the horizon budget", hi);
        }
        lo = hi;
        hi *= 2.0;
    }
    while (hi - lo > 1e-10 * hi) {
        const double mid = 0.5 * (lo + hi);
        (path.evaluate(mid) > eta ? hi : lo) = mid;
    }
    for (double tau : path.jump_times(lo, hi)) {
        if (path.evaluate(tau) > eta) return tau;
    }
    return hi;
}

}  // namespace detail

/// Y_k = inf{t : H_t > eta_k} for iid unit exponentials eta_k and one path H
/// of the normalized triplet (b + c = 1).
inline std::vector<double> sample_conditional_iid(const IdtTriplet& triplet, std::size_t d,
                                                  Rng& rng, double tol = kDefaultPathTolerance) {
    if (d < 1) throw DomainError("sample_conditional_iid: d must be >= 1");
    if (!triplet.is_normalized()) throw DomainError("sample_conditional_iid: need b + c = 1");
    std::vector<double> eta(d);
    for (auto& e : eta) e = exponential(rng);
    IdtPath path = sample_idt_path(triplet, 1.0, rng, tol);
    std::vector<double> y(d);
    for (std::size_t k = 0; k < d; ++k) y[k] = detail::first_passage(path, eta[k], rng, tol);
    return y;
}

/// As above for a canonical model; b = 1 is the pure-drift path H_t = t.
inline std::vector<double> sample_conditional_iid(const CanonicalModel& model, std::size_t d,
                                                  Rng& rng, double tol = kDefaultPathTolerance) {
    if (!model.has_mixture_part()) {
        if (d < 1) throw DomainError("sample_conditional_iid: d must be >= 1");
        std::vector<double> y(d);
        for (auto& v : y) v = exponential(rng);
        return y;
    }
    return sample_conditional_iid(IdtTriplet::from_canonical(model), d, rng, tol);
}

}  // namespace maxstable
