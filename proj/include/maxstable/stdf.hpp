// Copyright 2026 The maxstable Authors
// SPDX-License-Identifier: Apache-2.0

//! \file stdf.hpp
//! Stable tail dependence functions of exchangeable min-stable sequences,
//! their copulas, and transforms that map one such function to another.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "maxstable/distributions.hpp"
#include "maxstable/errors.hpp"
#include "maxstable/quadrature.hpp"

namespace maxstable {

/// Non-zero prefix of a non-negative, eventually-zero weight sequence t.
using WeightVector = std::vector<double>;

/// Any function t -> l(t) on weight vectors.
using StdfEvaluator = std::function<double(std::span<const double>)>;

inline constexpr double kStdfQuadratureTolerance = 1e-10;
inline constexpr std::size_t kInclusionExclusionCap = 20;

/// Index of the last strictly positive entry (0 for the zero vector).
inline std::size_t effective_dimension(std::span<const double> t) {
    for (std::size_t i = t.size(); i-- > 0;) {
        if (t[i] > 0.0) return i + 1;
    }
    return 0;
}

inline void validate_weights(std::span<const double> t) {
    for (double x : t) {
        if (!(x >= 0.0) || !std::isfinite(x)) {
            throw DomainError("weight vector entries must be finite and >= 0");
        }
    }
}

namespace detail {

// Positive entries of t, sorted, with equal values merged into one factor
// F(s / value)^multiplicity. Sorting makes every downstream sum independent
// of the input order.
inline std::vector<PowerTerm> group_weights(std::span<const double> t) {
    validate_weights(t);
    std::vector<double> pos;
    for (double x : t) {
        if (x > 0.0) pos.push_back(x);
    }
    std::sort(pos.begin(), pos.end());
    std::vector<PowerTerm> terms;
    for (double x : pos) {
        if (!terms.empty() && terms.back().scale == x) {
            terms.back().power += 1.0;
        } else {
            terms.push_back({x, 1.0});
        }
    }
    return terms;
}

// Exact integral of 1 - prod F(s / t_g)^m_g for a step-function F.
inline double step_product_complement(const UnitMeanCdf& f, std::span<const PowerTerm> terms) {
    const auto atoms = f.breakpoints();
    std::vector<double> points{0.0};
    for (const auto& g : terms) {
        for (double v : atoms) points.push_back(v * g.scale);
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    double sum = 0.0;
    for (std::size_t j = 0; j + 1 < points.size(); ++j) {
        const double width = points[j + 1] - points[j];
        if (width <= 0.0) continue;
        const double mid = points[j] + 0.5 * width;
        double log_prod = 0.0;
        for (const auto& g : terms) {
            log_prod += g.power * f.log_cdf(mid / g.scale);
            if (log_prod == -kInf) break;
        }
        sum += width * -std::expm1(log_prod);
    }
    return sum;
}

inline double product_complement_quadrature(const UnitMeanCdf& f,
                                            std::span<const PowerTerm> terms) {
    double top = 0.0;
    for (const auto& g : terms) top = std::max(top, g.scale);
    return integrate_product_complement(f, terms, 0.0,
                                        kStdfQuadratureTolerance * std::max(1.0, top))
        .value;
}

}  // namespace detail

/// l_F(t) = integral over s > 0 of 1 - prod_k F(s / t_k), with a closed form
/// where the family has one.
inline double stdf_extremal(const UnitMeanCdf& f, std::span<const double> t) {
    const auto terms = detail::group_weights(t);
    if (terms.empty()) return 0.0;
    return f.visit(overloaded{
        [&](const families::Dirac1&) { return terms.back().scale; },
        [&](const families::Frechet& fr) {
            double sum = 0.0;
            for (const auto& g : terms) sum += g.power * std::pow(g.scale, 1.0 / fr.alpha);
            return std::pow(sum, fr.alpha);
        },
        [&](const families::TwoPoint&) { return detail::step_product_complement(f, terms); },
        [&](const families::Discrete&) { return detail::step_product_complement(f, terms); },
        [&](const auto&) { return detail::product_complement_quadrature(f, terms); }});
}

/// l_F(t) by adaptive quadrature regardless of family. Reference evaluator.
inline double stdf_extremal_quadrature(const UnitMeanCdf& f, std::span<const double> t) {
    const auto terms = detail::group_weights(t);
    if (terms.empty()) return 0.0;
    return detail::product_complement_quadrature(f, terms);
}

/// l(t) = b * sum(t) + (1 - b) * sum_i w_i l_{F_i}(t).
inline double stdf_canonical(const CanonicalModel& model, std::span<const double> t) {
    validate_weights(t);
    double total = 0.0;
    for (double x : t) total += x;
    double value = model.b() * total;
    if (model.has_mixture_part()) {
        double mix = 0.0;
        for (const auto& c : model.mu()->components()) mix += c.weight * stdf_extremal(c.cdf, t);
        value += (1.0 - model.b()) * mix;
    }
    return value;
}

inline StdfEvaluator make_evaluator(CanonicalModel model) {
    return [m = std::move(model)](std::span<const double> t) { return stdf_canonical(m, t); };
}

/// Jump of a compound Poisson subordinator: size theta (possibly infinite)
/// arriving at rate beta.
struct LevyAtom {
    double theta;
    double beta;
    bool operator==(const LevyAtom&) const = default;
};

/// Drift and finite-atom Levy measure of a subordinator.
struct LevySpec {
    double b_l = 0.0;
    std::vector<LevyAtom> atoms;

    LevySpec() = default;
    LevySpec(double drift, std::vector<LevyAtom> jumps) : b_l(drift), atoms(std::move(jumps)) {
        if (!(b_l >= 0.0) || !std::isfinite(b_l)) throw DomainError("levy: b_L must be >= 0");
        for (const auto& a : atoms) {
            if (!(a.theta > 0.0)) throw DomainError("levy: jump sizes must be > 0");
            if (!(a.beta > 0.0) || !std::isfinite(a.beta)) {
                throw DomainError("levy: rates must be finite and > 0");
            }
        }
        if (atoms.empty() && b_l == 0.0) throw DomainError("levy: need a drift or at least one atom");
    }

    /// Psi(n + 1) - Psi(n) for integer n >= 0.
    double increment(std::size_t n) const {
        double sum = b_l;
        for (const auto& a : atoms) {
            if (std::isinf(a.theta)) {
                if (n == 0) sum += a.beta;
            } else {
                sum += a.beta * std::exp(-static_cast<double>(n) * a.theta) * -std::expm1(-a.theta);
            }
        }
        return sum;
    }

    /// Psi(1); a canonical model corresponds exactly when this is 1.
    double psi_one() const { return increment(0); }

    /// Canonical pair of the normalized spec: each atom becomes a TwoPoint
    /// (or Dirac1 for an infinite jump) weighted by beta (1 - e^-theta).
    CanonicalModel to_canonical() const {
        if (std::abs(psi_one() - 1.0) > 1e-12) {
            throw DomainError("levy: Psi(1) must equal 1 to form a canonical model");
        }
        if (atoms.empty()) return CanonicalModel::independence();
        std::vector<MixtureComponent> comps;
        double c = 0.0;
        for (const auto& a : atoms) {
            const double mass = std::isinf(a.theta) ? a.beta : a.beta * -std::expm1(-a.theta);
            c += mass;
            comps.push_back({mass, std::isinf(a.theta) ? UnitMeanCdf::dirac1()
                                                       : UnitMeanCdf::two_point(a.theta)});
        }
        for (auto& comp : comps) comp.weight /= c;
        double total = 0.0;
        for (const auto& comp : comps) total += comp.weight;
        comps.back().weight += 1.0 - total;
        return CanonicalModel(std::clamp(b_l, 0.0, 1.0), MixingMeasure(std::move(comps)));
    }

    bool operator==(const LevySpec&) const = default;
};

/// Psi(x) = b_L x + sum beta (1 - exp(-x theta)).
inline double bernstein_psi(const LevySpec& spec, double x) {
    if (!(x >= 0.0)) throw DomainError("bernstein_psi: x must be >= 0");
    double sum = spec.b_l * x;
    for (const auto& a : spec.atoms) {
        if (std::isinf(a.theta)) {
            sum += x > 0.0 ? a.beta : 0.0;
        } else {
            sum += a.beta * -std::expm1(-x * a.theta);
        }
    }
    return sum;
}

/// l(t) = sum_k t_[k] (Psi(d - k + 1) - Psi(d - k)) over the ascending order
/// statistics of the positive entries.
inline double stdf_levy(const LevySpec& spec, std::span<const double> t) {
    validate_weights(t);
    std::vector<double> pos;
    for (double x : t) {
        if (x > 0.0) pos.push_back(x);
    }
    std::sort(pos.begin(), pos.end());
    const std::size_t d = pos.size();
    double sum = 0.0;
    for (std::size_t k = 0; k < d; ++k) sum += pos[k] * spec.increment(d - k - 1);
    return sum;
}

/// C(u) = exp(-l(-log u)).
inline double copula(const CanonicalModel& model, std::span<const double> u) {
    std::vector<double> t;
    t.reserve(u.size());
    for (double x : u) {
        if (!(x > 0.0 && x <= 1.0)) throw DomainError("copula: arguments must lie in (0,1]");
        t.push_back(-std::log(x));
    }
    return std::exp(-stdf_canonical(model, t));
}

/// l_alpha(t) = l(t^(1/alpha))^alpha.
inline double stable_transform(const StdfEvaluator& base, double alpha, std::span<const double> t) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("stable transform: alpha must lie in (0,1)");
    validate_weights(t);
    std::vector<double> powered(t.begin(), t.end());
    for (double& x : powered) x = std::pow(x, 1.0 / alpha);
    return std::pow(base(powered), alpha);
}

inline StdfEvaluator make_stable_transform(StdfEvaluator base, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("stable transform: alpha must lie in (0,1)");
    return [base = std::move(base), alpha](std::span<const double> t) {
        return stable_transform(base, alpha, t);
    };
}

/// l_Y(t) = sum over non-empty subsets S of the positive entries of
/// (-1)^(|S|+1) / l_X(1 / t_S).
inline double inclusion_exclusion(const StdfEvaluator& lx, std::span<const double> t) {
    validate_weights(t);
    std::vector<double> pos;
    for (double x : t) {
        if (x > 0.0) pos.push_back(x);
    }
    if (pos.size() > kInclusionExclusionCap) {
        throw CapacityError("inclusion-exclusion: more than " +
                            std::to_string(kInclusionExclusionCap) + " positive entries");
    }
    const std::size_t d = pos.size();
    std::vector<double> sub;
    sub.reserve(d);
    double sum = 0.0;
    for (std::uint32_t mask = 1; mask < (1u << d); ++mask) {
        sub.clear();
        for (std::size_t i = 0; i < d; ++i) {
            if (mask & (1u << i)) sub.push_back(1.0 / pos[i]);
        }
        const double sign = (sub.size() % 2 == 1) ? 1.0 : -1.0;
        sum += sign / lx(sub);
    }
    return sum;
}

inline StdfEvaluator make_inclusion_exclusion(StdfEvaluator lx) {
    return [lx = std::move(lx)](std::span<const double> t) { return inclusion_exclusion(lx, t); };
}

/// 2 - integral of (1 - F)^2; equals l_F(1, 1).
inline double pairwise_l2_identity(const UnitMeanCdf& f) {
    const double squared = f.visit(overloaded{
        [](const families::Dirac1&) { return 1.0; },
        [](const families::TwoPoint& tp) { return -std::expm1(-tp.theta); },
        [](const families::Discrete& d) { return d.table.squared_survival_integral(); },
        [&](const auto&) {
            auto integrand = [&](double s) {
                const double sv = f.survival(s);
                return sv * sv;
            };
            const auto bps = f.breakpoints();
            return integrate_tail(integrand, 0.0, 1.0, bps, kStdfQuadratureTolerance).value;
        }});
    return 2.0 - squared;
}

/// l(1_{n+1}) - l(1_n), clamped to [0, 1]; tends to the drift b as n grows.
inline double estimate_drift(const StdfEvaluator& l, std::size_t n_max) {
    if (n_max < 2) throw DomainError("estimate_drift: n_max must be >= 2");
    const std::vector<double> ones(n_max + 1, 1.0);
    const double upper = l(ones);
    const double lower = l(std::span(ones).first(n_max));
    return std::clamp(upper - lower, 0.0, 1.0);
}

inline double estimate_drift(const CanonicalModel& model, std::size_t n_max) {
    return estimate_drift(make_evaluator(model), n_max);
}

struct ThreeMarginCheck {
    bool feasible;
    StdfEvaluator l3;
};

/// Three-dimensional margin with extremal structure (lambda1, lambda2,
/// lambda3); feasible flags whether it is the margin of a conditionally iid
/// sequence (lambda2^2 <= lambda1 lambda3).
inline ThreeMarginCheck check_3margin_ciid(double lambda1, double lambda2, double lambda3) {
    for (double l : {lambda1, lambda2, lambda3}) {
        if (!(l > 0.0) || !std::isfinite(l)) throw DomainError("3-margin: lambdas must be > 0");
    }
    const double denom = lambda1 + 2.0 * lambda2 + lambda3;
    auto l3 = [=](std::span<const double> t) {
        validate_weights(t);
        if (effective_dimension(t) > 3) throw DomainError("3-margin: at most three weights");
        double s[3] = {0.0, 0.0, 0.0};
        std::copy_n(t.begin(), std::min<std::size_t>(t.size(), 3), s);
        std::sort(s, s + 3);
        return (lambda1 * s[0] + (lambda1 + lambda2) * s[1]) / denom + s[2];
    };
    return {lambda2 * lambda2 <= lambda1 * lambda3, l3};
}

}  // namespace maxstable
