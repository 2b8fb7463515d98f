// Copyright 2026 The maxstable Authors
// SPDX-License-Identifier: Apache-2.0

//! \file distributions.hpp
//! Unit-mean distribution functions (the extremal building blocks of an
//! exchangeable min-stable model), mixing measures over them, and the
//! canonical (b, mu) and (b, c, mu) parameterizations.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "maxstable/errors.hpp"
#include "maxstable/quadrature.hpp"
#include "maxstable/random.hpp"

namespace maxstable {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Unit-mean tolerance enforced when a discrete law is constructed.
inline constexpr double kUnitMeanTolerance = 1e-9;

/// Absolute tolerance of the internal quadratures on distribution functions.
inline constexpr double kCdfQuadratureTolerance = 1e-11;

/// Which one-sided value of a distribution function to return at x.
enum class Limit { right, left };

struct Atom {
    double value;
    double weight;
    bool operator==(const Atom&) const = default;
};

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

/// c_alpha = Gamma(1 - alpha)^(-1/alpha), the constant that gives the
/// Frechet law exp(-c x^(-1/alpha)) unit mean.
inline double frechet_constant(double alpha) {
    return std::pow(std::tgamma(1.0 - alpha), -1.0 / alpha);
}

namespace detail {

// Atoms sorted by value with prefix and suffix weight sums.
struct AtomTable {
    std::vector<double> values;
    std::vector<double> weights;
    std::vector<double> cumulative;   // F(values[i])
    std::vector<double> upper_mass;   // sum of weights[j] for j >= i; size n + 1
    std::vector<double> biased_cumulative;  // cumulative of value * weight

    bool operator==(const AtomTable& o) const {
        return values == o.values && weights == o.weights;
    }

    static AtomTable build(std::vector<Atom> atoms, const std::string& who) {
        if (atoms.empty()) throw DomainError(who + ": needs at least one atom");
        for (const auto& a : atoms) {
            if (!(a.value >= 0.0) || !std::isfinite(a.value)) {
                throw DomainError(who + ": atom values must be finite and >= 0");
            }
            if (!(a.weight > 0.0) || !std::isfinite(a.weight)) {
                throw DomainError(who + ": atom weights must be finite and > 0");
            }
        }
        std::stable_sort(atoms.begin(), atoms.end(),
                         [](const Atom& l, const Atom& r) { return l.value < r.value; });
        AtomTable t;
        for (const auto& a : atoms) {
            if (!t.values.empty() && t.values.back() == a.value) {
                t.weights.back() += a.weight;
            } else {
                t.values.push_back(a.value);
                t.weights.push_back(a.weight);
            }
        }
        // Skipping weights that already sum to 1 keeps re-normalization idempotent.
        const double total = std::accumulate(t.weights.begin(), t.weights.end(), 0.0);
        if (std::abs(total - 1.0) > 8 * std::numeric_limits<double>::epsilon()) {
            for (auto& w : t.weights) w /= total;
        }
        t.finish();
        return t;
    }

    void finish() {
        const std::size_t n = values.size();
        cumulative.assign(n, 0.0);
        upper_mass.assign(n + 1, 0.0);
        biased_cumulative.assign(n, 0.0);
        double acc = 0.0;
        double biased = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += weights[i];
            cumulative[i] = acc;
            biased += values[i] * weights[i];
            biased_cumulative[i] = biased;
        }
        for (std::size_t i = n; i-- > 0;) upper_mass[i] = upper_mass[i + 1] + weights[i];
    }

    double mean() const { return biased_cumulative.back(); }

    double cdf(double x, Limit limit) const {
        const auto it = limit == Limit::right
                            ? std::upper_bound(values.begin(), values.end(), x)
                            : std::lower_bound(values.begin(), values.end(), x);
        const auto idx = static_cast<std::size_t>(it - values.begin());
        return idx == 0 ? 0.0 : cumulative[idx - 1];
    }

    double survival(double x) const {
        const auto idx = static_cast<std::size_t>(
            std::upper_bound(values.begin(), values.end(), x) - values.begin());
        return upper_mass[idx];
    }

    double tail_integral(double a) const {
        double sum = 0.0;
        for (std::size_t i = values.size(); i-- > 0 && values[i] > a;) {
            sum += weights[i] * (values[i] - a);
        }
        return sum;
    }

    double quantile(double p) const {
        const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), p);
        const auto idx = std::min<std::size_t>(it - cumulative.begin(), values.size() - 1);
        return values[idx];
    }

    // inf{x : 1 - F(x) <= q}
    double quantile_survival(double q) const {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (upper_mass[i + 1] <= q) return values[i];
        }
        return values.back();
    }

    double sample_size_biased(Rng& rng) const {
        return values[categorical(rng, biased_cumulative)];
    }

    // Integral of (1 - F)^2 over [0, inf).
    double squared_survival_integral() const {
        double sum = 0.0;
        double prev = 0.0;
        double surv = 1.0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            sum += (values[i] - prev) * surv * surv;
            prev = values[i];
            surv = upper_mass[i + 1];
        }
        return sum;
    }
};

// Frechet law F(x) = exp(-(x / scale)^(-1/alpha)); mean scale * Gamma(1 - alpha).
struct FrechetKernel {
    double alpha;
    double scale;

    double log_cdf(double x) const {
        if (x <= 0.0) return -kInf;
        if (std::isinf(x)) return 0.0;
        return -std::pow(x / scale, -1.0 / alpha);
    }
    double survival(double x) const { return -std::expm1(log_cdf(x)); }
    double quantile(double p) const { return scale * std::pow(-std::log(p), -alpha); }
    double quantile_survival(double q) const {
        return scale * std::pow(-std::log1p(-q), -alpha);
    }
    double tail_integral(double a) const {
        const double mean = scale * std::tgamma(1.0 - alpha);
        if (a <= 0.0) return mean;
        const double v = std::pow(a / scale, -1.0 / alpha);
        return mean * boost::math::gamma_p(1.0 - alpha, v) + a * std::expm1(-v);
    }
    // Size-biasing turns E^(-alpha), E ~ Exp(1), into G^(-alpha), G ~ Gamma(1 - alpha).
    double sample_size_biased(Rng& rng) const {
        return scale * std::pow(gamma_variate(rng, 1.0 - alpha), -alpha);
    }
};

}  // namespace detail

/// A distribution function of a non-negative random variable with finite,
/// positive (not necessarily unit) mean. Input to rescale_to_unit_mean().
class FiniteMeanCdf {
  public:
    struct PointMass {
        double value;
        bool operator==(const PointMass&) const = default;
    };
    struct Exponential {
        double mean;
        bool operator==(const Exponential&) const = default;
    };
    struct Discrete {
        detail::AtomTable table;
        bool operator==(const Discrete&) const = default;
    };
    struct Frechet {
        double alpha;
        double scale;
        bool operator==(const Frechet&) const = default;
    };
    struct Uniform {
        double lo;
        double hi;
        bool operator==(const Uniform&) const = default;
    };
    using Variant = std::variant<PointMass, Exponential, Discrete, Frechet, Uniform>;

    static FiniteMeanCdf point_mass(double value) {
        if (!(value > 0.0) || !std::isfinite(value)) {
            throw DomainError("point_mass: value must be finite and > 0");
        }
        return FiniteMeanCdf(PointMass{value});
    }
    static FiniteMeanCdf exponential(double mean) {
        if (!(mean > 0.0) || !std::isfinite(mean)) {
            throw DomainError("exponential: mean must be finite and > 0");
        }
        return FiniteMeanCdf(Exponential{mean});
    }
    static FiniteMeanCdf discrete(std::vector<Atom> atoms) {
        auto table = detail::AtomTable::build(std::move(atoms), "discrete");
        if (!(table.mean() > 0.0)) throw DomainError("discrete: mean must be > 0");
        return FiniteMeanCdf(Discrete{std::move(table)});
    }
    static FiniteMeanCdf frechet(double alpha, double scale) {
        if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("frechet: alpha must lie in (0,1)");
        if (!(scale > 0.0) || !std::isfinite(scale)) {
            throw DomainError("frechet: scale must be finite and > 0");
        }
        return FiniteMeanCdf(Frechet{alpha, scale});
    }
    static FiniteMeanCdf uniform(double lo, double hi) {
        if (!(lo >= 0.0 && hi > lo) || !std::isfinite(hi)) {
            throw DomainError("uniform: need 0 <= lo < hi < inf");
        }
        return FiniteMeanCdf(Uniform{lo, hi});
    }

    const Variant& variant() const { return v_; }
    bool operator==(const FiniteMeanCdf&) const = default;

    double mean() const {
        return std::visit(
            overloaded{[](const PointMass& f) { return f.value; },
                       [](const Exponential& f) { return f.mean; },
                       [](const Discrete& f) { return f.table.mean(); },
                       [](const Frechet& f) { return f.scale * std::tgamma(1.0 - f.alpha); },
                       [](const Uniform& f) { return 0.5 * (f.lo + f.hi); }},
            v_);
    }

    double cdf(double x, Limit limit = Limit::right) const {
        if (std::isinf(x) && x > 0.0) return 1.0;
        if (x < 0.0 || (x == 0.0 && limit == Limit::left)) return 0.0;
        return std::visit(
            overloaded{
                [&](const PointMass& f) {
                    return (limit == Limit::right ? x >= f.value : x > f.value) ? 1.0 : 0.0;
                },
                [&](const Exponential& f) { return -std::expm1(-x / f.mean); },
                [&](const Discrete& f) { return f.table.cdf(x, limit); },
                [&](const Frechet& f) {
                    return std::exp(detail::FrechetKernel{f.alpha, f.scale}.log_cdf(x));
                },
                [&](const Uniform& f) { return std::clamp((x - f.lo) / (f.hi - f.lo), 0.0, 1.0); }},
            v_);
    }

    double log_cdf(double x, Limit limit = Limit::right) const {
        if (const auto* f = std::get_if<Frechet>(&v_)) {
            return detail::FrechetKernel{f->alpha, f->scale}.log_cdf(x);
        }
        if (const auto* f = std::get_if<Exponential>(&v_)) {
            return x <= 0.0 ? -kInf : std::log1p(-std::exp(-x / f->mean));
        }
        return std::log(cdf(x, limit));
    }

    double survival(double x) const {
        if (x < 0.0) return 1.0;
        return std::visit(
            overloaded{[&](const PointMass& f) { return x >= f.value ? 0.0 : 1.0; },
                       [&](const Exponential& f) { return std::exp(-x / f.mean); },
                       [&](const Discrete& f) { return f.table.survival(x); },
                       [&](const Frechet& f) {
                           return detail::FrechetKernel{f.alpha, f.scale}.survival(x);
                       },
                       [&](const Uniform& f) {
                           return std::clamp((f.hi - x) / (f.hi - f.lo), 0.0, 1.0);
                       }},
            v_);
    }

    double quantile(double p) const {
        return std::visit(
            overloaded{[&](const PointMass& f) { return f.value; },
                       [&](const Exponential& f) { return -f.mean * std::log1p(-p); },
                       [&](const Discrete& f) { return f.table.quantile(p); },
                       [&](const Frechet& f) {
                           return detail::FrechetKernel{f.alpha, f.scale}.quantile(p);
                       },
                       [&](const Uniform& f) { return f.lo + p * (f.hi - f.lo); }},
            v_);
    }

    double quantile_survival(double q) const {
        return std::visit(
            overloaded{[&](const PointMass& f) { return f.value; },
                       [&](const Exponential& f) { return -f.mean * std::log(q); },
                       [&](const Discrete& f) { return f.table.quantile_survival(q); },
                       [&](const Frechet& f) {
                           return detail::FrechetKernel{f.alpha, f.scale}.quantile_survival(q);
                       },
                       [&](const Uniform& f) { return f.hi - q * (f.hi - f.lo); }},
            v_);
    }

    double tail_integral(double a) const {
        a = std::max(a, 0.0);
        return std::visit(
            overloaded{[&](const PointMass& f) { return std::max(0.0, f.value - a); },
                       [&](const Exponential& f) { return f.mean * std::exp(-a / f.mean); },
                       [&](const Discrete& f) { return f.table.tail_integral(a); },
                       [&](const Frechet& f) {
                           return detail::FrechetKernel{f.alpha, f.scale}.tail_integral(a);
                       },
                       [&](const Uniform& f) {
                           if (a <= f.lo) return (f.lo - a) + 0.5 * (f.hi - f.lo);
                           if (a >= f.hi) return 0.0;
                           return 0.5 * (f.hi - a) * (f.hi - a) / (f.hi - f.lo);
                       }},
            v_);
    }

    double sample_size_biased(Rng& rng) const {
        return std::visit(
            overloaded{[&](const PointMass& f) { return f.value; },
                       [&](const Exponential& f) {
                           return f.mean * (maxstable::exponential(rng) + maxstable::exponential(rng));
                       },
                       [&](const Discrete& f) { return f.table.sample_size_biased(rng); },
                       [&](const Frechet& f) {
                           return detail::FrechetKernel{f.alpha, f.scale}.sample_size_biased(rng);
                       },
                       [&](const Uniform& f) {
                           const double u = uniform_open(rng);
                           return std::sqrt(f.lo * f.lo + u * (f.hi * f.hi - f.lo * f.lo));
                       }},
            v_);
    }

    std::vector<double> breakpoints() const {
        return std::visit(
            overloaded{[](const PointMass& f) { return std::vector<double>{f.value}; },
                       [](const Exponential&) { return std::vector<double>{}; },
                       [](const Discrete& f) { return f.table.values; },
                       [](const Frechet&) { return std::vector<double>{}; },
                       [](const Uniform& f) { return std::vector<double>{f.lo, f.hi}; }},
            v_);
    }

    /// inf{x : F(x) > 0}.
    double lower_support() const {
        return std::visit(
            overloaded{[](const PointMass& f) { return f.value; },
                       [](const Exponential&) { return 0.0; },
                       [](const Discrete& f) { return f.table.values.front(); },
                       [](const Frechet&) { return 0.0; },
                       [](const Uniform& f) { return f.lo; }},
            v_);
    }

    /// sup{x : F(x) < 1}; infinite for unbounded laws.
    double upper_support() const {
        return std::visit(
            overloaded{[](const PointMass& f) { return f.value; },
                       [](const Exponential&) { return kInf; },
                       [](const Discrete& f) { return f.table.values.back(); },
                       [](const Frechet&) { return kInf; },
                       [](const Uniform& f) { return f.hi; }},
            v_);
    }

  private:
    explicit FiniteMeanCdf(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

class UnitMeanCdf;

namespace detail {
struct UnitMeanRep;
UnitMeanCdf canonical_discrete(std::vector<Atom> atoms);
}

/// A distribution function F of a non-negative random variable with unit
/// mean. Immutable value handle; copies share the underlying parameters.
class UnitMeanCdf {
  public:
    static UnitMeanCdf dirac1();
    static UnitMeanCdf frechet(double alpha);
    static UnitMeanCdf two_point(double theta);
    static UnitMeanCdf unit_exponential();
    static UnitMeanCdf discrete(std::vector<Atom> atoms);

    const detail::UnitMeanRep& rep() const { return *rep_; }

    template <class Visitor>
    decltype(auto) visit(Visitor&& visitor) const;

    bool operator==(const UnitMeanCdf& other) const;

    /// F(x), or the left limit F(x-) when `limit` is Limit::left.
    double cdf(double x, Limit limit = Limit::right) const;
    double log_cdf(double x, Limit limit = Limit::right) const;
    /// 1 - F(x), computed without cancellation.
    double survival(double x) const;
    /// Integral of 1 - F over [a, inf).
    double tail_integral(double a) const;
    /// inf{x : F(x) >= p} for p in (0, 1).
    double quantile(double p) const;
    /// inf{x : 1 - F(x) <= q} for q in (0, 1).
    double quantile_survival(double q) const;
    double sample(Rng& rng) const { return quantile(uniform_open(rng)); }
    /// Draw from the size-biased law t -> integral_0^t s dF(s).
    double sample_size_biased(Rng& rng) const;
    /// Psi_F(z) = integral of 1 - F^z over [0, inf).
    double psi(double z) const;
    /// Points where F jumps or is not smooth.
    std::vector<double> breakpoints() const;
    double lower_support() const;
    double upper_support() const;
    /// True when F is a step function with finitely many atoms.
    bool is_atomic() const;

  private:
    friend UnitMeanCdf tilt(const UnitMeanCdf&, double);
    friend UnitMeanCdf rescale_to_unit_mean(const FiniteMeanCdf&);
    friend struct detail::UnitMeanRep;
    friend UnitMeanCdf detail::canonical_discrete(std::vector<Atom> atoms);

    explicit UnitMeanCdf(std::shared_ptr<const detail::UnitMeanRep> rep)
        : rep_(std::move(rep)) {}

    template <class Family>
    static UnitMeanCdf make(Family family);

    std::shared_ptr<const detail::UnitMeanRep> rep_;
};

namespace families {

struct Dirac1 {
    bool operator==(const Dirac1&) const = default;
};

struct Frechet {
    double alpha;
    double c;  // c_alpha
    bool operator==(const Frechet& o) const { return alpha == o.alpha; }
    detail::FrechetKernel kernel() const { return {alpha, std::pow(c, alpha)}; }
};

/// Mass exp(-theta) at 0 and 1 - exp(-theta) at 1 / (1 - exp(-theta)).
struct TwoPoint {
    double theta;
    double zero_mass;
    double location;
    bool operator==(const TwoPoint& o) const { return theta == o.theta; }
};

struct UnitExponential {
    bool operator==(const UnitExponential&) const = default;
};

struct Discrete {
    detail::AtomTable table;
    bool operator==(const Discrete&) const = default;
};

/// F_z(x) = F(x * Psi_F(z))^z.
struct Tilted {
    UnitMeanCdf base;
    double z;
    double psi;
    bool operator==(const Tilted& o) const { return base == o.base && z == o.z; }
};

/// F(t) = G(M_G * t) for a finite-mean G with mean M_G.
struct Rescaled {
    FiniteMeanCdf base;
    double mean;
    bool operator==(const Rescaled& o) const { return base == o.base; }
};

}  // namespace families

namespace detail {

struct UnitMeanRep {
    using Variant = std::variant<families::Dirac1, families::Frechet, families::TwoPoint,
                                 families::UnitExponential, families::Discrete,
                                 families::Tilted, families::Rescaled>;
    Variant family;
};

/// F(s / scale)^power, one factor of a product of scaled copies of F.
struct PowerTerm {
    double scale;
    double power;
};

/// Integral over [lower, inf) of 1 - prod_j F(s / scale_j)^power_j by
/// adaptive quadrature in log(s).
inline QuadratureResult integrate_product_complement(const UnitMeanCdf& f,
                                                     std::span<const PowerTerm> terms,
                                                     double lower, double abs_tol) {
    double max_scale = 0.0;
    for (const auto& t : terms) max_scale = std::max(max_scale, t.scale);
    if (terms.empty() || !(max_scale > 0.0)) return {};

    auto integrand = [&](double s) {
        double log_prod = 0.0;
        for (const auto& t : terms) {
            log_prod += t.power * f.log_cdf(s / t.scale);
            if (log_prod == -kInf) return 1.0;
        }
        return -std::expm1(log_prod);
    };

    std::vector<double> cuts;
    const auto bps = f.breakpoints();
    for (const auto& t : terms) {
        for (double bp : bps) cuts.push_back(bp * t.scale);
    }
    return integrate_tail(integrand, lower, max_scale, cuts, abs_tol);
}

// Canonical unit-mean form of a discrete law: a single atom becomes Dirac1
// and {0, q} becomes TwoPoint.

}  // namespace detail

template <class Visitor>
decltype(auto) UnitMeanCdf::visit(Visitor&& visitor) const {
    return std::visit(std::forward<Visitor>(visitor), rep_->family);
}

template <class Family>
UnitMeanCdf UnitMeanCdf::make(Family family) {
    return UnitMeanCdf(std::make_shared<const detail::UnitMeanRep>(
        detail::UnitMeanRep{std::move(family)}));
}

inline bool UnitMeanCdf::operator==(const UnitMeanCdf& other) const {
    return rep_ == other.rep_ || rep_->family == other.rep_->family;
}

inline UnitMeanCdf UnitMeanCdf::dirac1() { return make(families::Dirac1{}); }

inline UnitMeanCdf UnitMeanCdf::frechet(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("frechet: alpha must lie in (0,1)");
    return make(families::Frechet{alpha, frechet_constant(alpha)});
}

inline UnitMeanCdf UnitMeanCdf::two_point(double theta) {
    if (!(theta > 0.0) || !std::isfinite(theta)) {
        throw DomainError("two_point: theta must be finite and > 0");
    }
    return make(families::TwoPoint{theta, std::exp(-theta), -1.0 / std::expm1(-theta)});
}

inline UnitMeanCdf UnitMeanCdf::unit_exponential() {
    return make(families::UnitExponential{});
}

inline UnitMeanCdf UnitMeanCdf::discrete(std::vector<Atom> atoms) {
    auto table = detail::AtomTable::build(std::move(atoms), "discrete");
    if (std::abs(table.mean() - 1.0) > kUnitMeanTolerance) {
        throw DomainError("discrete: atoms must have unit mean (got " +
                          std::to_string(table.mean()) + ")");
    }
    return make(families::Discrete{std::move(table)});
}

inline double UnitMeanCdf::cdf(double x, Limit limit) const {
    if (std::isinf(x) && x > 0.0) return 1.0;
    if (x < 0.0 || (x == 0.0 && limit == Limit::left)) return 0.0;
    const bool right = limit == Limit::right;
    return visit(overloaded{
        [&](const families::Dirac1&) { return (right ? x >= 1.0 : x > 1.0) ? 1.0 : 0.0; },
        [&](const families::Frechet& f) { return std::exp(f.kernel().log_cdf(x)); },
        [&](const families::TwoPoint& f) {
            if (right ? x >= f.location : x > f.location) return 1.0;
            return f.zero_mass;
        },
        [&](const families::UnitExponential&) { return -std::expm1(-x); },
        [&](const families::Discrete& f) { return f.table.cdf(x, limit); },
        [&](const families::Tilted& f) { return std::exp(f.z * f.base.log_cdf(x * f.psi, limit)); },
        [&](const families::Rescaled& f) { return f.base.cdf(x * f.mean, limit); }});
}

inline double UnitMeanCdf::log_cdf(double x, Limit limit) const {
    if (std::isinf(x) && x > 0.0) return 0.0;
    if (x < 0.0 || (x == 0.0 && limit == Limit::left)) return -kInf;
    return visit(overloaded{
        [&](const families::Frechet& f) { return f.kernel().log_cdf(x); },
        [&](const families::UnitExponential&) {
            return x <= 0.0 ? -kInf : std::log1p(-std::exp(-x));
        },
        [&](const families::Tilted& f) { return f.z * f.base.log_cdf(x * f.psi, limit); },
        [&](const families::Rescaled& f) { return f.base.log_cdf(x * f.mean, limit); },
        [&](const auto&) { return std::log(cdf(x, limit)); }});
}

inline double UnitMeanCdf::survival(double x) const {
    if (x < 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    return visit(overloaded{
        [&](const families::Dirac1&) { return x >= 1.0 ? 0.0 : 1.0; },
        [&](const families::Frechet& f) { return f.kernel().survival(x); },
        [&](const families::TwoPoint& f) {
            return x >= f.location ? 0.0 : -std::expm1(-f.theta);
        },
        [&](const families::UnitExponential&) { return std::exp(-x); },
        [&](const families::Discrete& f) { return f.table.survival(x); },
        [&](const families::Tilted& f) { return -std::expm1(f.z * f.base.log_cdf(x * f.psi)); },
        [&](const families::Rescaled& f) { return f.base.survival(x * f.mean); }});
}

inline double UnitMeanCdf::tail_integral(double a) const {
    a = std::max(a, 0.0);
    if (std::isinf(a)) return 0.0;
    return visit(overloaded{
        [&](const families::Dirac1&) { return std::max(0.0, 1.0 - a); },
        [&](const families::Frechet& f) { return f.kernel().tail_integral(a); },
        [&](const families::TwoPoint& f) {
            return std::max(0.0, f.location - a) * -std::expm1(-f.theta);
        },
        [&](const families::UnitExponential&) { return std::exp(-a); },
        [&](const families::Discrete& f) { return f.table.tail_integral(a); },
        [&](const families::Tilted& f) {
            const detail::PowerTerm term{1.0, f.z};
            const auto r = detail::integrate_product_complement(
                f.base, std::span(&term, 1), a * f.psi, kCdfQuadratureTolerance);
            return r.value / f.psi;
        },
        [&](const families::Rescaled& f) { return f.base.tail_integral(a * f.mean) / f.mean; }});
}

inline double UnitMeanCdf::quantile(double p) const {
    return visit(overloaded{
        [&](const families::Dirac1&) { return 1.0; },
        [&](const families::Frechet& f) { return f.kernel().quantile(p); },
        [&](const families::TwoPoint& f) { return p <= f.zero_mass ? 0.0 : f.location; },
        [&](const families::UnitExponential&) { return -std::log1p(-p); },
        [&](const families::Discrete& f) { return f.table.quantile(p); },
        [&](const families::Tilted& f) {
            return f.base.quantile(std::exp(std::log(p) / f.z)) / f.psi;
        },
        [&](const families::Rescaled& f) { return f.base.quantile(p) / f.mean; }});
}

inline double UnitMeanCdf::quantile_survival(double q) const {
    return visit(overloaded{
        [&](const families::Dirac1&) { return 1.0; },
        [&](const families::Frechet& f) { return f.kernel().quantile_survival(q); },
        [&](const families::TwoPoint& f) {
            return q >= -std::expm1(-f.theta) ? 0.0 : f.location;
        },
        [&](const families::UnitExponential&) { return -std::log(q); },
        [&](const families::Discrete& f) { return f.table.quantile_survival(q); },
        [&](const families::Tilted& f) {
            return f.base.quantile_survival(-std::expm1(std::log1p(-q) / f.z)) / f.psi;
        },
        [&](const families::Rescaled& f) { return f.base.quantile_survival(q) / f.mean; }});
}

inline double UnitMeanCdf::sample_size_biased(Rng& rng) const {
    return visit(overloaded{
        [&](const families::Dirac1&) { return 1.0; },
        [&](const families::Frechet& f) { return f.kernel().sample_size_biased(rng); },
        [&](const families::TwoPoint& f) { return f.location; },
        [&](const families::UnitExponential&) { return exponential(rng) + exponential(rng); },
        [&](const families::Discrete& f) { return f.table.sample_size_biased(rng); },
        [&](const families::Tilted&) {
            // Invert the size-biased cdf 1 - tail(x) - x (1 - F(x)) numerically.
            const double u = uniform_open(rng);
            auto biased_cdf = [this](double x) {
                return 1.0 - tail_integral(x) - x * survival(x);
            };
            double lo = 0.0;
            double hi = 1.0;
            while (biased_cdf(hi) < u) {
                lo = hi;
                hi *= 2.0;
                if (!std::isfinite(hi)) throw NumericFailure("size-biased inversion diverged", hi);
            }
            while (hi - lo > 1e-12 * hi) {
                const double mid = 0.5 * (lo + hi);
                (biased_cdf(mid) < u ? lo : hi) = mid;
            }
            return hi;
        },
        [&](const families::Rescaled& f) { return f.base.sample_size_biased(rng) / f.mean; }});
}

inline double UnitMeanCdf::psi(double z) const {
    if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("psi: z must be finite and > 0");
    return visit(overloaded{
        [&](const families::Dirac1&) { return 1.0; },
        [&](const families::Frechet& f) { return std::pow(z, f.alpha); },
        [&](const families::TwoPoint& f) { return -f.location * std::expm1(-f.theta * z); },
        [&](const families::Discrete& f) {
            double sum = 0.0;
            double prev = 0.0;
            double cum = 0.0;
            for (std::size_t i = 0; i < f.table.values.size(); ++i) {
                sum += (f.table.values[i] - prev) * -std::expm1(z * std::log(cum));
                prev = f.table.values[i];
                cum = f.table.cumulative[i];
            }
            return sum;
        },
        [&](const auto&) {
            const detail::PowerTerm term{1.0, z};
            return detail::integrate_product_complement(*this, std::span(&term, 1), 0.0,
                                                        kCdfQuadratureTolerance)
                .value;
        }});
}

inline std::vector<double> UnitMeanCdf::breakpoints() const {
    return visit(overloaded{
        [](const families::Dirac1&) { return std::vector<double>{1.0}; },
        [](const families::Frechet&) { return std::vector<double>{}; },
        [](const families::TwoPoint& f) { return std::vector<double>{f.location}; },
        [](const families::UnitExponential&) { return std::vector<double>{}; },
        [](const families::Discrete& f) { return f.table.values; },
        [](const families::Tilted& f) {
            auto bps = f.base.breakpoints();
            for (auto& b : bps) b /= f.psi;
            return bps;
        },
        [](const families::Rescaled& f) {
            auto bps = f.base.breakpoints();
            for (auto& b : bps) b /= f.mean;
            return bps;
        }});
}

inline double UnitMeanCdf::lower_support() const {
    return visit(overloaded{
        [](const families::Dirac1&) { return 1.0; },
        [](const families::Discrete& f) { return f.table.values.front(); },
        [](const families::Tilted& f) { return f.base.lower_support() / f.psi; },
        [](const families::Rescaled& f) { return f.base.lower_support() / f.mean; },
        [](const auto&) { return 0.0; }});
}

inline double UnitMeanCdf::upper_support() const {
    return visit(overloaded{
        [](const families::Dirac1&) { return 1.0; },
        [](const families::TwoPoint& f) { return f.location; },
        [](const families::Discrete& f) { return f.table.values.back(); },
        [](const families::Tilted& f) { return f.base.upper_support() / f.psi; },
        [](const families::Rescaled& f) { return f.base.upper_support() / f.mean; },
        [](const auto&) { return kInf; }});
}

inline bool UnitMeanCdf::is_atomic() const {
    return visit(overloaded{[](const families::Dirac1&) { return true; },
                            [](const families::TwoPoint&) { return true; },
                            [](const families::Discrete&) { return true; },
                            [](const auto&) { return false; }});
}

inline UnitMeanCdf detail::canonical_discrete(std::vector<Atom> atoms) {
    auto table = AtomTable::build(std::move(atoms), "discrete");
    if (table.values.size() == 1) return UnitMeanCdf::dirac1();
    if (table.values.size() == 2 && table.values[0] == 0.0) {
        return UnitMeanCdf::two_point(-std::log(table.weights[0]));
    }
    if (std::abs(table.mean() - 1.0) > kUnitMeanTolerance) {
        throw DomainError("discrete: atoms must have unit mean");
    }
    return UnitMeanCdf::make(families::Discrete{std::move(table)});
}

/// The umbrella transform F -> F_z with F_z(x) = F(x Psi_F(z))^z, again a
/// unit-mean law. Closed under composition: tilt(tilt(F, a), b) = tilt(F, ab).
inline UnitMeanCdf tilt(const UnitMeanCdf& f, double z) {
    if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("tilt: z must be finite and > 0");
    if (z == 1.0) return f;
    return f.visit(overloaded{
        [&](const families::Dirac1&) { return f; },
        [&](const families::Frechet&) { return f; },
        [&](const families::TwoPoint& t) { return UnitMeanCdf::two_point(t.theta * z); },
        [&](const families::Discrete& d) {
            const double psi = f.psi(z);
            std::vector<Atom> atoms;
            double prev = 0.0;
            for (std::size_t i = 0; i < d.table.values.size(); ++i) {
                const double cum = std::pow(d.table.cumulative[i], z);
                atoms.push_back({d.table.values[i] / psi, cum - prev});
                prev = cum;
            }
            atoms.back().weight += 1.0 - prev;
            return detail::canonical_discrete(std::move(atoms));
        },
        [&](const families::Tilted& t) { return tilt(t.base, t.z * z); },
        [&](const auto&) {
            const double psi = f.psi(z);
            if (!(psi > 0.0) || !std::isfinite(psi)) {
                throw NumericFailure("tilt: Psi_F(z) is not finite and positive", psi);
            }
            return UnitMeanCdf::make(families::Tilted{f, z, psi});
        }});
}

/// F(t) = G(M_G t): the unit-mean rescaling of a finite-mean law G. Laws with
/// a unit-mean parametric form come back in that form.
inline UnitMeanCdf rescale_to_unit_mean(const FiniteMeanCdf& g) {
    const double mean = g.mean();
    if (!(mean > 0.0) || !std::isfinite(mean)) {
        throw DomainError("rescale_to_unit_mean: mean must be finite and > 0");
    }
    return std::visit(
        overloaded{
            [](const FiniteMeanCdf::PointMass&) { return UnitMeanCdf::dirac1(); },
            [](const FiniteMeanCdf::Exponential&) { return UnitMeanCdf::unit_exponential(); },
            [&](const FiniteMeanCdf::Discrete& d) {
                std::vector<Atom> atoms;
                for (std::size_t i = 0; i < d.table.values.size(); ++i) {
                    atoms.push_back({d.table.values[i] / mean, d.table.weights[i]});
                }
                return detail::canonical_discrete(std::move(atoms));
            },
            [](const FiniteMeanCdf::Frechet& f) { return UnitMeanCdf::frechet(f.alpha); },
            [&](const FiniteMeanCdf::Uniform&) {
                return UnitMeanCdf::make(families::Rescaled{g, mean});
            }},
        g.variant());
}

/// A component of a finitely supported mixing measure.
struct MixtureComponent {
    double weight;
    UnitMeanCdf cdf;
    bool operator==(const MixtureComponent&) const = default;
};

/// Probability measure on unit-mean laws with finitely many atoms.
class MixingMeasure {
  public:
    explicit MixingMeasure(std::vector<MixtureComponent> components)
        : components_(std::move(components)) {
        if (components_.empty()) throw DomainError("mixing measure: needs at least one component");
        double total = 0.0;
        for (const auto& c : components_) {
            if (!(c.weight > 0.0) || !std::isfinite(c.weight)) {
                throw DomainError("mixing measure: weights must be finite and > 0");
            }
            total += c.weight;
            cumulative_.push_back(total);
        }
        if (std::abs(total - 1.0) > 1e-12) {
            throw DomainError("mixing measure: weights must sum to 1 (got " +
                              std::to_string(total) + ")");
        }
    }

    static MixingMeasure dirac(UnitMeanCdf cdf) { return MixingMeasure({{1.0, std::move(cdf)}}); }

    const std::vector<MixtureComponent>& components() const { return components_; }
    std::size_t size() const { return components_.size(); }
    const UnitMeanCdf& cdf(std::size_t i) const { return components_[i].cdf; }
    double weight(std::size_t i) const { return components_[i].weight; }

    std::size_t draw(Rng& rng) const { return categorical(rng, cumulative_); }

    /// Mixture tail integral: sum_i w_i * integral_a^inf (1 - F_i).
    double tail_integral(double a) const {
        double sum = 0.0;
        for (const auto& c : components_) sum += c.weight * c.cdf.tail_integral(a);
        return sum;
    }

    bool operator==(const MixingMeasure& o) const { return components_ == o.components_; }

  private:
    std::vector<MixtureComponent> components_;
    std::vector<double> cumulative_;
};

/// The canonical pair (b, mu): l = b * l_indep + (1 - b) * integral l_F mu(dF).
class CanonicalModel {
  public:
    /// b = 1: independent unit exponentials.
    static CanonicalModel independence() { return CanonicalModel(1.0, std::nullopt); }

    CanonicalModel(double b, MixingMeasure mu) : CanonicalModel(b, std::optional(std::move(mu))) {}

    CanonicalModel(double b, std::optional<MixingMeasure> mu) : b_(b), mu_(std::move(mu)) {
        if (!(b >= 0.0 && b <= 1.0)) throw DomainError("canonical model: b must lie in [0,1]");
        if (b < 1.0 && !mu_) throw DomainError("canonical model: mu is required when b < 1");
    }

    double b() const { return b_; }
    const std::optional<MixingMeasure>& mu() const { return mu_; }
    bool has_mixture_part() const { return b_ < 1.0; }

    bool operator==(const CanonicalModel&) const = default;

  private:
    double b_;
    std::optional<MixingMeasure> mu_;
};

/// Triplet (b, c, mu) of a non-decreasing strong-IDT process
/// H_t = b t + c * sum_k -log F^(k)((Gamma_k / t)-).
struct IdtTriplet {
    double b;
    double c;
    MixingMeasure mu;

    IdtTriplet(double drift, double intensity, MixingMeasure measure)
        : b(drift), c(intensity), mu(std::move(measure)) {
        if (!(b >= 0.0) || !std::isfinite(b)) throw DomainError("idt triplet: b must be >= 0");
        if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("idt triplet: c must be > 0");
    }

    bool is_normalized() const { return std::abs(b + c - 1.0) <= 1e-12; }

    CanonicalModel to_canonical() const {
        if (!is_normalized()) throw DomainError("idt triplet: b + c must equal 1");
        return CanonicalModel(std::min(b, 1.0), mu);
    }

    static IdtTriplet from_canonical(const CanonicalModel& m) {
        if (!m.has_mixture_part()) throw DomainError("idt triplet: b = 1 has no jump part");
        return IdtTriplet(m.b(), 1.0 - m.b(), *m.mu());
    }

    bool operator==(const IdtTriplet&) const = default;
};

}  // namespace maxstable
