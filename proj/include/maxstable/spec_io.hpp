// Copyright 2026 The maxstable Authors
// SPDX-License-Identifier: Apache-2.0

//! \file spec_io.hpp
//! JSON model specifications: parsing with field-path error messages and a
//! canonical dump that re-parses to an identical model.
//!
//! Canonical model:   {"b": 0.5, "mu": [{"weight": 1, "cdf": {"family": "frechet", "alpha": 0.5}}]}
//! Levy subordinator: {"levy": {"b_L": 0, "atoms": [[0.6931471805599453, 2], ["inf", 1]]}}
//! Transforms:        "transform": {"kind": "stable", "alpha": 0.5} or a list, applied in order
//! IDT triplet:       {"b": 0.5, "c": 0.5, "mu": [...]}

#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "maxstable/distributions.hpp"
#include "maxstable/errors.hpp"
#include "maxstable/stdf.hpp"

namespace maxstable {

/// Malformed or invalid specification; the message names the field path.
class SpecError : public DomainError {
  public:
    using DomainError::DomainError;
};

struct Transform {
    enum class Kind { stable, inclusion_exclusion };
    Kind kind;
    double alpha = 0.0;
    bool operator==(const Transform&) const = default;
};

/// A parsed model: a canonical pair or a Levy spec, then transforms.
struct ModelSpec {
    std::variant<CanonicalModel, LevySpec> base;
    std::vector<Transform> transforms;

    StdfEvaluator evaluator() const {
        StdfEvaluator l = std::visit(
            overloaded{[](const CanonicalModel& m) { return make_evaluator(m); },
                       [](const LevySpec& s) -> StdfEvaluator {
                           return [s](std::span<const double> t) { return stdf_levy(s, t); };
                       }},
            base);
        for (const auto& tr : transforms) {
            l = tr.kind == Transform::Kind::stable ? make_stable_transform(std::move(l), tr.alpha)
                                                   : make_inclusion_exclusion(std::move(l));
        }
        return l;
    }

    /// Canonical pair for the samplers; transforms have no sampler.
    CanonicalModel canonical() const {
        if (!transforms.empty()) {
            throw SpecError("transform: sampling is only defined for untransformed models");
        }
        if (const auto* m = std::get_if<CanonicalModel>(&base)) return *m;
        return std::get<LevySpec>(base).to_canonical();
    }

    bool operator==(const ModelSpec&) const = default;
};

namespace spec_io {

using Json = nlohmann::json;

namespace detail {

inline std::string join(const std::string& path, const std::string& field) {
    return path.empty() ? field : path + "." + field;
}

inline std::string index_path(const std::string& path, std::size_t i) {
    return path + "[" + std::to_string(i) + "]";
}

inline const Json& field(const Json& obj, const std::string& path, const char* name) {
    if (!obj.is_object()) throw SpecError(path.empty() ? "spec: expected an object" : path + ": expected an object");
    const auto it = obj.find(name);
    if (it == obj.end()) throw SpecError(join(path, name) + ": missing");
    return *it;
}

inline double number(const Json& v, const std::string& path) {
    if (v.is_string() && v.get<std::string>() == "inf") return kInf;
    if (!v.is_number()) throw SpecError(path + ": expected a number");
    return v.get<double>();
}

inline double number_field(const Json& obj, const std::string& path, const char* name) {
    return number(field(obj, path, name), join(path, name));
}

template <class F>
auto wrap(const std::string& path, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const SpecError&) {
        throw;
    } catch (const DomainError& e) {
        throw SpecError(path + ": " + e.what());
    }
}

inline std::vector<Atom> atoms(const Json& v, const std::string& path) {
    if (!v.is_array()) throw SpecError(path + ": expected a list of [value, weight] pairs");
    std::vector<Atom> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto p = index_path(path, i);
        if (!v[i].is_array() || v[i].size() != 2) throw SpecError(p + ": expected [value, weight]");
        out.push_back({number(v[i][0], p + "[0]"), number(v[i][1], p + "[1]")});
    }
    return out;
}

inline Json atoms_json(const maxstable::detail::AtomTable& t) {
    Json a = Json::array();
    for (std::size_t i = 0; i < t.values.size(); ++i) a.push_back({t.values[i], t.weights[i]});
    return a;
}

inline std::string kind(const Json& obj, const std::string& path, const char* key) {
    const auto& v = field(obj, path, key);
    if (!v.is_string()) throw SpecError(join(path, key) + ": expected a string");
    return v.get<std::string>();
}

}  // namespace detail

inline FiniteMeanCdf parse_finite_mean(const Json& v, const std::string& path) {
    const auto k = detail::kind(v, path, "kind");
    return detail::wrap(path, [&] {
        if (k == "point_mass") return FiniteMeanCdf::point_mass(detail::number_field(v, path, "value"));
        if (k == "exponential") return FiniteMeanCdf::exponential(detail::number_field(v, path, "mean"));
        if (k == "discrete") {
            return FiniteMeanCdf::discrete(detail::atoms(detail::field(v, path, "atoms"), detail::join(path, "atoms")));
        }
        if (k == "frechet") {
            return FiniteMeanCdf::frechet(detail::number_field(v, path, "alpha"),
                                          detail::number_field(v, path, "scale"));
        }
        if (k == "uniform") {
            return FiniteMeanCdf::uniform(detail::number_field(v, path, "lo"),
                                          detail::number_field(v, path, "hi"));
        }
        throw SpecError(detail::join(path, "kind") + ": unknown descriptor '" + k + "'");
    });
}

inline Json dump_finite_mean(const FiniteMeanCdf& g) {
    return std::visit(
        overloaded{[](const FiniteMeanCdf::PointMass& f) { return Json{{"kind", "point_mass"}, {"value", f.value}}; },
                   [](const FiniteMeanCdf::Exponential& f) { return Json{{"kind", "exponential"}, {"mean", f.mean}}; },
                   [](const FiniteMeanCdf::Discrete& f) {
                       return Json{{"kind", "discrete"}, {"atoms", detail::atoms_json(f.table)}};
                   },
                   [](const FiniteMeanCdf::Frechet& f) {
                       return Json{{"kind", "frechet"}, {"alpha", f.alpha}, {"scale", f.scale}};
                   },
                   [](const FiniteMeanCdf::Uniform& f) { return Json{{"kind", "uniform"}, {"lo", f.lo}, {"hi", f.hi}}; }},
        g.variant());
}

inline UnitMeanCdf parse_cdf(const Json& v, const std::string& path) {
    const auto fam = detail::kind(v, path, "family");
    return detail::wrap(path, [&] {
        if (fam == "dirac1") return UnitMeanCdf::dirac1();
        if (fam == "unit_exponential") return UnitMeanCdf::unit_exponential();
        if (fam == "frechet") return UnitMeanCdf::frechet(detail::number_field(v, path, "alpha"));
        if (fam == "two_point") return UnitMeanCdf::two_point(detail::number_field(v, path, "theta"));
        if (fam == "discrete") {
            return UnitMeanCdf::discrete(detail::atoms(detail::field(v, path, "atoms"), detail::join(path, "atoms")));
        }
        if (fam == "tilted") {
            const auto base = parse_cdf(detail::field(v, path, "base"), detail::join(path, "base"));
            return tilt(base, detail::number_field(v, path, "z"));
        }
        if (fam == "rescaled") {
            return rescale_to_unit_mean(parse_finite_mean(detail::field(v, path, "base"), detail::join(path, "base")));
        }
        throw SpecError(detail::join(path, "family") + ": unknown family '" + fam + "'");
    });
}

inline Json dump_cdf(const UnitMeanCdf& f) {
    return f.visit(overloaded{
        [](const families::Dirac1&) { return Json{{"family", "dirac1"}}; },
        [](const families::UnitExponential&) { return Json{{"family", "unit_exponential"}}; },
        [](const families::Frechet& x) { return Json{{"family", "frechet"}, {"alpha", x.alpha}}; },
        [](const families::TwoPoint& x) { return Json{{"family", "two_point"}, {"theta", x.theta}}; },
        [](const families::Discrete& x) { return Json{{"family", "discrete"}, {"atoms", detail::atoms_json(x.table)}}; },
        [](const families::Tilted& x) { return Json{{"family", "tilted"}, {"base", dump_cdf(x.base)}, {"z", x.z}}; },
        [](const families::Rescaled& x) { return Json{{"family", "rescaled"}, {"base", dump_finite_mean(x.base)}}; }});
}

inline MixingMeasure parse_mu(const Json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) throw SpecError(path + ": expected a non-empty list of components");
    std::vector<MixtureComponent> comps;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto p = detail::index_path(path, i);
        const double w = detail::number_field(v[i], p, "weight");
        // Either {"weight", "cdf": {...}} or the family fields inline.
        const bool nested = v[i].contains("cdf");
        comps.push_back({w, parse_cdf(nested ? v[i]["cdf"] : v[i], nested ? detail::join(p, "cdf") : p)});
    }
    return detail::wrap(path, [&] { return MixingMeasure(std::move(comps)); });
}

inline Json dump_mu(const MixingMeasure& mu) {
    Json out = Json::array();
    for (const auto& c : mu.components()) out.push_back({{"weight", c.weight}, {"cdf", dump_cdf(c.cdf)}});
    return out;
}

inline LevySpec parse_levy(const Json& v, const std::string& path) {
    const double b = detail::number_field(v, path, "b_L");
    std::vector<LevyAtom> atoms;
    if (v.contains("atoms")) {
        const auto& a = v["atoms"];
        const auto ap = detail::join(path, "atoms");
        if (!a.is_array()) throw SpecError(ap + ": expected a list of [theta, beta] pairs");
        for (std::size_t i = 0; i < a.size(); ++i) {
            const auto p = detail::index_path(ap, i);
            if (!a[i].is_array() || a[i].size() != 2) throw SpecError(p + ": expected [theta, beta]");
            atoms.push_back({detail::number(a[i][0], p + "[0]"), detail::number(a[i][1], p + "[1]")});
        }
    }
    return detail::wrap(path, [&] { return LevySpec(b, std::move(atoms)); });
}

inline Json dump_levy(const LevySpec& s) {
    Json atoms = Json::array();
    for (const auto& a : s.atoms) {
        atoms.push_back({std::isinf(a.theta) ? Json("inf") : Json(a.theta), a.beta});
    }
    return Json{{"b_L", s.b_l}, {"atoms", atoms}};
}

inline Transform parse_transform(const Json& v, const std::string& path) {
    const auto k = detail::kind(v, path, "kind");
    if (k == "stable") {
        const double alpha = detail::number_field(v, path, "alpha");
        if (!(alpha > 0.0 && alpha < 1.0)) throw SpecError(detail::join(path, "alpha") + ": must lie in (0,1)");
        return {Transform::Kind::stable, alpha};
    }
    if (k == "inclusion_exclusion") return {Transform::Kind::inclusion_exclusion, 0.0};
    throw SpecError(detail::join(path, "kind") + ": unknown transform '" + k + "'");
}

inline CanonicalModel parse_canonical(const Json& v, const std::string& path = "") {
    const double b = detail::number_field(v, path, "b");
    std::optional<MixingMeasure> mu;
    if (v.contains("mu")) mu = parse_mu(v["mu"], detail::join(path, "mu"));
    if (b < 1.0 && !mu) throw SpecError(detail::join(path, "mu") + ": missing (required when b < 1)");
    return detail::wrap(detail::join(path, "b"), [&] { return CanonicalModel(b, std::move(mu)); });
}

inline Json dump_canonical(const CanonicalModel& m) {
    Json out{{"b", m.b()}};
    if (m.mu()) out["mu"] = dump_mu(*m.mu());
    return out;
}

inline ModelSpec parse_model(const Json& v) {
    if (!v.is_object()) throw SpecError("spec: expected a JSON object");
    const bool has_levy = v.contains("levy");
    const bool has_canonical = v.contains("b") || v.contains("mu");
    if (has_levy == has_canonical) throw SpecError("spec: exactly one of (b, mu) or levy must be given");
    ModelSpec spec{has_levy ? std::variant<CanonicalModel, LevySpec>(parse_levy(v["levy"], "levy"))
                            : std::variant<CanonicalModel, LevySpec>(parse_canonical(v)),
                   {}};
    if (v.contains("transform")) {
        const auto& t = v["transform"];
        if (t.is_array()) {
            for (std::size_t i = 0; i < t.size(); ++i) {
                spec.transforms.push_back(parse_transform(t[i], detail::index_path("transform", i)));
            }
        } else {
            spec.transforms.push_back(parse_transform(t, "transform"));
        }
    }
    return spec;
}

inline Json dump_model(const ModelSpec& spec) {
    Json out = std::visit(overloaded{[](const CanonicalModel& m) { return dump_canonical(m); },
                                     [](const LevySpec& s) { return Json{{"levy", dump_levy(s)}}; }},
                          spec.base);
    if (!spec.transforms.empty()) {
        Json list = Json::array();
        for (const auto& t : spec.transforms) {
            if (t.kind == Transform::Kind::stable) {
                list.push_back({{"kind", "stable"}, {"alpha", t.alpha}});
            } else {
                list.push_back({{"kind", "inclusion_exclusion"}});
            }
        }
        out["transform"] = list;
    }
    return out;
}

/// Triplet form {"b", "c", "mu"}; without "c", a canonical pair with b < 1
/// gives c = 1 - b.
inline IdtTriplet parse_triplet(const Json& v) {
    if (!v.is_object()) throw SpecError("spec: expected a JSON object");
    const double b = detail::number_field(v, "", "b");
    const double c = v.contains("c") ? detail::number(v["c"], "c") : 1.0 - b;
    auto mu = parse_mu(detail::field(v, "", "mu"), "mu");
    return detail::wrap("spec", [&] { return IdtTriplet(b, c, std::move(mu)); });
}

inline Json dump_triplet(const IdtTriplet& t) {
    return Json{{"b", t.b}, {"c", t.c}, {"mu", dump_mu(t.mu)}};
}

inline Json parse_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw SpecError(std::string("spec: invalid JSON: ") + e.what());
    }
}

}  // namespace spec_io
}  // namespace maxstable
