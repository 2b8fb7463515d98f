// Copyright 2026 The maxstable Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance battery: one PASS/FAIL line per criterion, nonzero exit on any
// failure. argv[1] is the path of the command-line tool.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "generators.hpp"
#include "maxstable/maxstable.hpp"
#include "oracles.hpp"

using namespace maxstable;

namespace {

const double kLn2 = std::log(2.0);

struct Outcome {
    bool passed = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok && passed) detail = what;
        passed = passed && ok;
    }
};

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

CanonicalModel single(double b, UnitMeanCdf f) { return CanonicalModel(b, MixingMeasure::dirac(std::move(f))); }

std::vector<std::pair<std::string, CanonicalModel>> battery() {
    std::vector<std::pair<std::string, CanonicalModel>> out;
    const std::array<std::pair<const char*, UnitMeanCdf>, 3> fams{{{"dirac1", UnitMeanCdf::dirac1()},
                                                                   {"frechet0.5", UnitMeanCdf::frechet(0.5)},
                                                                   {"twopoint", UnitMeanCdf::two_point(kLn2)}}};
    for (double b : {0.0, 0.5, 1.0}) {
        for (const auto& [name, f] : fams) {
            out.emplace_back("b=" + std::to_string(b).substr(0, 3) + " " + name,
                             b == 1.0 ? CanonicalModel::independence() : single(b, f));
        }
    }
    return out;
}

std::string fmt(const char* pattern, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Outcome logistic_oracle() {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    gen::Gen g(101);
    double worst = 0.0;
    for (double alpha : {0.2, 0.5, 0.8}) {
        for (int i = 0; i < 50; ++i) {
            const auto t = g.weights(1 + g.index(5));
            const double err = std::abs(stdf_extremal_quadrature(UnitMeanCdf::frechet(alpha), t) - oracle::logistic(t, alpha));
            worst = std::max(worst, err);
        }
    }
    const double elapsed = seconds_since(start);
    o.require(worst <= 1e-7, fmt("max error %.3g", worst));
    o.require(elapsed <= 10.0, fmt("took %.1f s", elapsed));
    o.detail = o.passed ? fmt("max error %.3g, %.2f s", worst, elapsed) : o.detail;
    return o;
}

Outcome marshall_olkin_bridge() {
    Outcome o;
    gen::Gen g(102);
    double worst = 0.0;
    for (double theta : {0.3, kLn2, 2.0}) {
        const LevySpec spec(0.0, {{theta, 1.0 / -std::expm1(-theta)}});
        for (int i = 0; i < 50; ++i) {
            const auto t = g.sparse_weights(1 + g.index(6));
            worst = std::max(worst, std::abs(stdf_levy(spec, t) - stdf_extremal(UnitMeanCdf::two_point(theta), t)));
        }
    }
    const double spot = stdf_levy(LevySpec(0.0, {{kLn2, 2.0}}), std::vector<double>{1, 1});
    o.require(worst <= 1e-10, fmt("max error %.3g", worst));
    o.require(std::abs(spot - 1.5) <= 1e-10, fmt("l(1,1) = %.15g", spot));
    if (o.passed) o.detail = fmt("max error %.3g, l(1,1) = %.12f", worst, spot);
    return o;
}

const std::vector<std::vector<double>> kSurvivalPoints{{1.0, 1.0}, {0.5, 1.0, 0.3}, {0.2, 0.4, 0.0, 0.9}};

Outcome survival_battery() {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    std::uint64_t seed = 300;
    for (const auto& [name, model] : battery()) {
        for (const auto& t : kSurvivalPoints) {
            const auto r = mc_survival_check(model, t, 100000, {seed++, workers()});
            worst = std::max(worst, std::abs(r.z_score));
            o.require(r.passed, name + " " + r.name + fmt(" z=%.2f", r.z_score));
        }
    }
    const double elapsed = seconds_since(start);
    o.require(elapsed <= 60.0, fmt("took %.1f s", elapsed));
    if (o.passed) o.detail = fmt("27 checks, max |z| %.2f, %.1f s", worst, elapsed);
    return o;
}

Outcome pickands_battery() {
    Outcome o;
    double worst = 0.0;
    std::uint64_t seed = 400;
    const std::array<std::vector<double>, 3> points{std::vector<double>{1.0, 2.0}, std::vector<double>{1.0, 2.0, 3.0},
                                                    std::vector<double>{0.5, 1.0, 0.2, 2.0, 1.5}};
    for (const auto& [name, model] : battery()) {
        for (const auto& t : points) {
            const McOptions opts{seed++, workers()};
            const auto r = mc_pickands_check(model, t, 100000, opts);
            worst = std::max(worst, std::abs(r.z_score));
            o.require(r.passed, name + " " + r.name + fmt(" z=%.2f", r.z_score));
            for (const auto& m : mc_pickands_mean_checks(model, t.size(), 100000, opts)) {
                worst = std::max(worst, std::abs(m.z_score));
                o.require(m.passed, name + fmt(" d=%g ", static_cast<double>(t.size())) + m.name + fmt(" z=%.2f", m.z_score));
            }
        }
    }
    const auto exact = mc_pickands_check(single(0.0, UnitMeanCdf::dirac1()), std::vector<double>{2.0, 1.0, 0.5}, 100000,
                                         {499, workers()});
    o.require(exact.empirical == exact.exact && exact.std_error == 0.0,
              fmt("zero-variance case %.17g vs %.17g", exact.empirical, exact.exact));
    if (o.passed) o.detail = fmt("max |z| %.2f, comonotone case exact at %.1f", worst, exact.exact);
    return o;
}

Outcome l2_identity() {
    Outcome o;
    const std::vector<UnitMeanCdf> fams{
        UnitMeanCdf::dirac1(),
        UnitMeanCdf::unit_exponential(),
        UnitMeanCdf::frechet(0.2),
        UnitMeanCdf::frechet(0.5),
        UnitMeanCdf::frechet(0.8),
        UnitMeanCdf::two_point(0.3),
        UnitMeanCdf::two_point(kLn2),
        UnitMeanCdf::two_point(2.0),
        UnitMeanCdf::discrete({{0.5, 0.5}, {1.5, 0.5}}),
        tilt(UnitMeanCdf::unit_exponential(), 2.0),
        tilt(UnitMeanCdf::frechet(0.5), 3.0),
        rescale_to_unit_mean(FiniteMeanCdf::uniform(1.0, 3.0)),
        rescale_to_unit_mean(FiniteMeanCdf::exponential(2.0)),
    };
    double worst = 0.0;
    double largest = 0.0;
    for (const auto& f : fams) {
        const double a = pairwise_l2_identity(f);
        const double b = stdf_extremal(f, std::vector<double>{1.0, 1.0});
        worst = std::max(worst, std::abs(a - b));
        largest = std::max(largest, a);
        o.require(std::abs(a - b) <= 1e-8, fmt("identity %.15g vs %.15g", a, b));
        o.require(a < 2.0, fmt("value %.15g not below 2", a));
    }
    double prev = 0.0;
    for (double alpha : {0.5, 0.9, 0.99, 0.999, 0.9999}) {
        const double v = stdf_extremal(UnitMeanCdf::frechet(alpha), std::vector<double>{1.0, 1.0});
        o.require(std::abs(v - std::pow(2.0, alpha)) <= 1e-12 && v > prev && v < 2.0,
                  fmt("frechet(%.4f) gives %.15g", alpha, v));
        prev = v;
    }
    o.require(2.0 - prev < 1e-3, fmt("limit gap %.3g", 2.0 - prev));
    if (o.passed) o.detail = fmt("max error %.3g, 2 - l(1,1) at alpha=0.9999: %.3g", worst, 2.0 - prev);
    return o;
}

Outcome drift_recovery() {
    Outcome o;
    double worst = 0.0;
    for (double b : {0.0, 0.3, 0.7}) {
        const CanonicalModel models[] = {
            single(b, UnitMeanCdf::frechet(0.5)),
            CanonicalModel(b, MixingMeasure({{0.5, UnitMeanCdf::frechet(0.5)}, {0.5, UnitMeanCdf::two_point(kLn2)}})),
        };
        for (const auto& m : models) {
            const double est = estimate_drift(m, 10000);
            worst = std::max(worst, std::abs(est - b));
            o.require(std::abs(est - b) <= 0.01, fmt("b=%.1f estimate %.6f", b, est));
        }
    }
    const double one = estimate_drift(CanonicalModel::independence(), 10000);
    o.require(one == 1.0, fmt("b=1 estimate %.17g", one));
    if (o.passed) o.detail = fmt("max error %.3g, b=1 exact", worst);
    return o;
}

Outcome conditional_iid_equivalence() {
    Outcome o;
    const std::vector<std::pair<std::string, IdtTriplet>> triplets{
        {"(0,1,twopoint)", IdtTriplet{0.0, 1.0, MixingMeasure::dirac(UnitMeanCdf::two_point(kLn2))}},
        {"(0.5,0.5,twopoint)", IdtTriplet{0.5, 0.5, MixingMeasure::dirac(UnitMeanCdf::two_point(kLn2))}},
        {"(0,1,dirac1)", IdtTriplet{0.0, 1.0, MixingMeasure::dirac(UnitMeanCdf::dirac1())}},
    };
    const std::vector<std::vector<double>> points{{1.0, 1.0, 0.0}, {0.5, 1.0, 0.3}, {0.2, 0.2, 0.2}};
    double worst = 0.0;
    std::uint64_t seed = 700;
    for (const auto& [name, trip] : triplets) {
        const auto model = trip.to_canonical();
        const auto a = draw_batch(100000, seed++, workers(), [&](Rng& rng) { return sample_minstable(model, 3, rng); });
        const auto b = draw_batch(100000, seed++, workers(), [&](Rng& rng) { return sample_conditional_iid(trip, 3, rng); });
        for (const auto& t : points) {
            const auto ra = survival_report(model, t, a, kDefaultZThreshold);
            const auto rb = survival_report(model, t, b, kDefaultZThreshold);
            const double se = std::sqrt(2.0) * ra.std_error;
            const double zab = se > 0.0 ? (ra.empirical - rb.empirical) / se : 0.0;
            worst = std::max({worst, std::abs(ra.z_score), std::abs(rb.z_score), std::abs(zab)});
            o.require(ra.passed, name + " minstable " + ra.name + fmt(" z=%.2f", ra.z_score));
            o.require(rb.passed, name + " conditional " + rb.name + fmt(" z=%.2f", rb.z_score));
            o.require(std::abs(zab) <= kDefaultZThreshold, name + " " + ra.name + fmt(" paired z=%.2f", zab));
        }
    }
    if (o.passed) o.detail = fmt("max |z| %.2f", worst);
    return o;
}

Outcome transform_identities() {
    Outcome o;
    gen::Gen g(800);
    double worst_stable = 0.0;
    double worst_ie = 0.0;
    const StdfEvaluator comonotone = [](std::span<const double> t) {
        return t.empty() ? 0.0 : *std::max_element(t.begin(), t.end());
    };
    for (int i = 0; i < 30; ++i) {
        const auto l = make_evaluator(g.model());
        const double a = g.uniform(0.1, 0.95);
        const double b = g.uniform(0.1, 0.95);
        const auto t = g.weights(1 + g.index(5));
        const double nested = stable_transform(make_stable_transform(l, a), b, t);
        const double direct = stable_transform(l, a * b, t);
        worst_stable = std::max(worst_stable, std::abs(nested - direct) / std::max(1.0, direct));

        const auto s = g.sparse_weights(1 + g.index(7));
        const double fix = inclusion_exclusion(comonotone, s);
        worst_ie = std::max(worst_ie, std::abs(fix - (s.empty() ? 0.0 : *std::max_element(s.begin(), s.end()))));
        const std::vector<double> ones{1.0, 1.0};
        const double pair = inclusion_exclusion(l, ones);
        worst_ie = std::max(worst_ie, std::abs(pair - (2.0 - 1.0 / l(ones))));
    }
    o.require(worst_stable <= 1e-12, fmt("composition error %.3g", worst_stable));
    o.require(worst_ie <= 1e-9, fmt("inclusion-exclusion error %.3g", worst_ie));
    if (o.passed) o.detail = fmt("composition %.3g, inclusion-exclusion %.3g", worst_stable, worst_ie);
    return o;
}

Outcome three_margin() {
    Outcome o;
    o.require(check_3margin_ciid(1, 1, 1).feasible, "(1,1,1) infeasible");
    o.require(check_3margin_ciid(2, 2, 2).feasible, "(2,2,2) infeasible");
    o.require(!check_3margin_ciid(1, 2, 1).feasible, "(1,2,1) feasible");
    gen::Gen g(900);
    for (int i = 0; i < 200; ++i) {
        const auto check = check_3margin_ciid(g.uniform(0.1, 4.0), g.uniform(0.1, 4.0), g.uniform(0.1, 4.0));
        const auto t = g.sparse_weights(3);
        const double v = check.l3(t);
        const double lo = *std::max_element(t.begin(), t.end());
        const double hi = t[0] + t[1] + t[2];
        o.require(v >= lo - 1e-12 && v <= hi + 1e-12, fmt("bounds violated: %.15g", v));
        o.require(std::abs(check.l3(g.permutation_of(t)) - v) <= 1e-12, "not symmetric");
        const double lambda = g.uniform(0.1, 10.0);
        std::vector<double> s = t;
        for (auto& x : s) x *= lambda;
        o.require(std::abs(check.l3(s) - lambda * v) <= 1e-12 * std::max(1.0, lambda * v), "not homogeneous");
    }
    if (o.passed) o.detail = "feasibility verdicts match, 200 random inputs";
    return o;
}

std::string capture(const std::string& command) {
    std::string out;
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) return "<popen failed>";
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    const int status = pclose(pipe);
    return out + "\n<exit " + std::to_string(status) + ">";
}

Outcome determinism(const std::string& tool) {
    Outcome o;
    // Library samplers.
    const auto model = CanonicalModel(0.3, MixingMeasure({{0.5, UnitMeanCdf::frechet(0.5)}, {0.5, UnitMeanCdf::two_point(kLn2)}}));
    const IdtTriplet trip{0.5, 0.5, MixingMeasure::dirac(UnitMeanCdf::two_point(kLn2))};
    const std::vector<std::pair<std::string, std::function<std::vector<double>(Rng&)>>> samplers{
        {"sample_minstable", [&](Rng& rng) { return sample_minstable(model, 4, rng); }},
        {"sample_pickands", [&](Rng& rng) { return sample_pickands(model, 4, rng).coords; }},
        {"sample_conditional_iid", [&](Rng& rng) { return sample_conditional_iid(trip, 4, rng); }},
        {"sample_idt_path", [&](Rng& rng) {
             const auto p = sample_idt_path(trip, 2.0, rng);
             return std::vector<double>{p.evaluate(0.5), p.evaluate(2.0), static_cast<double>(p.atoms().size())};
         }},
    };
    for (const auto& [name, draw] : samplers) {
        const auto a = draw_batch(5000, 1000, 1, draw);
        o.require(a == draw_batch(5000, 1000, 1, draw), name + " differs between runs");
        o.require(a == draw_batch(5000, 1000, 4, draw), name + " differs between 1 and 4 workers");
    }

    // Command-line tool.
    const auto dir = std::filesystem::temp_directory_path();
    const auto spec = (dir / "maxstable_acceptance_spec.json").string();
    std::ofstream(spec) << R"({"b": 0.5, "c": 0.5, "mu": [{"weight": 1, "family": "two_point", "theta": 0.6931471805599453}]})";
    const std::string base = "\"" + tool + "\" ";
    const std::vector<std::string> commands{
        "eval --spec " + spec + " --t 1,2,3",
        "sample --spec " + spec + " --d 3 --n 4000 --seed 11",
        "pickands --spec " + spec + " --d 3 --n 4000 --seed 11",
        "verify --spec " + spec + " --t 0.5,1 --n 4000 --seed 11",
        "path --spec " + spec + " --horizon 3 --grid 400 --seed 11",
    };
    for (const auto& cmd : commands) {
        const auto first = capture(base + cmd + " --workers 1 2>&1");
        const auto plain = capture(base + cmd + " 2>&1");
        o.require(plain.find("<exit 0>") != std::string::npos, "'" + cmd + "' failed: " + plain.substr(0, 200));
        o.require(plain == capture(base + cmd + " 2>&1"), "'" + cmd + "' differs between runs");
        o.require(first == plain, "'" + cmd + "' differs with --workers 1");
        o.require(first == capture(base + cmd + " --workers 4 2>&1"), "'" + cmd + "' differs between 1 and 4 workers");
    }
    std::filesystem::remove(spec);
    if (o.passed) o.detail = "4 samplers and 5 commands byte-identical";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance PATH_TO_MAXSTABLE_TOOL\n";
        return 2;
    }
    const std::string tool = argv[1];
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"logistic quadrature oracle", logistic_oracle},
        {"Marshall-Olkin bridge", marshall_olkin_bridge},
        {"survival Monte Carlo battery", survival_battery},
        {"Pickands Monte Carlo battery", pickands_battery},
        {"pairwise L2 identity", l2_identity},
        {"drift recovery", drift_recovery},
        {"conditionally iid equivalence", conditional_iid_equivalence},
        {"transform identities", transform_identities},
        {"three-margin feasibility", three_margin},
        {"determinism", [&] { return determinism(tool); }},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.passed = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failures += !o.passed;
        std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " ("
                  << o.detail << ")" << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
