// Copyright 2026 The maxstable Authors
// SPDX-License-Identifier: Apache-2.0

//! \file cli.hpp
//! Command-line front end. run_cli() is the whole program; tools/maxstable.cpp
//! only forwards to it, which keeps the commands testable in-process.
//!
//! Exit codes: 0 ok, 2 parse or invalid input, 3 numeric failure,
//! 4 resource budget exhausted, 5 verification failed.

#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "maxstable/distributions.hpp"
#include "maxstable/errors.hpp"
#include "maxstable/samplers.hpp"
#include "maxstable/spec_io.hpp"
#include "maxstable/stdf.hpp"
#include "maxstable/verify.hpp"

namespace maxstable::cli {

enum ExitCode : int {
    kOk = 0,
    kParseError = 2,
    kNumericError = 3,
    kResourceError = 4,
    kVerificationFailed = 5,
};

namespace detail {

inline std::string read_source(const std::string& path, std::istream& in) {
    if (path == "-") {
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
    std::ifstream f(path);
    if (!f) throw SpecError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline double parse_real(const std::string& s, const std::string& what) {
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') throw SpecError(what + ": '" + s + "' is not a number");
    return v;
}

inline std::vector<double> parse_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_real(item, what));
    if (out.empty()) throw SpecError(what + ": empty list");
    for (double x : out) {
        if (!(x >= 0.0) || !std::isfinite(x)) throw SpecError(what + ": entries must be finite and >= 0");
    }
    return out;
}

// Rows of a numeric CSV with a header line.
inline std::vector<std::vector<double>> parse_csv(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::stringstream ss(text);
    std::string line;
    bool header = true;
    std::size_t line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        if (header) {
            header = false;
            continue;
        }
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            row.push_back(cell == "inf" ? kInf : parse_real(cell, "input line " + std::to_string(line_no)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline void write_row(std::ostream& os, const std::vector<double>& row) {
    for (std::size_t k = 0; k < row.size(); ++k) {
        if (k) os << ',';
        os << format_double(row[k]);
    }
    os << '\n';
}

inline void write_header(std::ostream& os, char prefix, std::size_t d) {
    for (std::size_t k = 0; k < d; ++k) {
        if (k) os << ',';
        os << prefix << k + 1;
    }
    os << '\n';
}

}  // namespace detail

struct Options {
    std::string spec_path;
    std::string t_list;
    std::string input_path;
    std::size_t d = 2;
    std::size_t n = 1;
    std::uint64_t seed = kDefaultSeed;
    double tol = 0.0;  // 0 selects the command's default
    double horizon = 1.0;
    std::size_t grid = 101;
    unsigned workers = 1;
    double z_threshold = kDefaultZThreshold;
    bool dump_spec = false;
};

namespace detail {

inline int cmd_eval(const Options& o, std::ostream& out, std::istream& in) {
    const auto spec = spec_io::parse_model(spec_io::parse_text(read_source(o.spec_path, in)));
    if (o.dump_spec) {
        out << spec_io::dump_model(spec).dump() << '\n';
        return kOk;
    }
    if (o.t_list.empty()) throw SpecError("--t: required");
    const auto t = parse_list(o.t_list, "--t");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12f", spec.evaluator()(t));
    out << buf << '\n';
    return kOk;
}

inline int cmd_sample(const Options& o, std::ostream& out, std::istream& in) {
    const auto spec = spec_io::parse_model(spec_io::parse_text(read_source(o.spec_path, in)));
    if (o.dump_spec) {
        out << spec_io::dump_model(spec).dump() << '\n';
        return kOk;
    }
    const auto model = spec.canonical();
    const double tol = o.tol > 0.0 ? o.tol : kDefaultSamplerTolerance;
    const auto rows =
        draw_batch(o.n, o.seed, o.workers, [&](Rng& rng) { return sample_minstable(model, o.d, rng, tol); });
    write_header(out, 'y', o.d);
    for (const auto& r : rows) write_row(out, r);
    return kOk;
}

inline int cmd_pickands(const Options& o, std::ostream& out, std::istream& in) {
    const auto spec = spec_io::parse_model(spec_io::parse_text(read_source(o.spec_path, in)));
    if (o.dump_spec) {
        out << spec_io::dump_model(spec).dump() << '\n';
        return kOk;
    }
    const auto model = spec.canonical();
    const auto rows =
        draw_batch(o.n, o.seed, o.workers, [&](Rng& rng) { return sample_pickands(model, o.d, rng).coords; });
    write_header(out, 'x', o.d);
    for (const auto& r : rows) write_row(out, r);
    return kOk;
}

inline int cmd_verify(const Options& o, std::ostream& out, std::istream& in) {
    const auto spec = spec_io::parse_model(spec_io::parse_text(read_source(o.spec_path, in)));
    if (o.dump_spec) {
        out << spec_io::dump_model(spec).dump() << '\n';
        return kOk;
    }
    const auto model = spec.canonical();
    if (o.t_list.empty()) throw SpecError("--t: required");
    const auto t = parse_list(o.t_list, "--t");
    McOptions mc{o.seed, o.workers, o.z_threshold, o.tol > 0.0 ? o.tol : kDefaultSamplerTolerance};

    std::vector<CheckReport> reports;
    if (!o.input_path.empty()) {
        const auto rows = parse_csv(read_source(o.input_path, in));
        reports.push_back(survival_report(model, t, rows, mc.z_threshold));
        std::vector<double> y1;
        for (const auto& r : rows) {
            if (r.empty()) throw SpecError("input: empty row");
            y1.push_back(r[0]);
        }
        reports.push_back(margin_report(y1, mc.z_threshold));
    } else {
        reports.push_back(mc_survival_check(model, t, o.n, mc));
        if (effective_dimension(t) >= 1) reports.push_back(mc_pickands_check(model, t, o.n, mc));
        reports.push_back(mc_margin_check(model, o.n, mc));
    }
    write_reports_csv(out, reports);
    for (const auto& r : reports) {
        if (!r.passed) return kVerificationFailed;
    }
    return kOk;
}

inline int cmd_path(const Options& o, std::ostream& out, std::istream& in) {
    const auto triplet = spec_io::parse_triplet(spec_io::parse_text(read_source(o.spec_path, in)));
    if (o.dump_spec) {
        out << spec_io::dump_triplet(triplet).dump() << '\n';
        return kOk;
    }
    if (o.grid < 2) throw SpecError("--grid: needs at least 2 points");
    if (!(o.horizon > 0.0) || !std::isfinite(o.horizon)) throw SpecError("--horizon: must be > 0");
    Rng rng = make_rng(o.seed, 0);
    const auto path = sample_idt_path(triplet, o.horizon, rng, o.tol > 0.0 ? o.tol : kDefaultPathTolerance);
    out << "t,H\n";
    for (std::size_t i = 0; i < o.grid; ++i) {
        const double t = i + 1 == o.grid ? o.horizon
                                         : o.horizon * static_cast<double>(i) / static_cast<double>(o.grid - 1);
        out << format_double(t) << ',' << format_double(path.evaluate(t)) << '\n';
    }
    return kOk;
}

}  // namespace detail

/// Runs the command line; returns the process exit code.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
                   std::istream& in = std::cin) {
    CLI::App app{"Exchangeable min-stable models: evaluate, sample and verify."};
    app.require_subcommand(1);
    Options o;

    auto add_spec = [&](CLI::App* cmd) {
        cmd->add_option("--spec", o.spec_path, "model specification (JSON file, '-' for stdin)")->required();
        cmd->add_flag("--dump-spec", o.dump_spec, "print the parsed specification in canonical form and exit");
    };
    auto add_workers = [&](CLI::App* cmd) {
        cmd->add_option("--workers", o.workers, "worker threads (output does not depend on it)")
            ->check(CLI::Range(1u, 1024u))
            ->capture_default_str();
    };
    auto add_seed = [&](CLI::App* cmd) {
        cmd->add_option("--seed", o.seed, "random seed")->capture_default_str();
        add_workers(cmd);
    };

    auto* eval = app.add_subcommand("eval", "print l(t)");
    add_spec(eval);
    eval->add_option("--t", o.t_list, "comma-separated weights");
    add_workers(eval);

    auto* sample = app.add_subcommand("sample", "CSV of min-stable exponential vectors");
    add_spec(sample);
    add_seed(sample);
    sample->add_option("--d", o.d, "dimension")->check(CLI::PositiveNumber)->capture_default_str();
    sample->add_option("--n", o.n, "number of rows")->check(CLI::PositiveNumber)->capture_default_str();
    sample->add_option("--tol", o.tol, "truncation tolerance")->check(CLI::PositiveNumber);

    auto* pickands = app.add_subcommand("pickands", "CSV of Pickands simplex vectors");
    add_spec(pickands);
    add_seed(pickands);
    pickands->add_option("--d", o.d, "dimension")->check(CLI::PositiveNumber)->capture_default_str();
    pickands->add_option("--n", o.n, "number of rows")->check(CLI::PositiveNumber)->capture_default_str();

    auto* verify = app.add_subcommand("verify", "Monte Carlo checks against l; exit 5 if any fails");
    add_spec(verify);
    add_seed(verify);
    verify->add_option("--t", o.t_list, "comma-separated weights");
    verify->add_option("--n", o.n, "number of draws")->check(CLI::PositiveNumber);
    verify->add_option("--tol", o.tol, "truncation tolerance")->check(CLI::PositiveNumber);
    verify->add_option("--z", o.z_threshold, "|z| threshold")->capture_default_str();
    verify->add_option("--input", o.input_path, "check sample rows from a CSV ('-' for stdin) instead of drawing");

    auto* path = app.add_subcommand("path", "CSV (t, H_t) of a strong-IDT path");
    add_spec(path);
    add_seed(path);
    path->add_option("--horizon", o.horizon, "right end of the grid")->capture_default_str();
    path->add_option("--grid", o.grid, "number of grid points")->capture_default_str();
    path->add_option("--tol", o.tol, "truncation tolerance")->check(CLI::PositiveNumber);

    bool n_given = false;
    try {
        app.parse(argc, argv);
        n_given = verify->count("--n") > 0;
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kParseError;
    }
    if (verify->parsed() && !n_given) o.n = 100000;

    try {
        if (eval->parsed()) return detail::cmd_eval(o, out, in);
        if (sample->parsed()) return detail::cmd_sample(o, out, in);
        if (pickands->parsed()) return detail::cmd_pickands(o, out, in);
        if (verify->parsed()) return detail::cmd_verify(o, out, in);
        return detail::cmd_path(o, out, in);
    } catch (const NumericFailure& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kNumericError;
    } catch (const ResourceError& e) {
        err << "resource limit: " << e.what() << '\n';
        return kResourceError;
    } catch (const CapacityError& e) {
        err << "resource limit: " << e.what() << '\n';
        return kResourceError;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kParseError;
    }
}

}  // namespace maxstable::cli
