// Copyright (c) FPS analyzer contributors.
// SPDX-License-Identifier: Apache-2.0
//
// fpsa: analyze block-diagram models with floating-point slopes.
//   fpsa analyze <file> [--precision P] [--unroll N] [--widen-delay K]
//                       [--format text|json] [--domain fps|interval|real-slope]
//   fpsa fuzz <file> [--samples N] [--seed S]
//   fpsa compare <file>
// Exit status: 0 ok, 1 possible run-time error reported, 2 usage or parse
// error, 3 soundness violation.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "fps/analyzer.hpp"
#include "fps/model.hpp"
#include "fps/oracle.hpp"
#include "fps/report.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kDiagnostics = 1;
constexpr int kUsage = 2;
constexpr int kUnsound = 3;

struct Common {
    std::string file;
    std::string precision;
    int unroll = -1;
    int widen_delay = 3;
    bool no_fixpoint = false;
};

fps::AnalyzerOptions options(const Common& c) {
    fps::AnalyzerOptions o;
    if (!c.precision.empty()) {
        o.precision = fps::parse_precision(c.precision);
    }
    if (c.unroll >= 0) {
        o.unroll = c.unroll;
    }
    o.widen_delay = c.widen_delay;
    o.fixpoint = !c.no_fixpoint;
    if (const char* env = std::getenv("FPS_THRESHOLDS"); env && *env) {
        o.thresholds = fps::Thresholds::parse(env);
    }
    return o;
}

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("file", c.file, "model file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--precision", c.precision, "single, double, extended or double-rounding")
        ->check(CLI::IsMember({"single", "double", "extended", "double-rounding"}));
    cmd->add_option("--unroll", c.unroll, "unrolled steps (default: the model's simulate steps)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--widen-delay", c.widen_delay, "joins before widening")->check(CLI::NonNegativeNumber);
    cmd->add_flag("--no-fixpoint", c.no_fixpoint, "stop after the unrolled steps");
}

std::string pad(std::string s, std::size_t n) {
    if (s.size() < n) {
        s.append(n - s.size(), ' ');
    }
    return s;
}

std::string width_text(const fps::Interval& x) {
    if (x.is_bottom()) {
        return "-";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x.width());
    return buf;
}

int compare(const fps::Program& p, const fps::AnalyzerOptions& o) {
    const fps::DomainKind kinds[] = {fps::DomainKind::interval, fps::DomainKind::real_slope, fps::DomainKind::fps};
    fps::Report reports[3];
    for (int i = 0; i < 3; ++i) {
        reports[i] = fps::analyze(p, o, kinds[i]);
    }
    std::cout << pad("output", 16) << pad("", 10);
    for (auto k : kinds) {
        std::cout << pad(fps::domain_name(k), 16);
    }
    std::cout << "\n";
    for (const auto& v : reports[0].vars) {
        if (!v.output) {
            continue;
        }
        std::cout << pad(v.name, 16) << pad("unrolled", 10);
        for (const auto& r : reports) {
            std::cout << pad(width_text(r.find(v.name)->unrolled_hull()), 16);
        }
        std::cout << "\n";
        if (v.limit) {
            std::cout << pad("", 16) << pad("later", 10);
            for (const auto& r : reports) {
                const auto& l = r.find(v.name)->limit;
                std::cout << pad(l ? width_text(*l) : "-", 16);
            }
            std::cout << "\n";
        }
    }
    std::cout << "(interval widths; real-slope is not sound for floats)\n";
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Floating-point slope analyzer for block-diagram models"};
    app.require_subcommand(1);

    Common an;
    std::string format = "text";
    std::string domain = "fps";
    auto* analyze_cmd = app.add_subcommand("analyze", "bound every signal of a model");
    add_common(analyze_cmd, an);
    analyze_cmd->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
    analyze_cmd->add_option("--domain", domain, "fps, interval or real-slope")
        ->check(CLI::IsMember({"fps", "interval", "real-slope"}));

    Common fz;
    fps::FuzzOptions fopts;
    std::string fuzz_format = "text";
    auto* fuzz_cmd = app.add_subcommand("fuzz", "check the fps bounds against concrete runs");
    add_common(fuzz_cmd, fz);
    fuzz_cmd->add_option("--samples", fopts.samples, "input points")->check(CLI::PositiveNumber);
    fuzz_cmd->add_option("--seed", fopts.seed, "random seed");
    fuzz_cmd->add_option("--format", fuzz_format, "text or json")->check(CLI::IsMember({"text", "json"}));

    Common cmp;
    auto* compare_cmd = app.add_subcommand("compare", "widths of the output bounds in each domain");
    add_common(compare_cmd, cmp);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    const std::string& file = *analyze_cmd ? an.file : *fuzz_cmd ? fz.file : cmp.file;
    try {
        if (*analyze_cmd) {
            const fps::Model m = fps::load_model(an.file);
            const fps::Program p = fps::lower_to_program(m);
            const fps::Report r = fps::analyze(p, options(an), *fps::parse_domain(domain));
            std::cout << (format == "json" ? fps::report_json(r) : fps::report_text(r));
            return r.diagnostics.has_runtime_errors() ? kDiagnostics : kOk;
        }
        if (*fuzz_cmd) {
            const fps::Model m = fps::load_model(fz.file);
            const fps::Program p = fps::lower_to_program(m);
            const auto opts = options(fz);
            const auto a = fps::analyze_slopes(p, opts);
            const fps::Report r = fps::make_report(a);
            const fps::Verdict v = fps::fuzz_soundness(p, r, &a, fopts);
            std::cout << (fuzz_format == "json" ? fps::verdict_json(v, r) : fps::verdict_text(v));
            return v.sound() ? kOk : kUnsound;
        }
        if (*compare_cmd) {
            const fps::Model m = fps::load_model(cmp.file);
            return compare(fps::lower_to_program(m), options(cmp));
        }
    } catch (const fps::ModelError& e) {
        for (const auto& is : e.issues()) {
            std::cerr << file << ":";
            if (is.loc.line > 0) {
                std::cerr << is.loc.line << ":" << is.loc.column << ":";
            }
            std::cerr << " " << is.message << "\n";
        }
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
