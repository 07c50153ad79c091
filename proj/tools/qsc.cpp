// qsc: command line front end for the case registry.

#include "qsc/default_registry.hpp"
#include "qsc/harness.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

struct Options {
    std::vector<std::string> cases;
    std::vector<std::string> n, d, primes;
    std::string n_range;
    int jobs = 1;
    std::string report;
    std::string format;
    double tol = 0;
    bool no_timing = false;
    bool no_cache = false;
    std::string cache = ".qsc_cache.jsonl";
};

void add_run_options(CLI::App* cmd, Options& o, bool exact, bool analytic) {
    cmd->add_option("--case", o.cases, "Case id (repeatable, or comma-separated)")->delimiter(',');
    if (exact) {
        cmd->add_option("--n", o.n, "Values of n, e.g. 5,7 or 3..15")->delimiter(';');
        cmd->add_option("--n-range", o.n_range, "Range of n as A..B");
        cmd->add_option("--d", o.d, "Values of d, e.g. 2,3,4")->delimiter(';');
        cmd->add_option("--primes", o.primes, "Primes for p-adic cases, e.g. 5,13,17")->delimiter(';');
    }
    if (analytic) cmd->add_option("--tol", o.tol, "Tolerance override for analytic cases")->check(CLI::PositiveNumber);
    cmd->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--report", o.report, "Write the report to PATH");
    cmd->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "text"}));
    cmd->add_flag("--no-timing", o.no_timing, "Omit timing fields for reproducible reports");
    cmd->add_flag("--no-cache", o.no_cache, "Neither read nor write the result cache");
    cmd->add_option("--cache", o.cache, "Result cache file");
}

std::optional<std::vector<std::int64_t>> joined(const std::vector<std::string>& items) {
    if (items.empty()) return std::nullopt;
    std::vector<std::int64_t> out;
    for (const auto& s : items)
        for (auto v : qsc::parse_int_list(s)) out.push_back(v);
    return out;
}

int run_verb(const qsc::LoadedRegistry& reg, const Options& o, qsc::VerbScope scope) {
    qsc::RunConfig cfg;
    cfg.cases = o.cases;
    cfg.scope = scope;
    cfg.n_values = joined(o.n);
    if (!o.n_range.empty()) {
        if (o.n_range.find("..") == std::string::npos) throw qsc::ConfigError("--n-range expects A..B");
        auto r = qsc::parse_int_list(o.n_range);
        if (!cfg.n_values) cfg.n_values.emplace();
        cfg.n_values->insert(cfg.n_values->end(), r.begin(), r.end());
    }
    cfg.d_values = joined(o.d);
    cfg.primes = joined(o.primes);
    cfg.jobs = o.jobs;
    cfg.tol = o.tol;
    cfg.timing = !o.no_timing;
    if (!o.no_cache) cfg.cache_path = o.cache;

    qsc::Report rep = qsc::run(reg, cfg);
    for (const auto& m : rep.audit.mismatches) std::cerr << "cache audit: stale entry replaced for " << m << "\n";

    if (!o.report.empty()) {
        auto format = o.format == "text" ? qsc::ReportFormat::text : qsc::ReportFormat::json;
        qsc::emit_report(rep, o.report, format, cfg.timing);
        std::cout << qsc::report_text(rep);
    } else {
        auto format = o.format == "json" ? qsc::ReportFormat::json : qsc::ReportFormat::text;
        std::cout << qsc::render_report(rep, format, cfg.timing);
    }
    return rep.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact, p-adic and numeric verification of q-supercongruences"};
    app.set_version_flag("--version", std::string(qsc::kVersion));
    app.require_subcommand(1);
    std::string registry_path;
    app.add_option("--registry", registry_path, "Registry JSON file (default: the built-in registry)");

    Options verify_opts, analytic_opts, sweep_opts;
    auto* list = app.add_subcommand("list", "List registry cases");
    auto* verify = app.add_subcommand("verify", "Verify symbolic and p-adic cases");
    add_run_options(verify, verify_opts, true, false);
    auto* analytic = app.add_subcommand("analytic", "Check the numeric identities");
    add_run_options(analytic, analytic_opts, false, true);
    auto* sweep = app.add_subcommand("sweep", "Run every case with its default parameters");
    add_run_options(sweep, sweep_opts, true, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        qsc::LoadedRegistry reg = registry_path.empty() ? qsc::load_registry_text(qsc::kDefaultRegistryJson)
                                                        : qsc::load_registry_file(registry_path);
        if (list->parsed()) {
            for (const auto& line : qsc::list_cases(reg.registry)) std::cout << line << "\n";
            return 0;
        }
        if (verify->parsed()) return run_verb(reg, verify_opts, qsc::VerbScope::exact);
        if (analytic->parsed()) return run_verb(reg, analytic_opts, qsc::VerbScope::analytic);
        if (sweep->parsed()) return run_verb(reg, sweep_opts, qsc::VerbScope::all);
    } catch (const qsc::ConfigError& e) {
        std::cerr << "qsc: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "qsc: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
