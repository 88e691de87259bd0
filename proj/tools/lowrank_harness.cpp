//
// lowrank_harness : batch verification driver
//
//   run           evaluate a suite config, emit CSV/JSONL reports
//   verify        re-derive verdicts from an emitted report
//   list-checkers print the checker catalogue
//   demo          print one worked instance with all ingredients
//
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lowrank/suite.hpp"

namespace {

void print_summary(const lowrank::SuiteSummary& summary) {
    std::cout << "total:     " << summary.total << '\n'
              << "passed:    " << summary.passed << '\n'
              << "failed:    " << summary.failed.size() << '\n'
              << "skipped:   " << summary.skipped.size() << '\n'
              << "max_violation: " << lowrank::format_double(summary.max_violation) << '\n';
    for (const lowrank::BoundReport& r : summary.failed)
        std::cout << "  FAILED " << r.bound_id << " seed=" << r.seed
                  << " slack=" << lowrank::format_double(r.slack) << '\n';
}

void print_report(const lowrank::BoundReport& rep) {
    std::cout << "bound_id:  " << rep.bound_id << '\n';
    std::cout << "dims:      m=" << rep.m << " n=" << rep.n;
    if (rep.k >= 0) std::cout << " k=" << rep.k;
    if (rep.c >= 0) std::cout << " c=" << rep.c;
    std::cout << '\n';
    if (!rep.p.empty()) std::cout << "p:         " << rep.p << '\n';
    std::cout << "seed:      " << rep.seed << '\n';
    if (rep.rhs_lower)
        std::cout << "rhs_lower: " << lowrank::format_double(*rep.rhs_lower) << '\n';
    std::cout << "lhs:       " << lowrank::format_double(rep.lhs) << '\n'
              << "rhs_upper: " << lowrank::format_double(rep.rhs_upper) << '\n'
              << "slack:     " << lowrank::format_double(rep.slack) << '\n'
              << "tolerance: " << lowrank::format_double(rep.tolerance) << '\n'
              << "holds:     " << (rep.holds ? "true" : "false") << '\n'
              << "context:\n";
    for (const auto& [key, value] : rep.context)
        std::cout << "  " << key << " = " << lowrank::format_double(value) << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"perturbation-bound verification harness for low-rank approximation"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    int workers = 0;
    CLI::App* run = app.add_subcommand("run", "run a suite and emit reports");
    run->add_option("--config", config_path, "suite config JSON")->required();
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--workers", workers, "worker threads (default: LOWRANK_WORKERS or hardware)");

    std::string report_path;
    CLI::App* verify = app.add_subcommand("verify", "re-derive verdicts from an emitted report");
    verify->add_option("--report", report_path, "path to reports.csv")->required();

    CLI::App* list = app.add_subcommand("list-checkers", "print the checker catalogue");

    std::string demo_bound;
    CLI::App* demo = app.add_subcommand("demo", "print one worked instance");
    demo->add_option("--bound", demo_bound, "checker id (see list-checkers)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            const lowrank::SuiteConfig cfg = lowrank::load_config_file(config_path);
            const lowrank::SuiteResult result = lowrank::run_suite(cfg, workers);
            lowrank::write_suite_outputs(result, cfg, out_dir);
            std::cout << "wrote " << out_dir << "/reports.csv, skips.csv, reports.jsonl, summary.json\n";
            print_summary(result.summary);
            return result.summary.failed.empty() ? 0 : 1;
        }
        if (verify->parsed()) {
            const lowrank::SuiteSummary summary = lowrank::verify_report(report_path);
            print_summary(summary);
            return summary.failed.empty() ? 0 : 1;
        }
        if (list->parsed()) {
            for (const lowrank::CheckerInfo& info : lowrank::checker_registry())
                std::cout << info.id << "\t" << info.summary << '\n';
            return 0;
        }
        if (demo->parsed()) {
            print_report(lowrank::demo_instance(demo_bound));
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
