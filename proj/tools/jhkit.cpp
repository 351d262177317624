// Command-line front end. Exit codes: 0 all checks pass, 2 a check failed,
// 1 usage or configuration error.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "jhkit/cli.hpp"

namespace {

constexpr const char* kFooter = R"(Output:
  curve and specfun-table write CSV by default, every other command a JSON
  report. --format json|csv overrides; CSV for a non-tabular command lists
  its checks.
  curve CSV columns:         p,re,im
  specfun-table CSV columns: a,f_half,f_minus_half,g_minus_three_half,
                             oracle_f_half,oracle_f_minus_half,
                             oracle_g_minus_three_half,max_rel_err
  checks CSV columns:        name,anchor,comparison,measured,tolerance,pass,gating
Environment:
  JHKIT_THREADS caps worker threads.
Exit codes: 0 pass, 2 check failure, 1 usage error.)";

void add_common(CLI::App* sub, jhkit::cli::RunConfig& cfg, std::string& format, std::string& xi) {
    sub->add_option("--e2", cfg.e2, "fine-structure constant e^2")->capture_default_str();
    sub->add_option("--gamma", cfg.gamma, "coupling gamma = Z e^2");
    sub->add_option("--z", cfg.z, "nuclear charge Z (alternative to --gamma)");
    sub->add_option("--c0", cfg.c0, "virial constant c0 in [0, 2]");
    sub->add_option("--xi", xi, "complex dilation parameter, e.g. 0.1i or 0.05+0.1i");
    sub->add_option("--xi0", cfg.xi0, "dilation cap xi0 in (0, 1/2)");
    sub->add_option("--mass", cfg.mass, "particle mass m")->capture_default_str();
    sub->add_option("--grid-min", cfg.grid_min, "grid lower end");
    sub->add_option("--grid-max", cfg.grid_max, "grid upper end");
    sub->add_option("--grid-points", cfg.grid_points, "grid size");
    sub->add_option("--tol", cfg.tol, "tolerance");
    sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    sub->add_option("--samples", cfg.samples, "Monte Carlo / stress sample count");
    sub->add_flag("--quick", cfg.quick, "reduced sample counts and grids");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"jhkit: numeric checks for the pseudorelativistic two-particle estimates"};
    app.footer(kFooter);
    app.require_subcommand(1);

    const std::map<std::string, std::string> help{
        {"critical-gamma", "coupling where the virial supremum crosses zero"},
        {"virial-sup", "supremum of s*phi over the (q1, q2) grid"},
        {"thresholds", "the five critical couplings"},
        {"specfun-table", "log-kernel moments against quadrature (CSV)"},
        {"curve", "dilated single-particle spectral curve (CSV)"},
        {"sector", "sector angle and xi0 selection"},
        {"validate-dilation", "random stress test of the dilation estimates"},
        {"form-eval", "Brown-Ravenhall Rayleigh quotients and Monte Carlo checks"},
        {"verify-appendix", "Lieb-Yau dominance and two-particle bound chain"},
        {"all", "every check with default settings"}};

    jhkit::cli::RunConfig cfg;
    std::string format;
    std::string xi;
    for (const auto& name : jhkit::cli::subcommands()) {
        add_common(app.add_subcommand(name, help.at(name)), cfg, format, xi);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    if (!xi.empty()) {
        cfg.xi = xi;
    }
    cfg.format = format == "json"  ? jhkit::cli::Format::Json
                 : format == "csv" ? jhkit::cli::Format::Csv
                                   : jhkit::cli::Format::Default;

    jhkit::cli::Outcome outcome;
    try {
        outcome = jhkit::cli::run(command, cfg);
    } catch (const std::exception& e) {
        std::cerr << "jhkit " << command << ": " << e.what() << "\n";
        return 1;
    }

    const std::string text = jhkit::cli::render(outcome, cfg.format);
    if (cfg.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(cfg.out);
        if (!f) {
            std::cerr << "jhkit: cannot write " << cfg.out << "\n";
            return 1;
        }
        f << text;
    }
    for (const auto& c : outcome.report.checks) {
        if (c.gating && !c.pass) {
            std::cerr << "FAIL " << c.name << ": measured " << c.measured << " (" << c.anchor << ")\n";
        }
    }
    return outcome.report.passed() ? 0 : 2;
}
