#include "commands.hpp"
#include "run_config.hpp"

#include "kmlab/integrator.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>

int main(int argc, char** argv) {
    using namespace kmlab::cli;

    CLI::App app{"kmlab - inertial Kuramoto simulation and certification laboratory"};
    app.require_subcommand(1);

    CommonOptions opts;
    std::uint64_t seed_flag = 0;
    std::string which = "n3";

    auto add_common = [&](CLI::App* sub, bool with_format = false) {
        sub->add_option("--config", opts.config_path, "path to a key = value run config")
            ->required();
        sub->add_option("--out", opts.out_dir, "output directory (default: .)");
        auto* seed_opt = sub->add_option("--seed", seed_flag, "override the config seed");
        sub->parse_complete_callback([&, seed_opt] {
            if (seed_opt->count() > 0)
                opts.seed_override = seed_flag;
        });
        if (with_format)
            sub->add_option("--format", opts.format, "csv | json (default: json)")
                ->check(CLI::IsMember({"csv", "json"}));
    };

    auto* simulate = app.add_subcommand("simulate", "integrate and export trajectory + summary");
    add_common(simulate);
    auto* check = app.add_subcommand("check", "evaluate theorem hypotheses");
    add_common(check);
    check->add_option("--which", which, "thm2 | thm3 | n3")
        ->required()
        ->check(CLI::IsMember({"thm2", "thm3", "n3"}));
    auto* sweep = app.add_subcommand("sweep", "feasibility search over sector parameters");
    add_common(sweep, /*with_format=*/true);
    auto* montecarlo = app.add_subcommand("montecarlo", "N=3 unconditional-sync Monte Carlo");
    add_common(montecarlo);

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed())
            return cmd_simulate(opts);
        if (check->parsed())
            return cmd_check(opts, which);
        if (sweep->parsed())
            return cmd_sweep(opts);
        if (montecarlo->parsed())
            return cmd_montecarlo(opts);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const kmlab::IntegrationError& e) {
        std::cerr << "integration failure: " << e.what() << " (t=" << e.t_fail() << ")\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
