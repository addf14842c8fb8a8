#include "gtp/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <thread>

int main(int argc, char** argv)
{
    CLI::App app{"Bounded forecasting game simulator and verifier"};
    app.require_subcommand(1);

    gtp::CommandOptions opts;
    opts.jobs = std::max(1u, std::thread::hardware_concurrency());
    std::uint64_t seed = 0;
    std::string suite;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config_path, "key = value configuration file")->check(CLI::ExistingFile);
        sub->add_option("--out", opts.out, "output file (default: run.output or stdout)");
        sub->add_option("--jobs", opts.jobs, "worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--seed", seed, "override run.seed");
    };

    auto* simulate = app.add_subcommand("simulate", "play one game and write its trajectory CSV");
    common(simulate);
    auto* verify = app.add_subcommand("verify", "run a verification suite, one JSON line per check");
    common(verify);
    verify->add_option("suite", suite, "identity | bound | one-sided | linear | mixture | azuma | all")
        ->required();
    auto* sweep = app.add_subcommand("sweep", "run a parameter grid, one CSV row per cell");
    common(sweep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return gtp::exit_usage;
    }

    for (auto* sub : {simulate, verify, sweep})
        if (sub->count("--seed") > 0) opts.seed = seed;

    if (*simulate) return gtp::simulate_command(opts, std::cout, std::cerr);
    if (*verify) return gtp::verify_command(suite, opts, std::cout, std::cerr);
    return gtp::sweep_command(opts, std::cout, std::cerr);
}
