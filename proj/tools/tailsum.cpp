#include "tailsum/cli/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    using namespace tailsum::cli;
    CLI::App app{"Quantiles of compound sums of heavy-tailed losses"};
    app.require_subcommand(1);

    CommandOptions opts;
    std::string out;
    std::uint64_t seed = 0;
    Command cmd = Command::approx;

    auto add = [&](const char* name, const char* help, Command c) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", opts.config_path, "Run configuration file")->required();
        sub->add_option("--out", out, "Output CSV path (default: [output] path, else stdout)");
        sub->add_option("--seed", seed, "Override the Monte Carlo seed");
        sub->callback([&cmd, c] { cmd = c; });
    };
    add("approx", "Evaluate approximations for each method, alpha and order", Command::approx);
    add("sweep", "Evaluate approximations over the [sweep] grid", Command::sweep);
    add("mc", "Monte Carlo quantile estimates", Command::mc);

    CLI11_PARSE(app, argc, argv);

    for (auto* sub : app.get_subcommands()) {
        if (sub->count("--out"))
            opts.out = out;
        if (sub->count("--seed"))
            opts.seed = seed;
    }
    return run_command(cmd, opts, std::cerr);
}
