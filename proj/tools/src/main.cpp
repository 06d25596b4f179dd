#include "commands.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace rfspec::cli {

int main_entry(int argc, char** argv) {
    CLI::App app{"rfspec: resonance-fluorescence spectra and phonon-number readout"};
    app.require_subcommand(1);

    Invocation inv;
    std::string config;
    std::string out;
    std::uint64_t seed = 0;

    const std::vector<std::pair<const char*, const char*>> commands{
        {"spectrum", "compute a spectrum (full, narrow, semiclassical or oracle)"},
        {"fit", "fit phonon occupations to a spectrum file"},
        {"sweep", "readout error versus coupling strength"},
        {"wigner", "excited-state Wigner function"},
        {"oracle-check", "compare analytic results against the master-equation oracle"},
    };
    std::vector<CLI::Option*> seed_opts;
    std::vector<CLI::Option*> out_opts;
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config, "JSON run configuration")->required();
        out_opts.push_back(sub->add_option("--out", out, "output directory (overrides output.dir)"));
        seed_opts.push_back(sub->add_option("--seed", seed, "master seed (overrides noise.seed)"));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    for (CLI::App* sub : app.get_subcommands()) inv.command = sub->get_name();
    inv.config = config;
    for (auto* o : out_opts) {
        if (o->count() > 0) inv.out = out;
    }
    for (auto* o : seed_opts) {
        if (o->count() > 0) inv.seed = seed;
    }
    return run(inv, std::cout, std::cerr);
}

}  // namespace rfspec::cli

int main(int argc, char** argv) { return rfspec::cli::main_entry(argc, argv); }
