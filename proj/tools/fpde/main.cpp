#include "commands.hpp"
#include "config.hpp"

#include "fpde/error.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    using namespace fpde::cli;

    CLI::App app{"Space-time fractional PDE spectral solver"};
    std::string command;
    std::string config_path;
    std::string out, orders;
    int dim = 0;
    std::vector<std::string> sets;
    app.add_option("command", command, "check | solve | convergence | bench")
        ->required()
        ->check(CLI::IsMember({"check", "solve", "convergence", "bench"}));
    app.add_option("--config", config_path, "YAML run configuration")->check(CLI::ExistingFile);
    app.add_option("--out", out, "output path (CSV; solve also writes a .coef dump next to it)");
    app.add_option("--orders", orders, "uniform order ladder, e.g. 5,7,9,15");
    app.add_option("--dim", dim, "spatial dimension")->check(CLI::PositiveNumber);
    app.add_option("--set", sets, "override a config field, e.g. --set problem.two_tau=0.8");
    CLI11_PARSE(app, argc, argv);

    try {
        Overrides ov;
        if (!out.empty())
            ov.out = out;
        if (!orders.empty())
            ov.orders = orders;
        if (dim > 0)
            ov.dim = dim;
        ov.sets = sets;
        const RunConfig cfg = parse_config(load_config_file(config_path), parse_command(command), ov);
        return run(cfg, std::cout);
    } catch (const ConfigError& e) {
        std::cerr << "fpde: config error: " << e.what() << "\n";
    } catch (const fpde::Error& e) {
        std::cerr << "fpde: error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "fpde: unexpected error: " << e.what() << "\n";
    }
    return kExitError;
}
