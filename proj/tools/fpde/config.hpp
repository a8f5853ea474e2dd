#pragma once

#include "fpde/assembly.hpp"
#include "fpde/manufactured.hpp"
#include "fpde/problem.hpp"
#include "fpde/solver.hpp"

#include <yaml-cpp/yaml.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fpde::cli {

enum class Command { check, solve, convergence, bench };

Command parse_command(std::string_view name);
std::string_view command_name(Command c);

// Bad config file, flag or field value. The message names the field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Command-line overrides; they are applied after the config file, so flags win.
struct Overrides {
    std::optional<std::string> out;
    std::optional<std::string> orders; // "5,7,9,15": uniform N = M_i rungs
    std::optional<int> dim;
    std::vector<std::string> sets; // "section.key=value", value in YAML syntax
};

struct RunConfig {
    Command command = Command::check;
    ProblemSpec problem;
    ManufacturedCase mcase;
    std::vector<OrderTuple> ladder;
    std::string output_path;
    std::uint64_t seed = 20240917;
    LoadQuadrature load{0, 0, 12, 0.2};
    NormOptions norms;
    TemporalSolver temporal = TemporalSolver::schur;
    int repeats = 3;          // bench: best of this many timings
    bool bench_direct = true; // bench: also time the dense reference solve
    int samples = 11;         // solve: grid points per axis in the sampled output
};

// Reads a YAML file; an empty path gives an empty document.
YAML::Node load_config_file(const std::string& path);
YAML::Node load_config_text(const std::string& text);

// Writes the overrides into the document (YAML nodes are shared handles), then validates every field.
RunConfig parse_config(YAML::Node doc, Command command, const Overrides& overrides = {});

// "5,7,9" -> rungs with N = M_i = 5, 7, 9.
std::vector<OrderTuple> parse_orders(std::string_view text, int dim);

// Every order parameter and setting, one "# " line each.
std::string banner(const RunConfig& cfg);

} // namespace fpde::cli
