#pragma once

#include "config.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace fpde::cli {

// Exit codes: 0 success, 1 a requested check or rung failed, 2 bad configuration or runtime error.
constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitError = 2;

struct CheckResult {
    CheckResult(std::string name_, double value_, double tol_) : name(std::move(name_)), value(value_), tol(tol_) {}

    std::string name;
    double value = 0.0;
    double tol = 0.0;
    bool skipped = false;
    std::string note;

    bool pass() const { return skipped || value <= tol; }
};

// Oracle comparisons on the first ladder rung.
std::vector<CheckResult> run_checks(const RunConfig& cfg);

int run_check(const RunConfig& cfg, std::ostream& out);
int run_solve(const RunConfig& cfg, std::ostream& out);
int run_convergence(const RunConfig& cfg, std::ostream& out);
int run_bench(const RunConfig& cfg, std::ostream& out);
int run(const RunConfig& cfg, std::ostream& out);

// Header and rows of the convergence CSV, fixed column order.
std::string convergence_header(int dim);
std::string convergence_row(const ConvergenceRecord& rec);

// Flat float64 dump of U_hat with a text header (shape and index order), ending in "end\n".
void write_coefficients(const std::string& path, const SpectralSolution& sol);
Tensor read_coefficients(const std::string& path);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace fpde::cli
