#pragma once

#include "fpde/assembly.hpp"
#include "fpde/problem.hpp"
#include "fpde/solver.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fpde {

enum class CaseKind { powerlaw, sinusoidal };

// Exact solutions u = t^p1 * prod_i X_i(zeta_i) with zeta_i the reference coordinate of x_i.
//   powerlaw:   X_i = (1 + zeta)^p_even[i] - eps[i] (1 + zeta)^p_odd[i]
//   sinusoidal: X_1 = sin(n pi (1 + zeta)), one spatial dimension
struct ManufacturedCase {
    std::string id = "custom";
    CaseKind kind = CaseKind::powerlaw;
    double p1 = 7.0 + 2.0 / 3.0;
    std::vector<double> p_even;
    std::vector<double> p_odd;
    std::vector<double> eps;
    int n_sine = 1;
    int series_terms = 25;

    int dim() const;
    // Exponent / dimension checks against the problem orders.
    void validate(const ProblemSpec& spec) const;
};

// eps_i = 2^(p_even - p_odd) so that X_i vanishes at zeta = 1.
ManufacturedCase powerlaw_case(double p1, std::vector<double> p_even, std::vector<double> p_odd);
ManufacturedCase sinusoidal_case(double p1, int n_sine = 1, int series_terms = 25);

// Named cases "I", "II", "III", "IV" for the given spatial dimension.
ManufacturedCase test_case(std::string_view id, int dim);

// Right RL derivative of order s in (0,2), s != 1, of (1 + z)^p on [-1, 1], at z in [-1, 1).
double right_rl_power(double p, double s, double z);

// Partial sum of the Taylor series of sin(a) with `terms` odd powers.
double sine_series(double a, int terms);

double temporal_factor(const ManufacturedCase& c, double t);
double spatial_factor(const ManufacturedCase& c, int i, double zeta);
// Fractional derivative of order s of X_i on the reference interval [-1, 1].
double spatial_factor_derivative(const ManufacturedCase& c, int i, double s, Side side, double zeta);

double exact_solution(const ManufacturedCase& c, const ProblemSpec& spec, double t, std::span<const double> x);

double force_term_powerlaw(const ManufacturedCase& c, const ProblemSpec& spec, double t, std::span<const double> x);
double force_term_sinusoidal(const ManufacturedCase& c, const ProblemSpec& spec, double t,
                             std::span<const double> x);
double force_term(const ManufacturedCase& c, const ProblemSpec& spec, double t, std::span<const double> x);

// The same forcing as a sum of 1 + d separable products.
SeparableSource force_separable(const ManufacturedCase& c, const ProblemSpec& spec);

struct ErrorNorms {
    double l2 = 0.0;
    double linf = 0.0;
};

struct NormOptions {
    int extra_points = 20; // Gauss-Legendre points per axis = max order + extra_points
    int linf_points = 0;   // 0 -> 41 for d <= 3, 17 otherwise
};

ErrorNorms error_norms(const SpectralSolution& sol, const ManufacturedCase& c, const NormOptions& opt = {});

struct OrderTuple {
    int N = 0;
    std::vector<int> M;
};

struct StudyConfig {
    ProblemSpec spec;
    ManufacturedCase mcase;
    std::vector<OrderTuple> ladder;
    LoadQuadrature load{0, 0, 12, 0.2};
    NormOptions norms;
    TemporalSolver temporal = TemporalSolver::schur;
};

struct ConvergenceRecord {
    std::string case_id;
    ProblemSpec spec;
    int N = 0;
    std::vector<int> M;
    double l2 = 0.0;
    double linf = 0.0;
    double seconds = 0.0;
    bool ok = true;
    std::string error;
};

// Assemble with the separable forcing and run the fast solver.
SpectralSolution solve_manufactured(const ProblemSpec& spec, const ManufacturedCase& c, const OrderTuple& orders,
                                    const LoadQuadrature& load = {0, 0, 12, 0.2},
                                    TemporalSolver mode = TemporalSolver::schur);

// One record per rung; failures are recorded, not thrown.
std::vector<ConvergenceRecord> convergence_study(const StudyConfig& config);

} // namespace fpde
