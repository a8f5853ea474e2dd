#pragma once

#include <Eigen/Dense>

#include <span>

namespace fpde {

// Temporal modes psi_n (trial) and Psi_r (test), n, r = 1..N, on [0, T].
struct TemporalBasisSpec {
    double tau = 0.25;
    double T = 2.0;
    int N = 1;

    TemporalBasisSpec() = default;
    TemporalBasisSpec(double tau, double T, int N); // validates

    double eta(double t) const { return 2.0 * t / T - 1.0; }
    double time(double eta) const { return 0.5 * T * (eta + 1.0); }
};

// Spatial modes phi_m (trial) and Phi_k (test), m, k = 1..M, on [a, b].
struct SpatialBasisSpec {
    double a = -1.0;
    double b = 1.0;
    int M = 1;

    SpatialBasisSpec() = default;
    SpatialBasisSpec(double a, double b, int M); // validates

    double xi(double x) const { return 2.0 * (x - a) / (b - a) - 1.0; }
    double x(double xi) const { return a + 0.5 * (b - a) * (xi + 1.0); }
};

// Sign factors: 2 + (-1)^m for trial functions, 2(-1)^k + 1 for test functions.
inline double sigma_trial(int m) { return (m % 2 == 0) ? 3.0 : 1.0; }
inline double sigma_test(int k) { return (k % 2 == 0) ? 3.0 : -1.0; }

double temporal_basis(const TemporalBasisSpec& spec, int n, double eta);
double temporal_test(const TemporalBasisSpec& spec, int r, double eta);
double spatial_basis(const SpatialBasisSpec& spec, int m, double xi);
double spatial_test(const SpatialBasisSpec& spec, int k, double xi);

// Left RL derivative of order nu in (0,1) of P_n on [-1, 1]; xi > -1.
double frac_deriv_legendre_left(int n, double nu, double xi);
// Right RL derivative of order nu of P_n on [-1, 1]; xi < 1.
double frac_deriv_legendre_right(int n, double nu, double xi);

// 0D_t^tau psi_n and tD_T^tau Psi_r in physical time; Legendre polynomials in eta.
double frac_deriv_temporal_basis(const TemporalBasisSpec& spec, int n, double eta);
double frac_deriv_temporal_test(const TemporalBasisSpec& spec, int r, double eta);

// Value tables, rows = points, columns = modes 1..N (or 1..M).
Eigen::MatrixXd temporal_basis_table(const TemporalBasisSpec& spec, std::span<const double> etas);
Eigen::MatrixXd spatial_basis_table(const SpatialBasisSpec& spec, std::span<const double> xis);

} // namespace fpde
