#include "fpde/basis.hpp"

#include "fpde/error.hpp"
#include "fpde/specfun.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace fpde {

namespace {

void check_index(int i, int n, const char* what)
{
    if (i < 1 || i > n)
        throw DomainError(std::string(what) + " index " + std::to_string(i) + " outside 1.." + std::to_string(n));
}

void check_unit(double x, const char* what)
{
    if (!(x >= -1.0 && x <= 1.0))
        throw DomainError(std::string(what) + " = " + std::to_string(x) + " outside [-1, 1]");
}

} // namespace

TemporalBasisSpec::TemporalBasisSpec(double tau_, double T_, int N_) : tau(tau_), T(T_), N(N_)
{
    // tau = 1/2 is a valid basis; the problem itself excludes 2*tau = 1.
    if (!(tau > 0.0 && tau < 1.0))
        throw DomainError("tau = " + std::to_string(tau) + " outside (0,1)");
    if (!(T > 0.0))
        throw DomainError("T must be positive");
    if (N < 1)
        throw DomainError("N = " + std::to_string(N) + " must be >= 1");
}

SpatialBasisSpec::SpatialBasisSpec(double a_, double b_, int M_) : a(a_), b(b_), M(M_)
{
    if (!(b > a))
        throw DomainError("interval (" + std::to_string(a) + ", " + std::to_string(b) + ") is empty");
    if (M < 1)
        throw DomainError("M = " + std::to_string(M) + " must be >= 1");
}

double temporal_basis(const TemporalBasisSpec& spec, int n, double eta)
{
    check_index(n, spec.N, "temporal trial");
    check_unit(eta, "eta");
    if (eta == -1.0)
        return 0.0;
    return sigma_trial(n) * std::pow(1.0 + eta, spec.tau) * jacobi_poly(n - 1, -spec.tau, spec.tau, eta);
}

double temporal_test(const TemporalBasisSpec& spec, int r, double eta)
{
    check_index(r, spec.N, "temporal test");
    check_unit(eta, "eta");
    if (eta == 1.0)
        return 0.0;
    return sigma_test(r) * std::pow(1.0 - eta, spec.tau) * jacobi_poly(r - 1, spec.tau, -spec.tau, eta);
}

double spatial_basis(const SpatialBasisSpec& spec, int m, double xi)
{
    check_index(m, spec.M, "spatial trial");
    check_unit(xi, "xi");
    if (xi == 1.0 || xi == -1.0)
        return 0.0;
    return sigma_trial(m) * (legendre(m + 1, xi) - legendre(m - 1, xi));
}

double spatial_test(const SpatialBasisSpec& spec, int k, double xi)
{
    check_index(k, spec.M, "spatial test");
    check_unit(xi, "xi");
    if (xi == 1.0 || xi == -1.0)
        return 0.0;
    return sigma_test(k) * (legendre(k + 1, xi) - legendre(k - 1, xi));
}

double frac_deriv_legendre_left(int n, double nu, double xi)
{
    if (n < 0)
        throw DomainError("Legendre degree " + std::to_string(n) + " is negative");
    if (!(nu > 0.0 && nu < 1.0))
        throw DomainError("order nu = " + std::to_string(nu) + " outside (0,1)");
    if (!(xi > -1.0 && xi <= 1.0))
        throw DomainError("xi = " + std::to_string(xi) + " outside (-1, 1]");
    return gamma_ratio(n + 1.0, n - nu + 1.0) * jacobi_poly(n, nu, -nu, xi) * std::exp(-nu * std::log1p(xi));
}

double frac_deriv_legendre_right(int n, double nu, double xi)
{
    if (n < 0)
        throw DomainError("Legendre degree " + std::to_string(n) + " is negative");
    if (!(nu > 0.0 && nu < 1.0))
        throw DomainError("order nu = " + std::to_string(nu) + " outside (0,1)");
    if (!(xi >= -1.0 && xi < 1.0))
        throw DomainError("xi = " + std::to_string(xi) + " outside [-1, 1)");
    return gamma_ratio(n + 1.0, n - nu + 1.0) * jacobi_poly(n, -nu, nu, xi) * std::exp(-nu * std::log1p(-xi));
}

double frac_deriv_temporal_basis(const TemporalBasisSpec& spec, int n, double eta)
{
    check_index(n, spec.N, "temporal trial");
    check_unit(eta, "eta");
    return sigma_trial(n) * gamma_ratio(n + spec.tau, n) * std::pow(2.0 / spec.T, spec.tau) * legendre(n - 1, eta);
}

double frac_deriv_temporal_test(const TemporalBasisSpec& spec, int r, double eta)
{
    check_index(r, spec.N, "temporal test");
    check_unit(eta, "eta");
    return sigma_test(r) * gamma_ratio(r + spec.tau, r) * std::pow(2.0 / spec.T, spec.tau) * legendre(r - 1, eta);
}

Eigen::MatrixXd temporal_basis_table(const TemporalBasisSpec& spec, std::span<const double> etas)
{
    Eigen::MatrixXd out(static_cast<Eigen::Index>(etas.size()), spec.N);
    std::vector<double> p(spec.N);
    for (std::size_t q = 0; q < etas.size(); ++q) {
        const double eta = etas[q];
        check_unit(eta, "eta");
        jacobi_poly_all(spec.N - 1, -spec.tau, spec.tau, eta, p);
        const double w = (eta == -1.0) ? 0.0 : std::pow(1.0 + eta, spec.tau);
        for (int n = 1; n <= spec.N; ++n)
            out(q, n - 1) = sigma_trial(n) * w * p[n - 1];
    }
    return out;
}

Eigen::MatrixXd spatial_basis_table(const SpatialBasisSpec& spec, std::span<const double> xis)
{
    Eigen::MatrixXd out(static_cast<Eigen::Index>(xis.size()), spec.M);
    std::vector<double> p(spec.M + 2);
    for (std::size_t q = 0; q < xis.size(); ++q) {
        const double xi = xis[q];
        check_unit(xi, "xi");
        if (xi == 1.0 || xi == -1.0) {
            out.row(q).setZero();
            continue;
        }
        jacobi_poly_all(spec.M + 1, 0.0, 0.0, xi, p);
        for (int m = 1; m <= spec.M; ++m)
            out(q, m - 1) = sigma_trial(m) * (p[m + 1] - p[m - 1]);
    }
    return out;
}

} // namespace fpde
