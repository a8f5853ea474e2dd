#pragma once

#include <span>
#include <vector>

namespace fpde {

enum class QuadratureKind { gauss_jacobi, gauss_lobatto_jacobi, gauss_legendre, graded_gauss_legendre };

// Nodes ascending on [-1, 1]; weights include the Jacobi weight (1-x)^alpha (1+x)^beta.
struct QuadratureRule {
    QuadratureKind kind = QuadratureKind::gauss_legendre;
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }

    template <class F>
    double integrate(F&& f) const
    {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            s += weights[i] * f(nodes[i]);
        return s;
    }
};

// P_n^{alpha,beta}(x) by the three-term recurrence. alpha, beta > -1, n >= 0.
double jacobi_poly(int n, double alpha, double beta, double x);

// P_0 .. P_nmax at x, written to out (size nmax + 1).
void jacobi_poly_all(int nmax, double alpha, double beta, double x, std::span<double> out);

// d/dx P_n^{alpha,beta}(x).
double jacobi_poly_derivative(int n, double alpha, double beta, double x);

double legendre(int n, double x);

// Gamma(a) / Gamma(b) for a, b > 0, accurate for large arguments.
double gamma_ratio(double a, double b);

// 1 / Gamma(x); zero at the poles.
double rgamma(double x);

// Integral of (1-x)^alpha (1+x)^beta over [-1, 1].
double jacobi_weight_integral(double alpha, double beta);

// Q-point Gauss-Jacobi rule, exact for polynomials of degree <= 2Q - 1.
QuadratureRule gauss_jacobi(int q, double alpha, double beta);

// Q-point Gauss-Lobatto-Jacobi rule (both endpoints), exact to degree 2Q - 3. Q >= 2.
QuadratureRule gauss_lobatto_jacobi(int q, double alpha, double beta);

QuadratureRule gauss_legendre(int q);

// Composite Gauss-Legendre with `levels` geometrically shrinking panels toward
// each endpoint (panel edges at +-(1 - ratio^j)); q points per panel.
// levels = 0 gives plain Gauss-Legendre.
QuadratureRule graded_gauss_legendre(int q, int levels, double ratio = 0.2);

} // namespace fpde
