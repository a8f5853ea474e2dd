#pragma once

// Independent reference computations for the test suites. Everything here is
// built on Boost.Math and plain adaptive quadrature, never on fpde internals.

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using Fn = std::function<double(double)>;

// Integral over [a, b]; integrable endpoint singularities allowed.
inline double integrate(const Fn& f, double a, double b, double tol = 1e-13)
{
    boost::math::quadrature::tanh_sinh<double> ts;
    return ts.integrate(f, a, b, tol);
}

// Integral of f(y) * dist^p where dist is the distance from y to `anchor`,
// anchor being a or b. Uses the complement argument to keep dist exact.
inline double integrate_kernel(const Fn& f, double a, double b, double p, bool anchor_right, double tol = 1e-13)
{
    boost::math::quadrature::tanh_sinh<double> ts;
    const double mid = 0.5 * (a + b);
    auto g = [&](double y, double yc) {
        double dist;
        if (anchor_right)
            dist = (y > mid && yc > 0.0) ? yc : b - y;
        else
            dist = (y < mid && yc < 0.0) ? -yc : y - a;
        const double v = f(y) * std::pow(dist, p);
        // Abscissae can round onto an endpoint where f has an integrable blow-up;
        // a single point carries no mass.
        return std::isfinite(v) ? v : 0.0;
    };
    return ts.integrate(g, a, b, tol);
}

// Integral of (1-x)^alpha (1+x)^beta f(x) over [-1, 1], endpoint distances taken
// from the complement argument so strong singularities keep full precision.
inline double integrate_jacobi(const Fn& f, double alpha, double beta, double tol = 1e-15)
{
    boost::math::quadrature::tanh_sinh<double> ts;
    auto g = [&](double x, double xc) {
        const double left = (x < 0.0 && xc < 0.0) ? -xc : 1.0 + x;
        const double right = (x > 0.0 && xc > 0.0) ? xc : 1.0 - x;
        return std::pow(right, alpha) * std::pow(left, beta) * f(x);
    };
    return ts.integrate(g, -1.0, 1.0, tol);
}

// Fixed 50-point Gauss rule from Boost: exact for polynomials up to degree 99.
inline double integrate_polynomial(const Fn& f, double a, double b)
{
    return boost::math::quadrature::gauss<double, 50>::integrate(f, a, b);
}

inline double integrate_smooth(const Fn& f, double a, double b)
{
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-15);
}

// Left Riemann-Liouville derivative of order s in (0,1) U (1,2) on [a, x],
// written through Caputo plus boundary terms so only integrable kernels remain.
inline double rl_left(const Fn& g, const Fn& dg, const Fn& d2g, double s, double a, double x)
{
    using boost::math::tgamma;
    if (s < 1.0) {
        const double I = integrate_kernel(dg, a, x, -s, true);
        return g(a) * std::pow(x - a, -s) / tgamma(1.0 - s) + I / tgamma(1.0 - s);
    }
    const double I = integrate_kernel(d2g, a, x, 1.0 - s, true);
    return g(a) * std::pow(x - a, -s) / tgamma(1.0 - s) + dg(a) * std::pow(x - a, 1.0 - s) / tgamma(2.0 - s)
           + I / tgamma(2.0 - s);
}

// Right Riemann-Liouville derivative of order s on [x, b].
inline double rl_right(const Fn& g, const Fn& dg, const Fn& d2g, double s, double x, double b)
{
    using boost::math::tgamma;
    if (s < 1.0) {
        const double I = integrate_kernel(dg, x, b, -s, false);
        return g(b) * std::pow(b - x, -s) / tgamma(1.0 - s) - I / tgamma(1.0 - s);
    }
    const double I = integrate_kernel(d2g, x, b, 1.0 - s, false);
    return g(b) * std::pow(b - x, -s) / tgamma(1.0 - s) - dg(b) * std::pow(b - x, 1.0 - s) / tgamma(2.0 - s)
           + I / tgamma(2.0 - s);
}

inline std::mt19937_64& rng()
{
    static std::mt19937_64 gen(20240917);
    return gen;
}

inline double uniform(double a, double b)
{
    std::uniform_real_distribution<double> d(a, b);
    return d(rng());
}

} // namespace oracle
