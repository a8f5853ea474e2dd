#include "fpde/error.hpp"
#include "fpde/specfun.hpp"
#include "oracles.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/jacobi.hpp>
#include <boost/math/special_functions/legendre.hpp>
#include <gtest/gtest.h>

#include <cmath>

using namespace fpde;

namespace {

const double kParams[] = {-0.9, -0.5, -0.25, 0.0, 0.3, 0.5, 0.95};

double moment(double alpha, double beta)
{
    return std::pow(2.0, alpha + beta + 1.0) * boost::math::beta(alpha + 1.0, beta + 1.0);
}

} // namespace

TEST(JacobiPoly, SpotValues)
{
    EXPECT_DOUBLE_EQ(jacobi_poly(0, 0.3, -0.3, 0.7), 1.0);
    EXPECT_NEAR(jacobi_poly(1, 0.5, -0.5, 0.0), 0.5, 1e-15);
}

TEST(JacobiPoly, MatchesBoost)
{
    for (double a : kParams)
        for (double b : kParams)
            for (int n = 0; n <= 25; ++n)
                for (double x : {-1.0, -0.77, -0.2, 0.0, 0.41, 0.93, 1.0}) {
                    const double ref = boost::math::jacobi(static_cast<unsigned>(n), a, b, x);
                    EXPECT_NEAR(jacobi_poly(n, a, b, x), ref, 1e-12 * std::max(1.0, std::abs(ref)))
                        << n << " " << a << " " << b << " " << x;
                }
}

TEST(JacobiPoly, LegendreSpecialCase)
{
    for (int n = 0; n <= 30; ++n)
        for (double x : {-0.9, -0.3, 0.2, 0.8})
            EXPECT_NEAR(legendre(n, x), boost::math::legendre_p(n, x), 1e-13);
}

TEST(JacobiPoly, AllDegreesConsistent)
{
    std::vector<double> out(21);
    jacobi_poly_all(20, 0.3, -0.3, 0.45, out);
    for (int n = 0; n <= 20; ++n)
        EXPECT_DOUBLE_EQ(out[n], jacobi_poly(n, 0.3, -0.3, 0.45));
}

TEST(JacobiPoly, DerivativeMatchesBoost)
{
    for (double a : {-0.5, 0.0, 0.3})
        for (double b : {-0.3, 0.25})
            for (int n = 0; n <= 15; ++n)
                for (double x : {-0.8, 0.1, 0.7}) {
                    const double ref = boost::math::jacobi_prime(static_cast<unsigned>(n), a, b, x);
                    EXPECT_NEAR(jacobi_poly_derivative(n, a, b, x), ref, 1e-11 * std::max(1.0, std::abs(ref)));
                }
}

TEST(JacobiPoly, ReflectionSymmetry)
{
    for (int k = 0; k < 100; ++k) {
        const int n = static_cast<int>(oracle::uniform(0, 20));
        const double a = oracle::uniform(-0.95, 2.0);
        const double b = oracle::uniform(-0.95, 2.0);
        const double x = oracle::uniform(-1.0, 1.0);
        const double lhs = jacobi_poly(n, a, b, -x);
        const double rhs = (n % 2 ? -1.0 : 1.0) * jacobi_poly(n, b, a, x);
        EXPECT_NEAR(lhs, rhs, 1e-13 * std::max(1.0, std::abs(rhs)));
    }
}

TEST(JacobiPoly, RecurrenceResidual)
{
    for (int k = 0; k < 100; ++k) {
        const int n = 2 + static_cast<int>(oracle::uniform(0, 20));
        const double a = oracle::uniform(-0.95, 1.5);
        const double b = oracle::uniform(-0.95, 1.5);
        const double x = oracle::uniform(-1.0, 1.0);
        const double s = 2.0 * n + a + b;
        const double lhs = 2.0 * n * (n + a + b) * (s - 2.0) * jacobi_poly(n, a, b, x);
        const double rhs = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b) * jacobi_poly(n - 1, a, b, x)
                           - 2.0 * (n + a - 1.0) * (n + b - 1.0) * s * jacobi_poly(n - 2, a, b, x);
        EXPECT_NEAR(lhs, rhs, 1e-13 * std::max(1.0, std::abs(lhs)) * s * s);
    }
}

TEST(JacobiPoly, RejectsBadParameters)
{
    EXPECT_THROW(jacobi_poly(2, -1.0, 0.0, 0.1), DomainError);
    EXPECT_THROW(jacobi_poly(2, 0.0, -1.5, 0.1), DomainError);
    EXPECT_THROW(jacobi_poly(-1, 0.0, 0.0, 0.1), DomainError);
}

TEST(GammaRatio, Values)
{
    EXPECT_DOUBLE_EQ(gamma_ratio(1.0, 1.0), 1.0);
    EXPECT_NEAR(gamma_ratio(1.5, 0.5), 0.5, 1e-15);
    EXPECT_NEAR(gamma_ratio(100.5, 99.5), 99.5, 99.5 * 1e-14);
    for (double a : {0.1, 1.0, 10.0, 150.0})
        EXPECT_NEAR(gamma_ratio(a + 1.0, a), a, a * 1e-14) << a;
}

TEST(GammaRatio, LargeArgumentsMatchBoost)
{
    for (double a : {50.25, 120.7, 169.0, 180.3, 199.9})
        for (double delta : {0.05, 0.3, 0.95}) {
            const double ref = boost::math::tgamma_ratio(a, a - delta);
            EXPECT_NEAR(gamma_ratio(a, a - delta), ref, 1e-13 * ref) << a << " " << delta;
        }
}

TEST(GammaRatio, RejectsNonPositive)
{
    EXPECT_THROW(gamma_ratio(0.0, 1.0), DomainError);
    EXPECT_THROW(gamma_ratio(1.0, -0.5), DomainError);
}

TEST(GaussJacobi, TwoPointLegendre)
{
    const QuadratureRule r = gauss_jacobi(2, 0.0, 0.0);
    ASSERT_EQ(r.size(), 2u);
    EXPECT_NEAR(r.nodes[0], -1.0 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(r.nodes[1], 1.0 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(r.weights[0], 1.0, 1e-15);
    EXPECT_NEAR(r.weights[1], 1.0, 1e-15);
    EXPECT_EQ(r.kind, QuadratureKind::gauss_legendre);
}

TEST(GaussJacobi, SecondMomentAgainstAdaptive)
{
    const QuadratureRule r = gauss_jacobi(8, -0.25, -0.25);
    const double q = r.integrate([](double x) { return x * x; });
    const double ref = oracle::integrate_jacobi([](double x) { return x * x; }, -0.25, -0.25);
    EXPECT_NEAR(q, ref, 1e-10);
}

TEST(GaussJacobi, InvariantsAndExactness)
{
    for (double a : kParams)
        for (double b : kParams)
            for (int q : {1, 2, 5, 12, 33}) {
                const QuadratureRule r = gauss_jacobi(q, a, b);
                ASSERT_EQ(r.size(), static_cast<std::size_t>(q));
                double sum = 0.0;
                for (int i = 0; i < q; ++i) {
                    EXPECT_GT(r.weights[i], 0.0);
                    EXPECT_GE(r.nodes[i], -1.0);
                    EXPECT_LE(r.nodes[i], 1.0);
                    if (i)
                        EXPECT_LT(r.nodes[i - 1], r.nodes[i]);
                    sum += r.weights[i];
                }
                EXPECT_NEAR(sum, moment(a, b), 1e-12 * moment(a, b));
                // Degree 2q-1 exactness through orthogonality: int w P_j^{a,b} = 0 for j >= 1,
                // and int w P_{q-1}^2 equals the known norm.
                for (int j = 1; j <= 2 * q - 1; ++j) {
                    const double v = r.integrate([&](double x) { return jacobi_poly(j, a, b, x); });
                    EXPECT_NEAR(v, 0.0, 1e-12 * std::max(1.0, moment(a, b))) << a << " " << b << " " << q << " " << j;
                }
            }
}

TEST(GaussJacobi, RandomPolynomialMoments)
{
    for (int trial = 0; trial < 20; ++trial) {
        const double a = oracle::uniform(-0.9, 1.0);
        const double b = oracle::uniform(-0.9, 1.0);
        const int q = 3 + trial % 10;
        std::vector<double> c(2 * q);
        double cn = 0.0;
        for (double& v : c) {
            v = oracle::uniform(-1.0, 1.0);
            cn = std::max(cn, std::abs(v));
        }
        auto p = [&](double x) {
            double s = 0.0;
            for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k)
                s = s * x + c[k];
            return s;
        };
        const QuadratureRule r = gauss_jacobi(q, a, b);
        const double exact = oracle::integrate_jacobi(p, a, b);
        EXPECT_NEAR(r.integrate(p), exact, 1e-11 * cn * std::max(1.0, std::abs(exact)));
    }
}

TEST(GaussLobattoJacobi, TwoPointTrapezoid)
{
    const QuadratureRule r = gauss_lobatto_jacobi(2, 0.0, 0.0);
    ASSERT_EQ(r.size(), 2u);
    EXPECT_DOUBLE_EQ(r.nodes[0], -1.0);
    EXPECT_DOUBLE_EQ(r.nodes[1], 1.0);
    EXPECT_NEAR(r.weights[0], 1.0, 1e-14);
    EXPECT_NEAR(r.weights[1], 1.0, 1e-14);
}

TEST(GaussLobattoJacobi, ExactnessAndEndpoints)
{
    for (double a : {-0.5, -0.25, 0.0, 0.3, 0.45, 0.8})
        for (double b : {-0.5, 0.0, 0.3, 0.45})
            for (int q : {2, 3, 6, 11, 20}) {
                const QuadratureRule r = gauss_lobatto_jacobi(q, a, b);
                EXPECT_EQ(r.nodes.front(), -1.0);
                EXPECT_EQ(r.nodes.back(), 1.0);
                double sum = 0.0;
                for (int i = 0; i < q; ++i) {
                    EXPECT_GT(r.weights[i], 0.0);
                    if (i)
                        EXPECT_LT(r.nodes[i - 1], r.nodes[i]);
                    sum += r.weights[i];
                }
                EXPECT_NEAR(sum, moment(a, b), 1e-12 * moment(a, b));
                for (int j = 1; j <= 2 * q - 3; ++j) {
                    const double v = r.integrate([&](double x) { return jacobi_poly(j, a, b, x); });
                    EXPECT_NEAR(v, 0.0, 1e-12 * std::max(1.0, moment(a, b))) << a << " " << b << " " << q << " " << j;
                }
            }
}

TEST(GaussLobattoJacobi, PolyFractonomialProducts)
{
    for (double tau : {0.05, 0.3, 0.45}) {
        const int q = 8;
        const QuadratureRule lob = gauss_lobatto_jacobi(q, tau, tau);
        const QuadratureRule ref = gauss_jacobi(40, tau, tau);
        for (int a = 0; a <= 6; ++a)
            for (int b = 0; a + b <= 2 * q - 3; ++b) {
                auto f = [&](double x) { return jacobi_poly(a, tau, -tau, x) * jacobi_poly(b, -tau, tau, x); };
                EXPECT_NEAR(lob.integrate(f), ref.integrate(f), 1e-12);
            }
    }
}

TEST(GradedGaussLegendre, IntegratesEndpointSingularity)
{
    const QuadratureRule plain = gauss_legendre(30);
    const QuadratureRule graded = graded_gauss_legendre(30, 12);
    auto f = [](double x) { return std::pow(1.0 + x, 0.3) * std::pow(1.0 - x, 0.45) * std::cos(x); };
    const double ref = oracle::integrate(f, -1.0, 1.0);
    EXPECT_GT(std::abs(plain.integrate(f) - ref), 1e-7);
    EXPECT_NEAR(graded.integrate(f), ref, 1e-9);
    double sum = 0.0;
    for (double w : graded.weights)
        sum += w;
    EXPECT_NEAR(sum, 2.0, 1e-14);
    EXPECT_EQ(graded_gauss_legendre(7, 0).size(), 7u);
}

TEST(Quadrature, RejectsBadSizes)
{
    EXPECT_THROW(gauss_jacobi(0, 0.0, 0.0), DomainError);
    EXPECT_THROW(gauss_lobatto_jacobi(1, 0.0, 0.0), DomainError);
    EXPECT_THROW(gauss_jacobi(4, -1.0, 0.0), DomainError);
}
