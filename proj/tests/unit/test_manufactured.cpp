#include "fpde/basis.hpp"
#include "fpde/error.hpp"
#include "fpde/manufactured.hpp"
#include "fpde/specfun.hpp"
#include "oracles.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/hypergeometric_pFq.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace fpde;

namespace {

using boost::math::tgamma;

// Right RL derivative of (1+z)^p on [-1, 1] by the classical hypergeometric closed form
// D^s_right (1+z)^p = 2^p (1-z)^{-s} / Gamma(1-s) * 2F1(-p, 1; 1-s; (1-z)/2).
double right_rl_power_hypergeometric(double p, double s, double z)
{
    const double h = 0.5 * (1.0 - z);
    const double F = boost::math::hypergeometric_pFq({-p, 1.0}, {1.0 - s}, h);
    return std::pow(2.0, p) * std::pow(1.0 - z, -s) / tgamma(1.0 - s) * F;
}

// Spatial profile X(zeta) of a powerlaw case with derivatives, on the reference interval.
struct Profile {
    double pe, po, eps;
    double g(double z) const { return std::pow(1.0 + z, pe) - eps * std::pow(1.0 + z, po); }
    double dg(double z) const { return pe * std::pow(1.0 + z, pe - 1.0) - eps * po * std::pow(1.0 + z, po - 1.0); }
    double d2g(double z) const
    {
        return pe * (pe - 1.0) * std::pow(1.0 + z, pe - 2.0) - eps * po * (po - 1.0) * std::pow(1.0 + z, po - 2.0);
    }
};

// The same force assembled from physical-coordinate RL oracles (1-D).
double force_oracle_1d(const ManufacturedCase& c, const ProblemSpec& s, double t, double x)
{
    const auto [a, b] = s.intervals[0];
    const double L = b - a;
    const double zeta = 2.0 * (x - a) / L - 1.0;
    std::function<double(double)> X, dX, d2X;
    if (c.kind == CaseKind::powerlaw) {
        const Profile pr{c.p_even[0], c.p_odd[0], c.eps[0]};
        X = [=](double y) { return pr.g(2.0 * (y - a) / L - 1.0); };
        dX = [=](double y) { return pr.dg(2.0 * (y - a) / L - 1.0) * 2.0 / L; };
        d2X = [=](double y) { return pr.d2g(2.0 * (y - a) / L - 1.0) * 4.0 / (L * L); };
    } else {
        const double k = c.n_sine * std::numbers::pi;
        X = [=](double y) { return std::sin(k * (1.0 + 2.0 * (y - a) / L - 1.0)); };
        dX = [=](double y) { return k * 2.0 / L * std::cos(k * (2.0 * (y - a) / L)); };
        d2X = [=](double y) { return -k * k * 4.0 / (L * L) * std::sin(k * (2.0 * (y - a) / L)); };
    }
    const double p1 = c.p1;
    auto T = [=](double y) { return std::pow(y, p1); };
    auto dT = [=](double y) { return p1 * std::pow(y, p1 - 1.0); };
    auto d2T = [=](double y) { return p1 * (p1 - 1.0) * std::pow(y, p1 - 2.0); };
    const double Xv = X(x);
    const double Tv = T(t);
    double f = oracle::rl_left(T, dT, d2T, s.two_tau, 0.0, t) * Xv + s.gamma * Tv * Xv;
    const double mu = s.two_mu[0], nu = s.two_nu[0];
    if (s.c_l[0] != 0.0)
        f += s.c_l[0] * Tv * oracle::rl_left(X, dX, d2X, mu, a, x);
    if (s.c_r[0] != 0.0)
        f += s.c_r[0] * Tv * oracle::rl_right(X, dX, d2X, mu, x, b);
    if (s.kappa_l[0] != 0.0)
        f -= s.kappa_l[0] * Tv * oracle::rl_left(X, dX, d2X, nu, a, x);
    if (s.kappa_r[0] != 0.0)
        f -= s.kappa_r[0] * Tv * oracle::rl_right(X, dX, d2X, nu, x, b);
    (void)zeta;
    return f;
}

} // namespace

TEST(RightRlPower, MatchesHypergeometricClosedForm)
{
    for (double p : {3.0 + 1.0 / 3.0, 6.0 + 2.0 / 7.0, 7.8})
        for (double s : {0.1, 0.5, 0.9, 1.1, 1.5, 1.9})
            for (double z : {-0.95, -0.4, 0.0, 0.3, 0.8, 0.99}) {
                const double ref = right_rl_power_hypergeometric(p, s, z);
                EXPECT_NEAR(right_rl_power(p, s, z), ref, 1e-11 * std::max(1.0, std::abs(ref)))
                    << p << " " << s << " " << z;
            }
}

TEST(RightRlPower, MatchesRlIntegral)
{
    for (double p : {3.3, 6.0 + 1.0 / 3.0})
        for (double s : {0.25, 0.75, 1.25, 1.75})
            for (double z : {-0.7, 0.1, 0.6}) {
                const Profile pr{p, 0.0, 0.0};
                const double ref = oracle::rl_right([&](double y) { return pr.g(y); }, [&](double y) { return pr.dg(y); },
                                                    [&](double y) { return pr.d2g(y); }, s, z, 1.0);
                EXPECT_NEAR(right_rl_power(p, s, z), ref, 1e-9 * std::max(1.0, std::abs(ref))) << p << " " << s << " " << z;
            }
}

TEST(RightRlPower, DomainChecks)
{
    EXPECT_THROW(right_rl_power(3.0, 0.5, 1.0), DomainError);
    EXPECT_THROW(right_rl_power(3.0, 1.0, 0.0), DomainError);
    EXPECT_THROW(right_rl_power(3.0, 2.0, 0.0), DomainError);
}

TEST(PowerRule, TemporalDerivativeOfManufacturedFactor)
{
    const double p1 = 7.0 + 2.0 / 3.0;
    const double closed = tgamma(p1 + 1.0) / tgamma(p1 + 1.0 - 0.6);
    const double ref = oracle::rl_left([&](double t) { return std::pow(t, p1); },
                                       [&](double t) { return p1 * std::pow(t, p1 - 1.0); },
                                       [&](double t) { return p1 * (p1 - 1.0) * std::pow(t, p1 - 2.0); }, 0.6, 0.0, 1.0);
    EXPECT_NEAR(closed, ref, 1e-8);
    // With gamma = 0 and no spatial operator the force is the temporal derivative alone.
    const ManufacturedCase c = test_case("I", 1);
    const ProblemSpec s = ProblemSpec::uniform(1, 0.6, 0.5, 1.5, 0, 0, 0, 0, 0.0);
    const double x = 0.0;
    EXPECT_NEAR(force_term(c, s, 1.0, std::span<const double>(&x, 1)), closed * spatial_factor(c, 0, 0.0),
                1e-12 * std::abs(closed * spatial_factor(c, 0, 0.0)));
}

TEST(SpatialFactor, DerivativesMatchRlIntegral)
{
    for (const char* id : {"I", "IV"}) {
        const ManufacturedCase c = test_case(id, 1);
        const Profile pr{c.p_even[0], c.p_odd[0], c.eps[0]};
        auto g = [&](double y) { return pr.g(y); };
        auto dg = [&](double y) { return pr.dg(y); };
        auto d2g = [&](double y) { return pr.d2g(y); };
        for (double s : {0.1, 0.5, 0.9, 1.1, 1.5, 1.9})
            for (double z : {-0.9, -0.3, 0.2, 0.75}) {
                const double l = oracle::rl_left(g, dg, d2g, s, -1.0, z);
                const double r = oracle::rl_right(g, dg, d2g, s, z, 1.0);
                EXPECT_NEAR(spatial_factor_derivative(c, 0, s, Side::left, z), l, 1e-9 * std::max(1.0, std::abs(l)))
                    << id << " L " << s << " " << z;
                EXPECT_NEAR(spatial_factor_derivative(c, 0, s, Side::right, z), r, 1e-9 * std::max(1.0, std::abs(r)))
                    << id << " R " << s << " " << z;
            }
    }
}

TEST(SpatialFactor, SineDerivativesMatchRlIntegral)
{
    for (int n : {1, 2}) {
        const ManufacturedCase c = sinusoidal_case(6.0 + 1.0 / 3.0, n, 40);
        const double k = n * std::numbers::pi;
        auto g = [&](double y) { return std::sin(k * (1.0 + y)); };
        auto dg = [&](double y) { return k * std::cos(k * (1.0 + y)); };
        auto d2g = [&](double y) { return -k * k * std::sin(k * (1.0 + y)); };
        for (double s : {0.3, 0.5, 1.2, 1.5})
            for (double z : {-0.8, 0.0, 0.55}) {
                const double l = oracle::rl_left(g, dg, d2g, s, -1.0, z);
                const double r = oracle::rl_right(g, dg, d2g, s, z, 1.0);
                EXPECT_NEAR(spatial_factor_derivative(c, 0, s, Side::left, z), l, 1e-9 * std::max(1.0, std::abs(l)));
                EXPECT_NEAR(spatial_factor_derivative(c, 0, s, Side::right, z), r, 1e-9 * std::max(1.0, std::abs(r)));
            }
    }
}

TEST(SineSeries, PartialSums)
{
    EXPECT_NEAR(sine_series(0.5 * std::numbers::pi, 25), 1.0, 1e-13);
    for (double a : {0.1, 1.0, std::numbers::pi, 2.0 * std::numbers::pi - 0.01})
        EXPECT_NEAR(sine_series(a, 25), std::sin(a), 1e-13) << a;
    const ManufacturedCase c25 = sinusoidal_case(6.0 + 1.0 / 3.0, 1, 25);
    const ManufacturedCase c30 = sinusoidal_case(6.0 + 1.0 / 3.0, 1, 30);
    const ProblemSpec s = ProblemSpec::uniform(1, 0.6, 0.5, 1.5);
    const QuadratureRule q = gauss_legendre(40);
    for (double t : {0.5, 1.3, 2.0})
        for (double x : q.nodes) {
            const double a = force_term(c25, s, t, std::span<const double>(&x, 1));
            const double b = force_term(c30, s, t, std::span<const double>(&x, 1));
            EXPECT_NEAR(a, b, 1e-12 * std::max(1.0, std::abs(b)));
        }
}

TEST(ForceTerm, MatchesPhysicalRlOracle)
{
    struct Setup {
        ManufacturedCase c;
        ProblemSpec s;
    };
    std::vector<Setup> setups;
    setups.push_back({test_case("I", 1), ProblemSpec::uniform(1, 0.6, 0.5, 1.5, 1, 1, 1, 1, 1.0)});
    setups.push_back({test_case("I", 1), ProblemSpec::uniform(1, 1.4, 0.3, 1.2, 0.7, 0.0, 0.4, 1.3, 0.5, 2.0, 0.0, 3.0)});
    setups.push_back({test_case("IV", 1), ProblemSpec::uniform(1, 0.2, 0.8, 1.8, 0.0, 1.0, 1.0, 0.0, 2.0, 1.5, -2.0, -0.5)});
    setups.push_back({test_case("II", 1), ProblemSpec::uniform(1, 0.6, 0.5, 1.5, 1, 1, 1, 1, 1.0)});
    setups.push_back({test_case("II", 1), ProblemSpec::uniform(1, 1.7, 0.2, 1.6, 0.3, 0.9, 1.1, 0.2, 0.0, 2.0, 1.0, 2.5)});
    for (const auto& [c, s] : setups) {
        const auto [a, b] = s.intervals[0];
        for (double t : {0.4, 1.0, s.T})
            for (double frac : {0.1, 0.45, 0.8}) {
                const double x = a + frac * (b - a);
                const double ref = force_oracle_1d(c, s, t, x);
                const double got = force_term(c, s, t, std::span<const double>(&x, 1));
                EXPECT_NEAR(got, ref, 1e-8 * std::max(1.0, std::abs(ref))) << c.id << " t=" << t << " x=" << x;
            }
    }
}

TEST(ForceTerm, SeparableFormAgrees)
{
    for (int dim = 1; dim <= 3; ++dim) {
        const ManufacturedCase c = test_case("III", dim);
        ProblemSpec s = ProblemSpec::uniform(dim, 0.6, 0.5, 1.5, 0.8, 0.3, 1.0, 0.4, 1.2);
        if (dim > 1)
            s.intervals[1] = {0.0, 2.5};
        const SeparableSource sep = force_separable(c, s);
        EXPECT_EQ(static_cast<int>(sep.size()), 1 + dim);
        for (int trial = 0; trial < 20; ++trial) {
            const double t = oracle::uniform(0.0, s.T);
            std::vector<double> x(dim);
            for (int i = 0; i < dim; ++i)
                x[i] = oracle::uniform(s.intervals[i].first + 1e-3, s.intervals[i].second - 1e-3);
            double v = 0.0;
            for (const auto& term : sep) {
                double prod = term.temporal(t);
                for (int i = 0; i < dim; ++i)
                    prod *= term.spatial[i](x[i]);
                v += prod;
            }
            const double f = force_term(c, s, t, x);
            EXPECT_NEAR(v, f, 1e-12 * std::max(1.0, std::abs(f)));
        }
    }
}

TEST(ExactSolution, InitialAndBoundaryValues)
{
    for (int dim = 1; dim <= 3; ++dim) {
        const ManufacturedCase c = test_case("III", dim);
        const ProblemSpec s = ProblemSpec::uniform(dim, 0.6, 0.5, 1.5);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<double> x(dim);
            for (auto& v : x)
                v = oracle::uniform(-1.0, 1.0);
            EXPECT_EQ(exact_solution(c, s, 0.0, x), 0.0);
            x[trial % dim] = (trial % 2) ? 1.0 : -1.0;
            EXPECT_LE(std::abs(exact_solution(c, s, oracle::uniform(0.0, 2.0), x)), 1e-10);
        }
    }
    const ManufacturedCase sine = test_case("II", 1);
    const ProblemSpec s = ProblemSpec::uniform(1, 0.6, 0.5, 1.5);
    for (double x : {-1.0, 1.0})
        EXPECT_LE(std::abs(exact_solution(sine, s, 1.5, std::span<const double>(&x, 1))), 1e-14);
    const ManufacturedCase c1 = test_case("I", 1);
    EXPECT_DOUBLE_EQ(c1.eps[0], std::pow(2.0, c1.p_even[0] - c1.p_odd[0]));
}

TEST(Cases, ValidationAndLookup)
{
    EXPECT_THROW(test_case("V", 1), DomainError);
    EXPECT_THROW(test_case("I", 2), DomainError);
    EXPECT_THROW(test_case("III", 4), DomainError);
    EXPECT_EQ(test_case("IV", 5).dim(), 5);
    const ManufacturedCase c = powerlaw_case(3.0, {1.8}, {1.5});
    EXPECT_THROW(c.validate(ProblemSpec::uniform(1, 0.6, 0.5, 1.9)), DomainError);
    EXPECT_NO_THROW(c.validate(ProblemSpec::uniform(1, 0.6, 0.5, 1.2)));
    EXPECT_THROW(test_case("III", 2).validate(ProblemSpec::uniform(1, 0.6, 0.5, 1.5)), DomainError);
}

TEST(ErrorNorms, ZeroCoefficientsGiveSolutionNorm)
{
    const ManufacturedCase c = test_case("I", 1);
    for (auto [a, b] : {std::pair{-1.0, 1.0}, std::pair{0.0, 3.0}}) {
        SpectralSolution sol;
        sol.spec = ProblemSpec::uniform(1, 0.6, 0.5, 1.5, 1, 1, 1, 1, 1, 2.0, a, b);
        sol.N = 4;
        sol.M = {5};
        sol.U_hat = Tensor({4, 5});
        const double T = sol.spec.T;
        const double p1 = c.p1, pe = c.p_even[0], po = c.p_odd[0], eps = c.eps[0];
        // int_0^T t^{2 p1} dt and the (b-a)/2 scaled reference integral of X^2, both closed form.
        const double It = std::pow(T, 2.0 * p1 + 1.0) / (2.0 * p1 + 1.0);
        auto mono = [](double q) { return std::pow(2.0, q + 1.0) / (q + 1.0); };
        const double Ix = 0.5 * (b - a) * (mono(2.0 * pe) - 2.0 * eps * mono(pe + po) + eps * eps * mono(2.0 * po));
        const double ref = std::sqrt(It * Ix);
        const ErrorNorms e = error_norms(sol, c);
        EXPECT_NEAR(e.l2, ref, 1e-12 * ref);
        EXPECT_GT(e.linf, 0.0);
    }
}

TEST(ErrorNorms, RepresentableSolutionHasZeroError)
{
    // u = t^{3 + tau} ((1+z)^3 - 2 (1+z)^2) lies in the trial space for N >= 4, M >= 2.
    const ProblemSpec spec = ProblemSpec::uniform(1, 0.6, 0.5, 1.5);
    const ManufacturedCase c = powerlaw_case(3.3, {3.0}, {2.0});
    ASSERT_DOUBLE_EQ(c.eps[0], 2.0);
    const int N = 5, M = 4;
    const TemporalBasisSpec tb(0.3, 2.0, N);
    const SpatialBasisSpec sb(-1.0, 1.0, M);
    // Collocate both factors in their bases.
    Eigen::MatrixXd At(N, N), As(M, M);
    Eigen::VectorXd bt(N), bs(M);
    for (int i = 0; i < N; ++i) {
        const double eta = -0.9 + 1.8 * i / (N - 1);
        for (int n = 1; n <= N; ++n)
            At(i, n - 1) = temporal_basis(tb, n, eta);
        bt(i) = temporal_factor(c, tb.time(eta));
    }
    for (int i = 0; i < M; ++i) {
        const double z = -0.85 + 1.7 * i / (M - 1);
        for (int m = 1; m <= M; ++m)
            As(i, m - 1) = spatial_basis(sb, m, z);
        bs(i) = spatial_factor(c, 0, z);
    }
    const Eigen::VectorXd ct = At.fullPivLu().solve(bt);
    const Eigen::VectorXd cs = As.fullPivLu().solve(bs);
    SpectralSolution sol;
    sol.spec = spec;
    sol.N = N;
    sol.M = {M};
    sol.U_hat = Tensor({N, M});
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < M; ++m)
            sol.U_hat.at({n, m}) = ct(n) * cs(m);
    const ErrorNorms e = error_norms(sol, c);
    EXPECT_LE(e.l2, 1e-13);
    EXPECT_LE(e.linf, 1e-13);

    // Solving the discrete problem with the manufactured force lands on the same function.
    const SpectralSolution solved = solve_manufactured(spec, c, {N, {M}});
    const ErrorNorms es = error_norms(solved, c);
    EXPECT_LE(es.l2, 1e-10);
}

TEST(Manufactured, SolutionVanishesOnBoundary)
{
    const ProblemSpec spec = ProblemSpec::uniform(2, 0.6, 0.5, 1.5);
    const ManufacturedCase c = test_case("III", 2);
    const SpectralSolution sol = solve_manufactured(spec, c, {8, {8, 8}});
    for (int trial = 0; trial < 50; ++trial) {
        double x[2] = {oracle::uniform(-1.0, 1.0), oracle::uniform(-1.0, 1.0)};
        if (trial % 3 == 0) {
            EXPECT_LE(std::abs(evaluate_solution(sol, 0.0, x)), 1e-10);
            continue;
        }
        x[trial % 2] = (trial % 4 < 2) ? -1.0 : 1.0;
        EXPECT_LE(std::abs(evaluate_solution(sol, oracle::uniform(0.0, 2.0), x)), 1e-10);
    }
}

TEST(Manufactured, RightSidedOperatorConverges)
{
    // Only right-sided advection and dispersion: exercises the mirrored force terms end to end.
    const ProblemSpec spec = ProblemSpec::uniform(1, 0.6, 0.5, 1.5, 0.0, 1.0, 0.0, 1.0);
    const ManufacturedCase c = test_case("I", 1);
    const double coarse = error_norms(solve_manufactured(spec, c, {9, {9}}), c).l2;
    const double fine = error_norms(solve_manufactured(spec, c, {21, {21}}), c).l2;
    EXPECT_LT(fine, 1e-9);
    EXPECT_LT(fine, 1e-4 * coarse);
}

TEST(ConvergenceStudy, RecordsAndDeterminism)
{
    StudyConfig cfg;
    cfg.spec = ProblemSpec::uniform(1, 0.6, 0.5, 1.5);
    cfg.mcase = test_case("I", 1);
    cfg.ladder = {{5, {5}}, {7, {7}}, {9, {9}}, {15, {15}}};
    const auto a = convergence_study(cfg);
    const auto b = convergence_study(cfg);
    ASSERT_EQ(a.size(), 4u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_TRUE(a[i].ok);
        EXPECT_EQ(a[i].case_id, "I");
        EXPECT_EQ(a[i].N, cfg.ladder[i].N);
        EXPECT_EQ(a[i].l2, b[i].l2);
        EXPECT_EQ(a[i].linf, b[i].linf);
        EXPECT_GE(a[i].seconds, 0.0);
        if (i)
            EXPECT_LT(a[i].l2, a[i - 1].l2);
    }
    cfg.ladder = {{5, {5}}};
    EXPECT_EQ(convergence_study(cfg).size(), 1u);
}

TEST(ConvergenceStudy, FailuresAreRecorded)
{
    StudyConfig cfg;
    cfg.spec = ProblemSpec::uniform(1, 0.6, 0.5, 1.5);
    cfg.mcase = test_case("I", 1);
    cfg.ladder = {{0, {5}}, {5, {5}}};
    const auto rec = convergence_study(cfg);
    ASSERT_EQ(rec.size(), 2u);
    EXPECT_FALSE(rec[0].ok);
    EXPECT_FALSE(rec[0].error.empty());
    EXPECT_TRUE(std::isnan(rec[0].l2));
    EXPECT_TRUE(rec[1].ok);
}
