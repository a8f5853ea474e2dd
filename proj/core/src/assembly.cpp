#include "fpde/assembly.hpp"

#include "fpde/basis.hpp"
#include "fpde/error.hpp"
#include "fpde/specfun.hpp"

#include <cmath>
#include <string>

namespace fpde {

namespace {

void check_order(int n, const char* name)
{
    if (n < 1)
        throw DomainError(std::string(name) + " = " + std::to_string(n) + " must be >= 1");
}

void check_orders(const ProblemSpec& spec, int N, const std::vector<int>& M)
{
    spec.validate();
    check_order(N, "N");
    if (static_cast<int>(M.size()) != spec.dim)
        throw DomainError("got " + std::to_string(M.size()) + " spatial orders for dim = " + std::to_string(spec.dim));
    for (int m : M)
        check_order(m, "M");
}

// Rows: test index r = 1..N; columns: quadrature nodes. Includes (T/2) and the rule weights.
Eigen::MatrixXd temporal_test_weights(const ProblemSpec& spec, int N, const QuadratureRule& rule)
{
    const double tau = spec.tau();
    Eigen::MatrixXd W(N, static_cast<Eigen::Index>(rule.size()));
    std::vector<double> p(N);
    for (std::size_t q = 0; q < rule.size(); ++q) {
        jacobi_poly_all(N - 1, tau, -tau, rule.nodes[q], p);
        for (int r = 1; r <= N; ++r)
            W(r - 1, q) = 0.5 * spec.T * rule.weights[q] * sigma_test(r) * p[r - 1];
    }
    return W;
}

Eigen::MatrixXd spatial_test_weights(double a, double b, int M, const QuadratureRule& rule)
{
    Eigen::MatrixXd W(M, static_cast<Eigen::Index>(rule.size()));
    std::vector<double> p(M + 2);
    for (std::size_t q = 0; q < rule.size(); ++q) {
        jacobi_poly_all(M + 1, 0.0, 0.0, rule.nodes[q], p);
        for (int k = 1; k <= M; ++k)
            W(k - 1, q) = 0.5 * (b - a) * rule.weights[q] * sigma_test(k) * (p[k + 1] - p[k - 1]);
    }
    return W;
}

QuadratureRule temporal_load_rule(const ProblemSpec& spec, int N, const LoadQuadrature& quad)
{
    const int q = quad.temporal_points > 0 ? quad.temporal_points : N + 20;
    return gauss_jacobi(q, spec.tau(), 0.0);
}

QuadratureRule spatial_load_rule(int M, const LoadQuadrature& quad)
{
    const int q = quad.spatial_points > 0 ? quad.spatial_points : M + 20;
    return graded_gauss_legendre(q, quad.grading_levels, quad.grading_ratio);
}

} // namespace

Eigen::MatrixXd temporal_stiffness(int N, double tau, double T)
{
    check_order(N, "N");
    const TemporalBasisSpec basis(tau, T, N);
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(N, N);
    const double scale = std::pow(2.0 / T, 2.0 * tau - 1.0);
    for (int n = 1; n <= N; ++n) {
        const double g = gamma_ratio(n + tau, n);
        S(n - 1, n - 1) = sigma_test(n) * sigma_trial(n) * g * g * scale * 2.0 / (2.0 * n - 1.0);
    }
    return S;
}

Eigen::MatrixXd temporal_mass(int N, double tau, double T, int q)
{
    check_order(N, "N");
    const TemporalBasisSpec basis(tau, T, N);
    if (q <= 0)
        q = N + 1;
    const QuadratureRule rule = gauss_jacobi(q, tau, tau);
    Eigen::MatrixXd test(q, N), trial(q, N);
    std::vector<double> pt(N), pb(N);
    for (int i = 0; i < q; ++i) {
        jacobi_poly_all(N - 1, tau, -tau, rule.nodes[i], pt);
        jacobi_poly_all(N - 1, -tau, tau, rule.nodes[i], pb);
        for (int n = 1; n <= N; ++n) {
            test(i, n - 1) = sigma_test(n) * pt[n - 1];
            trial(i, n - 1) = sigma_trial(n) * pb[n - 1];
        }
    }
    const Eigen::Map<const Eigen::VectorXd> w(rule.weights.data(), q);
    return 0.5 * T * test.transpose() * w.asDiagonal() * trial;
}

Eigen::MatrixXd spatial_mass(int M, double a, double b)
{
    check_order(M, "M");
    const SpatialBasisSpec basis(a, b, M);
    auto h = [](int i) { return 2.0 / (2.0 * i + 1.0); };
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(M, M);
    const double jac = 0.5 * (b - a);
    for (int k = 1; k <= M; ++k) {
        A(k - 1, k - 1) = jac * sigma_test(k) * sigma_trial(k) * (h(k + 1) + h(k - 1));
        if (k + 2 <= M)
            A(k - 1, k + 1) = -jac * sigma_test(k) * sigma_trial(k + 2) * h(k + 1);
        if (k - 2 >= 1)
            A(k - 1, k - 3) = -jac * sigma_test(k) * sigma_trial(k - 2) * h(k - 1);
    }
    return A;
}

Eigen::MatrixXd spatial_stiffness(int M, double sigma, double a, double b, Side side, int q)
{
    check_order(M, "M");
    const SpatialBasisSpec basis(a, b, M);
    if (!(sigma > 0.0 && sigma < 1.0))
        throw DomainError("stiffness half-order " + std::to_string(sigma) + " outside (0,1)");
    if (q <= 0)
        q = M + 2;
    const int J = M + 2; // Legendre degrees 0..M+1
    const QuadratureRule rule = gauss_jacobi(q, -sigma, -sigma);
    // R carries the right derivative factor P_j^{-s,s}, L the left one P_j^{s,-s}.
    Eigen::MatrixXd R(q, J), L(q, J);
    std::vector<double> pr(J), pl(J);
    std::vector<double> c(J);
    for (int j = 0; j < J; ++j)
        c[j] = gamma_ratio(j + 1.0, j - sigma + 1.0);
    for (int i = 0; i < q; ++i) {
        jacobi_poly_all(J - 1, -sigma, sigma, rule.nodes[i], pr);
        jacobi_poly_all(J - 1, sigma, -sigma, rule.nodes[i], pl);
        for (int j = 0; j < J; ++j) {
            R(i, j) = c[j] * pr[j];
            L(i, j) = c[j] * pl[j];
        }
    }
    const Eigen::Map<const Eigen::VectorXd> w(rule.weights.data(), q);
    // K(r, n) = int D_r P_r * D_l P_n (right derivative on the first index).
    Eigen::MatrixXd K = R.transpose() * w.asDiagonal() * L;
    if (side == Side::right)
        K.transposeInPlace();

    const double s = std::pow(0.5 * (b - a), 1.0 - 2.0 * sigma);
    Eigen::MatrixXd S(M, M);
    for (int k = 1; k <= M; ++k)
        for (int n = 1; n <= M; ++n)
            S(k - 1, n - 1) = s * sigma_test(k) * sigma_trial(n)
                              * (K(k + 1, n + 1) - K(k + 1, n - 1) - K(k - 1, n + 1) + K(k - 1, n - 1));
    return S;
}

Eigen::MatrixXd total_spatial_stiffness(const ProblemSpec& spec, int i, int M)
{
    spec.validate();
    if (i < 0 || i >= spec.dim)
        throw DomainError("dimension index " + std::to_string(i) + " outside 0.." + std::to_string(spec.dim - 1));
    const auto [a, b] = spec.intervals[i];
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(M, M);
    auto add = [&](double coef, double sigma, Side side) {
        if (coef != 0.0)
            S += coef * spatial_stiffness(M, sigma, a, b, side);
    };
    add(spec.c_l[i], spec.mu(i), Side::left);
    add(spec.c_r[i], spec.mu(i), Side::right);
    add(-spec.kappa_l[i], spec.nu(i), Side::left);
    add(-spec.kappa_r[i], spec.nu(i), Side::right);
    return S;
}

Tensor load_tensor(const ProblemSpec& spec, const SourceFunction& f, int N, const std::vector<int>& M,
                   const LoadQuadrature& quad)
{
    check_orders(spec, N, M);
    const int d = spec.dim;
    const QuadratureRule rt = temporal_load_rule(spec, N, quad);
    std::vector<QuadratureRule> rs;
    std::vector<int> grid{static_cast<int>(rt.size())};
    for (int i = 0; i < d; ++i) {
        rs.push_back(spatial_load_rule(M[i], quad));
        grid.push_back(static_cast<int>(rs.back().size()));
    }
    std::vector<std::vector<double>> xs(d);
    for (int i = 0; i < d; ++i) {
        const auto [a, b] = spec.intervals[i];
        for (double xi : rs[i].nodes)
            xs[i].push_back(a + 0.5 * (b - a) * (xi + 1.0));
    }

    Tensor V(grid);
    std::vector<int> idx(d + 1, 0);
    std::vector<double> x(d);
    for (std::size_t lin = 0; lin < V.size(); ++lin) {
        const double t = 0.5 * spec.T * (rt.nodes[idx[0]] + 1.0);
        for (int i = 0; i < d; ++i)
            x[i] = xs[i][idx[i + 1]];
        V[lin] = f(t, x);
        for (int k = d; k >= 0; --k) {
            if (++idx[k] < grid[k])
                break;
            idx[k] = 0;
        }
    }

    Tensor F = V.mode_product(0, temporal_test_weights(spec, N, rt));
    for (int i = 0; i < d; ++i) {
        const auto [a, b] = spec.intervals[i];
        F = F.mode_product(i + 1, spatial_test_weights(a, b, M[i], rs[i]));
    }
    return F;
}

Tensor load_tensor(const ProblemSpec& spec, const SeparableSource& f, int N, const std::vector<int>& M,
                   const LoadQuadrature& quad)
{
    check_orders(spec, N, M);
    const int d = spec.dim;
    const QuadratureRule rt = temporal_load_rule(spec, N, quad);
    const Eigen::MatrixXd Wt = temporal_test_weights(spec, N, rt);
    std::vector<QuadratureRule> rs;
    std::vector<Eigen::MatrixXd> Ws;
    for (int i = 0; i < d; ++i) {
        rs.push_back(spatial_load_rule(M[i], quad));
        const auto [a, b] = spec.intervals[i];
        Ws.push_back(spatial_test_weights(a, b, M[i], rs.back()));
    }

    std::vector<int> shape{N};
    shape.insert(shape.end(), M.begin(), M.end());
    Tensor F(shape);
    for (const SeparableTerm& term : f) {
        if (static_cast<int>(term.spatial.size()) != d)
            throw DomainError("separable source term has " + std::to_string(term.spatial.size())
                              + " spatial factors, expected " + std::to_string(d));
        Eigen::VectorXd g(rt.size());
        for (std::size_t q = 0; q < rt.size(); ++q)
            g[q] = term.temporal(0.5 * spec.T * (rt.nodes[q] + 1.0));
        std::vector<Eigen::VectorXd> factors{Wt * g};
        for (int i = 0; i < d; ++i) {
            const auto [a, b] = spec.intervals[i];
            Eigen::VectorXd h(rs[i].size());
            for (std::size_t q = 0; q < rs[i].size(); ++q)
                h[q] = term.spatial[i](a + 0.5 * (b - a) * (rs[i].nodes[q] + 1.0));
            factors.push_back(Ws[i] * h);
        }
        // Outer product accumulated in row-major order.
        std::vector<int> idx(d + 1, 0);
        for (std::size_t lin = 0; lin < F.size(); ++lin) {
            double v = 1.0;
            for (int k = 0; k <= d; ++k)
                v *= factors[k][idx[k]];
            F[lin] += v;
            for (int k = d; k >= 0; --k) {
                if (++idx[k] < shape[k])
                    break;
                idx[k] = 0;
            }
        }
    }
    return F;
}

std::vector<int> AssembledSystem::shape() const
{
    std::vector<int> s{N};
    s.insert(s.end(), M.begin(), M.end());
    return s;
}

AssembledSystem assemble_operators(const ProblemSpec& spec, int N, const std::vector<int>& M)
{
    check_orders(spec, N, M);
    AssembledSystem sys;
    sys.spec = spec;
    sys.N = N;
    sys.M = M;
    sys.S_tau = temporal_stiffness(N, spec.tau(), spec.T);
    sys.M_tau = temporal_mass(N, spec.tau(), spec.T);
    for (int i = 0; i < spec.dim; ++i) {
        const auto [a, b] = spec.intervals[i];
        sys.mass.push_back(spatial_mass(M[i], a, b));
        sys.S_tot.push_back(total_spatial_stiffness(spec, i, M[i]));
    }
    sys.F = Tensor(sys.shape());
    return sys;
}

AssembledSystem assemble(const ProblemSpec& spec, int N, const std::vector<int>& M, const SourceFunction& f,
                         const LoadQuadrature& quad)
{
    AssembledSystem sys = assemble_operators(spec, N, M);
    sys.F = load_tensor(spec, f, N, M, quad);
    return sys;
}

AssembledSystem assemble(const ProblemSpec& spec, int N, const std::vector<int>& M, const SeparableSource& f,
                         const LoadQuadrature& quad)
{
    AssembledSystem sys = assemble_operators(spec, N, M);
    sys.F = load_tensor(spec, f, N, M, quad);
    return sys;
}

} // namespace fpde
