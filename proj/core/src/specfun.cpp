#include "fpde/specfun.hpp"

#include "fpde/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace fpde {

namespace {

void check_params(double alpha, double beta)
{
    if (!(alpha > -1.0) || !(beta > -1.0))
        throw DomainError("Jacobi parameters must exceed -1 (alpha = " + std::to_string(alpha)
                          + ", beta = " + std::to_string(beta) + ")");
}

// Three-term recurrence step: returns P_n from P_{n-1}, P_{n-2}.
inline double recur(int n, double a, double b, double x, double p1, double p2)
{
    const double s = 2.0 * n + a + b;
    const double c0 = 2.0 * n * (n + a + b) * (s - 2.0);
    const double c1 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
    const double c2 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * s;
    return (c1 * p1 - c2 * p2) / c0;
}

// Symmetric tridiagonal QL with implicit shifts. On exit d holds the
// eigenvalues and z the first row of the eigenvector matrix (z starts as e_0).
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z)
{
    const int n = static_cast<int>(d.size());
    const double eps = std::numeric_limits<double>::epsilon();
    e.resize(n, 0.0);
    e[n - 1] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd)
                    break;
            }
            if (m != l) {
                if (++iter > 60)
                    throw ConvergenceError("tridiagonal QL did not converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
                if (r == 0.0 && i >= l)
                    continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

// Monic recurrence coefficients of the Jacobi family: a_k, k = 0..n-1, and b_k, k = 1..n-1.
void monic_coefficients(int n, double alpha, double beta, std::vector<double>& a, std::vector<double>& b)
{
    a.assign(n, 0.0);
    b.assign(n, 0.0);
    const double ab = alpha + beta;
    for (int k = 0; k < n; ++k) {
        const double s = 2.0 * k + ab;
        if (k == 0)
            a[k] = (beta - alpha) / (ab + 2.0);
        else
            a[k] = (beta * beta - alpha * alpha) / (s * (s + 2.0));
        if (k == 1)
            b[k] = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
        else if (k > 1)
            b[k] = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
}

void sort_rule(QuadratureRule& rule)
{
    std::vector<std::size_t> idx(rule.nodes.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return rule.nodes[i] < rule.nodes[j]; });
    std::vector<double> x(idx.size()), w(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        x[i] = rule.nodes[idx[i]];
        w[i] = rule.weights[idx[i]];
    }
    rule.nodes = std::move(x);
    rule.weights = std::move(w);
}

// Golub-Welsch on the (possibly modified) Jacobi matrix.
void golub_welsch(std::vector<double> diag, std::vector<double> offsq, double mu0, QuadratureRule& rule)
{
    const int n = static_cast<int>(diag.size());
    std::vector<double> e(n, 0.0);
    for (int k = 0; k + 1 < n; ++k)
        e[k] = std::sqrt(offsq[k + 1]);
    std::vector<double> z(n, 0.0);
    z[0] = 1.0;
    tridiagonal_ql(diag, e, z);
    rule.nodes = diag;
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i)
        rule.weights[i] = mu0 * z[i] * z[i];
    sort_rule(rule);
}

// Newton polish of an approximate root of P_n^{a,b}.
double polish_root(int n, double a, double b, double x)
{
    for (int it = 0; it < 3; ++it) {
        const double f = jacobi_poly(n, a, b, x);
        const double df = jacobi_poly_derivative(n, a, b, x);
        if (df == 0.0)
            break;
        const double dx = f / df;
        if (!(std::abs(dx) < 1e-6))
            break;
        x -= dx;
        if (std::abs(dx) < 1e-16)
            break;
    }
    return x;
}

} // namespace

double jacobi_poly(int n, double alpha, double beta, double x)
{
    if (n < 0)
        throw DomainError("Jacobi degree must be non-negative, got " + std::to_string(n));
    check_params(alpha, beta);
    if (n == 0)
        return 1.0;
    double p2 = 1.0;
    double p1 = 0.5 * ((alpha + beta + 2.0) * x + (alpha - beta));
    for (int k = 2; k <= n; ++k) {
        const double p = recur(k, alpha, beta, x, p1, p2);
        p2 = p1;
        p1 = p;
    }
    return p1;
}

void jacobi_poly_all(int nmax, double alpha, double beta, double x, std::span<double> out)
{
    if (nmax < 0)
        throw DomainError("Jacobi degree must be non-negative, got " + std::to_string(nmax));
    if (out.size() < static_cast<std::size_t>(nmax) + 1)
        throw DomainError("output span too short for Jacobi values");
    check_params(alpha, beta);
    out[0] = 1.0;
    if (nmax == 0)
        return;
    out[1] = 0.5 * ((alpha + beta + 2.0) * x + (alpha - beta));
    for (int k = 2; k <= nmax; ++k)
        out[k] = recur(k, alpha, beta, x, out[k - 1], out[k - 2]);
}

double jacobi_poly_derivative(int n, double alpha, double beta, double x)
{
    if (n < 0)
        throw DomainError("Jacobi degree must be non-negative, got " + std::to_string(n));
    if (n == 0)
        return 0.0;
    return 0.5 * (n + alpha + beta + 1.0) * jacobi_poly(n - 1, alpha + 1.0, beta + 1.0, x);
}

double legendre(int n, double x) { return jacobi_poly(n, 0.0, 0.0, x); }

double gamma_ratio(double a, double b)
{
    if (!(a > 0.0) || !(b > 0.0))
        throw DomainError("gamma_ratio needs positive arguments (a = " + std::to_string(a)
                          + ", b = " + std::to_string(b) + ")");
    if (a == b)
        return 1.0;
    if (std::max(a, b) <= 170.0)
        return std::tgamma(a) / std::tgamma(b);
    // Shift both arguments down by whole steps: Gamma(a)/Gamma(b) =
    // prod (a-k)/(b-k) * Gamma(a-K)/Gamma(b-K).
    const double k = std::floor(std::max(a, b) - 160.0);
    if (k <= 2000.0 && a - k > 0.0 && b - k > 0.0) {
        double prod = 1.0;
        for (int j = 1; j <= static_cast<int>(k); ++j)
            prod *= (a - j) / (b - j);
        return prod * std::tgamma(a - k) / std::tgamma(b - k);
    }
    return std::exp(std::lgamma(a) - std::lgamma(b));
}

double rgamma(double x)
{
    if (x <= 0.0 && x == std::floor(x))
        return 0.0;
    if (x > 170.0)
        return std::exp(-std::lgamma(x));
    return 1.0 / std::tgamma(x);
}

double jacobi_weight_integral(double alpha, double beta)
{
    check_params(alpha, beta);
    return std::exp((alpha + beta + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0)
                    - std::lgamma(alpha + beta + 2.0));
}

QuadratureRule gauss_jacobi(int q, double alpha, double beta)
{
    if (q < 1)
        throw DomainError("Gauss-Jacobi needs at least one point, got " + std::to_string(q));
    check_params(alpha, beta);
    QuadratureRule rule;
    rule.kind = (alpha == 0.0 && beta == 0.0) ? QuadratureKind::gauss_legendre : QuadratureKind::gauss_jacobi;
    rule.alpha = alpha;
    rule.beta = beta;

    std::vector<double> a, b;
    monic_coefficients(q, alpha, beta, a, b);
    golub_welsch(a, b, jacobi_weight_integral(alpha, beta), rule);

    // Polished nodes and closed-form weights.
    const double logc = (alpha + beta + 1.0) * std::log(2.0) + std::lgamma(q + alpha + 1.0)
                        + std::lgamma(q + beta + 1.0) - std::lgamma(q + alpha + beta + 1.0) - std::lgamma(q + 1.0);
    const double c = std::exp(logc);
    for (int i = 0; i < q; ++i) {
        const double x = polish_root(q, alpha, beta, rule.nodes[i]);
        const double dp = jacobi_poly_derivative(q, alpha, beta, x);
        rule.nodes[i] = x;
        rule.weights[i] = c / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

QuadratureRule gauss_lobatto_jacobi(int q, double alpha, double beta)
{
    if (q < 2)
        throw DomainError("Gauss-Lobatto-Jacobi needs at least two points, got " + std::to_string(q));
    check_params(alpha, beta);
    QuadratureRule rule;
    rule.kind = QuadratureKind::gauss_lobatto_jacobi;
    rule.alpha = alpha;
    rule.beta = beta;

    std::vector<double> a, b;
    monic_coefficients(q, alpha, beta, a, b);
    // Ratio pi_{q-1}(x) / pi_{q-2}(x) at x = +-1.
    auto ratio = [&](double x) {
        double r = x - a[0];
        for (int k = 1; k <= q - 2; ++k)
            r = (x - a[k]) - b[k] / r;
        return r;
    };
    const double rp = ratio(1.0);
    const double rm = ratio(-1.0);
    const double an = (rp + rm) / (rp - rm);
    const double bn = (1.0 - an) * rp;
    a[q - 1] = an;
    b[q - 1] = bn;
    golub_welsch(a, b, jacobi_weight_integral(alpha, beta), rule);

    rule.nodes.front() = -1.0;
    rule.nodes.back() = 1.0;
    for (int i = 1; i + 1 < q; ++i)
        rule.nodes[i] = polish_root(q - 2, alpha + 1.0, beta + 1.0, rule.nodes[i]);
    return rule;
}

QuadratureRule gauss_legendre(int q) { return gauss_jacobi(q, 0.0, 0.0); }

QuadratureRule graded_gauss_legendre(int q, int levels, double ratio)
{
    if (levels < 0)
        throw DomainError("grading levels must be non-negative, got " + std::to_string(levels));
    if (levels == 0)
        return gauss_legendre(q);
    if (!(ratio > 0.0 && ratio < 0.5))
        throw DomainError("grading ratio must lie in (0, 0.5), got " + std::to_string(ratio));
    const QuadratureRule base = gauss_legendre(q);

    std::vector<double> edges;
    edges.push_back(-1.0);
    for (int j = levels; j >= 1; --j)
        edges.push_back(-1.0 + std::pow(ratio, j));
    for (int j = 1; j <= levels; ++j)
        edges.push_back(1.0 - std::pow(ratio, j));
    edges.push_back(1.0);

    QuadratureRule rule;
    rule.kind = QuadratureKind::graded_gauss_legendre;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        const double h = 0.5 * (edges[p + 1] - edges[p]);
        const double m = 0.5 * (edges[p + 1] + edges[p]);
        for (std::size_t i = 0; i < base.size(); ++i) {
            rule.nodes.push_back(m + h * base.nodes[i]);
            rule.weights.push_back(h * base.weights[i]);
        }
    }
    return rule;
}

} // namespace fpde
