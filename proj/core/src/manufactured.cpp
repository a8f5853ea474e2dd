#include "fpde/manufactured.hpp"

#include "fpde/error.hpp"
#include "fpde/specfun.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace fpde {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v)
{
    std::ostringstream os;
    os << v;
    return os.str();
}

void check_fractional_order(double s)
{
    if (!(s > 0.0 && s < 2.0) || s == 1.0)
        throw DomainError("derivative order " + fmt(s) + " outside (0,1) U (1,2)");
}

// Gamma(p + 1) / Gamma(p + 1 - s): coefficient of the RL power rule.
double power_rule(double p, double s) { return gamma_ratio(p + 1.0, p + 1.0 - s); }

// sum_{j=1}^{terms} (-1)^{j-1} (n pi)^{2j-1} w^{2j-1-s} / Gamma(2j - s): the left RL derivative
// of order s of sin(n pi w) at w >= 0, term by term.
double sine_series_derivative(double npi, double s, double w, int terms)
{
    const double a = npi * w;
    double pw = a;
    double sum = 0.0;
    for (int j = 1; j <= terms; ++j) {
        const double term = pw * rgamma(2.0 * j - s);
        sum += (j % 2 == 1) ? term : -term;
        pw *= a * a;
    }
    return std::pow(w, -s) * sum;
}

double zeta_of(const ProblemSpec& spec, int i, double x)
{
    const auto [a, b] = spec.intervals[i];
    return 2.0 * (x - a) / (b - a) - 1.0;
}

double time_derivative(const ManufacturedCase& c, const ProblemSpec& spec, double t)
{
    if (t == 0.0)
        return 0.0;
    return power_rule(c.p1, spec.two_tau) * std::pow(t, c.p1 - spec.two_tau);
}

// Spatial operator applied to X_i in physical coordinates.
double spatial_operator(const ManufacturedCase& c, const ProblemSpec& spec, int i, double zeta)
{
    const double h = 2.0 / spec.width(i);
    const double smu = std::pow(h, spec.two_mu[i]);
    const double snu = std::pow(h, spec.two_nu[i]);
    double v = 0.0;
    if (spec.c_l[i] != 0.0)
        v += spec.c_l[i] * smu * spatial_factor_derivative(c, i, spec.two_mu[i], Side::left, zeta);
    if (spec.c_r[i] != 0.0)
        v += spec.c_r[i] * smu * spatial_factor_derivative(c, i, spec.two_mu[i], Side::right, zeta);
    if (spec.kappa_l[i] != 0.0)
        v -= spec.kappa_l[i] * snu * spatial_factor_derivative(c, i, spec.two_nu[i], Side::left, zeta);
    if (spec.kappa_r[i] != 0.0)
        v -= spec.kappa_r[i] * snu * spatial_factor_derivative(c, i, spec.two_nu[i], Side::right, zeta);
    return v;
}

std::vector<double> linspace(double a, double b, int n)
{
    std::vector<double> v(n);
    for (int k = 0; k < n; ++k)
        v[k] = (n == 1) ? a : a + (b - a) * k / (n - 1.0);
    v.back() = b;
    return v;
}

// Exact solution on a tensor grid as an outer product of factor vectors.
Tensor exact_on_grid(const ManufacturedCase& c, const ProblemSpec& spec, const std::vector<double>& times,
                     const std::vector<std::vector<double>>& coords)
{
    std::vector<std::vector<double>> f;
    std::vector<int> shape;
    std::vector<double> ft;
    for (double t : times)
        ft.push_back(temporal_factor(c, t));
    f.push_back(ft);
    shape.push_back(static_cast<int>(times.size()));
    for (int i = 0; i < spec.dim; ++i) {
        std::vector<double> fx;
        for (double x : coords[i])
            fx.push_back(spatial_factor(c, i, std::clamp(zeta_of(spec, i, x), -1.0, 1.0)));
        f.push_back(fx);
        shape.push_back(static_cast<int>(coords[i].size()));
    }
    Tensor out(shape);
    std::vector<int> idx(shape.size(), 0);
    for (std::size_t lin = 0; lin < out.size(); ++lin) {
        double v = 1.0;
        for (std::size_t k = 0; k < shape.size(); ++k)
            v *= f[k][idx[k]];
        out[lin] = v;
        for (int k = static_cast<int>(shape.size()) - 1; k >= 0; --k) {
            if (++idx[k] < shape[k])
                break;
            idx[k] = 0;
        }
    }
    return out;
}

} // namespace

int ManufacturedCase::dim() const
{
    return kind == CaseKind::sinusoidal ? 1 : static_cast<int>(p_even.size());
}

void ManufacturedCase::validate(const ProblemSpec& spec) const
{
    if (!(p1 > 0.0) || !std::isfinite(p1))
        throw DomainError("p1 = " + fmt(p1) + " must be positive");
    if (dim() != spec.dim)
        throw DomainError("case " + id + " has " + std::to_string(dim()) + " spatial dimensions, problem has "
                          + std::to_string(spec.dim));
    if (kind == CaseKind::sinusoidal) {
        if (n_sine < 1)
            throw DomainError("n_sine = " + std::to_string(n_sine) + " must be >= 1");
        if (series_terms < 1)
            throw DomainError("series_terms = " + std::to_string(series_terms) + " must be >= 1");
        return;
    }
    if (p_odd.size() != p_even.size() || eps.size() != p_even.size())
        throw DomainError("case " + id + " exponent lists differ in length");
    for (int i = 0; i < dim(); ++i) {
        const double lim = spec.two_nu.at(i);
        if (!(p_even[i] > lim) || !(p_odd[i] > lim))
            throw DomainError("case " + id + " exponents of dimension " + std::to_string(i + 1)
                              + " must exceed 2*nu = " + fmt(lim));
    }
}

ManufacturedCase powerlaw_case(double p1, std::vector<double> p_even, std::vector<double> p_odd)
{
    if (p_even.size() != p_odd.size() || p_even.empty())
        throw DomainError("powerlaw case needs matching, nonempty exponent lists");
    ManufacturedCase c;
    c.kind = CaseKind::powerlaw;
    c.p1 = p1;
    c.p_even = std::move(p_even);
    c.p_odd = std::move(p_odd);
    for (std::size_t i = 0; i < c.p_even.size(); ++i)
        c.eps.push_back(std::pow(2.0, c.p_even[i] - c.p_odd[i]));
    return c;
}

ManufacturedCase sinusoidal_case(double p1, int n_sine, int series_terms)
{
    ManufacturedCase c;
    c.kind = CaseKind::sinusoidal;
    c.p1 = p1;
    c.n_sine = n_sine;
    c.series_terms = series_terms;
    return c;
}

ManufacturedCase test_case(std::string_view id, int dim)
{
    ManufacturedCase c;
    if (id == "I") {
        if (dim != 1)
            throw DomainError("case I is one-dimensional, got dim = " + std::to_string(dim));
        c = powerlaw_case(7.0 + 2.0 / 3.0, {6.0 + 1.0 / 3.0}, {6.0 + 2.0 / 7.0});
    } else if (id == "II") {
        if (dim != 1)
            throw DomainError("case II is one-dimensional, got dim = " + std::to_string(dim));
        c = sinusoidal_case(6.0 + 1.0 / 3.0, 1, 25);
    } else if (id == "III") {
        const std::vector<double> pe{6.0 + 1.0 / 3.0, 7.0 + 4.0 / 5.0, 7.0 + 3.0 / 5.0};
        const std::vector<double> po{6.0 + 2.0 / 7.0, 7.0 + 1.0 / 7.0, 7.0 + 1.0 / 7.0};
        if (dim < 1 || dim > 3)
            throw DomainError("case III is defined for dim 1..3, got dim = " + std::to_string(dim));
        c = powerlaw_case(7.0 + 2.0 / 3.0, {pe.begin(), pe.begin() + dim}, {po.begin(), po.begin() + dim});
    } else if (id == "IV") {
        if (dim < 1)
            throw DomainError("dim = " + std::to_string(dim) + " must be >= 1");
        c = powerlaw_case(4.0, std::vector<double>(dim, 3.0 + 1.0 / 3.0), std::vector<double>(dim, 3.0 + 2.0 / 7.0));
    } else {
        throw DomainError("unknown test case '" + std::string(id) + "' (expected I, II, III or IV)");
    }
    c.id = std::string(id);
    return c;
}

double right_rl_power(double p, double s, double z)
{
    check_fractional_order(s);
    if (!(z >= -1.0 && z < 1.0))
        throw DomainError("z = " + fmt(z) + " outside [-1, 1)");
    const double w = 1.0 - z;
    const double h = 0.5 * w;
    const double pre = std::pow(2.0, p) * std::pow(w, -s);
    const double frac = (p - s) - std::round(p - s);
    const double tiny = std::numeric_limits<double>::epsilon();

    if (h <= 0.5 || std::abs(frac) < 1e-9) {
        // 2^p w^-s sum_k (-p)_k h^k / Gamma(k + 1 - s)
        double term = rgamma(1.0 - s);
        double sum = term;
        for (int k = 0; k < 200000; ++k) {
            term *= (k - p) * h / (k + 1.0 - s);
            sum += term;
            if (term == 0.0 || (k > p + 2.0 && std::abs(term) <= tiny * std::abs(sum)))
                break;
        }
        return pre * sum;
    }

    // Connection formula z -> 1 - z for 2F1(-p, 1; 1 - s; h) / Gamma(1 - s).
    const double y = 1.0 - h;
    double term = 1.0;
    double f1 = 1.0;
    for (int k = 0; k < 10000; ++k) {
        term *= (k - p) * y / (s - p + 1.0 + k);
        f1 += term;
        if (term == 0.0 || (k > p + 2.0 && std::abs(term) <= tiny * std::abs(f1)))
            break;
    }
    const double t1 = rgamma(-s) / (p - s) * f1;
    // 2F1(1 - s + p, -s; p - s + 1; y) = (1 - y)^s
    const double rp = rgamma(-p);
    const double t2 = rp == 0.0 ? 0.0 : std::pow(y, p - s) * std::tgamma(s - p) * rp * std::pow(h, s);
    return pre * (t1 + t2);
}

double sine_series(double a, int terms)
{
    double pw = a;
    double fact = 1.0;
    double sum = 0.0;
    for (int j = 1; j <= terms; ++j) {
        const double term = pw / fact;
        sum += (j % 2 == 1) ? term : -term;
        pw *= a * a;
        fact *= (2.0 * j) * (2.0 * j + 1.0);
    }
    return sum;
}

double temporal_factor(const ManufacturedCase& c, double t) { return t == 0.0 ? 0.0 : std::pow(t, c.p1); }

double spatial_factor(const ManufacturedCase& c, int i, double zeta)
{
    if (!(zeta >= -1.0 && zeta <= 1.0))
        throw DomainError("zeta = " + fmt(zeta) + " outside [-1, 1]");
    if (c.kind == CaseKind::sinusoidal) {
        if (zeta == -1.0 || zeta == 1.0)
            return 0.0;
        return std::sin(c.n_sine * kPi * (1.0 + zeta));
    }
    if (zeta == -1.0)
        return 0.0;
    const double w = 1.0 + zeta;
    return std::pow(w, c.p_even.at(i)) - c.eps.at(i) * std::pow(w, c.p_odd.at(i));
}

double spatial_factor_derivative(const ManufacturedCase& c, int i, double s, Side side, double zeta)
{
    check_fractional_order(s);
    if (!(zeta >= -1.0 && zeta <= 1.0))
        throw DomainError("zeta = " + fmt(zeta) + " outside [-1, 1]");
    if (c.kind == CaseKind::sinusoidal) {
        const double npi = c.n_sine * kPi;
        // sin(n pi (1 + z)) = -sin(n pi (1 - z)) for integer n.
        if (side == Side::left)
            return sine_series_derivative(npi, s, 1.0 + zeta, c.series_terms);
        return -sine_series_derivative(npi, s, 1.0 - zeta, c.series_terms);
    }
    const double p = c.p_even.at(i);
    const double q = c.p_odd.at(i);
    if (side == Side::left) {
        const double w = 1.0 + zeta;
        return power_rule(p, s) * std::pow(w, p - s) - c.eps.at(i) * power_rule(q, s) * std::pow(w, q - s);
    }
    return right_rl_power(p, s, zeta) - c.eps.at(i) * right_rl_power(q, s, zeta);
}

double exact_solution(const ManufacturedCase& c, const ProblemSpec& spec, double t, std::span<const double> x)
{
    if (static_cast<int>(x.size()) != spec.dim)
        throw DomainError("point dimension mismatch");
    double v = temporal_factor(c, t);
    for (int i = 0; i < spec.dim; ++i)
        v *= spatial_factor(c, i, zeta_of(spec, i, x[i]));
    return v;
}

double force_term_powerlaw(const ManufacturedCase& c, const ProblemSpec& spec, double t, std::span<const double> x)
{
    if (c.kind != CaseKind::powerlaw)
        throw DomainError("force_term_powerlaw called on a sinusoidal case");
    return force_term(c, spec, t, x);
}

double force_term_sinusoidal(const ManufacturedCase& c, const ProblemSpec& spec, double t,
                             std::span<const double> x)
{
    if (c.kind != CaseKind::sinusoidal)
        throw DomainError("force_term_sinusoidal called on a powerlaw case");
    return force_term(c, spec, t, x);
}

double force_term(const ManufacturedCase& c, const ProblemSpec& spec, double t, std::span<const double> x)
{
    if (static_cast<int>(x.size()) != spec.dim)
        throw DomainError("point dimension mismatch");
    const int d = spec.dim;
    std::vector<double> zeta(d), X(d);
    for (int i = 0; i < d; ++i) {
        zeta[i] = zeta_of(spec, i, x[i]);
        X[i] = spatial_factor(c, i, zeta[i]);
    }
    const double tp = temporal_factor(c, t);
    double prod = 1.0;
    for (double v : X)
        prod *= v;
    double f = (time_derivative(c, spec, t) + spec.gamma * tp) * prod;
    for (int i = 0; i < d; ++i) {
        double others = 1.0;
        for (int j = 0; j < d; ++j)
            if (j != i)
                others *= X[j];
        f += tp * spatial_operator(c, spec, i, zeta[i]) * others;
    }
    return f;
}

SeparableSource force_separable(const ManufacturedCase& c, const ProblemSpec& spec)
{
    c.validate(spec);
    const int d = spec.dim;
    SeparableSource src;
    auto factor = [c, spec](int i) {
        return [c, spec, i](double x) { return spatial_factor(c, i, std::clamp(zeta_of(spec, i, x), -1.0, 1.0)); };
    };
    SeparableTerm head;
    head.temporal = [c, spec](double t) { return time_derivative(c, spec, t) + spec.gamma * temporal_factor(c, t); };
    for (int i = 0; i < d; ++i)
        head.spatial.push_back(factor(i));
    src.push_back(std::move(head));
    for (int i = 0; i < d; ++i) {
        SeparableTerm term;
        term.temporal = [c](double t) { return temporal_factor(c, t); };
        for (int j = 0; j < d; ++j) {
            if (j == i)
                term.spatial.push_back([c, spec, i](double x) {
                    return spatial_operator(c, spec, i, std::clamp(zeta_of(spec, i, x), -1.0, 1.0));
                });
            else
                term.spatial.push_back(factor(j));
        }
        src.push_back(std::move(term));
    }
    return src;
}

ErrorNorms error_norms(const SpectralSolution& sol, const ManufacturedCase& c, const NormOptions& opt)
{
    const ProblemSpec& spec = sol.spec;
    c.validate(spec);
    const int d = spec.dim;
    int order = sol.N;
    for (int m : sol.M)
        order = std::max(order, m);
    const QuadratureRule gl = gauss_legendre(order + opt.extra_points);

    std::vector<double> times, wt;
    for (std::size_t q = 0; q < gl.size(); ++q) {
        times.push_back(0.5 * spec.T * (gl.nodes[q] + 1.0));
        wt.push_back(0.5 * spec.T * gl.weights[q]);
    }
    std::vector<std::vector<double>> coords(d), wx(d);
    for (int i = 0; i < d; ++i) {
        const auto [a, b] = spec.intervals[i];
        for (std::size_t q = 0; q < gl.size(); ++q) {
            coords[i].push_back(a + 0.5 * (b - a) * (gl.nodes[q] + 1.0));
            wx[i].push_back(0.5 * (b - a) * gl.weights[q]);
        }
    }

    ErrorNorms out;
    {
        const Tensor un = evaluate_on_grid(sol, times, coords);
        const Tensor ue = exact_on_grid(c, spec, times, coords);
        std::vector<int> idx(d + 1, 0);
        const int n = static_cast<int>(gl.size());
        double sum = 0.0;
        for (std::size_t lin = 0; lin < un.size(); ++lin) {
            double w = wt[idx[0]];
            for (int i = 0; i < d; ++i)
                w *= wx[i][idx[i + 1]];
            const double e = un[lin] - ue[lin];
            sum += w * e * e;
            for (int k = d; k >= 0; --k) {
                if (++idx[k] < n)
                    break;
                idx[k] = 0;
            }
        }
        out.l2 = std::sqrt(sum);
    }

    const int np = opt.linf_points > 0 ? opt.linf_points : (d <= 3 ? 41 : 17);
    const std::vector<double> tg = linspace(0.0, spec.T, np);
    std::vector<std::vector<double>> xg(d);
    for (int i = 0; i < d; ++i)
        xg[i] = linspace(spec.intervals[i].first, spec.intervals[i].second, np);
    const Tensor un = evaluate_on_grid(sol, tg, xg);
    const Tensor ue = exact_on_grid(c, spec, tg, xg);
    for (std::size_t lin = 0; lin < un.size(); ++lin)
        out.linf = std::max(out.linf, std::abs(un[lin] - ue[lin]));
    return out;
}

SpectralSolution solve_manufactured(const ProblemSpec& spec, const ManufacturedCase& c, const OrderTuple& orders,
                                    const LoadQuadrature& load, TemporalSolver mode)
{
    spec.validate();
    c.validate(spec);
    const AssembledSystem sys = assemble(spec, orders.N, orders.M, force_separable(c, spec), load);
    return fast_solve(sys, mode);
}

std::vector<ConvergenceRecord> convergence_study(const StudyConfig& config)
{
    std::vector<ConvergenceRecord> out;
    for (const OrderTuple& rung : config.ladder) {
        ConvergenceRecord rec;
        rec.case_id = config.mcase.id;
        rec.spec = config.spec;
        rec.N = rung.N;
        rec.M = rung.M;
        try {
            const auto t0 = std::chrono::steady_clock::now();
            const SpectralSolution sol = solve_manufactured(config.spec, config.mcase, rung, config.load, config.temporal);
            const auto t1 = std::chrono::steady_clock::now();
            rec.seconds = std::chrono::duration<double>(t1 - t0).count();
            const ErrorNorms e = error_norms(sol, config.mcase, config.norms);
            rec.l2 = e.l2;
            rec.linf = e.linf;
        } catch (const std::exception& e) {
            rec.ok = false;
            rec.error = e.what();
            rec.l2 = rec.linf = std::numeric_limits<double>::quiet_NaN();
        }
        out.push_back(std::move(rec));
    }
    return out;
}

} // namespace fpde
