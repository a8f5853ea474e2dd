#include "fpde/problem.hpp"

#include "fpde/error.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace fpde {

namespace {

std::string fmt(double v)
{
    std::ostringstream os;
    os << v;
    return os.str();
}

void check_size(const std::vector<double>& v, int dim, const char* name)
{
    if (static_cast<int>(v.size()) != dim)
        throw DomainError(std::string(name) + " has " + std::to_string(v.size()) + " entries, expected "
                          + std::to_string(dim));
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!std::isfinite(v[i]))
            throw DomainError(std::string(name) + "_" + std::to_string(i + 1) + " is not finite");
}

} // namespace

void ProblemSpec::validate() const
{
    if (dim < 1)
        throw DomainError("dim = " + std::to_string(dim) + " must be >= 1");
    if (!(T > 0.0) || !std::isfinite(T))
        throw DomainError("T = " + fmt(T) + " must be positive");
    if (!(two_tau > 0.0 && two_tau < 2.0) || two_tau == 1.0)
        throw DomainError("2*tau = " + fmt(two_tau) + " outside (0,1) U (1,2)");
    check_size(two_mu, dim, "2*mu");
    check_size(two_nu, dim, "2*nu");
    check_size(c_l, dim, "c_l");
    check_size(c_r, dim, "c_r");
    check_size(kappa_l, dim, "kappa_l");
    check_size(kappa_r, dim, "kappa_r");
    if (static_cast<int>(intervals.size()) != dim)
        throw DomainError("intervals has " + std::to_string(intervals.size()) + " entries, expected "
                          + std::to_string(dim));
    if (!std::isfinite(gamma))
        throw DomainError("gamma is not finite");
    for (int i = 0; i < dim; ++i) {
        const std::string k = std::to_string(i + 1);
        if (!(two_mu[i] > 0.0 && two_mu[i] < 1.0))
            throw DomainError("2*mu_" + k + " = " + fmt(two_mu[i]) + " outside (0,1)");
        if (!(two_nu[i] > 1.0 && two_nu[i] < 2.0))
            throw DomainError("2*nu_" + k + " = " + fmt(two_nu[i]) + " outside (1,2)");
        if (!(kappa_l[i] + kappa_r[i] > 0.0))
            throw DomainError("kappa_l_" + k + " + kappa_r_" + k + " = " + fmt(kappa_l[i] + kappa_r[i])
                              + " must be positive");
        const auto [a, b] = intervals[i];
        if (!std::isfinite(a) || !std::isfinite(b) || !(b > a))
            throw DomainError("interval_" + k + " = (" + fmt(a) + ", " + fmt(b) + ") is empty");
    }
}

ProblemSpec ProblemSpec::uniform(int dim, double two_tau, double two_mu, double two_nu, double c_l, double c_r,
                                 double kappa_l, double kappa_r, double gamma, double T, double a, double b)
{
    ProblemSpec p;
    p.dim = dim;
    p.T = T;
    p.two_tau = two_tau;
    p.two_mu.assign(dim, two_mu);
    p.two_nu.assign(dim, two_nu);
    p.c_l.assign(dim, c_l);
    p.c_r.assign(dim, c_r);
    p.kappa_l.assign(dim, kappa_l);
    p.kappa_r.assign(dim, kappa_r);
    p.gamma = gamma;
    p.intervals.assign(dim, {a, b});
    return p;
}

} // namespace fpde
