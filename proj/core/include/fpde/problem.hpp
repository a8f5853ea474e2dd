#pragma once

#include <utility>
#include <vector>

namespace fpde {

// Space-time fractional advection-dispersion-reaction problem on
// (0, T] x prod_i (a_i, b_i) with homogeneous initial and boundary data.
// Orders are stored as the full derivative orders 2tau, 2mu_i, 2nu_i.
struct ProblemSpec {
    int dim = 1;
    double T = 2.0;
    double two_tau = 0.5;
    std::vector<double> two_mu{0.5};
    std::vector<double> two_nu{1.5};
    std::vector<double> c_l{1.0};
    std::vector<double> c_r{1.0};
    std::vector<double> kappa_l{1.0};
    std::vector<double> kappa_r{1.0};
    double gamma = 1.0;
    std::vector<std::pair<double, double>> intervals{{-1.0, 1.0}};

    double tau() const { return 0.5 * two_tau; }
    double mu(int i) const { return 0.5 * two_mu.at(i); }
    double nu(int i) const { return 0.5 * two_nu.at(i); }
    double width(int i) const { return intervals.at(i).second - intervals.at(i).first; }

    // Throws DomainError naming the offending field.
    void validate() const;

    // Same scalar settings in every dimension.
    static ProblemSpec uniform(int dim, double two_tau, double two_mu, double two_nu, double c_l = 1.0,
                               double c_r = 1.0, double kappa_l = 1.0, double kappa_r = 1.0, double gamma = 1.0,
                               double T = 2.0, double a = -1.0, double b = 1.0);
};

} // namespace fpde
