#pragma once

#include "fpde/problem.hpp"
#include "fpde/tensor.hpp"

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <vector>

namespace fpde {

enum class Side { left, right };

// Diagonal temporal stiffness S_tau (N x N), rows = test index r, columns = trial index n.
Eigen::MatrixXd temporal_stiffness(int N, double tau, double T);

// Temporal mass M_tau by a Gauss-Jacobi rule with weight exponents (tau, tau).
// q = 0 picks N + 1 points.
Eigen::MatrixXd temporal_mass(int N, double tau, double T, int q = 0);

// Pentadiagonal spatial mass on [a, b] from Legendre orthogonality.
Eigen::MatrixXd spatial_mass(int M, double a, double b);

// Spatial stiffness of half-order sigma in (0,1): the trial function carries the
// `side` derivative and the test function the opposite one.
// q = 0 picks M + 2 Gauss-Jacobi points.
Eigen::MatrixXd spatial_stiffness(int M, double sigma, double a, double b, Side side = Side::left, int q = 0);

// c_l S_mu,l + c_r S_mu,r - kappa_l S_nu,l - kappa_r S_nu,r for dimension i.
Eigen::MatrixXd total_spatial_stiffness(const ProblemSpec& spec, int i, int M);

struct LoadQuadrature {
    int temporal_points = 0; // 0 -> N + 20
    int spatial_points = 0;  // 0 -> M + 20 (per panel when graded)
    int grading_levels = 0;  // 0 -> plain Gauss-Legendre in space
    double grading_ratio = 0.2;
};

using SourceFunction = std::function<double(double t, std::span<const double> x)>;

// Sum of products f(t, x) = sum_j g_j(t) prod_i h_ji(x_i).
struct SeparableTerm {
    std::function<double(double)> temporal;
    std::vector<std::function<double(double)>> spatial;
};
using SeparableSource = std::vector<SeparableTerm>;

// F_{r,k_1..k_d} = int f Psi_r prod Phi_k, shape N x M_1 x ... x M_d.
Tensor load_tensor(const ProblemSpec& spec, const SourceFunction& f, int N, const std::vector<int>& M,
                   const LoadQuadrature& quad = {});
Tensor load_tensor(const ProblemSpec& spec, const SeparableSource& f, int N, const std::vector<int>& M,
                   const LoadQuadrature& quad = {});

struct AssembledSystem {
    ProblemSpec spec;
    int N = 0;
    std::vector<int> M;
    Eigen::MatrixXd S_tau;
    Eigen::MatrixXd M_tau;
    std::vector<Eigen::MatrixXd> mass;
    std::vector<Eigen::MatrixXd> S_tot;
    Tensor F;

    std::vector<int> shape() const;
};

// All matrices; F is left zero.
AssembledSystem assemble_operators(const ProblemSpec& spec, int N, const std::vector<int>& M);

AssembledSystem assemble(const ProblemSpec& spec, int N, const std::vector<int>& M, const SourceFunction& f,
                         const LoadQuadrature& quad = {});
AssembledSystem assemble(const ProblemSpec& spec, int N, const std::vector<int>& M, const SeparableSource& f,
                         const LoadQuadrature& quad = {});

} // namespace fpde
