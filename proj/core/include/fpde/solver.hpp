#pragma once

#include "fpde/assembly.hpp"
#include "fpde/eig.hpp"
#include "fpde/problem.hpp"
#include "fpde/tensor.hpp"

#include <optional>
#include <span>
#include <vector>

namespace fpde {

struct SpectralSolution {
    ProblemSpec spec;
    int N = 0;
    std::vector<int> M;
    Tensor U_hat; // N x M_1 x ... x M_d
    double imag_residue = 0.0; // max |Im U| / max |U| left by complex arithmetic
};

// How the temporal direction is inverted once the spatial pencils are diagonalized.
//   schur: unitary Schur form of S_tau^{-1} M_tau and one triangular solve per spatial
//          eigen-tuple; stable for large N.
//   eigen: closed-form expansion in the temporal eigenvectors as well; its accuracy
//          degrades with the conditioning of the temporal eigenvector matrix
//          (about 1e-5 relative at N = 17).
enum class TemporalSolver { schur, eigen };

struct EigenBases {
    std::optional<GeneralizedEigenBasis> temporal; // present for TemporalSolver::eigen
    std::vector<GeneralizedEigenBasis> spatial;
};

EigenBases decompose(const AssembledSystem& sys, TemporalSolver mode = TemporalSolver::schur);

SpectralSolution fast_solve(const AssembledSystem& sys, const EigenBases& bases,
                            TemporalSolver mode = TemporalSolver::schur);
SpectralSolution fast_solve(const AssembledSystem& sys, TemporalSolver mode = TemporalSolver::schur);

// Dense Kronecker operator, row-major vectorization over (n, m_1, ..., m_d).
Eigen::MatrixXd kronecker_operator(const AssembledSystem& sys);

// Dense reference solve, at most 20000 unknowns.
SpectralSolution direct_solve_oracle(const AssembledSystem& sys);
constexpr std::size_t kDirectSolveLimit = 20000;

// u_N(t, x) for (t, x) in [0, T] x prod [a_i, b_i].
double evaluate_solution(const SpectralSolution& sol, double t, std::span<const double> x);

// u_N on the tensor grid times x coords[0] x ... x coords[d-1].
Tensor evaluate_on_grid(const SpectralSolution& sol, std::span<const double> times,
                        const std::vector<std::vector<double>>& coords);

} // namespace fpde
