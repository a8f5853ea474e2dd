#include "fpde/eig.hpp"

#include "fpde/error.hpp"
#include "lu_guard.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace fpde {

namespace {

constexpr double kResidualTol = 1e-10;
constexpr double kConditionTol = 1e12;
constexpr double kClusterTol = 1e-8;

void check_pair(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B)
{
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows() || A.rows() == 0)
        throw DomainError("eigen pencil needs two square matrices of equal nonzero size");
    if (!A.allFinite() || !B.allFinite())
        throw DomainError("eigen pencil has non-finite entries");
}

void normalize_phase(Eigen::MatrixXcd& V)
{
    for (Eigen::Index j = 0; j < V.cols(); ++j) {
        V.col(j) /= V.col(j).norm();
        const double big = V.col(j).cwiseAbs().maxCoeff();
        for (Eigen::Index i = 0; i < V.rows(); ++i) {
            const double a = std::abs(V(i, j));
            if (a > 1e-8 * big) {
                V.col(j) *= std::conj(V(i, j)) / a;
                break;
            }
        }
    }
}

// Make eigenvectors of (near-)repeated eigenvalues B-orthogonal under u^T B v.
void orthogonalize_clusters(const Eigen::MatrixXd& B, const Eigen::VectorXcd& values, Eigen::MatrixXcd& V)
{
    const Eigen::Index n = values.size();
    Eigen::Index start = 0;
    while (start < n) {
        Eigen::Index end = start + 1;
        const double scale = std::max(1.0, std::abs(values[start]));
        while (end < n && std::abs(values[end] - values[start]) <= kClusterTol * scale)
            ++end;
        const Eigen::Index k = end - start;
        if (k > 1) {
            Eigen::MatrixXcd Vc = V.middleCols(start, k);
            const Eigen::MatrixXcd G = Vc.transpose() * B * Vc;
            Eigen::MatrixXcd X;
            if (G.imag().norm() <= 1e-14 * G.norm() && Vc.imag().norm() <= 1e-14 * Vc.norm()) {
                Eigen::MatrixXd Gr = G.real();
                Gr = 0.5 * (Gr + Gr.transpose()).eval();
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Gr);
                X = es.eigenvectors().cast<std::complex<double>>();
            } else {
                Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(G);
                X = es.eigenvectors();
            }
            V.middleCols(start, k) = Vc * X;
        }
        start = end;
    }
}

GeneralizedEigenBasis finish(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const Eigen::MatrixXd& C)
{
    Eigen::EigenSolver<Eigen::MatrixXd> es(C, true);
    if (es.info() != Eigen::Success)
        throw ConvergenceError("Hessenberg QR iteration did not converge");
    const Eigen::VectorXcd lam = es.eigenvalues();
    const Eigen::MatrixXcd vec = es.eigenvectors();
    const Eigen::Index n = lam.size();

    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) {
        if (lam[i].real() != lam[j].real())
            return lam[i].real() < lam[j].real();
        return lam[i].imag() < lam[j].imag();
    });

    GeneralizedEigenBasis out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        out.values[j] = lam[order[j]];
        out.vectors.col(j) = vec.col(order[j]);
    }
    orthogonalize_clusters(B, out.values, out.vectors);
    normalize_phase(out.vectors);

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(out.vectors);
    const auto& sv = svd.singularValues();
    out.condition = sv[sv.size() - 1] > 0.0 ? sv[0] / sv[sv.size() - 1] : INFINITY;
    if (!(out.condition < kConditionTol))
        throw SpectrumError("eigenvector matrix is numerically singular (condition " + std::to_string(out.condition)
                            + "); pencil is defective");

    out.residual = eigen_residual(A, B, out.values, out.vectors);
    if (!(out.residual <= kResidualTol))
        throw SpectrumError("generalized eigen residual " + std::to_string(out.residual) + " exceeds 1e-10");
    return out;
}

} // namespace

double GeneralizedEigenBasis::imaginary_ratio() const
{
    if (values.size() == 0)
        return 0.0;
    const double big = values.cwiseAbs().maxCoeff();
    if (big == 0.0)
        return 0.0;
    return values.imag().cwiseAbs().maxCoeff() / big;
}

double eigen_residual(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const Eigen::VectorXcd& values,
                      const Eigen::MatrixXcd& vectors)
{
    const double an = A.norm() > 0.0 ? A.norm() : 1.0;
    const Eigen::MatrixXcd Ac = A.cast<std::complex<double>>();
    const Eigen::MatrixXcd Bc = B.cast<std::complex<double>>();
    double worst = 0.0;
    for (Eigen::Index j = 0; j < values.size(); ++j) {
        const Eigen::VectorXcd v = vectors.col(j);
        const double r = (Ac * v - values[j] * (Bc * v)).norm() / (an * v.norm());
        worst = std::max(worst, r);
    }
    return worst;
}

GeneralizedEigenBasis generalized_eigen(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B)
{
    check_pair(A, B);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    const double rc = detail::lu_rcond(lu);
    if (!(rc > 1e-14))
        throw SingularError("right-hand matrix of the pencil is singular (rcond " + std::to_string(rc) + ")");
    return finish(A, B, lu.solve(A));
}

GeneralizedEigenBasis spatial_eigen(const Eigen::MatrixXd& S_tot, const Eigen::MatrixXd& M)
{
    return generalized_eigen(S_tot, M);
}

GeneralizedEigenBasis temporal_eigen(const Eigen::MatrixXd& M_tau, const Eigen::MatrixXd& S_tau)
{
    check_pair(M_tau, S_tau);
    const Eigen::Index n = S_tau.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (S_tau(i, i) == 0.0)
            throw SingularError("temporal stiffness has a zero diagonal entry at " + std::to_string(i + 1));
        for (Eigen::Index j = 0; j < n; ++j)
            if (i != j && S_tau(i, j) != 0.0)
                throw DomainError("temporal stiffness must be diagonal");
    }
    const Eigen::MatrixXd C = S_tau.diagonal().cwiseInverse().asDiagonal() * M_tau;
    return finish(M_tau, S_tau, C);
}

} // namespace fpde
