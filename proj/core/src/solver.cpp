#include "fpde/solver.hpp"

#include "fpde/basis.hpp"
#include "fpde/error.hpp"
#include "lu_guard.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <string>

namespace fpde {

namespace {

using cplx = std::complex<double>;

Eigen::MatrixXd kron(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B)
{
    Eigen::MatrixXd K(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return K;
}

void check_system(const AssembledSystem& sys)
{
    const int d = sys.spec.dim;
    if (static_cast<int>(sys.M.size()) != d || static_cast<int>(sys.mass.size()) != d
        || static_cast<int>(sys.S_tot.size()) != d)
        throw DomainError("assembled system is inconsistent with its dimension");
    if (sys.F.shape() != sys.shape())
        throw DomainError("load tensor shape does not match the orders");
}

// Bilinear e^T B e for every column.
Eigen::VectorXcd pencil_norms(const Eigen::MatrixXd& B, const Eigen::MatrixXcd& E)
{
    const Eigen::MatrixXcd BE = B.cast<cplx>() * E;
    Eigen::VectorXcd out(E.cols());
    for (Eigen::Index j = 0; j < E.cols(); ++j)
        out[j] = E.col(j).transpose() * BE.col(j);
    return out;
}

std::string tuple_string(const std::vector<int>& idx)
{
    std::ostringstream os;
    os << "(";
    for (std::size_t k = 0; k < idx.size(); ++k)
        os << (k ? ", " : "") << idx[k] + 1;
    os << ")";
    return os.str();
}

void check_point(const ProblemSpec& spec, double t, std::span<const double> x)
{
    if (!(t >= 0.0 && t <= spec.T))
        throw DomainError("t = " + std::to_string(t) + " outside [0, T]");
    if (static_cast<int>(x.size()) != spec.dim)
        throw DomainError("point has " + std::to_string(x.size()) + " coordinates, expected "
                          + std::to_string(spec.dim));
    for (int i = 0; i < spec.dim; ++i) {
        const auto [a, b] = spec.intervals[i];
        if (!(x[i] >= a && x[i] <= b))
            throw DomainError("x_" + std::to_string(i + 1) + " = " + std::to_string(x[i]) + " outside ["
                              + std::to_string(a) + ", " + std::to_string(b) + "]");
    }
}

} // namespace

EigenBases decompose(const AssembledSystem& sys, TemporalSolver mode)
{
    check_system(sys);
    EigenBases b;
    if (mode == TemporalSolver::eigen)
        b.temporal = temporal_eigen(sys.M_tau, sys.S_tau);
    for (int i = 0; i < sys.spec.dim; ++i)
        b.spatial.push_back(spatial_eigen(sys.S_tot[i], sys.mass[i]));
    return b;
}

SpectralSolution fast_solve(const AssembledSystem& sys, const EigenBases& bases, TemporalSolver mode)
{
    check_system(sys);
    const int d = sys.spec.dim;
    const int N = sys.N;
    if (static_cast<int>(bases.spatial.size()) != d)
        throw DomainError("eigen bases do not match the system");
    for (int i = 0; i < d; ++i)
        if (bases.spatial[i].size() != sys.M[i])
            throw DomainError("spatial eigen basis " + std::to_string(i + 1) + " has the wrong size");
    if (mode == TemporalSolver::eigen && (!bases.temporal || bases.temporal->size() != N))
        throw DomainError("temporal eigen basis missing or of the wrong size");

    const double gamma = sys.spec.gamma;

    // Per spatial multi-index k (row-major over m_1..m_d): sum of eigenvalues and
    // product of pencil norms e^T M e.
    std::vector<Eigen::VectorXcd> dj;
    for (int i = 0; i < d; ++i)
        dj.push_back(pencil_norms(sys.mass[i], bases.spatial[i].vectors));
    const std::size_t K = Tensor::count(sys.M);
    std::vector<cplx> theta(K), norm(K);
    {
        std::vector<int> m(d, 0);
        for (std::size_t k = 0; k < K; ++k) {
            cplx th = 0.0, nr = 1.0;
            for (int i = 0; i < d; ++i) {
                th += bases.spatial[i].values[m[i]];
                nr *= dj[i][m[i]];
            }
            if (nr == 0.0)
                throw SpectrumError("spatial eigenvector pencil norm vanishes");
            theta[k] = th;
            norm[k] = nr;
            for (int i = d - 1; i >= 0; --i) {
                if (++m[i] < sys.M[i])
                    break;
                m[i] = 0;
            }
        }
    }
    auto multi_index = [&](int n, std::size_t k) {
        std::vector<int> idx(d + 1);
        idx[0] = n;
        for (int i = d - 1; i >= 0; --i) {
            idx[i + 1] = static_cast<int>(k % sys.M[i]);
            k /= sys.M[i];
        }
        return idx;
    };

    ComplexTensor G(sys.shape());
    for (std::size_t k = 0; k < G.size(); ++k)
        G[k] = sys.F[k];
    for (int i = 0; i < d; ++i)
        G = G.mode_product(i + 1, bases.spatial[i].vectors.transpose());

    if (mode == TemporalSolver::eigen) {
        const Eigen::MatrixXcd& Et = bases.temporal->vectors;
        const Eigen::VectorXcd& lt = bases.temporal->values;
        const Eigen::VectorXcd dt = pencil_norms(sys.S_tau, Et);
        G = G.mode_product(0, Et.transpose());
        for (int n = 0; n < N; ++n)
            for (std::size_t k = 0; k < K; ++k) {
                const cplx lam = 1.0 + gamma * lt[n] + lt[n] * theta[k];
                if (std::abs(lam) <= 1e-12 * (1.0 + std::abs(gamma * lt[n])))
                    throw ResonanceError("Lambda vanishes at index tuple " + tuple_string(multi_index(n, k)));
                if (dt[n] == 0.0)
                    throw SpectrumError("temporal eigenvector pencil norm vanishes");
                G[n * K + k] /= dt[n] * norm[k] * lam;
            }
        G = G.mode_product(0, Et);
    } else {
        // S_tau + a M_tau = S_tau Q (I + a T) Q^*, with S_tau^{-1} M_tau = Q T Q^*.
        const Eigen::VectorXd sinv = sys.S_tau.diagonal().cwiseInverse();
        const Eigen::MatrixXd C = sinv.asDiagonal() * sys.M_tau;
        Eigen::ComplexSchur<Eigen::MatrixXcd> schur(C.cast<cplx>());
        if (schur.info() != Eigen::Success)
            throw ConvergenceError("complex Schur iteration did not converge");
        const Eigen::MatrixXcd& Q = schur.matrixU();
        const Eigen::MatrixXcd& T = schur.matrixT();

        using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
        Eigen::Map<RowMat> H(G.data().data(), N, static_cast<Eigen::Index>(K));
        RowMat R = Q.adjoint() * (sinv.cast<cplx>().asDiagonal() * H);
        for (std::size_t k = 0; k < K; ++k) {
            const cplx a = gamma + theta[k];
            for (int n = N - 1; n >= 0; --n) {
                cplx acc = R(n, k);
                for (int j = n + 1; j < N; ++j)
                    acc -= a * T(n, j) * R(j, k);
                const cplx diag = 1.0 + a * T(n, n);
                if (std::abs(diag) <= 1e-12 * (1.0 + std::abs(gamma * T(n, n))))
                    throw ResonanceError("Lambda vanishes at index tuple " + tuple_string(multi_index(n, k)));
                R(n, k) = acc / diag;
            }
            R.col(k) /= norm[k];
        }
        H = Q * R;
    }

    for (int i = 0; i < d; ++i)
        G = G.mode_product(i + 1, bases.spatial[i].vectors);

    SpectralSolution sol;
    sol.spec = sys.spec;
    sol.N = N;
    sol.M = sys.M;
    sol.U_hat = Tensor(sys.shape());
    double im = 0.0;
    for (std::size_t k = 0; k < G.size(); ++k) {
        sol.U_hat[k] = G[k].real();
        im = std::max(im, std::abs(G[k].imag()));
    }
    const double big = sol.U_hat.max_abs();
    sol.imag_residue = big > 0.0 ? im / big : im;
    return sol;
}

SpectralSolution fast_solve(const AssembledSystem& sys, TemporalSolver mode)
{
    return fast_solve(sys, decompose(sys, mode), mode);
}

Eigen::MatrixXd kronecker_operator(const AssembledSystem& sys)
{
    check_system(sys);
    const std::size_t n = Tensor::count(sys.shape());
    if (n > kDirectSolveLimit)
        throw SizeError("direct Kronecker operator has " + std::to_string(n) + " unknowns, limit "
                        + std::to_string(kDirectSolveLimit));
    const int d = sys.spec.dim;
    auto chain = [&](const Eigen::MatrixXd& first, int special, const Eigen::MatrixXd* S) {
        Eigen::MatrixXd K = first;
        for (int i = 0; i < d; ++i)
            K = kron(K, i == special ? *S : sys.mass[i]);
        return K;
    };
    Eigen::MatrixXd A = chain(sys.S_tau, -1, nullptr);
    for (int i = 0; i < d; ++i)
        A += chain(sys.M_tau, i, &sys.S_tot[i]);
    if (sys.spec.gamma != 0.0)
        A += sys.spec.gamma * chain(sys.M_tau, -1, nullptr);
    return A;
}

SpectralSolution direct_solve_oracle(const AssembledSystem& sys)
{
    const Eigen::MatrixXd A = kronecker_operator(sys);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    const double rc = detail::lu_rcond(lu);
    if (!(rc > 1e-15))
        throw SingularError("Kronecker operator is singular (rcond " + std::to_string(rc) + ")");
    const Eigen::Map<const Eigen::VectorXd> f(sys.F.data().data(), static_cast<Eigen::Index>(sys.F.size()));
    const Eigen::VectorXd u = lu.solve(f);

    SpectralSolution sol;
    sol.spec = sys.spec;
    sol.N = sys.N;
    sol.M = sys.M;
    sol.U_hat = Tensor(sys.shape());
    for (std::size_t k = 0; k < sol.U_hat.size(); ++k)
        sol.U_hat[k] = u[static_cast<Eigen::Index>(k)];
    return sol;
}

Tensor evaluate_on_grid(const SpectralSolution& sol, std::span<const double> times,
                        const std::vector<std::vector<double>>& coords)
{
    const ProblemSpec& spec = sol.spec;
    if (static_cast<int>(coords.size()) != spec.dim)
        throw DomainError("grid has " + std::to_string(coords.size()) + " coordinate axes, expected "
                          + std::to_string(spec.dim));
    if (times.empty())
        throw DomainError("grid needs at least one time");
    const TemporalBasisSpec tb(spec.tau(), spec.T, sol.N);
    std::vector<double> etas;
    for (double t : times) {
        if (!(t >= 0.0 && t <= spec.T))
            throw DomainError("t = " + std::to_string(t) + " outside [0, T]");
        etas.push_back(std::clamp(tb.eta(t), -1.0, 1.0));
    }
    Tensor out = sol.U_hat.mode_product(0, temporal_basis_table(tb, etas));
    for (int i = 0; i < spec.dim; ++i) {
        const auto [a, b] = spec.intervals[i];
        const SpatialBasisSpec sb(a, b, sol.M[i]);
        if (coords[i].empty())
            throw DomainError("grid axis " + std::to_string(i + 1) + " is empty");
        std::vector<double> xis;
        for (double x : coords[i]) {
            if (!(x >= a && x <= b))
                throw DomainError("x_" + std::to_string(i + 1) + " = " + std::to_string(x) + " outside domain");
            xis.push_back(std::clamp(sb.xi(x), -1.0, 1.0));
        }
        out = out.mode_product(i + 1, spatial_basis_table(sb, xis));
    }
    return out;
}

double evaluate_solution(const SpectralSolution& sol, double t, std::span<const double> x)
{
    check_point(sol.spec, t, x);
    std::vector<std::vector<double>> coords;
    for (double v : x)
        coords.push_back({v});
    const double times[1] = {t};
    return evaluate_on_grid(sol, times, coords)[0];
}

} // namespace fpde
