#pragma once

#include <Eigen/Dense>

namespace fpde {

// Solutions of A v = lambda B v. Values may be complex: the temporal pencil
// (M_tau, S_tau) and one-sided spatial pencils have conjugate pairs.
// Columns of `vectors` have unit 2-norm, first significant entry real positive,
// and are mutually B-orthogonal under the bilinear form u^T B v.
struct GeneralizedEigenBasis {
    Eigen::VectorXcd values;
    Eigen::MatrixXcd vectors;
    double residual = 0.0;  // max_j |A v - lambda B v| / (|A|_F |v|)
    double condition = 0.0; // 2-norm condition number of `vectors`

    int size() const { return static_cast<int>(values.size()); }
    // max |Im lambda| / max |lambda|
    double imaginary_ratio() const;
    bool is_real(double tol = 1e-8) const { return imaginary_ratio() <= tol; }
};

// Generic dense path: B^{-1} A by pivoted LU, then Hessenberg + shifted QR.
GeneralizedEigenBasis generalized_eigen(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

// S_tot e = lambda M e.
GeneralizedEigenBasis spatial_eigen(const Eigen::MatrixXd& S_tot, const Eigen::MatrixXd& M);

// M_tau e = lambda S_tau e, S_tau diagonal.
GeneralizedEigenBasis temporal_eigen(const Eigen::MatrixXd& M_tau, const Eigen::MatrixXd& S_tau);

double eigen_residual(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const Eigen::VectorXcd& values,
                      const Eigen::MatrixXcd& vectors);

} // namespace fpde
