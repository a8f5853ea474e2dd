#pragma once

#include <Eigen/Dense>

#include <algorithm>

namespace fpde::detail {

// Eigen's rcond estimate can miss an exactly zero pivot; take the pivot ratio too.
inline double lu_rcond(const Eigen::PartialPivLU<Eigen::MatrixXd>& lu)
{
    const Eigen::VectorXd piv = lu.matrixLU().diagonal().cwiseAbs();
    const double ratio = piv.maxCoeff() > 0.0 ? piv.minCoeff() / piv.maxCoeff() : 0.0;
    return std::min(lu.rcond(), ratio);
}

} // namespace fpde::detail
