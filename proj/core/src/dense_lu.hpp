#pragma once

#include <optional>

#include <Eigen/Dense>

namespace pstflow::detail {

// Single seam for the real linear solves of the NR and DC solvers. Dense
// full-pivot LU suits desk-scale cases; a sparse backend would replace this
// function only. Returns nullopt when the matrix is rank deficient.
inline std::optional<Eigen::VectorXd> solve_dense(const Eigen::MatrixXd& a,
                                                  const Eigen::VectorXd& rhs) {
    if (a.rows() == 0) {
        return Eigen::VectorXd(0);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible()) {
        return std::nullopt;
    }
    return Eigen::VectorXd(lu.solve(rhs));
}

}  // namespace pstflow::detail
