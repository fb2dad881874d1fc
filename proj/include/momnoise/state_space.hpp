#pragma once

#include <Eigen/Dense>

#include "momnoise/model.hpp"

namespace momnoise {

/// LTI realization psi^{t+1} = A psi^t + B w^t, z^t = C psi^t of the
/// two-step momentum update on a quadratic, with state
/// psi^t = [x^t - x*; x^{t+1} - x*].
struct StateSpace {
    Eigen::MatrixXd A;  ///< 2n x 2n
    Eigen::MatrixXd B;  ///< 2n x n, carries sigma_w
    Eigen::MatrixXd C;  ///< n x 2n, selects x^t - x*
};

/// Block form
///   A = [ 0                     I                        ]
///       [ -beta I + gamma a Q   (1+beta) I - (1+gamma) a Q ]
/// with Q diagonal in the eigenbasis. The spectrum of A is the union of the
/// eigenvalues of the 2x2 modal blocks.
StateSpace build_system_matrices(const AlgoParams& params, const QuadraticProblem& problem);

}  // namespace momnoise
