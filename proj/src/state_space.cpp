#include "momnoise/state_space.hpp"

namespace momnoise {

StateSpace build_system_matrices(const AlgoParams& params, const QuadraticProblem& problem) {
    params.validate();
    problem.validate();
    const int n = problem.spectrum.n();
    const auto& eigs = problem.spectrum.eigenvalues();

    StateSpace ss;
    ss.A = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    ss.B = Eigen::MatrixXd::Zero(2 * n, n);
    ss.C = Eigen::MatrixXd::Zero(n, 2 * n);

    const double sw = params.sigma_w();
    for (int i = 0; i < n; ++i) {
        const double al = params.alpha * eigs[static_cast<size_t>(i)];
        ss.A(i, n + i) = 1.0;
        ss.A(n + i, i) = -params.beta + params.gamma * al;
        ss.A(n + i, n + i) = (1.0 + params.beta) - (1.0 + params.gamma) * al;
        ss.B(n + i, i) = sw;
        ss.C(i, i) = 1.0;
    }
    return ss;
}

}  // namespace momnoise
