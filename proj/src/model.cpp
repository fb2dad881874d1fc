#include "momnoise/model.hpp"

#include <algorithm>
#include <cmath>

namespace momnoise {

Spectrum::Spectrum(std::vector<double> eigenvalues) : eigs_(std::move(eigenvalues)) {
    if (eigs_.empty())
        throw std::invalid_argument("Spectrum: eigenvalue list must be nonempty");
    for (double ev : eigs_) {
        if (!(ev > 0.0) || !std::isfinite(ev))
            throw std::invalid_argument("Spectrum: eigenvalues must be positive and finite");
    }
    std::sort(eigs_.begin(), eigs_.end());
}

Spectrum Spectrum::linear(double m, double L, int n) {
    if (!(m > 0.0) || !(L >= m))
        throw std::invalid_argument("Spectrum::linear: need 0 < m <= L");
    if (n < 1) throw std::invalid_argument("Spectrum::linear: need n >= 1");
    if (n == 1) {
        if (m != L) throw std::invalid_argument("Spectrum::linear: n = 1 requires m == L");
        return Spectrum({m});
    }
    std::vector<double> eigs(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        eigs[static_cast<size_t>(i)] = m + (L - m) * static_cast<double>(i) / (n - 1);
    eigs.front() = m;
    eigs.back() = L;
    return Spectrum(std::move(eigs));
}

Spectrum Spectrum::clustered_low(double m, double L, int n) {
    if (!(m > 0.0) || !(L >= m))
        throw std::invalid_argument("Spectrum::clustered_low: need 0 < m <= L");
    if (n < 2) throw std::invalid_argument("Spectrum::clustered_low: need n >= 2");
    std::vector<double> eigs(static_cast<size_t>(n), m);
    eigs.back() = L;
    return Spectrum(std::move(eigs));
}

void AlgoParams::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw std::invalid_argument("AlgoParams: alpha must be positive");
    if (!(sigma >= 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("AlgoParams: sigma must be nonnegative");
    if (!std::isfinite(beta) || !std::isfinite(gamma))
        throw std::invalid_argument("AlgoParams: beta/gamma must be finite");
}

double effective_noise_magnitude(const AlgoParams& params) {
    return params.sigma_w();
}

ModalPoint modal_coefficients(const AlgoParams& params, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("modal_coefficients: lambda must be positive");
    const double al = params.alpha * lambda;
    return ModalPoint{
        (1.0 + params.gamma) * al - (1.0 + params.beta),
        params.beta - params.gamma * al,
        lambda,
    };
}

void QuadraticProblem::validate() const {
    if (linear_term && static_cast<int>(linear_term->size()) != spectrum.n())
        throw std::invalid_argument("QuadraticProblem: linear term dimension mismatch");
}

}  // namespace momnoise
