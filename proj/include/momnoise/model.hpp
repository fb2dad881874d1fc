#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace momnoise {

/// Thrown when an operation that requires stable dynamics is given
/// parameters for which the steady-state variance diverges.
class UnstableError : public std::runtime_error {
public:
    explicit UnstableError(const std::string& what) : std::runtime_error(what) {}
};

/// Where the additive white noise enters the two-step momentum update.
enum class NoiseModel {
    Iterate,   ///< noise added directly to the iterate, sigma_w = sigma
    Gradient,  ///< noise entering through the gradient, sigma_w = alpha * sigma
};

inline const char* to_string(NoiseModel m) {
    return m == NoiseModel::Iterate ? "iterate" : "gradient";
}

/// Hessian eigenvalues of a strongly convex quadratic, stored in ascending
/// order. Repeated eigenvalues are kept: each one contributes its own mode
/// to the noise amplification.
class Spectrum {
public:
    explicit Spectrum(std::vector<double> eigenvalues);

    /// n eigenvalues evenly spaced over [m, L], endpoints included.
    static Spectrum linear(double m, double L, int n);
    /// The two extreme eigenvalues only.
    static Spectrum endpoints(double m, double L) { return linear(m, L, 2); }
    /// n - 1 eigenvalues at m and one at L (the spectrum that maximizes J
    /// for the families studied here).
    static Spectrum clustered_low(double m, double L, int n);

    const std::vector<double>& eigenvalues() const { return eigs_; }
    double m() const { return eigs_.front(); }
    double L() const { return eigs_.back(); }
    int n() const { return static_cast<int>(eigs_.size()); }
    double kappa() const { return L() / m(); }

private:
    std::vector<double> eigs_;
};

/// Constant parameters (alpha, beta, gamma) of the two-step momentum update
///   x^{t+2} = x^{t+1} + beta (x^{t+1} - x^t)
///             - alpha grad f(x^{t+1} + gamma (x^{t+1} - x^t)) + sigma_w w^t
/// together with the noise model and base noise magnitude sigma.
struct AlgoParams {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    NoiseModel noise_model = NoiseModel::Iterate;
    double sigma = 1.0;

    void validate() const;

    /// Effective noise magnitude sigma_w for the configured model.
    double sigma_w() const {
        return noise_model == NoiseModel::Gradient ? alpha * sigma : sigma;
    }
};

double effective_noise_magnitude(const AlgoParams& params);

/// Coordinates (b, a) of one mode in the plane where the stability triangle
/// lives. The characteristic polynomial of the mode is z^2 + b z + a.
struct ModalPoint {
    double b = 0.0;
    double a = 0.0;
    std::optional<double> lambda{};  ///< originating eigenvalue, if any
};

/// Modal coefficients of eigenvalue lambda:
///   a(lambda) = beta - gamma * alpha * lambda
///   b(lambda) = (1 + gamma) * alpha * lambda - (1 + beta)
/// They satisfy the affine identity (1+gamma) a + gamma b = beta - gamma.
ModalPoint modal_coefficients(const AlgoParams& params, double lambda);

/// f(x) = 1/2 x^T Q x - q^T x with Q diagonalized by its spectrum.
/// With q = 0 the minimizer is the origin; the analysis only ever depends
/// on the spectrum.
struct QuadraticProblem {
    Spectrum spectrum;
    std::optional<std::vector<double>> linear_term{};  ///< q, defaults to zero

    void validate() const;
};

}  // namespace momnoise
