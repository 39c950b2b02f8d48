#include "pwlab/mixture.hpp"

#include <cmath>
#include <stdexcept>

#include "pwlab/quadrature.hpp"
#include "pwlab/rng.hpp"

namespace pwlab {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;

void validate(const MixtureParams& p) {
    if (!(p.sigma > 0.0)) throw std::invalid_argument("mixture: sigma must be positive");
    if (!std::isfinite(p.mu)) throw std::invalid_argument("mixture: mu must be finite");
}

double draw_mixing(const MixingLaw& law, Rng& rng) {
    return std::visit(
        [&rng]<typename L>(const L& l) -> double {
            if constexpr (std::is_same_v<L, ExponentialLaw>) {
                return rng.exponential(l.rate);
            } else {
                return rng.gamma(l.shape, l.rate);
            }
        },
        law);
}

}  // namespace

double mixing_density(const MixingLaw& law, double s) {
    if (s < 0.0) return 0.0;
    return std::visit(
        [s]<typename L>(const L& l) -> double {
            if constexpr (std::is_same_v<L, ExponentialLaw>) {
                return l.rate * std::exp(-l.rate * s);
            } else {
                if (s == 0.0) return l.shape < 1.0   ? std::numeric_limits<double>::infinity()
                              : l.shape == 1.0 ? l.rate
                                               : 0.0;
                return std::exp(l.shape * std::log(l.rate) + (l.shape - 1.0) * std::log(s) -
                                l.rate * s - std::lgamma(l.shape));
            }
        },
        law);
}

std::string mixing_label(const MixingLaw& law) {
    return std::visit(
        []<typename L>(const L& l) -> std::string {
            if constexpr (std::is_same_v<L, ExponentialLaw>) {
                return "exp:" + std::to_string(l.rate);
            } else {
                return "gamma:" + std::to_string(l.shape) + ":" + std::to_string(l.rate);
            }
        },
        law);
}

Sample sample_mixture(const MixtureParams& params, const MixingLaw& mixing, int n,
                      std::uint64_t seed) {
    validate(params);
    if (n < 1) throw std::invalid_argument("sample_mixture: n must be >= 1");
    Rng rng(seed);
    Sample out;
    out.values.reserve(n);
    out.seed = seed;
    out.params_used = params;
    out.mixing_label = mixing_label(mixing);
    for (int j = 0; j < n; ++j) {
        const double s = draw_mixing(mixing, rng);
        const double r = std::sqrt(-2.0 * std::log(rng.uniform_pos()));
        const double theta = 6.283185307179586476925286766559 * rng.uniform();
        const double z = r * std::cos(theta);  // sine branch discarded on purpose
        out.values.push_back(params.sigma * std::sqrt(s) * z + params.mu * s);
    }
    return out;
}

std::complex<double> psi(const MixtureParams& params, double u) {
    validate(params);
    return {0.5 * u * u * params.sigma * params.sigma, -u * params.mu};
}

std::complex<double> xi(const MixtureParams& params, std::complex<double> z) {
    validate(params);
    if (params.sigma != 1.0)
        throw std::invalid_argument("xi: defined for the sigma = 1 reduction; rescale first");
    const std::complex<double> radicand = 2.0 * z - params.mu * params.mu;
    if (radicand.imag() == 0.0 && radicand.real() <= 0.0)
        throw std::domain_error("xi: 2z - mu^2 is a non-positive real; square root branch ambiguous");
    return std::sqrt(radicand) + std::complex<double>{0.0, params.mu};
}

std::complex<double> emp_fourier_deriv(const Sample& sample, int k, double u) {
    if (k < 0) throw std::invalid_argument("emp_fourier_deriv: k must be >= 0");
    if (sample.values.empty()) throw std::invalid_argument("emp_fourier_deriv: empty sample");
    // i^k
    static constexpr std::complex<double> i_pow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const std::complex<double> ik = i_pow[k % 4];
    std::complex<double> acc{0.0, 0.0};
    for (const double v : sample.values) {
        const double xk = k == 0 ? 1.0 : std::pow(v, k);
        acc += xk * std::complex<double>{std::cos(u * v), std::sin(u * v)};
    }
    return ik * acc / static_cast<double>(sample.values.size());
}

double mixture_density(const MixtureParams& params,
                       const std::function<double(double)>& mixing_density, double x) {
    validate(params);
    // q(x) = int (1/(sigma sqrt(s))) phi((x - s mu)/(sigma sqrt(s))) p(s) ds
    //      = (2/sigma) int phi((x - mu v^2)/(sigma v)) p(v^2) dv      (s = v^2)
    auto integrand = [&](double v) -> double {
        if (v <= 0.0) return 0.0;
        const double arg = (x - params.mu * v * v) / (params.sigma * v);
        const double expo = -0.5 * arg * arg;
        if (expo < -745.0) return 0.0;
        return (2.0 / params.sigma) * kInvSqrt2Pi * std::exp(expo) * mixing_density(v * v);
    };
    return integrate_or_throw(integrand, 0.0, 50.0, QuadOptions{1e-9, 8000});
}

double abs_moment_exp_mixing_log(int k) {
    if (k < 1) throw std::invalid_argument("abs_moment_exp_mixing: k must be >= 1");
    // ln[ 2^k / sqrt(pi) * Gamma(1+k) * Gamma(k+1/2) ]
    return k * std::log(2.0) - 0.5 * std::log(M_PI) + std::lgamma(k + 1.0) +
           std::lgamma(k + 0.5);
}

double abs_moment_exp_mixing(int k) {
    if (k > 80)
        throw std::overflow_error("abs_moment_exp_mixing: overflows past k = 80; "
                                  "use abs_moment_exp_mixing_log");
    return std::exp(abs_moment_exp_mixing_log(k));
}

}  // namespace pwlab
