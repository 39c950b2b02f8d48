#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace pwlab {

// Variance-mean mixture X = sigma sqrt(xi) Z + mu xi with Z standard normal
// and xi >= 0 drawn from the mixing density.
struct MixtureParams {
    double mu = 0.0;
    double sigma = 1.0;
};

struct ExponentialLaw {
    double rate = 1.0;
};

struct GammaLaw {
    double shape = 1.0;
    double rate = 1.0;
};

using MixingLaw = std::variant<ExponentialLaw, GammaLaw>;

double mixing_density(const MixingLaw& law, double s);
std::string mixing_label(const MixingLaw& law);

struct Sample {
    std::vector<double> values;
    std::uint64_t seed = 0;
    MixtureParams params_used;
    std::string mixing_label;
};

// Draws n observations; identical arguments reproduce bit-identical output.
// Each observation consumes xi first, then Z (one Box-Muller pair, cosine
// branch), so samples from the same seed agree on common prefixes when the
// mixing law draws a fixed number of uniforms (exponential does).
Sample sample_mixture(const MixtureParams& params, const MixingLaw& mixing, int n,
                      std::uint64_t seed);

// psi(u) = -i u mu + u^2 sigma^2 / 2; the mixture's Fourier transform is the
// mixing Laplace transform evaluated at psi.
std::complex<double> psi(const MixtureParams& params, double u);

// Inverse of psi on the curve (sigma = 1 form): xi(z) = sqrt(2z - mu^2) + i mu
// with the principal square root. On the curve itself this is real.
std::complex<double> xi(const MixtureParams& params, std::complex<double> z);

// (1/n) sum_j (i X_j)^k e^(i u X_j): the k-th derivative of the empirical
// Fourier transform, up to moderate k (direct double arithmetic).
std::complex<double> emp_fourier_deriv(const Sample& sample, int k, double u);

// Mixture density q(x) by quadrature over the mixing variable (the
// substitution s = v^2 removes the s^(-1/2) endpoint singularity).
double mixture_density(const MixtureParams& params,
                       const std::function<double(double)>& mixing_density, double x);

// E|X|^(2k) for the mu = 0, sigma = 1 exponential-mixing example:
// 2^k / sqrt(pi) * Gamma(1 + k) * Gamma(k + 1/2) = (2k)! / 2^k.
// The plain form overflows past k = 80; the log form is always available.
double abs_moment_exp_mixing(int k);
double abs_moment_exp_mixing_log(int k);

}  // namespace pwlab
