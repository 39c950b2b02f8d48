#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <variant>

#include "pwlab/logcx.hpp"

namespace pwlab {

// The observation locus {y + i c(y) : y > 0} in the right half-plane.
struct RealAxis {};

// c(y) = -mu sqrt(2y) / sigma, the curve traced by a variance-mean mixture's
// Fourier transform.
struct MixtureParabola {
    double mu;
    double sigma;
};

// User-supplied offset; the growth constant is unknown to us.
struct TabulatedCurve {
    std::function<double(double)> c;
};

using CurveSpec = std::variant<RealAxis, MixtureParabola, TabulatedCurve>;

// The imaginary offset c(y).
double curve_offset(const CurveSpec& curve, double y);

// The point y + i c(y) on the curve; y must be positive.
std::complex<double> curve_point(const CurveSpec& curve, double y);

// lim sup c^2(y)/y: 0 on the real axis, 2 mu^2/sigma^2 on the mixture
// parabola, unknown for tabulated curves.
std::optional<double> growth_constant(const CurveSpec& curve);

// Approximate-identity kernel concentrating at t = 1:
//   K_N(t, x) = (N + i x c(N/x))^(N+1) / N! * t^N * exp(-(N + i x c(N/x)) t)
// assembled in the log domain; modulus peaks near sqrt(N / 2 pi).
LogComplex kernel(const CurveSpec& curve, int n, double t, double x);

// Right truncation point for integrals of K_N: the first t > 1 where
// N (ln t - t + 1) / 2 < -60, beyond which the modulus is below ~1e-26.
double kernel_t_cut(int n);

// Closed form of the r-th kernel moment:
//   (1 + r/N) ... (1 + 1/N) / (1 + i (x/N) c(N/x))^r,
// exactly 1 for r = 0. The product formula holds for any integer r >= 0, but
// r >= 3 must be opted into via allow_general_r.
std::complex<double> moment_closed(const CurveSpec& curve, int n, int r, double x,
                                   bool allow_general_r = false);

// The same moment by adaptive quadrature of t^r K_N over (0, t_cut];
// absolute tolerance 1e-10. Independent route used to validate the closed
// form and the kernel assembly against each other.
std::complex<double> moment_quadrature(const CurveSpec& curve, int n, int r, double x);

// Integral of |K_N| over {t >= 0 : |t - 1| >= delta}; decays exponentially
// in N while the total mass stays 1.
double kernel_tail_mass(const CurveSpec& curve, int n, double x, double delta);

}  // namespace pwlab
