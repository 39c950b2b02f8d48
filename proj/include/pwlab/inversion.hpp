#pragma once

#include <complex>
#include <functional>
#include <string>

#include "pwlab/curves.hpp"
#include "pwlab/logcx.hpp"

namespace pwlab {

// Supplies the N-th derivative of a Laplace transform at points with
// positive real part, in log form so derivative growth ~ N! stays finite.
struct LaplaceOracle {
    std::function<LogComplex(int, std::complex<double>)> deriv;
    std::string name;
};

struct InversionResult {
    double x;
    int n;
    std::complex<double> value;
    double real_part;
};

struct ExponentialTransform {
    double lambda;
};

struct GammaTransform {
    double alpha;
    double beta;
};

// Closed-form derivative oracles for the two built-in transforms:
//   Exponential: L(z) = lambda / (lambda + z)
//   Gamma:       L(z) = (beta / (beta + z))^alpha
LaplaceOracle builtin_oracle(const ExponentialTransform& kind);
LaplaceOracle builtin_oracle(const GammaTransform& kind);

// p_N(x) = (-1)^N / N! * g(N/x)^(N+1) * L^(N)(g(N/x)) with g evaluated on
// the curve. All factors carried in the log domain; only the O(1) result is
// converted back, and a divergent configuration surfaces as numeric_error.
InversionResult invert(const LaplaceOracle& oracle, const CurveSpec& curve, int n, double x);

// The kernel-integral route to the same quantity:
//   p_N(x) = integral of p(t x) K_N(t, x) dt over (0, inf).
// Quadrature at 1e-9 absolute tolerance; the independent check on invert.
std::complex<double> invert_via_kernel(const std::function<double(double)>& density,
                                       const CurveSpec& curve, int n, double x);

}  // namespace pwlab
