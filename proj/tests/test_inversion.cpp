#include "pwlab/inversion.hpp"

#include <cmath>
#include <complex>

#include <doctest.h>

#include "pwlab/errors.hpp"

using namespace pwlab;

namespace {

double exp_density(double u) { return std::exp(-u); }
double gamma21_density(double u) { return u * std::exp(-u); }  // Gamma(2,1)

// classical closed form for the exponential transform on the real axis
long double classical_exp_inverse(int n, double x) {
    return std::pow(n / (n + static_cast<long double>(x)), n + 1);
}

}  // namespace

TEST_SUITE_BEGIN("inversion");

TEST_CASE("builtin oracle values") {
    const LaplaceOracle exp1 = builtin_oracle(ExponentialTransform{1.0});
    const auto half = to_complex(exp1.deriv(0, {1.0, 0.0}));
    CHECK(half.real() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(half.imag() == doctest::Approx(0.0));

    // second derivative at z -> 0+ equals the second moment 2! of Exp(1)
    const auto second = to_complex(exp1.deriv(2, {1e-12, 0.0}));
    CHECK(second.real() == doctest::Approx(2.0).epsilon(1e-9));

    // Gamma(1, 1) degenerates to Exponential(1)
    const LaplaceOracle gamma11 = builtin_oracle(GammaTransform{1.0, 1.0});
    for (int n : {0, 1, 3, 10}) {
        for (const std::complex<double> z : {std::complex<double>{0.5, 0.0},
                                             std::complex<double>{2.0, -0.7},
                                             std::complex<double>{10.0, 3.0}}) {
            const auto a = to_complex(exp1.deriv(n, z));
            const auto b = to_complex(gamma11.deriv(n, z));
            CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
        }
    }

    CHECK_THROWS_AS(builtin_oracle(ExponentialTransform{0.0}), std::invalid_argument);
    CHECK_THROWS_AS(builtin_oracle(GammaTransform{-1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(exp1.deriv(0, {-1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("transforms of densities have modulus at most 1 on the positive axis") {
    for (const LaplaceOracle& oracle : {builtin_oracle(ExponentialTransform{1.0}),
                                        builtin_oracle(ExponentialTransform{3.5}),
                                        builtin_oracle(GammaTransform{2.0, 1.0})}) {
        for (double z : {0.01, 0.5, 1.0, 10.0, 250.0})
            CHECK(oracle.deriv(0, {z, 0.0}).log_abs <= 1e-15L);
    }
}

TEST_CASE("classical closed form on the real axis") {
    const LaplaceOracle exp1 = builtin_oracle(ExponentialTransform{1.0});
    CHECK(invert(exp1, RealAxis{}, 1, 1.0).real_part == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(invert(exp1, RealAxis{}, 4, 1.0).real_part ==
          doctest::Approx(0.32768).epsilon(1e-13));

    for (int n : {1, 4, 50, 400}) {
        for (double x : {0.5, 1.0, 2.0}) {
            const double want = static_cast<double>(classical_exp_inverse(n, x));
            const InversionResult got = invert(exp1, RealAxis{}, n, x);
            CHECK(std::fabs(got.real_part - want) <= 1e-12 * want);
            CHECK(std::fabs(got.value.imag()) <= 1e-12);
        }
    }

    // O(1/N) approach to the true density value
    CHECK(std::fabs(invert(exp1, RealAxis{}, 400, 1.0).real_part - std::exp(-1.0)) <= 5e-4);
}

TEST_CASE("mu = 0 parabola is the real axis") {
    const LaplaceOracle exp1 = builtin_oracle(ExponentialTransform{1.0});
    for (int n : {2, 9, 33}) {
        for (double x : {0.4, 1.0, 3.0}) {
            const auto a = invert(exp1, RealAxis{}, n, x);
            const auto b = invert(exp1, MixtureParabola{0.0, 1.0}, n, x);
            CHECK(a.value.real() == doctest::Approx(b.value.real()).epsilon(1e-14));
            CHECK(std::fabs(b.value.imag()) <= 1e-12);
        }
    }
}

TEST_CASE("kernel-integral route reproduces the analytic route") {
    const LaplaceOracle exp1 = builtin_oracle(ExponentialTransform{1.0});
    const auto direct10 = invert(exp1, RealAxis{}, 10, 1.0);
    const auto quad10 = invert_via_kernel(exp_density, RealAxis{}, 10, 1.0);
    CHECK(std::abs(quad10 - direct10.value) <= 1e-7);

    const CurveSpec curve = MixtureParabola{0.1, 1.0};
    const auto direct30 = invert(exp1, curve, 30, 1.0);
    const auto quad30 = invert_via_kernel(exp_density, curve, 30, 1.0);
    CHECK(std::abs(quad30 - direct30.value) <= 1e-7);

    // linearity of the integral route
    const auto doubled =
        invert_via_kernel([](double u) { return 2.0 * std::exp(-u); }, curve, 12, 0.8);
    const auto base = invert_via_kernel(exp_density, curve, 12, 0.8);
    CHECK(std::abs(doubled - 2.0 * base) <= 1e-12);
}

TEST_CASE("both routes agree across oracles, curves, and orders") {
    const LaplaceOracle exp1 = builtin_oracle(ExponentialTransform{1.0});
    const LaplaceOracle gamma21 = builtin_oracle(GammaTransform{2.0, 1.0});
    const struct {
        const LaplaceOracle* oracle;
        double (*density)(double);
    } pairs[] = {{&exp1, exp_density}, {&gamma21, gamma21_density}};

    for (const auto& [oracle, density] : pairs) {
        for (const CurveSpec& curve :
             {CurveSpec{RealAxis{}}, CurveSpec{MixtureParabola{0.1, 1.0}}}) {
            for (int n : {5, 20}) {
                for (double x : {0.5, 2.0}) {
                    const auto a = invert(*oracle, curve, n, x);
                    const auto b = invert_via_kernel(density, curve, n, x);
                    CHECK(std::abs(a.value - b) <= 1e-6);
                }
            }
        }
    }
}

TEST_CASE("error halves when the order doubles on a flat curve") {
    const LaplaceOracle exp1 = builtin_oracle(ExponentialTransform{1.0});
    const double truth = std::exp(-1.0);
    for (int n : {25, 50, 100}) {
        const double e1 = std::fabs(invert(exp1, MixtureParabola{0.0, 1.0}, n, 1.0).real_part - truth);
        const double e2 =
            std::fabs(invert(exp1, MixtureParabola{0.0, 1.0}, 2 * n, 1.0).real_part - truth);
        const double ratio = e2 / e1;
        CHECK(ratio >= 0.4);
        CHECK(ratio <= 0.65);
    }
}

TEST_CASE("real-part error decays monotonically on the curved locus") {
    const LaplaceOracle exp1 = builtin_oracle(ExponentialTransform{1.0});
    const CurveSpec curve = MixtureParabola{0.1, 1.0};
    const double truth = std::exp(-1.0);
    double prev = std::numeric_limits<double>::infinity();
    for (int n : {10, 20, 40, 80, 160}) {
        const double err = std::fabs(invert(exp1, curve, n, 1.0).real_part - truth);
        CHECK(err < prev);
        prev = err;
    }
}

TEST_CASE("input validation") {
    const LaplaceOracle exp1 = builtin_oracle(ExponentialTransform{1.0});
    CHECK_THROWS_AS(invert(exp1, RealAxis{}, 0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(invert(exp1, RealAxis{}, 3, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(invert_via_kernel(exp_density, RealAxis{}, 201, 1.0), std::invalid_argument);
}

TEST_SUITE_END();
