#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "pwlab/bell.hpp"
#include "pwlab/mixture.hpp"

namespace pwlab {

struct EstimatorConfig {
    MixtureParams params;
    int order = 1;                 // derivative order N
    std::vector<double> x_grid;    // evaluation points, all > 0
    bool take_real_part = true;    // downstream consumers report Re by default
    int threads = 1;
};

struct EstimateResult {
    std::vector<double> x;
    std::vector<std::complex<double>> p_hat;
    std::vector<double> p_hat_real;
    int order = 0;
    long sample_size = 0;
    double wall_time = 0.0;        // seconds; informational only
};

// Empirical mixing-density estimator: for each grid point x, with
// u = sqrt(2N/x) and w = u - i mu (the on-curve square root of 2g - mu^2),
//
//   p_hat(x) = (-1)^N / N! * g(N/x)^(N+1)
//              * (1/n) sum_j e^(i u X_j)
//                sum_{k=1}^{N} (i X_j)^k (-1)^(N-k) w^(k-2N) F(N,k).
//
// Data and mu are rescaled by sigma first (the mixing density is invariant
// under that reduction). The inner k-sum runs in the log domain; the outer
// j-average rescales by the largest per-sample magnitude. Expectation over
// samples equals invert() of the mixing law's transform on the same curve.
EstimateResult estimate(const Sample& sample, const EstimatorConfig& config,
                        const BellTable& bell);

// beta_2k <= A^k k^k regime: N = ln n / ln(AC) - (2 rho / ln(AC)) ln ln n.
// The variance base cannot be derived in closed form, so it is a tuning
// input; the defaults suit the shipped exponential-mixing example.
struct SubexponentialRule {
    double moment_scale = 2.0;   // A
    double variance_base = 2.0;  // C, from the variance bound; A*C > 1 required
    double bias_rate = 1.0;      // rho in R_N = O(N^-rho); 1/2 when mu != 0
};

// beta_2k <= A^k k^(bk) regime:
// N = (2 rho + ln n) / ((b-1) ln((2 rho + ln n)/(b-1))) - 2 rho / (b-1).
struct HeavyTailedRule {
    double moment_power = 2.0;  // b > 1
    double bias_rate = 1.0;     // rho; 1/2 when mu != 0
};

using NSelector = std::variant<SubexponentialRule, HeavyTailedRule>;

// Evaluates the selected rule, rounds to nearest (ties up), clamps at 1.
int select_n(const NSelector& selector, long sample_size);

struct BenchmarkPoint {
    double x;
    double mean_re;  // replicate mean of Re p_hat(x)
    double rmse;     // vs true density, over replicates
    double mc_var;   // unbiased replicate variance of Re p_hat(x)
};

struct BenchmarkCell {
    long sample_size;
    int order;
    double aggregated_rmse;  // root of grid-mean MSE
    std::vector<BenchmarkPoint> points;
};

struct BenchmarkReport {
    std::vector<BenchmarkCell> cells;
    int replicates = 0;
    std::uint64_t seed = 0;
};

// Simulates `replicates` independent samples per sample size, estimates on
// every (sample size, order) cell, and scores Re p_hat against the true
// mixing density. Replicate r draws its stream from substream_seed(seed, r),
// so cells share randomness across orders and sample sizes by construction.
BenchmarkReport benchmark_rmse(const MixtureParams& params, const MixingLaw& mixing,
                               const std::function<double(double)>& true_density,
                               const std::vector<long>& sample_sizes,
                               const std::vector<int>& orders,
                               const std::vector<double>& x_grid, int replicates,
                               std::uint64_t seed, int threads = 1);

// Same harness with caller-chosen replicate seeds (repeating a seed must
// reproduce the replicate exactly, collapsing the spread to zero).
BenchmarkReport benchmark_rmse_with_seeds(const MixtureParams& params,
                                          const MixingLaw& mixing,
                                          const std::function<double(double)>& true_density,
                                          const std::vector<long>& sample_sizes,
                                          const std::vector<int>& orders,
                                          const std::vector<double>& x_grid,
                                          const std::vector<std::uint64_t>& replicate_seeds,
                                          int threads = 1);

}  // namespace pwlab
