#include "pwlab/estimator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "pwlab/errors.hpp"
#include "pwlab/logcx.hpp"
#include "pwlab/rng.hpp"

namespace pwlab {

namespace {

using detail::pi_l;

struct ScaledSample {
    std::vector<long double> log_abs;  // ln|X_j / sigma|; -inf marks X_j = 0
    std::vector<long double> phase;    // phase of i * X_j: +pi/2 or -pi/2
    std::vector<long double> value;    // X_j / sigma
};

ScaledSample rescale(const Sample& sample, double sigma) {
    ScaledSample s;
    const size_t n = sample.values.size();
    s.log_abs.resize(n);
    s.phase.resize(n);
    s.value.resize(n);
    for (size_t j = 0; j < n; ++j) {
        if (!std::isfinite(sample.values[j]))
            throw std::invalid_argument("estimate: sample contains a non-finite value");
        const long double v = static_cast<long double>(sample.values[j]) / sigma;
        s.value[j] = v;
        s.log_abs[j] = v == 0.0L ? -std::numeric_limits<long double>::infinity()
                                 : std::log(std::fabs(v));
        s.phase[j] = v >= 0.0L ? pi_l / 2.0L : -pi_l / 2.0L;
    }
    return s;
}

std::complex<double> estimate_point(const ScaledSample& data, long double mu, int order,
                                    double x, const BellTable& bell) {
    const int n_terms = order;
    const long double y = static_cast<long double>(n_terms) / x;
    const long double u = std::sqrt(2.0L * y);
    // w = u - i mu is the principal square root of 2 g(N/x) - mu^2
    const long double log_w = 0.5L * std::log(u * u + mu * mu);
    const long double arg_w = std::atan2(-mu, u);

    // Sample-independent factor of each k-term. The data-dependent phase of
    // (i X_j)^k is k * (+-pi/2), so each term's phasor takes one of two
    // values per k; precomputing both leaves a single exp() per term in the
    // sample loop. The loop itself is logcx::sum unrolled: rescale by the
    // running max, accumulate as ordinary complex, restore the offset.
    std::vector<long double> term_log(n_terms + 1);
    std::vector<double> phasor_pos_re(n_terms + 1), phasor_pos_im(n_terms + 1);
    std::vector<double> phasor_neg_re(n_terms + 1), phasor_neg_im(n_terms + 1);
    for (int k = 1; k <= n_terms; ++k) {
        term_log[k] = static_cast<long double>(bell.log_f(n_terms, k)) +
                      (k - 2.0L * n_terms) * log_w;
        const long double arg = (n_terms - k) * pi_l + (k - 2.0L * n_terms) * arg_w;
        phasor_pos_re[k] = static_cast<double>(std::cos(arg + k * (pi_l / 2.0L)));
        phasor_pos_im[k] = static_cast<double>(std::sin(arg + k * (pi_l / 2.0L)));
        phasor_neg_re[k] = static_cast<double>(std::cos(arg - k * (pi_l / 2.0L)));
        phasor_neg_im[k] = static_cast<double>(std::sin(arg - k * (pi_l / 2.0L)));
    }

    // Per-sample modulus/phase in double: the estimator's own statistical
    // noise is many orders above the ~1e-14 this costs, and it halves the
    // transcendental work on the n-length loops.
    const size_t n = data.value.size();
    double outer_max = -std::numeric_limits<double>::infinity();
    std::vector<double> s_log(n), s_arg(n);
    for (size_t j = 0; j < n; ++j) {
        const long double lx = data.log_abs[j];
        if (std::isinf(lx)) {  // X_j = 0 contributes nothing
            s_log[j] = -std::numeric_limits<double>::infinity();
            s_arg[j] = 0.0;
            continue;
        }
        long double m = term_log[1] + lx;
        for (int k = 2; k <= n_terms; ++k) {
            const long double la = term_log[k] + k * lx;
            if (la > m) m = la;
        }
        const bool negative = data.phase[j] < 0.0L;
        const double* ph_re = negative ? phasor_neg_re.data() : phasor_pos_re.data();
        const double* ph_im = negative ? phasor_neg_im.data() : phasor_pos_im.data();
        double re = 0.0, im = 0.0;
        for (int k = 1; k <= n_terms; ++k) {
            const double scale = std::exp(static_cast<double>(term_log[k] + k * lx - m));
            re += scale * ph_re[k];
            im += scale * ph_im[k];
        }
        if (re == 0.0 && im == 0.0) {
            s_log[j] = -std::numeric_limits<double>::infinity();
            s_arg[j] = 0.0;
            continue;
        }
        s_log[j] = static_cast<double>(m) + 0.5 * std::log(re * re + im * im);
        // phase of S_j plus the unit-modulus factor e^{i u X_j}
        s_arg[j] = std::atan2(im, re) + static_cast<double>(u * data.value[j]);
        if (s_log[j] > outer_max) outer_max = s_log[j];
    }

    // prefactor (-1)^N / N! * g(N/x)^(N+1), with g = y - i mu u on this curve
    const LogComplex prefactor =
        mul(from_log_polar(-std::lgamma(n_terms + 1.0L), n_terms * pi_l),
            pow_int(from_log_polar(0.5L * std::log(y * y + mu * mu * u * u),
                                   std::atan2(-mu * u, y)),
                    n_terms + 1));

    if (std::isinf(outer_max))  // every X_j was zero
        return {0.0, 0.0};

    double re = 0.0, im = 0.0;
    for (size_t j = 0; j < n; ++j) {
        if (std::isinf(s_log[j])) continue;
        const double scale = std::exp(s_log[j] - outer_max);
        re += scale * std::cos(s_arg[j]);
        im += scale * std::sin(s_arg[j]);
    }
    const LogComplex average =
        (re == 0.0 && im == 0.0)
            ? log_zero()
            : LogComplex{static_cast<long double>(outer_max) +
                             std::log(std::hypot(static_cast<long double>(re),
                                                 static_cast<long double>(im))) -
                             std::log(static_cast<long double>(n)),
                         std::atan2(static_cast<long double>(im),
                                    static_cast<long double>(re))};

    try {
        return to_complex_checked(mul(prefactor, average));
    } catch (const std::overflow_error&) {
        throw numeric_error("estimate: |p_hat| exceeds double range at x=" + std::to_string(x) +
                            "; the prefactor grows without bound as x -> 0, so reduce N or "
                            "evaluate at larger x");
    }
}

void run_indexed(int threads, size_t count, const std::function<void(size_t)>& work) {
    if (threads <= 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) work(i);
        return;
    }
    const int n_workers = static_cast<int>(std::min<size_t>(threads, count));
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w)
        pool.emplace_back([&, w] {
            for (size_t i = w; i < count; i += n_workers) work(i);
        });
    for (auto& t : pool) t.join();
}

}  // namespace

EstimateResult estimate(const Sample& sample, const EstimatorConfig& config,
                        const BellTable& bell) {
    if (config.order < 1) throw std::invalid_argument("estimate: order must be >= 1");
    if (bell.n_max() < config.order)
        throw std::invalid_argument("estimate: Bell table only covers N <= " +
                                    std::to_string(bell.n_max()));
    if (sample.values.empty()) throw std::invalid_argument("estimate: empty sample");
    if (config.x_grid.empty()) throw std::invalid_argument("estimate: empty x grid");
    for (double x : config.x_grid)
        if (!(x > 0.0)) throw std::invalid_argument("estimate: grid points must be positive");

    const auto t0 = std::chrono::steady_clock::now();
    const ScaledSample data = rescale(sample, config.params.sigma);
    const long double mu = static_cast<long double>(config.params.mu) / config.params.sigma;

    EstimateResult out;
    out.x = config.x_grid;
    out.p_hat.resize(config.x_grid.size());
    out.p_hat_real.resize(config.x_grid.size());
    out.order = config.order;
    out.sample_size = static_cast<long>(sample.values.size());

    std::exception_ptr failure;
    std::mutex failure_mutex;
    run_indexed(config.threads, config.x_grid.size(), [&](size_t i) {
        try {
            out.p_hat[i] = estimate_point(data, mu, config.order, config.x_grid[i], bell);
            out.p_hat_real[i] = out.p_hat[i].real();
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    });
    if (failure) std::rethrow_exception(failure);

    out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

int select_n(const NSelector& selector, long sample_size) {
    if (sample_size < 3)
        throw std::invalid_argument("select_n: needs n >= 3 so ln ln n is positive");
    const double log_n = std::log(static_cast<double>(sample_size));
    const double raw = std::visit(
        [log_n]<typename R>(const R& rule) -> double {
            if constexpr (std::is_same_v<R, SubexponentialRule>) {
                const double log_ac = std::log(rule.moment_scale * rule.variance_base);
                if (!(log_ac > 0.0))
                    throw std::invalid_argument("select_n: requires A*C > 1");
                return log_n / log_ac - 2.0 * rule.bias_rate / log_ac * std::log(log_n);
            } else {
                if (!(rule.moment_power > 1.0))
                    throw std::invalid_argument("select_n: requires b > 1");
                const double shifted = (2.0 * rule.bias_rate + log_n) / (rule.moment_power - 1.0);
                if (!(shifted > 1.0))
                    throw std::invalid_argument("select_n: (2 rho + ln n)/(b - 1) must exceed 1");
                return shifted / std::log(shifted) - 2.0 * rule.bias_rate / (rule.moment_power - 1.0);
            }
        },
        selector);
    if (!std::isfinite(raw)) throw std::invalid_argument("select_n: rule evaluated to non-finite N");
    const long rounded = std::lround(std::floor(raw + 0.5));  // ties away from .5 upward
    return static_cast<int>(std::max(1L, rounded));
}

BenchmarkReport benchmark_rmse_with_seeds(const MixtureParams& params, const MixingLaw& mixing,
                                          const std::function<double(double)>& true_density,
                                          const std::vector<long>& sample_sizes,
                                          const std::vector<int>& orders,
                                          const std::vector<double>& x_grid,
                                          const std::vector<std::uint64_t>& replicate_seeds,
                                          int threads) {
    if (replicate_seeds.size() < 2)
        throw std::invalid_argument("benchmark_rmse: needs at least 2 replicates");
    if (sample_sizes.empty() || orders.empty() || x_grid.empty())
        throw std::invalid_argument("benchmark_rmse: empty sample_sizes, orders, or x_grid");

    const int max_order = *std::max_element(orders.begin(), orders.end());
    const BellTable bell = build_table(max_order);
    const size_t reps = replicate_seeds.size();
    const size_t n_x = x_grid.size();

    BenchmarkReport report;
    report.replicates = static_cast<int>(reps);

    std::vector<double> truth(n_x);
    for (size_t i = 0; i < n_x; ++i) truth[i] = true_density(x_grid[i]);

    for (long n : sample_sizes) {
        // re_values[rep][order_index][x_index]
        std::vector<std::vector<std::vector<double>>> re_values(
            reps, std::vector<std::vector<double>>(orders.size(), std::vector<double>(n_x)));

        std::exception_ptr failure;
        std::mutex failure_mutex;
        run_indexed(threads, reps, [&](size_t r) {
            try {
                const Sample sample =
                    sample_mixture(params, mixing, static_cast<int>(n), replicate_seeds[r]);
                for (size_t oi = 0; oi < orders.size(); ++oi) {
                    EstimatorConfig cfg{params, orders[oi], x_grid, true, 1};
                    re_values[r][oi] = estimate(sample, cfg, bell).p_hat_real;
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
        if (failure) std::rethrow_exception(failure);

        for (size_t oi = 0; oi < orders.size(); ++oi) {
            BenchmarkCell cell;
            cell.sample_size = n;
            cell.order = orders[oi];
            double mse_sum = 0.0;
            for (size_t i = 0; i < n_x; ++i) {
                // mean computed relative to the first replicate, so identical
                // replicates produce an exactly-zero spread
                const double base = re_values[0][oi][i];
                double mean = 0.0;
                for (size_t r = 0; r < reps; ++r) mean += re_values[r][oi][i] - base;
                mean = base + mean / static_cast<double>(reps);
                double mse = 0.0, var = 0.0;
                for (size_t r = 0; r < reps; ++r) {
                    const double v = re_values[r][oi][i];
                    mse += (v - truth[i]) * (v - truth[i]);
                    var += (v - mean) * (v - mean);
                }
                mse /= static_cast<double>(reps);
                var /= static_cast<double>(reps - 1);
                mse_sum += mse;
                cell.points.push_back(BenchmarkPoint{x_grid[i], mean, std::sqrt(mse), var});
            }
            cell.aggregated_rmse = std::sqrt(mse_sum / static_cast<double>(n_x));
            report.cells.push_back(std::move(cell));
        }
    }
    return report;
}

BenchmarkReport benchmark_rmse(const MixtureParams& params, const MixingLaw& mixing,
                               const std::function<double(double)>& true_density,
                               const std::vector<long>& sample_sizes,
                               const std::vector<int>& orders, const std::vector<double>& x_grid,
                               int replicates, std::uint64_t seed, int threads) {
    if (replicates < 2) throw std::invalid_argument("benchmark_rmse: needs at least 2 replicates");
    std::vector<std::uint64_t> seeds(replicates);
    for (int r = 0; r < replicates; ++r)
        seeds[r] = substream_seed(seed, static_cast<std::uint64_t>(r));
    BenchmarkReport report = benchmark_rmse_with_seeds(params, mixing, true_density, sample_sizes,
                                                       orders, x_grid, seeds, threads);
    report.seed = seed;
    return report;
}

}  // namespace pwlab
