#include "qrng/autocorr.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include <omp.h>

#include "qrng/errors.hpp"

namespace qrng {

namespace {

int thread_cap() {
    int threads = omp_get_max_threads();
    if (const char* env = std::getenv("QRNG_THREADS")) {
        const int cap = std::atoi(env);
        if (cap > 0 && cap < threads) threads = cap;
    }
    return threads;
}

struct MeanSigma {
    double mean = 0.0;
    double sigma = 0.0;
};

MeanSigma mean_sigma(const std::vector<double>& values, const std::vector<bool>& excluded) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (excluded[i]) continue;
        sum += values[i];
        ++count;
    }
    MeanSigma out;
    if (count == 0) return out;
    out.mean = sum / static_cast<double>(count);
    if (count < 2) return out;
    double ss = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (excluded[i]) continue;
        const double d = values[i] - out.mean;
        ss += d * d;
    }
    out.sigma = std::sqrt(ss / static_cast<double>(count - 1));
    return out;
}

} // namespace

double LagScan::sigma_deviation(std::size_t lag) const {
    if (scan_sigma <= 0.0) return 0.0;
    return (at(lag) - scan_mean) / scan_sigma;
}

std::vector<double> lag_gammas(const BitStream& stream, std::size_t n_max, Parallelism parallelism) {
    if (n_max < 1) throw DomainError("lag_scan: n_max must be >= 1");
    if (stream.size() < 2 || n_max >= stream.size()) {
        throw DomainError("lag_scan: n_max " + std::to_string(n_max) + " must be below the stream length " +
                          std::to_string(stream.size()));
    }
    std::vector<double> gamma(n_max);
    const double n = static_cast<double>(stream.size());
    const auto lags = static_cast<std::ptrdiff_t>(n_max);
    if (parallelism == Parallelism::serial) {
        for (std::ptrdiff_t i = 0; i < lags; ++i) {
            gamma[i] = static_cast<double>(circular_xor_count(stream, static_cast<std::size_t>(i) + 1)) / n;
        }
        return gamma;
    }
#pragma omp parallel for schedule(dynamic, 4) num_threads(thread_cap())
    for (std::ptrdiff_t i = 0; i < lags; ++i) {
        gamma[i] = static_cast<double>(circular_xor_count(stream, static_cast<std::size_t>(i) + 1)) / n;
    }
    return gamma;
}

LagScan lag_scan(const BitStream& stream, std::size_t n_max, double flag_sigma, Parallelism parallelism) {
    if (!(flag_sigma > 0.0)) throw DomainError("lag_scan: flag_sigma must be > 0");
    LagScan scan;
    scan.n_max = n_max;
    scan.flag_sigma = flag_sigma;
    scan.gamma = lag_gammas(stream, n_max, parallelism);

    std::vector<bool> excluded(n_max, false);
    MeanSigma ms = mean_sigma(scan.gamma, excluded);
    for (int pass = 0; pass < 3; ++pass) {
        std::vector<bool> next(n_max, false);
        if (ms.sigma > 0.0) {
            for (std::size_t i = 0; i < n_max; ++i) {
                next[i] = std::abs(scan.gamma[i] - ms.mean) >= flag_sigma * ms.sigma;
            }
        }
        if (next == excluded) break;
        excluded = std::move(next);
        ms = mean_sigma(scan.gamma, excluded);
    }
    scan.scan_mean = ms.mean;
    scan.scan_sigma = ms.sigma;

    const double p = stream.meta().one_fraction.value_or(0.0);
    const double q = 2.0 * p * (1.0 - p);
    scan.analytic_sigma = std::sqrt(q * (1.0 - q)) / std::sqrt(static_cast<double>(stream.size()));

    if (scan.scan_sigma > 0.0) {
        for (std::size_t lag = 1; lag <= n_max; ++lag) {
            const double dev = scan.sigma_deviation(lag);
            if (std::abs(dev) >= flag_sigma) scan.outliers.push_back({lag, dev});
        }
    }
    return scan;
}

} // namespace qrng
