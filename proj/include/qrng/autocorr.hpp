#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "qrng/bitstream.hpp"

namespace qrng {

/// Circular autocorrelation (1/N) * sum_i X_i xor X_{(i+n) mod N}, word-parallel.
/// Throws DomainError unless size >= 2 and 1 <= lag < size.
double autocorrelation(const BitStream& stream, std::size_t lag);

/// Bit-by-bit evaluation of the same sum. Reference for tests and benchmarks.
double autocorrelation_naive(const BitStream& stream, std::size_t lag);

/// Raw disagreement count behind autocorrelation(): sum_i X_i xor X_{(i+lag) mod N}.
std::size_t circular_xor_count(const BitStream& stream, std::size_t lag);

struct LagOutlier {
    std::size_t lag;
    double sigma_deviation; ///< (gamma - scan_mean) / scan_sigma, signed
};

struct LagScan {
    std::size_t n_max = 0;
    double flag_sigma = 5.0;
    std::vector<double> gamma; ///< gamma[n-1] = autocorrelation at lag n
    double scan_mean = 0.0;
    double scan_sigma = 0.0;
    /// i.i.d. null: sqrt(2p(1-p)(1-2p(1-p))) / sqrt(N) with p the stream's one-fraction.
    double analytic_sigma = 0.0;
    std::vector<LagOutlier> outliers;

    double at(std::size_t lag) const { return gamma.at(lag - 1); }
    /// (gamma(lag) - scan_mean) / scan_sigma.
    double sigma_deviation(std::size_t lag) const;
};

enum class Parallelism { serial, openmp };

/**
 * Gamma(n) for n = 1..n_max, a robust mean/sigma over the scan and the lags
 * deviating by flag_sigma or more.
 *
 * The mean and sigma exclude flagged lags and are re-estimated until the
 * flagged set stops changing (at most three passes). The OpenMP path caps its
 * thread count with QRNG_THREADS when set; both paths give identical results.
 */
LagScan lag_scan(const BitStream& stream, std::size_t n_max, double flag_sigma = 5.0,
                 Parallelism parallelism = Parallelism::openmp);

/// Just the gamma values, used by lag_scan and the benchmark.
std::vector<double> lag_gammas(const BitStream& stream, std::size_t n_max, Parallelism parallelism);

} // namespace qrng
