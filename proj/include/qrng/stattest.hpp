#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qrng/autocorr.hpp"
#include "qrng/bitstream.hpp"

namespace qrng {

enum class Verdict { pass, fail, not_applicable };

std::string_view to_string(Verdict verdict) noexcept;

/// Result of one statistical test on one stream.
struct TestEntry {
    std::string name;
    std::vector<std::pair<std::string, double>> params;
    double statistic = 0.0;
    double p_value = 0.0; ///< smallest p-value when the test produces several
    Verdict verdict = Verdict::not_applicable;
    std::size_t bits_consumed = 0;
    /// Secondary values (extra p-values, expectations, block entropy).
    std::vector<std::pair<std::string, double>> details;
    /// Every p-value the test produced, in a fixed order.
    std::vector<double> p_values;
    /// Set when verdict is not_applicable because the stream was too short.
    bool insufficient_data = false;
    std::string note;

    double detail(std::string_view key) const;
};

/// Monobit: S = sum(2X-1), s = |S|/sqrt(N), p = erfc(s/sqrt(2)). Needs N >= 100.
TestEntry frequency_test(const BitStream& stream, double alpha = 0.01);

/// Generalized serial test on overlapping circular m-grams, 2 <= m <= 16, N >= 100*2^m.
TestEntry serial_test(const BitStream& stream, unsigned m = 2, double alpha = 0.01);

/// Runs test; not applicable (not a failure) when |pi - 1/2| >= 2/sqrt(N).
TestEntry runs_test(const BitStream& stream, double alpha = 0.01);

/// Non-overlapping m-block Shannon entropy (bits per bit) plus approximate entropy ApEn(m).
/// The verdict comes from ApEn. Needs 1 <= m <= 16 and N >= 100*2^m.
TestEntry entropy_test(const BitStream& stream, unsigned m = 8, double alpha = 0.01);

/// Embedded (expectation, variance) of the Maurer statistic for L = 1..16.
std::pair<double, double> maurer_constants(unsigned L);

struct MaurerOptions {
    unsigned L = 7;
    std::optional<std::size_t> Q; ///< defaults to 10 * 2^L
    /// Allows L < 6 and any K >= 1; uses the uncorrected variance (c = 1).
    bool oracle_mode = false;
};

/// Maurer's universal statistical test.
TestEntry maurer_universal(const BitStream& stream, const MaurerOptions& options, double alpha = 0.01);

/// Largest L in [6, 16] whose data requirement the stream meets, if any.
std::optional<unsigned> maurer_auto_block(std::size_t n_bits);

struct BatteryConfig {
    double alpha = 0.01;
    bool frequency = true;
    bool serial = true;
    bool runs = true;
    bool entropy = true;
    bool maurer = true;
    bool autocorr = true;
    unsigned serial_m = 2;
    unsigned entropy_m = 8;
    std::optional<unsigned> maurer_L; ///< auto when empty
    std::size_t max_lag = 2000;
    double flag_sigma = 5.0;
    Parallelism parallelism = Parallelism::openmp;
};

struct TestReport {
    double alpha = 0.01;
    double corrected_alpha = 0.01; ///< alpha / number of p-values (Bonferroni)
    bool overall_pass = false;
    std::vector<TestEntry> tests;
    std::optional<LagScan> lag_scan;
    bool lag_scan_insufficient = false;
    Origin stream_origin = Origin::file;
    std::size_t stream_length = 0;

    /// Names of tests skipped for lack of data.
    std::vector<std::string> insufficient_tests() const;
    const TestEntry* find(std::string_view name) const;
};

/**
 * Runs every enabled test in a fixed order (frequency, serial, runs, entropy,
 * maurer, then the lag scan). Tests that lack data become not-applicable
 * entries. The overall verdict passes when at least one test ran, every
 * p-value clears alpha / (number of p-values), and the lag scan flags nothing.
 */
TestReport run_battery(const BitStream& stream, const BatteryConfig& config = {});

} // namespace qrng
